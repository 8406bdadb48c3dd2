//! The verification suites behind `chipfire verify` and the acceptance
//! tests: exhaustive oracle-equivalence checks over the tree catalog plus
//! seeded randomized suites, one per structural property of the dynamics.
//! Each check returns a [`CheckResult`] rather than panicking, so a full
//! report is always produced.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog;
use crate::enumeration::{enumerate_src, verify_tree_independence_guarded, CountTable};
use crate::error::{Error, Result};
use crate::firing::{
    apply_sequence, apply_sequence_unchecked, fire, is_legal_fire, reduce_sequence, ChipConfig,
    FiringSequence,
};
use crate::graph::{Graph, Tree};
use crate::selfreach::{
    is_self_reachable_general, is_self_reachable_oracle, is_self_reachable_tree, reach_witness,
    reachable_set, witness_permutation,
};

/// Bounds and seeds for a verification run.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Largest catalog size for the exhaustive checks (1..=7).
    pub max_n: usize,
    /// Largest chip total for the exhaustive checks.
    pub max_chips: usize,
    pub seed: u64,
    /// Iterations per randomized suite.
    pub cases: usize,
    pub subtree_guard: usize,
    pub state_guard: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: 6,
            max_chips: 6,
            seed: 0,
            cases: 1000,
            subtree_guard: crate::DEFAULT_SUBTREE_GUARD,
            state_guard: crate::DEFAULT_STATE_GUARD,
        }
    }
}

/// Outcome of one named check: how many individual assertions ran, how many
/// failed, and what the first failure looked like.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn total_failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.failures == 0 {
                writeln!(f, "ok   {} ({} cases)", c.name, c.cases)?;
            } else {
                writeln!(
                    f,
                    "FAIL {} ({}/{} failed): {}",
                    c.name,
                    c.failures,
                    c.cases,
                    c.first_failure.as_deref().unwrap_or("no detail")
                )?;
            }
        }
        if self.all_pass() {
            writeln!(f, "all checks passed")
        } else {
            writeln!(f, "{} checks failed", self.checks.iter().filter(|c| c.failures > 0).count())
        }
    }
}

/// Runs every suite. Usage errors (catalog bound) abort; check failures are
/// reported, not raised.
pub fn verify_suite(opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.max_n == 0 || opts.max_n > 7 {
        return Err(Error::Usage(format!(
            "max_n must be between 1 and 7 (tree catalog bound), got {}",
            opts.max_n
        )));
    }
    Ok(VerifyReport {
        checks: vec![
            check_decider_agreement(opts)?,
            check_single_orbit(opts)?,
            check_counts_match(opts)?,
            check_class_partition(opts)?,
            check_bijections(opts)?,
            check_count_monotonicity(opts)?,
            check_conservation(opts)?,
            check_order_independence(opts)?,
            check_additivity(opts)?,
            check_legality_monotonicity(opts)?,
            check_disjoint_concatenation(opts)?,
            check_permutation_identity(opts)?,
            check_first_occurrence_reduction(opts)?,
            check_leaf_neighbor_pairing(opts)?,
            check_witness_from_any_start(opts)?,
            check_closure(opts)?,
            check_subtree_restriction(opts)?,
            check_leaf_transfer(opts)?,
            check_domination(opts)?,
        ],
    })
}

// ---------------------------------------------------------------------------
// exhaustive checks over the tree catalog

fn for_each_composition<F>(n: usize, total: u64, f: &mut F) -> Result<()>
where
    F: FnMut(&[u64]) -> Result<()>,
{
    fn rec<F>(current: &mut Vec<u64>, idx: usize, remaining: u64, f: &mut F) -> Result<()>
    where
        F: FnMut(&[u64]) -> Result<()>,
    {
        if idx == current.len() - 1 {
            current[idx] = remaining;
            f(current)?;
            current[idx] = 0;
            return Ok(());
        }
        for v in 0..=remaining {
            current[idx] = v;
            rec(current, idx + 1, remaining - v, f)?;
        }
        current[idx] = 0;
        Ok(())
    }
    rec(&mut vec![0u64; n], 0, total, f)
}

/// The four deciders — subtree-minimum DP, exhaustive subtree scan, greedy
/// permutation search, BFS self-membership — agree on every configuration
/// with at most `max_chips` chips on every catalog tree.
pub fn check_decider_agreement(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new(
        "self-reachability deciders agree (subtree DP / subtree scan / greedy / BFS)",
    );
    for n in 1..=opts.max_n {
        for entry in catalog::trees_on(n)? {
            let t = &entry.tree;
            for total in 0..=opts.max_chips as u64 {
                for_each_composition(n, total, &mut |chips| {
                    let c = ChipConfig::new(chips.to_vec()).expect("small totals");
                    let fast = is_self_reachable_tree(t, &c)?;
                    let scan = is_self_reachable_oracle(t, &c, opts.subtree_guard)?;
                    let greedy = is_self_reachable_general(t.graph(), &c)?;
                    let bfs = reachable_set(t.graph(), &c, opts.state_guard)?.contains(&c);
                    result.record(fast == scan && scan == greedy && greedy == bfs, || {
                        format!(
                            "{} (n={n}) config {c}: DP={fast} scan={scan} greedy={greedy} bfs={bfs}",
                            entry.name
                        )
                    });
                    Ok(())
                })?;
            }
        }
    }
    Ok(result)
}

/// On a tree, the reachable set of a self-reachable configuration is exactly
/// the set of equal-total self-reachable configurations, and an explicit
/// witness connects every ordered pair.
pub fn check_single_orbit(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new(
        "equal-total self-reachable configurations are mutually reachable with valid witnesses",
    );
    for n in 1..=opts.max_n.min(6) {
        for entry in catalog::trees_on(n)? {
            let t = &entry.tree;
            for total in 0..=opts.max_chips.min(5) {
                let srcs = enumerate_src(t, total, opts.state_guard)?;
                let src_set: BTreeSet<ChipConfig> = srcs.iter().cloned().collect();
                for s in &srcs {
                    let reached = reachable_set(t.graph(), s, opts.state_guard)?;
                    result.record(reached == src_set, || {
                        format!(
                            "{} (n={n}) from {s}: reachable set has {} configs, expected {}",
                            entry.name,
                            reached.len(),
                            src_set.len()
                        )
                    });
                }
                for s in &srcs {
                    for c in &srcs {
                        let ok = match reach_witness(t, s, c) {
                            Ok(w) => {
                                !w.seq().is_empty()
                                    && apply_sequence(t.graph(), s, w.seq()).as_ref() == Ok(c)
                            }
                            Err(_) => false,
                        };
                        result.record(ok, || {
                            format!("{} (n={n}): no valid witness {s} -> {c}", entry.name)
                        });
                    }
                }
            }
        }
    }
    Ok(result)
}

/// Exhaustive counts match the recurrence for every catalog tree.
pub fn check_counts_match(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("enumerated counts match the recurrence on every catalog tree");
    for n in 1..=opts.max_n {
        let report = verify_tree_independence_guarded(n, opts.max_chips, opts.state_guard)?;
        for row in &report.rows {
            result.record(row.pass, || {
                format!(
                    "{} (n={n}) chips={}: enumerated {} expected {}",
                    row.tree, row.chips, row.enumerated, row.expected
                )
            });
        }
    }
    Ok(result)
}

/// Splitting the self-reachable configurations by the chip count on the
/// highest-index leaf (0, 1, or ≥2) gives class sizes C(ℓ−1,n−1),
/// C(ℓ−1,n−1), and C(ℓ−1,n) − C(ℓ−2,n−1).
pub fn check_class_partition(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("leaf-count classes of the enumeration split as the recurrence predicts");
    let mut table = CountTable::new();
    // C with negative chip index taken as zero
    let count = |l: isize, n: usize, table: &mut CountTable| -> BigUint {
        if l < 0 {
            BigUint::ZERO
        } else {
            table.count(l as usize, n)
        }
    };
    for n in 2..=opts.max_n {
        for entry in catalog::trees_on(n)? {
            let t = &entry.tree;
            let leaf = n - 1;
            if t.degree(leaf)? != 1 {
                result.record(false, || {
                    format!("{} (n={n}): vertex {leaf} is not a leaf", entry.name)
                });
                continue;
            }
            for total in 0..=opts.max_chips {
                let srcs = enumerate_src(t, total, opts.state_guard)?;
                let zeros = srcs.iter().filter(|c| c[leaf] == 0).count();
                let ones = srcs.iter().filter(|c| c[leaf] == 1).count();
                let more = srcs.len() - zeros - ones;
                let l = total as isize;
                let expect_zeros = count(l - 1, n - 1, &mut table);
                let expect_ones = expect_zeros.clone();
                // class (≥2) should number C(ℓ−1,n) − C(ℓ−2,n−1); written
                // additively to stay in unsigned arithmetic
                let more_ok = BigUint::from(more) + count(l - 2, n - 1, &mut table)
                    == count(l - 1, n, &mut table);
                let ok = BigUint::from(zeros) == expect_zeros
                    && BigUint::from(ones) == expect_ones
                    && more_ok;
                result.record(ok, || {
                    format!(
                        "{} (n={n}) chips={total}: classes ({zeros}, {ones}, {more}) do not match the recurrence",
                        entry.name
                    )
                });
            }
        }
    }
    Ok(result)
}

/// The three class maps — drop an empty leaf and pull a chip off its
/// neighbor; drop a leaf holding one chip; remove one chip from a leaf
/// holding several — are injective and land in their stated target sets.
pub fn check_bijections(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("leaf-class maps are injective into their target sets");
    for n in 2..=opts.max_n {
        for entry in catalog::trees_on(n)? {
            let t = &entry.tree;
            let leaf = n - 1;
            if t.degree(leaf)? != 1 {
                continue; // reported by the class-partition check
            }
            let removal = t.remove_leaf(leaf)?;
            let small = removal.tree();
            let nb_old = removal.to_old(removal.neighbor());
            for total in 1..=opts.max_chips {
                let srcs = enumerate_src(t, total, opts.state_guard)?;
                let mut images_zero = BTreeSet::new();
                let mut images_one = BTreeSet::new();
                let mut images_more = BTreeSet::new();
                for s in &srcs {
                    match s[leaf] {
                        0 => {
                            // neighbor must hold a chip: the edge to the leaf
                            // is a 2-vertex subtree needing one chip
                            let ok = s[nb_old] >= 1 && {
                                let mut chips = s.chips().to_vec();
                                chips[nb_old] -= 1;
                                chips.remove(leaf);
                                let image = ChipConfig::new(chips).expect("small");
                                is_self_reachable_tree(small, &image)?
                                    && images_zero.insert(image)
                            };
                            result.record(ok, || {
                                format!(
                                    "{} (n={n}) {s}: empty-leaf map broke (target or injectivity)",
                                    entry.name
                                )
                            });
                        }
                        1 => {
                            let mut chips = s.chips().to_vec();
                            chips.remove(leaf);
                            let image = ChipConfig::new(chips).expect("small");
                            let ok = is_self_reachable_tree(small, &image)?
                                && images_one.insert(image);
                            result.record(ok, || {
                                format!(
                                    "{} (n={n}) {s}: single-chip-leaf map broke (target or injectivity)",
                                    entry.name
                                )
                            });
                        }
                        _ => {
                            let mut chips = s.chips().to_vec();
                            chips[leaf] -= 1;
                            let image = ChipConfig::new(chips).expect("small");
                            let ok = image[leaf] >= 1
                                && is_self_reachable_tree(t, &image)?
                                && images_more.insert(image);
                            result.record(ok, || {
                                format!(
                                    "{} (n={n}) {s}: chip-removal map broke (target or injectivity)",
                                    entry.name
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(result)
}

/// Adding a chip never shrinks the count (for ℓ ≥ 1).
pub fn check_count_monotonicity(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("counts are monotone in the chip total");
    let mut table = CountTable::new();
    let top = opts.max_chips.max(12);
    for n in 1..=7usize {
        for l in 1..=top {
            let lo = table.count(l, n);
            let hi = table.count(l + 1, n);
            result.record(hi >= lo, || {
                format!("C({}, {n}) = {hi} < C({l}, {n}) = {lo}", l + 1)
            });
        }
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// randomized suites

fn suite_rng(opts: &VerifyOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

const TREE_CASE_MAX_N: usize = 10;
const GRAPH_CASE_MAX_N: usize = 6;

fn random_tree(rng: &mut ChaCha8Rng, max_n: usize) -> Tree {
    let n = rng.gen_range(1..=max_n);
    Tree::random_with(n, rng).expect("n >= 1")
}

fn random_connected_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let tree = Tree::random_with(n, rng).expect("n >= 1");
    let mut edges = tree.graph().edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(0.25) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("valid by construction")
}

/// Either a random tree (n ≤ 10) or a random connected graph (n ≤ 6).
fn random_arena(rng: &mut ChaCha8Rng) -> Graph {
    if rng.gen_bool(0.5) {
        random_tree(rng, TREE_CASE_MAX_N).graph().clone()
    } else {
        random_connected_graph(rng, GRAPH_CASE_MAX_N)
    }
}

fn random_config(rng: &mut ChaCha8Rng, n: usize, max_total: u64) -> ChipConfig {
    let total = rng.gen_range(0..=max_total);
    let mut chips = vec![0u64; n];
    for _ in 0..total {
        chips[rng.gen_range(0..n)] += 1;
    }
    ChipConfig::new(chips).expect("small totals")
}

/// Random legal walk of at most `steps` fires, uniform among fireable
/// vertices at each step.
fn random_walk(
    g: &Graph,
    c: &ChipConfig,
    rng: &mut ChaCha8Rng,
    steps: usize,
) -> (ChipConfig, FiringSequence) {
    let mut cur = c.clone();
    let mut moves = Vec::new();
    for _ in 0..steps {
        let fireable: Vec<usize> = (0..g.n())
            .filter(|&v| cur[v] >= g.neighbors(v).len() as u64)
            .collect();
        if fireable.is_empty() {
            break;
        }
        let v = fireable[rng.gen_range(0..fireable.len())];
        cur = fire(g, &cur, v).expect("chosen fireable");
        moves.push(v);
    }
    (cur, FiringSequence::new(moves))
}

/// A self-reachable configuration: start from the degree vector (every
/// vertex fireable at once, so a full permutation certainly exists),
/// sprinkle a few extra chips (each vertex still meets its degree), then
/// randomize by a legal walk. The endpoint stays self-reachable; `None`
/// would mean a closure bug, which the caller records as a failure.
fn random_src(g: &Graph, rng: &mut ChaCha8Rng) -> Option<ChipConfig> {
    let n = g.n();
    let mut chips: Vec<u64> = (0..n).map(|v| g.neighbors(v).len() as u64).collect();
    for _ in 0..rng.gen_range(0..=4u32) {
        chips[rng.gen_range(0..n)] += 1;
    }
    let base = ChipConfig::new(chips).expect("small");
    let steps = rng.gen_range(0..=2 * n);
    let (end, _) = random_walk(g, &base, rng, steps);
    match is_self_reachable_general(g, &end) {
        Ok(true) => Some(end),
        _ => None,
    }
}

/// Replays a fire-count budget in random order, always choosing among
/// fireable vertices with budget left. If the budget came from a legal
/// sequence this cannot get stuck.
fn random_replay(
    g: &Graph,
    c: &ChipConfig,
    budget: &[u64],
    rng: &mut ChaCha8Rng,
) -> Option<ChipConfig> {
    let mut left = budget.to_vec();
    let mut cur = c.clone();
    loop {
        let choices: Vec<usize> = (0..g.n())
            .filter(|&v| left[v] > 0 && cur[v] >= g.neighbors(v).len() as u64)
            .collect();
        if choices.is_empty() {
            break;
        }
        let v = choices[rng.gen_range(0..choices.len())];
        cur = fire(g, &cur, v).expect("chosen fireable");
        left[v] -= 1;
    }
    if left.iter().all(|&k| k == 0) {
        Some(cur)
    } else {
        None
    }
}

/// Chip totals are conserved by every legal sequence, and the checked and
/// linear-algebra applications agree.
pub fn check_conservation(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("legal firing conserves the chip total");
    let mut rng = suite_rng(opts, 1);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let c = random_config(&mut rng, g.n(), 3 * g.n() as u64);
        let steps = rng.gen_range(0..=2 * g.n() + 2);
        let (_, walk) = random_walk(&g, &c, &mut rng, steps);
        let end = apply_sequence(&g, &c, &walk)?;
        let linear = apply_sequence_unchecked(&g, &c, &walk)?;
        let same = end
            .chips()
            .iter()
            .map(|&x| x as i128)
            .eq(linear.iter().copied());
        result.record(end.total() == c.total() && same, || {
            format!("walk {walk} from {c}: total or linear form drifted")
        });
    }
    Ok(result)
}

/// Two legal sequences firing each vertex equally often end in the same
/// configuration, whatever the order.
pub fn check_order_independence(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("equal fire counts give equal results, in any order");
    let mut rng = suite_rng(opts, 2);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let c = random_config(&mut rng, g.n(), 3 * g.n() as u64);
        let steps = rng.gen_range(0..=2 * g.n() + 2);
        let (end, walk) = random_walk(&g, &c, &mut rng, steps);
        let budget = walk.fire_counts(g.n())?;
        match random_replay(&g, &c, &budget, &mut rng) {
            Some(other) => result.record(other == end, || {
                format!("from {c}: reordering {walk} changed the result")
            }),
            None => result.record(false, || {
                format!("from {c}: replay of {walk} got stuck mid-budget")
            }),
        }
    }
    Ok(result)
}

/// Extra chips ride along: applying a legal sequence to c + x gives the
/// original result plus x, and stays legal.
pub fn check_additivity(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("surplus chips ride along unchanged under firing");
    let mut rng = suite_rng(opts, 3);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let c = random_config(&mut rng, g.n(), 3 * g.n() as u64);
        let steps = rng.gen_range(0..=2 * g.n());
        let (end, walk) = random_walk(&g, &c, &mut rng, steps);
        let x = random_config(&mut rng, g.n(), g.n() as u64);
        let shifted = c.add(&x)?;
        let linear = apply_sequence_unchecked(&g, &shifted, &walk)?;
        let expect: Vec<i128> = end
            .chips()
            .iter()
            .zip(x.chips())
            .map(|(&e, &b)| e as i128 + b as i128)
            .collect();
        let checked = apply_sequence(&g, &shifted, &walk);
        let ok = linear == expect
            && checked
                .map(|r| r.chips().iter().map(|&v| v as i128).eq(expect.iter().copied()))
                .unwrap_or(false);
        result.record(ok, || {
            format!("from {c} plus {x}: shifted application diverged on {walk}")
        });
    }
    Ok(result)
}

/// A sequence legal from c stays legal from any d that matches or exceeds c
/// on the vertices that actually fire.
pub fn check_legality_monotonicity(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("raising chips on fired vertices preserves legality");
    let mut rng = suite_rng(opts, 4);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let c = random_config(&mut rng, g.n(), 3 * g.n() as u64);
        let steps = rng.gen_range(0..=2 * g.n());
        let (_, walk) = random_walk(&g, &c, &mut rng, steps);
        let counts = walk.fire_counts(g.n())?;
        let chips: Vec<u64> = (0..g.n())
            .map(|v| {
                if counts[v] > 0 {
                    c[v] + rng.gen_range(0..=2)
                } else {
                    rng.gen_range(0..=2)
                }
            })
            .collect();
        let d = ChipConfig::new(chips).expect("small");
        result.record(apply_sequence(&g, &d, &walk).is_ok(), || {
            format!("walk {walk} legal from {c} but not from {d}")
        });
    }
    Ok(result)
}

/// Two legal sequences touching disjoint vertex sets can be concatenated in
/// either order, staying legal and agreeing on the result.
pub fn check_disjoint_concatenation(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("vertex-disjoint sequences concatenate legally in both orders");
    let mut rng = suite_rng(opts, 5);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let n = g.n();
        let c = random_config(&mut rng, n, 3 * n as u64);
        let allowed: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let restricted_walk = |mask: bool, rng: &mut ChaCha8Rng| {
            let mut cur = c.clone();
            let mut moves = Vec::new();
            for _ in 0..rng.gen_range(0..=n + 2) {
                let fireable: Vec<usize> = (0..n)
                    .filter(|&v| allowed[v] == mask && cur[v] >= g.neighbors(v).len() as u64)
                    .collect();
                if fireable.is_empty() {
                    break;
                }
                let v = fireable[rng.gen_range(0..fireable.len())];
                cur = fire(&g, &cur, v).expect("fireable");
                moves.push(v);
            }
            FiringSequence::new(moves)
        };
        let phi = restricted_walk(true, &mut rng);
        let psi = restricted_walk(false, &mut rng);
        debug_assert!(phi.is_disjoint_from(&psi));
        let a = apply_sequence(&g, &c, &phi.concat(&psi));
        let b = apply_sequence(&g, &c, &psi.concat(&phi));
        let ok = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
        result.record(ok, || {
            format!("from {c}: disjoint {phi} / {psi} failed to commute")
        });
    }
    Ok(result)
}

/// Any legal sequence firing every vertex exactly once returns to the start.
pub fn check_permutation_identity(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("firing every vertex exactly once returns to the start");
    let mut rng = suite_rng(opts, 6);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let Some(c) = random_src(&g, &mut rng) else {
            result.record(false, || "self-reachable generator failed".to_string());
            continue;
        };
        // a random legal permutation, not just the greedy one
        match random_replay(&g, &c, &vec![1; g.n()], &mut rng) {
            Some(end) => result.record(end == c, || {
                format!("a full pass from {c} ended at {end}")
            }),
            None => result.record(false, || {
                format!("no full pass found from self-reachable {c}")
            }),
        }
    }
    Ok(result)
}

/// Deleting the first occurrence of every vertex from a legal all-vertex
/// sequence keeps it legal and keeps the result.
pub fn check_first_occurrence_reduction(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("dropping each vertex's first firing preserves legality and result");
    let mut rng = suite_rng(opts, 7);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let Some(c) = random_src(&g, &mut rng) else {
            result.record(false, || "self-reachable generator failed".to_string());
            continue;
        };
        // passes return to c, so chaining them stays legal and covers
        // every vertex; a trailing walk adds noise
        let mut seq = FiringSequence::empty();
        let mut ok_build = true;
        let passes = rng.gen_range(1..=3u32);
        for _ in 0..passes {
            match replay_moves(&g, &c, &vec![1; g.n()], &mut rng) {
                Some(moves) => seq = seq.concat(&FiringSequence::new(moves)),
                None => ok_build = false,
            }
        }
        if !ok_build {
            result.record(false, || format!("no full pass found from {c}"));
            continue;
        }
        let (_, tail) = random_walk(&g, &apply_sequence(&g, &c, &seq)?, &mut rng, g.n());
        let seq = seq.concat(&tail);
        let full = apply_sequence(&g, &c, &seq)?;
        let ok = match reduce_sequence(&g, &c, &seq) {
            Ok(reduced) => {
                let counts = seq.fire_counts(g.n())?;
                let reduced_counts = reduced.fire_counts(g.n())?;
                (0..g.n()).all(|v| reduced_counts[v] + 1 == counts[v])
                    && apply_sequence(&g, &c, &reduced)? == full
            }
            Err(_) => false,
        };
        result.record(ok, || format!("reduction of {seq} from {c} misbehaved"));
    }
    Ok(result)
}

/// Like [`random_replay`] but returns the move list.
fn replay_moves(
    g: &Graph,
    c: &ChipConfig,
    budget: &[u64],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<usize>> {
    let mut left = budget.to_vec();
    let mut cur = c.clone();
    let mut moves = Vec::new();
    loop {
        let choices: Vec<usize> = (0..g.n())
            .filter(|&v| left[v] > 0 && cur[v] >= g.neighbors(v).len() as u64)
            .collect();
        if choices.is_empty() {
            break;
        }
        let v = choices[rng.gen_range(0..choices.len())];
        cur = fire(g, &cur, v).expect("fireable");
        left[v] -= 1;
        moves.push(v);
    }
    if left.iter().all(|&k| k == 0) {
        Some(moves)
    } else {
        None
    }
}

/// Firing a charged leaf and then its neighbor mimics the neighbor's fire on
/// the tree without the leaf: the leaf's count is restored and every other
/// vertex matches the smaller tree's result.
pub fn check_leaf_neighbor_pairing(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("leaf-then-neighbor firing matches the leafless tree's fire");
    let mut rng = suite_rng(opts, 8);
    for _ in 0..opts.cases {
        let n = rng.gen_range(2..=TREE_CASE_MAX_N);
        let t = Tree::random_with(n, &mut rng).expect("n >= 2");
        let leaves = t.leaves();
        let leaf = leaves[rng.gen_range(0..leaves.len())];
        let nb = t.neighbors(leaf)[0];
        let mut chips: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        chips[leaf] = rng.gen_range(1..=3);
        // neighbor must be fireable on the tree without the leaf
        chips[nb] = (t.neighbors(nb).len() as u64 - 1) + rng.gen_range(0..=2);
        let c = ChipConfig::new(chips).expect("small");

        let pair = FiringSequence::new(vec![leaf, nb]);
        let removal = t.remove_leaf(leaf).expect("leaf");
        let small = removal.tree();
        let mut small_chips = c.chips().to_vec();
        small_chips.remove(leaf);
        let small_c = ChipConfig::new(small_chips).expect("small");
        let ok = match (
            apply_sequence(t.graph(), &c, &pair),
            fire(small.graph(), &small_c, removal.neighbor()),
        ) {
            (Ok(big), Ok(small_fired)) => {
                big[leaf] == c[leaf]
                    && (0..n).filter(|&v| v != leaf).all(|v| {
                        big[v] == small_fired[removal.to_new(v).expect("not the leaf")]
                    })
            }
            _ => false,
        };
        result.record(ok, || {
            format!("tree {} config {c}: pair [{leaf},{nb}] diverged", t.graph())
        });
    }
    Ok(result)
}

/// From a self-reachable configuration, a full legal permutation can start
/// at any fireable vertex.
pub fn check_witness_from_any_start(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("a full firing pass can start at any fireable vertex");
    let mut rng = suite_rng(opts, 9);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let Some(c) = random_src(&g, &mut rng) else {
            result.record(false, || "self-reachable generator failed".to_string());
            continue;
        };
        for v in 0..g.n() {
            if !is_legal_fire(&g, &c, v)? {
                continue;
            }
            let ok = match witness_permutation(&g, &c, Some(v)) {
                Ok(perm) => {
                    perm.moves().first() == Some(&v)
                        && perm.fire_counts(g.n())?.iter().all(|&k| k == 1)
                        && apply_sequence(&g, &c, &perm)? == c
                }
                Err(_) => false,
            };
            result.record(ok, || {
                format!("from {c}: no full pass starting at vertex {v}")
            });
        }
    }
    Ok(result)
}

/// Everything reachable from a self-reachable configuration is itself
/// self-reachable and can reach the start back.
pub fn check_closure(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("reachable sets of self-reachable configurations are closed and mutual");
    let mut rng = suite_rng(opts, 10);
    for _ in 0..opts.cases {
        // kept small: each case runs several breadth-first searches
        let (g, s) = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=5);
            let t = Tree::random_with(n, &mut rng).expect("n >= 1");
            let mut chips = vec![1u64; n];
            chips[rng.gen_range(0..n)] = 0;
            let base = ChipConfig::new(chips).expect("small");
            let steps = rng.gen_range(0..=2 * n);
            let (s, _) = random_walk(t.graph(), &base, &mut rng, steps);
            (t.graph().clone(), s)
        } else {
            let g = random_connected_graph(&mut rng, 4);
            match random_src(&g, &mut rng) {
                Some(s) => (g, s),
                None => {
                    result.record(false, || "self-reachable generator failed".to_string());
                    continue;
                }
            }
        };
        if !is_self_reachable_general(&g, &s)? {
            result.record(false, || format!("generator produced non-self-reachable {s}"));
            continue;
        }
        let reached = reachable_set(&g, &s, opts.state_guard)?;
        let mut ok = reached.contains(&s);
        let members: Vec<&ChipConfig> = reached.iter().collect();
        for x in &members {
            if !is_self_reachable_general(&g, x)? {
                ok = false;
            }
        }
        // spot-check reverse reachability on a few members
        for _ in 0..members.len().min(4) {
            let x = members[rng.gen_range(0..members.len())];
            if !reachable_set(&g, x, opts.state_guard)?.contains(&s) {
                ok = false;
            }
        }
        result.record(ok, || format!("closure violated from {s} on {g}"));
    }
    Ok(result)
}

/// Restricting a self-reachable configuration to a connected subtree keeps
/// it self-reachable there.
pub fn check_subtree_restriction(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("restriction to any connected subtree stays self-reachable");
    let mut rng = suite_rng(opts, 11);
    for _ in 0..opts.cases {
        let t = random_tree(&mut rng, TREE_CASE_MAX_N);
        let Some(s) = random_src(t.graph(), &mut rng) else {
            result.record(false, || "self-reachable generator failed".to_string());
            continue;
        };
        // grow a random connected vertex set
        let mut subset = vec![rng.gen_range(0..t.n())];
        for _ in 0..rng.gen_range(0..t.n()) {
            let frontier: Vec<usize> = subset
                .iter()
                .flat_map(|&v| t.neighbors(v).iter().copied())
                .filter(|v| !subset.contains(v))
                .collect();
            if frontier.is_empty() {
                break;
            }
            subset.push(frontier[rng.gen_range(0..frontier.len())]);
        }
        let (sub, old_of) = t.induced(&subset)?;
        let chips: Vec<u64> = old_of.iter().map(|&v| s[v]).collect();
        let restricted = ChipConfig::new(chips).expect("small");
        result.record(is_self_reachable_tree(&sub, &restricted)?, || {
            format!(
                "self-reachable {s} on {} restricted to {subset:?} is not self-reachable",
                t.graph()
            )
        });
    }
    Ok(result)
}

/// A configuration is self-reachable on the tree without a leaf iff adding
/// that leaf empty (with an extra chip on its neighbor) is self-reachable
/// iff adding it with one chip is.
pub fn check_leaf_transfer(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("leaf attachment with 0 or 1 chips preserves self-reachability either way");
    let mut rng = suite_rng(opts, 12);
    for _ in 0..opts.cases {
        let n = rng.gen_range(2..=TREE_CASE_MAX_N);
        let t = Tree::random_with(n, &mut rng).expect("n >= 2");
        let leaves = t.leaves();
        let leaf = leaves[rng.gen_range(0..leaves.len())];
        let removal = t.remove_leaf(leaf).expect("leaf");
        let small = removal.tree();
        let s = random_config(&mut rng, n - 1, 2 * n as u64);
        let on_small = is_self_reachable_tree(small, &s)?;

        let lift = |leaf_chips: u64, bump_neighbor: bool| -> ChipConfig {
            let mut chips = vec![0u64; n];
            for v in 0..n - 1 {
                chips[removal.to_old(v)] = s[v];
            }
            chips[leaf] = leaf_chips;
            if bump_neighbor {
                chips[removal.to_old(removal.neighbor())] += 1;
            }
            ChipConfig::new(chips).expect("small")
        };
        let with_empty_leaf = is_self_reachable_tree(&t, &lift(0, true))?;
        let with_one_chip = is_self_reachable_tree(&t, &lift(1, false))?;
        result.record(on_small == with_empty_leaf && on_small == with_one_chip, || {
            format!(
                "leaf transfer disagreed on {} at leaf {leaf}: {on_small} / {with_empty_leaf} / {with_one_chip}",
                t.graph()
            )
        });
    }
    Ok(result)
}

/// Pointwise domination preserves self-reachability.
pub fn check_domination(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut result = CheckResult::new("adding chips anywhere preserves self-reachability");
    let mut rng = suite_rng(opts, 13);
    for _ in 0..opts.cases {
        let g = random_arena(&mut rng);
        let Some(s) = random_src(&g, &mut rng) else {
            result.record(false, || "self-reachable generator failed".to_string());
            continue;
        };
        let bump = random_config(&mut rng, g.n(), g.n() as u64);
        let d = s.add(&bump)?;
        result.record(is_self_reachable_general(&g, &d)?, || {
            format!("{s} is self-reachable on {g} but {d} is not")
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes_quickly() {
        let opts = VerifyOptions {
            max_n: 4,
            max_chips: 4,
            cases: 40,
            seed: 7,
            ..VerifyOptions::default()
        };
        let report = verify_suite(&opts).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn reports_are_deterministic() {
        let opts = VerifyOptions {
            max_n: 3,
            max_chips: 3,
            cases: 25,
            seed: 99,
            ..VerifyOptions::default()
        };
        let a = verify_suite(&opts).unwrap().to_string();
        let b = verify_suite(&opts).unwrap().to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn catalog_bound_is_a_usage_error() {
        let opts = VerifyOptions {
            max_n: 8,
            ..VerifyOptions::default()
        };
        assert!(matches!(verify_suite(&opts), Err(Error::Usage(_))));
    }
}
