//! Deciding whether a configuration can return to itself through a nonempty
//! legal firing sequence, and constructing explicit firing sequences between
//! such configurations.
//!
//! On trees the decision reduces to a linear-time check: every connected
//! subtree on m vertices must carry at least m−1 chips
//! ([`min_subtree_deficiency`] ≥ 0). On arbitrary connected graphs a greedy
//! search for a full firing permutation decides the question, and a BFS over
//! the (finite, chip-conserving) state space serves as the independent
//! oracle everything else is tested against.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::firing::{apply_sequence, fire, is_legal_fire, ChipConfig, FiringSequence};
use crate::graph::{Graph, Tree};

fn check_dims(g: &Graph, c: &ChipConfig) -> Result<()> {
    if c.len() != g.n() {
        return Err(Error::DimensionMismatch {
            got: c.len(),
            n: g.n(),
        });
    }
    Ok(())
}

/// Minimum over all nonempty connected subtrees of
/// `chips(subtree) − (|subtree| − 1)`, in O(n) by dynamic programming.
///
/// With weights `w(v) = chips[v] − 1`, the minimum weight of a connected set
/// containing v within v's rooted subtree is
/// g(v) = w(v) + Σ_children min(0, g(child)); every connected set has a
/// unique topmost vertex, so the answer is 1 + min_v g(v).
pub fn min_subtree_deficiency(t: &Tree, c: &ChipConfig) -> Result<i128> {
    check_dims(t.graph(), c)?;
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([0usize]);
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &u in t.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    let mut g = vec![0i128; n];
    for &v in order.iter().rev() {
        let mut val = c[v] as i128 - 1;
        for &u in t.neighbors(v) {
            if parent[u] == v {
                val += g[u].min(0);
            }
        }
        g[v] = val;
    }
    Ok(1 + g.iter().min().expect("tree is nonempty"))
}

/// Fast tree decider: self-reachable iff no subtree is deficient.
pub fn is_self_reachable_tree(t: &Tree, c: &ChipConfig) -> Result<bool> {
    Ok(min_subtree_deficiency(t, c)? >= 0)
}

/// Slow tree decider: enumerate every subtree and check its chip count
/// directly. Exists purely as an independent cross-check.
pub fn is_self_reachable_oracle(t: &Tree, c: &ChipConfig, guard: usize) -> Result<bool> {
    check_dims(t.graph(), c)?;
    let subtrees = t.enumerate_subtrees(guard)?;
    Ok(subtrees.iter().all(|s| {
        let chips: u64 = s.iter().map(|&v| c[v]).sum();
        chips >= (s.len() - 1) as u64
    }))
}

/// A legal sequence firing every vertex exactly once (which necessarily
/// returns to the start), beginning with `first` when given.
///
/// Greedy construction: repeatedly fire the lowest-indexed fireable vertex
/// that has not fired yet. Greedy failure proves no permutation exists:
/// other vertices' fires only ever add chips to a vertex, so if any legal
/// permutation Π exists, the first Π-vertex missing from a stuck greedy
/// state would still be fireable there — a contradiction.
pub fn witness_permutation(
    g: &Graph,
    c: &ChipConfig,
    first: Option<usize>,
) -> Result<FiringSequence> {
    check_dims(g, c)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut cur = c.clone();
    let mut fired = vec![false; n];
    let mut moves = Vec::with_capacity(n);
    if let Some(f) = first {
        g.check_vertex(f)?;
        if !is_legal_fire(g, &cur, f)? {
            return Err(Error::IllegalFire {
                vertex: f,
                available: cur[f],
                required: g.degree(f)? as u64,
            });
        }
        cur = fire(g, &cur, f)?;
        fired[f] = true;
        moves.push(f);
    }
    while moves.len() < n {
        let next = (0..n).find(|&v| !fired[v] && cur[v] >= g.neighbors(v).len() as u64);
        match next {
            Some(v) => {
                cur = fire(g, &cur, v)?;
                fired[v] = true;
                moves.push(v);
            }
            None => return Err(Error::NotSelfReachable),
        }
    }
    assert_eq!(
        &cur, c,
        "a full firing permutation must return to the start; this is an internal invariant"
    );
    Ok(FiringSequence::new(moves))
}

/// Decides self-reachability on any connected graph via the greedy
/// permutation search.
pub fn is_self_reachable_general(g: &Graph, c: &ChipConfig) -> Result<bool> {
    match witness_permutation(g, c, None) {
        Ok(_) => Ok(true),
        Err(Error::NotSelfReachable) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Exact set of configurations reachable from `c` by nonempty legal firing,
/// by breadth-first search. `c` itself appears only if something fires back
/// into it. Errors out once more than `node_guard` states have been found.
pub fn reachable_set(
    g: &Graph,
    c: &ChipConfig,
    node_guard: u64,
) -> Result<BTreeSet<ChipConfig>> {
    check_dims(g, c)?;
    let mut found: BTreeSet<ChipConfig> = BTreeSet::new();
    let mut queue: VecDeque<ChipConfig> = VecDeque::new();
    let expand = |cfg: &ChipConfig,
                      found: &mut BTreeSet<ChipConfig>,
                      queue: &mut VecDeque<ChipConfig>|
     -> Result<()> {
        for v in 0..g.n() {
            if cfg[v] >= g.neighbors(v).len() as u64 {
                let next = fire(g, cfg, v)?;
                if !found.contains(&next) {
                    if found.len() as u64 >= node_guard {
                        return Err(Error::GuardExceeded {
                            what: "reachable states",
                            limit: node_guard,
                        });
                    }
                    found.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(())
    };
    expand(c, &mut found, &mut queue)?;
    while let Some(cfg) = queue.pop_front() {
        expand(&cfg, &mut found, &mut queue)?;
    }
    Ok(found)
}

/// Walks a [`witness_permutation`] prefix from `s` until `v` is about to
/// fire, returning the configuration where `v` is fireable plus the legal
/// sequence that got there (empty when `v` is fireable immediately).
pub fn fireable_configuration(
    g: &Graph,
    s: &ChipConfig,
    v: usize,
) -> Result<(ChipConfig, FiringSequence)> {
    g.check_vertex(v)?;
    let perm = witness_permutation(g, s, None)?;
    let pos = perm
        .moves()
        .iter()
        .position(|&m| m == v)
        .expect("a permutation fires every vertex");
    let prefix = FiringSequence::new(perm.moves()[..pos].to_vec());
    let cfg = apply_sequence(g, s, &prefix)?;
    Ok((cfg, prefix))
}

/// A validated certificate that `seq` legally carries `from` to `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachWitness {
    from: ChipConfig,
    to: ChipConfig,
    seq: FiringSequence,
}

impl ReachWitness {
    /// Validates nonemptiness and legality; `to` is computed, not trusted.
    pub fn new(g: &Graph, from: ChipConfig, seq: FiringSequence) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::EmptyWitness);
        }
        let to = apply_sequence(g, &from, &seq)?;
        Ok(ReachWitness { from, to, seq })
    }

    pub fn from_config(&self) -> &ChipConfig {
        &self.from
    }

    pub fn to_config(&self) -> &ChipConfig {
        &self.to
    }

    pub fn seq(&self) -> &FiringSequence {
        &self.seq
    }
}

/// Builds a legal, nonempty firing sequence from `s` to `c` on a tree.
/// Both must be self-reachable with equal totals.
///
/// Construction: take the highest-indexed leaf. When both endpoints put
/// chips on it, drain the surplus by firing the leaf, delete the leaf, and
/// recurse — each neighbor fire of the smaller tree is replayed as the pair
/// [leaf, neighbor], which leaves the leaf's count unchanged. When an
/// endpoint has an empty leaf, first walk it (or the reversed walk, for the
/// target side) to a configuration where the leaf is charged, then stitch
/// the pieces together. Reversal of a legal walk is possible because every
/// intermediate configuration is itself self-reachable: firing a full
/// permutation that starts with the step being undone returns to the
/// pre-step configuration.
pub fn reach_witness(t: &Tree, s: &ChipConfig, c: &ChipConfig) -> Result<ReachWitness> {
    check_dims(t.graph(), s)?;
    check_dims(t.graph(), c)?;
    if s.total() != c.total() {
        return Err(Error::TotalMismatch {
            from_total: s.total(),
            to_total: c.total(),
        });
    }
    if !is_self_reachable_tree(t, s)? || !is_self_reachable_tree(t, c)? {
        return Err(Error::NotSelfReachable);
    }
    let moves = witness_rec(t, s, c)?;
    let witness = ReachWitness::new(t.graph(), s.clone(), FiringSequence::new(moves))?;
    assert_eq!(
        witness.to_config(),
        c,
        "constructed witness must end at the target; this is an internal invariant"
    );
    Ok(witness)
}

fn witness_rec(t: &Tree, s: &ChipConfig, c: &ChipConfig) -> Result<Vec<usize>> {
    let n = t.n();
    if n == 1 {
        // equal totals force s = c; firing the lone vertex is legal (degree
        // 0) and changes nothing
        return Ok(vec![0]);
    }
    let leaf = (0..n)
        .rev()
        .find(|&v| t.neighbors(v).len() == 1)
        .expect("a tree on n ≥ 2 vertices has a leaf");
    let (s_l, c_l) = (s[leaf], c[leaf]);
    if s_l == 0 && c_l == 0 {
        let (sigma, q) = fireable_configuration(t.graph(), s, leaf)?;
        let (d, p) = fireable_configuration(t.graph(), c, leaf)?;
        let mut out = q.moves().to_vec();
        out.extend(witness_rec(t, &sigma, &d)?);
        out.extend(reverse_walk(t.graph(), c, p.moves())?);
        return Ok(out);
    }
    if c_l == 0 {
        let (d, p) = fireable_configuration(t.graph(), c, leaf)?;
        let mut out = witness_rec(t, s, &d)?;
        out.extend(reverse_walk(t.graph(), c, p.moves())?);
        return Ok(out);
    }
    if s_l == 0 {
        let (sigma, q) = fireable_configuration(t.graph(), s, leaf)?;
        let mut out = q.moves().to_vec();
        out.extend(witness_rec(t, &sigma, c)?);
        return Ok(out);
    }
    if s_l < c_l {
        // build the feasible direction (surplus on the leaf) and reverse it
        let back = witness_rec(t, c, s)?;
        return reverse_walk(t.graph(), c, &back);
    }
    // s_l ≥ c_l ≥ 1: drain the leaf down to the target count, then solve on
    // the smaller tree
    let drain = s_l - c_l;
    let removal = t.remove_leaf(leaf)?;
    let nb_old = removal.to_old(removal.neighbor());
    let mut mid = s.chips().to_vec();
    mid[leaf] = c_l;
    mid[nb_old] += drain;
    let restrict = |chips: &[u64]| -> ChipConfig {
        let mut v = chips.to_vec();
        v.remove(leaf);
        ChipConfig::from_vec_unchecked(v)
    };
    let sub = witness_rec(removal.tree(), &restrict(&mid), &restrict(c.chips()))?;
    let mut out = vec![leaf; drain as usize];
    for m in sub {
        let old = removal.to_old(m);
        if old == nb_old {
            // the leaf holds ≥ 1 chip throughout, so prefixing the neighbor
            // fire with a leaf fire is legal and restores the leaf's count
            out.push(leaf);
        }
        out.push(old);
    }
    Ok(out)
}

/// Given a legal walk from `start`, produces a legal sequence from the
/// walk's endpoint back to `start`, one undone step at a time: a full
/// permutation from the pre-step configuration that begins with the step's
/// own vertex returns there, and its tail is legal from the post-step
/// configuration. Requires every configuration along the walk to be
/// self-reachable.
fn reverse_walk(g: &Graph, start: &ChipConfig, walk: &[usize]) -> Result<Vec<usize>> {
    let mut states = Vec::with_capacity(walk.len() + 1);
    states.push(start.clone());
    for &v in walk {
        let next = fire(g, states.last().expect("nonempty"), v)?;
        states.push(next);
    }
    let mut out = Vec::new();
    for j in (0..walk.len()).rev() {
        let perm = witness_permutation(g, &states[j], Some(walk[j]))?;
        out.extend_from_slice(&perm.moves()[1..]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(text: &str) -> Tree {
        text.parse().unwrap()
    }

    fn cfg(s: &str) -> ChipConfig {
        s.parse().unwrap()
    }

    fn p2() -> Tree {
        tree("n 2\n0 1")
    }

    fn p3() -> Tree {
        tree("n 3\n0 1\n1 2")
    }

    fn k1() -> Tree {
        tree("n 1")
    }

    fn star3() -> Tree {
        tree("n 4\n0 1\n0 2\n0 3")
    }

    #[test]
    fn subtree_deficiency() {
        assert_eq!(min_subtree_deficiency(&p3(), &cfg("1,0,1")).unwrap(), 0);
        assert_eq!(min_subtree_deficiency(&p3(), &cfg("2,0,0")).unwrap(), -1);
        assert_eq!(min_subtree_deficiency(&k1(), &cfg("0")).unwrap(), 0);
        assert_eq!(
            min_subtree_deficiency(&p3(), &cfg("1,1")),
            Err(Error::DimensionMismatch { got: 2, n: 3 })
        );
    }

    #[test]
    fn tree_decider() {
        assert!(is_self_reachable_tree(&p2(), &cfg("2,0")).unwrap());
        assert!(!is_self_reachable_tree(&p3(), &cfg("2,0,0")).unwrap());
        assert!(is_self_reachable_tree(&k1(), &cfg("0")).unwrap());
    }

    #[test]
    fn subtree_oracle() {
        assert!(is_self_reachable_oracle(&p3(), &cfg("1,0,1"), 20).unwrap());
        assert!(!is_self_reachable_oracle(&p3(), &cfg("0,0,2"), 20).unwrap());
        assert!(is_self_reachable_oracle(&star3(), &cfg("0,1,1,1"), 20).unwrap());
        assert!(matches!(
            is_self_reachable_oracle(&p3(), &cfg("1,0,1"), 2),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn witness_permutations() {
        assert_eq!(
            witness_permutation(p2().graph(), &cfg("1,1"), Some(1)).unwrap(),
            FiringSequence::new(vec![1, 0])
        );
        assert_eq!(
            witness_permutation(p2().graph(), &cfg("2,0"), None).unwrap(),
            FiringSequence::new(vec![0, 1])
        );
        assert_eq!(
            witness_permutation(p3().graph(), &cfg("2,0,0"), None),
            Err(Error::NotSelfReachable)
        );
        assert_eq!(
            witness_permutation(p2().graph(), &cfg("0,2"), Some(0)),
            Err(Error::IllegalFire {
                vertex: 0,
                available: 0,
                required: 1
            })
        );
        let disconnected: Graph = "n 3\n0 1".parse().unwrap();
        assert_eq!(
            witness_permutation(&disconnected, &cfg("1,1,0"), None),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn general_decider_on_cycles() {
        let c3: Graph = "n 3\n0 1\n1 2\n0 2".parse().unwrap();
        // (1,1,1) has no fireable vertex at all (every degree is 2)
        assert!(!is_self_reachable_general(&c3, &cfg("1,1,1")).unwrap());
        assert!(is_self_reachable_general(&c3, &cfg("2,2,2")).unwrap());
        assert!(!is_self_reachable_general(p2().graph(), &cfg("0,0")).unwrap());
    }

    #[test]
    fn reachable_sets() {
        let r = reachable_set(p2().graph(), &cfg("2,0"), 1000).unwrap();
        let expected: BTreeSet<ChipConfig> =
            [cfg("1,1"), cfg("0,2"), cfg("2,0")].into_iter().collect();
        assert_eq!(r, expected);

        assert!(reachable_set(p2().graph(), &cfg("0,0"), 1000).unwrap().is_empty());

        // a non-self-reachable start never reappears in its own future
        let r = reachable_set(p3().graph(), &cfg("2,0,0"), 1000).unwrap();
        assert!(!r.contains(&cfg("2,0,0")));
        assert!(r.contains(&cfg("1,1,0")));

        assert_eq!(
            reachable_set(p2().graph(), &cfg("5,0"), 2),
            Err(Error::GuardExceeded {
                what: "reachable states",
                limit: 2
            })
        );
    }

    #[test]
    fn fireable_configurations() {
        let (cfg1, seq1) = fireable_configuration(p2().graph(), &cfg("1,1"), 0).unwrap();
        assert_eq!((cfg1, seq1), (cfg("1,1"), FiringSequence::empty()));

        let (cfg2, seq2) = fireable_configuration(p2().graph(), &cfg("0,2"), 0).unwrap();
        assert_eq!((cfg2, seq2), (cfg("1,1"), FiringSequence::new(vec![1])));

        let (cfg3, seq3) = fireable_configuration(p3().graph(), &cfg("0,2,0"), 0).unwrap();
        assert_eq!((cfg3, seq3), (cfg("1,0,1"), FiringSequence::new(vec![1])));

        assert_eq!(
            fireable_configuration(p3().graph(), &cfg("2,0,0"), 1),
            Err(Error::NotSelfReachable)
        );
    }

    fn check_witness(t: &Tree, s: &str, c: &str) {
        let s = cfg(s);
        let c = cfg(c);
        let w = reach_witness(t, &s, &c).unwrap();
        assert!(!w.seq().is_empty());
        assert_eq!(apply_sequence(t.graph(), &s, w.seq()).unwrap(), c);
    }

    #[test]
    fn witnesses_validate() {
        check_witness(&p2(), "2,0", "1,1");
        check_witness(&p2(), "1,1", "1,1");
        check_witness(&p3(), "0,2,0", "1,0,1");
        check_witness(&p3(), "1,0,1", "0,2,0");
        check_witness(&star3(), "0,1,1,1", "3,0,0,0");
        check_witness(&k1(), "4", "4");
    }

    #[test]
    fn witness_rejects_bad_inputs() {
        assert_eq!(
            reach_witness(&p2(), &cfg("2,0"), &cfg("1,0")),
            Err(Error::TotalMismatch {
                from_total: 2,
                to_total: 1
            })
        );
        assert_eq!(
            reach_witness(&p3(), &cfg("2,0,0"), &cfg("1,0,1")),
            Err(Error::NotSelfReachable)
        );
        assert_eq!(
            reach_witness(&p3(), &cfg("1,0,1"), &cfg("2,0,0")),
            Err(Error::NotSelfReachable)
        );
    }

    #[test]
    fn witness_serializes_as_text_forms() {
        let w = reach_witness(&p2(), &cfg("2,0"), &cfg("1,1")).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["from"], "2,0");
        assert_eq!(json["to"], "1,1");
        let back: ReachWitness = serde_json::from_value(json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn empty_witnesses_are_rejected() {
        assert_eq!(
            ReachWitness::new(p2().graph(), cfg("1,1"), FiringSequence::empty()),
            Err(Error::EmptyWitness)
        );
        let bad = ReachWitness::new(p2().graph(), cfg("0,1"), FiringSequence::new(vec![0]));
        assert!(matches!(bad, Err(Error::IllegalStep { .. })));
    }
}
