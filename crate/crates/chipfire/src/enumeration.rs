//! Counting and listing self-reachable configurations on trees.
//!
//! The count C(ℓ, n) of self-reachable configurations with ℓ chips on an
//! n-vertex tree depends only on ℓ and n, never on the tree's shape, and
//! satisfies
//!
//! ```text
//! C(ℓ, n) = C(ℓ−1, n) + 2·C(ℓ−1, n−1) − C(ℓ−2, n−1)      for ℓ, n ≥ 2
//! ```
//!
//! with C(ℓ, 1) = 1, C(0, n) = 0 for n ≥ 2, C(1, 2) = 2, and C(1, n) = 0
//! for n ≥ 3. [`enumerate_src`] lists the configurations exhaustively as the
//! oracle; [`verify_tree_independence`] pits the two against each other
//! across the whole tree catalog.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::firing::ChipConfig;
use crate::graph::Tree;
use crate::selfreach::is_self_reachable_tree;

/// Memoized table of C(ℓ, n), filled bottom-up on demand.
#[derive(Debug, Clone, Default)]
pub struct CountTable {
    entries: BTreeMap<(usize, usize), BigUint>,
}

impl CountTable {
    pub fn new() -> Self {
        CountTable::default()
    }

    /// C(chips, vertices); `vertices` must be positive.
    pub fn count(&mut self, chips: usize, vertices: usize) -> BigUint {
        assert!(vertices >= 1, "vertex count must be positive");
        if let Some(v) = self.entries.get(&(chips, vertices)) {
            return v.clone();
        }
        for l in 0..=chips {
            for n in 1..=vertices {
                if self.entries.contains_key(&(l, n)) {
                    continue;
                }
                let value = if n == 1 {
                    BigUint::one()
                } else if l == 0 {
                    BigUint::zero()
                } else if l == 1 {
                    if n == 2 {
                        BigUint::from(2u32)
                    } else {
                        BigUint::zero()
                    }
                } else {
                    let a = self.entries[&(l - 1, n)].clone();
                    let b = self.entries[&(l - 1, n - 1)].clone();
                    let sub = self.entries[&(l - 2, n - 1)].clone();
                    let sum = a + b.clone() + b;
                    assert!(
                        sum >= sub,
                        "count recurrence went negative at ({l}, {n}); this is an internal invariant"
                    );
                    sum - sub
                };
                self.entries.insert((l, n), value);
            }
        }
        self.entries[&(chips, vertices)].clone()
    }
}

/// One-shot convenience wrapper around [`CountTable`].
pub fn count_recurrence(chips: usize, vertices: usize) -> BigUint {
    CountTable::new().count(chips, vertices)
}

/// Number of weak compositions of `total` into `parts` parts, i.e. the
/// candidate count enumerate_src would have to scan.
fn composition_count(total: usize, parts: usize) -> BigUint {
    // C(total + parts − 1, parts − 1)
    let mut result = BigUint::one();
    for i in 0..parts - 1 {
        result = result * BigUint::from(total + i + 1) / BigUint::from(i + 1);
    }
    result
}

/// Every self-reachable configuration with exactly `chips` chips on `t`, in
/// lexicographic order, by filtering all weak compositions. Guarded by the
/// composition count.
pub fn enumerate_src(t: &Tree, chips: usize, guard: u64) -> Result<Vec<ChipConfig>> {
    let n = t.n();
    if composition_count(chips, n) > BigUint::from(guard) {
        return Err(Error::GuardExceeded {
            what: "composition enumeration",
            limit: guard,
        });
    }
    let mut out = Vec::new();
    let mut current = vec![0u64; n];
    fill_compositions(t, chips as u64, 0, &mut current, &mut out)?;
    Ok(out)
}

fn fill_compositions(
    t: &Tree,
    remaining: u64,
    idx: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<ChipConfig>,
) -> Result<()> {
    if idx == current.len() - 1 {
        current[idx] = remaining;
        let cfg = ChipConfig::new(current.clone()).expect("composition totals are small");
        if is_self_reachable_tree(t, &cfg)? {
            out.push(cfg);
        }
        current[idx] = 0;
        return Ok(());
    }
    for v in 0..=remaining {
        current[idx] = v;
        fill_compositions(t, remaining - v, idx + 1, current, out)?;
    }
    current[idx] = 0;
    Ok(())
}

/// One tree × chip-count cell of an independence report.
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceRow {
    pub tree: String,
    pub chips: usize,
    pub enumerated: u64,
    pub expected: String,
    pub pass: bool,
}

/// Comparison of exhaustive enumeration against the recurrence, across every
/// non-isomorphic tree on `n` vertices.
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceReport {
    pub n: usize,
    pub rows: Vec<IndependenceRow>,
}

impl IndependenceReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

impl fmt::Display for IndependenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(
                f,
                "{} {} chips={}: enumerated {} expected {}",
                if r.pass { "ok  " } else { "FAIL" },
                r.tree,
                r.chips,
                r.enumerated,
                r.expected
            )?;
        }
        if self.all_pass() {
            writeln!(f, "all {} counts match", self.rows.len())
        } else {
            writeln!(
                f,
                "{} of {} counts mismatched",
                self.rows.iter().filter(|r| !r.pass).count(),
                self.rows.len()
            )
        }
    }
}

/// Checks |enumerate_src(t, ℓ)| = C(ℓ, n) for every catalog tree on `n`
/// vertices and every ℓ ≤ `max_chips`. The counts must not depend on which
/// tree was chosen.
pub fn verify_tree_independence(n: usize, max_chips: usize) -> Result<IndependenceReport> {
    verify_tree_independence_guarded(n, max_chips, crate::DEFAULT_STATE_GUARD)
}

pub fn verify_tree_independence_guarded(
    n: usize,
    max_chips: usize,
    guard: u64,
) -> Result<IndependenceReport> {
    let trees = catalog::trees_on(n)?;
    let mut table = CountTable::new();
    let mut rows = Vec::new();
    for entry in &trees {
        for chips in 0..=max_chips {
            let enumerated = enumerate_src(&entry.tree, chips, guard)?.len() as u64;
            let expected = table.count(chips, n);
            rows.push(IndependenceRow {
                tree: entry.name.to_string(),
                chips,
                enumerated,
                pass: BigUint::from(enumerated) == expected,
                expected: expected.to_string(),
            });
        }
    }
    Ok(IndependenceReport { n, rows })
}

/// The count table plus its two antidiagonal readings, for eyeball
/// comparison against published sequence data. Offline only.
#[derive(Debug, Clone, Serialize)]
pub struct OeisReport {
    pub depth: usize,
    /// `rows[l][n-1]` = C(l, n) for l in 0..=depth, n in 1..=depth.
    pub rows: Vec<Vec<String>>,
    /// Complete antidiagonals (l + n − 1 = d for d < depth), each read with
    /// l ascending, flattened.
    pub diagonals_l_ascending: Vec<String>,
    /// The transposed reading: each antidiagonal with l descending.
    pub diagonals_l_descending: Vec<String>,
}

impl fmt::Display for OeisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "self-reachable counts C(l, n), rows l = 0..={}, columns n = 1..={}:",
            self.depth, self.depth
        )?;
        for (l, row) in self.rows.iter().enumerate() {
            writeln!(f, "l={l}: {}", row.join(" "))?;
        }
        writeln!(
            f,
            "antidiagonals (l ascending): {}",
            self.diagonals_l_ascending.join(", ")
        )?;
        writeln!(
            f,
            "antidiagonals (l descending): {}",
            self.diagonals_l_descending.join(", ")
        )
    }
}

/// Emits C(l, n) for l ≤ depth, n ≤ depth together with both antidiagonal
/// reading orders.
pub fn oeis_crosscheck(depth: usize) -> OeisReport {
    assert!(depth >= 1, "depth must be positive");
    let mut table = CountTable::new();
    let rows: Vec<Vec<String>> = (0..=depth)
        .map(|l| (1..=depth).map(|n| table.count(l, n).to_string()).collect())
        .collect();
    let mut asc = Vec::new();
    let mut desc = Vec::new();
    for d in 0..depth {
        // cells (l, n) with l + (n − 1) = d; all lie inside the table
        for l in 0..=d {
            asc.push(table.count(l, d - l + 1).to_string());
        }
        for l in (0..=d).rev() {
            desc.push(table.count(l, d - l + 1).to_string());
        }
    }
    OeisReport {
        depth,
        rows,
        diagonals_l_ascending: asc,
        diagonals_l_descending: desc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> ChipConfig {
        s.parse().unwrap()
    }

    #[test]
    fn recurrence_small_values() {
        assert_eq!(count_recurrence(1, 2), BigUint::from(2u32));
        assert_eq!(count_recurrence(5, 1), BigUint::one());
        assert_eq!(count_recurrence(2, 2), BigUint::from(3u32));
        assert_eq!(count_recurrence(3, 4), BigUint::from(8u32));
        assert_eq!(count_recurrence(0, 4), BigUint::zero());
        assert_eq!(count_recurrence(1, 3), BigUint::zero());
        // one chip per edge is the smallest interesting diagonal: 2^(n−1)
        for n in 1..10usize {
            assert_eq!(count_recurrence(n - 1, n), BigUint::from(1u64 << (n - 1)));
        }
    }

    #[test]
    fn enumeration_matches_hand_counts() {
        let p2: Tree = "n 2\n0 1".parse().unwrap();
        assert_eq!(
            enumerate_src(&p2, 2, 1000).unwrap(),
            vec![cfg("0,2"), cfg("1,1"), cfg("2,0")]
        );
        let p3: Tree = "n 3\n0 1\n1 2".parse().unwrap();
        assert_eq!(
            enumerate_src(&p3, 2, 1000).unwrap(),
            vec![cfg("0,1,1"), cfg("0,2,0"), cfg("1,0,1"), cfg("1,1,0")]
        );
        assert!(enumerate_src(&p3, 1, 1000).unwrap().is_empty());
        assert!(matches!(
            enumerate_src(&p3, 100, 10),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn independence_reports() {
        let r = verify_tree_independence(4, 3).unwrap();
        assert!(r.all_pass());
        // both trees on 4 vertices, chip counts (0,0,0,8)
        let k13: Vec<u64> = r
            .rows
            .iter()
            .filter(|row| row.tree == "K1,3")
            .map(|row| row.enumerated)
            .collect();
        assert_eq!(k13, vec![0, 0, 0, 8]);

        let r = verify_tree_independence(1, 2).unwrap();
        assert!(r.all_pass());
        assert_eq!(
            r.rows.iter().map(|row| row.enumerated).collect::<Vec<_>>(),
            vec![1, 1, 1]
        );

        let r = verify_tree_independence(3, 3).unwrap();
        let p3: Vec<u64> = r.rows.iter().map(|row| row.enumerated).collect();
        assert_eq!(p3, vec![0, 0, 4, 8]);

        assert_eq!(
            verify_tree_independence(8, 1).unwrap_err(),
            Error::CatalogMissing(8)
        );
    }

    #[test]
    fn oeis_table_contents() {
        let r = oeis_crosscheck(2);
        assert_eq!(r.rows[1][1], "2"); // C(1, 2)
        let r = oeis_crosscheck(1);
        assert_eq!(r.rows[0][0], "1"); // C(0, 1)
        assert_eq!(r.diagonals_l_ascending, vec!["1"]);
        let r = oeis_crosscheck(4);
        assert_eq!(r.rows[3][3], "8"); // C(3, 4)
        // antidiagonal d=2 cells: (l,n) = (0,3), (1,2), (2,1)
        assert_eq!(r.diagonals_l_ascending[3..6], ["0".to_string(), "2".into(), "1".into()]);
        assert_eq!(r.diagonals_l_descending[3..6], ["1".to_string(), "2".into(), "0".into()]);
    }

    #[test]
    fn counts_are_monotone_in_chips() {
        let mut table = CountTable::new();
        for n in 1..=7usize {
            for l in 1..=12usize {
                assert!(
                    table.count(l + 1, n) >= table.count(l, n),
                    "monotonicity violated at ({l}, {n})"
                );
            }
        }
    }
}
