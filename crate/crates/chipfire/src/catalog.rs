//! Hard-coded catalog of all non-isomorphic trees on 1..=7 vertices.
//!
//! The counts are the classic 1, 1, 1, 2, 3, 6, 11 (25 trees total). Each
//! tree is labeled so that vertex n−1 is a leaf, which the enumeration
//! checks rely on when they designate "the" leaf of a tree. A self-test
//! below regenerates every labeled tree from its Prüfer sequence and checks
//! this list is complete and duplicate-free via canonical forms.

use crate::error::{Error, Result};
use crate::graph::{Graph, Tree};

/// A catalog entry: a human-readable shape name plus the tree itself.
#[derive(Debug, Clone)]
pub struct CatalogTree {
    pub name: &'static str,
    pub tree: Tree,
}

/// Shape names and edge lists, grouped by vertex count.
///
/// `spider(a,b,...)` is a single center with paths of the given lengths
/// hanging off it; `double-star(a,b)` is two adjacent centers with a−1 and
/// b−1 extra leaves; the two `double-fork` shapes have two degree-3 vertices
/// either adjacent or separated by one vertex.
type Shape = (&'static str, &'static [(usize, usize)]);

const SHAPES: &[&[Shape]] = &[
    // n = 1
    &[("K1", &[])],
    // n = 2
    &[("P2", &[(0, 1)])],
    // n = 3
    &[("P3", &[(0, 1), (1, 2)])],
    // n = 4
    &[
        ("P4", &[(0, 1), (1, 2), (2, 3)]),
        ("K1,3", &[(0, 1), (0, 2), (0, 3)]),
    ],
    // n = 5
    &[
        ("P5", &[(0, 1), (1, 2), (2, 3), (3, 4)]),
        ("spider(2,1,1)", &[(0, 1), (1, 2), (0, 3), (0, 4)]),
        ("K1,4", &[(0, 1), (0, 2), (0, 3), (0, 4)]),
    ],
    // n = 6
    &[
        ("P6", &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]),
        ("spider(3,1,1)", &[(0, 1), (1, 2), (2, 3), (0, 4), (0, 5)]),
        ("spider(2,2,1)", &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5)]),
        ("spider(2,1,1,1)", &[(0, 1), (1, 2), (0, 3), (0, 4), (0, 5)]),
        ("double-star(3,3)", &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]),
        ("K1,5", &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]),
    ],
    // n = 7
    &[
        ("P7", &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]),
        (
            "spider(4,1,1)",
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (0, 6)],
        ),
        (
            "spider(3,2,1)",
            &[(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (0, 6)],
        ),
        (
            "spider(2,2,2)",
            &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
        ),
        (
            "spider(3,1,1,1)",
            &[(0, 1), (1, 2), (2, 3), (0, 4), (0, 5), (0, 6)],
        ),
        (
            "spider(2,2,1,1)",
            &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (0, 6)],
        ),
        (
            "spider(2,1,1,1,1)",
            &[(0, 1), (1, 2), (0, 3), (0, 4), (0, 5), (0, 6)],
        ),
        (
            "double-star(4,3)",
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (1, 6)],
        ),
        (
            "double-fork-adjacent",
            &[(0, 1), (0, 2), (2, 3), (0, 4), (1, 5), (1, 6)],
        ),
        (
            "double-fork-spaced",
            &[(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6)],
        ),
        (
            "K1,6",
            &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)],
        ),
    ],
];

/// All non-isomorphic trees on `n` vertices, or an error outside 1..=7.
pub fn trees_on(n: usize) -> Result<Vec<CatalogTree>> {
    let shapes = match n {
        1..=7 => SHAPES[n - 1],
        _ => return Err(Error::CatalogMissing(n)),
    };
    Ok(shapes
        .iter()
        .map(|&(name, edges)| CatalogTree {
            name,
            tree: Tree::new(Graph::new(n, edges).expect("catalog edge lists are valid"))
                .expect("catalog entries are trees"),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Canonical form: root at the tree's center(s) and take the smaller of
    /// the one or two rooted encodings, where a rooted encoding is
    /// `(<sorted child encodings>)`.
    fn canonical_code(t: &Tree) -> String {
        fn rooted(t: &Tree, v: usize, parent: Option<usize>) -> String {
            let mut kids: Vec<String> = t
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| Some(u) != parent)
                .map(|u| rooted(t, u, Some(v)))
                .collect();
            kids.sort();
            format!("({})", kids.concat())
        }
        centers(t)
            .into_iter()
            .map(|c| rooted(t, c, None))
            .min()
            .expect("every tree has a center")
    }

    /// One or two middle vertices found by repeatedly stripping leaves.
    fn centers(t: &Tree) -> Vec<usize> {
        let n = t.n();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut degree: Vec<usize> = (0..n).map(|v| t.neighbors(v).len()).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                degree[v] = 0;
                for &u in t.neighbors(v) {
                    if degree[u] > 1 {
                        degree[u] -= 1;
                        if degree[u] == 1 {
                            next.push(u);
                        }
                    }
                }
            }
            layer = next;
        }
        layer
    }

    #[test]
    fn catalog_counts_match_known_values() {
        let expected = [1, 1, 1, 2, 3, 6, 11];
        for (n, &count) in (1..=7).zip(expected.iter()) {
            assert_eq!(trees_on(n).unwrap().len(), count, "n = {n}");
        }
        assert_eq!(trees_on(8).unwrap_err(), Error::CatalogMissing(8));
        assert_eq!(trees_on(0).unwrap_err(), Error::CatalogMissing(0));
    }

    #[test]
    fn highest_index_vertex_is_always_a_leaf() {
        for n in 2..=7 {
            for entry in trees_on(n).unwrap() {
                assert_eq!(
                    entry.tree.degree(n - 1).unwrap(),
                    1,
                    "{} on {n} vertices",
                    entry.name
                );
            }
        }
    }

    /// Regenerate every labeled tree on n vertices from all n^(n−2) Prüfer
    /// sequences; the catalog must list exactly the isomorphism classes seen.
    #[test]
    fn catalog_is_complete_and_duplicate_free() {
        for n in 1..=7usize {
            let catalog_codes: Vec<String> = trees_on(n)
                .unwrap()
                .iter()
                .map(|e| canonical_code(&e.tree))
                .collect();
            let distinct: BTreeSet<&String> = catalog_codes.iter().collect();
            assert_eq!(distinct.len(), catalog_codes.len(), "duplicates at n = {n}");

            let mut generated = BTreeSet::new();
            if n <= 2 {
                generated.insert(canonical_code(&Tree::from_prufer(&[], n).unwrap()));
            } else {
                let len = n - 2;
                let mut seq = vec![0usize; len];
                loop {
                    generated.insert(canonical_code(&Tree::from_prufer(&seq, n).unwrap()));
                    // advance the mixed-radix counter
                    let mut i = 0;
                    while i < len {
                        seq[i] += 1;
                        if seq[i] < n {
                            break;
                        }
                        seq[i] = 0;
                        i += 1;
                    }
                    if i == len {
                        break;
                    }
                }
            }
            let catalog_set: BTreeSet<String> = catalog_codes.into_iter().collect();
            assert_eq!(catalog_set, generated, "catalog mismatch at n = {n}");
        }
    }
}
