//! Simple undirected graphs and validated trees, plus the structural helpers
//! the dynamics lean on: Laplacian matrices, connected-subset (subtree)
//! enumeration, leaf removal with explicit index remapping, and uniformly
//! random labeled trees from Prüfer sequences.
//!
//! Text format: first line `n <count>`, then one `u v` edge per line with
//! 0-based indices. The serializer orders edges lexicographically by
//! `(min, max)` so output is stable.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, normalizing each edge to `(min, max)` and rejecting
    /// self-loops, duplicates, and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges: norm, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as normalized `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges incident to `v`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.adj[v].len())
    }

    /// Neighbors of `v` in ascending order.
    ///
    /// Panics on an out-of-range index; use [`Graph::degree`] for a checked
    /// probe first.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Laplacian matrix: degree on the diagonal, −1 where an edge runs.
    /// Every row sums to zero.
    pub fn laplacian(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.n]; self.n];
        for (v, row) in m.iter_mut().enumerate() {
            row[v] = self.adj[v].len() as i64;
            for &u in &self.adj[v] {
                row[u] = -1;
            }
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for &(u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() {
                continue;
            }
            let mut parts = text.split_whitespace();
            if n.is_none() {
                if parts.next() != Some("n") {
                    return Err(Error::ParseGraph {
                        line,
                        reason: "expected header `n <count>`".into(),
                    });
                }
                let count = parts
                    .next()
                    .ok_or(Error::ParseGraph {
                        line,
                        reason: "missing vertex count".into(),
                    })?
                    .parse()
                    .map_err(|_| Error::ParseGraph {
                        line,
                        reason: "vertex count is not a nonnegative integer".into(),
                    })?;
                if parts.next().is_some() {
                    return Err(Error::ParseGraph {
                        line,
                        reason: "trailing tokens after vertex count".into(),
                    });
                }
                n = Some(count);
                continue;
            }
            let endpoint = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or(Error::ParseGraph {
                    line,
                    reason: "expected edge `u v`".into(),
                })?
                .parse()
                .map_err(|_| Error::ParseGraph {
                    line,
                    reason: "edge endpoint is not a nonnegative integer".into(),
                })
            };
            let u = endpoint(parts.next())?;
            let v = endpoint(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::ParseGraph {
                    line,
                    reason: "trailing tokens after edge".into(),
                });
            }
            edges.push((u, v));
        }
        match n {
            Some(n) => Graph::new(n, &edges),
            None => Err(Error::ParseGraph {
                line: 1,
                reason: "empty input; expected header `n <count>`".into(),
            }),
        }
    }
}

/// A connected acyclic [`Graph`], validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    graph: Graph,
}

impl Tree {
    pub fn new(graph: Graph) -> Result<Self> {
        if graph.edges.len() != graph.n - 1 {
            return Err(Error::NotATree(format!(
                "{} vertices require {} edges, found {}",
                graph.n,
                graph.n - 1,
                graph.edges.len()
            )));
        }
        if !graph.is_connected() {
            return Err(Error::NotATree("graph is disconnected".into()));
        }
        Ok(Tree { graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.graph.degree(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }

    /// Vertices of degree 1 (for a single vertex: the vertex itself has
    /// degree 0 and is not listed).
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.graph.n)
            .filter(|&v| self.graph.adj[v].len() == 1)
            .collect()
    }

    /// Uniformly random labeled tree on `n` vertices, deterministic per seed.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(n, &mut rng)
    }

    /// Like [`Tree::random`] but driven by an existing RNG.
    pub fn random_with(n: usize, rng: &mut impl Rng) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n <= 2 {
            return Self::from_prufer(&[], n);
        }
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        Self::from_prufer(&seq, n)
    }

    /// Decodes a Prüfer sequence (length n−2, entries in 0..n) into the
    /// corresponding labeled tree.
    pub(crate) fn from_prufer(seq: &[usize], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n == 1 {
            return Tree::new(Graph::new(1, &[])?);
        }
        assert_eq!(seq.len(), n - 2, "Prüfer sequence length must be n - 2");
        let mut degree = vec![1usize; n];
        for &v in seq {
            assert!(v < n, "Prüfer entry out of range");
            degree[v] += 1;
        }
        let mut leaves: BinaryHeap<Reverse<usize>> = (0..n)
            .filter(|&v| degree[v] == 1)
            .map(Reverse)
            .collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &v in seq {
            let Reverse(leaf) = leaves.pop().expect("decoding invariant: a leaf always remains");
            edges.push((leaf, v));
            degree[leaf] -= 1;
            degree[v] -= 1;
            if degree[v] == 1 {
                leaves.push(Reverse(v));
            }
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        assert_eq!(rest.len(), 2, "decoding invariant: exactly two vertices remain");
        edges.push((rest[0], rest[1]));
        Tree::new(Graph::new(n, &edges)?)
    }

    /// Every nonempty vertex subset inducing a connected subgraph, each
    /// exactly once, sorted. Guarded: refuses trees larger than `size_limit`
    /// because the subset count grows exponentially.
    pub fn enumerate_subtrees(&self, size_limit: usize) -> Result<Vec<Vec<usize>>> {
        if self.graph.n > size_limit {
            return Err(Error::GuardExceeded {
                what: "subtree enumeration",
                limit: size_limit as u64,
            });
        }
        let mut out = Vec::new();
        for root in 0..self.graph.n {
            let ext: Vec<usize> = self.graph.adj[root]
                .iter()
                .copied()
                .filter(|&u| u > root)
                .collect();
            let mut current = vec![root];
            self.extend_subtrees(root, &mut current, ext, &mut out);
        }
        out.sort();
        Ok(out)
    }

    // Rooted extension enumeration: every connected subset is generated once,
    // from its minimum vertex. On a tree no candidate can reappear (that
    // would close a cycle), so no dedup set is needed.
    fn extend_subtrees(
        &self,
        root: usize,
        current: &mut Vec<usize>,
        ext: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let mut sorted = current.clone();
        sorted.sort_unstable();
        out.push(sorted);
        for i in 0..ext.len() {
            let v = ext[i];
            let mut next_ext: Vec<usize> = ext[i + 1..].to_vec();
            next_ext.extend(
                self.graph.adj[v]
                    .iter()
                    .copied()
                    .filter(|&u| u > root && !current.contains(&u)),
            );
            current.push(v);
            self.extend_subtrees(root, current, next_ext, out);
            current.pop();
        }
    }

    /// Deletes a degree-1 vertex, shifting higher indices down by one.
    /// The returned [`LeafRemoval`] carries the smaller tree, the removed
    /// leaf's former neighbor (in new indices), and the index remapping.
    pub fn remove_leaf(&self, leaf: usize) -> Result<LeafRemoval> {
        self.graph.check_vertex(leaf)?;
        if self.graph.n == 1 {
            return Err(Error::SingleVertexTree);
        }
        if self.graph.adj[leaf].len() != 1 {
            return Err(Error::NotALeaf(leaf));
        }
        let neighbor_old = self.graph.adj[leaf][0];
        let shift = |v: usize| if v > leaf { v - 1 } else { v };
        let edges: Vec<(usize, usize)> = self
            .graph
            .edges
            .iter()
            .filter(|&&(u, v)| u != leaf && v != leaf)
            .map(|&(u, v)| (shift(u), shift(v)))
            .collect();
        let tree = Tree::new(Graph::new(self.graph.n - 1, &edges)?)?;
        Ok(LeafRemoval {
            tree,
            removed: leaf,
            neighbor: shift(neighbor_old),
        })
    }

    /// Tree induced by a set of vertices, or an error if the set is not
    /// connected. Returned alongside the new→old index map (the sorted,
    /// deduplicated vertex list).
    pub(crate) fn induced(&self, verts: &[usize]) -> Result<(Tree, Vec<usize>)> {
        let mut old: Vec<usize> = verts.to_vec();
        old.sort_unstable();
        old.dedup();
        if old.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut new_of = vec![usize::MAX; self.graph.n];
        for (new, &v) in old.iter().enumerate() {
            self.graph.check_vertex(v)?;
            new_of[v] = new;
        }
        let edges: Vec<(usize, usize)> = self
            .graph
            .edges
            .iter()
            .filter(|&&(u, v)| new_of[u] != usize::MAX && new_of[v] != usize::MAX)
            .map(|&(u, v)| (new_of[u], new_of[v]))
            .collect();
        let tree = Tree::new(Graph::new(old.len(), &edges)?)?;
        Ok((tree, old))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.graph.fmt(f)
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tree::new(s.parse()?)
    }
}

/// Result of [`Tree::remove_leaf`]: the smaller tree plus the invertible
/// index remapping (the removed slot is deleted, higher indices shift down).
#[derive(Debug, Clone)]
pub struct LeafRemoval {
    tree: Tree,
    removed: usize,
    neighbor: usize,
}

impl LeafRemoval {
    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    /// The removed leaf's index in the original tree.
    pub fn removed(&self) -> usize {
        self.removed
    }

    /// The leaf's unique former neighbor, as an index into the smaller tree.
    pub fn neighbor(&self) -> usize {
        self.neighbor
    }

    /// Translates a smaller-tree index back to the original labeling.
    pub fn to_old(&self, new: usize) -> usize {
        if new < self.removed {
            new
        } else {
            new + 1
        }
    }

    /// Translates an original index into the smaller tree; `None` for the
    /// removed leaf itself.
    pub fn to_new(&self, old: usize) -> Option<usize> {
        match old.cmp(&self.removed) {
            std::cmp::Ordering::Less => Some(old),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(old - 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path(n: usize) -> Tree {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Tree::new(Graph::new(n, &edges).unwrap()).unwrap()
    }

    fn star(k: usize) -> Tree {
        let edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
        Tree::new(Graph::new(k + 1, &edges).unwrap()).unwrap()
    }

    #[test]
    fn degree_basics() {
        let p2 = path(2);
        assert_eq!(p2.degree(0).unwrap(), 1);
        assert_eq!(star(3).degree(0).unwrap(), 3);
        let k1 = path(1);
        assert_eq!(k1.degree(0).unwrap(), 0);
        assert_eq!(
            p2.degree(5),
            Err(Error::VertexOutOfRange { vertex: 5, n: 2 })
        );
    }

    #[test]
    fn laplacian_small_cases() {
        assert_eq!(path(2).graph().laplacian(), vec![vec![1, -1], vec![-1, 1]]);
        assert_eq!(path(1).graph().laplacian(), vec![vec![0]]);
        assert_eq!(
            path(3).graph().laplacian(),
            vec![vec![1, -1, 0], vec![-1, 2, -1], vec![0, -1, 1]]
        );
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert_eq!(Graph::new(0, &[]), Err(Error::EmptyGraph));
        assert_eq!(Graph::new(2, &[(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn parse_and_serialize() {
        let g: Graph = "n 2\n0 1".parse().unwrap();
        assert_eq!(g, *path(2).graph());
        let single: Graph = "n 1".parse().unwrap();
        assert_eq!(single.n(), 1);
        assert!(matches!(
            "n 2\n0 0".parse::<Graph>(),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            "2\n0 1".parse::<Graph>(),
            Err(Error::ParseGraph { line: 1, .. })
        ));
        assert!(matches!(
            "n 3\n0 1\n1 2 9".parse::<Graph>(),
            Err(Error::ParseGraph { line: 3, .. })
        ));
        // serializer emits normalized (min,max) pairs in lexicographic order
        let g: Graph = "n 3\n2 1\n1 0".parse().unwrap();
        assert_eq!(g.to_string(), "n 3\n0 1\n1 2\n");
    }

    #[test]
    fn tree_validation() {
        assert!(matches!(
            Tree::new(Graph::new(3, &[(0, 1)]).unwrap()),
            Err(Error::NotATree(_))
        ));
        // right edge count but disconnected (cycle + isolated vertex)
        assert!(matches!(
            Tree::new(Graph::new(4, &[(0, 1), (1, 2), (0, 2)]).unwrap()),
            Err(Error::NotATree(_))
        ));
        assert!(Tree::new(Graph::new(3, &[(0, 1), (1, 2)]).unwrap()).is_ok());
    }

    #[test]
    fn subtree_enumeration_counts() {
        assert_eq!(path(3).enumerate_subtrees(20).unwrap().len(), 6);
        assert_eq!(star(3).enumerate_subtrees(20).unwrap().len(), 11);
        assert_eq!(path(1).enumerate_subtrees(20).unwrap(), vec![vec![0]]);
        assert_eq!(
            path(5).enumerate_subtrees(4),
            Err(Error::GuardExceeded {
                what: "subtree enumeration",
                limit: 4
            })
        );
    }

    #[test]
    fn subtree_sets_are_connected_and_distinct() {
        let t = star(3);
        let subs = t.enumerate_subtrees(20).unwrap();
        for s in &subs {
            let (sub, _) = t.induced(s).unwrap();
            assert_eq!(sub.n(), s.len());
        }
        let mut dedup = subs.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), subs.len());
    }

    #[test]
    fn leaf_removal() {
        let r = path(3).remove_leaf(2).unwrap();
        assert_eq!(r.tree(), &path(2));
        assert_eq!(r.neighbor(), 1);

        let r = star(3).remove_leaf(3).unwrap();
        assert_eq!(r.tree(), &star(2));
        assert_eq!(r.neighbor(), 0);

        let r = path(2).remove_leaf(1).unwrap();
        assert_eq!(r.tree(), &path(1));
        assert_eq!(r.neighbor(), 0);

        assert!(matches!(path(3).remove_leaf(1), Err(Error::NotALeaf(1))));
    }

    #[test]
    fn leaf_removal_remaps_indices() {
        // remove the middle-indexed leaf of a star: higher indices shift down
        let r = star(3).remove_leaf(2).unwrap();
        assert_eq!(r.to_old(0), 0);
        assert_eq!(r.to_old(2), 3);
        assert_eq!(r.to_new(3), Some(2));
        assert_eq!(r.to_new(2), None);
        assert_eq!(r.to_new(1), Some(1));
        assert!(matches!(path(1).remove_leaf(0), Err(Error::SingleVertexTree)));
    }

    #[test]
    fn random_trees_are_trees() {
        for seed in 0..20 {
            let t = Tree::random(5, seed).unwrap();
            assert_eq!(t.graph().edges().len(), 4);
            assert!(t.graph().is_connected());
        }
        assert_eq!(Tree::random(1, 9).unwrap().n(), 1);
        assert_eq!(Tree::random(2, 9).unwrap().graph().edges(), &[(0, 1)]);
        // determinism per seed
        assert_eq!(Tree::random(9, 42).unwrap(), Tree::random(9, 42).unwrap());
    }

    proptest! {
        #[test]
        fn laplacian_rows_sum_to_zero(seed in 0u64..500, n in 1usize..12) {
            let t = Tree::random(n, seed).unwrap();
            for row in t.graph().laplacian() {
                prop_assert_eq!(row.iter().sum::<i64>(), 0);
            }
        }

        #[test]
        fn graph_text_round_trips(seed in 0u64..500, n in 1usize..12) {
            let t = Tree::random(n, seed).unwrap();
            let text = t.graph().to_string();
            let back: Graph = text.parse().unwrap();
            prop_assert_eq!(&back, t.graph());
        }

        #[test]
        fn path_and_star_subtree_counts(n in 1usize..9) {
            prop_assert_eq!(path(n).enumerate_subtrees(20).unwrap().len(), n * (n + 1) / 2);
            if n >= 2 {
                let k = n - 1;
                prop_assert_eq!(star(k).enumerate_subtrees(20).unwrap().len(), k + (1 << k));
            }
        }

        #[test]
        fn remove_then_reattach_is_identity(seed in 0u64..200, n in 2usize..10) {
            let t = Tree::random(n, seed).unwrap();
            let leaf = *t.leaves().last().unwrap();
            let r = t.remove_leaf(leaf).unwrap();
            // rebuild: insert the leaf back at its old index, attached to its
            // old neighbor
            let mut edges: Vec<(usize, usize)> = r
                .tree()
                .graph()
                .edges()
                .iter()
                .map(|&(u, v)| (r.to_old(u), r.to_old(v)))
                .collect();
            edges.push((r.to_old(r.neighbor()), leaf));
            let rebuilt = Tree::new(Graph::new(n, &edges).unwrap()).unwrap();
            prop_assert_eq!(rebuilt, t);
        }
    }
}
