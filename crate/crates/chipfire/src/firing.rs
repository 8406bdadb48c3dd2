//! Chip configurations, firing sequences, and the dynamics that connect
//! them: a vertex may fire when it holds at least as many chips as its
//! degree, sending one chip along each incident edge. Applying a sequence
//! is equivalent to subtracting the Laplacian times the sequence's
//! fire-count vector, which is what [`apply_sequence_unchecked`] computes
//! directly.
//!
//! Text forms: configurations are comma-separated counts (`"1,0,2"`),
//! sequences are comma-separated 0-based vertex indices (`"0,1,0"`, empty
//! string for the empty sequence). Both serialize to JSON as those strings.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Nonnegative chip counts per vertex. Construction guarantees the total
/// fits in a `u64`, so later arithmetic cannot overflow.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChipConfig {
    chips: Vec<u64>,
}

impl ChipConfig {
    pub fn new(chips: Vec<u64>) -> Result<Self> {
        if chips.is_empty() {
            return Err(Error::ParseConfig("a configuration needs at least one entry".into()));
        }
        let total: u128 = chips.iter().map(|&c| c as u128).sum();
        if total > u64::MAX as u128 {
            return Err(Error::Overflow);
        }
        Ok(ChipConfig { chips })
    }

    /// All-zero configuration on `n` vertices (`n` ≥ 1).
    pub fn zeros(n: usize) -> Self {
        ChipConfig { chips: vec![0; n] }
    }

    // Internal constructor for vectors whose total is already known to fit
    // (e.g. results of chip-conserving fires).
    pub(crate) fn from_vec_unchecked(chips: Vec<u64>) -> Self {
        debug_assert!(chips.iter().map(|&c| c as u128).sum::<u128>() <= u64::MAX as u128);
        ChipConfig { chips }
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn chips(&self) -> &[u64] {
        &self.chips
    }

    pub fn get(&self, v: usize) -> Option<u64> {
        self.chips.get(v).copied()
    }

    /// Sum of all entries (the configuration's ℓ). Cannot overflow thanks
    /// to the construction-time check.
    pub fn total(&self) -> u64 {
        self.chips.iter().sum()
    }

    /// Entrywise sum, rejecting length mismatch and total overflow.
    pub fn add(&self, other: &ChipConfig) -> Result<ChipConfig> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                got: other.len(),
                n: self.len(),
            });
        }
        ChipConfig::new(
            self.chips
                .iter()
                .zip(&other.chips)
                .map(|(&a, &b)| a.checked_add(b).ok_or(Error::Overflow))
                .collect::<Result<Vec<u64>>>()?,
        )
    }
}

impl std::ops::Index<usize> for ChipConfig {
    type Output = u64;

    fn index(&self, v: usize) -> &u64 {
        &self.chips[v]
    }
}

impl fmt::Display for ChipConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.chips {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for ChipConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::ParseConfig("empty input".into()));
        }
        let chips = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::ParseConfig(format!("bad chip count `{}`", tok.trim())))
            })
            .collect::<Result<Vec<u64>>>()?;
        ChipConfig::new(chips)
    }
}

impl Serialize for ChipConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ChipConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// Ordered list of vertex firings. The empty sequence is valid and acts as
/// the identity; self-reachability separately demands nonemptiness.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FiringSequence {
    moves: Vec<usize>,
}

impl FiringSequence {
    pub fn new(moves: Vec<usize>) -> Self {
        FiringSequence { moves }
    }

    pub fn empty() -> Self {
        FiringSequence::default()
    }

    pub fn moves(&self) -> &[usize] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// The concatenation {self, other}.
    pub fn concat(&self, other: &FiringSequence) -> FiringSequence {
        let mut moves = self.moves.clone();
        moves.extend_from_slice(&other.moves);
        FiringSequence { moves }
    }

    /// Multiset view: entry `i` counts how often vertex `i` fires.
    pub fn fire_counts(&self, n: usize) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; n];
        for &v in &self.moves {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            counts[v] += 1;
        }
        Ok(counts)
    }

    /// True when the two sequences share no vertex (disjoint as multisets).
    pub fn is_disjoint_from(&self, other: &FiringSequence) -> bool {
        self.moves.iter().all(|v| !other.moves.contains(v))
    }
}

impl From<Vec<usize>> for FiringSequence {
    fn from(moves: Vec<usize>) -> Self {
        FiringSequence { moves }
    }
}

impl fmt::Display for FiringSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.moves {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for FiringSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(FiringSequence::empty());
        }
        let moves = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::ParseSequence(format!("bad vertex index `{}`", tok.trim())))
            })
            .collect::<Result<Vec<usize>>>()?;
        Ok(FiringSequence { moves })
    }
}

impl Serialize for FiringSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FiringSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

fn check_dims(g: &Graph, c: &ChipConfig) -> Result<()> {
    if c.len() != g.n() {
        return Err(Error::DimensionMismatch {
            got: c.len(),
            n: g.n(),
        });
    }
    Ok(())
}

/// True iff `v` holds at least `degree(v)` chips.
pub fn is_legal_fire(g: &Graph, c: &ChipConfig, v: usize) -> Result<bool> {
    check_dims(g, c)?;
    let deg = g.degree(v)? as u64;
    Ok(c[v] >= deg)
}

/// Fires `v`: it loses `degree(v)` chips and each neighbor gains one.
/// The total is conserved.
pub fn fire(g: &Graph, c: &ChipConfig, v: usize) -> Result<ChipConfig> {
    check_dims(g, c)?;
    let deg = g.degree(v)? as u64;
    if c[v] < deg {
        return Err(Error::IllegalFire {
            vertex: v,
            available: c[v],
            required: deg,
        });
    }
    let mut chips = c.chips().to_vec();
    chips[v] -= deg;
    for &u in g.neighbors(v) {
        chips[u] += 1;
    }
    Ok(ChipConfig::from_vec_unchecked(chips))
}

/// Applies every firing in order, checking legality at each step; the error
/// pinpoints the first illegal step.
pub fn apply_sequence(g: &Graph, c: &ChipConfig, seq: &FiringSequence) -> Result<ChipConfig> {
    check_dims(g, c)?;
    let mut cur = c.clone();
    for (step, &v) in seq.moves().iter().enumerate() {
        cur = fire(g, &cur, v).map_err(|e| match e {
            Error::IllegalFire {
                vertex,
                available,
                required,
            } => Error::IllegalStep {
                step,
                vertex,
                available,
                required,
            },
            other => other,
        })?;
    }
    Ok(cur)
}

/// The linear-algebra form of sequence application: `c − Δ · fire_counts`,
/// with no legality checking, so entries may come out negative.
pub fn apply_sequence_unchecked(g: &Graph, c: &ChipConfig, seq: &FiringSequence) -> Result<Vec<i128>> {
    check_dims(g, c)?;
    let counts = seq.fire_counts(g.n())?;
    let lap = g.laplacian();
    Ok((0..g.n())
        .map(|i| {
            let delta: i128 = (0..g.n())
                .map(|j| lap[i][j] as i128 * counts[j] as i128)
                .sum();
            c[i] as i128 - delta
        })
        .collect())
}

/// Removes the first occurrence of every vertex from `seq`. Requires `seq`
/// legal from `c` and covering every vertex at least once; the result is
/// again legal from `c` and reaches the same configuration — both facts are
/// revalidated here, loudly, because other code trusts this as an oracle.
pub fn reduce_sequence(g: &Graph, c: &ChipConfig, seq: &FiringSequence) -> Result<FiringSequence> {
    let full_result = apply_sequence(g, c, seq)?;
    let counts = seq.fire_counts(g.n())?;
    if let Some(missing) = counts.iter().position(|&k| k == 0) {
        return Err(Error::VertexNeverFired(missing));
    }
    let mut seen = vec![false; g.n()];
    let mut reduced = Vec::with_capacity(seq.len().saturating_sub(g.n()));
    for &v in seq.moves() {
        if seen[v] {
            reduced.push(v);
        } else {
            seen[v] = true;
        }
    }
    let reduced = FiringSequence::new(reduced);
    let check = apply_sequence(g, c, &reduced)
        .expect("reduction must stay legal; this is an internal invariant");
    assert_eq!(
        check, full_result,
        "reduction must preserve the final configuration; this is an internal invariant"
    );
    Ok(reduced)
}
