use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// An integer partition `m₁ ≥ m₂ ≥ … ≥ m_ℓ > 0` with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Validate and trim. Parts must be weakly decreasing.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The rectangle `(k, …, k)` with `len` rows.
    pub fn rectangle(k: usize, len: usize) -> Self {
        if k == 0 {
            return Self::empty();
        }
        Partition(vec![k; len])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// `m_j` (1-based), zero beyond the length.
    pub fn part(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.0.get(j - 1).copied().unwrap_or(0)
    }

    /// `μ + (k, …, k)` with the shift of length `len`.
    pub fn shifted(&self, k: usize, len: usize) -> Result<Self> {
        if self.len() > len {
            return Err(Error::PartitionTooLong {
                length: self.len(),
                bound: len,
            });
        }
        Partition::new((1..=len).map(|j| self.part(j) + k).collect())
    }

    /// Inverse of [`Partition::shifted`]: `None` unless the first `len`
    /// parts are all at least `k` and nothing lies beyond them.
    pub fn unshifted(&self, k: usize, len: usize) -> Option<Self> {
        if self.len() > len || (1..=len).any(|j| self.part(j) < k) {
            return None;
        }
        Partition::new((1..=len).map(|j| self.part(j) - k).collect()).ok()
    }

    pub fn conjugate(&self) -> Self {
        let first = self.part(1);
        Partition(
            (1..=first)
                .map(|i| self.0.iter().filter(|&&m| m >= i).count())
                .collect(),
        )
    }

    /// Cells `(i, j)`, 0-based row and column.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| (0..m).map(move |j| (i, j)))
    }

    /// Product of hook lengths.
    pub fn hook_product(&self) -> f64 {
        let conj = self.conjugate();
        self.cells()
            .map(|(i, j)| (self.0[i] - j + conj.0[j] - i - 1) as f64)
            .product()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<&[usize]> for Partition {
    type Error = Error;
    fn try_from(parts: &[usize]) -> Result<Self> {
        Partition::new(parts.to_vec())
    }
}

/// All partitions with at most `length_bound` parts and weight at most
/// `weight_bound`, graded by weight and reverse-lexicographic within a
/// weight (so `(2)` precedes `(1,1)`).
pub fn enumerate_partitions(length_bound: usize, weight_bound: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for n in 0..=weight_bound {
        let mut current = Vec::new();
        partitions_of(n, n, length_bound, &mut current, &mut out);
    }
    out
}

fn partitions_of(
    remaining: usize,
    max_part: usize,
    slots: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    if slots == 0 {
        return;
    }
    for m in (1..=max_part.min(remaining)).rev() {
        current.push(m);
        partitions_of(remaining - m, m, slots - 1, current, out);
        current.pop();
    }
}

/// Number of standard Young tableaux of shape `μ`, computed exactly by the
/// corner-removal recursion (agrees with the hook-length formula).
pub fn num_syt(mu: &Partition) -> u128 {
    fn go(parts: &[usize], memo: &mut HashMap<Vec<usize>, u128>) -> u128 {
        if parts.iter().sum::<usize>() <= 1 {
            return 1;
        }
        if let Some(&v) = memo.get(parts) {
            return v;
        }
        let mut total = 0u128;
        for i in 0..parts.len() {
            let next = parts.get(i + 1).copied().unwrap_or(0);
            if parts[i] > next {
                let mut smaller = parts.to_vec();
                smaller[i] -= 1;
                while smaller.last() == Some(&0) {
                    smaller.pop();
                }
                total += go(&smaller, memo);
            }
        }
        memo.insert(parts.to_vec(), total);
        total
    }
    go(mu.parts(), &mut HashMap::new())
}
