use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree for which the combinatorial routines are supported.
pub const MAX_DEGREE: usize = 8;

/// An integer partition of `n`, stored with parts in weakly decreasing order.
///
/// Partitions index both the conjugacy classes (by cycle type) and the
/// irreducible characters of `Sym(n)`. The derived ordering is lexicographic
/// on the part list, so `1^n` is the smallest partition of `n` and `[n]` the
/// largest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u8>,
}

impl Partition {
    /// Builds a partition from arbitrary positive parts (they are sorted).
    pub fn new(parts: impl Into<Vec<u8>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.contains(&0) {
            return Err(Error::Argument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub(crate) fn from_sorted(parts: Vec<u8>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(!parts.contains(&0));
        Partition { parts }
    }

    /// The partition `1^n` (cycle type of the identity).
    pub fn ones(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    /// The one-part partition `[n]` (trivial character).
    pub fn single(n: usize) -> Self {
        Partition { parts: vec![n as u8] }
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn n(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `m_j`: how many parts equal `j`, for `j = 1..=n` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.n() + 1];
        for &p in &self.parts {
            m[p as usize] += 1;
        }
        m
    }

    /// `z_λ = Π_j j^{m_j} m_j!`, the order of the centralizer of an element of
    /// cycle type `λ`.
    pub fn centralizer_size(&self) -> u64 {
        self.multiplicities()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &mj)| (j as u64).pow(mj as u32) * factorial(mj))
            .product()
    }

    /// Number of permutations with this cycle type: `n! / z_λ`.
    pub fn class_size(&self) -> u64 {
        factorial(self.n()) / self.centralizer_size()
    }

    /// Hamming weight of any permutation of this cycle type: the number of
    /// points it moves.
    pub fn hamming_weight(&self) -> usize {
        self.n() - self.parts.iter().filter(|&&p| p == 1).count()
    }

    /// Parity of the cycle type: `(-1)^(n - number of parts)`.
    pub fn sign(&self) -> i64 {
        if (self.n() - self.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0) as usize;
        let parts = (0..width)
            .map(|c| self.parts.iter().filter(|&&p| p as usize > c).count() as u8)
            .collect();
        Partition { parts }
    }

    /// Boxes removable from the Young diagram: the row indices `r` such that
    /// decreasing `parts[r]` by one still gives a partition.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&r| r + 1 == self.parts.len() || self.parts[r] > self.parts[r + 1])
            .collect()
    }

    /// The partition obtained by removing the last box of row `r`.
    pub fn remove_box(&self, r: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts[r] -= 1;
        if parts[r] == 0 {
            parts.remove(r);
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub(crate) fn check_degree(n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        return Err(Error::Range(format!("degree n = {n} must lie in {min}..={max}")));
    }
    Ok(())
}

/// All partitions of `n` in ascending lexicographic order, so `1^n` comes
/// first and `[n]` last. This is the canonical conjugacy-class order.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    check_degree(n, 1, MAX_DEGREE)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    generate(n, n, &mut current, &mut out);
    out.reverse();
    Ok(out)
}

// Emits partitions in descending lexicographic order.
fn generate(remaining: usize, max_part: usize, current: &mut Vec<u8>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition::from_sorted(current.clone()));
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part as u8);
        generate(remaining - part, part, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| partitions(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn canonical_order_starts_with_ones() {
        for n in 1..=8 {
            let ps = partitions(n).unwrap();
            assert_eq!(ps[0], Partition::ones(n));
            assert_eq!(ps.last().unwrap(), &Partition::single(n));
            assert!(ps.windows(2).all(|w| w[0] < w[1]));
            assert!(ps.iter().all(|p| p.n() == n));
        }
        assert_eq!(partitions(1).unwrap(), vec![Partition::new(vec![1]).unwrap()]);
    }

    #[test]
    fn out_of_range_degree() {
        assert!(matches!(partitions(0), Err(Error::Range(_))));
        assert!(matches!(partitions(9), Err(Error::Range(_))));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(Partition::ones(6).class_size(), 1);
        assert_eq!(Partition::new(vec![2, 1]).unwrap().class_size(), 3);
        assert_eq!(Partition::single(6).class_size(), 120);
        for n in 1..=8 {
            let total: u64 = partitions(n).unwrap().iter().map(|p| p.class_size()).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn weights() {
        assert_eq!(Partition::ones(5).hamming_weight(), 0);
        assert_eq!(Partition::new(vec![2, 1, 1, 1]).unwrap().hamming_weight(), 2);
        assert_eq!(Partition::new(vec![3, 2, 2]).unwrap().hamming_weight(), 7);
        for n in 2..=8 {
            assert!(partitions(n).unwrap().iter().all(|p| p.hamming_weight() != 1));
        }
    }

    #[test]
    fn conjugation_and_boxes() {
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(p.conjugate(), Partition::new(vec![2, 1, 1]).unwrap());
        assert_eq!(p.removable_rows(), vec![0, 1]);
        assert_eq!(p.remove_box(1), Partition::single(3));
        assert!(Partition::new(vec![2, 0]).is_err());
    }
}
