use std::fmt;

use crate::error::{Error, Result};
use crate::symmetry::partition::{factorial, Partition, MAX_DEGREE};

/// A permutation of `{0, .., n-1}` stored by its images.
///
/// Composition follows function notation: `a.compose(&b)` maps `x` to
/// `a(b(x))`. Display and the one-based constructor use the points `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u8).collect() }
    }

    /// From zero-based images; fails unless they form a bijection.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::Argument(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// From one-based single-line notation, e.g. `[2, 3, 1]`.
    pub fn from_one_based(images: &[u8]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Argument("one-based images must be positive".into()));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    pub(crate) fn from_images_unchecked(images: Vec<u8>) -> Self {
        Permutation { images }
    }

    /// The transposition swapping zero-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    /// The cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn long_cycle(n: usize) -> Self {
        Permutation { images: (0..n).map(|i| ((i + 1) % n) as u8).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `self⁻¹ · phi · self`.
    pub fn conjugate(&self, phi: &Permutation) -> Permutation {
        self.inverse().compose(phi).compose(self)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn cycle_type(&self) -> Partition {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u8;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_sorted(lengths)
    }

    /// Number of moved points.
    pub fn weight(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i != x as usize).count()
    }

    /// Positions where the single-line forms disagree.
    pub fn hamming_distance(&self, other: &Permutation) -> usize {
        self.images.iter().zip(&other.images).filter(|(a, b)| a != b).count()
    }

    /// Lehmer-code rank; equals the lexicographic index of the image list,
    /// so the identity has rank 0.
    pub fn rank(&self) -> u32 {
        lehmer_rank(&self.images)
    }

    pub fn unrank(rank: u64, n: usize) -> Result<Permutation> {
        if n > MAX_DEGREE {
            return Err(Error::Range(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        let total = factorial(n);
        if rank >= total {
            return Err(Error::Range(format!("rank {rank} is not below {n}! = {total}")));
        }
        let mut images = Vec::with_capacity(n);
        lehmer_unrank_into(rank as u32, n, &mut images);
        Ok(Permutation { images })
    }
}

pub(crate) fn lehmer_rank(images: &[u8]) -> u32 {
    let n = images.len();
    let mut rank = 0u32;
    for i in 0..n {
        let smaller = images[i + 1..].iter().filter(|&&x| x < images[i]).count() as u32;
        rank = rank * (n - i) as u32 + smaller;
    }
    rank
}

pub(crate) fn lehmer_unrank_into(mut rank: u32, n: usize, out: &mut Vec<u8>) {
    out.clear();
    let mut digits = vec![0u32; n];
    for i in (0..n).rev() {
        let base = (n - i) as u32;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    for d in digits {
        out.push(pool.remove(d as usize));
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
