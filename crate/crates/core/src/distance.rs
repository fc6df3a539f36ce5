use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A set of admissible nonzero Hamming distances, a subset of `{2, .., n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DistanceSet {
    mask: u32,
}

impl DistanceSet {
    pub fn empty() -> Self {
        DistanceSet { mask: 0 }
    }

    pub fn new(distances: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = 0u32;
        for d in distances {
            if d < 2 {
                return Err(Error::Argument(format!(
                    "distance {d} is not allowed (distances lie in 2..=n)"
                )));
            }
            if d > 31 {
                return Err(Error::Range(format!("distance {d} is too large")));
            }
            mask |= 1 << d;
        }
        Ok(DistanceSet { mask })
    }

    /// `{d, d+1, .., n}`
    pub fn from_min_distance(n: usize, d: usize) -> Result<Self> {
        if d < 2 || d > n {
            return Err(Error::Argument(format!("minimum distance {d} must lie in 2..={n}")));
        }
        Self::new(d..=n)
    }

    /// `{2, .., n}`
    pub fn full(n: usize) -> Self {
        Self::new(2..=n).expect("2..=n is a valid distance set")
    }

    pub fn contains(&self, d: usize) -> bool {
        d < 32 && self.mask & (1 << d) != 0
    }

    /// Whether a pair at distance `d` may occur in a code; `0` (a point with
    /// itself) is always admissible.
    pub fn admits(&self, d: usize) -> bool {
        d == 0 || self.contains(d)
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |&d| self.contains(d))
    }

    pub fn max(&self) -> Option<usize> {
        self.iter().last()
    }

    pub fn is_subset(&self, other: &DistanceSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Fails unless every distance lies in `2..=n`.
    pub fn check_degree(&self, n: usize) -> Result<()> {
        match self.max() {
            Some(d) if d > n => Err(Error::Argument(format!("distance {d} exceeds n = {n}"))),
            _ => Ok(()),
        }
    }

    /// `Π_{d∈D} d`; the empty product is 1.
    pub fn product(&self) -> u64 {
        self.iter().map(|d| d as u64).product()
    }

    /// All subsets of `{2..n}`, ordered by size and then lexicographically
    /// with larger distances first within a size (`{n}`, `{n-1}`, ...).
    pub fn all_subsets(n: usize) -> Vec<DistanceSet> {
        let universe: Vec<usize> = (2..=n).collect();
        let mut sets: Vec<DistanceSet> = (0u32..1 << universe.len())
            .map(|bits| {
                DistanceSet::new(universe.iter().enumerate().filter(|(i, _)| bits & (1 << i) != 0).map(|(_, &d)| d))
                    .unwrap()
            })
            .collect();
        sets.sort_by(|a, b| {
            a.len().cmp(&b.len()).then_with(|| {
                let mut da: Vec<usize> = a.iter().collect();
                let mut db: Vec<usize> = b.iter().collect();
                da.reverse();
                db.reverse();
                db.cmp(&da)
            })
        });
        sets
    }
}

impl fmt::Display for DistanceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for DistanceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DistanceSet {
    type Err = Error;

    /// Accepts `2,5,6`, `{2,5,6}`, `{}` or the empty string.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if body.is_empty() || body == "∅" {
            return Ok(DistanceSet::empty());
        }
        let ds = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Argument(format!("bad distance '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        DistanceSet::new(ds)
    }
}

impl Serialize for DistanceSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}
