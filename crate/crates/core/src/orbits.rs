//! Orbits of `Sym(n)²` under simultaneous conjugation and inversion.
//!
//! Orbit ids are zero-based in the API, with orbit 0 = `{(id, id)}`. Orbits
//! are numbered block by block, ordered by (row class, column class), so the
//! orbits supported on `C_i × C_j` form a contiguous id range. The binary
//! file format and the command line use one-based ids.

use std::io::{Read, Write};
use std::ops::Range;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::{check_degree, CharacterTable, SymmetricGroup};

const MAGIC: &[u8; 4] = b"PCOI";
const FORMAT_VERSION: u8 = 1;

/// `b_n`: number of orbits of `Sym(n)²` under conjugation and inversion,
/// `(1/2n!) Σ_μ |C_μ| (z_μ² + s_μ³)` with `s_μ = Σ_χ χ(μ)`.
pub fn burnside_count(n: usize) -> Result<u64> {
    check_degree(n, 1, 8)?;
    let t = CharacterTable::new(n)?;
    let mut total = 0i128;
    for c in 0..t.len() {
        let z = t.column_square_sum(c) as i128;
        let s = t.column_sum(c) as i128;
        total += t.class_size(c) as i128 * (z * z + s * s * s);
    }
    exact_div(total, 2 * t.group_order() as i128, "b_n")
}

/// `b_n*`: orbits when coordinate swaps are added,
/// `(1/2)(b_n + (1/n!) Σ_μ |C_μ| s_μ z_μ)`.
pub fn burnside_count_swap(n: usize) -> Result<u64> {
    check_degree(n, 1, 8)?;
    let t = CharacterTable::new(n)?;
    let mut total = 0i128;
    for c in 0..t.len() {
        total += t.class_size(c) as i128 * t.column_sum(c) as i128 * t.column_square_sum(c) as i128;
    }
    let swapped = exact_div(total, t.group_order() as i128, "swap term")? as i128;
    exact_div(burnside_count(n)? as i128 + swapped, 2, "b_n*")
}

fn exact_div(num: i128, den: i128, what: &str) -> Result<u64> {
    if num % den != 0 || num < 0 {
        return Err(Error::Consistency(format!("{what}: {num}/{den} is not a nonnegative integer")));
    }
    Ok((num / den) as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitInfo {
    pub size: u64,
    /// Ranks `(φ, ψ)` of the first pair met in rank order.
    pub representative: (u32, u32),
    pub row_class: usize,
    pub col_class: usize,
    /// Class of `φψ⁻¹`.
    pub quotient_class: usize,
    /// Orbit of the swapped pairs `(ψ, φ)`.
    pub transpose: usize,
    /// Whether the orbit consists of pairs `(φ, φ)`.
    pub diagonal: bool,
}

pub struct OrbitIndex {
    n: usize,
    order: usize,
    classes: usize,
    ids: Vec<u32>,
    orbits: Vec<OrbitInfo>,
    blocks: Vec<Range<usize>>,
}

impl OrbitIndex {
    /// Flood fill over ranked pairs with the generators conjugation by
    /// `(1 2)`, conjugation by `(1 2 … n)` and simultaneous inversion.
    pub fn enumerate(group: &SymmetricGroup) -> Result<Self> {
        let n = group.degree();
        if n < 2 {
            return Err(Error::Range("orbit enumeration needs n ≥ 2".into()));
        }
        let order = group.order();
        let total = order * order;
        let maps: Vec<Vec<u32>> = group.generator_ranks().into_iter().map(|g| group.conjugation_map(g)).collect();
        let inverse: Vec<u32> = (0..order).map(|r| group.inverse(r) as u32).collect();

        const UNSEEN: u32 = u32::MAX;
        let mut ids = vec![UNSEEN; total];
        let mut count = 0u32;
        let mut stack: Vec<u32> = Vec::new();
        for start in 0..total {
            if ids[start] != UNSEEN {
                continue;
            }
            ids[start] = count;
            stack.push(start as u32);
            while let Some(p) = stack.pop() {
                let (phi, psi) = (p as usize / order, p as usize % order);
                let mut visit = |a: u32, b: u32| {
                    let q = a as usize * order + b as usize;
                    if ids[q] == UNSEEN {
                        ids[q] = count;
                        stack.push(q as u32);
                    }
                };
                for m in &maps {
                    visit(m[phi], m[psi]);
                }
                visit(inverse[phi], inverse[psi]);
            }
            count += 1;
        }
        Self::from_ids(group, ids, count as usize, true)
    }

    /// Builds the metadata for an orbit labelling. With `renumber`, ids are
    /// rewritten into block order.
    fn from_ids(group: &SymmetricGroup, mut ids: Vec<u32>, count: usize, renumber: bool) -> Result<Self> {
        let order = group.order();
        let classes = group.class_count();
        let mut first = vec![usize::MAX; count];
        let mut sizes = vec![0u64; count];
        for (p, &id) in ids.iter().enumerate() {
            let id = id as usize;
            if id >= count {
                return Err(Error::Format(format!("orbit id {} out of range 1..={count}", id + 1)));
            }
            if first[id] == usize::MAX {
                first[id] = p;
            }
            sizes[id] += 1;
        }
        if first.contains(&usize::MAX) {
            return Err(Error::Format("orbit labelling has unused ids".into()));
        }
        let block_of = |p: usize| (group.class_of(p / order), group.class_of(p % order));
        if renumber {
            let mut perm: Vec<usize> = (0..count).collect();
            perm.sort_by_key(|&l| (block_of(first[l]), first[l]));
            let mut new_id = vec![0u32; count];
            for (new, &old) in perm.iter().enumerate() {
                new_id[old] = new as u32;
            }
            for id in ids.iter_mut() {
                *id = new_id[*id as usize];
            }
            first = perm.iter().map(|&l| first[l]).collect();
            sizes = perm.iter().map(|&l| sizes[l]).collect();
        }
        let mut orbits = Vec::with_capacity(count);
        for l in 0..count {
            let p = first[l];
            let (phi, psi) = (p / order, p % order);
            let (row_class, col_class) = block_of(p);
            orbits.push(OrbitInfo {
                size: sizes[l],
                representative: (phi as u32, psi as u32),
                row_class,
                col_class,
                quotient_class: group.class_of(group.quotient(phi, psi)),
                transpose: ids[psi * order + phi] as usize,
                diagonal: phi == psi,
            });
        }
        let mut blocks = vec![0..0; classes * classes];
        let mut l = 0;
        while l < count {
            let key = (orbits[l].row_class, orbits[l].col_class);
            let start = l;
            while l < count && (orbits[l].row_class, orbits[l].col_class) == key {
                l += 1;
            }
            let slot = &mut blocks[key.0 * classes + key.1];
            if slot.end > slot.start {
                return Err(Error::Consistency("orbits of one block are not contiguous".into()));
            }
            *slot = start..l;
        }
        if orbits[0].size != 1 || orbits[0].representative != (0, 0) {
            return Err(Error::Consistency("orbit 0 must be {(id, id)}".into()));
        }
        Ok(OrbitIndex { n: group.degree(), order, classes, ids, orbits, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n!`
    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self) -> &[OrbitInfo] {
        &self.orbits
    }

    pub fn orbit(&self, l: usize) -> &OrbitInfo {
        &self.orbits[l]
    }

    pub fn orbit_of_pair(&self, phi: usize, psi: usize) -> usize {
        self.ids[phi * self.order + psi] as usize
    }

    /// Orbit ids of the pairs `(φ, ·)`, indexed by the rank of the second
    /// coordinate.
    pub fn row(&self, phi: usize) -> &[u32] {
        &self.ids[phi * self.order..(phi + 1) * self.order]
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    /// Orbit ids supported on `C_i × C_j`.
    pub fn block(&self, i: usize, j: usize) -> Range<usize> {
        self.blocks[i * self.classes + j].clone()
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    /// Representatives of the orbits under the group extended by the
    /// coordinate swap: one orbit id per `{l, lᵀ}` pair, the smaller one.
    pub fn swap_classes(&self) -> Vec<usize> {
        (0..self.num_orbits()).filter(|&l| self.orbits[l].transpose >= l).collect()
    }

    /// Number of orbits per block, row-major over classes.
    pub fn block_counts(&self) -> Vec<Vec<usize>> {
        (0..self.classes).map(|i| (0..self.classes).map(|j| self.block(i, j).len()).collect()).collect()
    }

    /// Histogram of orbit sizes as sorted `(size, count)` pairs.
    pub fn size_histogram(&self) -> Vec<(u64, usize)> {
        let mut sizes: Vec<u64> = self.orbits.iter().map(|o| o.size).collect();
        sizes.sort_unstable();
        let mut out: Vec<(u64, usize)> = Vec::new();
        for s in sizes {
            match out.last_mut() {
                Some((v, c)) if *v == s => *c += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    /// Writes the `PCOI` format: magic, version byte, `n` byte, `M` as u32,
    /// then `(n!)²` one-based u32 ids, all little-endian.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&[FORMAT_VERSION, self.n as u8])?;
        w.write_all(&(self.num_orbits() as u32).to_le_bytes())?;
        let mut buf = Vec::with_capacity(4 * self.order);
        for phi in 0..self.order {
            buf.clear();
            for &id in self.row(phi) {
                buf.extend_from_slice(&(id + 1).to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from(group: &SymmetricGroup, mut r: impl Read) -> Result<Self> {
        let mut header = [0u8; 10];
        r.read_exact(&mut header)?;
        if &header[..4] != MAGIC {
            return Err(Error::Format("not an orbit index file (bad magic)".into()));
        }
        if header[4] != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported orbit index version {}", header[4])));
        }
        if header[5] as usize != group.degree() {
            return Err(Error::Format(format!("file is for n = {}, expected {}", header[5], group.degree())));
        }
        let count = u32::from_le_bytes(header[6..10].try_into().unwrap()) as usize;
        let total = group.order() * group.order();
        let mut bytes = vec![0u8; 4 * total];
        r.read_exact(&mut bytes)?;
        let mut ids = Vec::with_capacity(total);
        for chunk in bytes.chunks_exact(4) {
            let id = u32::from_le_bytes(chunk.try_into().unwrap());
            if id == 0 {
                return Err(Error::Format("orbit ids are one-based".into()));
            }
            ids.push(id - 1);
        }
        if r.read(&mut [0u8; 1])? != 0 {
            return Err(Error::Format("trailing bytes after orbit ids".into()));
        }
        Self::from_ids(group, ids, count, false)
    }

    pub fn load(group: &SymmetricGroup, path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_from(group, std::io::BufReader::new(file))
    }
}

/// Enumerates the orbits for `2 ≤ n ≤ 7`; larger `n` is a capacity error.
pub fn enumerate_orbits(n: usize) -> Result<OrbitIndex> {
    check_degree(n, 2, 8)?;
    if n > 7 {
        return Err(Error::Capacity(format!(
            "orbit enumeration for n = {n} needs ({n}!)² ids; only the orbit counts are available beyond n = 7"
        )));
    }
    OrbitIndex::enumerate(&SymmetricGroup::new(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_counts() {
        let expected = [(4, 43, 28), (5, 155, 93), (6, 761, 425), (7, 4043, 2151), (8, 27190, 14016)];
        for (n, b, bs) in expected {
            assert_eq!(burnside_count(n).unwrap(), b);
            assert_eq!(burnside_count_swap(n).unwrap(), bs);
        }
    }

    #[test]
    fn small_enumerations() {
        for n in 2..=5 {
            let idx = enumerate_orbits(n).unwrap();
            assert_eq!(idx.num_orbits() as u64, burnside_count(n).unwrap());
            assert_eq!(idx.swap_classes().len() as u64, burnside_count_swap(n).unwrap());
            assert_eq!(idx.orbit_of_pair(0, 0), 0);
            let total: u64 = idx.orbits().iter().map(|o| o.size).sum();
            assert_eq!(total as usize, idx.group_order().pow(2));
        }
    }

    #[test]
    fn capacity() {
        assert!(matches!(enumerate_orbits(8), Err(Error::Capacity(_))));
        assert!(matches!(enumerate_orbits(1), Err(Error::Range(_))));
    }
}
