//! Block diagonalization of the orbit algebra.
//!
//! For each irreducible character `k` of `G` that occurs, a seed vector `v_k`
//! spanning a single weight line of the isotypic component is expanded into
//! `U_k = span{B_l v_k}`, an `m_k`-dimensional space on which the orbit
//! matrices act as `m_k × m_k` basic blocks.
//!
//! The seed is `ε_k` followed by the central idempotents of the chain
//! `Sym(n) ⊃ Sym(n-1) ⊃ … ⊃ Sym(2)` for the shapes obtained by removing the
//! last box of the last row. Because branching is multiplicity free, the
//! result lies in a space on which the orbit algebra acts irreducibly, so
//! any nonzero such vector generates an `m_k`-dimensional `U_k`.
//!
//! Each `B_l v_k` is supported on the row class of `l`, so the basis of
//! `U_k` is built class by class and every basic block is nonzero only in
//! the sub-block `(row class of l) × (column class of l)`.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{idempotent_apply, GCharacter, MultiplicityTable};
use crate::error::{Error, Result};
use crate::orbits::OrbitIndex;
use crate::symmetry::{CharacterTable, Partition, Permutation, SymmetricGroup};

/// Rank threshold relative to the largest vector norm seen for a block.
pub const RANK_THRESHOLD: f64 = 1e-8;
/// A projected probe is accepted when its norm is at least this fraction of
/// the probe norm.
pub const SEED_ACCEPT: f64 = 1e-6;
const RANDOM_POINT_PROBES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    Identity,
    Point(usize),
    Dense,
}

/// Shapes of the restriction chain `λ = μ_n ⊃ μ_{n-1} ⊃ … ⊃ μ_1`.
pub fn restriction_chain(lambda: &Partition) -> Vec<Partition> {
    let mut chain = vec![lambda.clone()];
    let mut parts = lambda.parts().to_vec();
    while parts.iter().map(|&p| p as usize).sum::<usize>() > 1 {
        let last = parts.len() - 1;
        parts[last] -= 1;
        if parts[last] == 0 {
            parts.pop();
        }
        chain.push(Partition::new(parts.clone()).expect("nonempty shape"));
    }
    chain
}

/// Central idempotent of the subgroup `Sym(j)` (fixing the points `j..n`)
/// for the shape `mu ⊢ j`, acting by conjugation.
fn subgroup_idempotent(group: &SymmetricGroup, j: usize, mu: &Partition, x: &[f64]) -> Result<Vec<f64>> {
    let n = group.degree();
    let order = group.order();
    let table = CharacterTable::new(j)?;
    let lambda = table.character_index(mu).expect("shape of degree j");
    let conj = group.conjugation_table();
    let mut out = vec![0.0; order];
    let mut members = 0usize;
    for beta in 0..order {
        let images = group.images(beta);
        if (j..n).any(|t| images[t] as usize != t) {
            continue;
        }
        members += 1;
        let ct = Permutation::from_images(images[..j].to_vec())?.cycle_type();
        let c = table.value(lambda, table.class_index(&ct).expect("cycle type")) as f64;
        if c == 0.0 {
            continue;
        }
        for (o, &src) in out.iter_mut().zip(&conj[beta * order..(beta + 1) * order]) {
            *o += c * x[src as usize];
        }
    }
    let scale = table.degree(lambda) as f64 / members as f64;
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

/// Projection of `x` onto the weight line of character `k` selected by the
/// restriction chain.
pub fn chain_projection(group: &SymmetricGroup, k: GCharacter, x: &[f64]) -> Result<Vec<f64>> {
    let shape = &group.characters().characters()[k.lambda];
    let mut y = idempotent_apply(group, k, x);
    for mu in restriction_chain(shape).iter().skip(1) {
        let j = mu.n();
        if j < 2 {
            break;
        }
        y = subgroup_idempotent(group, j, mu, &y)?;
    }
    Ok(y)
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Seed vector for character `k`, trying `e_id`, then random point probes,
/// then a dense random probe.
pub fn seed_vector(group: &SymmetricGroup, k: GCharacter, seed: u64) -> Result<(Vec<f64>, Probe)> {
    let order = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((k.lambda as u64) << 1 | (k.sign < 0) as u64));
    let mut probes = vec![Probe::Identity];
    probes.extend((0..RANDOM_POINT_PROBES).map(|_| Probe::Point(rng.gen_range(0..order))));
    probes.push(Probe::Dense);
    for probe in probes {
        let x: Vec<f64> = match probe {
            Probe::Identity => unit(order, 0),
            Probe::Point(p) => unit(order, p),
            Probe::Dense => (0..order).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        };
        let v = chain_projection(group, k, &x)?;
        if norm(&v) >= SEED_ACCEPT * norm(&x) {
            return Ok((v, probe));
        }
    }
    Err(Error::Consistency(format!(
        "every probe projects to zero for character {}; it should not occur",
        k.label(group.characters())
    )))
}

fn unit(len: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; len];
    e[i] = 1.0;
    e
}

/// Orthonormal basis of `U_k`, grouped by conjugacy class.
#[derive(Clone, Debug, Serialize)]
pub struct BlockBasis {
    /// Index of the character in the multiplicity table.
    pub index: usize,
    pub character: GCharacter,
    pub degree: u64,
    pub probe: Probe,
    /// Number of basis vectors supported on each class.
    pub class_dims: Vec<usize>,
    pub class_offsets: Vec<usize>,
    /// Basis vectors of length `n!`.
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
    /// Residual norms of the accepted vectors, relative to the largest norm.
    pub accepted_norms: Vec<f64>,
    /// Largest rejected residual norm, relative to the largest norm.
    pub largest_rejected: f64,
}

impl BlockBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of the class-`c` basis vectors at the elements of `C_c`,
    /// indexed `[local index][basis vector]`.
    fn class_coordinates(&self, group: &SymmetricGroup, c: usize) -> Vec<f64> {
        let dim = self.class_dims[c];
        let off = self.class_offsets[c];
        let mut out = Vec::with_capacity(group.class_members(c).len() * dim);
        for &phi in group.class_members(c) {
            out.extend((0..dim).map(|t| self.vectors[off + t][phi as usize]));
        }
        out
    }
}

/// `(B_l v)` restricted to the row class of `l`, for every orbit `l`,
/// returned per row class as `[orbit - first][local index]`.
fn orbit_images(group: &SymmetricGroup, orbits: &OrbitIndex, v: &[f64]) -> Vec<(usize, Vec<Vec<f64>>)> {
    let m = group.class_count();
    (0..m)
        .map(|i| {
            let first = orbits.block(i, 0).start;
            let last = orbits.block(i, m - 1).end;
            let members = group.class_members(i);
            let mut images = vec![vec![0.0; members.len()]; last - first];
            for (local, &phi) in members.iter().enumerate() {
                for (psi, &l) in orbits.row(phi as usize).iter().enumerate() {
                    images[l as usize - first][local] += v[psi];
                }
            }
            (first, images)
        })
        .collect()
}

pub fn block_basis(
    group: &SymmetricGroup,
    orbits: &OrbitIndex,
    table: &MultiplicityTable,
    index: usize,
    seed: u64,
) -> Result<BlockBasis> {
    let k = table.characters[index];
    let expected = table.multiplicities[index] as usize;
    if expected == 0 {
        return Err(Error::Argument(format!("character {} does not occur", table.labels[index])));
    }
    let (v, probe) = seed_vector(group, k, seed)?;
    let images = orbit_images(group, orbits, &v);
    let largest = images.iter().flat_map(|(_, imgs)| imgs.iter().map(|w| norm(w))).fold(0.0, f64::max);
    let tol = RANK_THRESHOLD * largest;
    let order = group.order();
    let m = group.class_count();
    let mut vectors = Vec::new();
    let mut class_dims = vec![0; m];
    let mut class_offsets = vec![0; m];
    let mut accepted_norms = Vec::new();
    let mut largest_rejected: f64 = 0.0;
    for (i, (_, imgs)) in images.into_iter().enumerate() {
        class_offsets[i] = vectors.len();
        let mut local_basis: Vec<Vec<f64>> = Vec::new();
        for mut w in imgs {
            for _ in 0..2 {
                for u in &local_basis {
                    let d: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                    w.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
                }
            }
            let r = norm(&w);
            if r > tol {
                accepted_norms.push(r / largest);
                w.iter_mut().for_each(|x| *x /= r);
                local_basis.push(w);
            } else {
                largest_rejected = largest_rejected.max(r / largest);
            }
        }
        class_dims[i] = local_basis.len();
        for w in local_basis {
            let mut u = vec![0.0; order];
            for (&phi, x) in group.class_members(i).iter().zip(w) {
                u[phi as usize] = x;
            }
            vectors.push(u);
        }
    }
    if vectors.len() != expected || class_dims.iter().zip(&table.coefficients[index]).any(|(&a, &b)| a as u64 != b) {
        return Err(Error::Consistency(format!(
            "block {} ({}): found dimension {} (per class {:?}), expected m_k = {expected} (per class {:?})",
            index,
            table.labels[index],
            vectors.len(),
            class_dims,
            table.coefficients[index]
        )));
    }
    Ok(BlockBasis {
        index,
        character: k,
        degree: table.degrees[index],
        probe,
        class_dims,
        class_offsets,
        vectors,
        accepted_norms,
        largest_rejected,
    })
}

/// The basic blocks of every orbit in one block `k`, each stored as its
/// nonzero `(row class) × (column class)` sub-block.
#[derive(Clone, Debug)]
pub struct BlockImages {
    pub basis: BlockBasis,
    offsets: Vec<usize>,
    data: Vec<f64>,
}

/// Location of the nonzero sub-block of a basic block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubBlock {
    pub row: usize,
    pub col: usize,
    pub rows: usize,
    pub cols: usize,
}

impl BlockImages {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn sub_block(&self, orbits: &OrbitIndex, l: usize) -> (SubBlock, &[f64]) {
        let o = orbits.orbit(l);
        let b = &self.basis;
        let sb = SubBlock {
            row: b.class_offsets[o.row_class],
            col: b.class_offsets[o.col_class],
            rows: b.class_dims[o.row_class],
            cols: b.class_dims[o.col_class],
        };
        (sb, &self.data[self.offsets[l]..self.offsets[l + 1]])
    }

    /// `B_{lk}` as a dense `m_k × m_k` matrix.
    pub fn dense(&self, orbits: &OrbitIndex, l: usize) -> DMatrix<f64> {
        let (sb, data) = self.sub_block(orbits, l);
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for r in 0..sb.rows {
            for c in 0..sb.cols {
                out[(sb.row + r, sb.col + c)] = data[r * sb.cols + c];
            }
        }
        out
    }

    /// `Σ_l c_l B_{lk}`.
    pub fn combine(&self, orbits: &OrbitIndex, coefficients: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (l, &c) in coefficients.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let (sb, data) = self.sub_block(orbits, l);
            for r in 0..sb.rows {
                for col in 0..sb.cols {
                    out[(sb.row + r, sb.col + col)] += c * data[r * sb.cols + col];
                }
            }
        }
        out
    }
}

/// Streams the orbit array once per block, accumulating
/// `B_{lk}(j, t) = Σ_{(φ,ψ) ∈ O_l} u_j(φ) u_t(ψ)`.
pub fn basic_blocks(group: &SymmetricGroup, orbits: &OrbitIndex, basis: BlockBasis) -> BlockImages {
    let m = group.class_count();
    let count = orbits.num_orbits();
    let mut offsets = Vec::with_capacity(count + 1);
    offsets.push(0);
    for o in orbits.orbits() {
        let size = basis.class_dims[o.row_class] * basis.class_dims[o.col_class];
        offsets.push(offsets.last().unwrap() + size);
    }
    let mut data = vec![0.0; *offsets.last().unwrap()];
    let coords: Vec<Vec<f64>> = (0..m).map(|c| basis.class_coordinates(group, c)).collect();
    let mut buf = Vec::new();
    let mut buf_off = vec![0usize; count];
    for i in 0..m {
        let a_i = basis.class_dims[i];
        if a_i == 0 {
            continue;
        }
        let first = orbits.block(i, 0).start;
        let last = orbits.block(i, m - 1).end;
        let mut len = 0;
        for l in first..last {
            buf_off[l] = len;
            len += basis.class_dims[orbits.orbit(l).col_class];
        }
        buf.resize(len, 0.0);
        for (local_phi, &phi) in group.class_members(i).iter().enumerate() {
            buf.iter_mut().for_each(|x| *x = 0.0);
            for (psi, &l) in orbits.row(phi as usize).iter().enumerate() {
                let l = l as usize;
                let c = group.class_of(psi);
                let a_c = basis.class_dims[c];
                if a_c == 0 {
                    continue;
                }
                let src = &coords[c][group.local_index(psi) * a_c..(group.local_index(psi) + 1) * a_c];
                let dst = &mut buf[buf_off[l]..buf_off[l] + a_c];
                dst.iter_mut().zip(src).for_each(|(d, s)| *d += s);
            }
            let u_phi = &coords[i][local_phi * a_i..(local_phi + 1) * a_i];
            for l in first..last {
                let a_c = basis.class_dims[orbits.orbit(l).col_class];
                if a_c == 0 {
                    continue;
                }
                let acc = &buf[buf_off[l]..buf_off[l] + a_c];
                let out = &mut data[offsets[l]..offsets[l + 1]];
                for (j, &uj) in u_phi.iter().enumerate() {
                    if uj == 0.0 {
                        continue;
                    }
                    out[j * a_c..(j + 1) * a_c].iter_mut().zip(acc).for_each(|(o, a)| *o += uj * a);
                }
            }
        }
    }
    // Exact *-compatibility: the image of the transpose is the transpose.
    for l in 0..count {
        let lt = orbits.orbit(l).transpose;
        if lt < l {
            continue;
        }
        let rows = basis.class_dims[orbits.orbit(l).row_class];
        let cols = basis.class_dims[orbits.orbit(l).col_class];
        for r in 0..rows {
            for c in 0..cols {
                let a = offsets[l] + r * cols + c;
                let b = offsets[lt] + c * rows + r;
                let avg = 0.5 * (data[a] + data[b]);
                data[a] = avg;
                data[b] = avg;
            }
        }
    }
    BlockImages { basis, offsets, data }
}

/// All basic blocks, one entry per occurring character.
#[derive(Clone, Debug)]
pub struct BasicBlockSet {
    pub n: usize,
    pub num_orbits: usize,
    pub blocks: Vec<BlockImages>,
}

impl BasicBlockSet {
    pub fn compute(group: &SymmetricGroup, orbits: &OrbitIndex, table: &MultiplicityTable, seed: u64) -> Result<Self> {
        let blocks = table
            .occurring()
            .into_par_iter()
            .map(|k| block_basis(group, orbits, table, k, seed).map(|b| basic_blocks(group, orbits, b)))
            .collect::<Result<Vec<_>>>()?;
        Ok(BasicBlockSet { n: group.degree(), num_orbits: orbits.num_orbits(), blocks })
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(BlockImages::dim).collect()
    }

    /// `Σ_l c_l B_{lk}` for every block.
    pub fn block_image(&self, orbits: &OrbitIndex, coefficients: &[f64]) -> Vec<DMatrix<f64>> {
        self.blocks.iter().map(|b| b.combine(orbits, coefficients)).collect()
    }

    /// Binary layout, little-endian: magic `PCBB`, version byte, `n` byte,
    /// `M` and the block count as u32; per block its character index, sign
    /// byte, degree and size `m_k` as u32; then for each block `k` and orbit
    /// `l` the dense row-major `m_k × m_k` f64 matrix `B_{lk}`.
    pub fn write_to(&self, orbits: &OrbitIndex, mut w: impl Write) -> Result<()> {
        w.write_all(b"PCBB")?;
        w.write_all(&[1, self.n as u8])?;
        w.write_all(&(self.num_orbits as u32).to_le_bytes())?;
        w.write_all(&(self.blocks.len() as u32).to_le_bytes())?;
        for b in &self.blocks {
            w.write_all(&(b.basis.character.lambda as u32).to_le_bytes())?;
            w.write_all(&[b.basis.character.sign as u8])?;
            w.write_all(&(b.basis.degree as u32).to_le_bytes())?;
            w.write_all(&(b.dim() as u32).to_le_bytes())?;
        }
        for b in &self.blocks {
            for l in 0..self.num_orbits {
                let dense = b.dense(orbits, l);
                for r in 0..b.dim() {
                    for c in 0..b.dim() {
                        w.write_all(&dense[(r, c)].to_le_bytes())?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn save(&self, orbits: &OrbitIndex, path: impl AsRef<Path>) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(orbits, &mut w)?;
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::multiplicities;

    #[test]
    fn chains() {
        let chain = restriction_chain(&Partition::new(vec![3, 2]).unwrap());
        let shown: Vec<String> = chain.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["[3,2]", "[3,1]", "[3]", "[2]", "[1]"]);
    }

    #[test]
    fn block_dimensions_n4() {
        let g = SymmetricGroup::new(4).unwrap();
        let idx = OrbitIndex::enumerate(&g).unwrap();
        let t = multiplicities(&g).unwrap();
        let set = BasicBlockSet::compute(&g, &idx, &t, 7).unwrap();
        let mut sizes = set.block_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, [1, 2, 2, 3, 5]);
    }
}
