//! Primal-dual interior-point method for block-diagonal semidefinite
//! programs
//!
//! ```text
//! maximize  bᵀy + offset   subject to  Z(y) = F₀ + Σ yᵢ Fᵢ ⪰ 0
//! ```
//!
//! with dual `minimize ⟨F₀, X⟩ + offset` subject to `⟨Fᵢ, X⟩ = -bᵢ`,
//! `X ⪰ 0`. Blocks are dense symmetric or diagonal (linear inequalities).
//! Search directions are HKM with Mehrotra's predictor-corrector, started
//! from an infeasible point.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    Dense,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSpec {
    pub kind: BlockKind,
    pub size: usize,
}

/// Symmetric matrix given by its upper-triangle entries `(r, c, v)`, `r ≤ c`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    /// Collects the upper triangle of a dense symmetric matrix, dropping
    /// entries with `|v| ≤ drop`.
    pub fn from_dense(m: &DMatrix<f64>, drop: f64) -> Self {
        let mut entries = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..=c {
                let v = 0.5 * (m[(r, c)] + m[(c, r)]);
                if v.abs() > drop {
                    entries.push((r, c, v));
                }
            }
        }
        SparseSym { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self, size: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(size, size);
        self.add_to(&mut m, 1.0);
        m
    }

    pub fn add_to(&self, m: &mut DMatrix<f64>, scale: f64) {
        for &(r, c, v) in &self.entries {
            m[(r, c)] += scale * v;
            if r != c {
                m[(c, r)] += scale * v;
            }
        }
    }

    /// `⟨S, W⟩` for a (not necessarily symmetric) dense `W`.
    pub fn dot(&self, w: &DMatrix<f64>) -> f64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| if r == c { v * w[(r, c)] } else { v * (w[(r, c)] + w[(c, r)]) })
            .sum()
    }

    pub fn dot_diag(&self, w: &DVector<f64>) -> f64 {
        self.entries.iter().filter(|(r, c, _)| r == c).map(|&(r, _, v)| v * w[r]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|&(r, c, v)| if r == c { v * v } else { 2.0 * v * v }).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug)]
pub enum BlockMat {
    Dense(DMatrix<f64>),
    Diag(DVector<f64>),
}

impl BlockMat {
    fn identity(spec: &BlockSpec, scale: f64) -> Self {
        match spec.kind {
            BlockKind::Dense => BlockMat::Dense(DMatrix::identity(spec.size, spec.size) * scale),
            BlockKind::Diagonal => BlockMat::Diag(DVector::from_element(spec.size, scale)),
        }
    }

    fn zeros(spec: &BlockSpec) -> Self {
        Self::identity(spec, 0.0)
    }

    fn add_sparse(&mut self, s: &SparseSym, scale: f64) {
        match self {
            BlockMat::Dense(m) => s.add_to(m, scale),
            BlockMat::Diag(d) => {
                for &(r, _, v) in &s.entries {
                    d[r] += scale * v;
                }
            }
        }
    }

    fn dot_sparse(&self, s: &SparseSym) -> f64 {
        match self {
            BlockMat::Dense(m) => s.dot(m),
            BlockMat::Diag(d) => s.dot_diag(d),
        }
    }

    fn inner(&self, other: &BlockMat) -> f64 {
        match (self, other) {
            (BlockMat::Dense(a), BlockMat::Dense(b)) => a.dot(b),
            (BlockMat::Diag(a), BlockMat::Diag(b)) => a.dot(b),
            _ => unreachable!("block kinds agree"),
        }
    }

    fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    fn axpy(&mut self, alpha: f64, other: &BlockMat) {
        match (self, other) {
            (BlockMat::Dense(a), BlockMat::Dense(b)) => *a += b * alpha,
            (BlockMat::Diag(a), BlockMat::Diag(b)) => *a += b * alpha,
            _ => unreachable!("block kinds agree"),
        }
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            BlockMat::Dense(m) if m.nrows() == 0 => f64::INFINITY,
            BlockMat::Dense(m) => SymmetricEigen::new(m.clone()).eigenvalues.min(),
            BlockMat::Diag(d) if d.is_empty() => f64::INFINITY,
            BlockMat::Diag(d) => d.min(),
        }
    }
}

/// Problem data.
#[derive(Clone, Debug)]
pub struct BlockSdp {
    pub blocks: Vec<BlockSpec>,
    /// `F₀`, one entry per block.
    pub constant: Vec<SparseSym>,
    /// `Fᵢ` as `(block, matrix)` lists, one list per variable.
    pub coefficients: Vec<Vec<(usize, SparseSym)>>,
    pub objective: Vec<f64>,
    pub offset: f64,
}

impl BlockSdp {
    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    /// `F₀ + Σ yᵢ Fᵢ` blockwise.
    pub fn evaluate(&self, y: &[f64]) -> Vec<BlockMat> {
        let mut z: Vec<BlockMat> = self.blocks.iter().map(BlockMat::zeros).collect();
        for (b, s) in self.constant.iter().enumerate() {
            z[b].add_sparse(s, 1.0);
        }
        for (i, list) in self.coefficients.iter().enumerate() {
            for (b, s) in list {
                z[*b].add_sparse(s, y[i]);
            }
        }
        z
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        self.offset + self.objective.iter().zip(y).map(|(b, v)| b * v).sum::<f64>()
    }

    fn check(&self) -> Result<()> {
        if self.constant.len() != self.blocks.len() || self.coefficients.len() != self.objective.len() {
            return Err(Error::Argument("inconsistent SDP dimensions".into()));
        }
        let all = self.coefficients.iter().flatten().map(|(b, s)| (*b, s)).chain(self.constant.iter().enumerate());
        for (b, s) in all {
            let spec = self.blocks.get(b).ok_or_else(|| Error::Argument(format!("block {b} out of range")))?;
            for &(r, c, _) in &s.entries {
                if r > c || c >= spec.size || (spec.kind == BlockKind::Diagonal && r != c) {
                    return Err(Error::Argument(format!("entry ({r}, {c}) invalid for block {b}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct IpmSettings {
    /// Target for the relative gap and the relative infeasibilities.
    pub tolerance: f64,
    /// Iterates meeting this looser tolerance are still reported as optimal
    /// when progress stalls.
    pub acceptable: f64,
    pub max_iterations: usize,
    pub step_fraction: f64,
}

impl Default for IpmSettings {
    fn default() -> Self {
        IpmSettings { tolerance: 1e-10, acceptable: 1e-7, max_iterations: 200, step_fraction: 0.95 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IpmStatus {
    Optimal,
    /// Loose tolerance met, tight tolerance not reached.
    Inaccurate,
    Infeasible,
    Failed,
}

#[derive(Clone, Debug)]
pub struct IpmResult {
    pub status: IpmStatus,
    pub y: Vec<f64>,
    pub x: Vec<BlockMat>,
    /// `bᵀy + offset`.
    pub primal_objective: f64,
    /// `⟨F₀, X⟩ + offset`.
    pub dual_objective: f64,
    pub relative_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
    pub message: String,
}

/// Variables touching one block, with the per-variable work estimate used
/// to choose between sparse and dense products.
struct BlockUsage {
    vars: Vec<usize>,
    mats: Vec<usize>,
}

struct Iterate {
    x: Vec<BlockMat>,
    z: Vec<BlockMat>,
    y: Vec<f64>,
}

struct Measures {
    pobj: f64,
    dobj: f64,
    gap: f64,
    pinf: f64,
    dinf: f64,
}

impl Measures {
    fn worst(&self) -> f64 {
        self.gap.max(self.pinf).max(self.dinf)
    }
}

pub fn solve(problem: &BlockSdp, settings: &IpmSettings) -> Result<IpmResult> {
    problem.check()?;
    let m = problem.num_variables();
    if m == 0 {
        return Ok(solve_constant(problem));
    }
    Solver::new(problem, settings).run()
}

fn solve_constant(problem: &BlockSdp) -> IpmResult {
    let z = problem.evaluate(&[]);
    let min = z.iter().map(BlockMat::min_eigenvalue).fold(f64::INFINITY, f64::min);
    let feasible = min >= -1e-9;
    IpmResult {
        status: if feasible { IpmStatus::Optimal } else { IpmStatus::Infeasible },
        y: Vec::new(),
        x: problem.blocks.iter().map(BlockMat::zeros).collect(),
        primal_objective: problem.offset,
        dual_objective: problem.offset,
        relative_gap: 0.0,
        primal_infeasibility: 0.0,
        dual_infeasibility: 0.0,
        iterations: 0,
        message: if feasible { "no variables".into() } else { format!("constant matrix has eigenvalue {min:e}") },
    }
}

struct Solver<'a> {
    p: &'a BlockSdp,
    settings: &'a IpmSettings,
    /// Objective scaled to unit maximum norm.
    b: Vec<f64>,
    b_scale: f64,
    usage: Vec<BlockUsage>,
    /// Per variable, per entry of `coefficients[i]`: index into usage lists.
    c_norm: f64,
    b_norm: f64,
}

impl<'a> Solver<'a> {
    fn new(p: &'a BlockSdp, settings: &'a IpmSettings) -> Self {
        let b_scale = p.objective.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let b: Vec<f64> = p.objective.iter().map(|v| v / b_scale).collect();
        let mut usage: Vec<BlockUsage> = p.blocks.iter().map(|_| BlockUsage { vars: Vec::new(), mats: Vec::new() }).collect();
        for (i, list) in p.coefficients.iter().enumerate() {
            for (t, (blk, s)) in list.iter().enumerate() {
                if !s.is_empty() {
                    usage[*blk].vars.push(i);
                    usage[*blk].mats.push(t);
                }
            }
        }
        let c_norm = p.constant.iter().map(|s| s.frobenius().powi(2)).sum::<f64>().sqrt();
        let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        Solver { p, settings, b, b_scale, usage, c_norm, b_norm }
    }

    fn mat(&self, var: usize, t: usize) -> &SparseSym {
        &self.p.coefficients[var][t].1
    }

    /// `⟨Fᵢ, W⟩` for every variable.
    fn apply_adjoint(&self, w: &[BlockMat]) -> Vec<f64> {
        let mut out = vec![0.0; self.b.len()];
        for (i, list) in self.p.coefficients.iter().enumerate() {
            out[i] = list.iter().map(|(blk, s)| w[*blk].dot_sparse(s)).sum();
        }
        out
    }

    /// `F₀ + Σ yᵢ Fᵢ`.
    fn z_of(&self, y: &[f64]) -> Vec<BlockMat> {
        self.p.evaluate(y)
    }

    fn measures(&self, it: &Iterate) -> (Measures, Vec<f64>, Vec<BlockMat>) {
        // Rp = b + ⟨F, X⟩, Rd = Z(y) - Z
        let fx = self.apply_adjoint(&it.x);
        let rp: Vec<f64> = self.b.iter().zip(&fx).map(|(b, v)| b + v).collect();
        let mut rd = self.z_of(&it.y);
        for (r, z) in rd.iter_mut().zip(&it.z) {
            r.axpy(-1.0, z);
        }
        let pobj: f64 = self.b.iter().zip(&it.y).map(|(b, v)| b * v).sum();
        let dobj: f64 = self.p.constant.iter().enumerate().map(|(blk, s)| it.x[blk].dot_sparse(s)).sum();
        let pinf = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + self.b_norm);
        let dinf = rd.iter().map(BlockMat::norm_sq).sum::<f64>().sqrt() / (1.0 + self.c_norm);
        let gap = (dobj - pobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        (Measures { pobj, dobj, gap, pinf, dinf }, rp, rd)
    }

    fn initial(&self) -> Iterate {
        let max_f = self
            .p
            .coefficients
            .iter()
            .flat_map(|l| l.iter().map(|(_, s)| s.frobenius()))
            .fold(self.c_norm, f64::max);
        let xi = self
            .b
            .iter()
            .zip(&self.p.coefficients)
            .map(|(b, l)| (1.0 + b.abs()) / (1.0 + l.iter().map(|(_, s)| s.frobenius()).sum::<f64>()))
            .fold(10.0f64, f64::max);
        let eta = max_f.max(10.0);
        Iterate {
            x: self.p.blocks.iter().map(|s| BlockMat::identity(s, xi)).collect(),
            z: self.p.blocks.iter().map(|s| BlockMat::identity(s, eta)).collect(),
            y: vec![0.0; self.b.len()],
        }
    }

    fn run(&self) -> Result<IpmResult> {
        let total_dim: usize = self.p.blocks.iter().map(|s| s.size).sum();
        let mut it = self.initial();
        let mut best: Option<(f64, Iterate, Measures)> = None;
        let mut stall = 0usize;
        let mut message = String::from("iteration limit reached");
        let mut iterations = 0;
        for iter in 0..self.settings.max_iterations {
            iterations = iter;
            let (meas, rp, rd) = self.measures(&it);
            let worst = meas.worst();
            if best.as_ref().map_or(true, |(w, _, _)| worst < *w * 0.999) {
                best = Some((worst, clone_iterate(&it), meas_copy(&meas)));
                stall = 0;
            } else {
                stall += 1;
            }
            if worst < self.settings.tolerance {
                message = "converged".into();
                break;
            }
            if stall > 8 {
                message = "progress stalled".into();
                break;
            }
            let mu = it.x.iter().zip(&it.z).map(|(x, z)| x.inner(z)).sum::<f64>() / total_dim as f64;
            let step = match self.step(&it, &rp, &rd, mu) {
                Ok(s) => s,
                Err(e) => {
                    message = format!("stopped: {e}");
                    break;
                }
            };
            it = step;
        }
        let (_, it, meas) = best.expect("at least one iterate");
        let worst = meas.worst();
        let status = if worst < self.settings.tolerance {
            IpmStatus::Optimal
        } else if worst < self.settings.acceptable {
            IpmStatus::Inaccurate
        } else if meas.pobj.abs() > 1e8 || meas.dobj.abs() > 1e8 {
            IpmStatus::Infeasible
        } else {
            IpmStatus::Failed
        };
        let y = it.y.clone();
        let x: Vec<BlockMat> = it
            .x
            .iter()
            .map(|b| {
                let mut b = b.clone();
                match &mut b {
                    BlockMat::Dense(m) => *m *= self.b_scale,
                    BlockMat::Diag(d) => *d *= self.b_scale,
                }
                b
            })
            .collect();
        Ok(IpmResult {
            status,
            primal_objective: self.p.offset + meas.pobj * self.b_scale,
            dual_objective: self.p.offset + meas.dobj * self.b_scale,
            relative_gap: meas.gap,
            primal_infeasibility: meas.pinf,
            dual_infeasibility: meas.dinf,
            iterations,
            message,
            y,
            x,
        })
    }

    /// One predictor-corrector step.
    fn step(&self, it: &Iterate, rp: &[f64], rd: &[BlockMat], mu: f64) -> Result<Iterate> {
        let zinv: Vec<BlockMat> = it.z.iter().map(inverse).collect::<Result<_>>()?;
        let schur = self.schur(&it.x, &zinv);
        let chol = factor(schur)?;

        // X Rd Z⁻¹ is common to both right-hand sides.
        let x_rd_zinv: Vec<BlockMat> = it.x.iter().zip(rd).zip(&zinv).map(|((x, r), zi)| triple(x, r, zi)).collect();

        let direction = |sigma_mu: f64, corr: Option<&Vec<BlockMat>>| -> (Vec<f64>, Vec<BlockMat>, Vec<BlockMat>) {
            // W = σμZ⁻¹ - X - X Rd Z⁻¹ - corr
            let mut w: Vec<BlockMat> = zinv.clone();
            for (blk, wb) in w.iter_mut().enumerate() {
                scale(wb, sigma_mu);
                wb.axpy(-1.0, &it.x[blk]);
                wb.axpy(-1.0, &x_rd_zinv[blk]);
                if let Some(c) = corr {
                    wb.axpy(-1.0, &c[blk]);
                }
            }
            let fw = self.apply_adjoint(&w);
            let rhs: Vec<f64> = rp.iter().zip(&fw).map(|(a, b)| a + b).collect();
            let dy = chol.solve(&rhs);
            // ΔZ = Rd + Σ Δyᵢ Fᵢ
            let mut dz: Vec<BlockMat> = rd.to_vec();
            for (i, list) in self.p.coefficients.iter().enumerate() {
                for (blk, s) in list {
                    dz[*blk].add_sparse(s, dy[i]);
                }
            }
            // ΔX = W + X Rd Z⁻¹ - X ΔZ Z⁻¹, symmetrized
            let mut dx: Vec<BlockMat> = Vec::with_capacity(w.len());
            for blk in 0..w.len() {
                let mut d = w[blk].clone();
                d.axpy(1.0, &x_rd_zinv[blk]);
                let t = triple(&it.x[blk], &dz[blk], &zinv[blk]);
                d.axpy(-1.0, &t);
                symmetrize(&mut d);
                dx.push(d);
            }
            (dy, dx, dz)
        };

        // Predictor.
        let (_, dx_a, dz_a) = direction(0.0, None);
        let ap = self.max_step(&it.x, &dx_a)?;
        let ad = self.max_step(&it.z, &dz_a)?;
        let ap = ap.min(1.0);
        let ad = ad.min(1.0);
        let total_dim: usize = self.p.blocks.iter().map(|s| s.size).sum();
        let mut mu_aff = 0.0;
        for blk in 0..dx_a.len() {
            let mut xa = it.x[blk].clone();
            xa.axpy(ap, &dx_a[blk]);
            let mut za = it.z[blk].clone();
            za.axpy(ad, &dz_a[blk]);
            mu_aff += xa.inner(&za);
        }
        mu_aff /= total_dim as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3).max(0.0);

        // Corrector with second-order term ΔX_a ΔZ_a Z⁻¹.
        let corr: Vec<BlockMat> =
            dx_a.iter().zip(&dz_a).zip(&zinv).map(|((a, b), zi)| product_then(a, b, zi)).collect();
        let (dy, dx, dz) = direction(sigma * mu, Some(&corr));
        let gamma = self.settings.step_fraction;
        let ap = (gamma * self.max_step(&it.x, &dx)?).min(1.0);
        let ad = (gamma * self.max_step(&it.z, &dz)?).min(1.0);

        let mut next = clone_iterate(it);
        for blk in 0..dx.len() {
            next.x[blk].axpy(ap, &dx[blk]);
            next.z[blk].axpy(ad, &dz[blk]);
        }
        for (y, d) in next.y.iter_mut().zip(&dy) {
            *y += ad * d;
        }
        Ok(next)
    }

    /// Largest `α` with `S + αΔ ⪰ 0` over all blocks (`∞` if unbounded).
    fn max_step(&self, s: &[BlockMat], d: &[BlockMat]) -> Result<f64> {
        let mut alpha = f64::INFINITY;
        for (sb, db) in s.iter().zip(d) {
            match (sb, db) {
                (BlockMat::Dense(sm), BlockMat::Dense(dm)) => {
                    if sm.nrows() == 0 {
                        continue;
                    }
                    let l = sm
                        .clone()
                        .cholesky()
                        .ok_or_else(|| Error::Numerical("iterate lost positive definiteness".into()))?
                        .l();
                    let linv = l.solve_lower_triangular(&DMatrix::identity(sm.nrows(), sm.nrows())).expect("nonsingular");
                    let mut t = &linv * dm * linv.transpose();
                    t = (&t + t.transpose()) * 0.5;
                    let lmin = SymmetricEigen::new(t).eigenvalues.min();
                    if lmin < 0.0 {
                        alpha = alpha.min(-1.0 / lmin);
                    }
                }
                (BlockMat::Diag(sv), BlockMat::Diag(dv)) => {
                    for (x, dx) in sv.iter().zip(dv.iter()) {
                        if *dx < 0.0 {
                            alpha = alpha.min(-x / dx);
                        }
                    }
                }
                _ => unreachable!("block kinds agree"),
            }
        }
        Ok(alpha)
    }

    /// `M_ij = ⟨Fᵢ, X Fⱼ Z⁻¹⟩`.
    fn schur(&self, x: &[BlockMat], zinv: &[BlockMat]) -> DMatrix<f64> {
        let m = self.b.len();
        let mut schur = DMatrix::<f64>::zeros(m, m);
        for (blk, usage) in self.usage.iter().enumerate() {
            match (&x[blk], &zinv[blk]) {
                (BlockMat::Diag(xv), BlockMat::Diag(zv)) => {
                    let w: DVector<f64> = xv.component_mul(zv);
                    for (a, (&i, &ti)) in usage.vars.iter().zip(&usage.mats).enumerate() {
                        let fi = self.mat(i, ti);
                        for (&j, &tj) in usage.vars[a..].iter().zip(&usage.mats[a..]) {
                            let fj = self.mat(j, tj);
                            let v = diag_triple(fi, fj, &w);
                            if v != 0.0 {
                                schur[(i, j)] += v;
                                if i != j {
                                    schur[(j, i)] += v;
                                }
                            }
                        }
                    }
                }
                (BlockMat::Dense(xm), BlockMat::Dense(zm)) => {
                    let n = xm.nrows();
                    for (a, (&j, &tj)) in usage.vars.iter().zip(&usage.mats).enumerate() {
                        let fj = self.mat(j, tj);
                        let t = if fj.nnz() * 2 < n {
                            sparse_triple(xm, fj, zm)
                        } else {
                            xm * fj.to_dense(n) * zm
                        };
                        for (&i, &ti) in usage.vars[..=a].iter().zip(&usage.mats[..=a]) {
                            let v = self.mat(i, ti).dot(&t);
                            schur[(i, j)] += v;
                            if i != j {
                                schur[(j, i)] += v;
                            }
                        }
                    }
                }
                _ => unreachable!("block kinds agree"),
            }
        }
        schur
    }
}

fn meas_copy(m: &Measures) -> Measures {
    Measures { pobj: m.pobj, dobj: m.dobj, gap: m.gap, pinf: m.pinf, dinf: m.dinf }
}

fn clone_iterate(it: &Iterate) -> Iterate {
    Iterate { x: it.x.clone(), z: it.z.clone(), y: it.y.clone() }
}

fn scale(b: &mut BlockMat, s: f64) {
    match b {
        BlockMat::Dense(m) => *m *= s,
        BlockMat::Diag(d) => *d *= s,
    }
}

fn symmetrize(b: &mut BlockMat) {
    if let BlockMat::Dense(m) = b {
        let t = m.transpose();
        *m += t;
        *m *= 0.5;
    }
}

fn inverse(b: &BlockMat) -> Result<BlockMat> {
    match b {
        BlockMat::Dense(m) => {
            if m.nrows() == 0 {
                return Ok(b.clone());
            }
            let inv = m
                .clone()
                .cholesky()
                .ok_or_else(|| Error::Numerical("dual slack lost positive definiteness".into()))?
                .inverse();
            Ok(BlockMat::Dense((&inv + inv.transpose()) * 0.5))
        }
        BlockMat::Diag(d) => Ok(BlockMat::Diag(d.map(|v| 1.0 / v))),
    }
}

/// `A B C`.
fn triple(a: &BlockMat, b: &BlockMat, c: &BlockMat) -> BlockMat {
    match (a, b, c) {
        (BlockMat::Dense(a), BlockMat::Dense(b), BlockMat::Dense(c)) => BlockMat::Dense(a * b * c),
        (BlockMat::Diag(a), BlockMat::Diag(b), BlockMat::Diag(c)) => {
            BlockMat::Diag(a.component_mul(b).component_mul(c))
        }
        _ => unreachable!("block kinds agree"),
    }
}

fn product_then(a: &BlockMat, b: &BlockMat, c: &BlockMat) -> BlockMat {
    triple(a, b, c)
}

/// `X F Z⁻¹` for sparse `F`.
fn sparse_triple(x: &DMatrix<f64>, f: &SparseSym, zinv: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut t = DMatrix::zeros(n, n);
    for &(r, c, v) in &f.entries {
        t.ger(v, &x.column(r), &zinv.row(c).transpose(), 1.0);
        if r != c {
            t.ger(v, &x.column(c), &zinv.row(r).transpose(), 1.0);
        }
    }
    t
}

fn diag_triple(fi: &SparseSym, fj: &SparseSym, w: &DVector<f64>) -> f64 {
    // Both are diagonal; entries are sorted by construction but merge
    // generically.
    let mut sum = 0.0;
    for &(r, _, a) in &fi.entries {
        for &(s, _, b) in &fj.entries {
            if r == s {
                sum += a * b * w[r];
            }
        }
    }
    sum
}

/// Cholesky factor of the Schur complement, with a small diagonal shift as
/// a fallback.
struct Factor {
    l: DMatrix<f64>,
}

impl Factor {
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let b = DVector::from_column_slice(rhs);
        let y = self.l.solve_lower_triangular(&b).expect("nonsingular");
        let x = self.l.transpose().solve_upper_triangular(&y).expect("nonsingular");
        x.iter().copied().collect()
    }
}

fn factor(m: DMatrix<f64>) -> Result<Factor> {
    if let Some(c) = m.clone().cholesky() {
        return Ok(Factor { l: c.l() });
    }
    let max_diag = m.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    for shift in [1e-14, 1e-12, 1e-10] {
        let mut s = m.clone();
        for i in 0..s.nrows() {
            s[(i, i)] += shift * max_diag;
        }
        if let Some(c) = s.cholesky() {
            return Ok(Factor { l: c.l() });
        }
    }
    Err(Error::Numerical("Schur complement is not positive definite".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_block(size: usize) -> BlockSpec {
        BlockSpec { kind: BlockKind::Dense, size }
    }

    #[test]
    fn scalar_box() {
        // max y subject to 0 ≤ y ≤ 1 written as diag(y, 1 - y) ⪰ 0.
        let p = BlockSdp {
            blocks: vec![BlockSpec { kind: BlockKind::Diagonal, size: 2 }],
            constant: vec![SparseSym { entries: vec![(1, 1, 1.0)] }],
            coefficients: vec![vec![(0, SparseSym { entries: vec![(0, 0, 1.0), (1, 1, -1.0)] })]],
            objective: vec![1.0],
            offset: 0.0,
        };
        let r = solve(&p, &IpmSettings::default()).unwrap();
        assert_eq!(r.status, IpmStatus::Optimal, "{r:?}");
        assert!((r.primal_objective - 1.0).abs() < 1e-8);
        assert!((r.dual_objective - 1.0).abs() < 1e-8);
    }

    #[test]
    fn two_by_two_correlation() {
        // max 2y subject to [[1, y], [y, 1]] ⪰ 0 → y = 1.
        let p = BlockSdp {
            blocks: vec![dense_block(2)],
            constant: vec![SparseSym { entries: vec![(0, 0, 1.0), (1, 1, 1.0)] }],
            coefficients: vec![vec![(0, SparseSym { entries: vec![(0, 1, 1.0)] })]],
            objective: vec![2.0],
            offset: 0.0,
        };
        let r = solve(&p, &IpmSettings::default()).unwrap();
        assert_eq!(r.status, IpmStatus::Optimal, "{}", r.message);
        assert!((r.primal_objective - 2.0).abs() < 1e-7, "{}", r.primal_objective);
    }

    #[test]
    fn max_eigenvalue_problem() {
        // max -t subject to tI - A ⪰ 0: optimum is -λ_max(A).
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        let lmax = SymmetricEigen::new(a.clone()).eigenvalues.max();
        let p = BlockSdp {
            blocks: vec![dense_block(3)],
            constant: vec![SparseSym::from_dense(&(-a), 0.0)],
            coefficients: vec![vec![(0, SparseSym::from_dense(&DMatrix::identity(3, 3), 0.0))]],
            objective: vec![-1.0],
            offset: 0.0,
        };
        let r = solve(&p, &IpmSettings::default()).unwrap();
        assert_eq!(r.status, IpmStatus::Optimal, "{}", r.message);
        assert!((r.primal_objective + lmax).abs() < 1e-7);
    }

    #[test]
    fn constant_problem() {
        let p = BlockSdp {
            blocks: vec![dense_block(1)],
            constant: vec![SparseSym { entries: vec![(0, 0, -1.0)] }],
            coefficients: vec![],
            objective: vec![],
            offset: 3.0,
        };
        assert_eq!(solve(&p, &IpmSettings::default()).unwrap().status, IpmStatus::Infeasible);
    }
}
