//! Semidefinite programming bound on codes with distances in `D`.
//!
//! Variables are the orbit coefficients `a_l` of the witness matrix `R_Γ`.
//! The program maximizes `trace R₁ = 1 + Σ_j c_j |C_j|` subject to
//!
//! ```text
//! R₁ = Σ_l a_l B_l ⪰ 0,    R₂ = I - B₀ + Σ_{l≠0} a_l B'_l ⪰ 0,    0 ≤ a_l ≤ 1,
//! ```
//!
//! with `a_l = 0` whenever the Hamming weight of the orbit's quotient class
//! is not in `D`. The three orbits `({id}, C_j)`, `(C_j, {id})` and the
//! diagonal of `C_j` share a single variable `c_j`, and transpose partners
//! share one variable unless [`TransposeMode::Split`] is requested.
//!
//! When `c_j` is forced to zero the whole class-`j` row block of `R₁`
//! vanishes, so every orbit in row or column class `j` is also fixed at
//! zero and those rows are removed. The identity row of `R₂` is identically
//! zero and is removed as well.

pub mod ipm;
pub mod sdpa;
pub mod witness;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::multiplicities;
use crate::blocks::BasicBlockSet;
use crate::bound::{floor_with_slack, BoundResult, BoundStatus, SolverDiagnostics, SDP_FLOOR_SLACK};
use crate::distance::DistanceSet;
use crate::error::{Error, Result};
use crate::orbits::OrbitIndex;
use crate::symmetry::{check_degree, SymmetricGroup};

pub use ipm::{BlockKind, BlockMat, BlockSdp, BlockSpec, IpmResult, IpmSettings, IpmStatus, SparseSym};
pub use witness::{b_prime_expansion, BPrimeReading};

/// Largest degree for the dense `n! × n!` formulation.
pub const MAX_FULL_DEGREE: usize = 6;
/// Entries of assembled block matrices below this fraction of the largest
/// entry are dropped.
const DROP_RELATIVE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    /// One PSD block per occurring character and constraint.
    Block,
    /// Dense `n! × n!` matrices.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransposeMode {
    Merged,
    Split,
}

#[derive(Clone, Debug)]
pub struct SdpOptions {
    pub formulation: Formulation,
    pub transpose: TransposeMode,
    pub ipm: IpmSettings,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { formulation: Formulation::Block, transpose: TransposeMode::Merged, ipm: IpmSettings::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariableKind {
    /// `c_j`, shared by the three identity-row orbits of class `j`.
    Class(usize),
    /// Coefficient of an orbit (and its transpose, when merged).
    Orbit,
}

#[derive(Clone, Debug, Serialize)]
pub struct SdpVariable {
    pub kind: VariableKind,
    pub orbits: Vec<usize>,
}

/// The program in orbit coordinates, before choosing a representation.
#[derive(Clone, Debug)]
pub struct SdpModel {
    pub n: usize,
    pub distances: DistanceSet,
    pub variables: Vec<SdpVariable>,
    /// Variable of each orbit; `None` for orbit 0 and fixed orbits.
    pub orbit_variable: Vec<Option<usize>>,
    pub objective: Vec<f64>,
    pub offset: f64,
    /// Orbit coefficients of the constant term and of each variable in `R₁`.
    pub r1_constant: Vec<(usize, f64)>,
    pub r1: Vec<Vec<(usize, f64)>>,
    pub r2_constant: Vec<(usize, f64)>,
    pub r2: Vec<Vec<(usize, f64)>>,
    /// Classes whose rows are kept in `R₁` and `R₂`.
    pub r1_classes: Vec<bool>,
    pub r2_classes: Vec<bool>,
}

impl SdpModel {
    pub fn new(
        orbits: &OrbitIndex,
        class_weights: &[usize],
        class_sizes: &[u64],
        distances: DistanceSet,
        transpose: TransposeMode,
    ) -> Result<Self> {
        Self::with_reading(orbits, class_weights, class_sizes, distances, transpose, BPrimeReading::Corrected)
    }

    pub fn with_reading(
        orbits: &OrbitIndex,
        class_weights: &[usize],
        class_sizes: &[u64],
        distances: DistanceSet,
        transpose: TransposeMode,
        reading: BPrimeReading,
    ) -> Result<Self> {
        let n = orbits.n();
        distances.check_degree(n)?;
        let m = orbits.class_count();
        let count = orbits.num_orbits();
        let info = orbits.orbits();
        let class_free: Vec<bool> = (0..m).map(|j| j > 0 && distances.contains(class_weights[j])).collect();

        let mut variables = Vec::new();
        let mut orbit_variable = vec![None; count];
        let mut objective = Vec::new();
        for j in 1..m {
            if !class_free[j] {
                continue;
            }
            let members: Vec<usize> = (1..count)
                .filter(|&l| {
                    let o = &info[l];
                    (o.diagonal && o.row_class == j)
                        || (o.row_class == 0 && o.col_class == j)
                        || (o.row_class == j && o.col_class == 0)
                })
                .collect();
            if members.len() != 3 {
                return Err(Error::Consistency(format!("class {j} has {} identity-row orbits", members.len())));
            }
            for &l in &members {
                orbit_variable[l] = Some(variables.len());
            }
            variables.push(SdpVariable { kind: VariableKind::Class(j), orbits: members });
            objective.push(class_sizes[j] as f64);
        }
        for l in 1..count {
            let o = &info[l];
            if o.diagonal || o.row_class == 0 || o.col_class == 0 {
                continue;
            }
            let free = distances.contains(class_weights[o.quotient_class])
                && class_free[o.row_class]
                && class_free[o.col_class];
            if !free {
                continue;
            }
            match transpose {
                TransposeMode::Merged if o.transpose < l => {
                    orbit_variable[l] = orbit_variable[o.transpose];
                    variables[orbit_variable[l].expect("partner assigned")].orbits.push(l);
                }
                _ => {
                    orbit_variable[l] = Some(variables.len());
                    variables.push(SdpVariable { kind: VariableKind::Orbit, orbits: vec![l] });
                    objective.push(0.0);
                }
            }
        }

        let mut r1: Vec<Vec<(usize, f64)>> =
            variables.iter().map(|v| v.orbits.iter().map(|&l| (l, 1.0)).collect()).collect();
        let mut r2: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); variables.len()];
        for l in 1..count {
            let Some(v) = orbit_variable[l] else { continue };
            for (t, c) in b_prime_expansion(orbits, l, reading) {
                *r2[v].entry(t).or_insert(0.0) += c as f64;
            }
        }
        if transpose == TransposeMode::Split {
            // Only the symmetric part of a variable's matrix constrains R.
            for (v, list) in r1.iter_mut().enumerate() {
                let extra: Vec<(usize, f64)> = list.iter().map(|&(l, c)| (info[l].transpose, c)).collect();
                list.extend(extra);
                list.iter_mut().for_each(|e| e.1 *= 0.5);
                let sym: Vec<(usize, f64)> = r2[v].iter().map(|(&l, &c)| (info[l].transpose, c)).collect();
                r2[v].values_mut().for_each(|c| *c *= 0.5);
                for (l, c) in sym {
                    *r2[v].entry(l).or_insert(0.0) += 0.5 * c;
                }
            }
        }
        let r2: Vec<Vec<(usize, f64)>> =
            r2.into_iter().map(|m| m.into_iter().filter(|&(_, c)| c != 0.0).collect()).collect();
        let r2_constant: Vec<(usize, f64)> = (1..count).filter(|&l| info[l].diagonal).map(|l| (l, 1.0)).collect();
        Ok(SdpModel {
            n,
            distances,
            variables,
            orbit_variable,
            objective,
            offset: 1.0,
            r1_constant: vec![(0, 1.0)],
            r1,
            r2_constant,
            r2,
            r1_classes: (0..m).map(|j| j == 0 || class_free[j]).collect(),
            r2_classes: (0..m).map(|j| j > 0).collect(),
        })
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    /// Variable values for a vector of orbit coefficients, checking that
    /// fixed orbits are zero and tied orbits agree.
    pub fn point_from_coefficients(&self, a: &[f64], tolerance: f64) -> Result<Vec<f64>> {
        let mut y = vec![f64::NAN; self.variables.len()];
        for (l, &value) in a.iter().enumerate().skip(1) {
            match self.orbit_variable[l] {
                None if value.abs() > tolerance => {
                    return Err(Error::Argument(format!("orbit {} is fixed at 0 but has coefficient {value}", l + 1)));
                }
                None => {}
                Some(v) if y[v].is_nan() => y[v] = value,
                Some(v) if (y[v] - value).abs() > tolerance => {
                    return Err(Error::Argument(format!("tied orbits disagree at orbit {}", l + 1)));
                }
                Some(_) => {}
            }
        }
        Ok(y)
    }
}

/// Role of a block in an assembled program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockRole {
    R1 { character: usize },
    R2 { character: usize },
    Bounds,
}

/// A model together with its block-diagonal representation.
#[derive(Clone, Debug)]
pub struct SdpInstance {
    pub model: SdpModel,
    pub problem: BlockSdp,
    pub roles: Vec<BlockRole>,
    pub formulation: Formulation,
}

impl SdpInstance {
    /// Smallest eigenvalues of `R₁` and `R₂` at `y`.
    pub fn min_eigenvalues(&self, y: &[f64]) -> (f64, f64) {
        let z = self.problem.evaluate(y);
        let mut out = (f64::INFINITY, f64::INFINITY);
        for (b, role) in z.iter().zip(&self.roles) {
            match role {
                BlockRole::R1 { .. } => out.0 = out.0.min(b.min_eigenvalue()),
                BlockRole::R2 { .. } => out.1 = out.1.min(b.min_eigenvalue()),
                BlockRole::Bounds => {}
            }
        }
        out
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        self.problem.objective_value(y)
    }

    /// Smallest entry of the bound block at `y`.
    pub fn min_bound_slack(&self, y: &[f64]) -> f64 {
        y.iter().map(|&v| v.min(1.0 - v)).fold(f64::INFINITY, f64::min)
    }
}

/// Shared data for repeated bounds at one degree.
pub struct SdpContext {
    group: SymmetricGroup,
    orbits: OrbitIndex,
    weights: Vec<usize>,
    class_sizes: Vec<u64>,
    blocks: Option<BasicBlockSet>,
}

impl SdpContext {
    /// Builds the group, orbits and (for the block formulation) the basic
    /// blocks.
    pub fn new(n: usize, formulation: Formulation, seed: u64) -> Result<Self> {
        check_degree(n, 2, 7)?;
        if formulation == Formulation::Full && n > MAX_FULL_DEGREE {
            return Err(Error::Capacity(format!("the dense formulation is limited to n ≤ {MAX_FULL_DEGREE}")));
        }
        let group = SymmetricGroup::new(n)?;
        let orbits = OrbitIndex::enumerate(&group)?;
        let blocks = match formulation {
            Formulation::Block => {
                let table = multiplicities(&group)?;
                Some(BasicBlockSet::compute(&group, &orbits, &table, seed)?)
            }
            Formulation::Full => None,
        };
        Ok(Self::from_parts(group, orbits, blocks))
    }

    pub fn from_parts(group: SymmetricGroup, orbits: OrbitIndex, blocks: Option<BasicBlockSet>) -> Self {
        let table = group.characters();
        let weights = table.classes().iter().map(|c| c.hamming_weight()).collect();
        let class_sizes = table.class_sizes().to_vec();
        SdpContext { group, orbits, weights, class_sizes, blocks }
    }

    pub fn group(&self) -> &SymmetricGroup {
        &self.group
    }

    pub fn orbits(&self) -> &OrbitIndex {
        &self.orbits
    }

    pub fn blocks(&self) -> Option<&BasicBlockSet> {
        self.blocks.as_ref()
    }

    pub fn model(&self, distances: DistanceSet, transpose: TransposeMode) -> Result<SdpModel> {
        SdpModel::new(&self.orbits, &self.weights, &self.class_sizes, distances, transpose)
    }

    pub fn instance(&self, distances: DistanceSet, options: &SdpOptions) -> Result<SdpInstance> {
        let model = self.model(distances, options.transpose)?;
        match options.formulation {
            Formulation::Block => {
                let blocks = self.blocks.as_ref().ok_or_else(|| {
                    Error::Argument("context was built without basic blocks".into())
                })?;
                Ok(assemble_block(&self.orbits, blocks, model))
            }
            Formulation::Full => {
                if self.group.degree() > MAX_FULL_DEGREE {
                    return Err(Error::Capacity(format!(
                        "the dense formulation is limited to n ≤ {MAX_FULL_DEGREE}"
                    )));
                }
                Ok(assemble_full(&self.group, &self.orbits, model))
            }
        }
    }

    pub fn bound(&self, distances: DistanceSet, options: &SdpOptions) -> Result<SdpSolution> {
        let instance = self.instance(distances, options)?;
        solve_instance(instance, &options.ipm)
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub instance: SdpInstance,
    pub ipm: IpmResult,
    pub bound: BoundResult,
}

pub fn solve_instance(instance: SdpInstance, settings: &IpmSettings) -> Result<SdpSolution> {
    let ipm = ipm::solve(&instance.problem, settings)?;
    let (e1, e2) = instance.min_eigenvalues(&ipm.y);
    let status = match ipm.status {
        IpmStatus::Optimal | IpmStatus::Inaccurate => BoundStatus::Optimal,
        IpmStatus::Infeasible => BoundStatus::Infeasible,
        IpmStatus::Failed => BoundStatus::NumericalFailure,
    };
    let raw = ipm.primal_objective;
    let certificate: Vec<f64> = ipm
        .x
        .iter()
        .flat_map(|b| match b {
            BlockMat::Dense(m) => m.iter().copied().collect::<Vec<_>>(),
            BlockMat::Diag(d) => d.iter().copied().collect(),
        })
        .collect();
    let bound = BoundResult {
        raw_optimum: raw,
        exact_optimum: None,
        floored_bound: floor_with_slack(raw, SDP_FLOOR_SLACK),
        status,
        certificate: Some(certificate),
        diagnostics: Some(SolverDiagnostics {
            iterations: ipm.iterations,
            primal_objective: ipm.primal_objective,
            dual_objective: ipm.dual_objective,
            relative_gap: ipm.relative_gap,
            primal_infeasibility: ipm.primal_infeasibility,
            dual_infeasibility: ipm.dual_infeasibility,
            min_eigenvalue_r1: e1,
            min_eigenvalue_r2: e2,
            message: ipm.message.clone(),
        }),
    };
    Ok(SdpSolution { instance, ipm, bound })
}

/// Convenience wrapper building a fresh context.
pub fn solve_sdp(n: usize, distances: DistanceSet, options: &SdpOptions, seed: u64) -> Result<SdpSolution> {
    SdpContext::new(n, options.formulation, seed)?.bound(distances, options)
}

fn bounds_block(model: &SdpModel) -> (Vec<(usize, SparseSym)>, SparseSym) {
    // y_i ≥ 0 and 1 - y_i ≥ 0 as diagonal entries 2i and 2i + 1.
    let per_var = (0..model.num_variables())
        .map(|i| (i, SparseSym { entries: vec![(2 * i, 2 * i, 1.0), (2 * i + 1, 2 * i + 1, -1.0)] }))
        .collect();
    let constant = SparseSym { entries: (0..model.num_variables()).map(|i| (2 * i + 1, 2 * i + 1, 1.0)).collect() };
    (per_var, constant)
}

fn assemble_block(orbits: &OrbitIndex, set: &BasicBlockSet, model: SdpModel) -> SdpInstance {
    let nv = model.num_variables();
    let mut blocks = Vec::new();
    let mut roles = Vec::new();
    let mut constant = Vec::new();
    let mut coefficients: Vec<Vec<(usize, SparseSym)>> = vec![Vec::new(); nv];
    for images in &set.blocks {
        let basis = &images.basis;
        for (second, keep_classes) in [(false, &model.r1_classes), (true, &model.r2_classes)] {
            let keep: Vec<usize> = (0..basis.class_dims.len())
                .filter(|&c| keep_classes[c])
                .flat_map(|c| basis.class_offsets[c]..basis.class_offsets[c] + basis.class_dims[c])
                .collect();
            if keep.is_empty() {
                continue;
            }
            let build = |terms: &[(usize, f64)]| -> SparseSym {
                let mut full = DMatrix::<f64>::zeros(images.dim(), images.dim());
                for &(l, c) in terms {
                    let (sb, data) = images.sub_block(orbits, l);
                    for r in 0..sb.rows {
                        for col in 0..sb.cols {
                            full[(sb.row + r, sb.col + col)] += c * data[r * sb.cols + col];
                        }
                    }
                }
                let sub = full.select_rows(&keep).select_columns(&keep);
                let sym = (&sub + sub.transpose()) * 0.5;
                let scale = sym.amax();
                SparseSym::from_dense(&sym, DROP_RELATIVE * scale.max(1e-300))
            };
            let (c_terms, v_terms) =
                if second { (&model.r2_constant, &model.r2) } else { (&model.r1_constant, &model.r1) };
            let b = blocks.len();
            blocks.push(BlockSpec { kind: BlockKind::Dense, size: keep.len() });
            roles.push(if second { BlockRole::R2 { character: basis.index } } else { BlockRole::R1 { character: basis.index } });
            constant.push(build(c_terms));
            for (v, terms) in v_terms.iter().enumerate() {
                let s = build(terms);
                if !s.is_empty() {
                    coefficients[v].push((b, s));
                }
            }
        }
    }
    finish(model, blocks, roles, constant, coefficients, Formulation::Block)
}

fn assemble_full(group: &SymmetricGroup, orbits: &OrbitIndex, model: SdpModel) -> SdpInstance {
    let nv = model.num_variables();
    let count = orbits.num_orbits();
    let order = group.order();
    let mut blocks = Vec::new();
    let mut roles = Vec::new();
    let mut constant = Vec::new();
    let mut coefficients: Vec<Vec<(usize, SparseSym)>> = vec![Vec::new(); nv];
    for (second, keep_classes) in [(false, &model.r1_classes), (true, &model.r2_classes)] {
        let keep: Vec<usize> = (0..order).filter(|&phi| keep_classes[group.class_of(phi)]).collect();
        let (c_terms, v_terms) =
            if second { (&model.r2_constant, &model.r2) } else { (&model.r1_constant, &model.r1) };
        // Per orbit: constant coefficient and (variable, coefficient) list.
        let mut const_of = vec![0.0; count];
        for &(l, c) in c_terms {
            const_of[l] += c;
        }
        let mut vars_of: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
        for (v, terms) in v_terms.iter().enumerate() {
            for &(l, c) in terms {
                vars_of[l].push((v, c));
            }
        }
        let b = blocks.len();
        let mut c_entries = Vec::new();
        let mut v_entries: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); nv];
        for (c, &psi) in keep.iter().enumerate() {
            for (r, &phi) in keep[..=c].iter().enumerate() {
                let l = orbits.orbit_of_pair(phi, psi);
                // Symmetric part: average the pair with its transpose.
                let lt = orbits.orbit(l).transpose;
                let cv = 0.5 * (const_of[l] + const_of[lt]);
                if cv != 0.0 {
                    c_entries.push((r, c, cv));
                }
                for &(v, x) in &vars_of[l] {
                    v_entries[v].push((r, c, 0.5 * x));
                }
                for &(v, x) in &vars_of[lt] {
                    v_entries[v].push((r, c, 0.5 * x));
                }
            }
        }
        blocks.push(BlockSpec { kind: BlockKind::Dense, size: keep.len() });
        roles.push(if second { BlockRole::R2 { character: 0 } } else { BlockRole::R1 { character: 0 } });
        constant.push(SparseSym { entries: c_entries });
        for (v, e) in v_entries.into_iter().enumerate() {
            let merged = merge_entries(e);
            if !merged.is_empty() {
                coefficients[v].push((b, SparseSym { entries: merged }));
            }
        }
    }
    finish(model, blocks, roles, constant, coefficients, Formulation::Full)
}

fn merge_entries(mut e: Vec<(usize, usize, f64)>) -> Vec<(usize, usize, f64)> {
    e.sort_by_key(|&(r, c, _)| (c, r));
    let mut out: Vec<(usize, usize, f64)> = Vec::with_capacity(e.len());
    for (r, c, v) in e {
        match out.last_mut() {
            Some(last) if last.0 == r && last.1 == c => last.2 += v,
            _ => out.push((r, c, v)),
        }
    }
    out.retain(|e| e.2 != 0.0);
    out
}

fn finish(
    model: SdpModel,
    mut blocks: Vec<BlockSpec>,
    mut roles: Vec<BlockRole>,
    mut constant: Vec<SparseSym>,
    mut coefficients: Vec<Vec<(usize, SparseSym)>>,
    formulation: Formulation,
) -> SdpInstance {
    let nv = model.num_variables();
    if nv > 0 {
        let (per_var, c) = bounds_block(&model);
        let b = blocks.len();
        blocks.push(BlockSpec { kind: BlockKind::Diagonal, size: 2 * nv });
        roles.push(BlockRole::Bounds);
        constant.push(c);
        for (v, s) in per_var {
            coefficients[v].push((b, s));
        }
    }
    let problem =
        BlockSdp { blocks, constant, coefficients, objective: model.objective.clone(), offset: model.offset };
    SdpInstance { model, problem, roles, formulation }
}
