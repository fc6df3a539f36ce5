//! The Delsarte linear program over the conjugacy scheme of `Sym(n)`.
//!
//! With `a_0 = 1` fixed, maximize `1 + Σ a_i` over the classes `i` whose
//! Hamming weight lies in `D`, subject to `χ(id) + Σ a_i χ(C_i) ≥ 0` for every
//! irreducible character `χ` and `a_i ≥ 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bound::{BoundResult, BoundStatus};
use crate::distance::DistanceSet;
use crate::error::{Error, Result};
use crate::simplex::{int, RationalLp, SimplexOutcome, SimplexSolution, DEFAULT_PIVOT_LIMIT};
use crate::symmetry::{check_degree, CharacterTable};

#[derive(Clone, Debug, Serialize)]
pub struct LpProblem {
    pub n: usize,
    pub distances: DistanceSet,
    /// Class indices of the free variables; every other `a_i` with `i ≠ 0`
    /// is forced to zero.
    pub free_classes: Vec<usize>,
    /// Objective coefficient of each free variable (all ones).
    pub objective: Vec<i64>,
    /// One row per character: `χ_k(C_i)` for each free class `i`.
    pub constraints: Vec<Vec<i64>>,
    /// `χ_k(id)`, the contribution of the fixed `a_0 = 1`.
    pub constant: Vec<i64>,
}

impl LpProblem {
    pub fn num_free(&self) -> usize {
        self.free_classes.len()
    }

    /// The problem as `max cᵀx, Ax ≤ b, x ≥ 0` with `b ≥ 0`.
    pub fn to_rational(&self) -> RationalLp {
        RationalLp {
            c: self.objective.iter().map(|&v| int(v)).collect(),
            a: self.constraints.iter().map(|row| row.iter().map(|&v| int(-v)).collect()).collect(),
            b: self.constant.iter().map(|&v| int(v)).collect(),
        }
    }
}

/// Exact optimum and both simplex routes' data.
#[derive(Clone, Debug)]
pub struct LpSolution {
    /// `1 + Σ a_i` at the optimum.
    pub value: BigRational,
    /// Full inner distribution, indexed by class.
    pub distribution: Vec<BigRational>,
    /// Multipliers of the character constraints.
    pub dual: Vec<BigRational>,
    pub pivots: usize,
}

pub fn build_lp(n: usize, distances: &DistanceSet) -> Result<LpProblem> {
    check_degree(n, 2, 8)?;
    distances.check_degree(n)?;
    build_lp_with_table(&CharacterTable::new(n)?, distances)
}

pub fn build_lp_with_table(table: &CharacterTable, distances: &DistanceSet) -> Result<LpProblem> {
    let n = table.n();
    distances.check_degree(n)?;
    let free_classes: Vec<usize> =
        (1..table.len()).filter(|&i| distances.contains(table.classes()[i].hamming_weight())).collect();
    let constraints = (0..table.len()).map(|k| free_classes.iter().map(|&i| table.value(k, i)).collect()).collect();
    let constant = (0..table.len()).map(|k| table.degree(k)).collect();
    Ok(LpProblem {
        n,
        distances: *distances,
        objective: vec![1; free_classes.len()],
        free_classes,
        constraints,
        constant,
    })
}

fn assemble(problem: &LpProblem, sol: &SimplexSolution, classes: usize) -> LpSolution {
    let mut distribution = vec![BigRational::zero(); classes];
    distribution[0] = BigRational::one();
    for (x, &i) in sol.x.iter().zip(&problem.free_classes) {
        distribution[i] = x.clone();
    }
    LpSolution { value: &sol.value + BigRational::one(), distribution, dual: sol.dual.clone(), pivots: sol.pivots }
}

fn outcome_error(outcome: &SimplexOutcome) -> Error {
    Error::Numerical(format!("simplex stopped with {outcome:?}"))
}

/// Exact optimum via the primal simplex.
pub fn solve_lp_exact(problem: &LpProblem) -> Result<LpSolution> {
    let sol = problem.to_rational().solve_primal(DEFAULT_PIVOT_LIMIT)?;
    if sol.outcome != SimplexOutcome::Optimal {
        return Err(outcome_error(&sol.outcome));
    }
    Ok(assemble(problem, &sol, problem.constant.len()))
}

/// Exact optimum via the dual simplex on the dual program.
pub fn solve_lp_dual(problem: &LpProblem) -> Result<LpSolution> {
    let sol = problem.to_rational().solve_dual(DEFAULT_PIVOT_LIMIT)?;
    if sol.outcome != SimplexOutcome::Optimal {
        return Err(outcome_error(&sol.outcome));
    }
    Ok(assemble(problem, &sol, problem.constant.len()))
}

/// Floor of an exact optimum with the LP slack, `⌊q + 10⁻⁶⌋`.
pub fn floor_exact(q: &BigRational) -> i64 {
    let slack = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
    (q + slack).floor().to_integer().to_i64().expect("LP bound fits in i64")
}

pub fn solve_lp(problem: &LpProblem) -> BoundResult {
    match solve_lp_exact(problem) {
        Ok(sol) => BoundResult {
            raw_optimum: sol.value.to_f64().unwrap_or(f64::NAN),
            exact_optimum: Some(sol.value.to_string()),
            floored_bound: floor_exact(&sol.value),
            status: BoundStatus::Optimal,
            certificate: Some(sol.dual.iter().map(|d| d.to_f64().unwrap_or(f64::NAN)).collect()),
            diagnostics: None,
        },
        Err(_) => BoundResult {
            raw_optimum: f64::NAN,
            exact_optimum: None,
            floored_bound: 0,
            status: BoundStatus::NumericalFailure,
            certificate: None,
            diagnostics: None,
        },
    }
}

/// Checks a solution against the problem exactly: primal feasibility, dual
/// feasibility and zero duality gap.
pub fn verify_certificate(problem: &LpProblem, sol: &LpSolution) -> bool {
    let x: Vec<&BigRational> = problem.free_classes.iter().map(|&i| &sol.distribution[i]).collect();
    if x.iter().any(|v| v.is_negative()) || sol.dual.iter().any(Signed::is_negative) {
        return false;
    }
    for (row, &c) in problem.constraints.iter().zip(&problem.constant) {
        let lhs: BigRational = row.iter().zip(&x).map(|(&a, &v)| int(a) * v).sum::<BigRational>() + int(c);
        if lhs.is_negative() {
            return false;
        }
    }
    for (j, &obj) in problem.objective.iter().enumerate() {
        let reduced: BigRational =
            problem.constraints.iter().zip(&sol.dual).map(|(row, u)| int(-row[j]) * u).sum();
        if reduced < int(obj) {
            return false;
        }
    }
    let dual_value: BigRational = problem.constant.iter().zip(&sol.dual).map(|(&b, u)| int(b) * u).sum();
    dual_value + BigRational::one() == sol.value
}

/// `Π_{d∈D} d`.
pub fn trivial_product_bound(distances: &DistanceSet) -> u64 {
    distances.product()
}
