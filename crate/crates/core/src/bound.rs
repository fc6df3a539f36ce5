use serde::Serialize;

/// Floor offset applied to exact LP optima.
pub const LP_FLOOR_SLACK: f64 = 1e-6;
/// Floor offset applied to SDP optima.
pub const SDP_FLOOR_SLACK: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    Optimal,
    Infeasible,
    NumericalFailure,
}

/// Interior-point diagnostics reported with an SDP bound.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|primal - dual| / max(1, |primal|)`.
    pub relative_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    /// Smallest eigenvalue of each PSD constraint at the returned point,
    /// recomputed from the problem data.
    pub min_eigenvalue_r1: f64,
    pub min_eigenvalue_r2: f64,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    pub raw_optimum: f64,
    /// Exact optimum as `p/q`, when the solver is exact.
    pub exact_optimum: Option<String>,
    pub floored_bound: i64,
    pub status: BoundStatus,
    /// Dual solution: constraint multipliers for the LP, or the dual
    /// objective's multipliers flattened for the SDP.
    pub certificate: Option<Vec<f64>>,
    pub diagnostics: Option<SolverDiagnostics>,
}

impl BoundResult {
    pub fn is_optimal(&self) -> bool {
        self.status == BoundStatus::Optimal
    }
}

/// `floor(raw + slack)`, computed in floating point.
pub fn floor_with_slack(raw: f64, slack: f64) -> i64 {
    (raw + slack).floor() as i64
}
