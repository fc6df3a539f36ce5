//! Exact rational simplex for small dense linear programs in the form
//! `maximize cᵀx subject to Ax ≤ b, x ≥ 0`.
//!
//! Two independent routes are provided: the primal simplex started from the
//! slack basis (requires `b ≥ 0`), and the dual simplex applied to the dual
//! program `minimize bᵀu subject to Aᵀu ≥ c, u ≥ 0` (requires `b ≥ 0` for
//! dual feasibility of the slack basis). Both use Bland's rule, so neither
//! cycles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Dense problem data.
#[derive(Clone, Debug)]
pub struct RationalLp {
    pub c: Vec<Rational>,
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplexOutcome {
    Optimal,
    Unbounded,
    Infeasible,
    PivotLimit,
}

#[derive(Clone, Debug)]
pub struct SimplexSolution {
    pub outcome: SimplexOutcome,
    pub value: Rational,
    /// Primal point `x`.
    pub x: Vec<Rational>,
    /// Dual multipliers `u` of the constraints `Ax ≤ b`.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

pub const DEFAULT_PIVOT_LIMIT: usize = 10_000;

/// Dense tableau for `max cᵀx, Ax + s = b`. The last row holds reduced
/// costs (`z - cᵀx = 0`), the last column the right-hand side.
struct Tableau {
    rows: usize,
    cols: usize,
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Self {
        let (rows, vars) = (a.len(), c.len());
        let cols = vars + rows;
        let mut t = Vec::with_capacity(rows + 1);
        for (i, row) in a.iter().enumerate() {
            let mut r = row.clone();
            r.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r.push(b[i].clone());
            t.push(r);
        }
        let mut z: Vec<Rational> = c.iter().map(|v| -v).collect();
        z.extend(std::iter::repeat_with(Rational::zero).take(rows + 1));
        t.push(z);
        Tableau { rows, cols, t, basis: (vars..cols).collect() }
    }

    fn rhs(&self, r: usize) -> &Rational {
        &self.t[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn primal(&mut self, limit: usize) -> (SimplexOutcome, usize) {
        let mut pivots = 0;
        loop {
            let z = &self.t[self.rows];
            let Some(enter) = (0..self.cols).find(|&j| z[j].is_negative()) else {
                return (SimplexOutcome::Optimal, pivots);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows {
                let a = &self.t[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return (SimplexOutcome::Unbounded, pivots);
            };
            if pivots == limit {
                return (SimplexOutcome::PivotLimit, pivots);
            }
            self.pivot(r, enter);
            pivots += 1;
        }
    }

    /// Requires all reduced costs to be nonnegative.
    fn dual(&mut self, limit: usize) -> (SimplexOutcome, usize) {
        let mut pivots = 0;
        loop {
            let leave = (0..self.rows)
                .filter(|&i| self.rhs(i).is_negative())
                .min_by_key(|&i| self.basis[i]);
            let Some(r) = leave else {
                return (SimplexOutcome::Optimal, pivots);
            };
            let mut enter: Option<(usize, Rational)> = None;
            for j in 0..self.cols {
                let a = &self.t[r][j];
                if !a.is_negative() {
                    continue;
                }
                let ratio = &self.t[self.rows][j] / -a;
                if enter.as_ref().map_or(true, |(_, best)| ratio < *best) {
                    enter = Some((j, ratio));
                }
            }
            let Some((c, _)) = enter else {
                return (SimplexOutcome::Infeasible, pivots);
            };
            if pivots == limit {
                return (SimplexOutcome::PivotLimit, pivots);
            }
            self.pivot(r, c);
            pivots += 1;
        }
    }

    fn primal_point(&self, vars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < vars {
                x[b] = self.rhs(i).clone();
            }
        }
        x
    }

    fn slack_prices(&self, vars: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.t[self.rows][vars + i].clone()).collect()
    }

    fn objective(&self) -> Rational {
        self.rhs(self.rows).clone()
    }
}

impl RationalLp {
    fn check(&self) -> Result<()> {
        if self.a.len() != self.b.len() || self.a.iter().any(|r| r.len() != self.c.len()) {
            return Err(Error::Argument("inconsistent LP dimensions".into()));
        }
        if self.b.iter().any(Signed::is_negative) {
            return Err(Error::Argument("the slack basis needs b ≥ 0".into()));
        }
        Ok(())
    }

    /// Primal simplex from the slack basis.
    pub fn solve_primal(&self, limit: usize) -> Result<SimplexSolution> {
        self.check()?;
        let mut tab = Tableau::new(&self.c, &self.a, &self.b);
        let (outcome, pivots) = tab.primal(limit);
        Ok(SimplexSolution {
            outcome,
            value: tab.objective(),
            x: tab.primal_point(self.c.len()),
            dual: tab.slack_prices(self.c.len()),
            pivots,
        })
    }

    /// Dual simplex on `max -bᵀu, -Aᵀu ≤ -c, u ≥ 0`; the primal point is
    /// read off the reduced costs of the dual's slack columns.
    pub fn solve_dual(&self, limit: usize) -> Result<SimplexSolution> {
        self.check()?;
        let (m, v) = (self.b.len(), self.c.len());
        let at: Vec<Vec<Rational>> = (0..v).map(|j| (0..m).map(|i| -&self.a[i][j]).collect()).collect();
        let neg_b: Vec<Rational> = self.b.iter().map(|x| -x).collect();
        let neg_c: Vec<Rational> = self.c.iter().map(|x| -x).collect();
        let mut tab = Tableau::new(&neg_b, &at, &neg_c);
        let (outcome, pivots) = tab.dual(limit);
        let outcome = match outcome {
            // Dual infeasible means the primal is unbounded (the primal is
            // feasible at x = 0 because b ≥ 0).
            SimplexOutcome::Infeasible => SimplexOutcome::Unbounded,
            o => o,
        };
        Ok(SimplexSolution {
            outcome,
            value: -tab.objective(),
            x: tab.slack_prices(m),
            dual: tab.primal_point(m),
            pivots,
        })
    }
}

/// `⌊q⌋` for a rational.
pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}
