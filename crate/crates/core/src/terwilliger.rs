//! Dimension of the algebra generated by the class adjacency matrices `A_i`
//! and the diagonal class projections `E'_i` of the conjugacy scheme.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::OrbitIndex;
use crate::symmetry::SymmetricGroup;

pub const PIVOT_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct TerwilligerReport {
    pub n: usize,
    pub dimension: usize,
    /// Smallest pivot accepted into the basis.
    pub smallest_accepted_pivot: f64,
    /// Largest pivot rejected as numerically zero.
    pub largest_rejected_pivot: f64,
    pub products: usize,
    /// `dense` or `orbit`.
    pub representation: &'static str,
}

/// Row-echelon basis of vectorized matrices with partial pivoting.
struct Echelon {
    rows: Vec<Vec<f64>>,
    pivots: Vec<usize>,
    smallest_accepted: f64,
    largest_rejected: f64,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: Vec::new(), smallest_accepted: f64::INFINITY, largest_rejected: 0.0 }
    }

    /// Reduces `v` against the basis; returns the normalized residual if it
    /// is independent.
    fn insert(&mut self, mut v: Vec<f64>) -> Option<Vec<f64>> {
        let scale = max_abs(&v).1;
        if scale == 0.0 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= scale);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p];
            if f != 0.0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= f * r;
                }
            }
        }
        let (p, pivot) = max_abs(&v);
        if pivot <= PIVOT_THRESHOLD {
            self.largest_rejected = self.largest_rejected.max(pivot);
            return None;
        }
        self.smallest_accepted = self.smallest_accepted.min(pivot);
        let inv = 1.0 / v[p];
        v.iter_mut().for_each(|x| *x *= inv);
        self.rows.push(v.clone());
        self.pivots.push(p);
        Some(v)
    }
}

fn max_abs(v: &[f64]) -> (usize, f64) {
    v.iter().enumerate().fold((0, 0.0), |(bi, bv), (i, &x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) })
}

/// Closure of `span{I}` under left multiplication by the generators.
fn closure<F>(identity: Vec<f64>, generators: usize, mut multiply: F) -> (Echelon, usize)
where
    F: FnMut(usize, &[f64]) -> Vec<f64>,
{
    let mut basis = Echelon::new();
    let mut queue = VecDeque::new();
    if let Some(v) = basis.insert(identity) {
        queue.push_back(v);
    }
    let mut products = 0;
    while let Some(x) = queue.pop_front() {
        for g in 0..generators {
            products += 1;
            if let Some(v) = basis.insert(multiply(g, &x)) {
                queue.push_back(v);
            }
        }
    }
    (basis, products)
}

/// Dense closure on `n! × n!` matrices; `n ≤ 5`.
pub fn terwilliger_dimension(group: &SymmetricGroup) -> Result<TerwilligerReport> {
    let n = group.degree();
    if n > 5 {
        return Err(Error::Capacity(format!(
            "dense closure is limited to n ≤ 5; use the orbit representation for n = {n}"
        )));
    }
    let order = group.order();
    let m = group.class_count();
    let mut identity = vec![0.0; order * order];
    for phi in 0..order {
        identity[phi * order + phi] = 1.0;
    }
    // Generator g < m is A_g, generator m + i is E'_i.
    let multiply = |g: usize, x: &[f64]| {
        let mut out = vec![0.0; order * order];
        if g < m {
            // (A_g X)(φ, ·) = Σ_{c ∈ C_g} X(c⁻¹φ, ·)
            for phi in 0..order {
                let dst = phi * order;
                for &c in group.class_members(g) {
                    let src = group.compose(group.inverse(c as usize), phi) * order;
                    for j in 0..order {
                        out[dst + j] += x[src + j];
                    }
                }
            }
        } else {
            let class = g - m;
            for &phi in group.class_members(class) {
                let r = phi as usize * order;
                out[r..r + order].copy_from_slice(&x[r..r + order]);
            }
        }
        out
    };
    let (basis, products) = closure(identity, 2 * m, multiply);
    Ok(report(n, basis, products, "dense"))
}

/// Closure on orbit coordinates: every generator commutes with the action
/// of conjugation and inversion, so each element of the algebra is
/// determined by its values at orbit representatives.
pub fn terwilliger_dimension_orbits(group: &SymmetricGroup, orbits: &OrbitIndex) -> Result<TerwilligerReport> {
    let order = group.order();
    let m = group.class_count();
    let count = orbits.num_orbits();
    let identity: Vec<f64> = orbits.orbits().iter().map(|o| if o.diagonal { 1.0 } else { 0.0 }).collect();
    let multiply = |g: usize, x: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; count];
        for (l, o) in orbits.orbits().iter().enumerate() {
            let (phi, psi) = (o.representative.0 as usize, o.representative.1 as usize);
            if g < m {
                out[l] = group
                    .class_members(g)
                    .iter()
                    .map(|&c| x[orbits.orbit_of_pair(group.compose(group.inverse(c as usize), phi), psi)])
                    .sum();
            } else if o.row_class == g - m {
                out[l] = x[l];
            }
        }
        out
    };
    debug_assert_eq!(orbits.group_order(), order);
    let (basis, products) = closure(identity, 2 * m, multiply);
    Ok(report(group.degree(), basis, products, "orbit"))
}

fn report(n: usize, basis: Echelon, products: usize, representation: &'static str) -> TerwilligerReport {
    TerwilligerReport {
        n,
        dimension: basis.rows.len(),
        smallest_accepted_pivot: basis.smallest_accepted,
        largest_rejected_pivot: basis.largest_rejected,
        products,
        representation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_degrees() {
        for n in 2..=4 {
            let expected = crate::orbits::burnside_count(n).unwrap() as usize;
            let g = SymmetricGroup::new(n).unwrap();
            let r = terwilliger_dimension(&g).unwrap();
            assert_eq!(r.dimension, expected, "n={n}");
            assert!(r.largest_rejected_pivot < 1e-10);
            assert!(r.smallest_accepted_pivot > 1e-6);
            let idx = OrbitIndex::enumerate(&g).unwrap();
            assert_eq!(terwilliger_dimension_orbits(&g, &idx).unwrap().dimension, expected);
        }
    }

    #[test]
    fn dense_capacity() {
        let g = SymmetricGroup::new(6).unwrap();
        assert!(matches!(terwilliger_dimension(&g), Err(Error::Capacity(_))));
    }
}
