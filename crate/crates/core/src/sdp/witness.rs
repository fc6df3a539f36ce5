//! Witness matrices of explicit codes and the matrices `B'_l`.
//!
//! For a code `Γ ⊆ Sym(n)` containing the identity, `R_Γ` averages
//! `1_{t(Γ)} 1_{t(Γ)}ᵀ` over the maps `t = g ∘ L_{δ⁻¹}` with `δ ∈ Γ` and
//! `g` a conjugation optionally followed by inversion; `R'_Γ` does the same
//! over `δ ∉ Γ`. Both are computed here exactly, by that definition, for
//! small `n`.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::OrbitIndex;
use crate::symmetry::SymmetricGroup;

/// Largest degree for the exact dense witness matrices.
pub const MAX_WITNESS_DEGREE: usize = 5;

/// How `B'_l` is read for the identity-row orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BPrimeReading {
    /// For the `(C_j, {id})` orbit: `A_j - E'_j - B_({id},C_j) - B_(C_j,{id})`.
    Corrected,
    /// For the `(C_j, {id})` orbit: `A_j - E'_j`.
    Literal,
}

/// `B'_l` as a combination of orbit matrices `B_t` (orbit 0 excluded from
/// `l`).
///
/// * `({id}, C_j)` and the diagonal of `C_j`: zero.
/// * `(C_j, {id})`: the class correction of the chosen reading.
/// * every other orbit: `-B_l`.
pub fn b_prime_expansion(orbits: &OrbitIndex, l: usize, reading: BPrimeReading) -> Vec<(usize, i64)> {
    let o = orbits.orbit(l);
    if l == 0 || o.diagonal || o.row_class == 0 {
        return Vec::new();
    }
    if o.col_class != 0 {
        return vec![(l, -1)];
    }
    let j = o.row_class;
    let mut out = Vec::new();
    for (t, ot) in orbits.orbits().iter().enumerate() {
        if ot.quotient_class == j {
            let identity_row = ot.row_class == 0 || ot.col_class == 0;
            if reading == BPrimeReading::Literal || !identity_row {
                out.push((t, 1));
            }
        }
        if ot.diagonal && ot.row_class == j {
            out.push((t, -1));
        }
    }
    out
}

/// Dense rational `n! × n!` matrix with a common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub size: usize,
    pub denominator: i64,
    pub numerators: Vec<i64>,
}

impl RationalMatrix {
    pub fn get(&self, r: usize, c: usize) -> Ratio<i64> {
        Ratio::new(self.numerators[r * self.size + c], self.denominator)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.numerators.iter().map(|&v| v as f64 / self.denominator as f64).collect()
    }
}

fn check_code(group: &SymmetricGroup, code: &[usize]) -> Result<Vec<bool>> {
    if group.degree() > MAX_WITNESS_DEGREE {
        return Err(Error::Capacity(format!("witness matrices are limited to n ≤ {MAX_WITNESS_DEGREE}")));
    }
    let mut member = vec![false; group.order()];
    for &c in code {
        if c >= group.order() {
            return Err(Error::Range(format!("rank {c} out of range")));
        }
        member[c] = true;
    }
    if !member[0] {
        return Err(Error::Argument("the code must contain the identity".into()));
    }
    Ok(member)
}

/// Counts `Σ_{δ ∈ translations} Σ_g 1_{t(Γ)} 1_{t(Γ)}ᵀ`.
fn orbit_average(group: &SymmetricGroup, code: &[usize], translations: impl Iterator<Item = usize>) -> Vec<i64> {
    let order = group.order();
    let conj = group.conjugation_table();
    let mut counts = vec![0i64; order * order];
    let mut translated = Vec::with_capacity(code.len());
    let mut image = Vec::with_capacity(code.len());
    for delta in translations {
        let dinv = group.inverse(delta);
        translated.clear();
        translated.extend(code.iter().map(|&gamma| group.compose(dinv, gamma)));
        for beta in 0..order {
            let row = &conj[beta * order..(beta + 1) * order];
            for invert in [false, true] {
                image.clear();
                image.extend(translated.iter().map(|&t| {
                    let t = if invert { group.inverse(t) } else { t };
                    row[t] as usize
                }));
                for &a in &image {
                    for &b in &image {
                        counts[a * order + b] += 1;
                    }
                }
            }
        }
    }
    counts
}

/// `R_Γ` by its defining average.
pub fn witness_matrix(group: &SymmetricGroup, code: &[usize]) -> Result<RationalMatrix> {
    check_code(group, code)?;
    let order = group.order();
    let numerators = orbit_average(group, code, code.iter().copied());
    Ok(RationalMatrix { size: order, denominator: (2 * order * code.len()) as i64, numerators })
}

/// `R'_Γ`; undefined when `Γ = Sym(n)`.
pub fn complement_witness_matrix(group: &SymmetricGroup, code: &[usize]) -> Result<RationalMatrix> {
    let member = check_code(group, code)?;
    let order = group.order();
    let outside = order - code.len();
    if outside == 0 {
        return Err(Error::Argument("R' is undefined for the whole group".into()));
    }
    let numerators = orbit_average(group, code, (0..order).filter(|&d| !member[d]));
    Ok(RationalMatrix { size: order, denominator: (2 * order * outside) as i64, numerators })
}

/// Orbit coefficients `a_l = #{(θ, μ, ν) ∈ Γ³ : (θ⁻¹μ, θ⁻¹ν) ∈ O_l} / (|Γ| |O_l|)`.
pub fn coefficients_from_code(group: &SymmetricGroup, orbits: &OrbitIndex, code: &[usize]) -> Result<Vec<Ratio<i64>>> {
    let mut member = vec![false; group.order()];
    for &c in code {
        if c >= group.order() {
            return Err(Error::Range(format!("rank {c} out of range")));
        }
        member[c] = true;
    }
    let code: Vec<usize> = (0..group.order()).filter(|&c| member[c]).collect();
    let mut counts = vec![0i64; orbits.num_orbits()];
    for &theta in &code {
        let tinv = group.inverse(theta);
        let shifted: Vec<usize> = code.iter().map(|&mu| group.compose(tinv, mu)).collect();
        for &a in &shifted {
            let row = orbits.row(a);
            for &b in &shifted {
                counts[row[b] as usize] += 1;
            }
        }
    }
    Ok(counts
        .iter()
        .zip(orbits.orbits())
        .map(|(&c, o)| Ratio::new(c, code.len() as i64 * o.size as i64))
        .collect())
}

/// `Σ_t c_t B_t` as a dense integer matrix.
pub fn orbit_combination(orbits: &OrbitIndex, terms: &[(usize, i64)]) -> Vec<i64> {
    let order = orbits.group_order();
    let mut coef = vec![0i64; orbits.num_orbits()];
    for &(t, c) in terms {
        coef[t] += c;
    }
    let mut out = Vec::with_capacity(order * order);
    for phi in 0..order {
        out.extend(orbits.row(phi).iter().map(|&l| coef[l as usize]));
    }
    out
}

/// `I - B₀ + Σ_{l≠0} a_l B'_l` with rational `a`.
pub fn r2_from_coefficients(orbits: &OrbitIndex, a: &[Ratio<i64>], reading: BPrimeReading) -> Vec<Ratio<i64>> {
    let count = orbits.num_orbits();
    let mut coef = vec![Ratio::from_integer(0); count];
    for (l, o) in orbits.orbits().iter().enumerate().skip(1) {
        if o.diagonal {
            coef[l] += Ratio::from_integer(1);
        }
        for (t, c) in b_prime_expansion(orbits, l, reading) {
            coef[t] += a[l] * Ratio::from_integer(c);
        }
    }
    let order = orbits.group_order();
    let mut out = Vec::with_capacity(order * order);
    for phi in 0..order {
        out.extend(orbits.row(phi).iter().map(|&l| coef[l as usize]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_code() {
        let g = SymmetricGroup::new(3).unwrap();
        let r = witness_matrix(&g, &[0]).unwrap();
        assert_eq!(r.get(0, 0), Ratio::from_integer(1));
        let total: i64 = r.numerators.iter().sum();
        assert_eq!(total, r.denominator);
    }

    #[test]
    fn whole_group_has_no_complement() {
        let g = SymmetricGroup::new(3).unwrap();
        let all: Vec<usize> = (0..6).collect();
        assert!(complement_witness_matrix(&g, &all).is_err());
        assert!(witness_matrix(&g, &[1]).is_err());
    }
}
