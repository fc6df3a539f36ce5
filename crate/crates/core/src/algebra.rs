//! The conjugacy representation of `G = Sym(n) × 2` on `ℝ^{Sym(n)}`, its
//! primitive central idempotents and the multiplicities of the irreducible
//! constituents.
//!
//! An element `γ = (β, t)` acts on permutations by `γ·φ = β φ^{(-1)^t} β⁻¹`
//! and on vectors by `(γ̂x)(φ) = x(γ⁻¹·φ)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::{CharacterTable, Partition, SymmetricGroup};

/// An element of `G`: the rank of `β` and whether inversion is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub beta: usize,
    pub invert: bool,
}

/// Irreducible character `(λ, s)` of `G`: `χ((β, t)) = χ_λ(β) s^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GCharacter {
    /// Index of `λ` in the character order of [`CharacterTable`].
    pub lambda: usize,
    /// `+1` or `-1`.
    pub sign: i8,
}

impl GCharacter {
    /// All `2m` characters: for each `λ` in character order, `+` then `-`.
    pub fn all(table: &CharacterTable) -> Vec<GCharacter> {
        (0..table.len()).flat_map(|lambda| [1, -1].map(|sign| GCharacter { lambda, sign })).collect()
    }

    pub fn value(&self, table: &CharacterTable, class: usize, invert: bool) -> i64 {
        let v = table.value(self.lambda, class);
        if invert {
            v * self.sign as i64
        } else {
            v
        }
    }

    pub fn label(&self, table: &CharacterTable) -> CharacterLabel {
        CharacterLabel { shape: table.characters()[self.lambda].clone(), sign: self.sign }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterLabel {
    pub shape: Partition,
    pub sign: i8,
}

impl fmt::Display for CharacterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.shape, if self.sign > 0 { '+' } else { '-' })
    }
}

/// `(γ̂x)(φ) = x(β⁻¹ φ^{±1} β)`.
pub fn apply_group_element(group: &SymmetricGroup, gamma: GroupElement, x: &[f64]) -> Vec<f64> {
    (0..group.order())
        .map(|phi| {
            let phi = if gamma.invert { group.inverse(phi) } else { phi };
            x[group.conjugate(gamma.beta, phi)]
        })
        .collect()
}

/// `x ↦ (x + s·x∘inv)/2`, the central idempotent of the order-two factor.
pub fn sign_projection(group: &SymmetricGroup, sign: i8, x: &[f64]) -> Vec<f64> {
    let s = sign as f64;
    (0..group.order()).map(|phi| 0.5 * (x[phi] + s * x[group.inverse(phi)])).collect()
}

/// Central idempotent of `Sym(n)` for the character `λ` (character order),
/// acting by conjugation: `(χ_λ(id)/n!) Σ_β χ_λ(β) ĉ_β x`.
pub fn symmetric_idempotent(group: &SymmetricGroup, lambda: usize, x: &[f64]) -> Vec<f64> {
    let table = group.characters();
    let order = group.order();
    let conj = group.conjugation_table();
    let mut out = vec![0.0; order];
    for beta in 0..order {
        let c = table.value(lambda, group.class_of(beta)) as f64;
        if c == 0.0 {
            continue;
        }
        let row = &conj[beta * order..(beta + 1) * order];
        for (o, &src) in out.iter_mut().zip(row) {
            *o += c * x[src as usize];
        }
    }
    let scale = table.degree(lambda) as f64 / order as f64;
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

/// `ε_k x = (χ_k(id)/2n!) Σ_γ χ_k(γ) γ̂x`.
pub fn idempotent_apply(group: &SymmetricGroup, k: GCharacter, x: &[f64]) -> Vec<f64> {
    symmetric_idempotent(group, k.lambda, &sign_projection(group, k.sign, x))
}

/// Number of `α ∈ C_l` fixed by `γ`.
pub fn restriction_character(group: &SymmetricGroup, l: usize, gamma: GroupElement) -> u64 {
    group
        .class_members(l)
        .iter()
        .filter(|&&alpha| {
            let alpha = alpha as usize;
            let a = if gamma.invert { group.inverse(alpha) } else { alpha };
            group.conjugate(gamma.beta, a) == alpha
        })
        .count() as u64
}

/// `counts[t][c][l]`: fixed points in `C_l` of `(β, t)` for `β` a
/// representative of class `c`.
pub fn restriction_counts(group: &SymmetricGroup) -> [Vec<Vec<u64>>; 2] {
    let m = group.class_count();
    [false, true].map(|invert| {
        (0..m)
            .map(|c| {
                let beta = group.class_members(c)[0] as usize;
                (0..m).map(|l| restriction_character(group, l, GroupElement { beta, invert })).collect()
            })
            .collect()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityTable {
    pub n: usize,
    pub characters: Vec<GCharacter>,
    pub labels: Vec<CharacterLabel>,
    /// `d_k = χ_k(id)`.
    pub degrees: Vec<u64>,
    /// `m_k = Σ_l a_k^l`.
    pub multiplicities: Vec<u64>,
    /// `a_k^l`, the multiplicity of character `k` in the permutation module
    /// on class `l`.
    pub coefficients: Vec<Vec<u64>>,
}

impl MultiplicityTable {
    /// Nonzero multiplicities in increasing order.
    pub fn nonzero_sorted(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.multiplicities.iter().copied().filter(|&m| m > 0).collect();
        v.sort_unstable();
        v
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.multiplicities.iter().map(|m| m * m).sum()
    }

    pub fn dimension(&self) -> u64 {
        self.multiplicities.iter().zip(&self.degrees).map(|(m, d)| m * d).sum()
    }

    /// Indices of the characters that occur.
    pub fn occurring(&self) -> Vec<usize> {
        (0..self.characters.len()).filter(|&k| self.multiplicities[k] > 0).collect()
    }
}

/// `a_k^l = (1/2n!) Σ_{(μ,t)} |C_μ| χ|_{C_l}((μ,t)) χ_k((μ,t))`.
pub fn multiplicities(group: &SymmetricGroup) -> Result<MultiplicityTable> {
    let table = group.characters();
    let m = table.len();
    let counts = restriction_counts(group);
    let denominator = 2 * group.order() as i128;
    let characters = GCharacter::all(table);
    let mut coefficients = Vec::with_capacity(characters.len());
    for k in &characters {
        let mut row = Vec::with_capacity(m);
        for l in 0..m {
            let mut sum = 0i128;
            for (t, invert) in [false, true].into_iter().enumerate() {
                for c in 0..m {
                    sum += table.class_size(c) as i128
                        * counts[t][c][l] as i128
                        * k.value(table, c, invert) as i128;
                }
            }
            if sum % denominator != 0 || sum < 0 {
                return Err(Error::Consistency(format!(
                    "a_k^l = {sum}/{denominator} is not a nonnegative integer"
                )));
            }
            row.push((sum / denominator) as u64);
        }
        coefficients.push(row);
    }
    Ok(MultiplicityTable {
        n: group.degree(),
        labels: characters.iter().map(|k| k.label(table)).collect(),
        degrees: characters.iter().map(|k| table.degree(k.lambda) as u64).collect(),
        multiplicities: coefficients.iter().map(|r| r.iter().sum()).collect(),
        characters,
        coefficients,
    })
}
