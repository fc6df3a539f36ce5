//! The conjugacy association scheme on `Sym(n)`: relation `i` holds between
//! `φ` and `ψ` when `φψ⁻¹` lies in class `C_i`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::{check_degree, CharacterTable, Partition};

#[derive(Clone, Debug, Serialize)]
pub struct SchemeData {
    pub n: usize,
    /// Number of classes, `p(n)`.
    pub m: usize,
    /// `p[i][j][k] = p_ij^k`, flattened row-major.
    p: Vec<i64>,
    /// Second eigenmatrix; rows are classes, columns characters.
    pub q: Vec<Vec<i64>>,
    /// Hamming weight of each class.
    pub weights: Vec<usize>,
    pub class_sizes: Vec<u64>,
}

impl SchemeData {
    pub fn new(table: &CharacterTable) -> Result<Self> {
        let m = table.len();
        let mut p = vec![0i64; m * m * m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    p[(i * m + j) * m + k] = structure_constant(table, i, j, k)?;
                }
            }
        }
        Ok(SchemeData {
            n: table.n(),
            m,
            p,
            q: second_eigenmatrix(table),
            weights: table.classes().iter().map(hamming_weight).collect(),
            class_sizes: table.class_sizes().to_vec(),
        })
    }

    pub fn for_degree(n: usize) -> Result<Self> {
        check_degree(n, 1, 8)?;
        Self::new(&CharacterTable::new(n)?)
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> i64 {
        self.p[(i * self.m + j) * self.m + k]
    }
}

/// `p_ij^k = (|C_i||C_j| / n!) Σ_χ χ(C_i) χ(C_j) χ(C_k) / χ(id)`.
///
/// The character sum is accumulated over a common denominator in 128-bit
/// integers; a non-integral result means the character table is wrong.
pub fn structure_constant(table: &CharacterTable, i: usize, j: usize, k: usize) -> Result<i64> {
    let m = table.len();
    if i >= m || j >= m || k >= m {
        return Err(Error::Range(format!("class index out of 0..{m}")));
    }
    let lcm = (0..m).fold(1i128, |acc, c| acc.lcm(&(table.degree(c) as i128)));
    let mut sum = 0i128;
    for c in 0..m {
        let row = table.row(c);
        let term = row[i] as i128 * row[j] as i128 * row[k] as i128;
        sum = sum
            .checked_add(term * (lcm / table.degree(c) as i128))
            .ok_or_else(|| Error::Consistency("structure constant accumulator overflow".into()))?;
    }
    let numerator = table.class_size(i) as i128 * table.class_size(j) as i128 * sum;
    let denominator = table.group_order() as i128 * lcm;
    if numerator % denominator != 0 {
        return Err(Error::Consistency(format!(
            "p_{i}{j}^{k} = {numerator}/{denominator} is not an integer"
        )));
    }
    let value = numerator / denominator;
    if value < 0 {
        return Err(Error::Consistency(format!("p_{i}{j}^{k} = {value} is negative")));
    }
    Ok(value as i64)
}

/// `Q(i, j) = χ_j(id) · χ_j(C_i)`.
pub fn second_eigenmatrix(table: &CharacterTable) -> Vec<Vec<i64>> {
    let m = table.len();
    (0..m).map(|i| (0..m).map(|j| table.degree(j) * table.value(j, i)).collect()).collect()
}

/// Number of points moved by a permutation of cycle type `lambda`.
pub fn hamming_weight(lambda: &Partition) -> usize {
    lambda.hamming_weight()
}
