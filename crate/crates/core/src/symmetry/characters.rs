use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::partition::{factorial, partitions, Partition};

/// Exact irreducible character table of `Sym(n)`.
///
/// Columns follow the canonical class order of [`partitions`] (class 0 is
/// `1^n`, the identity). Rows follow the reverse order, so character 0 is the
/// trivial character `[n]` and the last row is the sign character `1^n`.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    n: usize,
    classes: Vec<Partition>,
    characters: Vec<Partition>,
    values: Vec<Vec<i64>>,
    class_sizes: Vec<u64>,
    centralizer_sizes: Vec<u64>,
}

impl CharacterTable {
    pub fn new(n: usize) -> Result<Self> {
        let classes = partitions(n)?;
        let characters: Vec<Partition> = classes.iter().rev().cloned().collect();
        let mut evaluator = MurnaghanNakayama::default();
        let values = characters
            .iter()
            .map(|lambda| classes.iter().map(|mu| evaluator.evaluate(lambda, mu)).collect())
            .collect();
        let class_sizes = classes.iter().map(Partition::class_size).collect();
        let centralizer_sizes = classes.iter().map(Partition::centralizer_size).collect();
        Ok(CharacterTable { n, classes, characters, values, class_sizes, centralizer_sizes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of classes (and of irreducible characters), `p(n)`.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn group_order(&self) -> u64 {
        factorial(self.n)
    }

    pub fn classes(&self) -> &[Partition] {
        &self.classes
    }

    pub fn characters(&self) -> &[Partition] {
        &self.characters
    }

    /// `χ_k(C_i)` with `k` in character order and `i` in class order.
    pub fn value(&self, character: usize, class: usize) -> i64 {
        self.values[character][class]
    }

    pub fn row(&self, character: usize) -> &[i64] {
        &self.values[character]
    }

    /// `χ_k(id)`.
    pub fn degree(&self, character: usize) -> i64 {
        self.values[character][0]
    }

    pub fn class_size(&self, class: usize) -> u64 {
        self.class_sizes[class]
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn centralizer_size(&self, class: usize) -> u64 {
        self.centralizer_sizes[class]
    }

    pub fn centralizer_sizes(&self) -> &[u64] {
        &self.centralizer_sizes
    }

    pub fn class_index(&self, mu: &Partition) -> Option<usize> {
        self.classes.binary_search(mu).ok()
    }

    pub fn character_index(&self, lambda: &Partition) -> Option<usize> {
        self.class_index(lambda).map(|i| self.len() - 1 - i)
    }

    pub fn trivial_character(&self) -> usize {
        0
    }

    pub fn sign_character(&self) -> usize {
        self.len() - 1
    }

    /// `Σ_χ χ(μ)`: the number of square roots of an element of class `μ`
    /// (all irreducible characters of `Sym(n)` are real).
    pub fn column_sum(&self, class: usize) -> i64 {
        self.values.iter().map(|row| row[class]).sum()
    }

    /// `Σ_χ χ(μ)²`, which equals the centralizer order `z_μ`.
    pub fn column_square_sum(&self, class: usize) -> i64 {
        self.values.iter().map(|row| row[class] * row[class]).sum()
    }
}

/// `χ_λ(μ)` via the Murnaghan–Nakayama rule.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.n() != mu.n() {
        return Err(Error::Argument(format!(
            "character {lambda} and class {mu} belong to different degrees"
        )));
    }
    Ok(MurnaghanNakayama::default().evaluate(lambda, mu))
}

/// Rim-hook recursion on beta-sets, memoized on (remaining shape, remaining
/// cycle lengths).
#[derive(Default)]
pub struct MurnaghanNakayama {
    memo: HashMap<(Vec<u8>, Vec<u8>), i64>,
}

impl MurnaghanNakayama {
    pub fn evaluate(&mut self, lambda: &Partition, mu: &Partition) -> i64 {
        self.eval(lambda.parts(), mu.parts())
    }

    fn eval(&mut self, shape: &[u8], cycles: &[u8]) -> i64 {
        let Some((&r, rest)) = cycles.split_first() else {
            return if shape.is_empty() { 1 } else { 0 };
        };
        let key = (shape.to_vec(), cycles.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let len = shape.len();
        let beta: Vec<i32> = shape.iter().enumerate().map(|(i, &p)| p as i32 + (len - 1 - i) as i32).collect();
        let r = r as i32;
        let mut total = 0;
        for (idx, &b) in beta.iter().enumerate() {
            let target = b - r;
            if target < 0 || beta.contains(&target) {
                continue;
            }
            let crossed = beta.iter().filter(|&&x| target < x && x < b).count();
            let sign = if crossed % 2 == 0 { 1 } else { -1 };
            let mut next: Vec<i32> = beta.iter().enumerate().filter(|&(j, _)| j != idx).map(|(_, &x)| x).collect();
            next.push(target);
            next.sort_unstable_by(|a, b| b.cmp(a));
            let m = next.len();
            let reduced: Vec<u8> = next
                .iter()
                .enumerate()
                .map(|(j, &x)| (x - (m - 1 - j) as i32) as u8)
                .filter(|&p| p > 0)
                .collect();
            total += sign * self.eval(&reduced, rest);
        }
        self.memo.insert(key, total);
        total
    }
}
