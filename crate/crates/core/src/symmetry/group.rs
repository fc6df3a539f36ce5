use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::symmetry::characters::CharacterTable;
use crate::symmetry::partition::{check_degree, factorial};
use crate::symmetry::permutation::{lehmer_rank, lehmer_unrank_into, Permutation};

/// Largest degree for which the element-level tables are built.
pub const MAX_TABLE_DEGREE: usize = 7;

/// All elements of `Sym(n)` in Lehmer-rank order, with class labels and a
/// lazily built conjugation table.
pub struct SymmetricGroup {
    n: usize,
    order: usize,
    images: Vec<u8>,
    inverse: Vec<u32>,
    class_of: Vec<u8>,
    local_index: Vec<u32>,
    class_members: Vec<Vec<u32>>,
    table: CharacterTable,
    conjugation: OnceLock<Vec<u16>>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Result<Self> {
        check_degree(n, 1, 8)?;
        if n > MAX_TABLE_DEGREE {
            return Err(Error::Capacity(format!(
                "element tables for Sym({n}) are not supported (limit {MAX_TABLE_DEGREE})"
            )));
        }
        let table = CharacterTable::new(n)?;
        let order = factorial(n) as usize;
        let mut images = Vec::with_capacity(order * n);
        let mut buf = Vec::with_capacity(n);
        for r in 0..order {
            lehmer_unrank_into(r as u32, n, &mut buf);
            images.extend_from_slice(&buf);
        }
        let mut inverse = vec![0u32; order];
        let mut class_of = vec![0u8; order];
        let mut local_index = vec![0u32; order];
        let mut class_members = vec![Vec::new(); table.len()];
        let mut inv = vec![0u8; n];
        for r in 0..order {
            let p = &images[r * n..(r + 1) * n];
            for (i, &x) in p.iter().enumerate() {
                inv[x as usize] = i as u8;
            }
            inverse[r] = lehmer_rank(&inv);
            let ct = Permutation::from_images_unchecked(p.to_vec()).cycle_type();
            let c = table.class_index(&ct).expect("cycle type is a partition of n");
            class_of[r] = c as u8;
            local_index[r] = class_members[c].len() as u32;
            class_members[c].push(r as u32);
        }
        Ok(SymmetricGroup {
            n,
            order,
            images,
            inverse,
            class_of,
            local_index,
            class_members,
            table,
            conjugation: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `n!`
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn characters(&self) -> &CharacterTable {
        &self.table
    }

    pub fn images(&self, rank: usize) -> &[u8] {
        &self.images[rank * self.n..(rank + 1) * self.n]
    }

    pub fn element(&self, rank: usize) -> Permutation {
        Permutation::from_images_unchecked(self.images(rank).to_vec())
    }

    pub fn inverse(&self, rank: usize) -> usize {
        self.inverse[rank] as usize
    }

    pub fn class_of(&self, rank: usize) -> usize {
        self.class_of[rank] as usize
    }

    /// Position of an element inside the member list of its class.
    pub fn local_index(&self, rank: usize) -> usize {
        self.local_index[rank] as usize
    }

    pub fn class_members(&self, class: usize) -> &[u32] {
        &self.class_members[class]
    }

    pub fn class_count(&self) -> usize {
        self.class_members.len()
    }

    /// Rank of `a ∘ b`.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let (pa, pb) = (self.images(a), self.images(b));
        let mut out = [0u8; MAX_TABLE_DEGREE];
        for i in 0..self.n {
            out[i] = pa[pb[i] as usize];
        }
        lehmer_rank(&out[..self.n]) as usize
    }

    /// Rank of `a ∘ b⁻¹`.
    pub fn quotient(&self, a: usize, b: usize) -> usize {
        self.compose(a, self.inverse(b))
    }

    /// The map `φ ↦ g⁻¹ φ g` on ranks, computed directly.
    pub fn conjugation_map(&self, g: usize) -> Vec<u32> {
        let gi = self.inverse(g);
        (0..self.order).map(|phi| self.compose(self.compose(gi, phi), g) as u32).collect()
    }

    /// Row-major `n! × n!` table with entry `[β][φ] = rank(β⁻¹ φ β)`.
    ///
    /// Built once by walking the Cayley graph on the generators `(1 2)` and
    /// `(1 2 … n)`, using `c_{βg} = c_g ∘ c_β`.
    pub fn conjugation_table(&self) -> &[u16] {
        self.conjugation.get_or_init(|| self.build_conjugation_table())
    }

    /// `β⁻¹ φ β`
    pub fn conjugate(&self, beta: usize, phi: usize) -> usize {
        self.conjugation_table()[beta * self.order + phi] as usize
    }

    pub fn generator_ranks(&self) -> Vec<usize> {
        if self.n < 2 {
            return Vec::new();
        }
        let t = Permutation::transposition(self.n, 0, 1).rank() as usize;
        let c = Permutation::long_cycle(self.n).rank() as usize;
        if t == c {
            vec![t]
        } else {
            vec![t, c]
        }
    }

    fn build_conjugation_table(&self) -> Vec<u16> {
        let n_el = self.order;
        let mut table = vec![0u16; n_el * n_el];
        let mut done = vec![false; n_el];
        for (phi, slot) in table[..n_el].iter_mut().enumerate() {
            *slot = phi as u16;
        }
        done[0] = true;
        let gens: Vec<(usize, Vec<u32>)> =
            self.generator_ranks().into_iter().map(|g| (g, self.conjugation_map(g))).collect();
        let mut queue = VecDeque::from([0usize]);
        while let Some(beta) = queue.pop_front() {
            for (g, cg) in &gens {
                let next = self.compose(beta, *g);
                if done[next] {
                    continue;
                }
                done[next] = true;
                let (src, dst) = if beta < next {
                    let (lo, hi) = table.split_at_mut(next * n_el);
                    (&lo[beta * n_el..(beta + 1) * n_el], &mut hi[..n_el])
                } else {
                    let (lo, hi) = table.split_at_mut(beta * n_el);
                    (&hi[..n_el], &mut lo[next * n_el..(next + 1) * n_el])
                };
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = cg[s as usize] as u16;
                }
                queue.push_back(next);
            }
        }
        debug_assert!(done.iter().all(|&d| d));
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_table_matches_direct_computation() {
        for n in 1..=5 {
            let g = SymmetricGroup::new(n).unwrap();
            for beta in 0..g.order() {
                let direct = g.conjugation_map(beta);
                for phi in 0..g.order() {
                    assert_eq!(g.conjugate(beta, phi), direct[phi] as usize);
                }
            }
        }
    }

    #[test]
    fn classes_partition_the_group() {
        let g = SymmetricGroup::new(6).unwrap();
        let t = g.characters();
        for c in 0..g.class_count() {
            assert_eq!(g.class_members(c).len() as u64, t.class_size(c));
            for (i, &r) in g.class_members(c).iter().enumerate() {
                assert_eq!(g.local_index(r as usize), i);
                assert_eq!(g.class_of(r as usize), c);
            }
        }
        assert_eq!(g.class_members(0), &[0]);
    }

    #[test]
    fn inverse_and_compose() {
        let g = SymmetricGroup::new(5).unwrap();
        for r in 0..g.order() {
            assert_eq!(g.compose(r, g.inverse(r)), 0);
            assert_eq!(g.element(r).inverse().rank() as usize, g.inverse(r));
        }
    }

    #[test]
    fn degree_eight_is_capacity_error() {
        assert!(matches!(SymmetricGroup::new(8), Err(Error::Capacity(_))));
        assert!(matches!(SymmetricGroup::new(9), Err(Error::Range(_))));
    }
}
