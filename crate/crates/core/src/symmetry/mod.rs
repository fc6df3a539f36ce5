//! Exact combinatorics of the symmetric group: partitions, permutations and
//! their Lehmer ranks, cycle types, class sizes and the character table.

mod characters;
mod group;
mod partition;
mod permutation;

pub use characters::{character, CharacterTable, MurnaghanNakayama};
pub use group::{SymmetricGroup, MAX_TABLE_DEGREE};
pub use partition::{factorial, partitions, Partition, MAX_DEGREE};
pub(crate) use partition::check_degree;
pub use permutation::Permutation;

/// Cycle type of `pi`, parts in descending order.
pub fn cycle_type(pi: &Permutation) -> Partition {
    pi.cycle_type()
}

/// `n! / z_λ`
pub fn class_size(lambda: &Partition) -> u64 {
    lambda.class_size()
}
