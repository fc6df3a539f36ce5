//! Upper bounds on the size of permutation codes in `Sym(n)` under the
//! Hamming metric.
//!
//! Two bounds are computed. The Delsarte linear program over the conjugacy
//! scheme of `Sym(n)` ([`lp`]), and a semidefinite program over the algebra of
//! orbits of `Sym(n)²` under conjugation and inversion ([`sdp`]), solved
//! after block-diagonalizing that algebra ([`blocks`]).

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod blocks;
pub mod bound;
pub mod distance;
pub mod error;
pub mod lp;
pub mod orbits;
pub mod scheme;
pub mod sdp;
pub mod simplex;
pub mod symmetry;
pub mod tables;
pub mod terwilliger;

pub use algebra::{GCharacter, MultiplicityTable};
pub use blocks::{BasicBlockSet, BlockBasis};
pub use bound::{BoundResult, BoundStatus, SolverDiagnostics};
pub use distance::DistanceSet;
pub use error::{Error, Result};
pub use lp::LpProblem;
pub use orbits::{OrbitIndex, OrbitInfo};
pub use scheme::SchemeData;
pub use sdp::{Formulation, SdpContext, SdpOptions, SdpSolution, TransposeMode};
pub use symmetry::{CharacterTable, Partition, Permutation, SymmetricGroup};
