//! Exact computations in generalized Verma modules `N(k, 0)` for the affine
//! Lie algebras of types `B_l^(1)` and `D_l^(1)`.
//!
//! The crate is layered bottom-up:
//!
//! - [`clifford`]: the Clifford algebra fixing every sign convention,
//! - [`liealg`]: `g_B(l)` and `g_D(l)` with bracket table, form and dual basis,
//! - [`affine_weights`]: affine pairings, admissibility and the dot action,
//! - [`verma`]: PBW states and the loop-algebra action on `N(k, 0)`,
//! - [`singular`], [`embedding`], [`conformal`], [`triality`]: the concrete
//!   identities, each returning a serializable report,
//! - [`trace`]: the claim-to-check coverage matrix.

pub mod affine_weights;
pub mod clifford;
pub mod conformal;
pub mod embedding;
pub mod error;
pub mod liealg;
pub mod linalg;
pub mod notation;
pub mod rational;
pub mod singular;
pub mod trace;
pub mod triality;
pub mod verma;

pub use error::{Error, Result};
pub use liealg::{build_algebra, AlgebraHandle, LieAlgebra, LieElement, LieType, Root};
pub use rational::Rational;
pub use verma::{OperatorWord, PbwState, VermaModule};

/// The level `-l + 3/2` studied throughout.
pub fn embedding_level(rank: usize) -> Rational {
    rational::q(3 - 2 * rank as i64, 2)
}
