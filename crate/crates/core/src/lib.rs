//! Reducible ("N-oscillator") representation of the canonical
//! anti-commutation relations for free Dirac fields on a discretized
//! momentum lattice, with numerical checks of its algebraic identities.
//!
//! Layers, bottom up:
//! - [`engine`]: sparse complex operators and states.
//! - [`jw`]: the four-mode Jordan-Wigner register and its block exponentials.
//! - [`spinor`]: two-spinor kinematics, spin frames, eigen-bispinors and the
//!   SU(2) little-group matrix.
//! - [`modes`]: momentum lattices, the single-oscillator space and the Dirac
//!   field operator.
//! - [`oscillator`]: the N-fold extension, product vacua, smeared operators
//!   and the large-N limit of vacuum matrix elements.
//! - [`symmetry`]: four-momentum, translations, lattice boosts, charge, spin
//!   and vacuum energy.

pub mod engine;
pub mod error;
pub mod jw;
pub mod modes;
pub mod oscillator;
pub mod spinor;
pub mod symmetry;

pub use engine::{SparseOperator, SparseState, C64};
pub use error::{Error, Result};
