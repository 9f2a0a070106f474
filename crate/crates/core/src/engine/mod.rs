//! Sparse complex linear algebra used by every physics layer: compressed-row
//! operators, sparse states, tensor products, (anti)commutators and matrix
//! exponentials.

mod exec;
mod expm;
mod sparse;
mod state;

pub use exec::{map_range, map_slice, Exec};
pub use expm::expm_dense;
pub use sparse::{
    anticommutator, apply_operator, commutator, matrix_exponential, tensor_chain,
    tensor_product, SparseOperator,
};
pub use state::SparseState;

pub use num_complex::Complex64 as C64;

/// Entries with magnitude below this are never stored.
pub const DROP_TOLERANCE: f64 = 1e-14;

/// Default cap on any dimension produced by a tensor product.
pub const DEFAULT_MAX_DIM: usize = 1 << 20;

/// Largest operator the dense exponential will accept.
pub const DENSE_FALLBACK_LIMIT: usize = 4096;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrices in the basis (excited, ground), so `σ₋` lowers to ground.
pub mod pauli {
    use super::{c, SparseOperator};

    pub fn identity() -> SparseOperator {
        SparseOperator::identity(2)
    }

    pub fn sigma_1() -> SparseOperator {
        SparseOperator::from_triplets(2, 2, [(0, 1, c(1.0, 0.0)), (1, 0, c(1.0, 0.0))]).unwrap()
    }

    pub fn sigma_2() -> SparseOperator {
        SparseOperator::from_triplets(2, 2, [(0, 1, c(0.0, -1.0)), (1, 0, c(0.0, 1.0))]).unwrap()
    }

    pub fn sigma_3() -> SparseOperator {
        SparseOperator::from_triplets(2, 2, [(0, 0, c(1.0, 0.0)), (1, 1, c(-1.0, 0.0))]).unwrap()
    }

    /// `(σ₁ + iσ₂)/2`
    pub fn sigma_plus() -> SparseOperator {
        (&sigma_1() + &sigma_2().scale(c(0.0, 1.0))).scale_real(0.5)
    }

    /// `(σ₁ - iσ₂)/2`
    pub fn sigma_minus() -> SparseOperator {
        (&sigma_1() - &sigma_2().scale(c(0.0, 1.0))).scale_real(0.5)
    }
}
