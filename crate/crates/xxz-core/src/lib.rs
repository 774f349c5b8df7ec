//! Algebraic-Bethe-ansatz correlation functions of the XXZ spin-1/2 chain.
//!
//! The crate has two faces.  A finite-lattice side builds the monodromy
//! matrix on up to a dozen sites, reconstructs local spin operators from its
//! entries, diagonalizes the Hamiltonian exactly and solves the Bethe
//! equations; it serves as the oracle for everything else.  A thermodynamic
//! side evaluates the determinant representations and multiple-integral
//! formulas for ground-state correlators (emptiness formation probability,
//! elementary blocks `F_m`, spin-spin correlators) in both the massless and
//! massive regimes, at zero and finite magnetic field.
//!
//! With the default `parallel` feature the quadrature tensor products are
//! evaluated on a rayon pool; summation order is fixed either way, so results
//! are bitwise identical with and without threads.

pub mod bethe;
pub mod correlators;
pub mod error;
pub mod finite_chain;
pub mod model;
pub mod quad;
pub mod scalar_products;
pub mod special;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ModelParams, Regime};

/// Cap the rayon pool, e.g. from the `XXZ_THREADS` environment variable.
/// A no-op without the `parallel` feature or after a pool already exists.
pub fn configure_threads(n: Option<usize>) {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = n {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
    }
}
