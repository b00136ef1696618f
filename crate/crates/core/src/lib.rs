//! Numerics for the asymmetric quantum Rabi model
//!
//! `H = ω a†a + g (a + a†) σx + ε σx + Δ σz`
//!
//! The crate is split into
//! - [`model`]: truncated spin ⊗ Fock basis, Hamiltonians, observables, displaced states
//! - [`specfun`]: Gamma family, two-variable Hermite, Laguerre, Kummer and the perturbative kernels
//! - [`eigen`]: dense symmetric eigensolver, truncation control, g-sweeps with level tracking
//! - [`perturbation`]: second order expansions in Δ for noninteger and integer `M = 2ε/ω`
//! - [`parent`]: the parent Hamiltonian whose exact eigenstates are the zeroth order states

pub mod eigen;
pub mod error;
pub mod model;
pub mod parent;
pub mod perturbation;
pub mod specfun;

pub use error::{Error, Result};
