//! Truncated spin ⊗ Fock space, Hamiltonians, observables and displaced states.

mod basis;
mod hamiltonian;
mod matrix;
mod params;
mod states;

pub use basis::{default_n_max, SpinBlock, TruncatedFockBasis};
pub use hamiltonian::{
    annihilation, build_arm_hamiltonian, build_rotated_hamiltonian, expect, expectation,
    observable_matrix, Observable,
};
pub use matrix::{DenseMatrix, StateVector, SymmetricMatrix};
pub use params::{ModelParams, INTEGER_TOL};
pub use states::{
    coherent_state, displaced_fock_column, displacement_operator, embed, shifted_number_state,
    Displacement, ORTHO_TOL, TAIL_TOL,
};
