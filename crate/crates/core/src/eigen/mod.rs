//! Exact diagonalization: dense symmetric solver, truncation control,
//! g-sweeps with level tracking and crossing detection.

mod degeneracy;
mod eigh;
mod spectrum;
mod sweep;

pub use degeneracy::{detect_degeneracies, gap_minima, Crossing, DEFAULT_GAP_TOL};
pub use eigh::{eigh, eigvalsh, Eigendecomposition};
pub use spectrum::{
    converged_spectrum, nmax_cap, spectrum_at, ConvergenceReport, Eigensystem, DEFAULT_NMAX_CAP,
    NMAX_CAP_ENV,
};
pub use sweep::{
    assign_max_overlap, g_grid, sweep, sweep_with, LevelPoint, SpectralGraph, SweepOptions,
    TrackingBreak, TRACKING_MIN_OVERLAP,
};
