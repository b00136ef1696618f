use super::eigh::{eigh, Eigendecomposition};
use crate::error::{Error, Result};
use crate::model::{
    build_arm_hamiltonian, default_n_max, expect, ModelParams, Observable, StateVector,
    TruncatedFockBasis,
};

/// Hard ceiling on the Fock cutoff reached by [`converged_spectrum`].
pub const DEFAULT_NMAX_CAP: usize = 4096;
/// Environment variable overriding [`DEFAULT_NMAX_CAP`].
pub const NMAX_CAP_ENV: &str = "RABI_ASYM_NMAX_CAP";

/// Residual bound relative to `‖H‖_F` checked on every returned level.
const RESIDUAL_TOL: f64 = 1e-9;

pub fn nmax_cap() -> usize {
    std::env::var(NMAX_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_NMAX_CAP)
}

/// How the cutoff was chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Cutoffs tried, in order.
    pub n_max_sequence: Vec<usize>,
    /// Largest change of the tracked levels between consecutive cutoffs.
    pub max_changes: Vec<f64>,
    pub tol: f64,
    pub converged: bool,
}

impl ConvergenceReport {
    pub fn unchecked(n_max: usize) -> Self {
        ConvergenceReport {
            n_max_sequence: vec![n_max],
            max_changes: Vec::new(),
            tol: f64::NAN,
            converged: false,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.converged {
            "converged"
        } else if self.max_changes.is_empty() {
            "unchecked"
        } else {
            "not-converged"
        }
    }
}

/// Eigenpairs of the ARM Hamiltonian in a truncated basis.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub params: ModelParams,
    pub basis: TruncatedFockBasis,
    pub decomposition: Eigendecomposition,
    pub report: ConvergenceReport,
}

impl Eigensystem {
    pub fn energies(&self) -> &[f64] {
        &self.decomposition.values
    }

    /// Same spectrum measured in the rotated frame, shifted by `g²/ω`.
    pub fn energies_rotated(&self) -> Vec<f64> {
        let s = self.params.frame_shift();
        self.energies().iter().map(|e| e + s).collect()
    }

    pub fn state(&self, level: usize) -> StateVector {
        self.decomposition.vector(level)
    }

    pub fn expect(&self, level: usize, which: Observable) -> f64 {
        expect(&self.state(level), which, &self.basis)
    }
}

/// Diagonalize at a fixed cutoff, without a convergence check.
pub fn spectrum_at(p: &ModelParams, n_max: usize) -> Result<Eigensystem> {
    let basis = TruncatedFockBasis::new(n_max);
    let h = build_arm_hamiltonian(p, &basis);
    let decomposition = eigh(&h)?;
    Ok(Eigensystem {
        params: *p,
        basis,
        decomposition,
        report: ConvergenceReport::unchecked(n_max),
    })
}

fn checked_spectrum(p: &ModelParams, n_max: usize, n_levels: usize) -> Result<Eigensystem> {
    let basis = TruncatedFockBasis::new(n_max);
    let h = build_arm_hamiltonian(p, &basis);
    let decomposition = eigh(&h)?;
    let res = decomposition.max_residual(&h, n_levels);
    let bound = RESIDUAL_TOL * h.frobenius_norm().max(1.0);
    if res > bound {
        return Err(Error::Convergence(format!(
            "eigenpair residual {res:.3e} exceeds {bound:.3e} at n_max = {n_max}"
        )));
    }
    Ok(Eigensystem {
        params: *p,
        basis,
        decomposition,
        report: ConvergenceReport::unchecked(n_max),
    })
}

/// Lowest `n_levels` eigenpairs, doubling `n_max` from the default cutoff
/// until those levels move by less than `tol` (in units of ω).
pub fn converged_spectrum(p: &ModelParams, n_levels: usize, tol: f64) -> Result<Eigensystem> {
    converged_spectrum_from(p, n_levels, tol, default_n_max(p.g_tilde()))
}

pub(crate) fn converged_spectrum_from(
    p: &ModelParams,
    n_levels: usize,
    tol: f64,
    start: usize,
) -> Result<Eigensystem> {
    if n_levels == 0 {
        return Err(Error::InvalidParameter("n_levels must be positive".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let cap = nmax_cap();
    let mut n_max = start.max(n_levels);
    if 2 * n_max > cap {
        return Err(Error::Convergence(format!(
            "starting cutoff {n_max} leaves no room to double below the cap {cap}"
        )));
    }
    let mut report = ConvergenceReport {
        n_max_sequence: vec![n_max],
        max_changes: Vec::new(),
        tol,
        converged: false,
    };
    let mut prev = checked_spectrum(p, n_max, n_levels)?;
    loop {
        let next = 2 * n_max;
        if next > cap {
            return Err(Error::Convergence(format!(
                "lowest {n_levels} levels not stable to {tol:e} below n_max cap {cap} (last change {:.3e})",
                report.max_changes.last().copied().unwrap_or(f64::NAN)
            )));
        }
        let cur = checked_spectrum(p, next, n_levels)?;
        let change = prev.energies()[..n_levels]
            .iter()
            .zip(&cur.energies()[..n_levels])
            .map(|(a, b)| (a - b).abs() / p.omega())
            .fold(0.0, f64::max);
        report.n_max_sequence.push(next);
        report.max_changes.push(change);
        if change < tol {
            report.converged = true;
            return Ok(Eigensystem { report, ..cur });
        }
        prev = cur;
        n_max = next;
    }
}
