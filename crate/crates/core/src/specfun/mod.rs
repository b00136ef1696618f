//! Special functions used by the perturbative formulas.
//!
//! Every kernel with a closed form also has a direct-summation counterpart in
//! [`series`], which the tests and the CLI use as an independent oracle.

pub mod asymptotic;
pub mod gamma;
pub mod kernels;
pub mod kummer;
pub mod overlap;
pub mod poly;
pub mod series;
mod sum;

pub use asymptotic::{asymptotic_coefficient, calf_asymptotic, calg_asymptotic};
pub use gamma::{beta, digamma, gamma, gamma_suite, ln_gamma, GammaSuite};
pub use kernels::{calf, calf_dx, calg, curly_c};
pub use kummer::{kummer_m, kummer_m_reg};
pub use overlap::{overlap_f, overlap_f_dx};
pub use poly::{hermite2, laguerre};

/// Distance below which `z` counts as sitting on a nonpositive integer.
pub const POLE_TOL: f64 = 1e-8;

/// Outside this distance from a pole the closed form of `ℱ` is used,
/// inside it the direct series.
pub const CALF_GUARD_BAND: f64 = 1e-3;

/// Relative size of the overlap denominator below which `𝒞` is refused.
pub const ZERO_TOL: f64 = 1e-12;

pub(crate) const SERIES_REL_TOL: f64 = 1e-16;
pub(crate) const SERIES_QUIET_TERMS: usize = 30;
pub(crate) const SERIES_MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    ClosedForm,
    Asymptotic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::ClosedForm => "closed_form",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value together with an a-posteriori error estimate and the route taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub est_error: f64,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: f64, est_error: f64, method: Method) -> Self {
        EvalResult {
            value,
            est_error: est_error.abs(),
            method,
        }
    }
}
