use crate::model::ModelParams;

/// "Much less than" is read as a ratio below this.
pub const MUCH_LESS_RATIO: f64 = 0.2;

/// A-priori applicability of the expansion in Δ. Advisory only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub delta_tilde: f64,
    pub g_tilde: f64,
    pub integer_case: bool,
    /// `ξ` from `M − ⌊M⌋ = (1 + ξ)/2`; always in `[−1, 1)`.
    pub xi: f64,
    /// Scale Δ̃ must stay well below: 1, or `√((1−|ξ|)/2)` for noninteger M.
    pub threshold: f64,
    /// `Δ̃ / threshold`.
    pub margin: f64,
    pub small_delta: bool,
    pub strong_coupling: bool,
}

impl ValidityReport {
    pub fn ok(&self) -> bool {
        self.small_delta && self.strong_coupling
    }
}

pub fn validity(p: &ModelParams) -> ValidityReport {
    let m = p.big_m();
    let integer_case = p.m_is_integral();
    let frac = if integer_case { 0.0 } else { m - m.floor() };
    let xi = 2.0 * frac - 1.0;
    let threshold = if integer_case {
        1.0
    } else {
        ((1.0 - xi.abs()) / 2.0).sqrt()
    };
    let delta_tilde = p.delta_tilde().abs();
    let margin = delta_tilde / threshold;
    let g_tilde = p.g_tilde().abs();
    ValidityReport {
        delta_tilde,
        g_tilde,
        integer_case,
        xi,
        threshold,
        margin,
        small_delta: margin < MUCH_LESS_RATIO,
        strong_coupling: g_tilde >= 1.0,
    }
}
