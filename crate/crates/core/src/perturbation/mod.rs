//! Perturbation theory in the tunneling amplitude Δ around the displaced
//! oscillator states, for noninteger and integer `M = 2ε/ω`.
//!
//! Energies are kept in the rotated frame (`E⁽⁰⁾ = ωn + σε`); use
//! [`PTResult::energy_arm`] for numbers comparable to the original Hamiltonian.

mod degenerate;
mod nondegenerate;
mod validity;

pub use degenerate::pt_integer;
pub use nondegenerate::{calf_partials, pt_noninteger, CalFPartials};
pub use validity::{validity, ValidityReport, MUCH_LESS_RATIO};

use crate::error::Result;
use crate::model::ModelParams;

/// Branch of an initially degenerate pair; `Zero` labels the unpaired levels `n < M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Alpha {
    Minus,
    Zero,
    Plus,
}

impl Alpha {
    pub fn sign(self) -> f64 {
        match self {
            Alpha::Minus => -1.0,
            Alpha::Zero => 0.0,
            Alpha::Plus => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Alpha::Minus => "-",
            Alpha::Zero => "0",
            Alpha::Plus => "+",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateLabel {
    /// `|n σ⟩`, `σ = ±1`.
    Nondegenerate { n: u32, sigma: i32 },
    /// `|n; α⟩`.
    Degenerate { n: u32, alpha: Alpha },
}

impl std::fmt::Display for StateLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            StateLabel::Nondegenerate { n, sigma } => {
                write!(f, "{n}{}", if sigma > 0 { "+" } else { "-" })
            }
            StateLabel::Degenerate { n, alpha } => write!(f, "{n};{}", alpha.as_str()),
        }
    }
}

/// A perturbative value with the power of Δ̃ left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtValue {
    pub value: f64,
    /// The value is exact up to `O(Δ̃^remainder_order)`.
    pub remainder_order: u32,
    /// Some contributions at orders below the remainder are missing.
    pub partial: bool,
}

impl PtValue {
    fn new(value: f64, remainder_order: u32) -> Self {
        PtValue {
            value,
            remainder_order,
            partial: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PTResult {
    pub label: StateLabel,
    pub params: ModelParams,
    /// Rotated-frame energy terms of order Δ⁰, Δ¹, Δ².
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
    pub sx: PtValue,
    pub sz: PtValue,
    pub nbar: PtValue,
    /// `⟨a†a⟩ + (M/2)⟨σ_x⟩`, integer case only.
    pub combined: Option<PtValue>,
    pub validity: ValidityReport,
}

impl PTResult {
    /// Rotated-frame energy through second order.
    pub fn energy(&self) -> f64 {
        self.e0 + self.e1 + self.e2
    }

    /// Same energy for the original Hamiltonian, `E − g²/ω`.
    pub fn energy_arm(&self) -> f64 {
        self.energy() - self.params.frame_shift()
    }

    /// A spin expectation value left `[−1, 1]`: the expansion has broken down.
    pub fn breakdown(&self) -> bool {
        let out = |v: f64| !v.is_finite() || v.abs() > 1.0;
        out(self.sx.value) || out(self.sz.value)
    }
}

/// Labels of the `count` lowest unperturbed levels, ordered by `E⁽⁰⁾`.
///
/// In the integer case each pair contributes `−` before `+`.
pub fn lowest_labels(p: &ModelParams, count: usize) -> Vec<StateLabel> {
    let mut out = Vec::with_capacity(count);
    if let Some(m) = p.integer_m() {
        let mut n = 0u32;
        while out.len() < count {
            if n < m {
                out.push(StateLabel::Degenerate {
                    n,
                    alpha: Alpha::Zero,
                });
            } else {
                out.push(StateLabel::Degenerate {
                    n,
                    alpha: Alpha::Minus,
                });
                if out.len() < count {
                    out.push(StateLabel::Degenerate {
                        n,
                        alpha: Alpha::Plus,
                    });
                }
            }
            n += 1;
        }
        return out;
    }
    let half = p.big_m() / 2.0;
    let top = count as u32 + p.big_m().abs().ceil() as u32 + 1;
    let mut all: Vec<(f64, StateLabel)> = (0..=top)
        .flat_map(|n| {
            [-1, 1].map(|sigma| {
                (
                    n as f64 + sigma as f64 * half,
                    StateLabel::Nondegenerate { n, sigma },
                )
            })
        })
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.into_iter().take(count).map(|(_, l)| l).collect()
}

/// Rotated-frame `E⁽⁰⁾` of a label.
pub fn unperturbed_energy(p: &ModelParams, label: StateLabel) -> f64 {
    match label {
        StateLabel::Nondegenerate { n, sigma } => p.omega() * n as f64 + sigma as f64 * p.epsilon(),
        StateLabel::Degenerate { n, .. } => p.omega() * n as f64 - p.epsilon(),
    }
}

/// Dispatch on the label kind.
pub fn pt_state(p: &ModelParams, label: StateLabel) -> Result<PTResult> {
    match label {
        StateLabel::Nondegenerate { n, sigma } => pt_noninteger(p, n, sigma),
        StateLabel::Degenerate { n, alpha } => pt_integer(p, n, alpha),
    }
}

/// PT results for the `count` lowest levels, sorted by second-order energy so
/// that entry `k` is the approximation to the `k`-th exact level.
pub fn lowest_states(p: &ModelParams, count: usize) -> Result<Vec<PTResult>> {
    // a few spare labels so second-order shifts cannot push a true low level out
    let labels = lowest_labels(p, count + 4);
    let mut res = labels
        .into_iter()
        .map(|l| pt_state(p, l))
        .collect::<Result<Vec<_>>>()?;
    res.sort_by(|a, b| a.energy().total_cmp(&b.energy()));
    res.truncate(count);
    Ok(res)
}
