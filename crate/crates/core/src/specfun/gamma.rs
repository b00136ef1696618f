//! Gamma, log-Gamma, digamma, Beta and factorial helpers.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::POLE_TOL;
use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn factorial_table() -> &'static [f64; 171] {
    static TABLE: OnceLock<[f64; 171]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; 171];
        for k in 1..171 {
            t[k] = t[k - 1] * k as f64;
        }
        t
    })
}

/// `n!` as a float; `inf` past 170.
pub fn factorial(n: u64) -> f64 {
    if n <= 170 {
        factorial_table()[n as usize]
    } else {
        f64::INFINITY
    }
}

pub fn ln_factorial(n: u64) -> f64 {
    if n <= 170 {
        factorial_table()[n as usize].ln()
    } else {
        stirling_ln_gamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)` for `0 ≤ k ≤ n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c.round_ties_even_if_small()
}

trait RoundSmall {
    fn round_ties_even_if_small(self) -> f64;
}

impl RoundSmall for f64 {
    // Products of exact integers divided stepwise stay integral below 2^53.
    fn round_ties_even_if_small(self) -> f64 {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

/// Returns the integer `k ≤ 0` when `x` lies within `tol` of it.
pub fn nonpositive_integer_near(x: f64, tol: f64) -> Option<i64> {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() < tol {
        Some(r as i64)
    } else {
        None
    }
}

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.round();
    let f = x - r;
    let s = (PI * f).sin();
    if (r as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn stirling_ln_gamma(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    // valid for x >= 0.5
    let xm = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (xm + i as f64);
    }
    let t = xm + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (xm + 0.5) * t.ln() - t + a.ln()
}

/// `(ln|Γ(x)|, sign Γ(x))`.
pub fn ln_gamma_sign(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite {x}")));
    }
    if nonpositive_integer_near(x, POLE_TOL).is_some() {
        return Err(Error::Pole { location: x });
    }
    if x >= 0.5 {
        if x == x.floor() && x <= 171.0 {
            return Ok((factorial_table()[x as usize - 1].ln(), 1.0));
        }
        let lg = if x >= 15.0 {
            stirling_ln_gamma(x)
        } else {
            lanczos_ln_gamma(x)
        };
        return Ok((lg, 1.0));
    }
    // reflection: Γ(x) Γ(1−x) = π / sin(πx)
    let s = sin_pi(x);
    let (lg1, _) = ln_gamma_sign(1.0 - x)?;
    Ok((PI.ln() - s.abs().ln() - lg1, s.signum()))
}

pub fn ln_gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma_sign(x)?.0)
}

pub fn gamma(x: f64) -> Result<f64> {
    if x >= 1.0 && x == x.floor() && x <= 171.0 {
        return Ok(factorial_table()[x as usize - 1]);
    }
    let (lg, s) = ln_gamma_sign(x)?;
    Ok(s * lg.exp())
}

/// `1/Γ(x)`, entire, exactly zero at the nonpositive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    match ln_gamma_sign(x) {
        Ok((lg, s)) => s * (-lg).exp(),
        Err(_) => {
            // within POLE_TOL of a pole: 1/Γ(−k + h) ≈ (−1)^k k! h
            let k = -x.round();
            let h = x + k;
            let sign = if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial(k as u64) * h
        }
    }
}

/// Derivative of `1/Γ(y)`: `−ψ(y)/Γ(y)`, with the limit `(−1)^m m!` at `y = −m`.
pub fn rgamma_deriv(y: f64) -> f64 {
    if let Some(k) = nonpositive_integer_near(y, 1e-12) {
        let m = (-k) as u64;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return sign * factorial(m);
    }
    let psi = digamma(y).expect("non-pole argument");
    -psi * rgamma(y)
}

pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("digamma of non-finite {x}")));
    }
    if nonpositive_integer_near(x, POLE_TOL).is_some() {
        return Err(Error::Pole { location: x });
    }
    if x < 0.5 {
        // ψ(1−x) − ψ(x) = π cot(πx)
        let cot = (PI * (x - x.round())).cos() / (PI * (x - x.round())).sin();
        return Ok(digamma(1.0 - x)? - PI * cot);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    Ok(acc + y.ln() - 0.5 * inv - tail)
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    let (la, sa) = ln_gamma_sign(a)?;
    let (lb, sb) = ln_gamma_sign(b)?;
    if nonpositive_integer_near(a + b, POLE_TOL).is_some() {
        return Ok(0.0);
    }
    let (lab, sab) = ln_gamma_sign(a + b)?;
    Ok(sa * sb * sab * (la + lb - lab).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSuite {
    pub ln_gamma: f64,
    pub digamma: f64,
    pub gamma: f64,
}

pub fn gamma_suite(x: f64) -> Result<GammaSuite> {
    Ok(GammaSuite {
        ln_gamma: ln_gamma(x)?,
        digamma: digamma(x)?,
        gamma: gamma(x)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!((ln_gamma(21.0).unwrap() - 42.335_616_460_753_485).abs() < 1e-12);
    }

    #[test]
    fn recurrence_holds_on_working_range() {
        let mut x = 0.5;
        while x < 50.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "x={x}");
            let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert!((d - 1.0 / x).abs() < 1e-13, "x={x}");
            x += 0.37;
        }
    }

    #[test]
    fn stirling_and_lanczos_agree_at_switch() {
        for &x in &[14.5, 15.0, 15.5, 20.25] {
            assert!((stirling_ln_gamma(x) - lanczos_ln_gamma(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn half_integers_and_negative_arguments() {
        // Γ(−1/2) = −2√π, Γ(−3/2) = 4√π/3
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0) < 1e-14);
        // ψ(1/2) = −γ − 2 ln 2
        assert!((digamma(0.5).unwrap() + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((digamma(-0.5).unwrap() - (digamma(0.5).unwrap() + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn poles() {
        assert!(matches!(gamma(0.0), Err(Error::Pole { .. })));
        assert!(matches!(gamma(-3.0), Err(Error::Pole { .. })));
        assert!(matches!(digamma(-2.0), Err(Error::Pole { .. })));
        assert_eq!(rgamma(-4.0), 0.0);
        assert_eq!(rgamma_deriv(-3.0), -6.0);
        assert_eq!(rgamma_deriv(0.0), 1.0);
    }

    #[test]
    fn rgamma_derivative_matches_finite_difference() {
        for &y in &[0.3, 1.7, -0.4, -2.6, 4.0] {
            let h = 1e-5;
            let fd = (rgamma(y + h) - rgamma(y - h)) / (2.0 * h);
            assert!((fd - rgamma_deriv(y)).abs() < 1e-8, "y={y}");
        }
    }

    #[test]
    fn beta_symmetry() {
        assert!(rel(beta(2.0, 3.0).unwrap(), 1.0 / 12.0) < 1e-14);
        assert!(rel(beta(0.7, 2.2).unwrap(), beta(2.2, 0.7).unwrap()) < 1e-14);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(4, 5), 0.0);
        assert!((ln_binomial(40, 20) - binomial(40, 20).ln()).abs() < 1e-12);
    }
}
