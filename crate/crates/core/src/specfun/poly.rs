//! Two-variable Hermite and associated Laguerre polynomials.

use super::gamma::{binomial, factorial, ln_binomial, ln_factorial};
use super::sum::CompensatedSum;
use crate::error::{Error, Result};

const MAX_LN: f64 = 709.0;

/// `H_{nm}(x, y) = Σ_k C(n,k) C(m,k) k! (−1)^k x^{n−k} y^{m−k}`.
///
/// Term magnitudes are screened in log space for overflow; the alternating
/// sum is compensated but loses relative precision once `n + m` exceeds about 120.
pub fn hermite2(n: u32, m: u32, x: f64, y: f64) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    for k in 0..=n.min(m) {
        let px = (n - k) as i32;
        let py = (m - k) as i32;
        let ln = ln_binomial(n as u64, k as u64)
            + ln_binomial(m as u64, k as u64)
            + ln_factorial(k as u64)
            + if px > 0 {
                px as f64 * x.abs().ln()
            } else {
                0.0
            }
            + if py > 0 {
                py as f64 * y.abs().ln()
            } else {
                0.0
            };
        if ln > MAX_LN {
            return Err(Error::Overflow(format!(
                "hermite2({n}, {m}, {x}, {y}) term {k} has ln magnitude {ln:.1}"
            )));
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let coef =
            binomial(n as u64, k as u64) * binomial(m as u64, k as u64) * factorial(k as u64);
        acc.add(sign * coef * (x.powi(px) * y.powi(py)));
    }
    Ok(acc.value())
}

/// Associated Laguerre polynomial `L_n^{(α)}(x)` by upward recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
