//! Large-`x` expansions of `ℱ_n(x, z)` and `𝒢_p^{(q)}(x)`.

use super::{EvalResult, Method};
use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 4;

fn poch(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// `(c)_k ₃F₂(−n, −k, k+1; 1, c; 1)`, the coefficient of `x^{−2k−2}` in `ℱ_n`
/// with `c = 1 − z − n`, written so that no `(c)_j` divisor appears.
pub fn asymptotic_coefficient(n: u32, c: f64, k: u32) -> f64 {
    let mut s = 0.0;
    let mut ratio = 1.0; // (−n)_j (−k)_j (k+1)_j / (j!)²
    for j in 0..=n.min(k) {
        if j > 0 {
            let jf = (j - 1) as f64;
            ratio *= (jf - n as f64) * (jf - k as f64) * (k as f64 + 1.0 + jf)
                / ((jf + 1.0) * (jf + 1.0));
        }
        s += ratio * poch(c + j as f64, k - j);
    }
    s
}

fn expansion(n: u32, c: f64, x: f64, order: u32) -> EvalResult {
    let inv = 1.0 / (x * x);
    let mut value = 0.0;
    let mut pow = inv;
    for k in 0..=order {
        value += asymptotic_coefficient(n, c, k) * pow;
        pow *= inv;
    }
    let next = asymptotic_coefficient(n, c, order + 1) * pow;
    EvalResult::new(value, next, Method::Asymptotic)
}

fn check(order: u32, x: f64, scale: f64) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::Domain(format!(
            "asymptotic order {order} above {MAX_ORDER}"
        )));
    }
    if x * x < 4.0 * (order as f64 + scale) {
        return Err(Error::Domain(format!(
            "x = {x} too small for an order-{order} expansion"
        )));
    }
    Ok(())
}

/// `ℱ_n(x, z) ≈ Σ_{k≤order} a_k / x^{2k+2}`; the error estimate is the first omitted term.
pub fn calf_asymptotic(n: u32, x: f64, z: f64, order: u32) -> Result<EvalResult> {
    check(order, x, n as f64 + z.abs())?;
    Ok(expansion(n, 1.0 - z - n as f64, x, order))
}

/// `𝒢_p^{(q)}(x)`, the same expansion taken at `z = −q`; no `p > q` gating applies
/// because the removed pole term is exponentially small.
pub fn calg_asymptotic(p: u32, q: u32, x: f64, order: u32) -> Result<EvalResult> {
    check(order, x, (p + q) as f64)?;
    Ok(expansion(p, 1.0 + q as f64 - p as f64, x, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_terms() {
        assert_eq!(asymptotic_coefficient(3, 0.4, 0), 1.0);
        for n in 0..6 {
            for &z in &[0.3, 1.7, -0.5] {
                let c = 1.0 - z - n as f64;
                let a1 = asymptotic_coefficient(n, c, 1);
                assert!((a1 - (n as f64 + 1.0 - z)).abs() < 1e-12);
            }
        }
        // n ≤ 1: second coefficient coincides with −(z+n−1)(z−2n)/z
        for n in 0..2u32 {
            let z = 0.7;
            let nf = n as f64;
            let a1 = asymptotic_coefficient(n, 1.0 - z - nf, 1);
            assert!((a1 + (z + nf - 1.0) * (z - 2.0 * nf) / z).abs() < 1e-12);
        }
    }

    #[test]
    fn calg_two_terms() {
        let v = calg_asymptotic(3, 1, 20.0, 1).unwrap().value;
        assert!((v - 0.002_531_25).abs() < 1e-15);
    }

    #[test]
    fn order_zero_is_inverse_square() {
        let v = calf_asymptotic(2, 10.0, 0.6, 0).unwrap();
        assert_eq!(v.value, 0.01);
        assert_eq!(v.method, Method::Asymptotic);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            calf_asymptotic(0, 1.0, 0.5, 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            calf_asymptotic(0, 30.0, 0.5, 5),
            Err(Error::Domain(_))
        ));
    }
}
