//! Direct summations over the displaced-oscillator ladder.
//!
//! These are slow but straightforward, and serve as references for the
//! closed forms in [`super::kernels`].

use super::gamma::{factorial, ln_factorial, nonpositive_integer_near, rgamma};
use super::overlap::{overlap_f, overlap_f_dx};
use super::poly::hermite2;
use super::sum::CompensatedSum;
use super::{EvalResult, Method, POLE_TOL, SERIES_MAX_TERMS, SERIES_QUIET_TERMS};
use crate::error::{Error, Result};

const LADDER_REL_TOL: f64 = 1e-17;

/// Sums `term(m)` over `m ≥ 0` until the ladder weights `F_{nm}(x)²` have
/// passed their peak and died out.
fn ladder_sum(n: u32, x: f64, mut term: impl FnMut(u32) -> Option<f64>) -> Result<EvalResult> {
    let xx = x * x;
    let floor = n as f64 + xx + 12.0 * x.abs() + 40.0;
    let mut acc = CompensatedSum::default();
    let mut quiet = 0usize;
    let mut m = 0u32;
    loop {
        if let Some(t) = term(m) {
            acc.add(t);
            if t.abs() <= LADDER_REL_TOL * acc.abs_sum() {
                quiet += 1;
            } else {
                quiet = 0;
            }
        }
        m += 1;
        if m as f64 > floor && quiet >= SERIES_QUIET_TERMS {
            break;
        }
        if m as usize > SERIES_MAX_TERMS {
            return Err(Error::Convergence(format!(
                "ladder sum at n={n}, x={x} exceeded {SERIES_MAX_TERMS} terms"
            )));
        }
    }
    let err = acc.abs_sum() * f64::EPSILON * (2.0 + (m as f64).sqrt());
    Ok(EvalResult::new(acc.value(), err, Method::Series))
}

fn check_pole(z: f64) -> Result<()> {
    if nonpositive_integer_near(z, POLE_TOL).is_some() {
        Err(Error::Pole { location: z })
    } else {
        Ok(())
    }
}

/// `ℱ_n(x, z) = Σ_m F_{nm}(x)² / (m + z)`.
pub fn calf_series(n: u32, x: f64, z: f64) -> Result<EvalResult> {
    check_pole(z)?;
    ladder_sum(n, x, |m| Some(overlap_f(n, m, x).powi(2) / (m as f64 + z)))
}

/// `∂ℱ_n/∂z = −Σ_m F_{nm}(x)² / (m + z)²`.
pub fn calf_dz_series(n: u32, x: f64, z: f64) -> Result<EvalResult> {
    check_pole(z)?;
    ladder_sum(n, x, |m| {
        let d = m as f64 + z;
        Some(-overlap_f(n, m, x).powi(2) / (d * d))
    })
}

/// `∂ℱ_n/∂x = Σ_m 2 F_{nm} ∂_x F_{nm} / (m + z)`.
pub fn calf_dx_series(n: u32, x: f64, z: f64) -> Result<EvalResult> {
    check_pole(z)?;
    ladder_sum(n, x, |m| {
        Some(2.0 * overlap_f(n, m, x) * overlap_f_dx(n, m, x) / (m as f64 + z))
    })
}

/// `𝒢_p^{(q)}(x) = Σ_{m≠q} F_{pm}(x)² / (m − q)`.
pub fn calg_series(p: u32, q: u32, x: f64) -> Result<EvalResult> {
    ladder_sum(p, x, |m| {
        if m == q {
            None
        } else {
            Some(overlap_f(p, m, x).powi(2) / (m as f64 - q as f64))
        }
    })
}

/// `𝒞_{n,M}(x)` assembled from the two excluded-term sums.
pub fn curly_c_series(n: u32, big_m: u32, x: f64) -> Result<f64> {
    let num = calg_series(n, n - big_m, x)?.value - calg_series(n - big_m, n, x)?.value;
    Ok(num / (2.0 * overlap_f(n, n - big_m, x)))
}

/// `F_{n'n}(x) = (−1)^{n'} H_{nn'}(x, x) e^{−x²/2} / √(n'! n!)`, the Hermite route.
pub fn overlap_f_hermite(n_prime: u32, n: u32, x: f64) -> Result<f64> {
    let sign = if n_prime % 2 == 0 { 1.0 } else { -1.0 };
    let h = hermite2(n, n_prime, x, x)?;
    let ln = -x * x / 2.0 - 0.5 * (ln_factorial(n_prime as u64) + ln_factorial(n as u64));
    Ok(sign * h * ln.exp())
}

/// Plain forward sum of `Σ_j (a)_j x^j / (j! Γ(b+j))`, no argument transform.
pub fn kummer_reg_direct(a: f64, b: f64, x: f64) -> Result<EvalResult> {
    let mut acc = CompensatedSum::default();
    let mut poch = 1.0;
    let mut pow = 1.0;
    let mut quiet = 0usize;
    let mut j = 0u64;
    loop {
        let t = if j <= 170 {
            poch * pow / factorial(j) * rgamma(b + j as f64)
        } else {
            0.0
        };
        acc.add(t);
        if t.abs() <= 1e-17 * acc.abs_sum() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        poch *= a + j as f64;
        pow *= x;
        j += 1;
        if quiet >= SERIES_QUIET_TERMS && j as f64 > x.abs() {
            break;
        }
        if j > 170 || !acc.abs_sum().is_finite() {
            return Err(Error::Convergence(format!(
                "direct 1F1 sum at ({a}, {b}, {x}) left the representable range"
            )));
        }
    }
    let err = acc.abs_sum() * f64::EPSILON * (2.0 + (j as f64).sqrt());
    Ok(EvalResult::new(acc.value(), err, Method::Series))
}

/// `H_{nm}(x, y)` by the recurrence `H_{n,m+1} = y H_{nm} − n H_{n−1,m}`.
pub fn hermite2_recurrence(n: u32, m: u32, x: f64, y: f64) -> f64 {
    // column H_{k,0} = x^k, advanced one m at a time
    let mut col: Vec<f64> = (0..=n).map(|k| x.powi(k as i32)).collect();
    for _ in 0..m {
        let mut next = vec![0.0; (n + 1) as usize];
        for k in 0..=n as usize {
            let prev = if k > 0 { col[k - 1] } else { 0.0 };
            next[k] = y * col[k] - k as f64 * prev;
        }
        col = next;
    }
    col[n as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calf_small_cases() {
        let v = calf_series(0, 1.0, 1.0).unwrap().value;
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        let v0 = calf_series(3, 0.0, 0.7).unwrap().value;
        assert!((v0 - 1.0 / 3.7).abs() < 1e-15);
    }

    #[test]
    fn calg_excluded_term() {
        // e^{−1} Σ_{m≥1} 1/(m! m)
        let v = calg_series(0, 0, 1.0).unwrap().value;
        assert!((v - 0.484_829_106_995_687_6).abs() < 1e-14);
    }

    #[test]
    fn poles_rejected() {
        assert!(matches!(calf_series(1, 1.0, -2.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn recurrence_agrees_with_binomial_sum() {
        for n in 0..8 {
            for m in 0..8 {
                let a = hermite2_recurrence(n, m, 1.1, -0.4);
                let b = super::super::poly::hermite2(n, m, 1.1, -0.4).unwrap();
                assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
            }
        }
    }
}
