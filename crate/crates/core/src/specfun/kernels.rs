//! Closed forms of the second-order kernels `ℱ_n(x, z)`, `𝒢_p^{(q)}(x)` and `𝒞_{n,M}(x)`.

use super::asymptotic::{calf_asymptotic, calg_asymptotic, MAX_ORDER};
use super::gamma::{digamma, ln_binomial, ln_factorial, ln_gamma_sign, nonpositive_integer_near};
use super::kummer::{reg_da_at_nonpositive_int, reg_db_at_nonpositive_int, reg_series, Scaled};
use super::overlap::overlap_f;
use super::series;
use super::sum::CompensatedSum;
use super::{EvalResult, Method, CALF_GUARD_BAND, POLE_TOL, ZERO_TOL};
use crate::error::{Error, Result};

/// Distance from `z` to the nearest nonpositive integer.
pub fn pole_distance(z: f64) -> f64 {
    if z >= 0.0 {
        z
    } else {
        (z - z.round()).abs()
    }
}

#[derive(Default)]
struct Terms {
    acc: CompensatedSum,
    err: f64,
}

impl Terms {
    fn push(&mut self, value: Scaled, error: Scaled) {
        self.acc.add(value.to_f64());
        self.err += error.to_f64().abs();
    }

    fn finish(self, method: Method) -> EvalResult {
        let err = self.err + self.acc.abs_sum() * f64::EPSILON * 4.0;
        EvalResult::new(self.acc.value(), err, method)
    }
}

/// `ℱ_n(x, z) = Σ_m F_{nm}(x)² / (m + z)`.
///
/// Uses `Σ_k C(n,k) x^{2k}/k! (2k)! Γ(z+n−k) 𝐌(2k+1, z+n+k+1, −x²)`; within
/// [`CALF_GUARD_BAND`] of a pole the direct sum is used instead.
pub fn calf(n: u32, x: f64, z: f64) -> Result<EvalResult> {
    if !(x.is_finite() && z.is_finite()) {
        return Err(Error::Domain(format!("calF({n}, {x}, {z})")));
    }
    if nonpositive_integer_near(z, POLE_TOL).is_some() {
        return Err(Error::Pole { location: z });
    }
    if pole_distance(z) < CALF_GUARD_BAND {
        return series::calf_series(n, x, z);
    }
    if let Some(r) = settled_asymptotic(calf_asymptotic(n, x, z, MAX_ORDER), x) {
        return Ok(r);
    }
    calf_closed(n, x, z, false)
}

/// Beyond this `x²` the expansion is tried first: the `𝐌` series there need
/// on the order of `x²` terms, while the neglected exponential part is far below rounding.
const ASYMPTOTIC_X2: f64 = 900.0;

fn settled_asymptotic(r: Result<EvalResult>, x: f64) -> Option<EvalResult> {
    if x * x < ASYMPTOTIC_X2 {
        return None;
    }
    r.ok()
        .filter(|r| r.est_error.abs() <= f64::EPSILON * r.value.abs())
}

/// `∂ℱ_n(x, z)/∂x`, differentiating the closed form term by term.
pub fn calf_dx(n: u32, x: f64, z: f64) -> Result<EvalResult> {
    if nonpositive_integer_near(z, POLE_TOL).is_some() {
        return Err(Error::Pole { location: z });
    }
    if pole_distance(z) < CALF_GUARD_BAND {
        return series::calf_dx_series(n, x, z);
    }
    calf_closed(n, x, z, true)
}

fn calf_closed(n: u32, x: f64, z: f64, deriv: bool) -> Result<EvalResult> {
    let ax = x.abs();
    let xx = ax * ax;
    let mut terms = Terms::default();
    if deriv && ax == 0.0 {
        return Ok(EvalResult::new(0.0, 0.0, Method::ClosedForm));
    }
    for k in 0..=n {
        if ax == 0.0 && k > 0 {
            break;
        }
        let (k64, n64) = (k as u64, n as u64);
        let a = z + (n - k) as f64;
        let b = z + (n + k + 1) as f64;
        let (lg, sg) = ln_gamma_sign(a)?;
        let base = ln_binomial(n64, k64) - ln_factorial(k64) + ln_factorial(2 * k64) + lg - xx;
        // 𝐌(2k+1, b, −x²) = e^{−x²} 𝐌(b−2k−1, b, x²) and b−2k−1 = a
        if !deriv {
            let pow = if k > 0 { 2.0 * k as f64 * ax.ln() } else { 0.0 };
            let m = reg_series(a, b, xx)?;
            terms.push(
                m.value.mul_exp(base + pow).scale(sg),
                m.error.mul_exp(base + pow),
            );
        } else {
            if k > 0 {
                let ln = base + (2.0 * k as f64).ln() + (2.0 * k as f64 - 1.0) * ax.ln();
                let m = reg_series(a, b, xx)?;
                terms.push(m.value.mul_exp(ln).scale(sg), m.error.mul_exp(ln));
            }
            // d/dx 𝐌(2k+1, b, −x²) = −2x (2k+1) 𝐌(2k+2, b+1, −x²)
            let ln = base + (2.0 * (2 * k + 1) as f64).ln() + (2.0 * k as f64 + 1.0) * ax.ln();
            let m = reg_series(a, b + 1.0, xx)?;
            terms.push(m.value.mul_exp(ln).scale(-sg), m.error.mul_exp(ln));
        }
    }
    let mut r = terms.finish(Method::ClosedForm);
    if deriv && x < 0.0 {
        r.value = -r.value;
    }
    Ok(r)
}

/// `𝒢_p^{(q)}(x) = Σ_{m≠q} F_{pm}(x)² / (m − q)`, the pole-subtracted `ℱ_p(x, −q)`.
///
/// The second sum needs `∂𝐌/∂a` at nonpositive integer `a`, which is an
/// infinite series of order `e^{x²}` rather than a polynomial.
pub fn calg(p: u32, q: u32, x: f64) -> Result<EvalResult> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("calG({p}, {q}, {x})")));
    }
    let ax = x.abs();
    if ax == 0.0 {
        let v = if p == q {
            0.0
        } else {
            1.0 / (p as f64 - q as f64)
        };
        return Ok(EvalResult::new(v, 0.0, Method::ClosedForm));
    }
    if let Some(r) = settled_asymptotic(calg_asymptotic(p, q, ax, MAX_ORDER), ax) {
        return Ok(r);
    }
    let xx = ax * ax;
    let lx = ax.ln();
    let d = p as i64 - q as i64;
    let mut terms = Terms::default();

    for k in 0..d.max(0) as u64 {
        let ln = ln_binomial(p as u64, k) + 2.0 * k as f64 * lx - ln_factorial(k)
            + ln_factorial(2 * k)
            + ln_factorial(d as u64 - k - 1)
            - xx;
        let m = reg_series((d - k as i64) as f64, (d + 1 + k as i64) as f64, xx)?;
        terms.push(m.value.mul_exp(ln), m.error.mul_exp(ln));
    }

    for k in d.max(0) as u64..=p as u64 {
        let nn = (k as i64 - d) as u64;
        let a = -(nn as f64);
        let b = (d + 1 + k as i64) as f64;
        let ln = ln_binomial(p as u64, k) + 2.0 * k as f64 * lx - ln_factorial(k)
            + ln_factorial(2 * k)
            - ln_factorial(nn)
            - xx;
        let sign = if (k + p as u64 + q as u64) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let m = reg_series(a, b, xx)?;
        let psi = digamma(nn as f64 + 1.0)?;
        let ma = reg_da_at_nonpositive_int(nn, b, xx)?;
        let mb = reg_db_at_nonpositive_int(nn, b, xx);
        let bracket = m.value.scale(psi).add(ma.value).add(mb.value);
        let err = m
            .error
            .scale(psi.abs())
            .add(ma.error)
            .add(mb.error)
            .add(Scaled::from_log(
                1.0,
                m.value.ln_abs().max(ma.value.ln_abs()) - 36.0,
            ));
        terms.push(bracket.mul_exp(ln).scale(sign), err.mul_exp(ln));
    }
    Ok(terms.finish(Method::ClosedForm))
}

/// `𝒞_{n,M}(x) = [𝒢_n^{(n−M)}(x) − 𝒢_{n−M}^{(n)}(x)] / (2 F_{n,n−M}(x))`.
pub fn curly_c(n: u32, big_m: u32, x: f64) -> Result<f64> {
    if big_m < 1 || n < big_m {
        return Err(Error::Domain(format!(
            "curly_C needs n ≥ M ≥ 1, got n={n}, M={big_m}"
        )));
    }
    let f = overlap_f(n, n - big_m, x);
    let scale = (-x * x / 2.0).exp() * x.abs().max(1.0).powi(big_m as i32);
    if f.abs() < ZERO_TOL * scale {
        return Err(Error::ZeroDivisor(format!(
            "F_{{{n},{}}}({x}) = {f:e} vanishes",
            n - big_m
        )));
    }
    let num = calg(n, n - big_m, x)?.value - calg(n - big_m, n, x)?.value;
    Ok(num / (2.0 * f))
}
