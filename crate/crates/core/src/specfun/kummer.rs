//! Confluent hypergeometric functions `M(a, b, x)` and the regularized
//! `𝐌(a, b, x) = M(a, b, x)/Γ(b)`, plus parameter derivatives of 𝐌.

use super::gamma::{
    factorial, ln_factorial, ln_gamma_sign, nonpositive_integer_near, rgamma, rgamma_deriv,
};
use super::sum::CompensatedSum;
use super::{EvalResult, Method, POLE_TOL, SERIES_MAX_TERMS, SERIES_QUIET_TERMS, SERIES_REL_TOL};
use crate::error::{Error, Result};

const RESCALE_AT: f64 = 1e250;

/// A real number `mant · exp(log_scale)`; keeps `e^{±x²}` factors out of range trouble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    pub mant: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mant: 0.0,
        log_scale: 0.0,
    };

    pub fn from_f64(v: f64) -> Self {
        Scaled {
            mant: v,
            log_scale: 0.0,
        }
    }

    pub fn from_log(sign: f64, ln_abs: f64) -> Self {
        Scaled {
            mant: sign,
            log_scale: ln_abs,
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum() * (self.mant.abs().ln() + self.log_scale).exp()
        }
    }

    pub fn ln_abs(self) -> f64 {
        self.mant.abs().ln() + self.log_scale
    }

    pub fn mul_exp(self, ln: f64) -> Self {
        Scaled {
            mant: self.mant,
            log_scale: self.log_scale + ln,
        }
    }

    pub fn scale(self, f: f64) -> Self {
        Scaled {
            mant: self.mant * f,
            log_scale: self.log_scale,
        }
    }

    pub fn add(self, other: Scaled) -> Scaled {
        if self.mant == 0.0 {
            return other;
        }
        if other.mant == 0.0 {
            return self;
        }
        let (hi, lo) = if self.ln_abs() >= other.ln_abs() {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = lo.mant * (lo.log_scale - hi.log_scale).exp();
        Scaled {
            mant: hi.mant + ratio,
            log_scale: hi.log_scale,
        }
    }
}

/// Outcome of a log-scaled power series: value and rounding-error scale.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Summed {
    pub value: Scaled,
    pub error: Scaled,
    pub terms: usize,
}

impl Summed {
    fn zero() -> Self {
        Summed {
            value: Scaled::ZERO,
            error: Scaled::ZERO,
            terms: 0,
        }
    }

    pub fn mul_exp(self, ln: f64) -> Self {
        Summed {
            value: self.value.mul_exp(ln),
            error: self.error.mul_exp(ln),
            terms: self.terms,
        }
    }
}

fn exact_nonpositive_int(a: f64) -> Option<u64> {
    if a <= 0.0 && a == a.floor() {
        Some((-a) as u64)
    } else {
        None
    }
}

/// `(ln|1/Γ(y)|, sign)` or `None` when `1/Γ(y)` vanishes.
fn ln_rgamma_sign(y: f64) -> Option<(f64, f64)> {
    match ln_gamma_sign(y) {
        Ok((lg, s)) => Some((-lg, s)),
        Err(_) => {
            let r = rgamma(y);
            if r == 0.0 {
                None
            } else {
                Some((r.abs().ln(), r.signum()))
            }
        }
    }
}

/// Power series of `𝐌(a, b, x)` summed term by term with a running log scale.
///
/// Starts at the first term with nonzero `1/Γ(b+j)` and stops once
/// [`SERIES_QUIET_TERMS`] successive terms fall below `SERIES_REL_TOL` of the
/// accumulated magnitude, past both the peak of the terms and any sign changes.
pub(crate) fn reg_series(a: f64, b: f64, x: f64) -> Result<Summed> {
    let stop_at = exact_nonpositive_int(a);
    let j0 = match exact_nonpositive_int(b) {
        Some(m) => m + 1,
        None => 0,
    };
    if let Some(n) = stop_at {
        if j0 > n {
            return Ok(Summed::zero());
        }
    }
    if x == 0.0 {
        return Ok(if j0 == 0 {
            let r = rgamma(b);
            Summed {
                value: Scaled::from_f64(r),
                error: Scaled::from_f64(r.abs() * f64::EPSILON),
                terms: 1,
            }
        } else {
            Summed::zero()
        });
    }

    // first nonzero term: (a)_{j0} x^{j0} / (j0! Γ(b + j0))
    let mut sign = 1.0;
    let mut ln0 = 0.0;
    for i in 0..j0 {
        let f = a + i as f64;
        if f == 0.0 {
            return Ok(Summed::zero());
        }
        ln0 += f.abs().ln();
        if f < 0.0 {
            sign = -sign;
        }
    }
    ln0 += j0 as f64 * x.abs().ln() - ln_factorial(j0);
    if x < 0.0 && j0 % 2 == 1 {
        sign = -sign;
    }
    let (lr, sr) = match ln_rgamma_sign(b + j0 as f64) {
        Some(v) => v,
        None => return Ok(Summed::zero()),
    };
    ln0 += lr;
    sign *= sr;

    let mut log_scale = ln0;
    let mut term = sign;
    let mut acc = CompensatedSum::default();
    acc.add(term);
    let mut quiet = 0usize;
    let mut j = j0;
    let settle = x.abs().max(-a).max(-b);
    loop {
        if let Some(n) = stop_at {
            if j >= n {
                break;
            }
        }
        let jf = j as f64;
        term *= (a + jf) * x / ((b + jf) * (jf + 1.0));
        j += 1;
        acc.add(term);
        if term.abs() <= SERIES_REL_TOL * acc.abs_sum() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= SERIES_QUIET_TERMS && j as f64 > settle {
            break;
        }
        if acc.abs_sum() > RESCALE_AT {
            acc.scale(1.0 / RESCALE_AT);
            term /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
        if (j - j0) as usize > SERIES_MAX_TERMS {
            return Err(Error::Convergence(format!(
                "1F1 series for a={a}, b={b}, x={x} exceeded {SERIES_MAX_TERMS} terms"
            )));
        }
    }
    let terms = (j - j0) as usize + 1;
    let err = acc.abs_sum() * f64::EPSILON * (2.0 + (terms as f64).sqrt());
    Ok(Summed {
        value: Scaled {
            mant: acc.value(),
            log_scale,
        },
        error: Scaled {
            mant: err,
            log_scale,
        },
        terms,
    })
}

/// `𝐌(a, b, x)` in scaled form; negative `x` goes through `e^x 𝐌(b−a, b, −x)`.
pub(crate) fn reg_scaled(a: f64, b: f64, x: f64) -> Result<Summed> {
    if x >= 0.0 {
        reg_series(a, b, x)
    } else {
        Ok(reg_series(b - a, b, -x)?.mul_exp(x))
    }
}

/// Regularized `𝐌(a, b, x) = Σ_j (a)_j x^j / (j! Γ(b+j))`, entire in `a` and `b`.
pub fn kummer_m_reg(a: f64, b: f64, x: f64) -> Result<EvalResult> {
    check_finite(a, b, x)?;
    let s = reg_scaled(a, b, x)?;
    Ok(EvalResult::new(
        s.value.to_f64(),
        s.error.to_f64(),
        Method::Series,
    ))
}

/// Kummer's `M(a, b, x) = ₁F₁(a; b; x)`.
pub fn kummer_m(a: f64, b: f64, x: f64) -> Result<EvalResult> {
    check_finite(a, b, x)?;
    if nonpositive_integer_near(b, POLE_TOL).is_some() {
        return Err(Error::Pole { location: b });
    }
    let (lg, sg) = ln_gamma_sign(b)?;
    let s = reg_scaled(a, b, x)?;
    Ok(EvalResult::new(
        sg * s.value.mul_exp(lg).to_f64(),
        s.error.mul_exp(lg).to_f64(),
        Method::Series,
    ))
}

fn check_finite(a: f64, b: f64, x: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "non-finite 1F1 argument ({a}, {b}, {x})"
        )))
    }
}

/// `∂𝐌/∂a` at `a = −n` for `x ≥ 0`.
///
/// The derivative of `(a)_j` does not vanish past `j = n`: for `j > n` it equals
/// `(−1)^n n! (j−n−1)!`, so the result is an infinite series growing like `e^x`.
pub(crate) fn reg_da_at_nonpositive_int(n: u64, b: f64, x: f64) -> Result<Summed> {
    let a = -(n as f64);
    // head, j ≤ n: d(a)_j/da = (a)_j Σ_{i<j} 1/(a+i)
    let mut head = Scaled::ZERO;
    let mut poch = 1.0;
    let mut harm = 0.0;
    let mut head_err = 0.0f64;
    for j in 0..=n {
        if j > 0 {
            let f = a + (j - 1) as f64;
            poch *= f;
            harm += 1.0 / f;
        }
        let d = poch * harm;
        let r = rgamma(b + j as f64);
        if d != 0.0 && r != 0.0 && x > 0.0 {
            let ln = d.abs().ln() + j as f64 * x.ln() - ln_factorial(j) + r.abs().ln();
            let t = Scaled::from_log(d.signum() * r.signum(), ln);
            head_err = head_err.max(t.ln_abs());
            head = head.add(t);
        }
    }
    if x == 0.0 {
        return Ok(Summed {
            value: head,
            error: Scaled::from_f64(head.to_f64().abs() * f64::EPSILON),
            terms: n as usize + 1,
        });
    }

    // tail, j > n: (−1)^n n! (j−n−1)! x^j / (j! Γ(b+j))
    let j1 = n + 1;
    let (lr, sr) = ln_rgamma_sign(b + j1 as f64).unwrap_or((f64::NEG_INFINITY, 0.0));
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 } * sr;
    let mut log_scale = factorial(n).ln() + j1 as f64 * x.ln() - ln_factorial(j1) + lr;
    let mut term = sign;
    let mut acc = CompensatedSum::default();
    acc.add(term);
    let mut quiet = 0usize;
    let mut j = j1;
    let settle = x.max(-b);
    loop {
        let jf = j as f64;
        term *= (jf - n as f64) * x / ((jf + 1.0) * (b + jf));
        j += 1;
        acc.add(term);
        if term.abs() <= SERIES_REL_TOL * acc.abs_sum() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= SERIES_QUIET_TERMS && j as f64 > settle {
            break;
        }
        if acc.abs_sum() > RESCALE_AT {
            acc.scale(1.0 / RESCALE_AT);
            term /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
        if (j - j1) as usize > SERIES_MAX_TERMS {
            return Err(Error::Convergence(format!(
                "a-derivative of 1F1 at a={a}, b={b}, x={x} exceeded {SERIES_MAX_TERMS} terms"
            )));
        }
    }
    let tail = Scaled {
        mant: acc.value(),
        log_scale,
    };
    let terms = (j - j1) as usize + n as usize + 2;
    let err = Scaled {
        mant: acc.abs_sum() * f64::EPSILON * (2.0 + (terms as f64).sqrt()),
        log_scale,
    }
    .add(Scaled::from_log(
        1.0,
        head_err + (n as f64 + 2.0).ln() - 36.0,
    ));
    Ok(Summed {
        value: head.add(tail),
        error: err,
        terms,
    })
}

/// `∂𝐌/∂b` at `a = −n` (terminating series), any real `b`.
pub(crate) fn reg_db_at_nonpositive_int(n: u64, b: f64, x: f64) -> Summed {
    let a = -(n as f64);
    let mut acc = Scaled::ZERO;
    let mut mag = f64::NEG_INFINITY;
    let mut poch = 1.0;
    for j in 0..=n {
        if j > 0 {
            poch *= a + (j - 1) as f64;
        }
        if j > 0 && x == 0.0 {
            break;
        }
        let dr = rgamma_deriv(b + j as f64);
        if dr == 0.0 {
            continue;
        }
        let ln = poch.abs().ln() + if j > 0 { j as f64 * x.ln() } else { 0.0 } - ln_factorial(j)
            + dr.abs().ln();
        let t = Scaled::from_log(poch.signum() * dr.signum(), ln);
        mag = mag.max(ln);
        acc = acc.add(t);
    }
    Summed {
        value: acc,
        error: Scaled::from_log(1.0, mag + ((n + 2) as f64).ln() - 36.0),
        terms: n as usize + 1,
    }
}
