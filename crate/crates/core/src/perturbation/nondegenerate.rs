use super::validity::validity;
use super::{PTResult, PtValue, StateLabel};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::specfun::kernels::pole_distance;
use crate::specfun::{calf, calf_dx, POLE_TOL};

/// First partial derivatives of `ℱ_n(x, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalFPartials {
    pub dx: f64,
    pub dz: f64,
}

/// `∂ℱ/∂x` from the termwise-differentiated closed form and `∂ℱ/∂z` from a
/// five-point stencil with one Richardson step.
pub fn calf_partials(n: u32, x: f64, z: f64) -> Result<CalFPartials> {
    let dx = calf_dx(n, x, z)?.value;
    let dist = pole_distance(z);
    if dist < POLE_TOL {
        return Err(Error::Pole { location: z });
    }
    let h = 1e-3 * dist.min(1.0);
    let f = |t: f64| calf(n, x, t).map(|r| r.value);
    let stencil = |h: f64| -> Result<f64> {
        Ok((-f(z + 2.0 * h)? + 8.0 * f(z + h)? - 8.0 * f(z - h)? + f(z - 2.0 * h)?) / (12.0 * h))
    };
    let coarse = stencil(h)?;
    let fine = stencil(h / 2.0)?;
    Ok(CalFPartials {
        dx,
        dz: (16.0 * fine - coarse) / 15.0,
    })
}

/// Second-order result for `|n σ⟩` when `M` is not an integer.
pub fn pt_noninteger(p: &ModelParams, n: u32, sigma: i32) -> Result<PTResult> {
    if p.m_is_integral() {
        return Err(Error::WrongCase(format!(
            "M = {} is an integer; use the degenerate expansion",
            p.big_m()
        )));
    }
    if sigma != 1 && sigma != -1 {
        return Err(Error::InvalidParameter(format!(
            "sigma must be ±1, got {sigma}"
        )));
    }
    let omega = p.omega();
    let s = sigma as f64;
    let m = p.big_m();
    let x = 2.0 * p.g_tilde();
    let z = -(n as f64) - s * m;
    let dt = p.delta_tilde();
    let d2 = dt * dt;

    let cal = calf(n, x, z)?.value;
    let d = calf_partials(n, x, z)?;

    let e0 = omega * n as f64 + s * p.epsilon();
    let e2 = -omega * d2 * cal;
    let g = p.g_tilde();
    Ok(PTResult {
        label: StateLabel::Nondegenerate { n, sigma },
        params: *p,
        e0,
        e1: 0.0,
        e2,
        sx: PtValue::new(s * (1.0 + 2.0 * d2 * d.dz), 3),
        sz: PtValue::new(-2.0 * dt * cal, 2),
        nbar: PtValue::new(
            n as f64 + g * g + d2 * (cal + 2.0 * g * d.dx - s * m * d.dz),
            3,
        ),
        combined: None,
        validity: validity(p),
    })
}
