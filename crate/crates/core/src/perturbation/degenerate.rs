use super::validity::validity;
use super::{Alpha, PTResult, PtValue, StateLabel};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::specfun::{calf, calg, curly_c, overlap_f, overlap_f_dx};

/// Second-order result for `|n; α⟩` when `M` is a positive integer.
///
/// For `n ≥ M` the pair `|n−M⟩_+`, `|n⟩_−` is split at first order and
/// `α = ±` picks the combination `(|n−M⟩_+ + α|n⟩_−)/√2`.
pub fn pt_integer(p: &ModelParams, n: u32, alpha: Alpha) -> Result<PTResult> {
    let big_m = p.integer_m().ok_or_else(|| {
        Error::WrongCase(format!(
            "M = {} is not a positive integer; use the nondegenerate expansion",
            p.big_m()
        ))
    })?;
    if (n < big_m) != (alpha == Alpha::Zero) {
        return Err(Error::InvalidParameter(format!(
            "level {n} with M = {big_m} needs alpha {}",
            if n < big_m { "0" } else { "+ or -" }
        )));
    }
    let omega = p.omega();
    let m = big_m as f64;
    let g = p.g_tilde();
    let x = 2.0 * g;
    let dt = p.delta_tilde();
    let e0 = omega * n as f64 - p.epsilon();
    let base = n as f64 + g * g;

    let (e1, e2, sx, sz, nbar, combined) = if n < big_m {
        let cal = calf(n, x, m - n as f64)?.value;
        (
            0.0,
            -omega * dt * dt * cal,
            PtValue::new(-1.0, 2),
            PtValue::new(-2.0 * dt * cal, 2),
            PtValue::new(base, 2),
            PtValue::new(base - m / 2.0, 2),
        )
    } else {
        let a = alpha.sign();
        let lo = n - big_m;
        let f = overlap_f(n, lo, x);
        let g_sum = calg(n, lo, x)?.value + calg(lo, n, x)?.value;
        let c = curly_c(n, big_m, x)?;
        // the partial linear term is what the eigenstate mixing alone gives
        let nbar = PtValue {
            value: base - m / 2.0 * (1.0 + a * dt * c),
            remainder_order: 1,
            partial: true,
        };
        (
            a * omega * dt * f,
            -omega * dt * dt * g_sum / 2.0,
            PtValue::new(a * dt * c, 2),
            PtValue::new(a * f - dt * g_sum, 2),
            nbar,
            // ∂E/∂ω at fixed M and g
            PtValue::new(
                base - m / 2.0 - 2.0 * a * g * dt * overlap_f_dx(n, lo, x),
                2,
            ),
        )
    };
    Ok(PTResult {
        label: StateLabel::Degenerate { n, alpha },
        params: *p,
        e0,
        e1,
        e2,
        sx,
        sz,
        nbar,
        combined: Some(combined),
        validity: validity(p),
    })
}

#[cfg(test)]
mod tests {
    use super::super::lowest_states;
    use super::super::test_support::exact;
    use super::*;
    use crate::model::Observable;

    #[test]
    fn label_rules() {
        let p = ModelParams::new(1.0, 1.0, 1.0, 0.1).unwrap();
        assert!(pt_integer(&p, 1, Alpha::Zero).is_ok());
        assert!(pt_integer(&p, 1, Alpha::Plus).is_err());
        assert!(pt_integer(&p, 2, Alpha::Zero).is_err());
        let q = ModelParams::new(1.0, 1.0, 0.3, 0.1).unwrap();
        assert!(matches!(
            pt_integer(&q, 2, Alpha::Plus),
            Err(Error::WrongCase(_))
        ));
    }

    #[test]
    fn unpaired_ground_state() {
        let p = ModelParams::new(1.0, 1.2, 0.5, 0.1).unwrap();
        let r = pt_integer(&p, 0, Alpha::Zero).unwrap();
        let cal = calf(0, 2.4, 1.0).unwrap().value;
        assert!((r.energy() - (-0.5 - 0.01 * cal)).abs() < 1e-15);
        assert_eq!(r.sx.value, -1.0);
        assert_eq!(r.e1, 0.0);
    }

    #[test]
    fn first_order_splitting_value() {
        let p = ModelParams::new(1.0, 1.0, 0.5, 0.05).unwrap();
        let plus = pt_integer(&p, 1, Alpha::Plus).unwrap();
        let minus = pt_integer(&p, 1, Alpha::Minus).unwrap();
        let split = plus.e1 - minus.e1;
        assert!((split + 4.0 * 0.05 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((split.abs() - 0.0270671).abs() < 1e-7);
    }

    #[test]
    fn sz_is_energy_derivative() {
        for &(g, eps, d) in &[(1.0, 0.5, 0.05), (1.7, 1.0, 0.2), (0.6, 1.5, 0.3)] {
            let p = ModelParams::new(1.0, g, eps, d).unwrap();
            for r in lowest_states(&p, 8).unwrap() {
                let dt = p.delta_tilde();
                let want = (r.e1 + 2.0 * r.e2) / (p.omega() * dt);
                assert!((r.sz.value - want).abs() <= 4.0 * f64::EPSILON * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn splitting_ratio_tends_to_one() {
        let p = ModelParams::new(1.0, 1.0, 0.5, 0.01).unwrap();
        let ed = exact(&p, 8);
        let e = ed.energies();
        // sorted: [0;0], then pairs for n = 1, 2, 3
        for n in 1..4u32 {
            let k = 2 * n as usize - 1;
            let split = e[k + 1] - e[k];
            let f = overlap_f(n, n - 1, 2.0).abs();
            let ratio = split / (2.0 * 0.01 * f);
            assert!((ratio - 1.0).abs() < 0.05, "n = {n}: ratio {ratio}");
        }
    }

    #[test]
    fn observables_against_exact() {
        for &(eps, g, d) in &[(0.5, 1.5, 0.05), (1.0, 1.2, 0.05), (1.5, 1.5, 0.04)] {
            let p = ModelParams::new(1.0, g, eps, d).unwrap();
            let m = p.big_m();
            let ed = exact(&p, 8);
            let pt = lowest_states(&p, 6).unwrap();
            let tol = 5.0 * d * d;
            for (k, r) in pt.iter().enumerate() {
                let sx = ed.expect(k, Observable::Sx);
                let sz = ed.expect(k, Observable::Sz);
                let nb = ed.expect(k, Observable::Number);
                let tag = format!("M = {m}, {}", r.label);
                assert!((r.energy_arm() - ed.energies()[k]).abs() < tol, "E {tag}");
                assert!(
                    (r.sx.value - sx).abs() < tol,
                    "sx {tag}: {} vs {sx}",
                    r.sx.value
                );
                assert!(
                    (r.sz.value - sz).abs() < tol,
                    "sz {tag}: {} vs {sz}",
                    r.sz.value
                );
                let comb = r.combined.unwrap().value;
                assert!((comb - (nb + m / 2.0 * sx)).abs() < tol, "combined {tag}");
            }
        }
    }

    #[test]
    fn vanishing_overlap_refused() {
        // F_{2,1}(x) ∝ x (2 − x²) vanishes at x = √2
        let g = 0.5f64.sqrt();
        let p = ModelParams::new(1.0, g, 0.5, 0.05).unwrap();
        assert!(matches!(
            pt_integer(&p, 2, Alpha::Plus),
            Err(Error::ZeroDivisor(_))
        ));
    }
}
