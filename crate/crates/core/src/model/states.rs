use super::basis::{SpinBlock, TruncatedFockBasis};
use super::matrix::{DenseMatrix, StateVector};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::specfun::overlap_f;

/// Largest squared weight allowed in the top 5% of Fock levels.
pub const TAIL_TOL: f64 = 1e-10;
/// Largest norm deficit of a displaced Fock column counted as retained.
pub const ORTHO_TOL: f64 = 1e-8;

/// Amplitudes `⟨m| D(s) |k⟩ = F_{mk}(−s)` for `m = 0..=n_max`, with `D(s) = exp(s (a† − a))`.
///
/// Each entry is the exact infinite-space matrix element. The naive ladder
/// recurrence in `k` loses digits for large shifts, so the normalized
/// Laguerre route of [`overlap_f`] is used instead.
pub fn displaced_fock_column(s: f64, k: usize, n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .map(|m| overlap_f(m as u32, k as u32, -s))
        .collect()
}

fn tail_weight(v: &[f64]) -> f64 {
    let top = (v.len() / 20).max(1);
    v[v.len() - top..].iter().map(|a| a * a).sum()
}

/// `|n⟩_σ = D(−σ g̃) |n⟩`, the `n`-th eigenstate of `a_σ† a_σ` with `a_σ = a + σ g̃`.
///
/// Returns oscillator amplitudes (length `n_max + 1`), renormalized after the
/// tail check.
pub fn shifted_number_state(
    n: usize,
    sigma: i32,
    p: &ModelParams,
    b: &TruncatedFockBasis,
) -> Result<StateVector> {
    if n > b.n_max() {
        return Err(Error::Truncation(format!(
            "level {n} above n_max = {}",
            b.n_max()
        )));
    }
    let s = -SpinBlock::from_sign(sigma).sign() * p.g_tilde();
    let col = displaced_fock_column(s, n, b.n_max());
    let tail = tail_weight(&col);
    let missing = 1.0 - col.iter().map(|a| a * a).sum::<f64>();
    if tail > TAIL_TOL || missing > TAIL_TOL {
        return Err(Error::Truncation(format!(
            "|{n}⟩ shifted by {s} leaves weight {:.3e} near n_max = {}",
            tail.max(missing),
            b.n_max()
        )));
    }
    Ok(StateVector::new(col).normalized())
}

/// Coherent state `D(α)|0⟩` with real `α`.
pub fn coherent_state(alpha: f64, b: &TruncatedFockBasis) -> Result<StateVector> {
    let col = displaced_fock_column(alpha, 0, b.n_max());
    let tail = tail_weight(&col);
    if tail > TAIL_TOL {
        return Err(Error::Truncation(format!(
            "coherent state {alpha} leaves weight {tail:.3e} near n_max"
        )));
    }
    Ok(StateVector::new(col).normalized())
}

/// Places oscillator amplitudes into one spin block of the full space.
pub fn embed(block: SpinBlock, osc: &StateVector, b: &TruncatedFockBasis) -> StateVector {
    let mut v = StateVector::zeros(b.dim());
    let off = b.index(block, 0);
    v.amps_mut()[off..off + b.levels()].copy_from_slice(osc.amps());
    v
}

/// Truncated `D(shift) = exp(shift (a† − a))` on the oscillator space.
#[derive(Debug, Clone)]
pub struct Displacement {
    pub matrix: DenseMatrix,
    /// Leading columns whose norm deficit is at most [`ORTHO_TOL`];
    /// on these `DᵀD = 1` holds to that tolerance.
    pub retained: usize,
}

/// `D(shift)` with `D(2g̃)|n⟩_+ = |n⟩_−`, so `D(−g̃)` undoes the `+` shift.
pub fn displacement_operator(shift: f64, b: &TruncatedFockBasis) -> Result<Displacement> {
    let n = b.levels();
    let mut matrix = DenseMatrix::zeros(n, n);
    let mut retained = None;
    for k in 0..n {
        let col = displaced_fock_column(shift, k, b.n_max());
        let deficit = 1.0 - col.iter().map(|a| a * a).sum::<f64>();
        if retained.is_none() && deficit > ORTHO_TOL {
            retained = Some(k);
        }
        for (m, c) in col.into_iter().enumerate() {
            matrix[(m, k)] = c;
        }
    }
    let retained = retained.unwrap_or(n);
    if retained == 0 {
        return Err(Error::Truncation(format!(
            "displacement by {shift} does not fit into n_max = {}",
            b.n_max()
        )));
    }
    Ok(Displacement { matrix, retained })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::factorial;
    use proptest::prelude::*;

    #[test]
    fn coherent_amplitudes() {
        let p = ModelParams::new(1.0, 1.3, 0.0, 0.0).unwrap();
        let b = TruncatedFockBasis::new(60);
        let v = shifted_number_state(0, -1, &p, &b).unwrap();
        let gt: f64 = 1.3;
        for k in 0..20 {
            let want = (-gt * gt / 2.0).exp() * gt.powi(k as i32) / factorial(k as u64).sqrt();
            assert!((v.amps()[k] - want).abs() < 1e-15);
        }
        let c = coherent_state(gt, &b).unwrap();
        assert!(c.distance(&v) < 1e-15);
    }

    #[test]
    fn no_shift_is_fock() {
        let p = ModelParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let b = TruncatedFockBasis::new(8);
        let v = shifted_number_state(3, 1, &p, &b).unwrap();
        assert_eq!(v, StateVector::unit(b.levels(), 3));
    }

    #[test]
    fn orthonormal_ladders() {
        let p = ModelParams::new(1.0, 1.5, 0.0, 0.0).unwrap();
        let b = TruncatedFockBasis::new(90);
        for sigma in [1, -1] {
            let states: Vec<_> = (0..10)
                .map(|n| shifted_number_state(n, sigma, &p, &b).unwrap())
                .collect();
            for (i, u) in states.iter().enumerate() {
                for (j, v) in states.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((u.dot(v) - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigenstate_of_shifted_number_operator() {
        let p = ModelParams::new(1.0, 1.1, 0.0, 0.0).unwrap();
        let b = TruncatedFockBasis::new(80);
        let a = crate::model::annihilation(b.n_max());
        for sigma in [1, -1] {
            let s = sigma as f64 * p.g_tilde();
            let mut a_s = a.clone();
            for i in 0..b.levels() {
                a_s[(i, i)] += s;
            }
            let num = a_s.transpose().matmul(&a_s);
            for n in 0..6 {
                let v = shifted_number_state(n, sigma, &p, &b).unwrap();
                let r = num.matvec(v.amps());
                let res: f64 = r
                    .iter()
                    .zip(v.amps())
                    .map(|(x, y)| (x - n as f64 * y).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-10, "σ={sigma} n={n} residual {res}");
            }
        }
    }

    #[test]
    fn truncation_is_detected() {
        let p = ModelParams::new(1.0, 3.0, 0.0, 0.0).unwrap();
        let b = TruncatedFockBasis::new(12);
        assert!(matches!(
            shifted_number_state(0, 1, &p, &b),
            Err(Error::Truncation(_))
        ));
        assert!(matches!(
            shifted_number_state(20, 1, &p, &b),
            Err(Error::Truncation(_))
        ));
        assert!(matches!(
            displacement_operator(30.0, &b),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn displacement_properties() {
        let b = TruncatedFockBasis::new(70);
        let d0 = displacement_operator(0.0, &b).unwrap();
        assert_eq!(d0.matrix, DenseMatrix::identity(b.levels()));

        let gt = 1.0;
        let d = displacement_operator(gt, &b).unwrap();
        assert!((d.matrix[(0, 0)] - 0.606_530_659_712_633_4).abs() < 1e-15);

        let dm = displacement_operator(-gt, &b).unwrap();
        let prod = d.matrix.matmul(&dm.matrix);
        let keep = d.retained.min(dm.retained);
        assert!(keep > 30);
        for i in 0..keep / 2 {
            for j in 0..keep / 2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - want).abs() < ORTHO_TOL);
            }
        }
        let dtd = d.matrix.transpose().matmul(&d.matrix);
        for i in 0..d.retained {
            assert!((dtd[(i, i)] - 1.0).abs() <= ORTHO_TOL);
        }
    }

    #[test]
    fn double_shift_maps_ladders() {
        let p = ModelParams::new(1.0, 0.9, 0.0, 0.0).unwrap();
        let b = TruncatedFockBasis::new(80);
        let d = displacement_operator(2.0 * p.g_tilde(), &b).unwrap();
        for n in 0..8 {
            let plus = shifted_number_state(n, 1, &p, &b).unwrap();
            let minus = shifted_number_state(n, -1, &p, &b).unwrap();
            let mapped = StateVector::new(d.matrix.matvec(plus.amps()));
            assert!(mapped.distance(&minus) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn overlap_identity() {
        for &gt in &[0.3, 1.0, 2.2, 3.0] {
            let p = ModelParams::new(1.0, gt, 0.0, 0.0).unwrap();
            let b = TruncatedFockBasis::new(crate::model::default_n_max(gt));
            for n in 0..=12 {
                let plus = shifted_number_state(n, 1, &p, &b).unwrap();
                for np in 0..=12 {
                    let minus = shifted_number_state(np, -1, &p, &b).unwrap();
                    let f = overlap_f(np as u32, n as u32, 2.0 * gt);
                    assert!((minus.dot(&plus) - f).abs() < 1e-9, "g̃={gt} n'={np} n={n}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn columns_follow_ladder_relation(s in -3.0f64..3.0, k in 0usize..25) {
            // D|k+1⟩ = (a† − s) D|k⟩ / √(k+1)
            let c0 = displaced_fock_column(s, k, 90);
            let c1 = displaced_fock_column(s, k + 1, 90);
            for m in 0..60 {
                let raised = if m > 0 { (m as f64).sqrt() * c0[m - 1] } else { 0.0 };
                let want = (raised - s * c0[m]) / ((k + 1) as f64).sqrt();
                prop_assert!((c1[m] - want).abs() < 1e-13);
            }
        }
    }
}
