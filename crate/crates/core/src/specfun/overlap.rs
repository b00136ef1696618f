//! Overlaps of oppositely displaced number states.

use super::gamma::ln_gamma;

const RESCALE: f64 = 1e150;

/// `F_{n'n}(x) = ⟨n'| D(−x) |n⟩`, where `D(s) = exp(s (a† − a))`.
///
/// With the two displaced ladders `|n⟩_± = D(∓x/2)|n⟩` this is `_−⟨n'|n⟩_+`.
/// Evaluated as a normalized Laguerre function, so the recurrence never
/// overflows and `|F| ≤ 1` holds to rounding.
pub fn overlap_f(n_prime: u32, n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n_prime == n { 1.0 } else { 0.0 };
    }
    let p = n_prime.min(n);
    let alpha = (n_prime.max(n) - p) as f64;
    let t = x * x;

    // φ_k = √(k!/(k+α)!) L_k^{(α)}(t) t^{α/2} e^{−t/2}, stored as cur·exp(log_scale)
    let mut log_scale = 0.5 * alpha * t.ln() - 0.5 * t - 0.5 * ln_gamma(alpha + 1.0).unwrap();
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - t) * cur - (kf * (kf + alpha)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + alpha)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        } else if cur.abs() < 1.0 / RESCALE && prev.abs() < 1.0 / RESCALE {
            cur *= RESCALE;
            prev *= RESCALE;
            log_scale -= RESCALE.ln();
        }
    }

    let mut sign = if (n_prime + p) % 2 == 0 { 1.0 } else { -1.0 };
    if x < 0.0 && (alpha as u32) % 2 == 1 {
        sign = -sign;
    }
    if cur == 0.0 {
        return 0.0;
    }
    sign * cur.signum() * (cur.abs().ln() + log_scale).exp()
}

/// `dF_{n'n}/dx = √(n'+1) F_{n'+1,n}(x) − √n' F_{n'−1,n}(x)`.
pub fn overlap_f_dx(n_prime: u32, n: u32, x: f64) -> f64 {
    let up = ((n_prime + 1) as f64).sqrt() * overlap_f(n_prime + 1, n, x);
    let down = if n_prime > 0 {
        (n_prime as f64).sqrt() * overlap_f(n_prime - 1, n, x)
    } else {
        0.0
    };
    up - down
}
