//! Parent Hamiltonian `H′ = H₀ + V′` whose exact eigenstates are the
//! zeroth-order states `|n; α⟩` of the integer case.
//!
//! Conventions: `U = D(−g̃)`, so `U|n⟩ = |n⟩_+` and `U†|n⟩ = |n⟩_−`. The
//! upper spin block of `V′` is `B = U f(a†a) aᴹ U`, the lower block `Bᵀ`.

use crate::error::{Error, Result};
use crate::model::{
    build_rotated_hamiltonian, displacement_operator, embed, shifted_number_state, DenseMatrix,
    ModelParams, SpinBlock, StateVector, SymmetricMatrix, TruncatedFockBasis,
};
use crate::perturbation::{Alpha, StateLabel};
use crate::specfun::gamma::{binomial, ln_factorial};
use crate::specfun::{hermite2, laguerre, overlap_f};

/// Real coupling profile `f(n)` entering `V′`.
#[derive(Debug, Clone, PartialEq)]
pub enum FChoice {
    Zero,
    /// `f(n) = Δ_{n+M} / w_{n+M}` from a sequence `Δ_0, Δ_1, …`; entries past
    /// the end count as zero.
    ConstantOverW(Vec<f64>),
    /// `f(n) = coefficient · ratioⁿ`.
    Geometric {
        coefficient: f64,
        ratio: f64,
    },
    /// `f(n) = Δ / (−g̃)ᴹ`.
    Special,
}

impl FChoice {
    /// The geometric profile normalized like [`FChoice::Special`]: `Δ sⁿ / (−g̃)ᴹ`.
    pub fn geometric_normalized(p: &ModelParams, ratio: f64) -> Result<Self> {
        let m = require_integer(p)?;
        Ok(FChoice::Geometric {
            coefficient: special_value(p, m)?,
            ratio,
        })
    }

    pub fn value(&self, n: usize, p: &ModelParams, big_m: u32) -> Result<f64> {
        Ok(match self {
            FChoice::Zero => 0.0,
            FChoice::ConstantOverW(seq) => {
                let k = n + big_m as usize;
                seq.get(k).copied().unwrap_or(0.0) / w_factor(k as u32, big_m)?
            }
            FChoice::Geometric { coefficient, ratio } => coefficient * ratio.powi(n as i32),
            FChoice::Special => special_value(p, big_m)?,
        })
    }
}

fn special_value(p: &ModelParams, big_m: u32) -> Result<f64> {
    let g = p.g_tilde();
    if g == 0.0 {
        return Err(Error::InvalidParameter("f = Δ/(−g̃)^M needs g ≠ 0".into()));
    }
    // (−g̃)^M as (−1)^M g̃^M; odd M flips the sign of every v′
    let sign = if big_m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(p.delta() / (sign * g.powi(big_m as i32)))
}

fn require_integer(p: &ModelParams) -> Result<u32> {
    p.integer_m().ok_or_else(|| {
        Error::WrongCase(format!(
            "parent Hamiltonian needs a positive integer M, got {}",
            p.big_m()
        ))
    })
}

/// `w_n = √(n!/(n−M)!)`.
pub fn w_factor(n: u32, big_m: u32) -> Result<f64> {
    if n < big_m {
        return Err(Error::Domain(format!(
            "w_n needs n ≥ M, got n={n}, M={big_m}"
        )));
    }
    if n <= 20 {
        let prod: f64 = (n - big_m + 1..=n).map(|k| k as f64).product();
        return Ok(prod.sqrt());
    }
    Ok((0.5 * (ln_factorial(n as u64) - ln_factorial((n - big_m) as u64))).exp())
}

/// Upper spin block `B = U f(a†a) aᴹ U` in the truncated basis.
pub fn vprime_upper_block(
    p: &ModelParams,
    f: &FChoice,
    b: &TruncatedFockBasis,
) -> Result<DenseMatrix> {
    let big_m = require_integer(p)?;
    let levels = b.levels();
    let u = displacement_operator(-p.g_tilde(), b)?;
    if u.retained <= big_m as usize {
        return Err(Error::Truncation(format!(
            "n_max = {} too small for a shift of {}",
            b.n_max(),
            p.g_tilde()
        )));
    }
    let mm = big_m as usize;
    // K = f(a†a) aᴹ has K[m, m+M] = f(m) w_{m+M}; U K shifts U's columns right by M
    let mut uk = DenseMatrix::zeros(levels, levels);
    for j in mm..levels {
        let k = f.value(j - mm, p, big_m)? * w_factor(j as u32, big_m)?;
        if k == 0.0 {
            continue;
        }
        for i in 0..levels {
            uk[(i, j)] = u.matrix[(i, j - mm)] * k;
        }
    }
    Ok(uk.matmul(&u.matrix))
}

/// `V′` as a full symmetric matrix with zero diagonal spin blocks.
pub fn build_vprime(
    p: &ModelParams,
    f: &FChoice,
    b: &TruncatedFockBasis,
) -> Result<SymmetricMatrix> {
    let blk = vprime_upper_block(p, f, b)?;
    let mut v = SymmetricMatrix::zeros(b.dim());
    for i in 0..b.levels() {
        for j in 0..b.levels() {
            let x = blk[(i, j)];
            if x != 0.0 {
                v.set(b.index(SpinBlock::Up, i), b.index(SpinBlock::Down, j), x);
            }
        }
    }
    Ok(v)
}

/// `H′ = H₀ + V′` in the rotated frame, where `H₀` is the rotated Hamiltonian at Δ = 0.
pub fn build_parent_hamiltonian(
    p: &ModelParams,
    f: &FChoice,
    b: &TruncatedFockBasis,
) -> Result<SymmetricMatrix> {
    let h0 = build_rotated_hamiltonian(&p.with_delta(0.0)?, b);
    Ok(h0.add(&build_vprime(p, f, b)?))
}

#[derive(Debug, Clone)]
pub struct ParentEigenpair {
    pub label: StateLabel,
    /// `E′ = E⁽⁰⁾ + v′`, rotated frame.
    pub energy: f64,
    pub v_prime: f64,
    pub state: StateVector,
    /// `‖H′ψ − E′ψ‖`.
    pub residual: f64,
}

/// Largest `n` for which analytic pairs are emitted: `n_max − M − ⌈10 g̃²⌉`.
pub fn headroom_limit(p: &ModelParams, b: &TruncatedFockBasis) -> Option<usize> {
    let m = p.integer_m()? as usize;
    let reserve = m + (10.0 * p.g_tilde() * p.g_tilde()).ceil() as usize;
    b.n_max().checked_sub(reserve)
}

/// Analytic eigenpairs of `H′` for every level that fits the truncation,
/// each with its numerical residual.
pub fn parent_eigensystem(
    p: &ModelParams,
    f: &FChoice,
    b: &TruncatedFockBasis,
) -> Result<Vec<ParentEigenpair>> {
    let big_m = require_integer(p)?;
    let limit = headroom_limit(p, b)
        .ok_or_else(|| Error::Truncation(format!("n_max = {} leaves no headroom", b.n_max())))?;
    let h = build_parent_hamiltonian(p, f, b)?;
    let omega = p.omega();
    let mut out = Vec::new();
    for n in 0..=limit as u32 {
        let e0 = omega * n as f64 - p.epsilon();
        let down = match shifted_number_state(n as usize, -1, p, b) {
            Ok(s) => embed(SpinBlock::Down, &s, b),
            Err(Error::Truncation(_)) => break,
            Err(e) => return Err(e),
        };
        if n < big_m {
            out.push(pair(
                &h,
                StateLabel::Degenerate {
                    n,
                    alpha: Alpha::Zero,
                },
                e0,
                0.0,
                down,
            ));
            continue;
        }
        let up = match shifted_number_state((n - big_m) as usize, 1, p, b) {
            Ok(s) => embed(SpinBlock::Up, &s, b),
            Err(Error::Truncation(_)) => break,
            Err(e) => return Err(e),
        };
        let w = w_factor(n, big_m)? * f.value((n - big_m) as usize, p, big_m)?;
        for alpha in [Alpha::Minus, Alpha::Plus] {
            let a = alpha.sign();
            let mut psi = up.clone();
            psi.axpy(a, &down);
            let psi = psi.scaled(std::f64::consts::FRAC_1_SQRT_2);
            out.push(pair(
                &h,
                StateLabel::Degenerate { n, alpha },
                e0 + a * w,
                a * w,
                psi,
            ));
        }
    }
    if out.is_empty() {
        return Err(Error::Truncation(format!(
            "no parent eigenstate fits into n_max = {}",
            b.n_max()
        )));
    }
    Ok(out)
}

fn pair(
    h: &SymmetricMatrix,
    label: StateLabel,
    energy: f64,
    v_prime: f64,
    state: StateVector,
) -> ParentEigenpair {
    let hv = h.matvec(state.amps());
    let residual = hv
        .iter()
        .zip(state.amps())
        .map(|(x, y)| (x - energy * y).powi(2))
        .sum::<f64>()
        .sqrt();
    ParentEigenpair {
        label,
        energy,
        v_prime,
        state,
        residual,
    }
}

const FT_MAX_TERMS: usize = 20_000;

/// Number-conserving part `f̃(n) = ⟨n| U† f(a†a) aᴹ U |n⟩`, summed as
/// `Σ_m f(m) w_{m+M} F_{mn}(g̃) F_{m+M,n}(g̃)`.
///
/// This is the Hermite series `(−1)ᴹ e^{−g̃²}/n! Σ_m f(m)/m! H_{n,m} H_{n,m+M}`
/// at equal arguments `g̃`. It is not the Fock diagonal of the block `B`
/// itself, see [`vprime_fock_diagonal`].
pub fn f_tilde_diag(n: u32, p: &ModelParams, f: &FChoice) -> Result<f64> {
    let big_m = require_integer(p)?;
    let g = p.g_tilde();
    let settle = n as f64 + big_m as f64 + g * g + 12.0 * g + 40.0;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut quiet = 0;
    for m in 0..FT_MAX_TERMS {
        let t = f.value(m, p, big_m)?
            * w_factor(m as u32 + big_m, big_m)?
            * overlap_f(m as u32, n, g)
            * overlap_f(m as u32 + big_m, n, g);
        // Neumaier step
        let s = sum + t;
        comp += if sum.abs() >= t.abs() {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
        if m as f64 > settle {
            if t.abs() <= 1e-17 * (sum + comp).abs() || t == 0.0 {
                quiet += 1;
                if quiet >= 10 {
                    return Ok(sum + comp);
                }
            } else {
                quiet = 0;
            }
        }
    }
    Err(Error::Convergence(format!(
        "f̃({n}) series not settled after {FT_MAX_TERMS} terms"
    )))
}

/// The same quantity as [`f_tilde_diag`] from the Hermite-polynomial series
/// (only usable for small indices).
pub fn f_tilde_hermite(n: u32, p: &ModelParams, f: &FChoice, terms: u32) -> Result<f64> {
    let big_m = require_integer(p)?;
    let g = p.g_tilde();
    let mut sum = 0.0;
    for m in 0..terms {
        let h1 = hermite2(n, m, g, g)?;
        let h2 = hermite2(n, m + big_m, g, g)?;
        sum += f.value(m as usize, p, big_m)? * (-ln_factorial(m as u64)).exp() * h1 * h2;
    }
    let sign = if big_m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * (-g * g - ln_factorial(n as u64)).exp() * sum)
}

/// `⟨n| U† f aᴹ U |n⟩` from truncated matrices, as an independent check.
pub fn f_tilde_direct(
    n: usize,
    p: &ModelParams,
    f: &FChoice,
    b: &TruncatedFockBasis,
) -> Result<f64> {
    let big_m = require_integer(p)? as usize;
    let u = displacement_operator(-p.g_tilde(), b)?;
    let col: Vec<f64> = (0..b.levels()).map(|k| u.matrix[(k, n)]).collect();
    let mut acc = 0.0;
    for m in 0..b.levels().saturating_sub(big_m) {
        acc += col[m]
            * f.value(m, p, big_m as u32)?
            * w_factor((m + big_m) as u32, big_m as u32)?
            * col[m + big_m];
    }
    Ok(acc)
}

/// Literal Fock diagonal `⟨n| B |n⟩` of the upper block of `V′`.
pub fn vprime_fock_diagonal(
    p: &ModelParams,
    f: &FChoice,
    b: &TruncatedFockBasis,
) -> Result<Vec<f64>> {
    let blk = vprime_upper_block(p, f, b)?;
    Ok((0..b.levels()).map(|i| blk[(i, i)]).collect())
}

/// Closed form of `f̃(n)` for `f(m) = Δ sᵐ/(−g̃)ᴹ`:
/// `Δ e^{−(1−s)g̃²} Σ_k C(M,k) (s−1)ᵏ s^{n−k} L_{n−k}^{(k)}(−g̃²(1−s)²/s)`.
pub fn f_tilde_geometric_closed(n: u32, p: &ModelParams, s: f64) -> Result<f64> {
    let big_m = require_integer(p)?;
    if s == 0.0 || !s.is_finite() {
        return Err(Error::Domain(format!(
            "geometric ratio {s} must be finite and nonzero"
        )));
    }
    let g2 = p.g_tilde() * p.g_tilde();
    let arg = -g2 * (1.0 - s) * (1.0 - s) / s;
    let mut sum = 0.0;
    for k in 0..=n.min(big_m) {
        sum += binomial(big_m as u64, k as u64)
            * (s - 1.0).powi(k as i32)
            * s.powi((n - k) as i32)
            * laguerre(n - k, k as f64, arg);
    }
    Ok(p.delta() * (-(1.0 - s) * g2).exp() * sum)
}

/// `|Σ_m H_{m+M,n}(x,x) H_{m,n}(x,x) sᵐ/(m! n!) − e^{sx²} xᴹ Σ_k C(M,k)(s−1)ᵏ s^{n−k} L_{n−k}^{(k)}(−x²(1−s)²/s)|`.
pub fn verify_shifted_genfunc(n: u32, big_m: u32, x: f64, s: f64) -> Result<f64> {
    if s.is_nan() || s.abs() > 1.0 || s == 0.0 {
        return Err(Error::Domain(format!("need 0 < |s| ≤ 1, got {s}")));
    }
    let ln_n = ln_factorial(n as u64);
    let mut lhs = 0.0;
    let mut quiet = 0;
    let settle = (n + big_m) as f64 + 4.0 * x * x + 40.0;
    let mut m = 0u32;
    loop {
        let h = hermite2(m + big_m, n, x, x)? * hermite2(m, n, x, x)?;
        let t = h * s.powi(m as i32) * (-ln_factorial(m as u64) - ln_n).exp();
        lhs += t;
        if m as f64 > settle {
            if t.abs() <= 1e-17 * lhs.abs() || t == 0.0 {
                quiet += 1;
                if quiet >= 10 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        m += 1;
        if m > 2000 {
            return Err(Error::Convergence(
                "shifted generating function series".into(),
            ));
        }
    }
    let arg = -x * x * (1.0 - s) * (1.0 - s) / s;
    let mut rhs = 0.0;
    for k in 0..=n.min(big_m) {
        rhs += binomial(big_m as u64, k as u64)
            * (s - 1.0).powi(k as i32)
            * s.powi((n - k) as i32)
            * laguerre(n - k, k as f64, arg);
    }
    rhs *= (s * x * x).exp() * x.powi(big_m as i32);
    Ok((lhs - rhs).abs())
}
