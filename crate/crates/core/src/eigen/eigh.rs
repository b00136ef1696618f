//! Householder reduction to tridiagonal form followed by implicit QL
//! with accumulated transformations (after the EISPACK tred2/tql2 pair).

use crate::error::{Error, Result};
use crate::model::{StateVector, SymmetricMatrix};

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues in ascending order with orthonormal eigenvectors.
///
/// Each eigenvector's largest-magnitude component is positive.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Vec<f64>,
    n: usize,
    // column-major, column i is eigenvector i
    vectors: Vec<f64>,
}

impl Eigendecomposition {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vector_slice(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    pub fn vector(&self, i: usize) -> StateVector {
        StateVector::new(self.vector_slice(i).to_vec())
    }

    /// `max_i ‖H v_i − λ_i v_i‖` over the first `count` pairs.
    pub fn max_residual(&self, m: &SymmetricMatrix, count: usize) -> f64 {
        (0..count.min(self.n))
            .map(|i| {
                let v = self.vector_slice(i);
                let hv = m.matvec(v);
                hv.iter()
                    .zip(v)
                    .map(|(a, b)| (a - self.values[i] * b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max |⟨v_i|v_j⟩ − δ_ij|` over the first `count` vectors.
    pub fn orthonormality_defect(&self, count: usize) -> f64 {
        let c = count.min(self.n);
        let mut worst: f64 = 0.0;
        for i in 0..c {
            for j in 0..=i {
                let d: f64 = self
                    .vector_slice(i)
                    .iter()
                    .zip(self.vector_slice(j))
                    .map(|(a, b)| a * b)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - want).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn eigh(m: &SymmetricMatrix) -> Result<Eigendecomposition> {
    let n = m.dim();
    if m.as_dense().as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    // symmetric, so row-major storage already reads as column-major
    let mut v = m.as_dense().as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 0 {
        return Ok(Eigendecomposition {
            values: d,
            n,
            vectors: v,
        });
    }
    tred2(n, &mut v, &mut d, &mut e, true);
    tql2(n, &mut v, &mut d, &mut e, true)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        values.push(d[k]);
        let col = &v[k * n..(k + 1) * n];
        let mut big = 0usize;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[big].abs() {
                big = i;
            }
        }
        let flip = if col[big] < 0.0 { -1.0 } else { 1.0 };
        vectors.extend(col.iter().map(|x| flip * x));
    }
    Ok(Eigendecomposition { values, n, vectors })
}

/// Eigenvalues only, ascending. Skips the O(n³) vector accumulation.
pub fn eigvalsh(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if m.as_dense().as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut v = m.as_dense().as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e, false);
    tql2(n, &mut v, &mut d, &mut e, false)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[inline(always)]
fn at(n: usize, row: usize, col: usize) -> usize {
    col * n + row
}

fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64], vectors: bool) {
    for j in 0..n {
        d[j] = v[at(n, n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(n, i - 1, j)];
                v[at(n, i, j)] = 0.0;
                v[at(n, j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(n, j, i)] = f;
                g = e[j] + v[at(n, j, j)] * f;
                let col = &v[j * n..(j + 1) * n];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut v[j * n..(j + 1) * n];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = col[i - 1];
                col[i] = 0.0;
            }
        }
        d[i] = h;
    }

    if !vectors {
        for j in 0..n {
            d[j] = v[at(n, j, j)];
        }
        e[0] = 0.0;
        return;
    }
    for i in 0..n - 1 {
        v[at(n, n - 1, i)] = v[at(n, i, i)];
        v[at(n, i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(n, k, i + 1)] / h;
            }
            for j in 0..=i {
                let (left, right) = v.split_at_mut((i + 1) * n);
                let next = &right[..n];
                let col = &mut left[j * n..(j + 1) * n];
                let mut g = 0.0;
                for k in 0..=i {
                    g += next[k] * col[k];
                }
                for k in 0..=i {
                    col[k] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(n, k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n, n - 1, j)];
        v[at(n, n - 1, j)] = 0.0;
    }
    v[at(n, n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn tql2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64], vectors: bool) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::Convergence(format!(
                        "QL iteration for eigenvalue {l} exceeded {MAX_QL_ITERATIONS} sweeps"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if !vectors {
                        continue;
                    }
                    let (left, right) = v.split_at_mut((i + 1) * n);
                    let ci = &mut left[i * n..];
                    let ci1 = &mut right[..n];
                    for (a, b) in ci.iter_mut().zip(ci1.iter_mut()) {
                        let hk = *b;
                        *b = s * *a + c * hk;
                        *a = c * *a - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
