//! Dense symmetric / Hermitian eigenvalues: Householder reduction to real
//! tridiagonal form followed by implicitly shifted QL.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Copy + Default> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::default(); n * n] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }
}

/// Symmetric tridiagonal matrix: diagonal `d`, off-diagonal `e` with
/// `e[i]` coupling rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

/// Householder reduction of a real symmetric matrix (consumed).
pub fn tridiagonalize_symmetric(mut a: Matrix<f64>) -> Tridiagonal {
    let n = a.n;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        d[k] = a.get(k, k);
        let m = n - k - 1;
        let mut norm2 = 0.0;
        for i in 0..m {
            let x = a.get(k + 1 + i, k);
            v[i] = x;
            norm2 += x * x;
        }
        let norm = norm2.sqrt();
        if m == 1 || norm == 0.0 {
            e[k] = a.get(k + 1, k);
            continue;
        }
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vn = (norm2 - 2.0 * alpha * (v[0] + alpha) + alpha * alpha).sqrt();
        if vn == 0.0 {
            e[k] = a.get(k + 1, k);
            continue;
        }
        for x in v[..m].iter_mut() {
            *x /= vn;
        }
        e[k] = alpha;
        // p = B v, K = v'p, w = p - K v, B <- B - 2 (v w' + w v')
        let off = k + 1;
        let mut kk = 0.0;
        for i in 0..m {
            let row = &a.data[(off + i) * n + off..(off + i) * n + n];
            let s: f64 = row.iter().zip(&v[..m]).map(|(b, x)| b * x).sum();
            p[i] = s;
            kk += v[i] * s;
        }
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a.data[(off + i) * n + off..(off + i) * n + n];
            for ((b, &vj), &wj) in row.iter_mut().zip(&v[..m]).zip(&p[..m]) {
                *b -= 2.0 * (vi * wj + wi * vj);
            }
        }
    }
    if n > 0 {
        d[n - 1] = a.get(n - 1, n - 1);
    }
    Tridiagonal { d, e }
}

/// Householder reduction of a complex Hermitian matrix (consumed). The
/// complex sub-diagonal is replaced by its modulus, which is a diagonal
/// unitary similarity.
pub fn tridiagonalize_hermitian(mut a: Matrix<Complex64>) -> Tridiagonal {
    let n = a.n;
    let zero = Complex64::new(0.0, 0.0);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(1) {
        d[k] = a.get(k, k).re;
        let m = n - k - 1;
        let mut norm2 = 0.0;
        for i in 0..m {
            let x = a.get(k + 1 + i, k);
            v[i] = x;
            norm2 += x.norm_sqr();
        }
        let norm = norm2.sqrt();
        if m == 1 || norm == 0.0 {
            e[k] = a.get(k + 1, k).norm();
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        v[0] -= alpha;
        let vn = v[..m].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            e[k] = a.get(k + 1, k).norm();
            continue;
        }
        for x in v[..m].iter_mut() {
            *x /= vn;
        }
        e[k] = norm;
        let off = k + 1;
        let mut kk = 0.0;
        for i in 0..m {
            let row = &a.data[(off + i) * n + off..(off + i) * n + n];
            let mut s = zero;
            for (b, x) in row.iter().zip(&v[..m]) {
                s += b * x;
            }
            p[i] = s;
            kk += (v[i].conj() * s).re;
        }
        for i in 0..m {
            p[i] -= v[i] * kk;
        }
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a.data[(off + i) * n + off..(off + i) * n + n];
            for ((b, vj), wj) in row.iter_mut().zip(&v[..m]).zip(&p[..m]) {
                *b -= (vi * wj.conj() + wi * vj.conj()) * 2.0;
            }
        }
    }
    if n > 0 {
        d[n - 1] = a.get(n - 1, n - 1).re;
    }
    Tridiagonal { d, e }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts, sorted ascending.
pub fn tridiagonal_eigenvalues(t: &Tridiagonal) -> Result<Vec<f64>> {
    let n = t.d.len();
    let mut d = t.d.clone();
    let mut e = t.e.clone();
    e.push(0.0);
    let max_iter = 30 * n.max(1);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > max_iter {
                return Err(Error::Numerical(format!(
                    "QL iteration did not converge for eigenvalue {l} of {n}"
                )));
            }
            // Wilkinson shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

pub fn symmetric_eigenvalues(a: Matrix<f64>) -> Result<Vec<f64>> {
    tridiagonal_eigenvalues(&tridiagonalize_symmetric(a))
}

pub fn hermitian_eigenvalues(a: Matrix<Complex64>) -> Result<Vec<f64>> {
    tridiagonal_eigenvalues(&tridiagonalize_hermitian(a))
}

/// Determinant by LU with partial pivoting (consumes the matrix).
pub fn determinant(mut a: Matrix<f64>) -> f64 {
    let n = a.n;
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = a.get(k, k).abs();
        for i in k + 1..n {
            let v = a.get(i, k).abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != k {
            for j in 0..n {
                a.data.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let akk = a.get(k, k);
        det *= akk;
        for i in k + 1..n {
            let f = a.get(i, k) / akk;
            if f != 0.0 {
                for j in k + 1..n {
                    a.data[i * n + j] -= f * a.data[k * n + j];
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym_from(n: usize, vals: &[f64]) -> Matrix<f64> {
        let mut a = Matrix::zeros(n);
        let mut k = 0;
        for i in 0..n {
            for j in 0..=i {
                a.set(i, j, vals[k]);
                a.set(j, i, vals[k]);
                k += 1;
            }
        }
        a
    }

    #[test]
    fn known_spectrum() {
        // second-difference matrix: 2 - 2 cos(k pi / (n + 1))
        let n = 12;
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            a.set(i, i, 2.0);
            if i + 1 < n {
                a.set(i, i + 1, -1.0);
                a.set(i + 1, i, -1.0);
            }
        }
        let ev = symmetric_eigenvalues(a).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn hermitian_matches_real_embedding() {
        // H = A + iB has the spectrum of [[A, -B], [B, A]] with each value doubled
        let n = 6;
        let mut h = Matrix::zeros(n);
        let mut big = Matrix::zeros(2 * n);
        for i in 0..n {
            for j in 0..=i {
                let re = ((i * 7 + j * 3) % 11) as f64 / 5.0 - 1.0;
                let im = if i == j { 0.0 } else { ((i * 5 + j) % 7) as f64 / 3.0 - 1.0 };
                h.set(i, j, Complex64::new(re, im));
                h.set(j, i, Complex64::new(re, -im));
                for (r, c, v) in [(i, j, re), (j, i, re)] {
                    big.set(r, c, v);
                    big.set(r + n, c + n, v);
                }
                big.set(i + n, j, im);
                big.set(j + n, i, -im);
                big.set(j, i + n, im);
                big.set(i, j + n, -im);
            }
        }
        let a = hermitian_eigenvalues(h).unwrap();
        let b = symmetric_eigenvalues(big).unwrap();
        for (k, v) in a.iter().enumerate() {
            assert!((v - b[2 * k]).abs() < 1e-12 && (v - b[2 * k + 1]).abs() < 1e-12);
        }
    }

    #[test]
    fn determinant_of_small_matrix() {
        let a = Matrix { n: 3, data: vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0] };
        assert!((determinant(a) + 5.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn trace_and_frobenius_are_preserved(vals in proptest::collection::vec(-5.0f64..5.0, 36)) {
            let n = 8;
            let a = sym_from(n, &vals);
            let trace: f64 = (0..n).map(|i| a.get(i, i)).sum();
            let frob: f64 = a.data.iter().map(|x| x * x).sum();
            let ev = symmetric_eigenvalues(a).unwrap();
            prop_assert!((ev.iter().sum::<f64>() - trace).abs() < 1e-10);
            prop_assert!((ev.iter().map(|x| x * x).sum::<f64>() - frob).abs() < 1e-9 * frob.max(1.0));
            prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
