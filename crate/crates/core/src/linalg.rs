//! Small dense linear algebra over generic scalars.
//!
//! Matrices here are tiny (dimension <= 6), so everything is plain
//! Gauss/Jacobi with partial pivoting on the collapsed float values. Working
//! over [`Scalar`] lets the same inverse run on jet-valued metrics.

use crate::scalar::{Real, Scalar};

#[derive(Clone, Debug)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn mul_mat(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = S::zero();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting on the
    /// collapsed values. Returns `None` when a pivot collapses to ~0.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let mut piv = col;
            let mut best = a[(col, col)].value().abs();
            for r in col + 1..n {
                let mag = a[(r, col)].value().abs();
                if mag > best {
                    best = mag;
                    piv = r;
                }
            }
            if best.as_f64() < 1e-300 {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(col * n + j, piv * n + j);
                    inv.data.swap(col * n + j, piv * n + j);
                }
            }
            let d = a[(col, col)].clone().recip();
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() * d.clone();
                inv[(col, j)] = inv[(col, j)].clone() * d.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - factor.clone() * a[(col, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - factor.clone() * inv[(col, j)].clone();
                }
            }
        }
        Some(inv)
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

pub fn axpy<S: Scalar>(a: &S, x: &[S], y: &[S]) -> Vec<S> {
    x.iter()
        .zip(y)
        .map(|(xi, yi)| a.clone() * xi.clone() + yi.clone())
        .collect()
}

pub fn scale<S: Scalar>(a: &S, x: &[S]) -> Vec<S> {
    x.iter().map(|xi| a.clone() * xi.clone()).collect()
}

pub fn sub_vec<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    x.iter()
        .zip(y)
        .map(|(xi, yi)| xi.clone() - yi.clone())
        .collect()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn sym_eigenvalues<F: Real>(m: &Mat<F>) -> Vec<F> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    for _sweep in 0..64 {
        let mut off = F::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off + a[(i, j)] * a[(i, j)];
            }
        }
        if off.as_f64() < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs().as_f64() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (F::of(2.0) * apq);
                let t = {
                    let sign = if theta >= F::zero() { F::one() } else { -F::one() };
                    sign / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

/// Singular values via eigenvalues of M^T M.
pub fn singular_values<F: Real>(m: &Mat<F>) -> Vec<F> {
    let mtm = m.transpose().mul_mat(m);
    let mut ev = sym_eigenvalues(&mtm);
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev.into_iter()
        .map(|l| if l > F::zero() { l.sqrt() } else { F::zero() })
        .collect()
}

pub fn det<F: Real>(m: &Mat<F>) -> F {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut d = F::one();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[(r, col)].abs() > a[(piv, col)].abs() {
                piv = r;
            }
        }
        if a[(piv, col)].abs().as_f64() < 1e-300 {
            return F::zero();
        }
        if piv != col {
            for j in 0..n {
                a.data.swap(col * n + j, piv * n + j);
            }
            d = -d;
        }
        d = d * a[(col, col)];
        let inv = F::one() / a[(col, col)];
        for r in col + 1..n {
            let f = a[(r, col)] * inv;
            for j in col..n {
                let v = a[(col, j)];
                a[(r, j)] = a[(r, j)] - f * v;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet2;

    #[test]
    fn inverse_of_float_matrix() {
        let m = Mat {
            rows: 3,
            cols: 3,
            data: vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0],
        };
        let inv = m.inverse().unwrap();
        let id = m.mul_mat(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn inverse_works_on_jets() {
        // d/dx of (x I)^{-1} at x=2 is -1/4 I.
        let x = Jet2::var1(2.0f64);
        let m = Mat::from_fn(2, 2, |i, j| {
            if i == j {
                x.clone()
            } else {
                Jet2::constant(1, 0.0)
            }
        });
        let inv = m.inverse().unwrap();
        assert!((inv[(0, 0)].value() - 0.5).abs() < 1e-14);
        assert!((inv[(0, 0)].g[0] + 0.25).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_diag_like() {
        let m = Mat {
            rows: 2,
            cols: 2,
            data: vec![2.0, 1.0, 1.0, 2.0],
        };
        let mut ev = sym_eigenvalues(&m);
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_and_singular_values() {
        let m = Mat {
            rows: 2,
            cols: 2,
            data: vec![3.0, 0.0, 0.0, -2.0],
        };
        assert!((det(&m) + 6.0).abs() < 1e-13);
        let sv = singular_values(&m);
        assert!((sv[0] - 3.0).abs() < 1e-12 && (sv[1] - 2.0).abs() < 1e-12);
    }
}
