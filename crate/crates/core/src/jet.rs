//! Multivariate second-order jets: value, gradient and Hessian.
//!
//! `Jet2<F>` differentiates once and twice; `Jet2<Jet2<F>>` (both levels
//! seeded with the same variables) carries all partial derivatives up to
//! total order four, which is what exact curvature of a derived metric needs.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::{Real, Scalar};

/// Truncated Taylor expansion of order two in `n` variables. A jet with
/// `n == 0` is a constant and broadcasts against any dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<S: Scalar> {
    pub n: usize,
    pub v: S,
    /// Gradient, length `n`.
    pub g: Vec<S>,
    /// Hessian, row-major `n x n`, kept symmetric.
    pub h: Vec<S>,
}

impl<S: Scalar> Jet2<S> {
    pub fn constant(n: usize, v: S) -> Self {
        Jet2 {
            n,
            v,
            g: vec![S::zero(); n],
            h: vec![S::zero(); n * n],
        }
    }

    /// The `i`-th coordinate variable of an `n`-dimensional jet.
    pub fn var(n: usize, i: usize, v: S) -> Self {
        let mut j = Self::constant(n, v);
        j.g[i] = S::one();
        j
    }

    /// Seeds all coordinates of a point as jet variables.
    pub fn vars(vals: &[S]) -> Vec<Self> {
        let n = vals.len();
        vals.iter()
            .enumerate()
            .map(|(i, v)| Self::var(n, i, v.clone()))
            .collect()
    }

    /// One-dimensional variable, convenient for univariate derivatives.
    pub fn var1(v: S) -> Self {
        Self::var(1, 0, v)
    }

    pub fn grad(&self, i: usize) -> &S {
        &self.g[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> &S {
        &self.h[i * self.n + j]
    }

    /// Gradient entry, treating dimension-0 (constant) jets as zero.
    pub fn grad_at(&self, i: usize) -> S {
        if self.n == 0 {
            S::zero()
        } else {
            self.g[i].clone()
        }
    }

    /// Hessian entry, treating dimension-0 (constant) jets as zero.
    pub fn hess_at(&self, i: usize, j: usize) -> S {
        if self.n == 0 {
            S::zero()
        } else {
            self.h[i * self.n + j].clone()
        }
    }

    fn promote(&self, n: usize) -> Self {
        if self.n == n {
            self.clone()
        } else {
            debug_assert_eq!(self.n, 0, "jet dimension mismatch");
            Self::constant(n, self.v.clone())
        }
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let n = a.n.max(b.n);
        (a.promote(n), b.promote(n))
    }
}

impl<S: Scalar> Add for Jet2<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut a, b) = Jet2::unify(&self, &rhs);
        a.v = a.v + b.v;
        for (x, y) in a.g.iter_mut().zip(b.g) {
            *x = x.clone() + y;
        }
        for (x, y) in a.h.iter_mut().zip(b.h) {
            *x = x.clone() + y;
        }
        a
    }
}

impl<S: Scalar> Sub for Jet2<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for Jet2<S> {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.v = -self.v;
        for x in self.g.iter_mut() {
            *x = -x.clone();
        }
        for x in self.h.iter_mut() {
            *x = -x.clone();
        }
        self
    }
}

impl<S: Scalar> Mul for Jet2<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = Jet2::unify(&self, &rhs);
        let n = a.n;
        let mut out = Jet2::constant(n, a.v.clone() * b.v.clone());
        for i in 0..n {
            out.g[i] = a.g[i].clone() * b.v.clone() + b.g[i].clone() * a.v.clone();
        }
        for i in 0..n {
            for j in 0..n {
                out.h[i * n + j] = a.h[i * n + j].clone() * b.v.clone()
                    + b.h[i * n + j].clone() * a.v.clone()
                    + a.g[i].clone() * b.g[j].clone()
                    + a.g[j].clone() * b.g[i].clone();
            }
        }
        out
    }
}

impl<S: Scalar> Div for Jet2<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<S: Scalar> Scalar for Jet2<S> {
    type R = S::R;
    const ORDER: usize = S::ORDER + 2;

    fn from_real(x: S::R) -> Self {
        Jet2::constant(0, S::from_real(x))
    }

    fn value(&self) -> S::R {
        self.v.value()
    }
}

/// Derivatives `[f, f', f'', f''', f'''']` of a generic univariate function
/// at `t0`, obtained from one nested-jet evaluation.
pub fn uni_derivs<F: Real>(
    f: impl Fn(&Jet2<Jet2<F>>) -> Jet2<Jet2<F>>,
    t0: F,
) -> [F; 5] {
    let inner = Jet2::var1(t0);
    let outer = Jet2::var1(inner);
    let out = f(&outer);
    let d0 = out.v.v;
    let d1 = out.v.g[0];
    let d2 = out.v.h[0];
    // outer gradient is f' as an inner jet: its hessian holds f'''.
    let d3 = out.g[0].h[0];
    // outer hessian is f'' as an inner jet: its hessian holds f''''.
    let d4 = out.h[0].h[0];
    [d0, d1, d2, d3, d4]
}
