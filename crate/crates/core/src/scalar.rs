//! Scalar abstraction shared by plain floats and truncated-Taylor jets.
//!
//! Every smooth function in this crate (warp functions, graph functions,
//! metric components, embeddings) is written once against [`Scalar`] and can
//! then be evaluated on `f64`, on second-order jets, or on nested jets when
//! higher derivatives of a composite are needed. Elementary functions are
//! provided through local Taylor tables around the collapsed float value of
//! the argument: the deviation `self - value` is nilpotent in a truncated jet
//! algebra, so a short Horner sum is exact to the jet order.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Float, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
    fn as_f64(self) -> f64;
}

impl Real for f32 {
    fn as_f64(self) -> f64 {
        self as f64
    }
}
impl Real for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}

/// Maximum derivative order carried by any scalar used in this crate.
/// Second-order jets nested once give total order 4.
pub const MAX_ORDER: usize = 4;

/// Ring element with a distinguished float value, closed under the smooth
/// functions listed below.
pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Sized
{
    type R: Real;

    /// Truncation order: 0 for floats, `inner + 2` for a jet level.
    const ORDER: usize;

    fn from_real(x: Self::R) -> Self;

    /// Fully collapsed float value (all derivative parts dropped).
    fn value(&self) -> Self::R;

    fn lit(x: f64) -> Self {
        Self::from_real(Self::R::of(x))
    }

    fn zero() -> Self {
        Self::lit(0.0)
    }

    fn one() -> Self {
        Self::lit(1.0)
    }

    /// Applies a univariate function given by its derivative table
    /// `table[k] = f^{(k)}(c)` at `c = self.value()`.
    fn taylor_apply(&self, table: &[Self::R; MAX_ORDER + 1]) -> Self {
        let order = Self::ORDER.min(MAX_ORDER);
        let delta = self.clone() - Self::from_real(self.value());
        // Horner over k!-normalized coefficients.
        let mut fact = Self::R::one();
        let mut coeff = [Self::R::zero(); MAX_ORDER + 1];
        for (k, c) in coeff.iter_mut().enumerate().take(order + 1) {
            if k > 0 {
                fact = fact * Self::R::of(k as f64);
            }
            *c = table[k] / fact;
        }
        let mut acc = Self::from_real(coeff[order]);
        for k in (0..order).rev() {
            acc = acc * delta.clone() + Self::from_real(coeff[k]);
        }
        acc
    }

    fn recip(&self) -> Self {
        let c = self.value();
        let c2 = c * c;
        let c3 = c2 * c;
        let c4 = c2 * c2;
        let c5 = c4 * c;
        self.taylor_apply(&[
            c.recip(),
            -c2.recip(),
            Self::R::of(2.0) / c3,
            Self::R::of(-6.0) / c4,
            Self::R::of(24.0) / c5,
        ])
    }

    fn sqrt(&self) -> Self {
        let c = self.value();
        let s = c.sqrt();
        let half = Self::R::of(0.5);
        let d1 = half / s;
        let d2 = -half * half / (s * c);
        let d3 = Self::R::of(0.375) / (s * c * c);
        let d4 = Self::R::of(-0.9375) / (s * c * c * c);
        self.taylor_apply(&[s, d1, d2, d3, d4])
    }

    fn exp(&self) -> Self {
        let e = self.value().exp();
        self.taylor_apply(&[e, e, e, e, e])
    }

    fn ln(&self) -> Self {
        let c = self.value();
        let c2 = c * c;
        self.taylor_apply(&[
            c.ln(),
            c.recip(),
            -c2.recip(),
            Self::R::of(2.0) / (c2 * c),
            Self::R::of(-6.0) / (c2 * c2),
        ])
    }

    fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.taylor_apply(&[s, c, -s, -c, s])
    }

    fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.taylor_apply(&[c, -s, -c, s, c])
    }

    fn tan(&self) -> Self {
        self.sin() / self.cos()
    }

    fn sinh(&self) -> Self {
        let s = self.value().sinh();
        let c = self.value().cosh();
        self.taylor_apply(&[s, c, s, c, s])
    }

    fn cosh(&self) -> Self {
        let s = self.value().sinh();
        let c = self.value().cosh();
        self.taylor_apply(&[c, s, c, s, c])
    }

    fn tanh(&self) -> Self {
        self.sinh() / self.cosh()
    }

    /// Integer power by repeated multiplication (valid at any value).
    fn powi(&self, k: i32) -> Self {
        if k < 0 {
            return self.powi(-k).recip();
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    fn powf(&self, a: Self::R) -> Self {
        (self.ln() * Self::from_real(a)).exp()
    }

    fn abs(&self) -> Self {
        if self.value() < Self::R::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Solves `f(y) = self` in the truncated algebra by Newton iteration
    /// seeded at the float-level solution `y0`. Convergence is quadratic in
    /// the nilpotent ideal, so a fixed iteration count is exact.
    fn invert_via<Ff, Fd>(&self, y0: Self::R, f: Ff, df: Fd) -> Self
    where
        Ff: Fn(&Self) -> Self,
        Fd: Fn(&Self) -> Self,
    {
        let mut y = Self::from_real(y0);
        // order <= 4 needs 3 iterations; one extra for headroom.
        for _ in 0..4 {
            let step = (f(&y) - self.clone()) * df(&y).recip();
            y = y - step;
        }
        y
    }

    fn asin(&self) -> Self {
        self.invert_via(self.value().asin(), |y| y.sin(), |y| y.cos())
    }

    fn acos(&self) -> Self {
        Self::lit(std::f64::consts::FRAC_PI_2) - self.asin()
    }

    fn atan(&self) -> Self {
        self.invert_via(self.value().atan(), |y| y.tan(), |y| {
            let c = y.cos();
            (c.clone() * c).recip()
        })
    }

    fn asinh(&self) -> Self {
        self.invert_via(self.value().asinh(), |y| y.sinh(), |y| y.cosh())
    }

    fn acosh(&self) -> Self {
        self.invert_via(self.value().acosh(), |y| y.cosh(), |y| y.sinh())
    }

    fn atanh(&self) -> Self {
        self.invert_via(self.value().atanh(), |y| y.tanh(), |y| {
            let c = y.cosh();
            (c.clone() * c).recip()
        })
    }
}

impl<F: Real> Scalar for F {
    type R = F;
    const ORDER: usize = 0;

    fn from_real(x: F) -> Self {
        x
    }

    fn value(&self) -> F {
        *self
    }
}

/// Gudermannian function gd(t) = asin(tanh t).
pub fn gd<S: Scalar>(t: &S) -> S {
    t.tanh().asin()
}

/// Inverse Gudermannian gd^{-1}(x) = asinh(tan x).
pub fn gd_inv<S: Scalar>(x: &S) -> S {
    x.tan().asinh()
}
