//! Generalized Robertson-Walker spaces `I x_f F` with constant-curvature
//! fibers: warp functions with exact derivatives and quadratures, the fiber
//! in geodesic polar coordinates (closed-form distance, position field,
//! exponential map at the chart center), and the assembled ambient metric.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{uni_derivs, Jet2};
use crate::linalg::Mat;
use crate::numerics::{quad, root};
use crate::scalar::{Real, Scalar};
use crate::tensor::MetricFamily;

/// Warp function `f > 0` on an open interval, with exact derivatives through
/// the scalar abstraction and closed-form integrals where available.
#[derive(Clone, Debug)]
pub enum Warp<F> {
    /// f = 1 (Minkowski, static products)
    One,
    /// f = cosh t on R
    Cosh,
    /// f = cos t on (-pi/2, pi/2)
    CosPortion,
    /// f = sech t on R (integral of 1/f diverges)
    Sech,
    /// Closed cosmological model: f(t) = a (1 - cos eta) with
    /// t = a (eta - sin eta), eta in (0, 2 pi). The integral of 1/f over the
    /// whole interval is exactly 2 pi.
    Cycloid { a: F },
    /// Polynomial in t with the given coefficients (constant term first).
    Poly(Vec<F>),
    /// Arbitrary expression in the variable `t`.
    Custom(Expr),
}

impl<F: Real> Warp<F> {
    pub fn eval<S: Scalar<R = F>>(&self, t: &S) -> S {
        match self {
            Warp::One => S::one(),
            Warp::Cosh => t.cosh(),
            Warp::CosPortion => t.cos(),
            Warp::Sech => t.cosh().recip(),
            Warp::Cycloid { a } => {
                let av = *a;
                let eta0 = cycloid_eta(av.as_f64(), t.value().as_f64());
                let aa = S::from_real(av);
                let eta = t.invert_via(
                    F::of(eta0),
                    |y: &S| aa.clone() * (y.clone() - y.sin()),
                    |y: &S| aa.clone() * (S::one() - y.cos()),
                );
                aa * (S::one() - eta.cos())
            }
            Warp::Poly(c) => {
                let mut acc = S::zero();
                for coeff in c.iter().rev() {
                    acc = acc * t.clone() + S::from_real(*coeff);
                }
                acc
            }
            Warp::Custom(e) => e.eval(&[("t", t.clone())]).expect("warp expression"),
        }
    }

    /// Value and first three derivatives of `f` at `t`.
    pub fn derivs(&self, t: F) -> [F; 5] {
        uni_derivs(|s| self.eval(s), t)
    }

    pub fn f(&self, t: F) -> F {
        self.eval(&t)
    }

    pub fn interval(&self) -> (F, F) {
        match self {
            Warp::One | Warp::Cosh | Warp::Sech => (F::neg_infinity(), F::infinity()),
            Warp::CosPortion => (F::of(-PI / 2.0), F::of(PI / 2.0)),
            Warp::Cycloid { a } => (F::zero(), F::of(2.0 * PI) * *a),
            Warp::Poly(_) | Warp::Custom(_) => (F::neg_infinity(), F::infinity()),
        }
    }

    /// Integral of f from t0 to t (exact where a closed form exists).
    pub fn f_int(&self, t0: F, t: F) -> F {
        match self {
            Warp::One => t - t0,
            Warp::Cosh => t.sinh() - t0.sinh(),
            Warp::CosPortion => t.sin() - t0.sin(),
            Warp::Sech => {
                // integral of sech = gd
                let gd = |x: F| x.tanh().asin();
                gd(t) - gd(t0)
            }
            Warp::Cycloid { a } => {
                let av = a.as_f64();
                let anti = |t: F| {
                    let eta = cycloid_eta(av, t.as_f64());
                    av * av * (1.5 * eta - 2.0 * eta.sin() + 0.25 * (2.0 * eta).sin())
                };
                F::of(anti(t) - anti(t0))
            }
            Warp::Poly(c) => {
                let anti = |x: F| {
                    let mut acc = F::zero();
                    for (k, coeff) in c.iter().enumerate() {
                        acc = acc + *coeff * x.powi(k as i32 + 1) / F::of(k as f64 + 1.0);
                    }
                    acc
                };
                anti(t) - anti(t0)
            }
            Warp::Custom(_) => F::of(quad::integrate(
                |x| self.f(F::of(x)).as_f64(),
                t0.as_f64(),
                t.as_f64(),
                1e-12,
            )),
        }
    }

    /// Integral of 1/f from t0 to t (exact where a closed form exists).
    pub fn finv_int(&self, t0: F, t: F) -> F {
        match self {
            Warp::One => t - t0,
            Warp::Cosh => {
                let gd = |x: F| x.tanh().asin();
                gd(t) - gd(t0)
            }
            Warp::CosPortion => {
                // integral of sec = inverse gd
                let gdi = |x: F| x.tan().asinh();
                gdi(t) - gdi(t0)
            }
            Warp::Sech => t.sinh() - t0.sinh(),
            Warp::Cycloid { a } => {
                let av = a.as_f64();
                F::of(cycloid_eta(av, t.as_f64()) - cycloid_eta(av, t0.as_f64()))
            }
            _ => F::of(quad::integrate(
                |x| self.f(F::of(x)).as_f64().recip(),
                t0.as_f64(),
                t.as_f64(),
                1e-12,
            )),
        }
    }

    /// Integral of 1/f over the whole interval; `None` when it diverges or
    /// cannot be evaluated reliably.
    pub fn finv_total(&self) -> Option<F> {
        match self {
            Warp::One | Warp::Sech | Warp::CosPortion => None,
            Warp::Cosh => Some(F::of(PI)),
            Warp::Cycloid { .. } => Some(F::of(2.0 * PI)),
            Warp::Poly(_) | Warp::Custom(_) => None,
        }
    }

    /// Solves `finv_int(t_star, t) = s` for t (signed s; s < 0 looks to the
    /// past of `t_star`).
    pub fn time_at_level(&self, t_star: F, s: F) -> Result<F> {
        let (lo, hi) = self.interval();
        let span = F::of(1e8);
        let lo = lo.max(t_star - span).as_f64();
        let hi = hi.min(t_star + span).as_f64();
        let margin = 1e-12;
        let tsf = t_star.as_f64();
        let sf = s.as_f64();
        let g = |t: f64| self.finv_int(t_star, F::of(t)).as_f64() - sf;
        let dir = if sf >= 0.0 { 1.0 } else { -1.0 };
        let limit = if dir > 0.0 { hi - margin } else { lo + margin };
        let (blo, bhi) = root::expand_bracket(g, tsf, dir * 1e-3, limit)
            .ok_or(Error::OutsideConeDomain { dist: sf })?;
        let t = root::newton_bracketed(
            g,
            |t| 1.0 / self.f(F::of(t)).as_f64(),
            blo,
            bhi,
            1e-13,
        )
        .ok_or(Error::OutsideConeDomain { dist: sf })?;
        Ok(F::of(t))
    }

    /// `time_at_level` lifted to jets: the inverse of `c(t) = int 1/f` has
    /// closed-form derivatives `(c^{-1})' = f o c^{-1}` and so on.
    pub fn time_at_level_jet<S: Scalar<R = F>>(&self, t_star: F, s: &S) -> Result<S> {
        let t0 = self.time_at_level(t_star, s.value())?;
        let d = self.derivs(t0);
        let (f, f1, f2, f3) = (d[0], d[1], d[2], d[3]);
        let table = [
            t0,
            f,
            f1 * f,
            f * (f * f2 + f1 * f1),
            f * (f * f * f3 + F::of(4.0) * f * f1 * f2 + f1 * f1 * f1),
        ];
        Ok(s.taylor_apply(&table))
    }
}

fn cycloid_eta(a: f64, t: f64) -> f64 {
    let t = t.clamp(1e-300, 2.0 * PI * a - 1e-300);
    root::newton_bracketed(
        |eta| a * (eta - eta.sin()) - t,
        |eta| a * (1.0 - eta.cos()),
        0.0,
        2.0 * PI,
        1e-14,
    )
    .expect("cycloid parameter")
}

/// Constant-curvature fiber in geodesic polar coordinates
/// `(r, theta_1, ..., theta_{m-1})` around a base point at r = 0.
#[derive(Clone, Debug)]
pub struct Fiber<F> {
    pub dim: usize,
    pub k: F,
}

impl<F: Real> Fiber<F> {
    pub fn new(dim: usize, k: F) -> Self {
        assert!(dim >= 2, "fiber dimension must be at least 2");
        Fiber { dim, k }
    }

    /// Polar chart radius bound (0.95 of the injectivity radius for k > 0).
    pub fn r_max(&self) -> F {
        if self.k.as_f64() > 0.0 {
            F::of(0.95 * PI) / self.k.sqrt()
        } else {
            F::infinity()
        }
    }

    /// sn_k(r): sin(sqrt k r)/sqrt k, r, or sinh(sqrt -k r)/sqrt -k.
    pub fn sn<S: Scalar<R = F>>(&self, r: &S) -> S {
        let k = self.k.as_f64();
        if k > 0.0 {
            let sq = S::from_real(self.k.sqrt());
            (sq.clone() * r.clone()).sin() / sq
        } else if k < 0.0 {
            let sq = S::from_real((-self.k).sqrt());
            (sq.clone() * r.clone()).sinh() / sq
        } else {
            r.clone()
        }
    }

    /// d/dr sn_k(r).
    pub fn sn_prime<S: Scalar<R = F>>(&self, r: &S) -> S {
        let k = self.k.as_f64();
        if k > 0.0 {
            (S::from_real(self.k.sqrt()) * r.clone()).cos()
        } else if k < 0.0 {
            (S::from_real((-self.k).sqrt()) * r.clone()).cosh()
        } else {
            S::one()
        }
    }

    /// sn_k' / sn_k, the radial logarithmic derivative (cot-like).
    pub fn ct<S: Scalar<R = F>>(&self, r: &S) -> S {
        self.sn_prime(r) / self.sn(r)
    }

    /// Unit direction on S^{m-1} from the chart angles.
    pub fn unit_dir<S: Scalar<R = F>>(&self, angles: &[S]) -> Vec<S> {
        let m = self.dim;
        debug_assert_eq!(angles.len(), m - 1);
        let mut out = Vec::with_capacity(m);
        let mut sin_prod = S::one();
        for a in angles.iter() {
            out.push(sin_prod.clone() * a.cos());
            sin_prod = sin_prod * a.sin();
        }
        out.push(sin_prod);
        out
    }

    /// Round-sphere diagonal factors for the angular part:
    /// `diag(1, sin^2 th_1, sin^2 th_1 sin^2 th_2, ...)`.
    pub fn round_factors<S: Scalar<R = F>>(&self, angles: &[S]) -> Vec<S> {
        let mut out = Vec::with_capacity(angles.len());
        let mut acc = S::one();
        for (j, a) in angles.iter().enumerate() {
            out.push(acc.clone());
            if j + 1 < angles.len() {
                let s = a.sin();
                acc = acc * s.clone() * s;
            }
        }
        out
    }

    /// Diagonal of the fiber metric at chart point `x = (r, angles)`.
    pub fn metric_diag<S: Scalar<R = F>>(&self, x: &[S]) -> Vec<S> {
        let r = &x[0];
        let sn2 = {
            let s = self.sn(r);
            s.clone() * s
        };
        let mut diag = Vec::with_capacity(self.dim);
        diag.push(S::one());
        for f in self.round_factors(&x[1..]) {
            diag.push(sn2.clone() * f);
        }
        diag
    }

    /// Embedding into flat space (R^m for k = 0, the sphere/hyperboloid of
    /// radius 1/sqrt|k| otherwise).
    pub fn embed<S: Scalar<R = F>>(&self, x: &[S]) -> Vec<S> {
        let r = &x[0];
        let u = self.unit_dir(&x[1..]);
        let k = self.k.as_f64();
        if k == 0.0 {
            return u.into_iter().map(|ui| ui * r.clone()).collect();
        }
        let rad = F::of(1.0) / self.k.abs().sqrt();
        let rr = S::from_real(rad);
        let arg = r.clone() / rr.clone();
        let (c, s) = if k > 0.0 {
            (arg.cos(), arg.sin())
        } else {
            (arg.cosh(), arg.sinh())
        };
        let mut out = Vec::with_capacity(self.dim + 1);
        out.push(rr.clone() * c);
        for ui in u {
            out.push(rr.clone() * s.clone() * ui);
        }
        out
    }

    /// Riemannian distance between two chart points.
    pub fn distance<S: Scalar<R = F>>(&self, x: &[S], y: &[S]) -> Result<S> {
        let k = self.k.as_f64();
        let ex = self.embed(x);
        let ey = self.embed(y);
        if k == 0.0 {
            let mut acc = S::zero();
            for (a, b) in ex.iter().zip(&ey) {
                let d = a.clone() - b.clone();
                acc = acc + d.clone() * d;
            }
            return Ok(acc.sqrt());
        }
        let rad2 = F::of(1.0) / self.k.abs();
        let rad = rad2.sqrt();
        if k > 0.0 {
            let mut dotp = S::zero();
            for (a, b) in ex.iter().zip(&ey) {
                dotp = dotp + a.clone() * b.clone();
            }
            let c = dotp / S::from_real(rad2);
            let cv = c.value().as_f64();
            if cv <= -1.0 + 1e-12 {
                return Err(Error::OutsideChart {
                    dist: PI * rad.as_f64(),
                    bound: PI * rad.as_f64(),
                });
            }
            Ok(c.acos() * S::from_real(rad))
        } else {
            // Lorentzian pairing on the hyperboloid model
            let mut dotp = -(ex[0].clone() * ey[0].clone());
            for (a, b) in ex.iter().skip(1).zip(ey.iter().skip(1)) {
                dotp = dotp + a.clone() * b.clone();
            }
            let c = -dotp / S::from_real(rad2);
            Ok(c.acosh() * S::from_real(rad))
        }
    }

    /// Local position vector field at `x_star`, in chart components at `x`:
    /// `P = d * (unit radial away from x_star) = 1/2 grad(d^2)` raised by the
    /// fiber metric.
    pub fn position_field<S: Scalar<R = F>>(&self, x_star: &[F], x: &[S]) -> Result<Vec<S>> {
        let m = self.dim;
        let star_is_center = x_star[0].as_f64().abs() < 1e-14;
        if star_is_center {
            // distance from the chart center is the radial coordinate
            let mut out = vec![S::zero(); m];
            out[0] = x[0].clone();
            return Ok(out);
        }
        let xj = Jet2::vars(x);
        let xsj: Vec<Jet2<S>> = x_star
            .iter()
            .map(|v| Jet2::constant(m, S::from_real(*v)))
            .collect();
        let d = self.distance(&xsj, &xj)?;
        let half_d2 = d.clone() * d * Jet2::from_real(F::of(0.5));
        let diag = self.metric_diag(x);
        Ok((0..m)
            .map(|i| half_d2.grad_at(i) / diag[i].clone())
            .collect())
    }

    /// Exponential map at the chart center: the point at distance `s` in the
    /// unit direction given by `angles`.
    pub fn exp_center(&self, s: F, angles: &[F]) -> Vec<F> {
        let mut out = Vec::with_capacity(self.dim);
        out.push(s);
        out.extend_from_slice(angles);
        out
    }

    pub fn polar_metric(&self) -> FiberPolarMetric<F> {
        FiberPolarMetric {
            fiber: self.clone(),
        }
    }
}

/// The fiber alone as a chart metric (used for fiber Hessians and the
/// position-field checks).
#[derive(Clone, Debug)]
pub struct FiberPolarMetric<F> {
    pub fiber: Fiber<F>,
}

impl<F: Real> MetricFamily<F> for FiberPolarMetric<F> {
    fn dim(&self) -> usize {
        self.fiber.dim
    }

    fn signature(&self) -> Vec<i8> {
        vec![1; self.fiber.dim]
    }

    fn components<S: Scalar<R = F>>(&self, p: &[S]) -> Mat<S> {
        let diag = self.fiber.metric_diag(p);
        let m = self.fiber.dim;
        Mat::from_fn(m, m, |i, j| if i == j { diag[i].clone() } else { S::zero() })
    }

    fn contains(&self, p: &[F]) -> bool {
        let r = p[0].as_f64();
        r > 0.0 && r < self.fiber.r_max().as_f64()
    }
}

/// The GRW spacetime `I x_f F`.
#[derive(Clone, Debug)]
pub struct GrwSpace<F> {
    pub interval: (F, F),
    pub warp: Warp<F>,
    pub fiber: Fiber<F>,
}

impl<F: Real> GrwSpace<F> {
    pub fn new(warp: Warp<F>, fiber: Fiber<F>) -> Self {
        let interval = warp.interval();
        GrwSpace {
            interval,
            warp,
            fiber,
        }
    }

    /// Ambient dimension n = 1 + dim F.
    pub fn n(&self) -> usize {
        1 + self.fiber.dim
    }

    pub fn minkowski(n: usize) -> Self {
        Self::new(Warp::One, Fiber::new(n - 1, F::zero()))
    }

    pub fn de_sitter(n: usize) -> Self {
        Self::new(Warp::Cosh, Fiber::new(n - 1, F::one()))
    }

    pub fn anti_de_sitter_portion(n: usize) -> Self {
        Self::new(Warp::CosPortion, Fiber::new(n - 1, -F::one()))
    }

    pub fn static_sphere(n: usize) -> Self {
        Self::new(Warp::One, Fiber::new(n - 1, F::one()))
    }

    pub fn friedmann_closed(n: usize, a: F) -> Self {
        Self::new(Warp::Cycloid { a }, Fiber::new(n - 1, F::one()))
    }

    /// Flat-fiber model carrying a totally umbilic lightlike graph that is
    /// not a lightcone (warp sech, so int 1/f diverges).
    pub fn umbilic_noncone_example(n: usize) -> Self {
        Self::new(Warp::Sech, Fiber::new(n - 1, F::zero()))
    }

    pub fn contains_t(&self, t: F) -> bool {
        t > self.interval.0 && t < self.interval.1
    }

    /// Ambient metric on the chart `(t, r, angles)`.
    pub fn metric(&self) -> GrwMetric<F> {
        GrwMetric {
            space: self.clone(),
        }
    }

    /// Ambient metric with the fiber in conformal coordinates; no polar
    /// degeneracy, used for long geodesic traces.
    pub fn conformal_metric(&self) -> ConformalGrwMetric<F> {
        ConformalGrwMetric {
            space: self.clone(),
        }
    }
}

/// `-dt^2 + f(t)^2 gF` on the polar chart `(t, r, theta...)`.
#[derive(Clone, Debug)]
pub struct GrwMetric<F> {
    pub space: GrwSpace<F>,
}

impl<F: Real> MetricFamily<F> for GrwMetric<F> {
    fn dim(&self) -> usize {
        self.space.n()
    }

    fn signature(&self) -> Vec<i8> {
        let mut s = vec![1; self.space.n()];
        s[0] = -1;
        s
    }

    fn components<S: Scalar<R = F>>(&self, p: &[S]) -> Mat<S> {
        let n = self.space.n();
        let f = self.space.warp.eval(&p[0]);
        let f2 = f.clone() * f;
        let fd = self.space.fiber.metric_diag(&p[1..]);
        Mat::from_fn(n, n, |i, j| {
            if i != j {
                S::zero()
            } else if i == 0 {
                -S::one()
            } else {
                f2.clone() * fd[i - 1].clone()
            }
        })
    }

    fn contains(&self, p: &[F]) -> bool {
        let r = p[1].as_f64();
        self.space.contains_t(p[0]) && r > 0.0 && r < self.space.fiber.r_max().as_f64()
    }
}

/// `-dt^2 + f(t)^2 lambda(x)^2 |dx|^2` with `lambda = 1/(1 + k |x|^2 / 4)`.
#[derive(Clone, Debug)]
pub struct ConformalGrwMetric<F> {
    pub space: GrwSpace<F>,
}

impl<F: Real> MetricFamily<F> for ConformalGrwMetric<F> {
    fn dim(&self) -> usize {
        self.space.n()
    }

    fn signature(&self) -> Vec<i8> {
        let mut s = vec![1; self.space.n()];
        s[0] = -1;
        s
    }

    fn components<S: Scalar<R = F>>(&self, p: &[S]) -> Mat<S> {
        let n = self.space.n();
        let f = self.space.warp.eval(&p[0]);
        let mut x2 = S::zero();
        for xi in &p[1..] {
            x2 = x2 + xi.clone() * xi.clone();
        }
        let k4 = S::from_real(self.space.fiber.k / F::of(4.0));
        let lam = (S::one() + k4 * x2).recip();
        let a = f.clone() * f * lam.clone() * lam;
        Mat::from_fn(n, n, |i, j| {
            if i != j {
                S::zero()
            } else if i == 0 {
                -S::one()
            } else {
                a.clone()
            }
        })
    }

    fn contains(&self, p: &[F]) -> bool {
        if !self.space.contains_t(p[0]) {
            return false;
        }
        let k = self.space.fiber.k.as_f64();
        if k < 0.0 {
            let x2: f64 = p[1..].iter().map(|x| x.as_f64() * x.as_f64()).sum();
            return x2 < 4.0 / (-k) - 1e-12;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::fd;
    use crate::tensor::{curvature_at, sectional};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn warp_derivatives_are_exact() {
        let w: Warp<f64> = Warp::Cosh;
        let d = w.derivs(0.8);
        assert!((d[0] - 0.8f64.cosh()).abs() < 1e-14);
        assert!((d[1] - 0.8f64.sinh()).abs() < 1e-14);
        assert!((d[2] - 0.8f64.cosh()).abs() < 1e-13);
        assert!((d[3] - 0.8f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn warp_integrals_match_quadrature() {
        let cases: Vec<Warp<f64>> = vec![
            Warp::Cosh,
            Warp::CosPortion,
            Warp::Sech,
            Warp::Poly(vec![2.0, 0.0, 0.5]),
            Warp::Custom(Expr::parse("2 + sin(t)").unwrap()),
        ];
        for w in cases {
            let (t0, t1) = (0.2, 0.9);
            let fi = w.f_int(t0, t1);
            let q = quad::integrate(|x| w.f(x), t0, t1, 1e-13);
            assert!((fi - q).abs() < 1e-11, "{w:?}: {fi} vs {q}");
            let fv = w.finv_int(t0, t1);
            let q = quad::integrate(|x| 1.0 / w.f(x), t0, t1, 1e-13);
            assert!((fv - q).abs() < 1e-11, "{w:?}: {fv} vs {q}");
        }
    }

    #[test]
    fn quadrature_primitives_are_monotone_and_consistent() {
        let w: Warp<f64> = Warp::Custom(Expr::parse("2 + sin(t)").unwrap());
        let mut prev_f = f64::NEG_INFINITY;
        let mut prev_fi = f64::NEG_INFINITY;
        for i in 0..20 {
            let t = -1.0 + 0.2 * i as f64;
            let a = w.f_int(0.0, t);
            let b = w.finv_int(0.0, t);
            assert!(a > prev_f && b > prev_fi);
            prev_f = a;
            prev_fi = b;
            // d/dt of the primitives
            let da = fd::d1(|x| w.f_int(0.0, x), t, 1e-5);
            assert!((da - w.f(t)).abs() < 1e-9);
            let db = fd::d1(|x| w.finv_int(0.0, x), t, 1e-5);
            assert!((db - 1.0 / w.f(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn cycloid_closed_forms() {
        let w: Warp<f64> = Warp::Cycloid { a: 1.0 };
        let (lo, hi) = w.interval();
        assert!((hi - 2.0 * PI).abs() < 1e-14 && lo == 0.0);
        // total integral of 1/f is exactly 2 pi
        let total = w.finv_int(1e-9, 2.0 * PI - 1e-9);
        assert!((total - 2.0 * PI).abs() < 1e-3);
        // interior consistency against quadrature
        let v = w.finv_int(1.0, 4.0);
        let q = quad::integrate(|x| 1.0 / w.f(x), 1.0, 4.0, 1e-13);
        assert!((v - q).abs() < 1e-10);
        let v = w.f_int(1.0, 4.0);
        let q = quad::integrate(|x| w.f(x), 1.0, 4.0, 1e-13);
        assert!((v - q).abs() < 1e-10);
        // derivatives flow through the implicit parametrization
        let d = w.derivs(2.0);
        let dd = fd::d1(|x| w.f(x), 2.0, 1e-5);
        assert!((d[1] - dd).abs() < 1e-9);
    }

    #[test]
    fn time_at_level_inverts_the_quadrature() {
        let w: Warp<f64> = Warp::Cosh;
        // de Sitter: c(t) = gd(t), so t(s) = gd^{-1}(s)
        let s = 0.7;
        let t = w.time_at_level(0.0, s).unwrap();
        assert!((t - (s.tan()).asinh()).abs() < 1e-12);
        // jets match the closed form asinh(tan s)
        let sj = Jet2::var1(s);
        let tj = w.time_at_level_jet(0.0, &sj).unwrap();
        let d = uni_derivs(|x: &Jet2<Jet2<f64>>| x.tan().asinh(), s);
        assert!((tj.value() - d[0]).abs() < 1e-12);
        assert!((tj.g[0] - d[1]).abs() < 1e-10);
        assert!((tj.h[0] - d[2]).abs() < 1e-9);
        // unreachable level errors out (sup of gd is pi/2)
        assert!(matches!(
            w.time_at_level(0.0, 1.6),
            Err(Error::OutsideConeDomain { .. })
        ));
    }

    #[test]
    fn fiber_distance_oracles() {
        let f: Fiber<f64> = Fiber::new(3, 1.0);
        // polar radius is the distance from the center
        let x = [1.2, 0.7, 0.3];
        let d = f.distance(&[0.0, 0.7, 0.3], &x).unwrap();
        assert!((d - 1.2).abs() < 1e-12);
        // same point
        let d = f.distance(&x, &x).unwrap();
        assert!(d.abs() < 1e-6);
        // two points at radius 0.5 separated by angle pi: great-circle dot
        // product oracle gives arccos(cos^2 0.5 - sin^2 0.5) = 1.0
        let a = [0.5, 0.4, 0.2];
        let b = [0.5, PI - 0.4, 0.2 + PI];
        let d = f.distance(&a, &b).unwrap();
        assert!((d - 1.0).abs() < 1e-12, "d = {d}");
    }

    #[test]
    fn position_field_radial_cases() {
        // k = 0, radius 2: radial vector of length 2
        let f: Fiber<f64> = Fiber::new(3, 0.0);
        let p = f.position_field(&[0.0, 0.3, 0.4], &[2.0, 0.3, 0.4]).unwrap();
        assert!((p[0] - 2.0).abs() < 1e-12 && p[1].abs() < 1e-12 && p[2].abs() < 1e-12);
        // norm is the distance also for an off-center base point
        let f: Fiber<f64> = Fiber::new(3, 1.0);
        let x_star = [0.4, 1.0, 0.5];
        let x = [0.9, 1.4, 1.1];
        let p = f.position_field(&x_star, &x).unwrap();
        let diag = f.metric_diag(&x);
        let norm2: f64 = (0..3).map(|i| diag[i] * p[i] * p[i]).sum();
        let d = f.distance(&x_star, &x).unwrap();
        assert!((norm2.sqrt() - d).abs() < 1e-10);
    }

    #[test]
    fn position_field_jacobi_derivative_check() {
        // For w orthogonal to the radial direction at x:
        // gF(nabla_w P, w) = sqrt(k) d cot(sqrt(k) d) |w|^2 (k > 0)
        // and the cothversion for k < 0; finite-difference covariant oracle.
        for k in [1.0f64, -1.0] {
            let f: Fiber<f64> = Fiber::new(3, k);
            let x = [0.8, 1.1, 0.6];
            let met = f.polar_metric();
            let bundle = curvature_at(&met, &x).unwrap();
            // w = unit vector along theta_1
            let diag = f.metric_diag(&x);
            let w = [0.0, 1.0 / diag[1].sqrt(), 0.0];
            // dP by Richardson FD of the chart components
            let mut dp = Mat::zeros(3, 3);
            for a in 0..3 {
                for b in 0..3 {
                    dp[(a, b)] = fd::d1(
                        |t| {
                            let mut q = x;
                            q[a] += t;
                            f.position_field(&[0.0, 0.0, 0.0], &q).unwrap()[b]
                        },
                        0.0,
                        1e-5,
                    );
                }
            }
            let p = f.position_field(&[0.0, 0.0, 0.0], &x).unwrap();
            // nabla_w P = w^a dP^b/dx^a + Gamma^b_{ac} w^a P^c
            let mut nab = [0.0; 3];
            for b in 0..3 {
                let mut acc = 0.0;
                for a in 0..3 {
                    acc += w[a] * dp[(a, b)];
                    for c in 0..3 {
                        acc += bundle.gamma_at(b, a, c) * w[a] * p[c];
                    }
                }
                nab[b] = acc;
            }
            let lhs: f64 = (0..3).map(|i| diag[i] * nab[i] * w[i]).sum();
            let d = x[0];
            let expected = if k > 0.0 {
                k.sqrt() * d * (k.sqrt() * d).cos() / (k.sqrt() * d).sin()
            } else {
                (-k).sqrt() * d * ((-k).sqrt() * d).cosh() / ((-k).sqrt() * d).sinh()
            };
            assert!(
                (lhs - expected).abs() < 1e-8,
                "k={k}: {lhs} vs {expected}"
            );
        }
    }

    #[test]
    fn ambient_constant_curvature_spaces() {
        // f = 1, k = 0: Minkowski in polar spatial coordinates
        let grw: GrwSpace<f64> = GrwSpace::minkowski(4);
        let b = curvature_at(&grw.metric(), &[0.3, 1.1, 0.9, 0.4]).unwrap();
        assert!(crate::tensor::norm_inf(&b.riem) < 1e-11);

        // f = cosh, k = 1: de Sitter, sectional curvature 1
        let grw: GrwSpace<f64> = GrwSpace::de_sitter(4);
        let b = curvature_at(&grw.metric(), &[0.3, 0.8, 1.2, 0.5]).unwrap();
        for (u, v) in [
            ([1.0, 0.2, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]),
            ([1.0, 0.0, 0.1, 0.0], [0.0, 0.3, 1.0, 0.2]),
            ([0.0, 1.0, 0.0, 0.3], [0.0, 0.0, 1.0, 1.0]),
        ] {
            let kap = sectional(&b, &u, &v).unwrap();
            assert!((kap - 1.0).abs() < 1e-9, "K = {kap}");
        }

        // f = cos on (-pi/2, pi/2), k = -1: anti-de Sitter portion, K = -1
        let grw: GrwSpace<f64> = GrwSpace::anti_de_sitter_portion(4);
        let b = curvature_at(&grw.metric(), &[0.2, 0.7, 1.0, 0.8]).unwrap();
        for (u, v) in [
            ([1.0, 0.2, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]),
            ([0.0, 1.0, 0.0, 0.3], [0.0, 0.0, 1.0, 1.0]),
        ] {
            let kap = sectional(&b, &u, &v).unwrap();
            assert!((kap + 1.0).abs() < 1e-9, "K = {kap}");
        }
        assert!(!grw.contains_t(FRAC_PI_2 + 0.1));
    }

    #[test]
    fn grw_ricci_time_time_closed_form() {
        // Ric(dt, dt) = -(n-1) f''/f; the 2 + sin t warp at several points.
        let w = Warp::Custom(Expr::parse("2 + sin(t)").unwrap());
        let grw = GrwSpace::new(w, Fiber::new(3, 0.0));
        for t in [0.0, FRAC_PI_2, 1.0] {
            let b = curvature_at(&grw.metric(), &[t, 0.9, 1.0, 1.2]).unwrap();
            let f = 2.0 + t.sin();
            let fpp = -t.sin();
            let expected = -3.0 * fpp / f;
            assert!(
                (b.ric[(0, 0)] - expected).abs() < 1e-9,
                "t={t}: {} vs {expected}",
                b.ric[(0, 0)]
            );
        }
    }

    #[test]
    fn grw_null_ricci_closed_form() {
        // Ric(gamma', gamma') = (n-2)(k + f'^2 - f f'')/f^4 for the null
        // vector (1/f) dt + beta' with |beta'|_F = 1/f^2.
        let spaces: Vec<GrwSpace<f64>> = vec![
            GrwSpace::friedmann_closed(4, 1.0),
            GrwSpace::de_sitter(4),
            GrwSpace::new(
                Warp::Custom(Expr::parse("2 + sin(t)").unwrap()),
                Fiber::new(3, 0.0),
            ),
            GrwSpace::static_sphere(4),
        ];
        for grw in spaces {
            let t = if matches!(grw.warp, Warp::Cycloid { .. }) {
                2.0
            } else {
                0.4
            };
            let p = [t, 0.8, 1.1, 0.7];
            let b = curvature_at(&grw.metric(), &p).unwrap();
            let d = grw.warp.derivs(t);
            let (f, f1, f2) = (d[0], d[1], d[2]);
            let k = grw.fiber.k;
            // null direction: radial in the fiber
            let gamma = [1.0 / f, 1.0 / (f * f), 0.0, 0.0];
            let mut ric = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    ric += b.ric[(i, j)] * gamma[i] * gamma[j];
                }
            }
            let expected = 2.0 * (k + f1 * f1 - f * f2) / f.powi(4);
            assert!(
                (ric - expected).abs() < 1e-7 * (1.0 + expected.abs()),
                "{:?}: {ric} vs {expected}",
                grw.warp
            );
        }
    }

    #[test]
    fn polar_metric_positive_definite_on_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let fibers: Vec<Fiber<f64>> = vec![
            Fiber::new(3, 1.0),
            Fiber::new(3, 0.0),
            Fiber::new(3, -1.0),
            Fiber::new(4, 1.0),
        ];
        for f in fibers {
            let met = f.polar_metric();
            let rmax = f.r_max().min(6.0);
            for _ in 0..50 {
                let mut x = vec![rng.gen_range(0.05..rmax * 0.98)];
                for j in 0..f.dim - 1 {
                    if j + 2 < f.dim {
                        x.push(rng.gen_range(0.2..PI - 0.2));
                    } else {
                        x.push(rng.gen_range(-PI + 0.2..PI - 0.2));
                    }
                }
                let g = met.components(&x);
                let ev = crate::linalg::sym_eigenvalues(&g);
                assert!(ev.iter().all(|e| *e > 0.0), "non-PD at {x:?}");
            }
        }
    }

    #[test]
    fn conformal_chart_matches_polar_curvature() {
        // same de Sitter space in the two fiber charts: sectional is 1 in both
        let grw: GrwSpace<f64> = GrwSpace::de_sitter(4);
        let b = curvature_at(&grw.conformal_metric(), &[0.3, 0.7, -0.2, 0.4]).unwrap();
        for (u, v) in [
            ([1.0, 0.2, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]),
            ([0.0, 1.0, 0.0, 0.3], [0.0, 0.0, 1.0, 1.0]),
        ] {
            let kap = sectional(&b, &u, &v).unwrap();
            assert!((kap - 1.0).abs() < 1e-9, "K = {kap}");
        }
    }
}
