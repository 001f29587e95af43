//! Chart-level pseudo-Riemannian curvature.
//!
//! A metric family exposes its components generically over [`Scalar`], so the
//! same definition is evaluated on floats, on jets (exact first and second
//! derivatives of the metric, hence exact Christoffel symbols and curvature)
//! and on jets-of-jets (curvature as a differentiable field along a
//! hypersurface). The curvature convention is
//! `R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W - nabla_{[U,V]} W`
//! with components `R(e_k, e_l) e_j = R^i_{jkl} e_i` and `Ric_{jl} = R^i_{jil}`.

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::linalg::{dot, sym_eigenvalues, Mat};
use crate::numerics::fd;
use crate::scalar::{Real, Scalar};

/// A pseudo-Riemannian metric given by components on a coordinate chart.
pub trait MetricFamily<F: Real> {
    fn dim(&self) -> usize;

    /// Diagonal signs of the metric, e.g. `[-1, 1, 1, 1]`.
    fn signature(&self) -> Vec<i8>;

    /// Symmetric matrix of components at `p`.
    fn components<S: Scalar<R = F>>(&self, p: &[S]) -> Mat<S>;

    /// Chart domain check.
    fn contains(&self, p: &[F]) -> bool {
        let _ = p;
        true
    }
}

/// Constant diagonal metric (flat charts, product test spaces).
#[derive(Clone, Debug)]
pub struct ConstDiagMetric<F> {
    pub diag: Vec<F>,
}

impl<F: Real> MetricFamily<F> for ConstDiagMetric<F> {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn signature(&self) -> Vec<i8> {
        self.diag
            .iter()
            .map(|d| if *d < F::zero() { -1 } else { 1 })
            .collect()
    }

    fn components<S: Scalar<R = F>>(&self, p: &[S]) -> Mat<S> {
        let n = self.diag.len();
        debug_assert_eq!(p.len(), n);
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                S::from_real(self.diag[i])
            } else {
                S::zero()
            }
        })
    }
}

/// Christoffel symbols, curvature, Ricci and scalar curvature at a point,
/// over any scalar type (floats or jet fields).
#[derive(Clone, Debug)]
pub struct CurvatureBundle<S> {
    pub n: usize,
    pub g: Mat<S>,
    pub ginv: Mat<S>,
    /// `Gamma^i_{jk}`, flattened `(i*n + j)*n + k`.
    pub gamma: Vec<S>,
    /// `R^i_{jkl}`, flattened `((i*n + j)*n + k)*n + l`.
    pub riem: Vec<S>,
    pub ric: Mat<S>,
    pub scal: S,
}

impl<S: Scalar> CurvatureBundle<S> {
    pub fn gamma_at(&self, i: usize, j: usize, k: usize) -> &S {
        &self.gamma[(i * self.n + j) * self.n + k]
    }

    pub fn riem_at(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        &self.riem[((i * self.n + j) * self.n + k) * self.n + l]
    }

    /// `R(u, v) w` as a vector: `R^i_{jkl} w^j u^k v^l`.
    pub fn riem_apply(&self, u: &[S], v: &[S], w: &[S]) -> Vec<S> {
        let n = self.n;
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            let mut acc = S::zero();
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        acc = acc
                            + self.riem_at(i, j, k, l).clone()
                                * w[j].clone()
                                * u[k].clone()
                                * v[l].clone();
                    }
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn inner(&self, u: &[S], v: &[S]) -> S {
        let mut acc = S::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc = acc + self.g[(i, j)].clone() * u[i].clone() * v[j].clone();
            }
        }
        acc
    }
}

fn assemble<S: Scalar>(
    n: usize,
    g: Mat<S>,
    dg: &[S],  // dg[(m*n + a)*n + b] = d_m g_{ab}
    d2g: &[S], // d2g[((m*n + q)*n + a)*n + b] = d_m d_q g_{ab}
) -> Option<CurvatureBundle<S>> {
    let ginv = g.inverse()?;
    let idg = |m: usize, a: usize, b: usize| (m * n + a) * n + b;
    let id2g = |m: usize, q: usize, a: usize, b: usize| ((m * n + q) * n + a) * n + b;

    // Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{jl} - d_l g_{jk})
    let half = S::lit(0.5);
    let mut gamma = vec![S::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = S::zero();
                for l in 0..n {
                    let br = dg[idg(j, l, k)].clone() + dg[idg(k, j, l)].clone()
                        - dg[idg(l, j, k)].clone();
                    acc = acc + ginv[(i, l)].clone() * br;
                }
                gamma[(i * n + j) * n + k] = half.clone() * acc;
            }
        }
    }

    // d_m g^{il} = -g^{ia} (d_m g_{ab}) g^{bl}
    let mut dginv = vec![S::zero(); n * n * n];
    for m in 0..n {
        for i in 0..n {
            for l in 0..n {
                let mut acc = S::zero();
                for a in 0..n {
                    for b in 0..n {
                        acc = acc
                            + ginv[(i, a)].clone()
                                * dg[idg(m, a, b)].clone()
                                * ginv[(b, l)].clone();
                    }
                }
                dginv[(m * n + i) * n + l] = -acc;
            }
        }
    }

    // d_m Gamma^i_{jk}
    let mut dgamma = vec![S::zero(); n * n * n * n];
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = S::zero();
                    for l in 0..n {
                        let br = dg[idg(j, l, k)].clone() + dg[idg(k, j, l)].clone()
                            - dg[idg(l, j, k)].clone();
                        let dbr = d2g[id2g(m, j, l, k)].clone()
                            + d2g[id2g(m, k, j, l)].clone()
                            - d2g[id2g(m, l, j, k)].clone();
                        acc = acc
                            + dginv[(m * n + i) * n + l].clone() * br
                            + ginv[(i, l)].clone() * dbr;
                    }
                    dgamma[((m * n + i) * n + j) * n + k] = half.clone() * acc;
                }
            }
        }
    }

    // R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
    //           + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
    let ig = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut riem = vec![S::zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = dgamma[((k * n + i) * n + l) * n + j].clone()
                        - dgamma[((l * n + i) * n + k) * n + j].clone();
                    for m in 0..n {
                        acc = acc + gamma[ig(i, k, m)].clone() * gamma[ig(m, l, j)].clone()
                            - gamma[ig(i, l, m)].clone() * gamma[ig(m, k, j)].clone();
                    }
                    riem[((i * n + j) * n + k) * n + l] = acc;
                }
            }
        }
    }

    let ric = Mat::from_fn(n, n, |j, l| {
        let mut acc = S::zero();
        for i in 0..n {
            acc = acc + riem[((i * n + j) * n + i) * n + l].clone();
        }
        acc
    });
    let mut scal = S::zero();
    for j in 0..n {
        for l in 0..n {
            scal = scal + ginv[(j, l)].clone() * ric[(j, l)].clone();
        }
    }

    Some(CurvatureBundle {
        n,
        g,
        ginv,
        gamma,
        riem,
        ric,
        scal,
    })
}

/// Curvature over any scalar type by evaluating the metric on jets one level
/// up, so every derivative is exact to the scalar's own order.
pub fn curvature_generic<F, S, M>(metric: &M, p: &[S]) -> Option<CurvatureBundle<S>>
where
    F: Real,
    S: Scalar<R = F>,
    M: MetricFamily<F> + ?Sized,
{
    let n = metric.dim();
    let pj = Jet2::vars(p);
    let gj = metric.components(&pj);
    let g = Mat::from_fn(n, n, |a, b| gj[(a, b)].v.clone());
    let mut dg = vec![S::zero(); n * n * n];
    let mut d2g = vec![S::zero(); n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for m in 0..n {
                dg[(m * n + a) * n + b] = gj[(a, b)].grad_at(m);
                for q in 0..n {
                    d2g[((m * n + q) * n + a) * n + b] = gj[(a, b)].hess_at(m, q);
                }
            }
        }
    }
    assemble(n, g, &dg, &d2g)
}

/// Float-level curvature with domain and degeneracy checks.
pub fn curvature_at<F, M>(metric: &M, p: &[F]) -> Result<CurvatureBundle<F>>
where
    F: Real,
    M: MetricFamily<F> + ?Sized,
{
    if !metric.contains(p) {
        return Err(Error::OutsideDomain {
            point: p.iter().map(|x| x.as_f64()).collect(),
        });
    }
    curvature_generic(metric, p).ok_or_else(|| Error::DegenerateMetric {
        point: p.iter().map(|x| x.as_f64()).collect(),
    })
}

/// Curvature with all metric derivatives taken by Richardson finite
/// differences: the independent cross-validation route.
pub fn curvature_fd<M>(metric: &M, p: &[f64]) -> Result<CurvatureBundle<f64>>
where
    M: MetricFamily<f64> + ?Sized,
{
    let n = metric.dim();
    if !metric.contains(p) {
        return Err(Error::OutsideDomain { point: p.to_vec() });
    }
    let comp = |p: &[f64], a: usize, b: usize| metric.components(p)[(a, b)];
    let g = metric.components(p);
    let mut dg = vec![0.0; n * n * n];
    let mut d2g = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for m in 0..n {
                let f1 = |t: f64| {
                    let mut q = p.to_vec();
                    q[m] += t;
                    comp(&q, a, b)
                };
                dg[(m * n + a) * n + b] = fd::d1(f1, 0.0, fd::FD_STEP_1);
                for q in 0..n {
                    d2g[((m * n + q) * n + a) * n + b] =
                        fd::d2_mixed(|x| comp(x, a, b), p, m, q, fd::FD_STEP_2);
                }
            }
        }
    }
    assemble(n, g, &dg, &d2g).ok_or_else(|| Error::DegenerateMetric { point: p.to_vec() })
}

/// Sectional curvature of the plane spanned by `u`, `v`.
pub fn sectional<F: Real>(bundle: &CurvatureBundle<F>, u: &[F], v: &[F]) -> Result<F> {
    let guu = bundle.inner(u, u);
    let gvv = bundle.inner(v, v);
    let guv = bundle.inner(u, v);
    let gram = guu * gvv - guv * guv;
    if gram.abs().as_f64() <= 1e-10 {
        return Err(Error::DegeneratePlane {
            gram: gram.as_f64(),
        });
    }
    let rv = bundle.riem_apply(u, v, v);
    Ok(bundle.inner(&rv, u) / gram)
}

/// Lightlike sectional curvature of the degenerate plane `span(xi, x)` with
/// respect to the null vector `xi`: `g(R(x, xi) xi, x) / g(x, x)`.
pub fn lightlike_sectional<F: Real>(bundle: &CurvatureBundle<F>, xi: &[F], x: &[F]) -> Result<F> {
    let gxx = bundle.inner(x, x);
    let gxixi = bundle.inner(xi, xi);
    let gxix = bundle.inner(xi, x);
    if gxixi.abs().as_f64() > 1e-10 {
        return Err(Error::NotLightlike {
            norm: gxixi.as_f64(),
        });
    }
    if gxx.as_f64() <= 0.0 {
        return Err(Error::DegeneratePlane { gram: gxx.as_f64() });
    }
    if gxix.abs().as_f64() > 1e-10 {
        return Err(Error::NotLightlikePlane {
            inner: gxix.as_f64(),
        });
    }
    let r = bundle.riem_apply(x, xi, xi);
    Ok(bundle.inner(&r, x) / gxx)
}

/// Max residual of the first Bianchi identity.
pub fn bianchi_residual<F: Real>(b: &CurvatureBundle<F>) -> F {
    let n = b.n;
    let mut worst = F::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let s =
                        *b.riem_at(i, j, k, l) + *b.riem_at(i, k, l, j) + *b.riem_at(i, l, j, k);
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// Max residual of metric compatibility `d_k g_{ij} = Gamma-contractions`.
pub fn compatibility_residual<F, M>(metric: &M, p: &[F]) -> F
where
    F: Real,
    M: MetricFamily<F> + ?Sized,
{
    let n = metric.dim();
    let pj = Jet2::vars(p);
    let gj = metric.components(&pj);
    let b = curvature_generic(metric, p).expect("nondegenerate metric");
    let mut worst = F::zero();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut r = gj[(i, j)].grad_at(k);
                for m in 0..n {
                    r = r - *b.gamma_at(m, k, i) * b.g[(m, j)]
                        - *b.gamma_at(m, k, j) * b.g[(i, m)];
                }
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

/// Checks that the eigenvalue signs of `g(p)` match the declared signature.
pub fn signature_matches<F: Real, M: MetricFamily<F> + ?Sized>(metric: &M, p: &[F]) -> bool {
    let g = metric.components(p);
    let mut ev = sym_eigenvalues(&g);
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sig = metric.signature();
    sig.sort_unstable();
    ev.len() == sig.len()
        && ev
            .iter()
            .zip(sig)
            .all(|(e, s)| (e.as_f64() > 0.0) == (s > 0))
}

/// Symmetry defect of the metric matrix at `p`.
pub fn symmetry_residual<F: Real, M: MetricFamily<F> + ?Sized>(metric: &M, p: &[F]) -> F {
    let g = metric.components(p);
    let n = g.rows;
    let mut worst = F::zero();
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((g[(i, j)] - g[(j, i)]).abs());
        }
    }
    worst
}

pub fn norm_inf<F: Real>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |m, x| m.max(x.abs()))
}

/// g-inner product of coordinate vectors against an explicit metric matrix.
pub fn metric_dot<S: Scalar>(g: &Mat<S>, u: &[S], v: &[S]) -> S {
    let gu = g.mul_vec(u);
    dot(&gu, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minkowski4() -> ConstDiagMetric<f64> {
        ConstDiagMetric {
            diag: vec![-1.0, 1.0, 1.0, 1.0],
        }
    }

    #[test]
    fn flat_metric_has_zero_curvature() {
        let m = minkowski4();
        let b = curvature_at(&m, &[0.3, -1.2, 0.5, 2.0]).unwrap();
        assert!(norm_inf(&b.riem) < 1e-15);
        assert!(norm_inf(&b.ric.data) < 1e-15);
        assert!(b.scal.abs() < 1e-15);
    }

    #[test]
    fn minkowski_lightlike_sectional_vanishes() {
        let m = minkowski4();
        let b = curvature_at(&m, &[0.0; 4]).unwrap();
        let xi = [1.0, 1.0, 0.0, 0.0];
        let x = [0.0, 0.0, 1.0, 0.0];
        let k = lightlike_sectional(&b, &xi, &x).unwrap();
        assert_eq!(k, 0.0);
    }

    #[test]
    fn sectional_rejects_degenerate_plane() {
        let m = minkowski4();
        let b = curvature_at(&m, &[0.0; 4]).unwrap();
        let xi = [1.0, 1.0, 0.0, 0.0];
        let x = [0.0, 0.0, 1.0, 0.0];
        assert!(matches!(
            sectional(&b, &xi, &x),
            Err(Error::DegeneratePlane { .. })
        ));
    }

    /// Round 3-sphere of radius 1 in polar coordinates: constant curvature 1.
    struct Sphere3;
    impl MetricFamily<f64> for Sphere3 {
        fn dim(&self) -> usize {
            3
        }
        fn signature(&self) -> Vec<i8> {
            vec![1, 1, 1]
        }
        fn components<S: Scalar<R = f64>>(&self, p: &[S]) -> Mat<S> {
            let r = &p[0];
            let th = &p[1];
            let sr = r.sin();
            let mut g = Mat::zeros(3, 3);
            g[(0, 0)] = S::one();
            g[(1, 1)] = sr.clone() * sr.clone();
            g[(2, 2)] = sr.clone() * sr * th.sin().powi(2);
            g
        }
    }

    #[test]
    fn sphere_sectional_curvature_is_one() {
        let b = curvature_at(&Sphere3, &[0.7, 1.1, 0.4]).unwrap();
        let planes = [
            ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
            ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]),
            ([0.0, 1.0, 0.0], [0.0, 0.3, 1.0]),
        ];
        for (u, v) in planes {
            let k = sectional(&b, &u, &v).unwrap();
            assert!((k - 1.0).abs() < 1e-11, "K = {k}");
        }
        assert!(bianchi_residual(&b) < 1e-12);
        assert!(compatibility_residual(&Sphere3, &[0.7, 1.1, 0.4]) < 1e-11);
    }

    #[test]
    fn fd_curvature_matches_jets_on_sphere() {
        let p = [0.9, 0.8, 1.3];
        let a = curvature_at(&Sphere3, &p).unwrap();
        let b = curvature_fd(&Sphere3, &p).unwrap();
        for (x, y) in a.riem.iter().zip(&b.riem) {
            assert!((x - y).abs() < 1e-5, "{x} vs {y}");
        }
    }

    #[test]
    fn jet_metric_gradients_match_richardson_fd() {
        // first derivatives of g: relative 1e-6 against step-1e-5 Richardson
        let p = [0.9, 0.8, 1.3];
        let pj = Jet2::vars(&p);
        let gj = Sphere3.components(&pj);
        for a in 0..3 {
            for b in 0..3 {
                for m in 0..3 {
                    let f = |t: f64| {
                        let mut q = p;
                        q[m] += t;
                        Sphere3.components(&q)[(a, b)]
                    };
                    let fdv = fd::d1(f, 0.0, fd::FD_STEP_1);
                    let jv = gj[(a, b)].grad_at(m);
                    assert!(
                        (fdv - jv).abs() <= 1e-6 * (1.0 + jv.abs()),
                        "d_{m} g_{a}{b}: {fdv} vs {jv}"
                    );
                }
            }
        }
    }

    #[test]
    fn ricci_is_symmetric_and_sectional_scale_invariant() {
        let b = curvature_at(&Sphere3, &[0.6, 0.9, 2.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((b.ric[(i, j)] - b.ric[(j, i)]).abs() < 1e-12);
            }
        }
        let u = [0.3, 1.0, -0.2];
        let v = [-0.5, 0.1, 0.8];
        let k0 = sectional(&b, &u, &v).unwrap();
        let us: Vec<f64> = u.iter().map(|x| x * 2.7).collect();
        let vs: Vec<f64> = v.iter().map(|x| x * -0.9).collect();
        let k1 = sectional(&b, &us, &vs).unwrap();
        assert!((k0 - k1).abs() < 1e-10);
    }

    #[test]
    fn signature_check() {
        assert!(signature_matches(&minkowski4(), &[0.0; 4]));
        assert!(signature_matches(&Sphere3, &[0.5, 0.5, 0.5]));
        assert!(symmetry_residual(&Sphere3, &[0.5, 0.5, 0.5]) < 1e-15);
    }
}
