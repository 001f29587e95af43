//! Central finite differences with Richardson extrapolation. These back the
//! cross-validation mode of the identity suite and the curvature oracle
//! tests; the jet engine is the primary differentiation path.

/// Step used for first derivatives.
pub const FD_STEP_1: f64 = 1e-5;
/// Step used for second derivatives (larger to keep noise amplification down).
pub const FD_STEP_2: f64 = 1e-3;

/// Richardson-extrapolated central first derivative.
pub fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let c = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let a = c(h);
    let b = c(h / 2.0);
    (4.0 * b - a) / 3.0
}

/// Central second derivative.
pub fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Directional first derivative of a multivariate function along `u`,
/// Richardson-extrapolated.
pub fn dir1(f: impl Fn(&[f64]) -> f64, x: &[f64], u: &[f64], h: f64) -> f64 {
    let shift = |t: f64| {
        let p: Vec<f64> = x.iter().zip(u).map(|(xi, ui)| xi + t * ui).collect();
        f(&p)
    };
    d1(shift, 0.0, h)
}

/// Mixed second partial d^2 f / dx_i dx_j via the four-point stencil.
pub fn d2_mixed(f: impl Fn(&[f64]) -> f64, x: &[f64], i: usize, j: usize, h: f64) -> f64 {
    if i == j {
        let g = |t: f64| {
            let mut p = x.to_vec();
            p[i] += t;
            f(&p)
        };
        return d2(g, 0.0, h);
    }
    let eval = |si: f64, sj: f64| {
        let mut p = x.to_vec();
        p[i] += si;
        p[j] += sj;
        f(&p)
    };
    (eval(h, h) - eval(h, -h) - eval(-h, h) + eval(-h, -h)) / (4.0 * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_accuracy() {
        let d = d1(|x| x.sin(), 0.9, FD_STEP_1);
        assert!((d - 0.9f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn second_derivative_accuracy() {
        let d = d2(|x| x.exp(), 0.4, FD_STEP_2);
        assert!((d - 0.4f64.exp()).abs() < 1e-6);
    }

    #[test]
    fn mixed_partial() {
        let f = |p: &[f64]| p[0] * p[0] * p[1] + p[1].sin() * p[0];
        let d = d2_mixed(f, &[1.2, 0.7], 0, 1, FD_STEP_2);
        let exact = 2.0 * 1.2 + 0.7f64.cos();
        assert!((d - exact).abs() < 1e-6);
    }
}
