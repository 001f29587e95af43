//! Safeguarded scalar root finding: Newton with bisection fallback, and
//! Brent's method for derivative-free refinement.

/// Newton iteration safeguarded by a bracket `[lo, hi]` with `f(lo)` and
/// `f(hi)` of opposite sign. Falls back to bisection whenever the Newton
/// step leaves the bracket or stalls. Returns the root to `tol` in x.
pub fn newton_bracketed(
    mut f: impl FnMut(f64) -> f64,
    mut df: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo * fhi > 0.0 {
        return None;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx * flo < 0.0 {
            hi = x;
        } else {
            lo = x;
            flo = fx;
        }
        let d = df(x);
        let mut next = if d != 0.0 { x - fx / d } else { f64::NAN };
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= tol {
            return Some(next);
        }
        x = next;
        if hi - lo <= tol {
            return Some(0.5 * (lo + hi));
        }
    }
    Some(x)
}

/// Expands a bracket around `x0` in direction `dir` until `f` changes sign,
/// bounded by `limit`. Returns (lo, hi) with a sign change.
pub fn expand_bracket(
    mut f: impl FnMut(f64) -> f64,
    x0: f64,
    mut step: f64,
    limit: f64,
) -> Option<(f64, f64)> {
    let f0 = f(x0);
    if f0 == 0.0 {
        return Some((x0, x0));
    }
    let mut prev = x0;
    let mut fprev = f0;
    for _ in 0..200 {
        let next = prev + step;
        let clamped = if step > 0.0 { next.min(limit) } else { next.max(limit) };
        let fnext = f(clamped);
        if fprev * fnext <= 0.0 {
            return if clamped >= prev {
                Some((prev, clamped))
            } else {
                Some((clamped, prev))
            };
        }
        if clamped == limit {
            return None;
        }
        prev = clamped;
        fprev = fnext;
        step *= 1.8;
    }
    None
}

/// Brent's method on a bracketing interval.
pub fn brent(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa * fb > 0.0 {
        return None;
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() < tol {
            return Some(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let cond = !(s > lo.min(b) && s < lo.max(b))
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            || (mflag && (b - c).abs() < tol)
            || (!mflag && (c - d).abs() < tol);
        if cond {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_simple_roots() {
        let r = newton_bracketed(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2.0f64.sqrt()).abs() < 1e-13);
        let r = newton_bracketed(|x| x.sin() - 0.5, |x| x.cos(), 0.0, 1.5, 1e-14).unwrap();
        assert!((r - 0.5f64.asin()).abs() < 1e-13);
    }

    #[test]
    fn bisection_fallback_on_flat_derivative() {
        // derivative vanishes at the starting midpoint
        let r = newton_bracketed(|x| x.powi(3) - 1e-3, |x| 3.0 * x * x, -1.0, 1.0, 1e-13).unwrap();
        assert!((r - 0.1).abs() < 1e-10);
    }

    #[test]
    fn brent_refines_bracket() {
        let r = brent(|x| x.cos(), 1.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn bracket_expansion() {
        let (lo, hi) = expand_bracket(|x| x - 3.0, 0.0, 0.5, 100.0).unwrap();
        assert!(lo <= 3.0 && 3.0 <= hi);
    }
}
