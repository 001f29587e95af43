//! Dormand-Prince 5(4) with step control and dense output.
//!
//! Dense output uses the standard quartic interpolant, good enough to
//! bracket sign changes; final root locations are refined with Brent on the
//! interpolant.

use super::root::brent;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its dense-output coefficients.
#[derive(Clone, Debug)]
pub struct Segment {
    pub t0: f64,
    pub h: f64,
    r1: Vec<f64>,
    r2: Vec<f64>,
    r3: Vec<f64>,
    r4: Vec<f64>,
    r5: Vec<f64>,
}

impl Segment {
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let th = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let th1 = 1.0 - th;
        (0..self.r1.len())
            .map(|i| {
                self.r1[i]
                    + th
                        * (self.r2[i]
                            + th1 * (self.r3[i] + th * (self.r4[i] + th1 * self.r5[i])))
            })
            .collect()
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + self.h
    }
}

/// Dense solution trace over `[t_start, t_end]`.
#[derive(Clone, Debug, Default)]
pub struct Solution {
    pub segments: Vec<Segment>,
}

impl Solution {
    pub fn t_start(&self) -> f64 {
        self.segments.first().map_or(0.0, |s| s.t0)
    }

    pub fn t_end(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.t_end())
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let seg = self
            .segments
            .iter()
            .find(|s| t <= s.t_end() + 1e-300)
            .or_else(|| self.segments.last())
            .expect("empty solution");
        seg.eval(t)
    }

    /// Locates zeros of `g(t, y)` by scanning each segment on a fine grid
    /// and refining brackets with Brent. Zeros closer than `min_sep` to a
    /// previous one are dropped.
    pub fn zeros_of(&self, g: impl Fn(f64, &[f64]) -> f64, min_sep: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        let eval_g = |t: f64| {
            let y = self.eval(t);
            g(t, &y)
        };
        for seg in &self.segments {
            const SUBDIV: usize = 24;
            let mut prev_t = seg.t0;
            let mut prev_v = eval_g(prev_t);
            for k in 1..=SUBDIV {
                let t = seg.t0 + seg.h * (k as f64) / (SUBDIV as f64);
                let v = eval_g(t);
                if prev_v == 0.0 || prev_v * v < 0.0 {
                    if let Some(z) = brent(eval_g, prev_t, t, 1e-13) {
                        if out.last().map_or(true, |last| (z - last).abs() > min_sep) {
                            out.push(z);
                        }
                    }
                }
                prev_t = t;
                prev_v = v;
            }
        }
        out
    }
}

pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 1e-3,
            max_steps: 200_000,
        }
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (forward only), storing
/// dense output. Returns an error string on step-size collapse.
pub fn integrate(
    mut f: impl FnMut(f64, &[f64]) -> Vec<f64>,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<Solution, String> {
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = opts.h_init.min((t_end - t0).abs()).max(1e-12);
    let mut k1 = f(t, &y);
    let mut sol = Solution::default();
    let mut steps = 0usize;
    while t < t_end - 1e-14 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(format!("step budget exhausted at t = {t}"));
        }
        if t + h > t_end {
            h = t_end - t;
        }
        let stage = |y: &[f64], incs: &[(&[f64], f64)]| -> Vec<f64> {
            let mut out = y.to_vec();
            for (k, a) in incs {
                for i in 0..n {
                    out[i] += h * a * k[i];
                }
            }
            out
        };
        let k2 = f(t + h / 5.0, &stage(&y, &[(&k1, A21)]));
        let k3 = f(t + 3.0 * h / 10.0, &stage(&y, &[(&k1, A31), (&k2, A32)]));
        let k4 = f(
            t + 4.0 * h / 5.0,
            &stage(&y, &[(&k1, A41), (&k2, A42), (&k3, A43)]),
        );
        let k5 = f(
            t + 8.0 * h / 9.0,
            &stage(&y, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]),
        );
        let k6 = f(
            t + h,
            &stage(
                &y,
                &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)],
            ),
        );
        let y_new = stage(&y, &[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)]);
        let k7 = f(t + h, &y_new);
        let mut err = 0.0f64;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / n as f64).sqrt();
        if err <= 1.0 {
            let mut r1 = Vec::with_capacity(n);
            let mut r2 = Vec::with_capacity(n);
            let mut r3 = Vec::with_capacity(n);
            let mut r4 = Vec::with_capacity(n);
            let mut r5 = Vec::with_capacity(n);
            for i in 0..n {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                r1.push(y[i]);
                r2.push(ydiff);
                r3.push(bspl);
                r4.push(ydiff - h * k7[i] - bspl);
                r5.push(h * (D1 * k1[i]
                    + D3 * k3[i]
                    + D4 * k4[i]
                    + D5 * k5[i]
                    + D6 * k6[i]
                    + D7 * k7[i]));
            }
            sol.segments.push(Segment {
                t0: t,
                h,
                r1,
                r2,
                r3,
                r4,
                r5,
            });
            t += h;
            y = y_new;
            k1 = k7;
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= fac;
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(format!("step size collapsed at t = {t}"));
        }
    }
    Ok(sol)
}
