//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size real systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

/// Outcome of one integration interval.
#[derive(Debug, Clone, Copy)]
pub struct Integrated<const D: usize> {
    pub y: [f64; D],
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn error_norm<const D: usize>(
    err: &[f64; D],
    y0: &[f64; D],
    y1: &[f64; D],
    ctl: &StepControl,
) -> f64 {
    let mut s = 0.0;
    for i in 0..D {
        let sc = ctl.atol + ctl.rtol * y0[i].abs().max(y1[i].abs());
        s += (err[i] / sc).powi(2);
    }
    (s / D as f64).sqrt()
}

/// Integrates `y' = f(t, y)` from `t0` to `t1 > t0`.
pub fn integrate<const D: usize, F>(
    f: F,
    t0: f64,
    t1: f64,
    y0: [f64; D],
    ctl: &StepControl,
) -> Result<Integrated<D>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    if !(t1 > t0) {
        return Ok(Integrated {
            y: y0,
            accepted: 0,
            rejected: 0,
        });
    }
    let span = t1 - t0;
    let max_step = ctl.max_step.min(span);
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t, &y, &k1, ctl).min(max_step);
    let mut accepted = 0;
    let mut rejected = 0;

    while t < t1 {
        if accepted + rejected >= ctl.max_steps {
            return Err(Error::Integration {
                t,
                reason: format!("step budget of {} exhausted", ctl.max_steps),
            });
        }
        let last = t + h >= t1 - 1e-14 * span;
        if last {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(
            t + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(t + h, &y_new);

        let mut err = [0.0; D];
        for i in 0..D {
            err[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let e = error_norm(&err, &y, &y_new, ctl);
        if !e.is_finite() {
            return Err(Error::Integration {
                t,
                reason: "non-finite error estimate".into(),
            });
        }
        let factor = if e == 0.0 {
            5.0
        } else {
            (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
        };
        if e <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = k7;
            accepted += 1;
            h = (h * factor).min(max_step);
        } else {
            rejected += 1;
            h *= factor.min(1.0);
            if h < 1e-14 * span.max(1.0) {
                return Err(Error::Integration {
                    t,
                    reason: "step size underflow".into(),
                });
            }
        }
    }
    Ok(Integrated {
        y,
        accepted,
        rejected,
    })
}

/// Starting step from the size of the solution and its first derivatives.
fn initial_step<const D: usize, F>(
    f: &F,
    t: f64,
    y: &[f64; D],
    dy: &[f64; D],
    ctl: &StepControl,
) -> f64
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let scale = |v: &[f64; D]| {
        let mut s = 0.0;
        for i in 0..D {
            s += (v[i] / (ctl.atol + ctl.rtol * y[i].abs())).powi(2);
        }
        (s / D as f64).sqrt()
    };
    let d0 = scale(y);
    let d1 = scale(dy);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = axpy(y, h0, &[(1.0, dy)]);
    let dy1 = f(t + h0, &y1);
    let mut diff = [0.0; D];
    for i in 0..D {
        diff[i] = dy1[i] - dy[i];
    }
    let d2 = scale(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}
