//! Special functions needed by the closed-form transition probabilities:
//! log-gamma and gamma ratios, terminating Gauss hypergeometric series and
//! Jacobi polynomials. Only the real parameter ranges the oscillator
//! formulas visit are supported.

use crate::error::{Error, Result};

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::range("x", x, "log_gamma requires x > 0"));
    }
    Ok(libm::lgamma(x))
}

/// `Γ(a)/Γ(b)` stored as `sign * exp(log_value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio {
    pub log_value: f64,
    pub sign: f64,
}

impl GammaRatio {
    pub fn value(&self) -> f64 {
        self.sign * self.log_value.exp()
    }
}

/// Largest integer offset evaluated as an explicit product.
const PRODUCT_PATH_MAX: f64 = 1024.0;

/// `Γ(a)/Γ(b)` for `a, b > 0`. Integer offsets `a - b` are evaluated as a
/// product of `b (b+1) ... (a-1)` in log space; everything else through
/// differences of `ln Γ`.
pub fn gamma_ratio(a: f64, b: f64) -> Result<GammaRatio> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::range("a", a, "gamma_ratio requires a > 0"));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::range("b", b, "gamma_ratio requires b > 0"));
    }
    let diff = a - b;
    let k = diff.round();
    let log_value =
        if k.abs() <= PRODUCT_PATH_MAX && (diff - k).abs() <= 4.0 * f64::EPSILON * a.max(b) {
            if k >= 0.0 {
                log_rising(b, k as usize)
            } else {
                -log_rising(a, (-k) as usize)
            }
        } else {
            log_gamma(a)? - log_gamma(b)?
        };
    Ok(GammaRatio {
        log_value,
        sign: 1.0,
    })
}

/// `ln[(x)_k] = ln[x (x+1) ... (x+k-1)]` for `x > 0`.
pub(crate) fn log_rising(x: f64, k: usize) -> f64 {
    (0..k).map(|i| (x + i as f64).ln()).sum()
}

/// `ln(n!)`.
pub fn log_factorial(n: usize) -> f64 {
    if n < 32 {
        log_rising(1.0, n)
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// Terminating series `₂F₁(-S, b; c; z)` summed term by term.
pub fn hyp2f1_terminating(s: usize, b: f64, c: f64, z: f64) -> Result<f64> {
    Ok(hyp2f1_terms(s, Dd::new(b), Dd::new(c), Dd::new(z))?.0)
}

/// Double-double number `hi + lo`, used where a series cancels too much for
/// plain `f64`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (o.hi - bb);
        Dd::renorm(s, err + self.lo + o.lo)
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + self.hi * o.lo + self.lo * o.hi;
        Dd::renorm(p, e)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::new(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::new(q2)));
        let q3 = r.hi / o.hi;
        Dd::renorm(q1, q2).add(Dd::new(q3))
    }
}

/// Sum and `Σ|t_k|`, the latter measuring cancellation.
fn hyp2f1_terms(s: usize, b: Dd, c: Dd, z: Dd) -> Result<(f64, f64)> {
    if c.hi <= 0.0 && c.hi.fract() == 0.0 && c.hi > -(s as f64) {
        return Err(Error::range(
            "c",
            c.hi,
            format!("lower parameter hits a pole before the series of length {s} terminates"),
        ));
    }
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    let mut abs_sum = 1.0;
    for k in 0..s {
        let kf = Dd::new(k as f64);
        let num = Dd::new(k as f64 - s as f64).mul(b.add(kf)).mul(z);
        let den = c.add(kf).mul(Dd::new(k as f64 + 1.0));
        term = term.mul(num).div(den);
        sum = sum.add(term);
        abs_sum += term.hi.abs();
    }
    Ok((sum.hi, abs_sum))
}

/// `₂F₁(-S, b; c; z)` for `z < 1`, evaluated either directly or through the
/// Pfaff transformation `(1-z)^S ₂F₁(-S, c-b; c; z/(z-1))`, whichever series
/// cancels less. The sums are carried in double-double arithmetic.
pub fn hyp2f1_terminating_balanced(s: usize, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(z < 1.0) {
        return Err(Error::range("z", z, "balanced evaluation requires z < 1"));
    }
    let (bd, cd, zd) = (Dd::new(b), Dd::new(c), Dd::new(z));
    let (direct, direct_abs) = hyp2f1_terms(s, bd, cd, zd)?;
    let zp = zd.div(zd.sub(Dd::new(1.0)));
    let (pfaff, pfaff_abs) = hyp2f1_terms(s, cd.sub(bd), cd, zp)?;
    let direct_cond = direct_abs / direct.abs();
    let pfaff_cond = pfaff_abs / pfaff.abs();
    if direct_cond <= pfaff_cond {
        Ok(direct)
    } else {
        Ok((1.0 - z).powi(s as i32) * pfaff)
    }
}

/// Jacobi polynomial `P_n^{(α,β)}(x)` from the three-term recurrence in the
/// degree.
pub fn jacobi_p(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::range(
            "alpha",
            alpha,
            "Jacobi polynomials need alpha > -1",
        ));
    }
    if !(beta > -1.0) {
        return Err(Error::range(
            "beta",
            beta,
            "Jacobi polynomials need beta > -1",
        ));
    }
    let p0 = 1.0;
    if n == 0 {
        return Ok(p0);
    }
    let ab = alpha + beta;
    let mut prev = p0;
    let mut cur = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    let sq_diff = (alpha - beta) * (alpha + beta);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * sq_diff;
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
