//! Classical reflection parameter `ρ` from `ξ'' + ω²(t) ξ = 0`.
//!
//! The in-solution `ξ = e^{-iω₋t}` is integrated across the window and
//! decomposed at the right end as `C e^{-iω₊t} + D e^{+iω₊t}`; then
//! `ρ = |D|²/|C|²`, and `|C|² - |D|² = ω₋/ω₊` is the conserved Wronskian.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{integrate, StepControl};
use crate::profile::FrequencyProfile;
use crate::settings::SolverSettings;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionResult {
    pub c: Complex64,
    pub d: Complex64,
    pub rho: f64,
    pub wronskian_defect: f64,
    pub solver_steps: usize,
}

/// `((ω₊-ω₋)/(ω₊+ω₋))²`, the instantaneous-switch value of `ρ`.
pub fn rho_sudden(omega_minus: f64, omega_plus: f64) -> Result<f64> {
    for (what, w) in [("omega_minus", omega_minus), ("omega_plus", omega_plus)] {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::range(what, w, "frequency must be positive"));
        }
    }
    let r = (omega_plus - omega_minus) / (omega_plus + omega_minus);
    Ok(r * r)
}

pub fn compute_rho(
    profile: &dyn FrequencyProfile,
    settings: &SolverSettings,
) -> Result<ReflectionResult> {
    profile.validate()?;
    let mut rtol = settings.rtol;
    let mut atol = settings.atol;
    let mut attempt = 0;
    loop {
        let res = integrate_once(profile, settings, rtol, atol)?;
        if res.wronskian_defect < settings.wronskian_tol {
            return Ok(res);
        }
        if attempt >= settings.refinements {
            return Err(Error::WronskianViolation {
                defect: res.wronskian_defect,
                limit: settings.wronskian_tol,
            });
        }
        attempt += 1;
        rtol = (rtol / 100.0).max(1e-14);
        atol = (atol / 100.0).max(1e-16);
    }
}

fn integrate_once(
    profile: &dyn FrequencyProfile,
    settings: &SolverSettings,
    rtol: f64,
    atol: f64,
) -> Result<ReflectionResult> {
    let (t_start, t_end) = profile.window();
    let (w_minus, w_plus) = (profile.omega_minus(), profile.omega_plus());
    let ctl = StepControl {
        rtol,
        atol,
        max_step: settings.max_step,
        max_steps: settings.max_steps,
    };

    // (Re ξ, Im ξ, Re ξ', Im ξ')
    let xi0 = Complex64::from_polar(1.0, -w_minus * t_start);
    let dxi0 = Complex64::new(0.0, -w_minus) * xi0;
    let mut y = [xi0.re, xi0.im, dxi0.re, dxi0.im];
    let mut steps = 0;
    for (a, b) in profile.segments() {
        let rhs = |t: f64, y: &[f64; 4]| {
            let w2 = profile.omega(t).powi(2);
            [y[2], y[3], -w2 * y[0], -w2 * y[1]]
        };
        let out = integrate(rhs, a, b, y, &ctl)?;
        y = out.y;
        steps += out.accepted + out.rejected;
    }

    let xi = Complex64::new(y[0], y[1]);
    let dxi = Complex64::new(y[2], y[3]);
    let i = Complex64::i();
    let c = Complex64::from_polar(0.5, w_plus * t_end) * (xi + i * dxi / w_plus);
    let d = Complex64::from_polar(0.5, -w_plus * t_end) * (xi - i * dxi / w_plus);
    let (c2, d2) = (c.norm_sqr(), d.norm_sqr());
    Ok(ReflectionResult {
        c,
        d,
        rho: d2 / c2,
        wronskian_defect: (c2 - d2 - w_minus / w_plus).abs(),
        solver_steps: steps,
    })
}
