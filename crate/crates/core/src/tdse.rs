//! Brute-force check of the closed forms: the Schrödinger equation
//! `i dψ/dt = H(t) ψ` is integrated in the truncated su(1,1) basis (the
//! eigenbasis of `H(1) = 2 J0`, where every `H(t)` is tridiagonal) and the
//! final state is projected on the eigenvectors of the truncated `H(ω₊)`.

use std::fmt::Debug;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::algebra::{build_generators, GeneratorMatrices};
use crate::error::{Error, Result};
use crate::model::OscillatorModel;
use crate::profile::FrequencyProfile;
use crate::reflection::compute_rho;
use crate::registry::{Params, Registry};
use crate::settings::SolverSettings;
use crate::transitions::build_table;

/// Amplitudes in the reference (`ω = 1`) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amplitudes: Vec<Complex64>,
    /// `| Σ|c_n|² - 1 |`.
    pub norm_defect: f64,
}

impl FockVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        let norm_defect = (norm_sqr(&amplitudes) - 1.0).abs();
        FockVector {
            amplitudes,
            norm_defect,
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Probability weight carried by the top tenth of the basis.
    pub fn leakage(&self) -> f64 {
        top_weight(&self.amplitudes)
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

fn top_weight(v: &[Complex64]) -> f64 {
    let n = v.len();
    let top = n.div_ceil(10);
    v[n - top..].iter().map(Complex64::norm_sqr).sum()
}

/// Lowest eigenpairs of the truncated `H(ω)`, ascending, each eigenvector
/// phase-fixed so its largest component is real and positive.
#[derive(Debug, Clone)]
pub struct Eigenbasis {
    pub values: Vec<f64>,
    /// Column `k` is the `k`-th eigenvector.
    pub vectors: DMatrix<Complex64>,
}

/// Diagonalizes `H(ω)` and keeps the lowest `3N/4` eigenpairs; the rest are
/// distorted by the truncation edge.
pub fn eigenbasis(gen: &GeneratorMatrices, omega: f64) -> Result<Eigenbasis> {
    let h = gen.hamiltonian_tridiagonal(omega)?;
    let n = h.dim();
    // A diagonal phase change makes the off-diagonal real and non-negative,
    // so the real symmetric solver can be used.
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    for k in 0..n - 1 {
        let u = h.upper[k];
        let unit = if u.norm() > 0.0 {
            u / u.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        phase[k + 1] = phase[k] * unit.conj();
    }
    let mut real = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        real[(k, k)] = h.diag[k];
        if k + 1 < n {
            real[(k, k + 1)] = h.upper[k].norm();
            real[(k + 1, k)] = h.upper[k].norm();
        }
    }
    let eig = SymmetricEigen::new(real);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let keep = n - n / 4;
    let mut vectors = DMatrix::<Complex64>::zeros(n, keep);
    let mut values = Vec::with_capacity(keep);
    for (col, &src) in order.iter().take(keep).enumerate() {
        values.push(eig.eigenvalues[src]);
        let mut best = 0;
        for k in 0..n {
            let z = phase[k] * eig.eigenvectors[(k, src)];
            vectors[(k, col)] = z;
            if z.norm() > vectors[(best, col)].norm() {
                best = k;
            }
        }
        let pivot = vectors[(best, col)];
        let fix = pivot.conj() / pivot.norm();
        for k in 0..n {
            vectors[(k, col)] *= fix;
        }
    }
    Ok(Eigenbasis { values, vectors })
}

fn check_level(gen: &GeneratorMatrices, what: &str, level: usize) -> Result<()> {
    if 4 * level >= gen.dim() {
        return Err(Error::Truncation(format!(
            "{what} = {level} requires a basis larger than {} (need {what} < N/4)",
            gen.dim()
        )));
    }
    Ok(())
}

/// `(m+1)`-th lowest eigenvector of the truncated `H(ω₋)`.
pub fn initial_state(gen: &GeneratorMatrices, omega_minus: f64, m: usize) -> Result<FockVector> {
    check_level(gen, "m", m)?;
    let basis = eigenbasis(gen, omega_minus)?;
    Ok(FockVector::new(
        basis.vectors.column(m).iter().copied().collect(),
    ))
}

/// `|<φ_n(ω₊)|ψ>|²` for `n = 0..=n_max`.
pub fn extract_probabilities(
    gen: &GeneratorMatrices,
    omega_plus: f64,
    psi: &FockVector,
    n_max: usize,
) -> Result<Vec<f64>> {
    check_level(gen, "n_max", n_max)?;
    let basis = eigenbasis(gen, omega_plus)?;
    Ok(project(&basis, &psi.amplitudes, n_max))
}

fn project(basis: &Eigenbasis, psi: &[Complex64], n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .map(|n| {
            basis
                .vectors
                .column(n)
                .iter()
                .zip(psi)
                .map(|(phi, c)| phi.conj() * c)
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect()
}

/// Time-dependent `H(t)` assembled from the generators and a profile. In
/// the reference basis its diagonal is real and its superdiagonal purely
/// imaginary: `H[k][k+1] = i·coupling[k]`.
pub struct Hamiltonian<'a> {
    level: Vec<f64>,
    half_raising: Vec<f64>,
    profile: &'a dyn FrequencyProfile,
}

impl<'a> Hamiltonian<'a> {
    pub fn new(gen: &GeneratorMatrices, profile: &'a dyn FrequencyProfile) -> Self {
        let j = gen.model().j();
        Hamiltonian {
            level: (0..gen.dim()).map(|n| n as f64 - j).collect(),
            half_raising: gen.raising().iter().map(|r| 0.5 * r).collect(),
            profile,
        }
    }

    pub fn dim(&self) -> usize {
        self.level.len()
    }

    fn fill(&self, t: f64, diag: &mut [f64], coupling: &mut [f64]) {
        let w2 = self.profile.omega(t).powi(2);
        for (d, l) in diag.iter_mut().zip(&self.level) {
            *d = (w2 + 1.0) * l;
        }
        for (c, r) in coupling.iter_mut().zip(&self.half_raising) {
            *c = (w2 - 1.0) * r;
        }
    }
}

/// Scratch space for the tridiagonal solves.
pub struct Workspace {
    diag: Vec<f64>,
    coupling: Vec<f64>,
    /// `(dt/2)·coupling`
    scaled: Vec<f64>,
    inv_pivot: Vec<Complex64>,
    rhs: Vec<Complex64>,
}

impl Workspace {
    pub fn new(dim: usize) -> Self {
        Workspace {
            diag: vec![0.0; dim],
            coupling: vec![0.0; dim.saturating_sub(1)],
            scaled: vec![0.0; dim.saturating_sub(1)],
            inv_pivot: vec![Complex64::default(); dim],
            rhs: vec![Complex64::default(); dim],
        }
    }
}

/// Norm-preserving one-step map `ψ(t) → ψ(t+dt)`.
pub trait UnitaryStepper: Debug + Send + Sync {
    fn name(&self) -> &'static str;

    /// Global order of accuracy.
    fn order(&self) -> u32;

    fn advance(
        &self,
        ham: &Hamiltonian<'_>,
        t: f64,
        dt: f64,
        states: &mut [Vec<Complex64>],
        ws: &mut Workspace,
    );
}

/// Cayley form of the implicit midpoint rule,
/// `(1 + i dt H/2) ψ' = (1 - i dt H/2) ψ` with `H` at `t + dt/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cayley;

impl Cayley {
    fn step(
        ham: &Hamiltonian<'_>,
        t: f64,
        dt: f64,
        states: &mut [Vec<Complex64>],
        ws: &mut Workspace,
    ) {
        ham.fill(t + 0.5 * dt, &mut ws.diag, &mut ws.coupling);
        let n = ws.diag.len();
        let h = 0.5 * dt;
        for (s, c) in ws.scaled.iter_mut().zip(&ws.coupling) {
            *s = h * c;
        }
        // A = 1 + i dt H/2 has diagonal 1 + i h d_k, superdiagonal -s_k and
        // subdiagonal +s_k; its Hermitian part is the identity, so the
        // unpivoted LU sweep is stable.
        let s = &ws.scaled;
        for k in 0..n {
            let mut pivot = Complex64::new(1.0, h * ws.diag[k]);
            if k > 0 {
                pivot += s[k - 1] * s[k - 1] * ws.inv_pivot[k - 1];
            }
            ws.inv_pivot[k] = pivot.inv();
        }
        for psi in states.iter_mut() {
            // rhs = (1 - i dt H/2) ψ, then forward elimination.
            for k in 0..n {
                let mut r = psi[k] - Complex64::new(0.0, h * ws.diag[k]) * psi[k];
                if k + 1 < n {
                    r += s[k] * psi[k + 1];
                }
                if k > 0 {
                    r -= s[k - 1] * psi[k - 1];
                    r -= s[k - 1] * ws.rhs[k - 1];
                }
                ws.rhs[k] = r * ws.inv_pivot[k];
            }
            psi[n - 1] = ws.rhs[n - 1];
            for k in (0..n - 1).rev() {
                psi[k] = ws.rhs[k] + s[k] * ws.inv_pivot[k] * psi[k + 1];
            }
        }
    }
}

impl UnitaryStepper for Cayley {
    fn name(&self) -> &'static str {
        "cayley"
    }
    fn order(&self) -> u32 {
        2
    }
    fn advance(
        &self,
        ham: &Hamiltonian<'_>,
        t: f64,
        dt: f64,
        states: &mut [Vec<Complex64>],
        ws: &mut Workspace,
    ) {
        Cayley::step(ham, t, dt, states, ws);
    }
}

/// Symmetric triple-jump composition of three Cayley steps; fourth order
/// and still exactly unitary.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cayley4;

impl UnitaryStepper for Cayley4 {
    fn name(&self) -> &'static str {
        "cayley4"
    }
    fn order(&self) -> u32 {
        4
    }
    fn advance(
        &self,
        ham: &Hamiltonian<'_>,
        t: f64,
        dt: f64,
        states: &mut [Vec<Complex64>],
        ws: &mut Workspace,
    ) {
        let cbrt2 = 2f64.cbrt();
        let outer = 1.0 / (2.0 - cbrt2);
        let inner = -cbrt2 / (2.0 - cbrt2);
        Cayley::step(ham, t, outer * dt, states, ws);
        Cayley::step(ham, t + outer * dt, inner * dt, states, ws);
        Cayley::step(ham, t + (outer + inner) * dt, outer * dt, states, ws);
    }
}

pub fn stepper_registry() -> Registry<dyn UnitaryStepper> {
    let mut reg = Registry::new("stepper");
    reg.register(
        "cayley",
        |_| Ok(Box::new(Cayley) as Box<dyn UnitaryStepper>),
    )
    .register("cayley4", |_| {
        Ok(Box::new(Cayley4) as Box<dyn UnitaryStepper>)
    });
    reg
}

/// Diagnostics of a propagation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationStats {
    pub steps: usize,
    pub rejected: usize,
    /// Largest top-of-basis weight seen at any accepted step.
    pub max_leakage: f64,
    pub norm_defect: f64,
}

/// Propagates one state across the profile window.
pub fn propagate(
    gen: &GeneratorMatrices,
    profile: &dyn FrequencyProfile,
    psi0: &FockVector,
    settings: &SolverSettings,
) -> Result<FockVector> {
    let mut states = vec![psi0.amplitudes.clone()];
    propagate_states(gen, profile, &mut states, settings)?;
    Ok(FockVector::new(states.pop().unwrap_or_default()))
}

/// Propagates several states with a shared adaptive step sequence. The step
/// size follows a step-doubling estimate of the local error.
pub fn propagate_states(
    gen: &GeneratorMatrices,
    profile: &dyn FrequencyProfile,
    states: &mut [Vec<Complex64>],
    settings: &SolverSettings,
) -> Result<PropagationStats> {
    let dim = gen.dim();
    if let Some(bad) = states.iter().find(|s| s.len() != dim) {
        return Err(Error::InvalidArgument(format!(
            "state of length {} does not match basis dimension {dim}",
            bad.len()
        )));
    }
    for s in states.iter() {
        let defect = (norm_sqr(s) - 1.0).abs();
        if defect > settings.norm_tol {
            return Err(Error::NormDrift {
                drift: defect,
                limit: settings.norm_tol,
            });
        }
    }
    let stepper = stepper_registry().create(&settings.stepper, &Params::new("solver"))?;
    let ham = Hamiltonian::new(gen, profile);
    let mut ws = Workspace::new(dim);
    let initial_norms: Vec<f64> = states.iter().map(|s| norm_sqr(s)).collect();
    let error_scale = 1.0 / ((1u64 << stepper.order()) as f64 - 1.0);
    let exponent = 1.0 / (stepper.order() as f64 + 1.0);

    let mut stats = PropagationStats {
        steps: 0,
        rejected: 0,
        max_leakage: states.iter().map(|s| top_weight(s)).fold(0.0, f64::max),
        norm_defect: 0.0,
    };
    let mut full: Vec<Vec<Complex64>> = states.to_vec();
    let mut halves: Vec<Vec<Complex64>> = states.to_vec();
    let mut dt = 1e-3f64.min(settings.max_step);

    for (a, b) in profile.segments() {
        let mut t = a;
        while t < b {
            if stats.steps + stats.rejected >= settings.max_steps {
                return Err(Error::Integration {
                    t,
                    reason: format!("step budget of {} exhausted", settings.max_steps),
                });
            }
            let step = dt.min(b - t).min(settings.max_step);
            for (dst, src) in full.iter_mut().zip(states.iter()) {
                dst.copy_from_slice(src);
            }
            for (dst, src) in halves.iter_mut().zip(states.iter()) {
                dst.copy_from_slice(src);
            }
            stepper.advance(&ham, t, step, &mut full, &mut ws);
            stepper.advance(&ham, t, 0.5 * step, &mut halves, &mut ws);
            stepper.advance(&ham, t + 0.5 * step, 0.5 * step, &mut halves, &mut ws);
            let err = full
                .iter()
                .zip(halves.iter())
                .map(|(x, y)| {
                    x.iter()
                        .zip(y)
                        .map(|(p, q)| (p - q).norm_sqr())
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max)
                * error_scale;
            if !err.is_finite() {
                return Err(Error::Integration {
                    t,
                    reason: "non-finite error estimate".into(),
                });
            }
            let factor = if err == 0.0 {
                2.0
            } else {
                (0.9 * (settings.local_tol / err).powf(exponent)).clamp(0.2, 2.0)
            };
            if err <= settings.local_tol {
                for (dst, src) in states.iter_mut().zip(halves.iter()) {
                    dst.copy_from_slice(src);
                }
                t = if b - t <= step { b } else { t + step };
                stats.steps += 1;
                let leak = states.iter().map(|s| top_weight(s)).fold(0.0, f64::max);
                stats.max_leakage = stats.max_leakage.max(leak);
                // Only grow from the step actually taken, so a short
                // segment-end step does not shrink the next segment's start.
                if step >= dt {
                    dt = step * factor;
                } else {
                    dt = dt.max(step * factor);
                }
            } else {
                stats.rejected += 1;
                dt = step * factor.min(1.0);
                if dt < 1e-14 * (b - a).max(1.0) {
                    return Err(Error::Integration {
                        t,
                        reason: "step size underflow".into(),
                    });
                }
            }
        }
    }

    stats.norm_defect = states
        .iter()
        .zip(&initial_norms)
        .map(|(s, n0)| (norm_sqr(s) - n0).abs())
        .fold(0.0, f64::max);
    if stats.norm_defect > settings.norm_tol {
        return Err(Error::NormDrift {
            drift: stats.norm_defect,
            limit: settings.norm_tol,
        });
    }
    if stats.max_leakage > settings.leakage_tol {
        return Err(Error::Leakage {
            leakage: stats.max_leakage,
            limit: settings.leakage_tol,
        });
    }
    Ok(stats)
}

/// Side-by-side closed-form and propagated probabilities.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub w_numeric: DMatrix<f64>,
    pub w_closed: DMatrix<f64>,
    pub max_abs_diff: f64,
    pub basis: usize,
    pub leakage: f64,
    pub rho: f64,
    pub norm_defect: f64,
    pub steps: usize,
}

/// Runs both routes for `m ≤ m_max`, `n ≤ n_max` in a basis of size `basis`:
/// classical `ρ` into the closed form, and direct propagation.
pub fn compare(
    model: &OscillatorModel,
    profile: &dyn FrequencyProfile,
    m_max: usize,
    n_max: usize,
    basis: usize,
    settings: &SolverSettings,
) -> Result<OracleReport> {
    profile.validate()?;
    let gen = build_generators(model, basis)?;
    check_level(&gen, "m_max", m_max)?;
    check_level(&gen, "n_max", n_max)?;
    gen.check_algebra(1e-9)?;

    let reflection = compute_rho(profile, settings)?;
    let closed = build_table(model, reflection.rho, m_max, n_max)?;

    let initial = eigenbasis(&gen, profile.omega_minus())?;
    let mut states: Vec<Vec<Complex64>> = (0..=m_max)
        .map(|m| initial.vectors.column(m).iter().copied().collect())
        .collect();
    let stats = propagate_states(&gen, profile, &mut states, settings)?;

    let last = eigenbasis(&gen, profile.omega_plus())?;
    let mut w_numeric = DMatrix::zeros(m_max + 1, n_max + 1);
    for (m, psi) in states.iter().enumerate() {
        for (n, p) in project(&last, psi, n_max).into_iter().enumerate() {
            w_numeric[(m, n)] = p;
        }
    }
    let max_abs_diff = (&w_numeric - &closed.w).abs().max();
    Ok(OracleReport {
        w_numeric,
        w_closed: closed.w,
        max_abs_diff,
        basis,
        leakage: stats.max_leakage,
        rho: reflection.rho,
        norm_defect: stats.norm_defect,
        steps: stats.steps,
    })
}
