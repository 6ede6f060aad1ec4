//! Closed-form transition probabilities `w_mn` between the levels of the
//! singular oscillator before (`m`, frequency `ω₋`) and after (`n`, `ω₊`)
//! the frequency change, together with their generating functions and the
//! adiabatic-invariant ratio.
//!
//! Everything depends on the model only through the weight `j` and on the
//! dynamics only through the reflection parameter `ρ ∈ [0, 1)`.

use std::fmt::Debug;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::OscillatorModel;
use crate::registry::{Params, Registry};
use crate::special::{
    gamma_ratio, hyp2f1_terminating_balanced, jacobi_p, log_factorial, log_rising,
};

/// Largest admissible `ρ`; closer to 1 the `(1-ρ)^{-2j}` factors are
/// meaningless in double precision.
pub const RHO_MAX: f64 = 1.0 - 1e-9;

/// Tail target used when rows are extended until they carry all the mass.
pub const ROW_TAIL_TOL: f64 = 1e-12;

/// Relative smallness a row entry needs before the tail test may stop it.
const ROW_TAIL_RELATIVE: f64 = 1e-6;

const ROW_MAX_LEN: usize = 1_000_000;

pub fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=RHO_MAX).contains(&rho) {
        Ok(())
    } else {
        Err(Error::range(
            "rho",
            rho,
            format!("requires 0 <= rho <= {RHO_MAX}"),
        ))
    }
}

/// Instantaneous level `E_n = 2ω(n - j)`.
pub fn energy_level(model: &OscillatorModel, n: usize, omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::range("omega", omega, "frequency must be positive"));
    }
    Ok(2.0 * omega * (n as f64 - model.j()))
}

/// One way of evaluating `w_mn`; implementations are interchangeable and
/// selected by name through [`formula_registry`].
pub trait TransitionFormula: Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn probability(&self, model: &OscillatorModel, m: usize, n: usize, rho: f64) -> Result<f64>;
}

/// `(1-ρ)^{-2j} ρ^{L-S}` in log space, or `None` when it vanishes (`ρ = 0`
/// off the diagonal).
fn log_rho_factors(model: &OscillatorModel, gap: usize, rho: f64) -> Option<f64> {
    let mut log = model.two_k() * (-rho).ln_1p();
    if gap > 0 {
        if rho == 0.0 {
            return None;
        }
        log += gap as f64 * rho.ln();
    }
    Some(log)
}

fn exp_times_square(log_prefactor: f64, factor: f64) -> f64 {
    if factor == 0.0 {
        0.0
    } else {
        (log_prefactor + 2.0 * factor.abs().ln()).exp()
    }
}

/// Production route: the Jacobi-polynomial form
/// `w = S!/L! · Γ(L-2j)/Γ(S-2j) · ρ^{L-S} (1-ρ)^{-2j} [P_S^{(L-S, -2j-1)}(1-2ρ)]²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct JacobiForm;

impl TransitionFormula for JacobiForm {
    fn name(&self) -> &'static str {
        "jacobi"
    }

    fn probability(&self, model: &OscillatorModel, m: usize, n: usize, rho: f64) -> Result<f64> {
        check_rho(rho)?;
        if rho == 0.0 {
            return Ok(if m == n { 1.0 } else { 0.0 });
        }
        let (big, small) = (m.max(n), m.min(n));
        let gap = big - small;
        let Some(log_rho) = log_rho_factors(model, gap, rho) else {
            return Ok(0.0);
        };
        let two_k = model.two_k();
        // S!/L! · Γ(L-2j)/Γ(S-2j) = Π_{i<gap} (S - 2j + i)/(S + 1 + i)
        let log_ratio: f64 = (0..gap)
            .map(|i| {
                let i = i as f64;
                ((small as f64 + two_k + i) / (small as f64 + 1.0 + i)).ln()
            })
            .sum();
        let p = jacobi_p(small, gap as f64, two_k - 1.0, 1.0 - 2.0 * rho)?;
        Ok(exp_times_square(log_ratio + log_rho, p))
    }
}

/// Cross-check route: the Gauss hypergeometric form
/// `w = L!/((L-S)!² S!) · Γ(L-2j)/Γ(S-2j) · ρ^{L-S} (1-ρ)^{-2j} [₂F₁(-S, L-2j; L-S+1; ρ)]²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HypergeometricForm;

impl TransitionFormula for HypergeometricForm {
    fn name(&self) -> &'static str {
        "hypergeometric"
    }

    fn probability(&self, model: &OscillatorModel, m: usize, n: usize, rho: f64) -> Result<f64> {
        check_rho(rho)?;
        if rho == 0.0 {
            return Ok(if m == n { 1.0 } else { 0.0 });
        }
        let (big, small) = (m.max(n), m.min(n));
        let gap = big - small;
        let Some(log_rho) = log_rho_factors(model, gap, rho) else {
            return Ok(0.0);
        };
        let two_k = model.two_k();
        let log_fact = log_rising(small as f64 + 1.0, gap) - 2.0 * log_factorial(gap);
        let log_gamma = gamma_ratio(big as f64 + two_k, small as f64 + two_k)?.log_value;
        let f = hyp2f1_terminating_balanced(small, big as f64 + two_k, gap as f64 + 1.0, rho)?;
        Ok(exp_times_square(log_fact + log_gamma + log_rho, f))
    }
}

pub fn formula_registry() -> Registry<dyn TransitionFormula> {
    let mut reg = Registry::new("transition formula");
    reg.register("jacobi", |_| {
        Ok(Box::new(JacobiForm) as Box<dyn TransitionFormula>)
    })
    .register("hypergeometric", |_| {
        Ok(Box::new(HypergeometricForm) as Box<dyn TransitionFormula>)
    });
    reg
}

pub fn formula_by_name(name: &str) -> Result<Box<dyn TransitionFormula>> {
    formula_registry().create(name, &Params::new("task"))
}

/// `w_mn` through the production (Jacobi) route.
pub fn transition_probability(
    model: &OscillatorModel,
    m: usize,
    n: usize,
    rho: f64,
) -> Result<f64> {
    JacobiForm.probability(model, m, n, rho)
}

/// Vacuum excitation `w_0n = Γ(n-2j)/(n! Γ(-2j)) ρⁿ (1-ρ)^{-2j}`.
pub fn vacuum_probability(model: &OscillatorModel, n: usize, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let Some(log_rho) = log_rho_factors(model, n, rho) else {
        return Ok(0.0);
    };
    let two_k = model.two_k();
    let log_gamma = gamma_ratio(n as f64 + two_k, two_k)?.log_value;
    Ok((log_gamma - log_factorial(n) + log_rho).exp())
}

/// Probabilities `w_mn` for `m ≤ max_m`, `n ≤ max_n`.
#[derive(Debug, Clone)]
pub struct TransitionTable {
    pub model: OscillatorModel,
    pub rho: f64,
    pub max_m: usize,
    pub max_n: usize,
    /// Row `m`, column `n`.
    pub w: DMatrix<f64>,
    /// `1 - Σ_n w_mn` over the stored columns, per row.
    pub row_tail_mass: Vec<f64>,
}

impl TransitionTable {
    /// Largest `|w_mn - w_nm|` on the common square block.
    pub fn symmetry_defect(&self) -> f64 {
        let k = self.max_m.min(self.max_n);
        let mut worst = 0.0f64;
        for a in 0..=k {
            for b in 0..=k {
                worst = worst.max((self.w[(a, b)] - self.w[(b, a)]).abs());
            }
        }
        worst
    }
}

pub fn build_table(
    model: &OscillatorModel,
    rho: f64,
    max_m: usize,
    max_n: usize,
) -> Result<TransitionTable> {
    build_table_with(&JacobiForm, model, rho, max_m, max_n)
}

pub fn build_table_with(
    formula: &dyn TransitionFormula,
    model: &OscillatorModel,
    rho: f64,
    max_m: usize,
    max_n: usize,
) -> Result<TransitionTable> {
    check_rho(rho)?;
    let mut w = DMatrix::zeros(max_m + 1, max_n + 1);
    for m in 0..=max_m {
        for n in 0..=max_n {
            w[(m, n)] = formula.probability(model, m, n, rho)?;
        }
    }
    let row_tail_mass = (0..=max_m).map(|m| 1.0 - w.row(m).sum()).collect();
    Ok(TransitionTable {
        model: *model,
        rho,
        max_m,
        max_n,
        w,
        row_tail_mass,
    })
}

/// Row `m` extended until what is left beyond it is provably small.
#[derive(Debug, Clone)]
pub struct TruncatedRow {
    pub w: Vec<f64>,
    /// Geometric bound on `Σ_{n > last} w_mn`.
    pub tail_bound: f64,
}

/// Extends row `m` until the entries are small relative to the row maximum
/// and the geometric tail bound `w_n r/(1-r)` (with `r = w_n/w_{n-1}`, which
/// decreases towards `ρ`) has stayed below `tail_tol` for several
/// consecutive `n`.
pub fn truncated_row(
    model: &OscillatorModel,
    m: usize,
    rho: f64,
    tail_tol: f64,
) -> Result<TruncatedRow> {
    check_rho(rho)?;
    let mut w = Vec::new();
    let mut max_row = 0.0f64;
    let mut streak = 0;
    for n in 0..ROW_MAX_LEN {
        let v = transition_probability(model, m, n, rho)?;
        max_row = max_row.max(v);
        w.push(v);
        if rho == 0.0 && n >= m {
            return Ok(TruncatedRow { w, tail_bound: 0.0 });
        }
        if n < 2 * m + 2 {
            continue;
        }
        let prev = w[n - 1];
        let r = if prev > 0.0 { v / prev } else { f64::INFINITY };
        let bound = if r < 1.0 {
            v * r / (1.0 - r)
        } else {
            f64::INFINITY
        };
        if bound < tail_tol && v < ROW_TAIL_RELATIVE * max_row {
            streak += 1;
            if streak >= 4 {
                return Ok(TruncatedRow {
                    w,
                    tail_bound: bound,
                });
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::Truncation(format!(
        "row m = {m} did not converge within {ROW_MAX_LEN} columns at rho = {rho}"
    )))
}

fn check_pole(rho: f64, z: Complex64) -> Result<Complex64> {
    let denom = Complex64::new(1.0, 0.0) - rho * z;
    if denom.norm() <= 4.0 * f64::EPSILON * (1.0 + (rho * z).norm()) {
        return Err(Error::Pole { at: 1.0 / rho });
    }
    Ok(denom)
}

/// `G₀(z) = Σ_n w_0n zⁿ = ((1-ρ)/(1-ρz))^{-2j}`, principal branch.
pub fn generating_g0(model: &OscillatorModel, rho: f64, z: Complex64) -> Result<Complex64> {
    check_rho(rho)?;
    let denom = check_pole(rho, z)?;
    let base = Complex64::from(1.0 - rho) / denom;
    Ok(base.powf(model.two_k()))
}

/// `G₁(z) = Σ_n w_1n zⁿ = ((1-ρ)/(1-ρz))^{-2j+2} (-2jρ((1-z)/(1-ρ))² + z)`.
pub fn generating_g1(model: &OscillatorModel, rho: f64, z: Complex64) -> Result<Complex64> {
    check_rho(rho)?;
    let denom = check_pole(rho, z)?;
    let base = Complex64::from(1.0 - rho) / denom;
    let one = Complex64::from(1.0);
    let q = (one - z) / (1.0 - rho);
    Ok(base.powf(model.two_k() + 2.0) * (model.two_k() * rho * q * q + z))
}

/// Ratio of final to initial adiabatic invariant, `(1+ρ)/(1-ρ)`.
pub fn adiabatic_invariant_ratio(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok((1.0 + rho) / (1.0 - rho))
}

/// Summed estimate of the adiabatic ratio from a truncated row,
/// `Σ_n (n-j) w_mn / (m-j)`, next to the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanExcitation {
    pub closed: f64,
    pub summed: f64,
    pub residual: f64,
    /// Columns summed.
    pub terms: usize,
    /// Probability mass of the row beyond the summed columns (bound).
    pub tail_bound: f64,
}

pub fn mean_excitation(model: &OscillatorModel, m: usize, rho: f64) -> Result<MeanExcitation> {
    let closed = adiabatic_invariant_ratio(rho)?;
    let row = truncated_row(model, m, rho, ROW_TAIL_TOL)?;
    let j = model.j();
    let summed = row
        .w
        .iter()
        .enumerate()
        .map(|(n, w)| (n as f64 - j) * w)
        .sum::<f64>()
        / (m as f64 - j);
    Ok(MeanExcitation {
        closed,
        summed,
        residual: (summed - closed).abs(),
        terms: row.w.len(),
        tail_bound: row.tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_model;

    fn boundary() -> OscillatorModel {
        OscillatorModel::with_boundary(-1.0, true).unwrap()
    }

    #[test]
    fn energy_levels() {
        assert_eq!(
            energy_level(&make_model(3.0).unwrap(), 0, 1.0).unwrap(),
            2.0
        );
        assert_eq!(
            energy_level(&make_model(0.0).unwrap(), 2, 0.5).unwrap(),
            2.75
        );
        let m = make_model(1.7).unwrap();
        for n in 0..10 {
            let gap = energy_level(&m, n + 1, 0.8).unwrap() - energy_level(&m, n, 0.8).unwrap();
            assert!((gap - 1.6).abs() < 1e-14);
        }
        assert!(energy_level(&m, 0, 0.0).is_err());
    }

    #[test]
    fn rho_zero_is_identity() {
        let m = make_model(2.0).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((transition_probability(&m, a, b, 0.0).unwrap() - expect).abs() < 1e-14);
                assert!(
                    (HypergeometricForm.probability(&m, a, b, 0.0).unwrap() - expect).abs() < 1e-14
                );
            }
        }
    }

    #[test]
    fn boundary_coupling_closed_values() {
        let m = boundary();
        assert!((transition_probability(&m, 0, 2, 0.5).unwrap() - 0.125).abs() < 1e-15);
        // ₂F₁(-1, 2; 1; ρ) = 1 - 2ρ vanishes at ρ = 1/2.
        assert!(transition_probability(&m, 1, 1, 0.5).unwrap().abs() < 1e-15);
        for n in 0..8 {
            let expect = 0.3f64.powi(n as i32) * 0.7;
            assert!(
                (vacuum_probability(&m, n, 0.3).unwrap() - expect).abs() < 1e-15 * (1.0 + expect)
            );
        }
    }

    #[test]
    fn vacuum_formula_known_value() {
        // g = 0: Γ(5/2)/(1! Γ(3/2)) · 0.36 · 0.64^{3/2} = 1.5 · 0.36 · 0.512
        let m = make_model(0.0).unwrap();
        let v = vacuum_probability(&m, 1, 0.36).unwrap();
        assert!((v - 0.27648).abs() < 1e-15, "{v}");
        assert!((vacuum_probability(&m, 0, 0.36).unwrap() - 0.64f64.powf(1.5)).abs() < 1e-15);
    }

    #[test]
    fn rho_range_is_enforced() {
        let m = make_model(0.0).unwrap();
        for rho in [-0.1, 1.0, 1.0 - 1e-10, f64::NAN] {
            assert!(matches!(
                transition_probability(&m, 0, 1, rho),
                Err(Error::Range { .. })
            ));
            assert!(vacuum_probability(&m, 1, rho).is_err());
            assert!(adiabatic_invariant_ratio(rho).is_err());
        }
        assert!(transition_probability(&m, 0, 1, RHO_MAX).is_ok());
    }

    #[test]
    fn table_symmetry_and_identity() {
        let m = make_model(2.0).unwrap();
        let t = build_table(&m, 0.3, 6, 6).unwrap();
        assert!((t.w[(3, 5)] - t.w[(5, 3)]).abs() < 1e-12);
        assert_eq!(t.symmetry_defect(), 0.0);
        let id = build_table(&m, 0.0, 3, 3).unwrap();
        assert_eq!(id.w, DMatrix::identity(4, 4));
        assert!(id.row_tail_mass.iter().all(|&r| r.abs() < 1e-15));
    }

    #[test]
    fn truncated_rows_are_normalized() {
        let m = make_model(0.0).unwrap();
        for row in 0..4 {
            let r = truncated_row(&m, row, 0.5, 1e-12).unwrap();
            let total: f64 = r.w.iter().sum();
            assert!((total - 1.0).abs() < 1e-10, "row {row}: {total}");
        }
    }

    #[test]
    fn generating_functions_special_points() {
        let m = make_model(0.0).unwrap();
        let rho = 0.4;
        let one = Complex64::from(1.0);
        let zero = Complex64::from(0.0);
        assert!((generating_g0(&m, rho, one).unwrap() - one).norm() < 1e-15);
        assert!((generating_g1(&m, rho, one).unwrap() - one).norm() < 1e-15);
        let w00 = transition_probability(&m, 0, 0, rho).unwrap();
        let w10 = transition_probability(&m, 1, 0, rho).unwrap();
        assert!((generating_g0(&m, rho, zero).unwrap().re - w00).abs() < 1e-15);
        assert!((generating_g1(&m, rho, zero).unwrap().re - w10).abs() < 1e-15);
        // Geometric series at the boundary coupling: (1/2)/(1 - 1/4).
        let g = generating_g0(&boundary(), 0.5, Complex64::from(0.5)).unwrap();
        assert!((g.re - 2.0 / 3.0).abs() < 1e-15 && g.im.abs() < 1e-15);
        assert!(matches!(
            generating_g0(&m, 0.5, Complex64::from(2.0)),
            Err(Error::Pole { .. })
        ));
        assert!(generating_g1(&m, 0.25, Complex64::from(4.0)).is_err());
    }

    #[test]
    fn adiabatic_ratio_values() {
        assert_eq!(adiabatic_invariant_ratio(0.0).unwrap(), 1.0);
        assert_eq!(adiabatic_invariant_ratio(0.5).unwrap(), 3.0);
        let d = mean_excitation(&boundary(), 0, 0.3).unwrap();
        assert!(d.residual < 1e-10, "{d:?}");
    }

    #[test]
    fn formula_registry_names() {
        assert_eq!(formula_registry().names(), vec!["hypergeometric", "jacobi"]);
        assert_eq!(formula_by_name("jacobi").unwrap().name(), "jacobi");
        assert!(formula_by_name("legendre").is_err());
    }
}
