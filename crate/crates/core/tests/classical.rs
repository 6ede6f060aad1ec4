use proptest::prelude::*;
use singosc::profile::{PiecewiseLinear, SuddenJump, Table, TanhStep};
use singosc::*;

fn rho(profile: &dyn FrequencyProfile) -> ReflectionResult {
    compute_rho(profile, &SolverSettings::default()).unwrap()
}

#[test]
fn time_translation_leaves_rho_unchanged() {
    for tau in [0.3, 1.0, 4.0] {
        let a = rho(&TanhStep::new(1.0, 2.0, tau)).rho;
        let b = rho(&TanhStep::centered(1.0, 2.0, tau, 37.5)).rho;
        let c = rho(&TanhStep::centered(1.0, 2.0, tau, -120.0)).rho;
        assert!(
            (a - b).abs() < 1e-8 && (a - c).abs() < 1e-8,
            "tau={tau}: {a} {b} {c}"
        );
    }
}

#[test]
fn swapping_the_asymptotes_leaves_rho_unchanged() {
    for (wm, wp, tau) in [(1.0, 2.0, 1.0), (0.5, 3.0, 0.4), (1.0, 1.3, 2.5)] {
        let a = rho(&TanhStep::new(wm, wp, tau)).rho;
        let b = rho(&TanhStep::new(wp, wm, tau)).rho;
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
    let a = rho(&SuddenJump::smoothed(1.0, 4.0, 0.2)).rho;
    let b = rho(&SuddenJump::smoothed(4.0, 1.0, 0.2)).rho;
    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
}

#[test]
fn halving_the_step_changes_rho_below_tolerance() {
    let settings = SolverSettings::default();
    let profiles: Vec<Box<dyn FrequencyProfile>> = vec![
        Box::new(TanhStep::new(1.0, 2.0, 1.0)),
        Box::new(TanhStep::new(1.0, 2.0, 0.1)),
        Box::new(SuddenJump::new(1.0, 3.0)),
        Box::new(SuddenJump::smoothed(1.0, 3.0, 0.5)),
    ];
    for p in &profiles {
        let a = compute_rho(p.as_ref(), &settings).unwrap();
        let b = compute_rho(p.as_ref(), &settings.halved()).unwrap();
        assert!(
            (a.rho - b.rho).abs() < 1e-8,
            "{}: {} vs {}",
            p.kind(),
            a.rho,
            b.rho
        );
        assert!(a.wronskian_defect < 1e-8 && b.wronskian_defect < 1e-8);
    }
}

#[test]
fn fast_tanh_approaches_the_sudden_value() {
    let sudden = rho_sudden(1.0, 2.0).unwrap();
    let mut last = f64::INFINITY;
    for tau in [0.1, 0.01, 0.001] {
        let d = (rho(&TanhStep::new(1.0, 2.0, tau)).rho - sudden).abs();
        assert!(d < last);
        last = d;
    }
    assert!(last < 1e-5, "{last}");
}

#[test]
fn known_tanh_reflection() {
    // ω² = a + b tanh(t/τ) has ρ = sinh²(πτ(ω₊-ω₋)/2) / sinh²(πτ(ω₊+ω₋)/2).
    let (wm, wp) = (1.0, 2.0);
    for tau in [0.25, 0.5, 1.0] {
        let p = Table::new(
            (0..=4000)
                .map(|i| {
                    let t = -40.0 + 80.0 * i as f64 / 4000.0;
                    let w2 =
                        0.5 * (wm * wm + wp * wp) + 0.5 * (wp * wp - wm * wm) * (t / tau).tanh();
                    (t, w2.sqrt())
                })
                .collect(),
        )
        .unwrap();
        let exact = ((std::f64::consts::PI * tau * (wp - wm) / 2.0).sinh()
            / (std::f64::consts::PI * tau * (wp + wm) / 2.0).sinh())
        .powi(2);
        let got = rho(&p).rho;
        assert!(
            (got - exact).abs() < 1e-6 * exact.max(1e-3),
            "tau={tau}: {got} vs {exact}"
        );
    }
}

#[test]
fn piecewise_linear_jump_matches_smoothed_jump() {
    let a = rho(&SuddenJump::smoothed(1.0, 2.5, 0.4)).rho;
    let p = PiecewiseLinear::new(vec![(-5.4, 1.0), (-0.2, 1.0), (0.2, 2.5), (5.4, 2.5)]).unwrap();
    let b = rho(&p).rho;
    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wronskian_and_range_hold_for_tanh_steps(
        wm in 0.2f64..4.0,
        wp in 0.2f64..4.0,
        tau in 0.05f64..3.0,
    ) {
        let r = rho(&TanhStep::new(wm, wp, tau));
        prop_assert!(r.wronskian_defect < 1e-8);
        prop_assert!(r.rho >= 0.0 && r.rho <= rho_sudden(wm, wp).unwrap() + 1e-9);
        let flux = r.c.norm_sqr() - r.d.norm_sqr();
        prop_assert!((flux - wm / wp).abs() < 1e-7 * (wm / wp).max(1.0));
    }
}
