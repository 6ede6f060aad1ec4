#![allow(dead_code)]

use num_complex::Complex64;

/// Taylor coefficients `a_0..a_{count-1}` of a function analytic on the
/// closed disc of the given radius, from the trapezoidal rule on the Cauchy
/// integral over `points` equispaced nodes.
pub fn cauchy_coefficients<F>(f: F, radius: f64, points: usize, count: usize) -> Vec<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let samples: Vec<Complex64> = (0..points)
        .map(|l| {
            let theta = 2.0 * std::f64::consts::PI * l as f64 / points as f64;
            f(Complex64::from_polar(radius, theta))
        })
        .collect();
    (0..count)
        .map(|k| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(l, v)| {
                    let theta = 2.0 * std::f64::consts::PI * (k * l) as f64 / points as f64;
                    v * Complex64::from_polar(1.0, -theta)
                })
                .sum();
            (sum / points as f64).re / radius.powi(k as i32)
        })
        .collect()
}

pub fn report(id: u32, title: &str, pass: bool, detail: String) {
    println!(
        "criterion {id:>2} [{}] {title}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}
