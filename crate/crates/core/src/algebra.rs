//! Truncated matrix realization of the positive discrete series of su(1,1)
//! and the Hamiltonian `H(ω) = (ω²+1) J0 + (ω²-1) J2` built from it.
//!
//! Basis vectors are the eigenstates of `J0` with eigenvalues `n - j`,
//! `n = 0..N-1`. The raising operator has real positive elements
//! `<n+1|J+|n> = sqrt((n+1)(n-2j))`, and `J1 = (J+ + J-)/2`,
//! `J2 = (J+ - J-)/(2i)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::OscillatorModel;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense generator matrices of the truncated representation.
#[derive(Debug, Clone)]
pub struct GeneratorMatrices {
    model: OscillatorModel,
    dim: usize,
    /// `raising[n] = <n+1|J+|n>` for `n = 0..N-2`.
    raising: Vec<f64>,
    pub j0: DMatrix<Complex64>,
    pub j1: DMatrix<Complex64>,
    pub j2: DMatrix<Complex64>,
}

/// Worst entrywise violation of the commutation relations and of the
/// Casimir identity, measured away from the truncation edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraDefects {
    pub commutators: f64,
    pub casimir: f64,
}

pub fn build_generators(model: &OscillatorModel, dim: usize) -> Result<GeneratorMatrices> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "basis dimension must be at least 2, got {dim}"
        )));
    }
    let j = model.j();
    let raising: Vec<f64> = (0..dim - 1)
        .map(|n| ((n as f64 + 1.0) * (n as f64 - 2.0 * j)).sqrt())
        .collect();

    let mut j0 = DMatrix::zeros(dim, dim);
    let mut j1 = DMatrix::zeros(dim, dim);
    let mut j2 = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        j0[(n, n)] = Complex64::new(n as f64 - j, 0.0);
    }
    for (n, &r) in raising.iter().enumerate() {
        // J+ sits below the diagonal, J- = (J+)^† above it.
        j1[(n + 1, n)] = Complex64::new(0.5 * r, 0.0);
        j1[(n, n + 1)] = Complex64::new(0.5 * r, 0.0);
        j2[(n + 1, n)] = -0.5 * I * r;
        j2[(n, n + 1)] = 0.5 * I * r;
    }
    Ok(GeneratorMatrices {
        model: *model,
        dim,
        raising,
        j0,
        j1,
        j2,
    })
}

impl GeneratorMatrices {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn model(&self) -> &OscillatorModel {
        &self.model
    }

    pub fn raising(&self) -> &[f64] {
        &self.raising
    }

    /// `H(ω)` in banded form; this is what the propagator consumes.
    pub fn hamiltonian_tridiagonal(&self, omega: f64) -> Result<HermitianTridiagonal> {
        check_omega(omega)?;
        Ok(self.tridiagonal_unchecked(omega))
    }

    pub(crate) fn tridiagonal_unchecked(&self, omega: f64) -> HermitianTridiagonal {
        let w2 = omega * omega;
        let j = self.model.j();
        HermitianTridiagonal {
            diag: (0..self.dim).map(|n| (w2 + 1.0) * (n as f64 - j)).collect(),
            upper: self
                .raising
                .iter()
                .map(|&r| 0.5 * I * r * (w2 - 1.0))
                .collect(),
        }
    }

    pub fn algebra_defects(&self) -> AlgebraDefects {
        // All generators are tridiagonal, so every product lives on the
        // pentadiagonal band; entries outside it vanish identically.
        let n = self.dim;
        let interior = n - 1;
        let prod = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, r: usize, c: usize| {
            let lo = r.max(c).saturating_sub(1);
            let hi = (r.min(c) + 1).min(n - 1);
            (lo..=hi).map(|k| a[(r, k)] * b[(k, c)]).sum::<Complex64>()
        };
        let comm = |a, b, r, c| prod(a, b, r, c) - prod(b, a, r, c);
        let jj = self.model.casimir();
        let (j0, j1, j2) = (&self.j0, &self.j1, &self.j2);

        let mut commutators = 0.0f64;
        let mut casimir = 0.0f64;
        for r in 0..interior {
            for c in r.saturating_sub(2)..(r + 3).min(interior) {
                let c12 = comm(j1, j2, r, c) + I * j0[(r, c)];
                let c20 = comm(j2, j0, r, c) - I * j1[(r, c)];
                let c01 = comm(j0, j1, r, c) - I * j2[(r, c)];
                commutators = commutators.max(c12.norm()).max(c20.norm()).max(c01.norm());
                let cas = prod(j0, j0, r, c) - prod(j1, j1, r, c) - prod(j2, j2, r, c);
                let target = if r == c { jj } else { 0.0 };
                casimir = casimir.max((cas - target).norm());
            }
        }
        AlgebraDefects {
            commutators,
            casimir,
        }
    }

    /// Fails if the algebra relations are violated beyond `tol`.
    pub fn check_algebra(&self, tol: f64) -> Result<AlgebraDefects> {
        let d = self.algebra_defects();
        if d.commutators > tol || d.casimir > tol {
            return Err(Error::Algebra(format!(
                "commutator defect {:e}, Casimir defect {:e} (tolerance {tol:e})",
                d.commutators, d.casimir
            )));
        }
        Ok(d)
    }
}

/// Dense `H(ω) = (ω²+1) J0 + (ω²-1) J2`.
pub fn hamiltonian_matrix(gen: &GeneratorMatrices, omega: f64) -> Result<DMatrix<Complex64>> {
    check_omega(omega)?;
    let w2 = omega * omega;
    Ok(&gen.j0 * Complex64::from(w2 + 1.0) + &gen.j2 * Complex64::from(w2 - 1.0))
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::range("omega", omega, "frequency must be positive"))
    }
}

/// Hermitian tridiagonal matrix: real diagonal, complex superdiagonal
/// (`H[n][n+1] = upper[n]`, `H[n+1][n] = conj(upper[n])`).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianTridiagonal {
    pub diag: Vec<f64>,
    pub upper: Vec<Complex64>,
}

impl HermitianTridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (k, &d) in self.diag.iter().enumerate() {
            m[(k, k)] = Complex64::from(d);
        }
        for (k, &u) in self.upper.iter().enumerate() {
            m[(k, k + 1)] = u;
            m[(k + 1, k)] = u.conj();
        }
        m
    }

    /// `out = H x`.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.dim();
        for k in 0..n {
            let mut acc = x[k] * self.diag[k];
            if k + 1 < n {
                acc += self.upper[k] * x[k + 1];
            }
            if k > 0 {
                acc += self.upper[k - 1].conj() * x[k - 1];
            }
            out[k] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_model;
    use nalgebra::SymmetricEigen;

    fn is_hermitian(m: &DMatrix<Complex64>) -> bool {
        (m - m.adjoint()).iter().all(|z| z.norm() < 1e-14)
    }

    #[test]
    fn smallest_basis_matrix_element() {
        let model = OscillatorModel::with_boundary(-1.0, true).unwrap();
        let gen = build_generators(&model, 2).unwrap();
        assert_eq!(gen.raising(), &[1.0]);
        assert!(build_generators(&model, 1).is_err());
    }

    #[test]
    fn j0_diagonal_is_shifted_level_index() {
        let model = make_model(1.3).unwrap();
        let gen = build_generators(&model, 7).unwrap();
        for n in 0..7 {
            assert_eq!(gen.j0[(n, n)].re, n as f64 - model.j());
            assert_eq!(gen.j0[(n, n)].im, 0.0);
        }
        assert!(is_hermitian(&gen.j1) && is_hermitian(&gen.j2));
    }

    #[test]
    fn casimir_interior_rows_small_basis() {
        let gen = build_generators(&make_model(3.0).unwrap(), 6).unwrap();
        let d = gen.algebra_defects();
        assert!(d.casimir < 1e-12, "{d:?}");
        assert!(d.commutators < 1e-12, "{d:?}");
    }

    #[test]
    fn banded_defects_match_dense_products() {
        let gen = build_generators(&make_model(0.5).unwrap(), 9).unwrap();
        let cas = &gen.j0 * &gen.j0 - &gen.j1 * &gen.j1 - &gen.j2 * &gen.j2;
        let c12 = &gen.j1 * &gen.j2 - &gen.j2 * &gen.j1 + &gen.j0 * I;
        let mut dense_cas = 0.0f64;
        let mut dense_comm = 0.0f64;
        for r in 0..8 {
            for c in 0..8 {
                let t = if r == c { gen.model().casimir() } else { 0.0 };
                dense_cas = dense_cas.max((cas[(r, c)] - t).norm());
                dense_comm = dense_comm.max(c12[(r, c)].norm());
            }
        }
        let d = gen.algebra_defects();
        assert!(dense_cas < 1e-12 && d.casimir < 1e-12);
        assert!(dense_comm < 1e-12 && d.commutators < 1e-12);
    }

    #[test]
    fn truncation_edge_breaks_casimir_in_last_row() {
        let gen = build_generators(&make_model(0.0).unwrap(), 5).unwrap();
        let cas = &gen.j0 * &gen.j0 - &gen.j1 * &gen.j1 - &gen.j2 * &gen.j2;
        assert!((cas[(4, 4)].re - gen.model().casimir()).abs() > 1e-3);
    }

    #[test]
    fn hamiltonian_special_frequencies() {
        let model = make_model(0.7).unwrap();
        let gen = build_generators(&model, 8).unwrap();
        let h1 = hamiltonian_matrix(&gen, 1.0).unwrap();
        let h2 = hamiltonian_matrix(&gen, 2.0).unwrap();
        for n in 0..8 {
            let lam = n as f64 - model.j();
            assert!((h1[(n, n)].re - 2.0 * lam).abs() < 1e-14);
            assert!((h2[(n, n)].re - 5.0 * lam).abs() < 1e-13);
            for m in 0..8 {
                if m != n {
                    assert_eq!(h1[(n, m)], Complex64::new(0.0, 0.0));
                }
                if (m as i64 - n as i64).abs() > 1 {
                    assert_eq!(h2[(n, m)], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert!(is_hermitian(&h2));
        assert!(hamiltonian_matrix(&gen, 0.0).is_err());
        assert!(hamiltonian_matrix(&gen, -1.0).is_err());
        assert_eq!(gen.hamiltonian_tridiagonal(2.0).unwrap().to_dense(), h2);
    }

    #[test]
    fn tridiagonal_apply_matches_dense() {
        let gen = build_generators(&make_model(2.0).unwrap(), 9).unwrap();
        let h = gen.hamiltonian_tridiagonal(1.7).unwrap();
        let x: Vec<Complex64> = (0..9)
            .map(|k| Complex64::new(k as f64 * 0.3 - 1.0, 0.1 * k as f64))
            .collect();
        let mut y = vec![Complex64::default(); 9];
        h.apply(&x, &mut y);
        let dense = h.to_dense() * nalgebra::DVector::from_vec(x);
        for k in 0..9 {
            assert!((dense[k] - y[k]).norm() < 1e-13);
        }
    }

    #[test]
    fn low_spectrum_is_equidistant() {
        // Large basis: the truncation edge only distorts the top eigenvalues.
        let model = make_model(0.0).unwrap();
        let gen = build_generators(&model, 200).unwrap();
        let omega = 2.0;
        let eig = SymmetricEigen::new(hamiltonian_matrix(&gen, omega).unwrap());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (n, e) in ev.iter().take(10).enumerate() {
            let exact = 2.0 * omega * (n as f64 - model.j());
            assert!(((e - exact) / exact).abs() < 1e-8, "n={n}: {e} vs {exact}");
        }
    }
}
