//! Physical configuration of the singular oscillator
//! `H = p²/2 + ω(t)² x²/2 + g/(8x²)` on the half-line.

use crate::error::{Error, Result};

/// Coupling `g` with the derived su(1,1) weight `j` and the near-origin
/// exponent `s` of the eigenfunctions (`ψ ~ x^s` as `x → 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorModel {
    g: f64,
    j: f64,
    s: f64,
}

impl OscillatorModel {
    /// Builds the model, rejecting the collapse regime `g <= -1`.
    pub fn new(g: f64) -> Result<Self> {
        Self::with_boundary(g, false)
    }

    /// Like [`OscillatorModel::new`], but with `allow_boundary` the limiting
    /// value `g = -1` (weight `j = -1/2`) is admitted as well.
    pub fn with_boundary(g: f64, allow_boundary: bool) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "coupling g must be finite, got {g}"
            )));
        }
        if g < -1.0 || (g == -1.0 && !allow_boundary) {
            return Err(Error::Collapse { g });
        }
        let j = -0.5 - 0.25 * (1.0 + g).sqrt();
        Ok(OscillatorModel {
            g,
            j,
            s: -2.0 * j - 0.5,
        })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Representation weight `j = -1/2 - sqrt(1+g)/4`, always `<= -1/2`.
    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn near_origin_exponent(&self) -> f64 {
        self.s
    }

    /// `j(j+1)`, equal to `(g-3)/16`.
    pub fn casimir(&self) -> f64 {
        self.j * (self.j + 1.0)
    }

    /// `-2j`, the exponent that appears throughout the transition formulas.
    pub(crate) fn two_k(&self) -> f64 {
        -2.0 * self.j
    }
}

/// Convenience constructor mirroring [`OscillatorModel::new`].
pub fn make_model(g: f64) -> Result<OscillatorModel> {
    OscillatorModel::new(g)
}
