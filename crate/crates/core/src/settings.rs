/// Numerical settings shared by the classical reflection solver and the
/// truncated-basis propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    /// Relative tolerance of the classical Runge–Kutta integration.
    pub rtol: f64,
    /// Absolute tolerance of the classical Runge–Kutta integration.
    pub atol: f64,
    /// Upper bound on any step, classical or quantum.
    pub max_step: f64,
    pub max_steps: usize,
    /// Acceptance gate on `| |C|² - |D|² - ω₋/ω₊ |`.
    pub wronskian_tol: f64,
    /// Tolerance-tightening retries (factor 100 each) before a Wronskian
    /// violation is reported.
    pub refinements: usize,
    /// Registered name of the unitary stepper.
    pub stepper: String,
    /// Local error target per propagation step (two-norm of the state).
    pub local_tol: f64,
    pub norm_tol: f64,
    pub leakage_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 20_000_000,
            wronskian_tol: 1e-8,
            refinements: 2,
            stepper: "cayley4".to_string(),
            local_tol: 1e-9,
            norm_tol: 1e-8,
            leakage_tol: 1e-8,
        }
    }
}

impl SolverSettings {
    /// Settings whose typical step is half as long: tolerances shrink by
    /// `2⁵` (fifth-order classical pair) and `2⁵` for the quantum local
    /// error, and the step cap halves.
    pub fn halved(&self) -> Self {
        SolverSettings {
            rtol: self.rtol / 32.0,
            atol: self.atol / 32.0,
            max_step: self.max_step / 2.0,
            local_tol: self.local_tol / 32.0,
            ..self.clone()
        }
    }

    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }

    pub fn with_stepper(mut self, name: &str) -> Self {
        self.stepper = name.to_string();
        self
    }
}
