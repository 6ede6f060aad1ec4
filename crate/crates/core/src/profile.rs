//! Time-dependent frequency profiles `ω(t)`.
//!
//! Every profile kind implements [`FrequencyProfile`] and is registered by
//! name in [`profile_registry`], so a run configuration can pick one at
//! runtime: `constant`, `sudden_jump`, `tanh_step`, `piecewise_linear` and
//! `table`.

use std::fmt::Debug;
use std::path::Path;

use crate::error::{Error, Result};
use crate::registry::{Params, Registry};

/// Relative tolerance for `ω` at the window ends versus its asymptotes.
pub const ASYMPTOTE_TOL: f64 = 1e-8;

pub trait FrequencyProfile: Debug + Send + Sync {
    fn kind(&self) -> &'static str;

    fn omega(&self, t: f64) -> f64;

    fn omega_minus(&self) -> f64;

    fn omega_plus(&self) -> f64;

    /// Matching window `(t_start, t_end)`.
    fn window(&self) -> (f64, f64);

    /// Interior points where `ω` or its derivatives jump. Integrators land
    /// exactly on these.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<'a> dyn FrequencyProfile + 'a {
    /// Window split at the breakpoints into smooth segments.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        let (a, b) = self.window();
        let mut cuts: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .filter(|&t| t > a && t < b)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut lo = a;
        for c in cuts {
            out.push((lo, c));
            lo = c;
        }
        out.push((lo, b));
        out
    }

    /// Checks positivity of `ω` over the window and flatness at its ends.
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.window();
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidProfile(format!(
                "window [{a}, {b}] must be finite and non-empty"
            )));
        }
        for (lo, hi) in self.segments() {
            for k in 0..=64 {
                let t = lo + (hi - lo) * k as f64 / 64.0;
                let w = self.omega(t);
                if !(w > 0.0) || !w.is_finite() {
                    return Err(Error::InvalidProfile(format!(
                        "omega({t}) = {w} is not positive"
                    )));
                }
            }
        }
        for (t, asymptote) in [(a, self.omega_minus()), (b, self.omega_plus())] {
            let w = self.omega(t);
            if (w - asymptote).abs() >= ASYMPTOTE_TOL * asymptote {
                return Err(Error::AsymptoteNotReached {
                    t,
                    omega: w,
                    asymptote,
                    tol: ASYMPTOTE_TOL * asymptote,
                });
            }
        }
        Ok(())
    }
}

fn positive(params: &Params, key: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidProfile(format!(
            "{}: must be positive, got {value}",
            params.locate(key)
        )))
    }
}

fn positive_param(params: &Params, key: &str) -> Result<f64> {
    positive(params, key, params.require(key)?)
}

fn window_override(params: &Params, default: (f64, f64)) -> Result<(f64, f64)> {
    Ok((
        params.get_or("t_start", default.0)?,
        params.get_or("t_end", default.1)?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constant {
    pub omega: f64,
    pub window: (f64, f64),
}

impl Constant {
    pub fn new(omega: f64) -> Self {
        Constant {
            omega,
            window: (0.0, 10.0),
        }
    }

    fn from_params(p: &Params) -> Result<Box<dyn FrequencyProfile>> {
        let omega = positive_param(p, "omega")?;
        Ok(Box::new(Constant {
            omega,
            window: window_override(p, (0.0, 10.0))?,
        }))
    }
}

impl FrequencyProfile for Constant {
    fn kind(&self) -> &'static str {
        "constant"
    }
    fn omega(&self, _t: f64) -> f64 {
        self.omega
    }
    fn omega_minus(&self) -> f64 {
        self.omega
    }
    fn omega_plus(&self) -> f64 {
        self.omega
    }
    fn window(&self) -> (f64, f64) {
        self.window
    }
}

/// Instantaneous switch at `t_jump`, or a linear ramp in `ω` of the given
/// width centred on `t_jump`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuddenJump {
    pub omega_minus: f64,
    pub omega_plus: f64,
    pub t_jump: f64,
    pub width: f64,
    pub window: (f64, f64),
}

impl SuddenJump {
    pub fn new(omega_minus: f64, omega_plus: f64) -> Self {
        Self::smoothed(omega_minus, omega_plus, 0.0)
    }

    pub fn smoothed(omega_minus: f64, omega_plus: f64, width: f64) -> Self {
        SuddenJump {
            omega_minus,
            omega_plus,
            t_jump: 0.0,
            width,
            window: (-5.0 - width, 5.0 + width),
        }
    }

    fn from_params(p: &Params) -> Result<Box<dyn FrequencyProfile>> {
        let omega_minus = positive_param(p, "omega_minus")?;
        let omega_plus = positive_param(p, "omega_plus")?;
        let t_jump = p.get_or("t_jump", 0.0)?;
        let width: f64 = p.get_or("width", 0.0)?;
        if !(width >= 0.0) {
            return Err(Error::InvalidProfile(format!(
                "{}: must be non-negative, got {width}",
                p.locate("width")
            )));
        }
        let margin = 5.0 + width;
        Ok(Box::new(SuddenJump {
            omega_minus,
            omega_plus,
            t_jump,
            width,
            window: window_override(p, (t_jump - margin, t_jump + margin))?,
        }))
    }
}

impl FrequencyProfile for SuddenJump {
    fn kind(&self) -> &'static str {
        "sudden_jump"
    }
    fn omega(&self, t: f64) -> f64 {
        let x = t - self.t_jump;
        if self.width == 0.0 {
            return if x < 0.0 {
                self.omega_minus
            } else {
                self.omega_plus
            };
        }
        let h = 0.5 * self.width;
        if x <= -h {
            self.omega_minus
        } else if x >= h {
            self.omega_plus
        } else {
            self.omega_minus + (self.omega_plus - self.omega_minus) * (x + h) / self.width
        }
    }
    fn omega_minus(&self) -> f64 {
        self.omega_minus
    }
    fn omega_plus(&self) -> f64 {
        self.omega_plus
    }
    fn window(&self) -> (f64, f64) {
        self.window
    }
    fn breakpoints(&self) -> Vec<f64> {
        if self.width == 0.0 {
            vec![self.t_jump]
        } else {
            vec![
                self.t_jump - 0.5 * self.width,
                self.t_jump + 0.5 * self.width,
            ]
        }
    }
}

/// `ω(t) = (ω₋+ω₊)/2 + (ω₊-ω₋)/2 · tanh((t - center)/τ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TanhStep {
    pub omega_minus: f64,
    pub omega_plus: f64,
    pub tau: f64,
    pub center: f64,
    pub window: (f64, f64),
}

/// Default half-width of the tanh window in units of `τ`.
pub const TANH_WINDOW_TAUS: f64 = 25.0;

impl TanhStep {
    pub fn new(omega_minus: f64, omega_plus: f64, tau: f64) -> Self {
        Self::centered(omega_minus, omega_plus, tau, 0.0)
    }

    pub fn centered(omega_minus: f64, omega_plus: f64, tau: f64, center: f64) -> Self {
        let half = TANH_WINDOW_TAUS * tau;
        TanhStep {
            omega_minus,
            omega_plus,
            tau,
            center,
            window: (center - half, center + half),
        }
    }

    fn from_params(p: &Params) -> Result<Box<dyn FrequencyProfile>> {
        let omega_minus = positive_param(p, "omega_minus")?;
        let omega_plus = positive_param(p, "omega_plus")?;
        let tau = positive_param(p, "tau")?;
        let center = p.get_or("center", 0.0)?;
        let mut profile = TanhStep::centered(omega_minus, omega_plus, tau, center);
        profile.window = window_override(p, profile.window)?;
        Ok(Box::new(profile))
    }
}

impl FrequencyProfile for TanhStep {
    fn kind(&self) -> &'static str {
        "tanh_step"
    }
    fn omega(&self, t: f64) -> f64 {
        let mid = 0.5 * (self.omega_minus + self.omega_plus);
        let half = 0.5 * (self.omega_plus - self.omega_minus);
        mid + half * ((t - self.center) / self.tau).tanh()
    }
    fn omega_minus(&self) -> f64 {
        self.omega_minus
    }
    fn omega_plus(&self) -> f64 {
        self.omega_plus
    }
    fn window(&self) -> (f64, f64) {
        self.window
    }
}

/// Knots `(t, ω)` shared by the sampled profile kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub t: Vec<f64>,
    pub omega: Vec<f64>,
}

impl Samples {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidProfile(format!(
                "need at least two samples, got {}",
                points.len()
            )));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidProfile(format!(
                    "sample {}: t = {} does not increase strictly",
                    i + 2,
                    w[1].0
                )));
            }
        }
        if let Some((t, w)) = points.iter().find(|(_, w)| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "omega({t}) = {w} is not positive"
            )));
        }
        Ok(Samples {
            t: points.iter().map(|p| p.0).collect(),
            omega: points.iter().map(|p| p.1).collect(),
        })
    }

    fn interval(&self, t: f64) -> Option<usize> {
        let n = self.t.len();
        if t <= self.t[0] || t >= self.t[n - 1] {
            return None;
        }
        Some(self.t.partition_point(|&x| x <= t) - 1)
    }

    fn first(&self) -> f64 {
        self.omega[0]
    }

    fn last(&self) -> f64 {
        self.omega[self.omega.len() - 1]
    }

    fn span(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }
}

/// Parses the two-column `t omega` text format; `#` starts a comment.
pub fn parse_profile_table(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || {
            Error::InvalidProfile(format!(
                "line {}: expected two numbers 't omega', got '{line}'",
                lineno + 1
            ))
        };
        if fields.len() != 2 {
            return Err(bad());
        }
        let t: f64 = fields[0].parse().map_err(|_| bad())?;
        let w: f64 = fields[1].parse().map_err(|_| bad())?;
        if !t.is_finite() || !(w > 0.0) || !w.is_finite() {
            return Err(Error::InvalidProfile(format!(
                "line {}: need finite t and omega > 0, got '{line}'",
                lineno + 1
            )));
        }
        if let Some(&(prev, _)) = points.last() {
            if !(t > prev) {
                return Err(Error::InvalidProfile(format!(
                    "line {}: t = {t} does not increase strictly",
                    lineno + 1
                )));
            }
        }
        points.push((t, w));
    }
    Samples::new(points.clone())?;
    Ok(points)
}

pub fn load_profile_table(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidProfile(format!("cannot read profile table {}: {e}", path.display()))
    })?;
    parse_profile_table(&text).map_err(|e| match e {
        Error::InvalidProfile(msg) => Error::InvalidProfile(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// `points = t0:w0, t1:w1, ...` or `file = path`.
fn samples_from_params(p: &Params) -> Result<Samples> {
    if let Some(path) = p.str("file") {
        return Samples::new(load_profile_table(Path::new(path))?);
    }
    let spec = p.str("points").ok_or_else(|| {
        Error::InvalidProfile(format!("[{}] needs either 'file' or 'points'", p.section()))
    })?;
    let mut points = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parsed = item
            .split_once(':')
            .and_then(|(t, w)| Some((t.trim().parse().ok()?, w.trim().parse().ok()?)));
        match parsed {
            Some(pt) => points.push(pt),
            None => {
                return Err(Error::InvalidProfile(format!(
                    "{}: expected 't:omega', got '{item}'",
                    p.locate("points")
                )))
            }
        }
    }
    Samples::new(points)
}

fn sampled_asymptotes(p: &Params, s: &Samples) -> Result<(f64, f64)> {
    let minus = match p.get::<f64>("omega_minus")? {
        Some(v) => positive(p, "omega_minus", v)?,
        None => s.first(),
    };
    let plus = match p.get::<f64>("omega_plus")? {
        Some(v) => positive(p, "omega_plus", v)?,
        None => s.last(),
    };
    Ok((minus, plus))
}

/// Linear interpolation in `ω` between knots, constant outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    samples: Samples,
    asymptotes: (f64, f64),
    window: (f64, f64),
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        let samples = Samples::new(points)?;
        Ok(PiecewiseLinear {
            asymptotes: (samples.first(), samples.last()),
            window: samples.span(),
            samples,
        })
    }

    fn from_params(p: &Params) -> Result<Box<dyn FrequencyProfile>> {
        let samples = samples_from_params(p)?;
        Ok(Box::new(PiecewiseLinear {
            asymptotes: sampled_asymptotes(p, &samples)?,
            window: window_override(p, samples.span())?,
            samples,
        }))
    }
}

impl FrequencyProfile for PiecewiseLinear {
    fn kind(&self) -> &'static str {
        "piecewise_linear"
    }
    fn omega(&self, t: f64) -> f64 {
        let s = &self.samples;
        match s.interval(t) {
            None if t <= s.t[0] => s.first(),
            None => s.last(),
            Some(i) => {
                let f = (t - s.t[i]) / (s.t[i + 1] - s.t[i]);
                s.omega[i] + f * (s.omega[i + 1] - s.omega[i])
            }
        }
    }
    fn omega_minus(&self) -> f64 {
        self.asymptotes.0
    }
    fn omega_plus(&self) -> f64 {
        self.asymptotes.1
    }
    fn window(&self) -> (f64, f64) {
        self.window
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.samples.t.clone()
    }
}

/// Tabulated profile interpolated with a monotone cubic Hermite scheme in
/// `ω²`, constant outside the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    samples: Samples,
    /// `ω²` at the knots and the monotone slopes of `ω²`.
    w2: Vec<f64>,
    slopes: Vec<f64>,
    asymptotes: (f64, f64),
    window: (f64, f64),
}

impl Table {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        let samples = Samples::new(points)?;
        let asymptotes = (samples.first(), samples.last());
        let window = samples.span();
        Ok(Self::build(samples, asymptotes, window))
    }

    fn build(samples: Samples, asymptotes: (f64, f64), window: (f64, f64)) -> Self {
        let w2: Vec<f64> = samples.omega.iter().map(|w| w * w).collect();
        let slopes = monotone_slopes(&samples.t, &w2);
        Table {
            samples,
            w2,
            slopes,
            asymptotes,
            window,
        }
    }

    fn from_params(p: &Params) -> Result<Box<dyn FrequencyProfile>> {
        let samples = samples_from_params(p)?;
        let asymptotes = sampled_asymptotes(p, &samples)?;
        let window = window_override(p, samples.span())?;
        Ok(Box::new(Self::build(samples, asymptotes, window)))
    }
}

/// Fritsch–Carlson slopes with the shape-preserving three-point end rule.
fn monotone_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (d0, d1) = (delta[k - 1], delta[k]);
        if d0 * d1 > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    let end = |h0: f64, h1: f64, m0: f64, m1: f64| {
        let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if d.signum() != m0.signum() {
            0.0
        } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
            3.0 * m0
        } else {
            d
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

impl FrequencyProfile for Table {
    fn kind(&self) -> &'static str {
        "table"
    }
    fn omega(&self, t: f64) -> f64 {
        let s = &self.samples;
        match s.interval(t) {
            None if t <= s.t[0] => s.first(),
            None => s.last(),
            Some(i) => {
                let h = s.t[i + 1] - s.t[i];
                let u = (t - s.t[i]) / h;
                let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
                let h10 = u * (1.0 - u) * (1.0 - u);
                let h01 = u * u * (3.0 - 2.0 * u);
                let h11 = u * u * (u - 1.0);
                let w2 = h00 * self.w2[i]
                    + h10 * h * self.slopes[i]
                    + h01 * self.w2[i + 1]
                    + h11 * h * self.slopes[i + 1];
                w2.sqrt()
            }
        }
    }
    fn omega_minus(&self) -> f64 {
        self.asymptotes.0
    }
    fn omega_plus(&self) -> f64 {
        self.asymptotes.1
    }
    fn window(&self) -> (f64, f64) {
        self.window
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.samples.t.clone()
    }
}

/// All built-in profile kinds keyed by name.
pub fn profile_registry() -> Registry<dyn FrequencyProfile> {
    let mut reg = Registry::new("profile kind");
    reg.register("constant", Constant::from_params)
        .register("sudden_jump", SuddenJump::from_params)
        .register("tanh_step", TanhStep::from_params)
        .register("piecewise_linear", PiecewiseLinear::from_params)
        .register("table", Table::from_params);
    reg
}

/// Builds and validates a profile from a `[profile]` parameter section whose
/// `kind` key selects the registered implementation.
pub fn profile_from_params(params: &Params) -> Result<Box<dyn FrequencyProfile>> {
    let kind = params.str("kind").ok_or_else(|| {
        Error::InvalidProfile(format!("[{}] kind: missing profile kind", params.section()))
    })?;
    let profile = profile_registry().create(kind.trim(), params)?;
    profile.validate()?;
    Ok(profile)
}
