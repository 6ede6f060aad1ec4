//! The subcommands, each turning a [`RunConfig`] into an output document.

use std::str::FromStr;

use num_complex::Complex64;
use singosc::transitions::{check_rho, formula_by_name, mean_excitation, TransitionFormula};
use singosc::*;

use crate::args::Command;
use crate::config::{located, RunConfig};
use crate::output::Table;
use crate::{CliError, Outcome};

const DEFAULT_MAX: usize = 10;
const DEFAULT_VERIFY_MAX: usize = 5;
const DEFAULT_BASIS: usize = 200;
const DEFAULT_TOL: f64 = 1e-4;

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let table = Table::from_params(&cfg.output)?;
    match command {
        Command::Rho(_) => cmd_rho(cfg, table).map(Outcome::from),
        Command::Levels(_) => cmd_levels(cfg, table).map(Outcome::from),
        Command::Wmn(_) => cmd_wmn(cfg, table).map(Outcome::from),
        Command::Table(_) => cmd_table(cfg, table).map(Outcome::from),
        Command::Gen(_) => cmd_gen(cfg, table).map(Outcome::from),
        Command::Invariant(_) => cmd_invariant(cfg, table).map(Outcome::from),
        Command::Verify(_) => cmd_verify(cfg, table),
    }
}

fn model(cfg: &RunConfig) -> Result<OscillatorModel, CliError> {
    let p = &cfg.model;
    let g = located(p, "g", p.get_or("g", 0.0))?;
    let allow = located(p, "allow_boundary", p.bool("allow_boundary"))?;
    if g == -1.0 && !allow {
        return Err(CliError::config(format!(
            "{}: g = -1 is the boundary of the admissible range; set allow_boundary to use it",
            p.locate("g")
        )));
    }
    located(p, "g", OscillatorModel::with_boundary(g, allow))
}

fn profile(cfg: &RunConfig) -> Result<Box<dyn FrequencyProfile>, CliError> {
    if !cfg.has_profile() {
        return Err(CliError::config(
            "[profile] kind: missing profile kind (use --profile or a [profile] section)",
        ));
    }
    Ok(profile_from_params(&cfg.profile)?)
}

fn settings(cfg: &RunConfig) -> Result<SolverSettings, CliError> {
    let p = &cfg.task;
    let mut s = SolverSettings::default();
    if let Some(name) = p.str("stepper") {
        s = s.with_stepper(name.trim());
    }
    if let Some(tol) = located(p, "local_tol", p.get::<f64>("local_tol"))? {
        if !(tol > 0.0) {
            return Err(CliError::config(format!(
                "{}: must be positive, got {tol}",
                p.locate("local_tol")
            )));
        }
        s.local_tol = tol;
    }
    Ok(s)
}

/// `ρ` from `[task] rho` when given, otherwise from the profile.
fn rho(cfg: &RunConfig) -> Result<f64, CliError> {
    let p = &cfg.task;
    if let Some(rho) = located(p, "rho", p.get::<f64>("rho"))? {
        return check_rho(rho)
            .map(|_| rho)
            .map_err(|e| CliError::config(format!("{}: {e}", p.locate("rho"))));
    }
    if !cfg.has_profile() {
        return Err(CliError::config(
            "[task] rho: give either rho or a frequency profile",
        ));
    }
    let profile = profile(cfg)?;
    Ok(compute_rho(profile.as_ref(), &settings(cfg)?)?.rho)
}

fn level(cfg: &RunConfig, key: &str, default: Option<usize>) -> Result<usize, CliError> {
    let p = &cfg.task;
    match (located(p, key, p.get::<usize>(key))?, default) {
        (Some(v), _) => Ok(v),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(CliError::config(format!(
            "{}: missing required value",
            p.locate(key)
        ))),
    }
}

fn formula(cfg: &RunConfig) -> Result<Box<dyn TransitionFormula>, CliError> {
    let name = cfg.task.str("method").unwrap_or("jacobi").trim();
    located(&cfg.task, "method", formula_by_name(name))
}

fn cmd_rho(cfg: &RunConfig, mut out: Table) -> Result<String, CliError> {
    let profile = profile(cfg)?;
    let r = compute_rho(profile.as_ref(), &settings(cfg)?)?;
    out.header(&["rho", "c_abs2", "d_abs2", "wronskian_defect", "steps"]);
    out.row(vec![
        r.rho.into(),
        r.c.norm_sqr().into(),
        r.d.norm_sqr().into(),
        r.wronskian_defect.into(),
        r.solver_steps.into(),
    ]);
    Ok(out.into_string())
}

fn cmd_levels(cfg: &RunConfig, mut out: Table) -> Result<String, CliError> {
    let model = model(cfg)?;
    let omega = located(&cfg.task, "omega", cfg.task.get_or("omega", 1.0))?;
    let max = level(cfg, "max", Some(DEFAULT_MAX))?;
    out.header(&["n", "energy"]);
    for n in 0..=max {
        let e = located(&cfg.task, "omega", energy_level(&model, n, omega))?;
        out.row(vec![n.into(), e.into()]);
    }
    Ok(out.into_string())
}

fn cmd_wmn(cfg: &RunConfig, mut out: Table) -> Result<String, CliError> {
    let model = model(cfg)?;
    let m = level(cfg, "m", None)?;
    let n = level(cfg, "n", None)?;
    let formula = formula(cfg)?;
    let rho = rho(cfg)?;
    let w = formula.probability(&model, m, n, rho)?;
    out.header(&["m", "n", "rho", "w"]);
    out.row(vec![m.into(), n.into(), rho.into(), w.into()]);
    Ok(out.into_string())
}

fn cmd_table(cfg: &RunConfig, mut out: Table) -> Result<String, CliError> {
    let model = model(cfg)?;
    let max = level(cfg, "max", Some(DEFAULT_MAX))?;
    let only = located(&cfg.task, "m", cfg.task.get::<usize>("m"))?;
    let max_m = level(cfg, "max_m", Some(only.unwrap_or(max)))?;
    let max_n = level(cfg, "max_n", Some(max))?;
    if let Some(m) = only {
        if m > max_m {
            return Err(CliError::config(format!(
                "{}: level {m} exceeds max_m = {max_m}",
                cfg.task.locate("m")
            )));
        }
    }
    let formula = formula(cfg)?;
    let rho = rho(cfg)?;
    let table = transitions::build_table_with(formula.as_ref(), &model, rho, max_m, max_n)?;
    let rows: Vec<usize> = match only {
        Some(m) => vec![m],
        None => (0..=max_m).collect(),
    };
    out.header(&["m", "n", "w"]);
    for &m in &rows {
        for n in 0..=max_n {
            let w = table.w[(m, n)];
            if w != 0.0 {
                out.row(vec![m.into(), n.into(), w.into()]);
            }
        }
    }
    for &m in &rows {
        let tail = table.row_tail_mass[m].clamp(0.0, 1.0);
        let line = format!("tail_mass m={m} {}", out.number(tail));
        out.comment(&line);
    }
    Ok(out.into_string())
}

fn parse_points(cfg: &RunConfig) -> Result<Vec<Complex64>, CliError> {
    let p = &cfg.task;
    let spec = p
        .str("z")
        .ok_or_else(|| CliError::config(format!("{}: missing required value", p.locate("z"))))?;
    let mut points = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let z = Complex64::from_str(item).map_err(|_| {
            CliError::config(format!(
                "{}: cannot parse '{item}' as a complex number",
                p.locate("z")
            ))
        })?;
        points.push(z);
    }
    if points.is_empty() {
        return Err(CliError::config(format!(
            "{}: no points given",
            p.locate("z")
        )));
    }
    Ok(points)
}

fn cmd_gen(cfg: &RunConfig, mut out: Table) -> Result<String, CliError> {
    let model = model(cfg)?;
    let m = level(cfg, "m", Some(0))?;
    if m > 1 {
        return Err(CliError::config(format!(
            "{}: generating functions are available for m = 0 and m = 1, got {m}",
            cfg.task.locate("m")
        )));
    }
    let points = parse_points(cfg)?;
    let rho = rho(cfg)?;
    out.header(&["m", "z_re", "z_im", "g_re", "g_im"]);
    for z in points {
        let g = if m == 0 {
            generating_g0(&model, rho, z)?
        } else {
            generating_g1(&model, rho, z)?
        };
        out.row(vec![
            m.into(),
            z.re.into(),
            z.im.into(),
            g.re.into(),
            g.im.into(),
        ]);
    }
    Ok(out.into_string())
}

fn cmd_invariant(cfg: &RunConfig, mut out: Table) -> Result<String, CliError> {
    let model = model(cfg)?;
    let m = level(cfg, "m", Some(0))?;
    let rho = rho(cfg)?;
    let d = mean_excitation(&model, m, rho)?;
    out.header(&["m", "rho", "ratio", "summed", "residual", "terms"]);
    out.row(vec![
        m.into(),
        rho.into(),
        d.closed.into(),
        d.summed.into(),
        d.residual.into(),
        d.terms.into(),
    ]);
    Ok(out.into_string())
}

fn cmd_verify(cfg: &RunConfig, mut out: Table) -> Result<Outcome, CliError> {
    let model = model(cfg)?;
    let profile = profile(cfg)?;
    let max = level(cfg, "max", Some(DEFAULT_VERIFY_MAX))?;
    let max_m = level(cfg, "max_m", Some(max))?;
    let max_n = level(cfg, "max_n", Some(max))?;
    let basis = level(cfg, "basis", Some(DEFAULT_BASIS))?;
    let tol = located(&cfg.task, "tol", cfg.task.get_or("tol", DEFAULT_TOL))?;
    if !(tol > 0.0) {
        return Err(CliError::config(format!(
            "{}: must be positive, got {tol}",
            cfg.task.locate("tol")
        )));
    }
    let report = compare(
        &model,
        profile.as_ref(),
        max_m,
        max_n,
        basis,
        &settings(cfg)?,
    )?;

    out.header(&["m", "n", "w_numeric", "w_closed", "abs_diff"]);
    for m in 0..=max_m {
        for n in 0..=max_n {
            let a = report.w_numeric[(m, n)];
            let b = report.w_closed[(m, n)];
            out.row(vec![
                m.into(),
                n.into(),
                a.into(),
                b.into(),
                (a - b).abs().into(),
            ]);
        }
    }
    let pass = report.max_abs_diff <= tol;
    for (key, value) in [
        ("rho", report.rho),
        ("max_abs_diff", report.max_abs_diff),
        ("tol", tol),
        ("leakage", report.leakage),
        ("norm_defect", report.norm_defect),
    ] {
        let line = format!("{key} {}", out.number(value));
        out.comment(&line);
    }
    out.comment(&format!("basis {}", report.basis));
    out.comment(&format!("steps {}", report.steps));
    out.comment(if pass { "status pass" } else { "status fail" });
    let failure = (!pass).then(|| {
        CliError::solver(format!(
            "verify: max_abs_diff {:e} exceeds tol {:e}",
            report.max_abs_diff, tol
        ))
    });
    Ok(Outcome {
        text: out.into_string(),
        failure,
    })
}
