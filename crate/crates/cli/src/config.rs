//! Run configuration: an INI-like file with `[model]`, `[profile]`, `[task]`
//! and `[output]` sections, overridden key by key from command-line flags.

use std::path::Path;

use singosc::{Params, Result as CoreResult};

use crate::CliError;

const SECTIONS: [&str; 4] = ["model", "profile", "task", "output"];

const MODEL_KEYS: &[&str] = &["g", "allow_boundary"];
const PROFILE_KEYS: &[&str] = &[
    "kind",
    "omega",
    "omega_minus",
    "omega_plus",
    "tau",
    "center",
    "t_jump",
    "width",
    "t_start",
    "t_end",
    "points",
    "file",
];
const TASK_KEYS: &[&str] = &[
    "rho",
    "m",
    "n",
    "max",
    "max_m",
    "max_n",
    "method",
    "z",
    "basis",
    "tol",
    "stepper",
    "omega",
    "local_tol",
];
const OUTPUT_KEYS: &[&str] = &["format", "out", "precision"];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Params,
    pub profile: Params,
    pub task: Params,
    pub output: Params,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: Params::new("model"),
            profile: Params::new("profile"),
            task: Params::new("task"),
            output: Params::new("output"),
        }
    }
}

fn allowed_keys(section: &str) -> &'static [&'static str] {
    match section {
        "model" => MODEL_KEYS,
        "profile" => PROFILE_KEYS,
        "task" => TASK_KEYS,
        _ => OUTPUT_KEYS,
    }
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("{}: cannot read config: {e}", path.display()))
        })?;
        let mut cfg = Self::parse(&text, &path.display().to_string())?;
        // Table files are looked up next to the config that names them.
        if let (Some(file), Some(dir)) = (cfg.profile.raw("file").cloned(), path.parent()) {
            if Path::new(&file.value).is_relative() {
                let joined = dir.join(&file.value);
                cfg.profile
                    .set("file", joined.display().to_string(), file.origin);
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut section: Option<&'static str> = None;
        for (idx, raw) in text.lines().enumerate() {
            let at = format!("{source}:{}", idx + 1);
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::config(format!("{at}: unterminated section header")))?
                    .trim()
                    .to_ascii_lowercase();
                section =
                    Some(SECTIONS.into_iter().find(|s| *s == name).ok_or_else(|| {
                        CliError::config(format!("{at}: unknown section [{name}]"))
                    })?);
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!("{at}: expected 'key = value'")));
            };
            let Some(sec) = section else {
                return Err(CliError::config(format!(
                    "{at}: key outside of any section"
                )));
            };
            let key = normalize(key);
            if !allowed_keys(sec).contains(&key.as_str()) {
                return Err(CliError::config(format!(
                    "{at}: unknown key '{key}' in [{sec}]"
                )));
            }
            let params = cfg.section_mut(sec);
            if let Some(prev) = params.raw(&key) {
                return Err(CliError::config(format!(
                    "{at}: duplicate key '{key}' (first set at {})",
                    prev.origin
                )));
            }
            params.set(&key, value.trim(), at);
        }
        Ok(cfg)
    }

    fn section_mut(&mut self, name: &str) -> &mut Params {
        match name {
            "model" => &mut self.model,
            "profile" => &mut self.profile,
            "task" => &mut self.task,
            _ => &mut self.output,
        }
    }

    /// Sets `section.key` from a command-line flag when one was given.
    pub fn flag(&mut self, section: &str, key: &str, value: Option<impl ToString>) {
        if let Some(v) = value {
            let origin = format!("--{}", key.replace('_', "-"));
            self.section_mut(section).set(key, v.to_string(), origin);
        }
    }

    pub fn has_profile(&self) -> bool {
        self.profile.contains("kind")
    }
}

/// Prefixes a library error with the config key it came from.
pub fn located<T>(params: &Params, key: &str, r: CoreResult<T>) -> Result<T, CliError> {
    r.map_err(|e| {
        let code = CliError::from(&e).code;
        CliError {
            code,
            message: format!("{}: {e}", params.locate(key)),
        }
    })
}
