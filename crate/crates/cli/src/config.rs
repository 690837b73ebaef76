//! Flag and config-file merging. Both sources are flattened into one JSON object,
//! flags on top, then deserialized into [`Settings`].

use std::path::{Path, PathBuf};

use cespdc::{CavityParams, Execution, GainSetting, KMax};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::args::{Cli, Command, Format, GlobalArgs};
use crate::error::{CliError, Result};

pub const DEFAULT_R1: f64 = 0.9;
pub const DEFAULT_R2: f64 = 0.9;
pub const DEFAULT_GAIN_FRAC: f64 = 0.5;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum KMaxSpec {
    Count(usize),
    Word(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub tau: Option<f64>,
    pub gain: Option<f64>,
    pub gain_frac: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub sequential: bool,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub points: Option<usize>,
    pub rad_per_s: bool,
    pub k_max: Option<KMaxSpec>,
    pub k_cap: Option<usize>,
    pub envelopes: Option<Vec<f64>>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub modes: Option<usize>,
    pub fwhm: Option<f64>,
    pub normalized: bool,
    pub scan: Option<Vec<String>>,
}

/// A resolved operating point.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub cavity: CavityParams,
    pub gain: GainSetting,
}

impl Settings {
    pub fn load(cli: &Cli) -> Result<Self> {
        let mut merged = match &cli.global.config {
            Some(path) => read_config(path)?,
            None => Map::new(),
        };
        if merged.contains_key("gain") && merged.contains_key("gain_frac") {
            return Err(CliError::usage(
                "config sets both `gain` and `gain_frac`; give exactly one",
            ));
        }
        let flags = flag_map(&cli.global, &cli.command)?;
        if flags.contains_key("gain") || flags.contains_key("gain_frac") {
            merged.remove("gain");
            merged.remove("gain_frac");
        }
        merged.extend(flags);
        serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::usage(format!("config: {e}")))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    pub fn cavity(&self) -> Result<CavityParams> {
        Ok(CavityParams::new(
            self.r1.unwrap_or(DEFAULT_R1),
            self.r2.unwrap_or(DEFAULT_R2),
            self.tau.unwrap_or(1.0),
        )?)
    }

    pub fn point(&self) -> Result<Point> {
        let cavity = self.cavity()?;
        let gain = match (self.gain, self.gain_frac) {
            (Some(r), None) => GainSetting::absolute(&cavity, r)?,
            (None, Some(f)) => GainSetting::fraction_of_threshold(&cavity, f)?,
            (None, None) => GainSetting::fraction_of_threshold(&cavity, DEFAULT_GAIN_FRAC)?,
            (Some(_), Some(_)) => return Err(CliError::usage("give exactly one of --gain and --gain-frac")),
        };
        Ok(Point { cavity, gain })
    }

    pub fn k_max(&self) -> Result<KMax> {
        let cap = self.k_cap.unwrap_or(10_000);
        if cap == 0 {
            return Err(CliError::usage("k_cap must be positive"));
        }
        match &self.k_max {
            None => Ok(KMax::Auto { cap }),
            Some(KMaxSpec::Count(n)) => Ok(KMax::Fixed(*n)),
            Some(KMaxSpec::Word(w)) if w == "auto" => Ok(KMax::Auto { cap }),
            Some(KMaxSpec::Word(w)) => w.parse().map(KMax::Fixed).map_err(|_| {
                CliError::usage(format!(
                    "k_max must be a non-negative integer or \"auto\", got {w:?}"
                ))
            }),
        }
    }
}

fn read_config(path: &Path) -> Result<Map<String, Value>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::usage(format!(
            "{}: config must be a JSON object",
            path.display()
        ))),
        Err(e) => Err(CliError::usage(format!("{}: {e}", path.display()))),
    }
}

fn flag_map(g: &GlobalArgs, cmd: &Command) -> Result<Map<String, Value>> {
    let mut m = Map::new();
    let mut put = |k: &str, v: Value| {
        if !v.is_null() {
            m.insert(k.to_owned(), v);
        }
    };
    put("r1", g.r1.into());
    put("r2", g.r2.into());
    put("tau", g.tau.into());
    put("gain", g.gain.into());
    put("gain_frac", g.gain_frac.into());
    put("format", serde_json::to_value(g.format).expect("plain enum"));
    put(
        "output",
        g.output.as_ref().map(|p| p.to_string_lossy().into_owned()).into(),
    );
    if g.sequential {
        put("sequential", true.into());
    }
    let sub = match cmd {
        Command::Coeffs(a) | Command::Squeeze(a) => serde_json::to_value(a),
        Command::G2(a) => serde_json::to_value(a),
        Command::G2Single(a) => serde_json::to_value(a),
        Command::Render(a) => serde_json::to_value(a),
        Command::Compare(a) => serde_json::to_value(a),
        Command::Scan(a) => serde_json::to_value(a),
        Command::Verify => Ok(Value::Null),
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    if let Value::Object(sub) = sub {
        for (k, v) in sub {
            put(&k, v);
        }
    }
    // non-finite flags serialize as null; reject rather than silently fall back
    for (k, v) in [
        ("r1", g.r1),
        ("r2", g.r2),
        ("tau", g.tau),
        ("gain", g.gain),
        ("gain_frac", g.gain_frac),
    ] {
        if v.is_some_and(|x| !x.is_finite()) {
            return Err(CliError::usage(format!(
                "--{} must be finite",
                k.replace('_', "-")
            )));
        }
    }
    Ok(m)
}
