//! Scenario configuration files.
//!
//! A config is a TOML document; every physical quantity carries its unit in
//! the key name. Parsing and validation report [`Diagnostic`]s with the line
//! of the offending key where one exists.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use airyspdc::{
    Axis, AxisKind, CrystalParams, DetectionMode, Grid1D, OpticalSetup, PumpParams,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Pump1d,
    Pump2d,
    Momentum,
    Biphoton,
    Farfield,
    Nearfield,
    Schmidt,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::Pump1d,
        Scenario::Pump2d,
        Scenario::Momentum,
        Scenario::Biphoton,
        Scenario::Farfield,
        Scenario::Nearfield,
        Scenario::Schmidt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Pump1d => "pump1d",
            Scenario::Pump2d => "pump2d",
            Scenario::Momentum => "momentum",
            Scenario::Biphoton => "biphoton",
            Scenario::Farfield => "farfield",
            Scenario::Nearfield => "nearfield",
            Scenario::Schmidt => "schmidt",
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            Scenario::Pump1d => "pump intensity |Ai_Tr(xi, zeta)|^2 over a (zeta, xi) grid",
            Scenario::Pump2d => "separable transverse pump intensity at a list of distances",
            Scenario::Momentum => "transverse-momentum probability |Phi(q1, q2)|^2",
            Scenario::Biphoton => "propagated biphoton |A(xi+, xi-)|^2 at a list of distances",
            Scenario::Farfield => "far-field coincidences, conditional and singles profiles",
            Scenario::Nearfield => "near-field coincidences, conditional and singles profiles",
            Scenario::Schmidt => "Schmidt weights, K, entropy and purity of a coincidence map",
        }
    }

    fn needs_crystal(&self) -> bool {
        !matches!(self, Scenario::Pump1d | Scenario::Pump2d)
    }

    fn needs_setup(&self) -> bool {
        matches!(self, Scenario::Farfield | Scenario::Nearfield | Scenario::Schmidt)
    }

    fn grid_keys(&self) -> &'static [&'static str] {
        match self {
            Scenario::Pump1d => &[
                "xi_min",
                "xi_max",
                "xi_samples",
                "zeta_min",
                "zeta_max",
                "zeta_samples",
            ],
            Scenario::Pump2d => &["xi_min", "xi_max", "xi_samples", "distances_cm"],
            Scenario::Momentum => &["q_min", "q_max", "q_samples"],
            Scenario::Biphoton => &[
                "xi_plus_min",
                "xi_plus_max",
                "xi_plus_samples",
                "xi_minus_min",
                "xi_minus_max",
                "xi_minus_samples",
                "distances_cm",
            ],
            Scenario::Farfield | Scenario::Nearfield => &["x_min_mm", "x_max_mm", "x_samples"],
            Scenario::Schmidt => &["x_min_mm", "x_max_mm", "x_samples", "fraction"],
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| format!("unknown scenario `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub truncation: f64,
    pub scale_um: f64,
    pub wavelength_um: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refractive_index: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalConfig {
    pub length_mm: f64,
    pub walkoff: f64,
    pub axis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupConfig {
    pub mode: String,
    pub focal_length_mm: f64,
}

/// Sampling windows. Which keys are required depends on the scenario.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_plus_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_plus_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_plus_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_minus_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_minus_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_minus_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances_cm: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_min_mm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max_mm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub pump: PumpConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crystal: Option<CrystalConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setup: Option<SetupConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// One problem found in a config file. `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Line of `key` inside `[table]` (or at top level for `None`).
fn locate(text: &str, table: Option<&str>, key: &str) -> Option<usize> {
    let mut current: Option<String> = None;
    let mut table_line = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            let name = line.trim_start_matches('[').split(']').next().unwrap_or("").trim();
            current = Some(name.to_string());
            if Some(name) == table {
                table_line = Some(i + 1);
            }
            continue;
        }
        if current.as_deref() == table {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    table_line
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses `text`; syntax and type errors come back as a single diagnostic.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, Diagnostic> {
    toml::from_str(text).map_err(|e| Diagnostic {
        line: e.span().map(|s| line_of_offset(text, s.start)),
        message: e.message().trim().to_string(),
    })
}

fn is_valid_samples(n: usize) -> bool {
    n >= 2 && (n.is_power_of_two() || (n - 1).is_power_of_two())
}

struct Checker<'a> {
    text: &'a str,
    out: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn push(&mut self, table: Option<&str>, key: &str, message: String) {
        let line = locate(self.text, table, key);
        self.out.push(Diagnostic { line, message });
    }

    fn positive(&mut self, table: &str, key: &str, v: f64) {
        if !(v > 0.0 && v.is_finite()) {
            self.push(Some(table), key, format!("{table}.{key} must be positive (got {v})"));
        }
    }
}

/// Every problem with `cfg`, in file order of discovery. Empty means valid.
pub fn validate(cfg: &ScenarioConfig, text: &str) -> Vec<Diagnostic> {
    let mut c = Checker {
        text,
        out: Vec::new(),
    };
    let sc = cfg.scenario.name();

    let p = &cfg.pump;
    if !(p.truncation >= 0.0 && p.truncation < 1.0) {
        c.push(
            Some("pump"),
            "truncation",
            format!("truncation parameter must satisfy 0 <= w < 1 (got {})", p.truncation),
        );
    }
    c.positive("pump", "scale_um", p.scale_um);
    c.positive("pump", "wavelength_um", p.wavelength_um);
    if let Some(n) = p.refractive_index {
        c.positive("pump", "refractive_index", n);
    }

    match (&cfg.crystal, cfg.scenario.needs_crystal()) {
        (None, true) => c.push(
            None,
            "scenario",
            format!("scenario `{sc}` requires a [crystal] block"),
        ),
        (Some(cr), _) => {
            c.positive("crystal", "length_mm", cr.length_mm);
            if !cr.walkoff.is_finite() {
                c.push(Some("crystal"), "walkoff", "crystal.walkoff must be finite".into());
            }
            if let Err(e) = cr.axis.parse::<Axis>() {
                c.push(Some("crystal"), "axis", e);
            }
        }
        (None, false) => {}
    }

    match (&cfg.setup, cfg.scenario.needs_setup()) {
        (None, true) => c.push(
            None,
            "scenario",
            format!("scenario `{sc}` requires a [setup] block"),
        ),
        (Some(s), _) => {
            c.positive("setup", "focal_length_mm", s.focal_length_mm);
            match s.mode.parse::<DetectionMode>() {
                Err(e) => c.push(Some("setup"), "mode", e),
                Ok(mode) => {
                    let expected = match cfg.scenario {
                        Scenario::Farfield => Some(DetectionMode::FarField),
                        Scenario::Nearfield => Some(DetectionMode::NearField),
                        _ => None,
                    };
                    if expected.is_some_and(|m| m != mode) {
                        c.push(
                            Some("setup"),
                            "mode",
                            format!("scenario `{sc}` needs setup.mode = \"{}\"", expected.unwrap().as_str()),
                        );
                    }
                }
            }
        }
        (None, false) => {}
    }

    let g = &cfg.grid;
    let table = serde_value(g);
    for key in cfg.scenario.grid_keys() {
        if !table.contains_key(*key) {
            c.push(
                Some("grid"),
                key,
                format!("scenario `{sc}` requires grid.{key}"),
            );
        }
    }
    for (key, value) in &table {
        if !cfg.scenario.grid_keys().contains(&key.as_str()) {
            c.push(
                Some("grid"),
                key,
                format!("grid.{key} is not used by scenario `{sc}`"),
            );
            continue;
        }
        if key.ends_with("_samples") {
            let n = value.as_integer().unwrap_or(0) as usize;
            if !is_valid_samples(n) {
                c.push(
                    Some("grid"),
                    key,
                    format!("grid.{key} must be a power of two or a power of two plus one (got {n})"),
                );
            }
        }
    }
    for (lo, hi) in [
        ("xi_min", "xi_max"),
        ("zeta_min", "zeta_max"),
        ("q_min", "q_max"),
        ("xi_plus_min", "xi_plus_max"),
        ("xi_minus_min", "xi_minus_max"),
        ("x_min_mm", "x_max_mm"),
    ] {
        if let (Some(a), Some(b)) = (
            table.get(lo).and_then(|v| v.as_float()),
            table.get(hi).and_then(|v| v.as_float()),
        ) {
            if !(a < b && a.is_finite() && b.is_finite()) {
                c.push(Some("grid"), hi, format!("grid.{hi} must exceed grid.{lo}"));
            }
        }
    }
    if g.zeta_min.is_some_and(|z| z < 0.0) {
        c.push(Some("grid"), "zeta_min", "grid.zeta_min must be >= 0".into());
    }
    if let Some(d) = &g.distances_cm {
        if d.is_empty() {
            c.push(Some("grid"), "distances_cm", "grid.distances_cm must not be empty".into());
        }
        if d.iter().any(|z| !(*z >= 0.0 && z.is_finite())) {
            c.push(Some("grid"), "distances_cm", "grid.distances_cm entries must be >= 0".into());
        }
    }
    if let Some(f) = g.fraction {
        if !(f > 0.0 && f <= 1.0) {
            c.push(Some("grid"), "fraction", format!("grid.fraction must lie in (0, 1] (got {f})"));
        }
    }
    c.out
}

/// Grid keys that are present, as TOML values.
fn serde_value(g: &GridConfig) -> toml::Table {
    toml::Table::try_from(g).expect("grid config serializes to a table")
}

/// Reads, parses and validates a config file.
pub fn load(path: &Path) -> Result<(ScenarioConfig, String), Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Diagnostic {
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        }]
    })?;
    let cfg = parse_config(&text).map_err(|d| vec![d])?;
    let diags = validate(&cfg, &text);
    if diags.is_empty() {
        Ok((cfg, text))
    } else {
        Err(diags)
    }
}

/// Model parameters of a validated config.
pub struct Resolved {
    pub pump: PumpParams,
    pub crystal: Option<(CrystalParams, Axis)>,
    pub setup: Option<OpticalSetup>,
}

impl ScenarioConfig {
    pub fn resolve(&self) -> airyspdc::Result<Resolved> {
        let p = &self.pump;
        let pump = match p.refractive_index {
            Some(n) => PumpParams::with_index(p.truncation, p.scale_um, p.wavelength_um, n)?,
            None => PumpParams::new(p.truncation, p.scale_um, p.wavelength_um)?,
        };
        let crystal = match &self.crystal {
            Some(c) => Some((
                CrystalParams::new(c.length_mm, c.walkoff, &pump)?,
                c.axis.parse::<Axis>().expect("validated axis"),
            )),
            None => None,
        };
        let setup = match &self.setup {
            Some(s) => Some(OpticalSetup::new(
                s.mode.parse().expect("validated mode"),
                s.focal_length_mm,
            )?),
            None => None,
        };
        Ok(Resolved {
            pump,
            crystal,
            setup,
        })
    }

    /// Canonical TOML form, as embedded in output headers.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

pub(crate) fn grid(min: Option<f64>, max: Option<f64>, n: Option<usize>, kind: AxisKind) -> airyspdc::Result<Grid1D> {
    Grid1D::new(
        min.expect("validated"),
        max.expect("validated"),
        n.expect("validated"),
        kind,
    )
}
