//! Run manifests: a complete, serializable description of one simulation.
//!
//! Manifests are read from JSON or from plain-text `key = value` files whose
//! dotted keys address the same JSON structure (`grid.points = 256`).

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use ksharp_core::simulate::DEFAULT_DT_COEFFICIENT;
use ksharp_core::{Grid, HierarchyParams, NonlinearForm, Scheme, SolverConfig};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub params: WaveParams,
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    pub initial: InitialCondition,
    pub t_end: f64,
    #[serde(default)]
    pub outputs: OutputSpec,
    /// When set, nothing that varies between identical runs (wall-clock
    /// timings) is printed or written.
    #[serde(default = "default_true")]
    pub deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveParams {
    pub n: u32,
    pub m: u32,
    /// Wave speed used by the soliton and peakompacton initial conditions.
    #[serde(default = "default_speed")]
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub length: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Fourier,
    Fd4,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Fourier => Scheme::FourierCollocation,
            SchemeName::Fd4 => Scheme::CenteredFd4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormName {
    Primitive,
    SkewSymmetric,
}

impl From<FormName> for NonlinearForm {
    fn from(f: FormName) -> Self {
        match f {
            FormName::Primitive => NonlinearForm::Primitive,
            FormName::SkewSymmetric => NonlinearForm::SkewSymmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    /// Time step; derived from the initial state with `dt_coefficient` when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_dt_coefficient")]
    pub dt_coefficient: f64,
    #[serde(default = "default_scheme")]
    pub scheme: SchemeName,
    #[serde(default = "default_true")]
    pub dealias: bool,
    #[serde(default)]
    pub smoothing: f64,
    #[serde(default)]
    pub signed_power: bool,
    #[serde(default = "default_form")]
    pub form: FormName,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            dt: None,
            dt_coefficient: DEFAULT_DT_COEFFICIENT,
            scheme: SchemeName::Fourier,
            dealias: true,
            smoothing: 0.0,
            signed_power: false,
            form: FormName::Primitive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Zero,
    /// `3c sech²(√c (x − x0)/2)`.
    KdvSoliton { x0: f64 },
    /// The traveling wave for `params`, optionally smoothed by a Gaussian of
    /// standard deviation `mollify_width · h`.
    Peakompacton {
        x0: f64,
        #[serde(default = "default_true")]
        mollify: bool,
        #[serde(default = "default_mollify_width")]
        mollify_width: f64,
    },
    /// `amplitude · exp(−(x − x0)²/(2 width²))`.
    Gaussian { amplitude: f64, width: f64, x0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FileFormat::Csv => "csv",
            FileFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Output directory; overridden by `KSHARP_OUT_DIR`.
    #[serde(default = "default_dir")]
    pub dir: String,
    /// Prepended to every output file name.
    #[serde(default)]
    pub prefix: String,
    #[serde(default = "default_format")]
    pub snapshot_format: FileFormat,
    #[serde(default = "default_format")]
    pub diagnostics_format: FileFormat,
    /// Steps between field snapshots; 0 keeps only the first and last.
    #[serde(default)]
    pub snapshot_every: usize,
    /// Steps between diagnostics samples.
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default = "default_ik_orders")]
    pub ik_orders: Vec<u32>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            prefix: String::new(),
            snapshot_format: default_format(),
            diagnostics_format: default_format(),
            snapshot_every: 0,
            sample_every: default_sample_every(),
            ik_orders: default_ik_orders(),
        }
    }
}

fn default_true() -> bool {
    true
}
fn default_speed() -> f64 {
    0.75
}
fn default_dt_coefficient() -> f64 {
    DEFAULT_DT_COEFFICIENT
}
fn default_scheme() -> SchemeName {
    SchemeName::Fourier
}
fn default_form() -> FormName {
    FormName::Primitive
}
fn default_mollify_width() -> f64 {
    2.0
}
fn default_dir() -> String {
    "out".to_owned()
}
fn default_format() -> FileFormat {
    FileFormat::Csv
}
fn default_sample_every() -> usize {
    10
}
fn default_ik_orders() -> Vec<u32> {
    vec![1, 2, 3]
}

/// Typed pieces of a checked manifest.
#[derive(Debug, Clone, Copy)]
pub struct Validated {
    pub params: HierarchyParams,
    pub grid: Grid,
    pub config: SolverConfig,
}

impl RunManifest {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("manifest: {e}")))
    }

    pub fn from_key_value(text: &str) -> CliResult<Self> {
        let mut root = Value::Object(Map::new());
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            set_dotted(&mut root, line).map_err(|e| CliError::Invalid(format!("manifest line {}: {e}", lineno + 1)))?;
        }
        serde_json::from_value(root).map_err(|e| CliError::Invalid(format!("manifest: {e}")))
    }

    /// Reads JSON when the first non-blank character is `{`, and
    /// `key = value` text otherwise.
    pub fn parse(text: &str) -> CliResult<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_key_value(text)
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Applies `key = value` overrides on top of this manifest.
    pub fn with_overrides(&self, assignments: &[String]) -> CliResult<Self> {
        if assignments.is_empty() {
            return Ok(self.clone());
        }
        let mut root = serde_json::to_value(self).expect("manifest serializes");
        for a in assignments {
            set_dotted(&mut root, a).map_err(|e| CliError::Invalid(format!("--set {a}: {e}")))?;
        }
        serde_json::from_value(root).map_err(|e| CliError::Invalid(format!("manifest: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Plain-text form accepted by [`RunManifest::from_key_value`].
    pub fn to_key_value(&self) -> String {
        let value = serde_json::to_value(self).expect("manifest serializes");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }

    pub fn validate(&self) -> CliResult<Validated> {
        let params = HierarchyParams::new(self.params.n, self.params.m)?;
        let grid = Grid::new(self.grid.length, self.grid.points)?;
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(CliError::Invalid(format!("t_end must be positive, got {}", self.t_end)));
        }
        let needs_speed = matches!(
            self.initial,
            InitialCondition::KdvSoliton { .. } | InitialCondition::Peakompacton { .. }
        );
        if needs_speed && !(self.params.c > 0.0 && self.params.c.is_finite()) {
            return Err(CliError::Invalid(format!("params.c must be positive, got {}", self.params.c)));
        }
        if let InitialCondition::KdvSoliton { .. } = self.initial {
            if params != HierarchyParams::KDV {
                return Err(CliError::Invalid("kdv_soliton initial data needs n = m = 1".into()));
            }
        }
        if let InitialCondition::Gaussian { width, .. } = self.initial {
            if !(width > 0.0) {
                return Err(CliError::Invalid(format!("gaussian width must be positive, got {width}")));
            }
        }
        if let InitialCondition::Peakompacton { mollify_width, .. } = self.initial {
            if !(mollify_width > 0.0) {
                return Err(CliError::Invalid(format!("mollify_width must be positive, got {mollify_width}")));
            }
        }
        if !(self.solver.dt_coefficient > 0.0) {
            return Err(CliError::Invalid("solver.dt_coefficient must be positive".into()));
        }
        if self.outputs.sample_every == 0 {
            return Err(CliError::Invalid("outputs.sample_every must be at least 1".into()));
        }
        if self.outputs.ik_orders.contains(&0) {
            return Err(CliError::Invalid("outputs.ik_orders entries must be at least 1".into()));
        }
        let config = SolverConfig {
            // Placeholder until the step is resolved against the initial state.
            dt: self.solver.dt.unwrap_or(1.0),
            scheme: self.solver.scheme.into(),
            dealias: self.solver.dealias,
            smoothing: self.solver.smoothing,
            signed_power: self.solver.signed_power,
            form: self.solver.form.into(),
        };
        config.validate()?;
        if config.dt < 0.0 {
            return Err(CliError::Invalid("solver.dt must be positive".into()));
        }
        Ok(Validated { params, grid, config })
    }
}

fn parse_scalar(text: &str) -> Value {
    let t = text.trim();
    serde_json::from_str(t).unwrap_or_else(|_| Value::String(t.to_owned()))
}

fn set_dotted(root: &mut Value, assignment: &str) -> Result<(), String> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| "expected key = value".to_owned())?;
    let key = key.trim();
    if key.is_empty() {
        return Err("empty key".into());
    }
    let mut node = root;
    let mut parts = key.split('.').peekable();
    while let Some(part) = parts.next() {
        if part.is_empty() {
            return Err(format!("bad key {key:?}"));
        }
        let map = match node {
            Value::Object(map) => map,
            _ => return Err(format!("{key:?} crosses a scalar value")),
        };
        if parts.peek().is_none() {
            map.insert(part.to_owned(), parse_scalar(value));
            return Ok(());
        }
        node = map.entry(part.to_owned()).or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::String(s) if matches!(parse_scalar(s), Value::String(_)) && s.trim() == s && !s.is_empty() => {
            out.push_str(&format!("{prefix} = {s}\n"));
        }
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}
