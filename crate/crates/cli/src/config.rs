//! JSON run configuration and `--set` overrides.

use std::path::{Path, PathBuf};

use gqrm_core::fock::DisplacementMode;
use gqrm_core::gauge::{GaugeFrame, ModeSpec, TlsBasis, TrigPath, TwoLevelParams};
use gqrm_core::spectra::{CutoffPolicy, DEFAULT_CROSSING_TOL, DEFAULT_N_LEVELS};
use gqrm_core::twolevel::{Potential, PotentialSpec, Stencil, DEFAULT_MIN_VALIDITY};
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Reduce,
    Spectrum,
    VerifyGauge,
    Formfactor,
    WilsonCheck,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub output: PathBuf,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub potential: Option<PotentialConfig>,
    #[serde(default)]
    pub solver: Option<SolverConfig>,
    #[serde(default)]
    pub two_level: Option<TwoLevelConfig>,
    #[serde(default)]
    pub mode: Option<ModeSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub cross_frame: Option<CrossFrameSection>,
    #[serde(default)]
    pub checks: Option<ChecksSection>,
    #[serde(default)]
    pub formfactor: Option<FormfactorSection>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    #[serde(default = "one")]
    pub mass: f64,
    pub shape: ShapeConfig,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeConfig {
    Harmonic { omega: f64 },
    Quartic {
        beta: f64,
        x0: f64,
        #[serde(default)]
        tilt: f64,
    },
    Flat {},
    /// Values at the grid points, endpoints included.
    Sampled { values: Vec<f64> },
    /// Two-column `x V(x)` file whose abscissae must match the grid.
    Table { path: PathBuf },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default)]
    pub stencil: StencilConfig,
    #[serde(default = "default_min_validity")]
    pub min_validity: f64,
    #[serde(default = "yes")]
    pub refinement_check: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { stencil: StencilConfig::default(), min_validity: DEFAULT_MIN_VALIDITY, refinement_check: true }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StencilConfig {
    Second,
    #[default]
    Fourth,
}

impl From<StencilConfig> for Stencil {
    fn from(s: StencilConfig) -> Self {
        match s {
            StencilConfig::Second => Stencil::Second,
            StencilConfig::Fourth => Stencil::Fourth,
        }
    }
}

/// Either `delta` or `omega_q` (zero-detuning helper: `√(Δ² + ε²) = ω_q`).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoLevelConfig {
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub omega_q: Option<f64>,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
}

impl TwoLevelConfig {
    pub fn params(&self) -> Result<TwoLevelParams, CliError> {
        let mut p = match (self.delta, self.omega_q) {
            (Some(d), None) => TwoLevelParams::new(d, self.epsilon)?,
            (None, Some(w)) => TwoLevelParams::with_qubit_frequency(w, self.epsilon)?,
            _ => return Err(CliError::config("two_level: give exactly one of `delta` or `omega_q`")),
        };
        p.a = self.a;
        p.q = self.q;
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub eta_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub eta_min: Option<f64>,
    #[serde(default)]
    pub eta_max: Option<f64>,
    #[serde(default)]
    pub eta_step: Option<f64>,
    #[serde(default = "default_n_levels")]
    pub n_levels: usize,
    pub frame: GaugeFrame,
    #[serde(default)]
    pub cutoff_policy: CutoffPolicy,
    #[serde(default)]
    pub tls_basis: TlsBasis,
    #[serde(default)]
    pub trig: TrigPath,
    #[serde(default)]
    pub displacement: DisplacementMode,
    #[serde(default)]
    pub svg: Option<PathBuf>,
    #[serde(default = "default_crossing_tol")]
    pub crossing_tol: f64,
    #[serde(default = "yes")]
    pub refine_gaps: bool,
}

impl SweepSection {
    /// Explicit `eta_grid`, or `eta_min..=eta_max` in steps of `eta_step`.
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        match (&self.eta_grid, self.eta_min, self.eta_max, self.eta_step) {
            (Some(g), None, None, None) => Ok(g.clone()),
            (None, Some(lo), Some(hi), Some(step)) => {
                if !(step > 0.0 && hi >= lo) {
                    return Err(CliError::config("sweep: need eta_step > 0 and eta_max ≥ eta_min"));
                }
                let n = ((hi - lo) / step + 1e-9).floor() as usize;
                Ok((0..=n).map(|i| lo + i as f64 * step).collect())
            }
            _ => Err(CliError::config("sweep: give either `eta_grid` or all of `eta_min`, `eta_max`, `eta_step`")),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossFrameSection {
    /// Omitted: derived from `q`, `a` and `mode.a0`.
    #[serde(default)]
    pub eta: Option<f64>,
    pub cutoff: usize,
    #[serde(default = "default_cross_levels")]
    pub n_levels: usize,
    #[serde(default)]
    pub displacement: DisplacementMode,
    #[serde(default)]
    pub trig: TrigPath,
    #[serde(default = "default_cross_tol")]
    pub tolerance: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksSection {
    #[serde(default = "default_hopping_trials")]
    pub hopping_trials: usize,
    #[serde(default = "default_transporter_trials")]
    pub transporter_trials: usize,
    #[serde(default = "default_check_tol")]
    pub tolerance: f64,
}

impl Default for ChecksSection {
    fn default() -> Self {
        Self {
            hopping_trials: default_hopping_trials(),
            transporter_trials: default_transporter_trials(),
            tolerance: default_check_tol(),
        }
    }
}

/// Grid of `k·a` values.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormfactorSection {
    #[serde(default)]
    pub ka_values: Option<Vec<f64>>,
    #[serde(default)]
    pub ka_min: Option<f64>,
    #[serde(default)]
    pub ka_max: Option<f64>,
    #[serde(default)]
    pub n_points: Option<usize>,
}

impl FormfactorSection {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        match (&self.ka_values, self.ka_min, self.ka_max, self.n_points) {
            (Some(v), None, None, None) => Ok(v.clone()),
            (None, Some(lo), Some(hi), Some(n)) if n >= 2 && hi > lo => {
                Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
            }
            (None, Some(lo), Some(_), Some(1)) => Ok(vec![lo]),
            _ => Err(CliError::config(
                "formfactor: give either `ka_values` or `ka_min` < `ka_max` with `n_points` ≥ 1",
            )),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_min_validity() -> f64 {
    DEFAULT_MIN_VALIDITY
}
fn default_n_levels() -> usize {
    DEFAULT_N_LEVELS
}
fn default_crossing_tol() -> f64 {
    DEFAULT_CROSSING_TOL
}
fn default_cross_levels() -> usize {
    10
}
fn default_cross_tol() -> f64 {
    1e-9
}
fn default_hopping_trials() -> usize {
    64
}
fn default_transporter_trials() -> usize {
    16
}
fn default_check_tol() -> f64 {
    1e-12
}

impl RunConfig {
    /// Reads `path`, applies `key.path=value` overrides, then validates the schema.
    pub fn load(path: &Path, overrides: &[String]) -> Result<(Self, PathBuf), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let mut value: Value =
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let config: Self = serde_json::from_value(value).map_err(|e| CliError::config(e.to_string()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((config, base))
    }

    pub fn require<'a, T>(section: &'a Option<T>, name: &str, command: &str) -> Result<&'a T, CliError> {
        section.as_ref().ok_or_else(|| CliError::config(format!("`{command}` needs a `{name}` section")))
    }
}

/// `a.b.c=value`; the value is parsed as JSON and falls back to a string.
pub fn apply_override(root: &mut Value, spec: &str) -> Result<(), CliError> {
    let (key, raw) =
        spec.split_once('=').ok_or_else(|| CliError::config(format!("--set expects key=value, got `{spec}`")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::config(format!("--set: malformed key `{key}`")));
    }
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| CliError::config(format!("--set: `{key}` does not address an object")))?;
        node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    node.as_object_mut()
        .ok_or_else(|| CliError::config(format!("--set: `{key}` does not address an object")))?
        .insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

impl PotentialConfig {
    pub fn spec(&self, base: &Path) -> Result<PotentialSpec, CliError> {
        let potential = match &self.shape {
            ShapeConfig::Harmonic { omega } => Potential::Harmonic { omega: *omega },
            ShapeConfig::Quartic { beta, x0, tilt } => Potential::tilted_quartic(*beta, *x0, *tilt),
            ShapeConfig::Flat {} => Potential::Flat,
            ShapeConfig::Sampled { values } => Potential::Sampled(values.clone()),
            ShapeConfig::Table { path } => {
                let full = base.join(path);
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| CliError::config(format!("potential table {}: {e}", full.display())))?;
                let (xs, vs) = Potential::parse_table(&text)?;
                self.check_table_grid(&xs)?;
                Potential::Sampled(vs)
            }
        };
        Ok(PotentialSpec::new(self.x_min, self.x_max, self.n_points, self.mass, potential)?)
    }

    fn check_table_grid(&self, xs: &[f64]) -> Result<(), CliError> {
        if xs.len() != self.n_points {
            return Err(CliError::config(format!(
                "potential table has {} rows for n_points = {}",
                xs.len(),
                self.n_points
            )));
        }
        let h = (self.x_max - self.x_min) / (self.n_points.max(2) - 1) as f64;
        for (i, x) in xs.iter().enumerate() {
            if (x - (self.x_min + i as f64 * h)).abs() > 1e-9 * h.abs().max(1.0) {
                return Err(CliError::config(format!("potential table row {} at x = {x} is off the grid", i + 1)));
            }
        }
        Ok(())
    }
}
