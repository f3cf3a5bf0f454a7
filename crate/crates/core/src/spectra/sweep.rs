use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::gauge::{build_hamiltonian, BuildOptions, CouplingParams, GaugeFrame, ModeSpec, TwoLevelParams};
use crate::linalg::{eigvalsh, OperatorMatrix};

use super::table::{SpectrumRow, SpectrumTable};

pub const DEFAULT_TOL_REL: f64 = 1e-8;
pub const DEFAULT_N_MAX: usize = 320;
pub const DEFAULT_N_LEVELS: usize = 8;

/// Fock-cutoff control: start at `n_start` (or the η-dependent heuristic),
/// double until the retained level differences move by less than `tol_rel`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffPolicy {
    #[serde(default)]
    pub n_start: Option<usize>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_tol")]
    pub tol_rel: f64,
}

fn default_n_max() -> usize {
    DEFAULT_N_MAX
}

fn default_tol() -> f64 {
    DEFAULT_TOL_REL
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self { n_start: None, n_max: DEFAULT_N_MAX, tol_rel: DEFAULT_TOL_REL }
    }
}

impl CutoffPolicy {
    /// `max(16, ⌈c (2η)²⌉ + 2 n_levels)` with `c = 2` in the Coulomb frame and
    /// `c = 1` in the dipole frame, capped at `n_max`.
    pub fn starting_cutoff(&self, eta: f64, n_levels: usize, frame: GaugeFrame) -> usize {
        let n = self.n_start.unwrap_or_else(|| {
            let c = match frame {
                GaugeFrame::Coulomb => 2.0,
                GaugeFrame::Dipole => 1.0,
            };
            16usize.max((c * (2.0 * eta).powi(2)).ceil() as usize + 2 * n_levels)
        });
        n.min(self.n_max)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.n_start {
            if n == 0 || n > self.n_max {
                return Err(Error::invalid("cutoff_policy", format!("need 0 < n_start ≤ n_max, got {n} and {}", self.n_max)));
            }
        }
        if !(self.tol_rel > 0.0) {
            return Err(Error::invalid("cutoff_policy", "tol_rel must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub eta_grid: Vec<f64>,
    pub n_levels: usize,
    pub params: TwoLevelParams,
    pub mode: ModeSpec,
    pub frame: GaugeFrame,
    pub cutoff_policy: CutoffPolicy,
    pub options: BuildOptions,
}

impl SweepConfig {
    pub fn new(eta_grid: Vec<f64>, params: TwoLevelParams, mode: ModeSpec, frame: GaugeFrame) -> Self {
        Self {
            eta_grid,
            n_levels: DEFAULT_N_LEVELS,
            params,
            mode,
            frame,
            cutoff_policy: CutoffPolicy::default(),
            options: BuildOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta_grid.is_empty() {
            return Err(Error::invalid("eta_grid", "must not be empty"));
        }
        if self.eta_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("eta_grid", "must be strictly ascending"));
        }
        if self.eta_grid.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return Err(Error::invalid("eta_grid", "values must be finite and non-negative"));
        }
        if self.n_levels < 2 {
            return Err(Error::invalid("n_levels", format!("need at least 2, got {}", self.n_levels)));
        }
        self.params.validate()?;
        self.mode.validate()?;
        self.cutoff_policy.validate()
    }

    /// `(E_j − E_0)/ω_ph` for the lowest `n_levels` at a fixed cutoff.
    pub fn differences_at(&self, eta: f64, cutoff: usize) -> Result<Vec<f64>> {
        let fock = FockBasis::new(cutoff);
        if 2 * fock.dim() < self.n_levels {
            return Err(Error::invalid("n_levels", format!("exceeds dimension {} at cutoff {cutoff}", 2 * fock.dim())));
        }
        let h = build_hamiltonian(&self.params, &self.mode, &CouplingParams::direct(eta), fock, self.frame, &self.options)?;
        level_differences(&h, self.n_levels, self.mode.omega_ph)
    }

    /// One converged row.
    pub fn solve_point(&self, eta: f64) -> Result<SpectrumRow> {
        let policy = self.cutoff_policy;
        let mut n = policy.starting_cutoff(eta, self.n_levels, self.frame);
        let mut prev = self.differences_at(eta, n)?;
        loop {
            if n >= policy.n_max {
                return Ok(SpectrumRow { eta, differences: prev, cutoff: n, residual: f64::INFINITY, converged: false });
            }
            let next_n = (2 * n).min(policy.n_max);
            let next = self.differences_at(eta, next_n)?;
            let residual = prev.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            n = next_n;
            prev = next;
            if residual < policy.tol_rel {
                return Ok(SpectrumRow { eta, differences: prev, cutoff: n, residual, converged: true });
            }
            if n >= policy.n_max {
                return Ok(SpectrumRow { eta, differences: prev, cutoff: n, residual, converged: false });
            }
        }
    }
}

/// `(E_j − E_0)/ω` for the lowest `n_levels` eigenvalues of `h`.
pub fn level_differences(h: &OperatorMatrix, n_levels: usize, omega: f64) -> Result<Vec<f64>> {
    let ev = eigvalsh(h)?;
    Ok(ev.iter().take(n_levels).map(|e| ((e - ev[0]) / omega).max(0.0)).collect())
}

/// Solves every η point, concurrently, and returns the rows sorted by η.
pub fn sweep(config: &SweepConfig) -> Result<SpectrumTable> {
    config.validate()?;
    let mut rows = config
        .eta_grid
        .par_iter()
        .map(|&eta| config.solve_point(eta))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.eta.total_cmp(&b.eta));
    Ok(SpectrumTable { n_levels: config.n_levels, rows })
}

/// `E_1 − E_0` at a single large coupling, with the cutoff converged.
pub fn asymptotic_gap(
    params: &TwoLevelParams,
    mode: &ModeSpec,
    eta_large: f64,
    frame: GaugeFrame,
    policy: CutoffPolicy,
) -> Result<f64> {
    if !(eta_large >= 2.0) {
        return Err(Error::invalid("eta_large", format!("must be at least 2, got {eta_large}")));
    }
    let mut config = SweepConfig::new(vec![eta_large], *params, mode.clone(), frame);
    config.n_levels = 2;
    config.cutoff_policy = policy;
    config.validate()?;
    let row = config.solve_point(eta_large)?;
    if !row.converged {
        return Err(Error::CutoffNotConverged { cutoff: row.cutoff, residual: row.residual, tol: policy.tol_rel });
    }
    Ok(row.differences[1] * mode.omega_ph)
}
