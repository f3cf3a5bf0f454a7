use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::twolevel::ReductionResult;

/// Matter side of the model: `(ε/2)ρ_z − (Δ/2)ρ_x` plus the optional geometry
/// `(a, q)` that ties the coupling to a field amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    pub delta: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
}

impl TwoLevelParams {
    pub fn new(delta: f64, epsilon: f64) -> Result<Self> {
        let p = Self { delta, epsilon, a: None, q: None };
        p.validate()?;
        Ok(p)
    }

    /// Picks `Δ` so that `√(Δ² + ε²) = ω_q`.
    pub fn with_qubit_frequency(omega_q: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon.abs() < omega_q) {
            return Err(Error::invalid("epsilon", format!("|ε| = {} must be below ω_q = {omega_q}", epsilon.abs())));
        }
        Self::new((omega_q * omega_q - epsilon * epsilon).sqrt(), epsilon)
    }

    pub fn with_geometry(mut self, a: f64, q: f64) -> Result<Self> {
        self.a = Some(a);
        self.q = Some(q);
        self.validate()?;
        Ok(self)
    }

    pub fn from_reduction(r: &ReductionResult, q: f64) -> Result<Self> {
        Self::new(r.delta, r.epsilon)?.with_geometry(r.a, q)
    }

    pub fn omega_q(&self) -> f64 {
        self.delta.hypot(self.epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid("delta", format!("must be positive, got {}", self.delta)));
        }
        if !self.epsilon.is_finite() {
            return Err(Error::invalid("epsilon", "must be finite"));
        }
        if let Some(a) = self.a {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::invalid("a", format!("must be positive, got {a}")));
            }
        }
        if let Some(q) = self.q {
            if !q.is_finite() {
                return Err(Error::invalid("q", "must be finite"));
            }
        }
        Ok(())
    }
}

/// Dimensionless spatial shape of a mode's vector potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpatialProfile {
    Uniform,
    /// `cos(k x + φ)`.
    Cosine { k: f64, #[serde(default)] phi: f64 },
    /// Linear interpolation between samples at strictly increasing `x`.
    Sampled { x: Vec<f64>, values: Vec<f64> },
}

impl Default for SpatialProfile {
    fn default() -> Self {
        Self::Uniform
    }
}

impl SpatialProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Uniform => Ok(()),
            Self::Cosine { k, phi } => {
                if k.is_finite() && phi.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("profile", "cosine parameters must be finite"))
                }
            }
            Self::Sampled { x, values } => {
                if x.len() != values.len() || x.len() < 2 {
                    return Err(Error::invalid("profile", "sampled profile needs ≥ 2 matching x/value pairs"));
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid("profile", "sampled x must be strictly increasing"));
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Self::Uniform => 1.0,
            Self::Cosine { k, phi } => (k * x + phi).cos(),
            Self::Sampled { x: xs, values } => {
                let last = xs.len() - 1;
                if x <= xs[0] {
                    return values[0];
                }
                if x >= xs[last] {
                    return values[last];
                }
                let i = xs.partition_point(|&xi| xi <= x) - 1;
                let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
                values[i] * (1.0 - w) + values[i + 1] * w
            }
        }
    }
}

/// One electromagnetic mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub omega_ph: f64,
    /// Zero-point amplitude `A0` (real).
    #[serde(default)]
    pub a0: Option<f64>,
    #[serde(default)]
    pub profile: SpatialProfile,
}

impl ModeSpec {
    pub fn new(omega_ph: f64) -> Result<Self> {
        let m = Self { omega_ph, a0: None, profile: SpatialProfile::Uniform };
        m.validate()?;
        Ok(m)
    }

    pub fn with_amplitude(mut self, a0: f64) -> Result<Self> {
        self.a0 = Some(a0);
        self.validate()?;
        Ok(self)
    }

    pub fn with_profile(mut self, profile: SpatialProfile) -> Result<Self> {
        self.profile = profile;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_ph > 0.0 && self.omega_ph.is_finite()) {
            return Err(Error::invalid("omega_ph", format!("must be positive, got {}", self.omega_ph)));
        }
        if let Some(a0) = self.a0 {
            if !a0.is_finite() {
                return Err(Error::invalid("a0", "must be finite"));
            }
        }
        self.profile.validate()
    }
}

/// Normalized coupling `η = q (a/2) A0`, either given directly or derived.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub eta: Option<f64>,
}

/// Agreement demanded between a direct `η` and `q (a/2) A0`.
pub const COUPLING_CONSISTENCY: f64 = 1e-12;

impl CouplingParams {
    pub fn direct(eta: f64) -> Self {
        Self { eta: Some(eta) }
    }

    pub fn derived() -> Self {
        Self { eta: None }
    }

    pub fn resolve(&self, params: &TwoLevelParams, mode: &ModeSpec) -> Result<f64> {
        let derived = match (params.q, params.a, mode.a0) {
            (Some(q), Some(a), Some(a0)) => Some(q * (a / 2.0) * a0),
            _ => None,
        };
        let eta = match (self.eta, derived) {
            (Some(eta), Some(d)) => {
                if (eta - d).abs() > COUPLING_CONSISTENCY * eta.abs().max(1.0) {
                    return Err(Error::InconsistentCoupling { eta, derived: d });
                }
                eta
            }
            (Some(eta), None) => eta,
            (None, Some(d)) => d,
            (None, None) => {
                return Err(Error::invalid("eta", "give eta directly or all of q, a and a0"));
            }
        };
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::invalid("eta", format!("must be non-negative and finite, got {eta}")));
        }
        Ok(eta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeFrame {
    Coulomb,
    Dipole,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_frequency_helper() {
        let p = TwoLevelParams::with_qubit_frequency(1.0, 0.2).unwrap();
        assert!((p.omega_q() - 1.0).abs() < 1e-15);
        assert!(TwoLevelParams::with_qubit_frequency(1.0, 1.0).is_err());
    }

    #[test]
    fn invariants_enforced() {
        assert!(TwoLevelParams::new(0.0, 0.1).is_err());
        assert!(TwoLevelParams::new(1.0, 0.0).unwrap().with_geometry(-1.0, 1.0).is_err());
        assert!(ModeSpec::new(0.0).is_err());
        assert!(ModeSpec::new(1.0)
            .unwrap()
            .with_profile(SpatialProfile::Sampled { x: vec![0.0, 0.0], values: vec![1.0, 1.0] })
            .is_err());
    }

    #[test]
    fn coupling_resolution() {
        let params = TwoLevelParams::new(1.0, 0.0).unwrap().with_geometry(2.0, 0.5).unwrap();
        let mode = ModeSpec::new(1.0).unwrap().with_amplitude(0.8).unwrap();
        assert!((CouplingParams::derived().resolve(&params, &mode).unwrap() - 0.4).abs() < 1e-15);
        assert!((CouplingParams::direct(0.4).resolve(&params, &mode).unwrap() - 0.4).abs() < 1e-15);
        assert!(matches!(
            CouplingParams::direct(0.41).resolve(&params, &mode),
            Err(Error::InconsistentCoupling { .. })
        ));
        let bare = TwoLevelParams::new(1.0, 0.0).unwrap();
        let bare_mode = ModeSpec::new(1.0).unwrap();
        assert_eq!(CouplingParams::direct(1.5).resolve(&bare, &bare_mode).unwrap(), 1.5);
        assert!(CouplingParams::derived().resolve(&bare, &bare_mode).is_err());
        assert!(CouplingParams::direct(-0.1).resolve(&bare, &bare_mode).is_err());
    }

    #[test]
    fn sampled_profile_interpolates() {
        let p = SpatialProfile::Sampled { x: vec![0.0, 1.0, 3.0], values: vec![0.0, 2.0, 0.0] };
        assert_eq!(p.value(0.5), 1.0);
        assert_eq!(p.value(2.0), 1.0);
        assert_eq!(p.value(-1.0), 0.0);
    }
}
