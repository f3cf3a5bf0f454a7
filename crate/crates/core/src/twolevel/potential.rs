use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Potential energy on the grid, in units with ħ = 1.
#[derive(Clone)]
pub enum Potential {
    /// `½ m ω² x²`.
    Harmonic { omega: f64 },
    /// `β (x² − x0²)² + λ x`; `λ = 0` is the symmetric double well.
    Quartic { beta: f64, x0: f64, tilt: f64 },
    /// `V ≡ 0`; with the Dirichlet walls this is the particle in a box.
    Flat,
    /// Values at the grid points, endpoints included.
    Sampled(Vec<f64>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Harmonic { omega } => write!(f, "Harmonic {{ omega: {omega} }}"),
            Self::Quartic { beta, x0, tilt } => {
                write!(f, "Quartic {{ beta: {beta}, x0: {x0}, tilt: {tilt} }}")
            }
            Self::Flat => f.write_str("Flat"),
            Self::Sampled(v) => write!(f, "Sampled({} points)", v.len()),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Potential {
    pub fn quartic(beta: f64, x0: f64) -> Self {
        Self::Quartic { beta, x0, tilt: 0.0 }
    }

    pub fn tilted_quartic(beta: f64, x0: f64, tilt: f64) -> Self {
        Self::Quartic { beta, x0, tilt }
    }

    /// Parses a two-column text table `x V(x)`; blank lines and `#` comments are skipped.
    /// Returns the abscissae alongside the values so callers can check them against a grid.
    pub fn parse_table(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty());
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|s| s.parse().ok()).ok_or_else(|| {
                    Error::invalid("potential table", format!("line {}: expected two numbers", lineno + 1))
                })
            };
            xs.push(parse(cols.next())?);
            vs.push(parse(cols.next())?);
        }
        Ok((xs, vs))
    }
}

/// A 1D problem `p²/2m + V(x)` on a uniform grid with hard walls at both ends.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub mass: f64,
    pub potential: Potential,
}

impl PotentialSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, mass: f64, potential: Potential) -> Result<Self> {
        let spec = Self { x_min, x_max, n_points, mass, potential };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::invalid("x_min/x_max", format!("need x_min < x_max, got [{}, {}]", self.x_min, self.x_max)));
        }
        if self.n_points < 3 {
            return Err(Error::invalid("n_points", format!("need at least 3 grid points, got {}", self.n_points)));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::invalid("mass", format!("must be positive, got {}", self.mass)));
        }
        if let Potential::Sampled(v) = &self.potential {
            if v.len() != self.n_points {
                return Err(Error::invalid(
                    "potential",
                    format!("sampled potential has {} values for {} grid points", v.len(), self.n_points),
                ));
            }
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n_points).map(|i| self.x_min + i as f64 * h).collect()
    }

    /// Potential values at every grid point, endpoints included.
    pub fn sample(&self) -> Result<Vec<f64>> {
        let values: Vec<f64> = match &self.potential {
            Potential::Sampled(v) => v.clone(),
            p => self.grid().into_iter().map(|x| evaluate(p, self.mass, x)).collect(),
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("potential values"));
        }
        Ok(values)
    }

    /// Same problem on a grid with half the spacing.
    pub fn refined(&self) -> Result<Self> {
        let potential = match &self.potential {
            Potential::Sampled(_) => {
                return Err(Error::invalid("potential", "a sampled potential cannot be refined"))
            }
            p => p.clone(),
        };
        Ok(Self { n_points: 2 * self.n_points - 1, potential, ..*self })
    }
}

fn evaluate(p: &Potential, mass: f64, x: f64) -> f64 {
    match p {
        Potential::Harmonic { omega } => 0.5 * mass * omega * omega * x * x,
        Potential::Quartic { beta, x0, tilt } => {
            let d = x * x - x0 * x0;
            beta * d * d + tilt * x
        }
        Potential::Flat => 0.0,
        Potential::Custom(f) => f(x),
        Potential::Sampled(_) => unreachable!("sampled potentials are not evaluated pointwise"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(PotentialSpec::new(1.0, 1.0, 10, 1.0, Potential::Flat).is_err());
        assert!(PotentialSpec::new(0.0, 1.0, 2, 1.0, Potential::Flat).is_err());
        assert!(PotentialSpec::new(0.0, 1.0, 10, 0.0, Potential::Flat).is_err());
        assert!(PotentialSpec::new(0.0, 1.0, 4, 1.0, Potential::Sampled(vec![0.0; 3])).is_err());
        assert!(PotentialSpec::new(0.0, 1.0, 3, 1.0, Potential::Sampled(vec![0.0; 3])).is_ok());
    }

    #[test]
    fn n_points_message_names_field() {
        let err = PotentialSpec::new(0.0, 1.0, 2, 1.0, Potential::Flat).unwrap_err();
        assert!(err.to_string().contains("n_points"));
    }

    #[test]
    fn table_parsing() {
        let (x, v) = Potential::parse_table("# x V\n0.0 1.5\n0.5, 2.0\n\n1.0\t-3\n").unwrap();
        assert_eq!(x, vec![0.0, 0.5, 1.0]);
        assert_eq!(v, vec![1.5, 2.0, -3.0]);
        assert!(Potential::parse_table("0.0 abc\n").is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let spec = PotentialSpec::new(-2.0, 3.0, 11, 1.0, Potential::Flat).unwrap();
        let g = spec.grid();
        assert_eq!(g[0], -2.0);
        assert_eq!(g[10], 3.0);
        assert_eq!(spec.refined().unwrap().n_points, 21);
    }
}
