use serde::Serialize;

use super::solver::{Solution, SolverWarning};
use crate::error::{Error, Result};

/// Default lower bound on `(E2 − E1)/(E1 − E0)` for accepting a reduction.
pub const DEFAULT_MIN_VALIDITY: f64 = 2.0;

#[derive(Clone, Copy, Debug)]
pub struct ReductionOptions {
    pub min_validity: f64,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self { min_validity: DEFAULT_MIN_VALIDITY }
    }
}

/// Two-level description of the lowest doublet of a 1D potential.
///
/// The localized states diagonalize the position operator inside
/// `span{ψ0, ψ1}`; `psi_l` has the smaller position expectation. In the
/// `{|R⟩, |L⟩}` basis the projected Hamiltonian is
/// `Ē + (ε/2)ρ_z − t ρ_x` with `t ≥ 0` and `Δ = 2t`.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionResult {
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub t: f64,
    pub x_l: f64,
    pub x_r: f64,
    pub a: f64,
    pub validity_ratio: f64,
    #[serde(skip)]
    pub grid: Vec<f64>,
    #[serde(skip)]
    pub spacing: f64,
    /// `(ψ_R + ψ_L)/√2`; the ground state, signed to match.
    #[serde(skip)]
    pub psi_s: Vec<f64>,
    /// `(ψ_R − ψ_L)/√2`; the first excited state, signed to match.
    #[serde(skip)]
    pub psi_a: Vec<f64>,
    #[serde(skip)]
    pub psi_l: Vec<f64>,
    #[serde(skip)]
    pub psi_r: Vec<f64>,
    pub warnings: Vec<SolverWarning>,
}

impl ReductionResult {
    /// `√(Δ² + ε²)`.
    pub fn omega_q(&self) -> f64 {
        self.delta.hypot(self.epsilon)
    }

    /// `|ω_q − (E1 − E0)| / (E1 − E0)`.
    pub fn gap_consistency(&self) -> f64 {
        let gap = self.e1 - self.e0;
        (self.omega_q() - gap).abs() / gap
    }

    pub fn overlap(&self, f: &[f64], g: &[f64]) -> f64 {
        self.spacing * f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>()
    }

    /// `⟨f|x|g⟩` on the grid.
    pub fn position_element(&self, f: &[f64], g: &[f64]) -> f64 {
        self.spacing * self.grid.iter().zip(f).zip(g).map(|((x, a), b)| x * a * b).sum::<f64>()
    }
}

pub fn reduce_to_two_level(solution: &Solution, options: ReductionOptions) -> Result<ReductionResult> {
    if solution.states.len() < 3 {
        return Err(Error::invalid(
            "solution",
            format!("reduction needs three solved levels, got {}", solution.states.len()),
        ));
    }
    let (e0, e1, e2) = (solution.states[0].energy, solution.states[1].energy, solution.states[2].energy);
    let psi0 = &solution.states[0].psi;
    let psi1 = &solution.states[1].psi;
    let x = |f: &[f64], g: &[f64]| solution.integrate(f, g, |x| x);

    // projected position operator in the {ψ0, ψ1} basis
    let (x00, x01, x11) = (x(psi0, psi0), x(psi0, psi1), x(psi1, psi1));
    let mean = 0.5 * (x00 + x11);
    let half = (0.25 * (x00 - x11).powi(2) + x01 * x01).sqrt();
    let (x_l, x_r) = (mean - half, mean + half);
    if x_r - x_l < solution.spacing {
        return Err(Error::NoTwoWellStructure { separation: x_r - x_l, spacing: solution.spacing });
    }
    let left = eigvec_2x2(x00, x01, x11, x_l);
    let mut right = [-left[1], left[0]];

    let combine = |c: [f64; 2]| -> Vec<f64> { psi0.iter().zip(psi1).map(|(a, b)| c[0] * a + c[1] * b).collect() };
    let mut left = left;
    let psi_l_trial = combine(left);
    let peak = psi_l_trial.iter().copied().fold(0.0f64, |m, a| if a.abs() > m.abs() { a } else { m });
    if peak < 0.0 {
        left = [-left[0], -left[1]];
    }
    // t = −⟨R|H|L⟩ with H = diag(E0, E1) on span{ψ0, ψ1}
    let hop = |r: [f64; 2], l: [f64; 2]| r[0] * l[0] * e0 + r[1] * l[1] * e1;
    if hop(right, left) > 0.0 {
        right = [-right[0], -right[1]];
    }
    let t = -hop(right, left);
    let energy = |c: [f64; 2]| c[0] * c[0] * e0 + c[1] * c[1] * e1;
    let epsilon = energy(right) - energy(left);

    let psi_l = combine(left);
    let psi_r = combine(right);
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let psi_s: Vec<f64> = psi_r.iter().zip(&psi_l).map(|(r, l)| r2 * (r + l)).collect();
    let psi_a: Vec<f64> = psi_r.iter().zip(&psi_l).map(|(r, l)| r2 * (r - l)).collect();

    let result = ReductionResult {
        e0,
        e1,
        e2,
        delta: 2.0 * t,
        epsilon,
        t,
        x_l,
        x_r,
        a: x_r - x_l,
        validity_ratio: (e2 - e1) / (e1 - e0),
        grid: solution.grid.clone(),
        spacing: solution.spacing,
        psi_s,
        psi_a,
        psi_l,
        psi_r,
        warnings: solution.warnings.clone(),
    };
    if !(result.validity_ratio >= options.min_validity) {
        return Err(Error::LowValidity {
            ratio: result.validity_ratio,
            threshold: options.min_validity,
            result: Box::new(result),
        });
    }
    Ok(result)
}

/// Unit eigenvector of `[[a, b], [b, d]]` for eigenvalue `lambda`.
fn eigvec_2x2(a: f64, b: f64, d: f64, lambda: f64) -> [f64; 2] {
    // pick the better-conditioned row of (M − λ)v = 0
    let v = if (a - lambda).abs() + b.abs() >= (d - lambda).abs() + b.abs() {
        [-b, a - lambda]
    } else {
        [d - lambda, -b]
    };
    let n = v[0].hypot(v[1]);
    if n == 0.0 {
        [1.0, 0.0]
    } else {
        [v[0] / n, v[1] / n]
    }
}

/// Transition dipole `q a/2 = q ⟨A|x|S⟩`.
pub fn dipole_moment(result: &ReductionResult, q: f64) -> f64 {
    q * result.a / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twolevel::potential::{Potential, PotentialSpec};
    use crate::twolevel::solver::{solve_schrodinger_1d, SolverOptions};

    fn solve(potential: Potential) -> Solution {
        let spec = PotentialSpec::new(-4.0, 4.0, 2000, 1.0, potential).unwrap();
        solve_schrodinger_1d(&spec, 3, SolverOptions::default()).unwrap()
    }

    #[test]
    fn symmetric_well_is_parity_balanced() {
        let r = reduce_to_two_level(&solve(Potential::quartic(1.0, 1.5)), ReductionOptions::default()).unwrap();
        assert!(r.epsilon.abs() < 1e-9, "epsilon {}", r.epsilon);
        assert!((r.x_l + r.x_r).abs() < 1e-9);
        assert!((r.delta - (r.e1 - r.e0)).abs() < 1e-9 * r.delta);
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.overlap(&r.psi_r, &r.psi_s) - r2).abs() < 1e-9);
        assert!((r.overlap(&r.psi_r, &r.psi_a) - r2).abs() < 1e-9);
        assert!(r.t > 0.0 && r.a > 0.0);
    }

    #[test]
    fn localized_states_are_orthonormal_and_localized() {
        let r = reduce_to_two_level(&solve(Potential::tilted_quartic(1.0, 1.5, 0.05)), ReductionOptions::default())
            .unwrap();
        assert!((r.overlap(&r.psi_l, &r.psi_l) - 1.0).abs() < 1e-10);
        assert!(r.overlap(&r.psi_l, &r.psi_r).abs() < 1e-10);
        assert!(r.position_element(&r.psi_l, &r.psi_r).abs() < 1e-10);
        assert!(r.x_l < 0.0 && r.x_r > 0.0);
        // tilt raises the right well
        assert!(r.epsilon > 0.0);
        assert!(r.gap_consistency() < 1e-6);
    }

    #[test]
    fn dipole_moment_linear_in_charge() {
        let r = reduce_to_two_level(&solve(Potential::quartic(1.0, 1.5)), ReductionOptions::default()).unwrap();
        assert_eq!(dipole_moment(&r, 0.0), 0.0);
        assert_eq!(dipole_moment(&r, 2.0), 2.0 * dipole_moment(&r, 1.0));
    }

    #[test]
    fn single_well_has_no_two_state_structure() {
        let spec = PotentialSpec::new(-10.0, 10.0, 800, 1.0, Potential::Harmonic { omega: 1.0 }).unwrap();
        let sol = solve_schrodinger_1d(&spec, 3, SolverOptions::default()).unwrap();
        // harmonic: E2 − E1 = E1 − E0, so the validity gate trips first
        match reduce_to_two_level(&sol, ReductionOptions::default()) {
            Err(Error::LowValidity { ratio, result, .. }) => {
                assert!((ratio - 1.0).abs() < 1e-4);
                assert!(result.a > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn needs_three_levels() {
        let spec = PotentialSpec::new(-4.0, 4.0, 400, 1.0, Potential::quartic(1.0, 1.5)).unwrap();
        let sol = solve_schrodinger_1d(&spec, 2, SolverOptions::default()).unwrap();
        assert!(reduce_to_two_level(&sol, ReductionOptions::default()).is_err());
    }
}
