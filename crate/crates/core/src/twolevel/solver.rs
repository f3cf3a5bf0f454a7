//! Finite-difference eigensolver for `p²/2m + V(x)` with hard walls.
//!
//! The discretized Hamiltonian is a symmetric band matrix over the interior
//! grid points. Eigenvalues come from bisection on the inertia of the shifted
//! `LDLᵀ` factorization; eigenvectors from inverse iteration at the converged
//! eigenvalue.

use serde::{Deserialize, Serialize};

use super::potential::PotentialSpec;
use crate::error::{Error, Result};

/// Relative shift of the highest solved level under grid refinement above which
/// the grid is reported as too coarse.
pub const REFINEMENT_TOLERANCE: f64 = 1e-6;
/// Wavefunction magnitude next to a wall, relative to its maximum, above which
/// boundary leakage is reported.
pub const LEAKAGE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    /// Three-point second difference.
    Second,
    /// Five-point fourth-order second difference, odd reflection at the walls.
    #[default]
    Fourth,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolverOptions {
    pub stencil: Stencil,
    /// Re-solve on a grid with half the spacing and compare the highest level.
    pub refinement_check: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverWarning {
    GridTooCoarse { level: usize, relative_shift: f64 },
    BoundaryLeakage { level: usize, ratio: f64 },
}

#[derive(Clone, Debug)]
pub struct Eigenstate {
    pub energy: f64,
    /// Values on the full grid; the wall points are zero.
    pub psi: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub grid: Vec<f64>,
    pub spacing: f64,
    pub states: Vec<Eigenstate>,
    pub warnings: Vec<SolverWarning>,
}

impl Solution {
    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    /// Trapezoidal `∫ f g w dx`; the wall samples vanish so this is `h Σ f g w`.
    pub fn integrate(&self, f: &[f64], g: &[f64], w: impl Fn(f64) -> f64) -> f64 {
        self.spacing * self.grid.iter().zip(f).zip(g).map(|((&x, a), b)| a * b * w(x)).sum::<f64>()
    }
}

/// Lowest `n_levels` eigenpairs, ascending.
pub fn solve_schrodinger_1d(spec: &PotentialSpec, n_levels: usize, options: SolverOptions) -> Result<Solution> {
    spec.validate()?;
    let interior = spec.n_points - 2;
    if n_levels == 0 || n_levels > interior {
        return Err(Error::invalid(
            "n_levels",
            format!("need 1 ≤ n_levels ≤ n_points − 2 = {interior}, got {n_levels}"),
        ));
    }
    let h = spec.spacing();
    let v = spec.sample()?;
    let band = BandMatrix::hamiltonian(&v[1..v.len() - 1], spec.mass, h, options.stencil);

    let mut states: Vec<Eigenstate> = Vec::with_capacity(n_levels);
    let mut interior_vectors: Vec<Vec<f64>> = Vec::with_capacity(n_levels);
    for k in 0..n_levels {
        let energy = band.kth_eigenvalue(k);
        let mut y = band.eigenvector(energy, &interior_vectors)?;
        let norm = (h * y.iter().map(|a| a * a).sum::<f64>()).sqrt();
        y.iter_mut().for_each(|a| *a /= norm);
        let peak = y.iter().copied().fold(0.0f64, |m, a| if a.abs() > m.abs() { a } else { m });
        if peak < 0.0 {
            y.iter_mut().for_each(|a| *a = -*a);
        }
        let mut psi = Vec::with_capacity(spec.n_points);
        psi.push(0.0);
        psi.extend_from_slice(&y);
        psi.push(0.0);
        interior_vectors.push(y);
        states.push(Eigenstate { energy, psi });
    }

    let mut warnings = Vec::new();
    for (level, s) in states.iter().enumerate() {
        let max = s.psi.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let edge = s.psi[1].abs().max(s.psi[spec.n_points - 2].abs());
        let ratio = edge / max;
        if ratio > LEAKAGE_TOLERANCE {
            warnings.push(SolverWarning::BoundaryLeakage { level, ratio });
        }
    }
    if options.refinement_check {
        let fine = spec.refined()?;
        let top = n_levels - 1;
        let fine_solution =
            solve_schrodinger_1d(&fine, n_levels, SolverOptions { refinement_check: false, ..options })?;
        let coarse_e = states[top].energy;
        let fine_e = fine_solution.states[top].energy;
        let relative_shift = (fine_e - coarse_e).abs() / fine_e.abs().max(f64::MIN_POSITIVE);
        if relative_shift > REFINEMENT_TOLERANCE {
            warnings.push(SolverWarning::GridTooCoarse { level: top, relative_shift });
        }
    }

    Ok(Solution { grid: spec.grid(), spacing: h, states, warnings })
}

/// Symmetric band matrix: `bands[d][i] = H[i][i + d]`.
struct BandMatrix {
    n: usize,
    bands: Vec<Vec<f64>>,
}

impl BandMatrix {
    fn hamiltonian(v: &[f64], mass: f64, h: f64, stencil: Stencil) -> Self {
        let n = v.len();
        let k = 1.0 / (2.0 * mass * h * h);
        match stencil {
            Stencil::Second => {
                let diag = v.iter().map(|vi| vi + 2.0 * k).collect();
                let off = vec![-k; n.saturating_sub(1)];
                Self { n, bands: vec![diag, off] }
            }
            Stencil::Fourth => {
                let mut diag: Vec<f64> = v.iter().map(|vi| vi + 30.0 * k / 12.0).collect();
                // ghost point beyond each wall mirrors its neighbour with opposite sign
                diag[0] -= k / 12.0;
                diag[n - 1] -= k / 12.0;
                let off1 = vec![-16.0 * k / 12.0; n.saturating_sub(1)];
                let off2 = vec![k / 12.0; n.saturating_sub(2)];
                Self { n, bands: vec![diag, off1, off2] }
            }
        }
    }

    fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.bandwidth() {
            0.0
        } else {
            self.bands[d][lo]
        }
    }

    fn gershgorin(&self) -> (f64, f64) {
        let b = self.bandwidth();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut r = 0.0;
            for j in i.saturating_sub(b)..(i + b + 1).min(self.n) {
                if j != i {
                    r += self.get(i, j).abs();
                }
            }
            lo = lo.min(self.bands[0][i] - r);
            hi = hi.max(self.bands[0][i] + r);
        }
        (lo, hi)
    }

    /// `LDLᵀ` of `H − σI` without pivoting; `l[i][d-1] = L[i][i−d]`.
    fn factor(&self, sigma: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
        let b = self.bandwidth();
        let n = self.n;
        let scale = self.bands[0].iter().fold(0.0f64, |m, x| m.max(x.abs())).max(sigma.abs()).max(1.0);
        let tiny = f64::EPSILON * f64::EPSILON * scale;
        let mut d = vec![0.0; n];
        let mut l = vec![vec![0.0; b]; n];
        for i in 0..n {
            for dd in (1..=b.min(i)).rev() {
                let j = i - dd;
                let mut s = self.get(i, j);
                for ee in (dd + 1)..=b.min(i) {
                    let k = i - ee;
                    // L[i][k] L[j][k] D[k] with k < j
                    let lj = if j - k <= b && j >= k && j != k { l[j][j - k - 1] } else { 0.0 };
                    s -= l[i][ee - 1] * lj * d[k];
                }
                l[i][dd - 1] = s / d[j];
            }
            let mut di = self.get(i, i) - sigma;
            for dd in 1..=b.min(i) {
                let lik = l[i][dd - 1];
                di -= lik * lik * d[i - dd];
            }
            if di.abs() < tiny {
                di = if di < 0.0 { -tiny } else { tiny };
            }
            d[i] = di;
        }
        (d, l)
    }

    /// Number of eigenvalues strictly below `sigma`.
    fn count_below(&self, sigma: f64) -> usize {
        self.factor(sigma).0.iter().filter(|&&x| x < 0.0).count()
    }

    fn kth_eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * (hi - lo).abs().max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(H − σI) x = rhs` with the unpivoted factorization.
    fn solve(&self, d: &[f64], l: &[Vec<f64>], rhs: &mut [f64]) {
        let b = self.bandwidth();
        let n = self.n;
        for i in 0..n {
            for dd in 1..=b.min(i) {
                rhs[i] -= l[i][dd - 1] * rhs[i - dd];
            }
        }
        for i in 0..n {
            rhs[i] /= d[i];
        }
        for i in (0..n).rev() {
            for dd in 1..=b {
                if i + dd < n {
                    rhs[i] -= l[i + dd][dd - 1] * rhs[i + dd];
                }
            }
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let b = self.bandwidth();
        (0..self.n)
            .map(|i| {
                (i.saturating_sub(b)..(i + b + 1).min(self.n)).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    fn eigenvector(&self, energy: f64, lower: &[Vec<f64>]) -> Result<Vec<f64>> {
        let (d, l) = self.factor(energy);
        let n = self.n;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * (1.7 * i as f64 + 0.3).sin()).collect();
        let scale = self.bands[0].iter().fold(0.0f64, |m, v| m.max(v.abs())).max(energy.abs());
        for _ in 0..8 {
            orthogonalize(&mut x, lower);
            self.solve(&d, &l, &mut x);
            orthogonalize(&mut x, lower);
            let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::NoConvergence { what: "inverse iteration", residual: f64::NAN });
            }
            x.iter_mut().for_each(|a| *a /= norm);
            let hx = self.apply(&x);
            let residual = hx.iter().zip(&x).map(|(a, b)| (a - energy * b).powi(2)).sum::<f64>().sqrt();
            if residual <= 1e-10 * scale {
                return Ok(x);
            }
        }
        let hx = self.apply(&x);
        let residual = hx.iter().zip(&x).map(|(a, b)| (a - energy * b).powi(2)).sum::<f64>().sqrt();
        Err(Error::NoConvergence { what: "inverse iteration", residual: residual / scale })
    }
}

fn orthogonalize(x: &mut [f64], basis: &[Vec<f64>]) {
    for v in basis {
        let vv: f64 = v.iter().map(|a| a * a).sum();
        let proj: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / vv;
        x.iter_mut().zip(v).for_each(|(a, b)| *a -= proj * b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twolevel::potential::Potential;
    use std::f64::consts::PI;

    fn harmonic(n: usize) -> PotentialSpec {
        PotentialSpec::new(-10.0, 10.0, n, 1.0, Potential::Harmonic { omega: 1.0 }).unwrap()
    }

    #[test]
    fn harmonic_levels() {
        let sol = solve_schrodinger_1d(&harmonic(2000), 4, SolverOptions::default()).unwrap();
        assert!((sol.states[0].energy - 0.5).abs() < 1e-6);
        for (n, s) in sol.states.iter().enumerate() {
            assert!((s.energy - (n as f64 + 0.5)).abs() < 1e-5, "level {n}: {}", s.energy);
        }
    }

    #[test]
    fn second_order_stencil_error_scales_as_h_squared() {
        let opts = SolverOptions { stencil: Stencil::Second, ..Default::default() };
        let e_coarse = solve_schrodinger_1d(&harmonic(501), 1, opts).unwrap().states[0].energy;
        let e_fine = solve_schrodinger_1d(&harmonic(1001), 1, opts).unwrap().states[0].energy;
        let ratio = (e_coarse - 0.5) / (e_fine - 0.5);
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn particle_in_a_box() {
        let spec = PotentialSpec::new(0.0, PI, 2000, 1.0, Potential::Flat).unwrap();
        let sol = solve_schrodinger_1d(&spec, 3, SolverOptions::default()).unwrap();
        for (k, s) in sol.states.iter().enumerate() {
            let n = (k + 1) as f64;
            let exact = n * n / 2.0;
            assert!((s.energy - exact).abs() / exact < 1e-4);
        }
        // hard walls at the grid ends are flagged, not fatal
        assert!(sol.warnings.iter().any(|w| matches!(w, SolverWarning::BoundaryLeakage { .. })));
    }

    #[test]
    fn eigenfunctions_normalized_and_phase_fixed() {
        let sol = solve_schrodinger_1d(&harmonic(801), 3, SolverOptions::default()).unwrap();
        for s in &sol.states {
            let norm = sol.integrate(&s.psi, &s.psi, |_| 1.0);
            assert!((norm - 1.0).abs() < 1e-12);
            let peak = s.psi.iter().copied().fold(0.0f64, |m, a| if a.abs() > m.abs() { a } else { m });
            assert!(peak > 0.0);
        }
        let overlap = sol.integrate(&sol.states[0].psi, &sol.states[2].psi, |_| 1.0);
        assert!(overlap.abs() < 1e-10);
    }

    #[test]
    fn too_many_levels_rejected() {
        let spec = PotentialSpec::new(0.0, 1.0, 5, 1.0, Potential::Flat).unwrap();
        assert!(solve_schrodinger_1d(&spec, 4, SolverOptions::default()).is_err());
        assert!(solve_schrodinger_1d(&spec, 3, SolverOptions::default()).is_ok());
    }

    #[test]
    fn refinement_warning_on_coarse_grid() {
        let opts = SolverOptions { refinement_check: true, ..Default::default() };
        let coarse = solve_schrodinger_1d(&harmonic(60), 3, opts).unwrap();
        assert!(coarse.warnings.iter().any(|w| matches!(w, SolverWarning::GridTooCoarse { .. })));
        let fine = solve_schrodinger_1d(&harmonic(2000), 3, opts).unwrap();
        assert!(fine.warnings.is_empty(), "{:?}", fine.warnings);
    }

    #[test]
    fn band_factorization_counts_match_dense_spectrum() {
        let v: Vec<f64> = (0..40).map(|i| ((i as f64) * 0.37).sin()).collect();
        for stencil in [Stencil::Second, Stencil::Fourth] {
            let band = BandMatrix::hamiltonian(&v, 1.3, 0.2, stencil);
            let dense = crate::linalg::OperatorMatrix::from_fn(40, |i, j| num_complex::Complex64::new(band.get(i, j), 0.0));
            let eigs = crate::linalg::eigvalsh(&dense).unwrap();
            for k in 0..40 {
                assert!((band.kth_eigenvalue(k) - eigs[k]).abs() < 1e-10 * eigs[39].abs());
            }
            for w in eigs.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                let expected = eigs.iter().filter(|&&e| e < mid).count();
                assert_eq!(band.count_below(mid), expected);
            }
        }
    }
}
