//! Seeded numerical checks of gauge invariance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hamiltonian::{build_hamiltonian, BuildOptions};
use super::params::{CouplingParams, GaugeFrame, ModeSpec, SpatialProfile, TwoLevelParams};
use super::tls::TlsBasis;
use super::transporter::{
    gauge_invariant_tls, parallel_transporter, transporter_gauge_law, two_site_phase_unitary, ClassicalField,
    GaugeFunction, Polynomial,
};
use crate::error::Result;
use crate::fock::FockBasis;
use crate::linalg::eigvalsh;

/// Name of the generator recorded in reports.
pub const RNG_NAME: &str = "ChaCha8Rng";

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trials: usize,
    pub max_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &str, trials: usize, max_deviation: f64, threshold: f64) -> Self {
        Self { name: name.to_string(), trials, max_deviation, threshold, passed: max_deviation <= threshold }
    }
}

fn random_field(rng: &mut ChaCha8Rng) -> ClassicalField {
    let k = rng.gen_range(0.5..3.0);
    let phi = rng.gen_range(-1.0..1.0);
    ClassicalField::new(rng.gen_range(-1.5..1.5), SpatialProfile::Cosine { k, phi })
}

fn random_cubic(rng: &mut ChaCha8Rng) -> Polynomial {
    Polynomial((0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn random_sites(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let x_l = rng.gen_range(-1.0..0.0);
    (x_l, x_l + rng.gen_range(0.2..1.5))
}

fn random_state(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    let mut v = [0; 2].map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= n);
    v
}

/// Transporter law under `A → A + θ'` for random cubic `θ` and cosine fields.
pub fn transporter_law_check(seed: u64, trials: usize, threshold: f64) -> Result<CheckOutcome> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let field = random_field(&mut rng);
        let theta = random_cubic(&mut rng);
        let q = rng.gen_range(0.5..1.5);
        let (x_l, x_r) = random_sites(&mut rng);
        let (lhs, rhs) = transporter_gauge_law(&field, &theta, q, x_l, x_r)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(CheckOutcome::new("transporter_gauge_law", trials, worst, threshold))
}

/// `⟨ψ|H|φ⟩` of the gauge-invariant two-site Hamiltonian, before and after a
/// random local phase change of the states with the transporter transformed
/// along with them.
pub fn hopping_invariance_check(seed: u64, trials: usize, threshold: f64) -> Result<CheckOutcome> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let field = random_field(&mut rng);
        let theta = random_cubic(&mut rng);
        let q = rng.gen_range(0.5..1.5);
        let (delta, epsilon) = (rng.gen_range(0.1..2.0), rng.gen_range(-1.0..1.0));
        let (x_l, x_r) = random_sites(&mut rng);
        let basis = if rng.gen_bool(0.5) { TlsBasis::Site } else { TlsBasis::Energy };
        let (psi, phi) = (random_state(&mut rng), random_state(&mut rng));

        let u = parallel_transporter(&field, q, x_l, x_r)?;
        let (u_transformed, _) = transporter_gauge_law(&field, &theta, q, x_l, x_r)?;
        let g = two_site_phase_unitary(theta.value(x_l), theta.value(x_r), q, basis);
        let before = gauge_invariant_tls(delta, epsilon, u, basis).expectation(&psi, &phi);
        let after = gauge_invariant_tls(delta, epsilon, u_transformed, basis).expectation(&g.apply(&psi), &g.apply(&phi));
        worst = worst.max((before - after).norm());
    }
    Ok(CheckOutcome::new("hopping_matrix_elements", trials, worst, threshold))
}

/// Largest difference between the lowest `n_levels` Coulomb- and dipole-frame eigenvalues.
pub fn cross_frame_deviation(
    params: &TwoLevelParams,
    mode: &ModeSpec,
    coupling: &CouplingParams,
    fock: FockBasis,
    n_levels: usize,
    options: &BuildOptions,
) -> Result<f64> {
    let c = eigvalsh(&build_hamiltonian(params, mode, coupling, fock, GaugeFrame::Coulomb, options)?)?;
    let d = eigvalsh(&build_hamiltonian(params, mode, coupling, fock, GaugeFrame::Dipole, options)?)?;
    Ok(c.iter().zip(&d).take(n_levels).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}
