//! Multi-mode Coulomb-frame model that keeps the spatial variation of each
//! mode across the two sites.
//!
//! The sites sit at `x = ∓a/2`. Mode `i` enters through
//! `η_i = η_i^dip · (∫_{−a/2}^{a/2} f_i) / a`, where `η_i^dip` is its
//! dipole-limit coupling, so a uniform profile reproduces the single-mode
//! dipole model exactly. When `a` is not given, lengths are in units of `a`.

use num_complex::Complex64;

use super::hamiltonian::{assemble_coulomb, labelled};
use super::params::{CouplingParams, SpatialProfile, TwoLevelParams};
use super::tls::{composite_from_site, TlsBasis};
use super::transporter::{line_integral, sin_pi};
use crate::error::{Error, Result};
use crate::fock::{displacement, number, DisplacementMode, FockBasis};
use crate::gauge::params::ModeSpec;
use crate::linalg::OperatorMatrix;

/// Largest total dimension accepted by default.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct ModeCoupling {
    pub mode: ModeSpec,
    pub coupling: CouplingParams,
    pub fock: FockBasis,
}

/// Effective coupling of one mode, the line-integrated profile over the sites.
pub fn effective_coupling(params: &TwoLevelParams, mode: &ModeSpec, coupling: &CouplingParams) -> Result<f64> {
    let eta = coupling.resolve(params, mode)?;
    let a = params.a.unwrap_or(1.0);
    Ok(eta * (line_integral(&mode.profile, -0.5 * a, 0.5 * a)? / a))
}

/// `η_eff / η = cos φ · sin(ka/2)/(ka/2)` for a `cos(kx + φ)` profile.
pub fn suppression_factor(ka: f64, phi: f64) -> f64 {
    if ka == 0.0 {
        return phi.cos();
    }
    phi.cos() * sin_pi(ka / (2.0 * std::f64::consts::PI)) / (0.5 * ka)
}

/// `Σ ω_i a_i†a_i + (ε/2)ρ_z − (Δ/2)[ρ_x cos qΦ − ρ_y sin qΦ]` with
/// `qΦ = Σ 2η_i X_i`, built as `Û (H_m ⊗ I) Û†` from per-mode displacements.
pub fn build_beyond_dipole_hamiltonian(
    params: &TwoLevelParams,
    modes: &[ModeCoupling],
    basis: TlsBasis,
    cap: usize,
) -> Result<OperatorMatrix> {
    params.validate()?;
    if modes.is_empty() {
        return Err(Error::invalid("modes", "at least one mode is required"));
    }
    let dim = modes.iter().try_fold(2usize, |d, m| d.checked_mul(m.fock.dim())).unwrap_or(usize::MAX);
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let mut plus = OperatorMatrix::identity(1);
    let mut field = OperatorMatrix::zeros(1);
    for m in modes {
        m.mode.validate()?;
        let eta = effective_coupling(params, &m.mode, &m.coupling)?;
        let d = displacement(m.fock, Complex64::new(0.0, eta), DisplacementMode::TruncatedGenerator)?;
        let id = OperatorMatrix::identity(m.fock.dim());
        field = &field.kron(&id) + &OperatorMatrix::identity(field.dim()).kron(&number(m.fock).scale_real(m.mode.omega_ph));
        plus = plus.kron(&d);
    }
    let minus = plus.adjoint();
    let focks: Vec<FockBasis> = modes.iter().map(|m| m.fock).collect();
    let site = assemble_coulomb(params, &plus, &minus, &field, &focks);
    Ok(composite_from_site(&labelled(site, &focks), basis))
}

/// Uniform-profile single mode with the given dipole coupling.
pub fn uniform_mode(omega_ph: f64, eta: f64, fock: FockBasis) -> Result<ModeCoupling> {
    Ok(ModeCoupling { mode: ModeSpec::new(omega_ph)?, coupling: CouplingParams::direct(eta), fock })
}

/// Cosine-profile single mode `cos(kx + φ)`.
pub fn cosine_mode(omega_ph: f64, eta: f64, k: f64, phi: f64, fock: FockBasis) -> Result<ModeCoupling> {
    Ok(ModeCoupling {
        mode: ModeSpec::new(omega_ph)?.with_profile(SpatialProfile::Cosine { k, phi })?,
        coupling: CouplingParams::direct(eta),
        fock,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::hamiltonian::{build_hamiltonian, BuildOptions};
    use crate::gauge::params::GaugeFrame;
    use crate::gauge::transporter::simpson;
    use crate::linalg::eigvalsh;

    fn params() -> TwoLevelParams {
        TwoLevelParams::new(1.0, 0.0).unwrap().with_geometry(1.0, 1.0).unwrap()
    }

    #[test]
    fn uniform_mode_reduces_to_dipole_model() {
        let fock = FockBasis::new(20);
        for eps in [0.0, 0.3] {
            let p = TwoLevelParams { epsilon: eps, ..params() };
            let m = uniform_mode(1.0, 0.6, fock).unwrap();
            let bd = build_beyond_dipole_hamiltonian(&p, &[m.clone()], TlsBasis::Energy, DEFAULT_DIMENSION_CAP).unwrap();
            let h = build_hamiltonian(&p, &m.mode, &m.coupling, fock, GaugeFrame::Coulomb, &BuildOptions::default())
                .unwrap();
            assert!(bd.max_abs_diff(&h) < 1e-12);
        }
    }

    #[test]
    fn full_wavelength_mode_decouples() {
        let fock = FockBasis::new(8);
        let m = cosine_mode(1.3, 0.9, 2.0 * std::f64::consts::PI, 0.0, fock).unwrap();
        assert_eq!(effective_coupling(&params(), &m.mode, &m.coupling).unwrap(), 0.0);
        let h = build_beyond_dipole_hamiltonian(&params(), &[m], TlsBasis::Energy, DEFAULT_DIMENSION_CAP).unwrap();
        let ev = eigvalsh(&h).unwrap();
        let mut free: Vec<f64> = (0..=8).flat_map(|n| [1.3 * n as f64 - 0.5, 1.3 * n as f64 + 0.5]).collect();
        free.sort_by(f64::total_cmp);
        assert!(ev.iter().zip(&free).all(|(a, b)| (a - b).abs() < 1e-10));
    }

    #[test]
    fn suppression_matches_quadrature() {
        for i in 1..=50 {
            let ka = 0.1 + (8.0 * std::f64::consts::PI - 0.1) * i as f64 / 50.0;
            let quad = simpson(|x| (ka * x).cos(), -0.5, 0.5, 4000);
            assert!((suppression_factor(ka, 0.0) - quad).abs() < 1e-10);
        }
        assert_eq!(suppression_factor(2.0 * std::f64::consts::PI, 0.0), 0.0);
        assert!((suppression_factor(std::f64::consts::PI, 0.0) - 2.0 / std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(suppression_factor(0.0, 0.0), 1.0);
    }

    #[test]
    fn two_mode_model() {
        let p = params();
        let modes = [uniform_mode(1.0, 0.4, FockBasis::new(6)).unwrap(), cosine_mode(2.0, 0.3, 1.0, 0.0, FockBasis::new(4)).unwrap()];
        let h = build_beyond_dipole_hamiltonian(&p, &modes, TlsBasis::Site, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(h.dim(), 2 * 7 * 5);
        assert!(h.relative_hermiticity_defect() < 1e-12);
        assert!(matches!(
            build_beyond_dipole_hamiltonian(&p, &modes, TlsBasis::Site, 50),
            Err(Error::DimensionCap { dim: 70, cap: 50 })
        ));
        assert!(build_beyond_dipole_hamiltonian(&p, &[], TlsBasis::Site, 50).is_err());
    }
}
