//! Coulomb- and dipole-frame quantum Rabi Hamiltonians.
//!
//! Operators act on `TLS ⊗ Fock` with the two-level factor first. Everything is
//! assembled in the site basis and converted at the end when the energy basis
//! is requested.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::{CouplingParams, GaugeFrame, ModeSpec, TwoLevelParams};
use super::tls::{composite_from_site, tls_operator, TlsBasis, TlsOperator};
use crate::error::Result;
use crate::fock::{annihilation, displacement, number, quadrature, DisplacementMode, FockBasis};
use crate::linalg::{matrix_function, spectral_map, BasisLabel, OperatorMatrix};

/// How the `cos(2ηX)`, `sin(2ηX)` terms of the Coulomb frame are realized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigPath {
    /// `Û (H_m ⊗ I) Û†` with `Û` assembled from displacement blocks.
    #[default]
    Unitary,
    /// Spectral matrix functions of the quadrature.
    MatrixFunction,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    #[serde(default)]
    pub tls_basis: TlsBasis,
    #[serde(default)]
    pub trig: TrigPath,
    #[serde(default)]
    pub displacement: DisplacementMode,
}

/// `Û = exp(iη ρ_z ⊗ X)`, i.e. `D(iη) ⊕ D(−iη)` over the `ρ_z = ±1` subspaces.
pub fn minimal_coupling_unitary(
    eta: f64,
    fock: FockBasis,
    basis: TlsBasis,
    mode: DisplacementMode,
) -> Result<OperatorMatrix> {
    let (plus, minus) = displacement_pair(fock, Complex64::new(0.0, eta), mode)?;
    let site = block_diagonal(&plus, &minus);
    Ok(composite_from_site(&labelled(site, &[fock]), basis))
}

/// Hermitian generator `η ρ_z ⊗ X` of [`minimal_coupling_unitary`].
pub fn minimal_coupling_generator(eta: f64, fock: FockBasis, basis: TlsBasis) -> OperatorMatrix {
    tls_operator(TlsOperator::RhoZ, basis).kron(&quadrature(fock)).scale_real(eta)
}

/// `Û` from a single spectral exponential of the full generator.
pub fn minimal_coupling_unitary_from_generator(eta: f64, fock: FockBasis, basis: TlsBasis) -> Result<OperatorMatrix> {
    spectral_map(&minimal_coupling_generator(eta, fock, basis), |l| Complex64::from_polar(1.0, l))
}

/// Builds the light-matter Hamiltonian in the requested frame.
///
/// Coulomb: `ω a†a + (ε/2)ρ_z − (Δ/2)[ρ_x cos 2ηX − ρ_y sin 2ηX]`.
/// Dipole: `ω a†a + (ε/2)ρ_z − (Δ/2)ρ_x − iηω ρ_z (a − a†) + ωη²`.
pub fn build_hamiltonian(
    params: &TwoLevelParams,
    mode: &ModeSpec,
    coupling: &CouplingParams,
    fock: FockBasis,
    frame: GaugeFrame,
    options: &BuildOptions,
) -> Result<OperatorMatrix> {
    params.validate()?;
    mode.validate()?;
    let eta = coupling.resolve(params, mode)?;
    let site = match frame {
        GaugeFrame::Coulomb => coulomb_site(params, mode.omega_ph, eta, fock, options)?,
        GaugeFrame::Dipole => dipole_site(params, mode.omega_ph, eta, fock),
    };
    Ok(composite_from_site(&site, options.tls_basis))
}

fn coulomb_site(
    params: &TwoLevelParams,
    omega: f64,
    eta: f64,
    fock: FockBasis,
    options: &BuildOptions,
) -> Result<OperatorMatrix> {
    let field = number(fock).scale_real(omega);
    match options.trig {
        TrigPath::Unitary => {
            let (plus, minus) = displacement_pair(fock, Complex64::new(0.0, eta), options.displacement)?;
            Ok(assemble_coulomb(params, &plus, &minus, &field, &[fock]))
        }
        TrigPath::MatrixFunction => {
            let x = quadrature(fock);
            let cos = matrix_function(&x, |l| (2.0 * eta * l).cos())?;
            let sin = matrix_function(&x, |l| (2.0 * eta * l).sin())?;
            let half = 0.5 * params.delta;
            let upper = (&cos + &sin.scale(Complex64::i())).scale_real(-half);
            let lower = (&cos - &sin.scale(Complex64::i())).scale_real(-half);
            let eps = OperatorMatrix::identity(fock.dim()).scale_real(0.5 * params.epsilon);
            Ok(labelled(
                blocks(&(&field + &eps), &upper, &lower, &(&field - &eps)),
                &[fock],
            ))
        }
    }
}

/// `I ⊗ field + Û (H_m ⊗ I) Û†` with `Û = D₊ ⊕ D₋` in the site basis.
pub(crate) fn assemble_coulomb(
    params: &TwoLevelParams,
    plus: &OperatorMatrix,
    minus: &OperatorMatrix,
    field: &OperatorMatrix,
    modes: &[FockBasis],
) -> OperatorMatrix {
    let (half_e, half_d) = (0.5 * params.epsilon, 0.5 * params.delta);
    let (plus_dag, minus_dag) = (plus.adjoint(), minus.adjoint());
    let upper_left = &plus.matmul(&plus_dag).scale_real(half_e) + field;
    let lower_right = &minus.matmul(&minus_dag).scale_real(-half_e) + field;
    let upper = plus.matmul(&minus_dag).scale_real(-half_d);
    let lower = upper.adjoint();
    let mut h = labelled(blocks(&upper_left, &upper, &lower, &lower_right), modes);
    h.hermitize();
    h
}

fn dipole_site(params: &TwoLevelParams, omega: f64, eta: f64, fock: FockBasis) -> OperatorMatrix {
    let a = annihilation(fock);
    let field = number(fock).scale_real(omega);
    let id = OperatorMatrix::identity(fock.dim());
    let matter = |op, s: f64| tls_operator(op, TlsBasis::Site).kron(&id).scale_real(s);
    let mut h = tls_operator(TlsOperator::Identity, TlsBasis::Site).kron(&field);
    h = &h + &matter(TlsOperator::RhoZ, 0.5 * params.epsilon);
    h = &h + &matter(TlsOperator::RhoX, -0.5 * params.delta);
    let a_minus_ad = &a - &a.adjoint();
    let coupling = tls_operator(TlsOperator::RhoZ, TlsBasis::Site)
        .kron(&a_minus_ad)
        .scale(Complex64::new(0.0, -eta * omega));
    h = (&h + &coupling).shift(omega * eta * eta);
    h.hermitize();
    labelled(h, &[fock])
}

/// `D(α)` and `D(−α)`; the truncated construction uses `D(−α) = D(α)†` exactly.
fn displacement_pair(
    fock: FockBasis,
    alpha: Complex64,
    mode: DisplacementMode,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let plus = displacement(fock, alpha, mode)?;
    let minus = match mode {
        DisplacementMode::TruncatedGenerator => plus.adjoint(),
        DisplacementMode::Analytic => displacement(fock, -alpha, mode)?,
    };
    Ok((plus, minus))
}

fn block_diagonal(upper: &OperatorMatrix, lower: &OperatorMatrix) -> OperatorMatrix {
    let zero = OperatorMatrix::zeros(upper.dim());
    blocks(upper, &zero, &zero, lower)
}

/// `[[b00, b01], [b10, b11]]`.
pub(crate) fn blocks(
    b00: &OperatorMatrix,
    b01: &OperatorMatrix,
    b10: &OperatorMatrix,
    b11: &OperatorMatrix,
) -> OperatorMatrix {
    let m = b00.dim();
    OperatorMatrix::from_fn(2 * m, |i, j| {
        let b = match (i / m, j / m) {
            (0, 0) => b00,
            (0, 1) => b01,
            (1, 0) => b10,
            _ => b11,
        };
        b[(i % m, j % m)]
    })
}

pub(crate) fn labelled(m: OperatorMatrix, modes: &[FockBasis]) -> OperatorMatrix {
    m.with_basis(BasisLabel::new(2, modes.iter().map(|f| f.cutoff()).collect()))
        .expect("TLS ⊗ Fock dimension")
}
