//! Two-level operators in the site basis `(|R⟩, |L⟩)` and the energy basis
//! `(|A⟩, |S⟩)`, with the change of basis kept explicit.
//!
//! `|S⟩ = (|R⟩ + |L⟩)/√2` and `|A⟩ = (|R⟩ − |L⟩)/√2`, so that
//! `σ_x = ρ_z`, `σ_z = −ρ_x` and `σ_y = ρ_y`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock::{photon_parity, FockBasis};
use crate::linalg::{BasisLabel, OperatorMatrix};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TlsBasis {
    /// `(|R⟩, |L⟩)`, where `ρ_z = diag(1, −1)`.
    Site,
    /// `(|A⟩, |S⟩)`, where `σ_z = diag(1, −1)`.
    #[default]
    Energy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TlsOperator {
    Identity,
    RhoX,
    RhoY,
    RhoZ,
    SigmaX,
    SigmaY,
    SigmaZ,
}

/// Columns are `|A⟩` and `|S⟩` written in the site basis.
pub fn basis_change() -> OperatorMatrix {
    let r = FRAC_1_SQRT_2;
    OperatorMatrix::from_real_rows(&[vec![r, r], vec![-r, r]]).expect("2x2")
}

fn pauli(k: usize) -> OperatorMatrix {
    let (o, l, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::i());
    let rows = match k {
        1 => [[o, l], [l, o]],
        2 => [[o, -i], [i, o]],
        3 => [[l, o], [o, -l]],
        _ => [[l, o], [o, l]],
    };
    OperatorMatrix::from_rows(&rows.map(|r| r.to_vec())).expect("2x2")
}

fn site_matrix(op: TlsOperator) -> OperatorMatrix {
    match op {
        TlsOperator::Identity => pauli(0),
        TlsOperator::RhoX => pauli(1),
        TlsOperator::RhoY | TlsOperator::SigmaY => pauli(2),
        TlsOperator::RhoZ | TlsOperator::SigmaX => pauli(3),
        TlsOperator::SigmaZ => pauli(1).scale_real(-1.0),
    }
}

/// The 2×2 matrix of `op` in `basis`.
pub fn tls_operator(op: TlsOperator, basis: TlsBasis) -> OperatorMatrix {
    tls_from_site(&site_matrix(op), basis)
}

/// Re-expresses a 2×2 site-basis operator in `basis`: `W† M W` for the energy basis.
pub fn tls_from_site(site: &OperatorMatrix, basis: TlsBasis) -> OperatorMatrix {
    let m = match basis {
        TlsBasis::Site => site.clone(),
        TlsBasis::Energy => {
            let w = basis_change();
            w.adjoint().matmul(site).matmul(&w)
        }
    };
    m.with_basis(BasisLabel::tls_only()).expect("2x2")
}

/// Changes the TLS factor of a `2 ⊗ rest` operator from the site basis to
/// `basis`, acting blockwise on the four `rest × rest` blocks.
pub fn composite_from_site(site: &OperatorMatrix, basis: TlsBasis) -> OperatorMatrix {
    if basis == TlsBasis::Site {
        return site.clone();
    }
    let w = basis_change();
    let dim = site.dim();
    let m = dim / 2;
    let mut out = OperatorMatrix::zeros(dim);
    for bi in 0..2 {
        for bj in 0..2 {
            // coefficient of site block (k, l) in the new block (bi, bj)
            let coeffs: Vec<(usize, usize, f64)> = (0..2)
                .flat_map(|k| (0..2).map(move |l| (k, l)))
                .map(|(k, l)| (k, l, w[(k, bi)].re * w[(l, bj)].re))
                .collect();
            for r in 0..m {
                for c in 0..m {
                    let v: Complex64 =
                        coeffs.iter().map(|&(k, l, s)| site[(k * m + r, l * m + c)] * s).sum();
                    out[(bi * m + r, bj * m + c)] = v;
                }
            }
        }
    }
    if let Some(label) = site.basis() {
        out.set_basis(Some(label.clone()));
    }
    out
}

/// `σ_z ⊗ (−1)^{â†â}`.
pub fn parity_operator(fock: FockBasis, basis: TlsBasis) -> OperatorMatrix {
    tls_operator(TlsOperator::SigmaZ, basis).kron(&photon_parity(fock))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_identities() {
        for basis in [TlsBasis::Site, TlsBasis::Energy] {
            let g = |op| tls_operator(op, basis);
            assert!(g(TlsOperator::SigmaX).max_abs_diff(&g(TlsOperator::RhoZ)) < 1e-15);
            assert!(g(TlsOperator::SigmaZ).max_abs_diff(&g(TlsOperator::RhoX).scale_real(-1.0)) < 1e-15);
            assert!(g(TlsOperator::SigmaY).max_abs_diff(&g(TlsOperator::RhoY)) < 1e-15);
        }
    }

    #[test]
    fn energy_basis_sigmas_are_paulis() {
        let g = |op| tls_operator(op, TlsBasis::Energy);
        assert!(g(TlsOperator::SigmaX).max_abs_diff(&pauli(1)) < 1e-15);
        assert!(g(TlsOperator::SigmaY).max_abs_diff(&pauli(2)) < 1e-15);
        assert!(g(TlsOperator::SigmaZ).max_abs_diff(&pauli(3)) < 1e-15);
    }

    #[test]
    fn site_states_in_energy_basis() {
        // ρ_z eigenvalue +1 belongs to |R⟩ = (|A⟩ + |S⟩)/√2
        let rz = tls_operator(TlsOperator::RhoZ, TlsBasis::Energy);
        let r = [Complex64::new(FRAC_1_SQRT_2, 0.0); 2];
        assert!((rz.expectation(&r, &r).re - 1.0).abs() < 1e-15);
        assert!(basis_change().unitarity_defect() < 1e-15);
    }

    #[test]
    fn composite_change_matches_kron() {
        let fock = FockBasis::new(3);
        let x = crate::fock::quadrature(fock);
        let site = tls_operator(TlsOperator::RhoY, TlsBasis::Site).kron(&x);
        let direct = tls_operator(TlsOperator::RhoY, TlsBasis::Energy).kron(&x);
        let changed = composite_from_site(&site, TlsBasis::Energy);
        assert!(changed.max_abs_diff(&direct) < 1e-15);
        assert_eq!(changed.basis(), Some(&BasisLabel::single_mode(3)));
    }

    #[test]
    fn parity_is_involution() {
        let p = parity_operator(FockBasis::new(5), TlsBasis::Site);
        assert!(p.matmul(&p).max_abs_diff(&OperatorMatrix::identity(12)) < 1e-15);
    }
}
