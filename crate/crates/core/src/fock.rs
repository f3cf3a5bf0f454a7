//! Truncated bosonic Fock space: ladder operators, quadrature, photon parity
//! and the displacement operator.
//!
//! The displacement operator comes in two flavours. The truncated-generator
//! construction exponentiates `α a† − α* a` inside the cutoff space and is
//! exactly unitary there. The analytic construction evaluates the
//! infinite-space matrix elements `⟨m|D(α)|n⟩` and only becomes unitary as the
//! cutoff grows, which makes it a probe of truncation error.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_map, BasisLabel, OperatorMatrix};

/// Fock states `|0⟩ … |N⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockBasis {
    cutoff: usize,
}

impl FockBasis {
    pub fn new(cutoff: usize) -> Self {
        Self { cutoff }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    fn label(&self) -> BasisLabel {
        BasisLabel::fock_only(self.cutoff)
    }

    fn labelled(&self, m: OperatorMatrix) -> OperatorMatrix {
        m.with_basis(self.label()).expect("fock operator has basis dimension")
    }

    pub fn identity(&self) -> OperatorMatrix {
        self.labelled(OperatorMatrix::identity(self.dim()))
    }
}

/// `â` with `â[n−1, n] = √n`.
pub fn annihilation(basis: FockBasis) -> OperatorMatrix {
    let mut a = OperatorMatrix::zeros(basis.dim());
    for n in 1..basis.dim() {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    basis.labelled(a)
}

/// `â†`, the exact conjugate transpose of [`annihilation`].
pub fn creation(basis: FockBasis) -> OperatorMatrix {
    annihilation(basis).adjoint()
}

/// `â†â`.
pub fn number(basis: FockBasis) -> OperatorMatrix {
    let diag: Vec<f64> = (0..basis.dim()).map(|n| n as f64).collect();
    basis.labelled(OperatorMatrix::from_real_diagonal(&diag))
}

/// `â + â†`.
pub fn quadrature(basis: FockBasis) -> OperatorMatrix {
    let mut x = OperatorMatrix::zeros(basis.dim());
    for n in 1..basis.dim() {
        let s = Complex64::new((n as f64).sqrt(), 0.0);
        x[(n - 1, n)] = s;
        x[(n, n - 1)] = s;
    }
    basis.labelled(x)
}

/// `(−1)^{â†â}`.
pub fn photon_parity(basis: FockBasis) -> OperatorMatrix {
    let diag: Vec<f64> = (0..basis.dim()).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
    basis.labelled(OperatorMatrix::from_real_diagonal(&diag))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisplacementMode {
    #[default]
    TruncatedGenerator,
    Analytic,
}

impl FromStr for DisplacementMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncated_generator" => Ok(Self::TruncatedGenerator),
            "analytic" => Ok(Self::Analytic),
            other => Err(Error::UnknownDisplacementMode(other.to_string())),
        }
    }
}

impl fmt::Display for DisplacementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::TruncatedGenerator => "truncated_generator",
            Self::Analytic => "analytic",
        })
    }
}

/// `D(α) = exp(α â† − α* â)` in the truncated space.
pub fn displacement(basis: FockBasis, alpha: Complex64, mode: DisplacementMode) -> Result<OperatorMatrix> {
    let d = match mode {
        DisplacementMode::TruncatedGenerator => truncated_displacement(basis, alpha)?,
        DisplacementMode::Analytic => analytic_displacement(basis, alpha),
    };
    Ok(basis.labelled(d))
}

/// Hermitian generator `G = −i(α â† − α* â)`, so that `D(α) = exp(iG)`.
pub fn displacement_generator(basis: FockBasis, alpha: Complex64) -> OperatorMatrix {
    let i = Complex64::i();
    let a = annihilation(basis);
    let ad = a.adjoint();
    let mut g = &ad.scale(-i * alpha) - &a.scale(-i * alpha.conj());
    g.hermitize();
    g
}

fn truncated_displacement(basis: FockBasis, alpha: Complex64) -> Result<OperatorMatrix> {
    if alpha == Complex64::new(0.0, 0.0) {
        return Ok(OperatorMatrix::identity(basis.dim()));
    }
    let g = displacement_generator(basis, alpha);
    spectral_map(&g, |x| Complex64::from_polar(1.0, x))
}

const FLUSH_BELOW: f64 = 1e-300;

/// Closed-form entries
/// `⟨m|D(α)|n⟩ = √(n!/m!) α^{m−n} e^{−|α|²/2} L_n^{(m−n)}(|α|²)` for `m ≥ n`,
/// and the `(−α*)` mirror for `m < n`.
///
/// The Laguerre polynomials are carried in the scaled form
/// `g_j = |α|^k e^{−|α|²/2} √(j!/(j+k)!) L_j^{(k)}(|α|²)`, which stays bounded by
/// one, and advanced with the upward three-term recurrence in `j`.
fn analytic_displacement(basis: FockBasis, alpha: Complex64) -> OperatorMatrix {
    let dim = basis.dim();
    let r = alpha.norm();
    if r == 0.0 {
        return OperatorMatrix::identity(dim);
    }
    let x = r * r;
    let lower_phase = alpha / r;
    let upper_phase = -alpha.conj() / r;
    let ln_r = r.ln();

    let mut d = OperatorMatrix::zeros(dim);
    let mut ln_fact = 0.0; // ln k!
    for k in 0..dim {
        if k > 0 {
            ln_fact += (k as f64).ln();
        }
        let len = dim - k;
        let mut g = Vec::with_capacity(len);
        g.push((k as f64 * ln_r - 0.5 * x - 0.5 * ln_fact).exp());
        if len > 1 {
            g.push(g[0] * (1.0 + k as f64 - x) / ((k + 1) as f64).sqrt());
        }
        for j in 1..len.saturating_sub(1) {
            let jf = j as f64;
            let kf = k as f64;
            let next = ((2.0 * jf + 1.0 + kf - x) * g[j] - (jf * (jf + kf)).sqrt() * g[j - 1])
                / ((jf + 1.0) * (jf + 1.0 + kf)).sqrt();
            g.push(next);
        }
        let lower = lower_phase.powu(k as u32);
        let upper = upper_phase.powu(k as u32);
        for (j, &gj) in g.iter().enumerate() {
            if gj.abs() < FLUSH_BELOW {
                continue;
            }
            d[(j + k, j)] = lower * gj;
            if k > 0 {
                d[(j, j + k)] = upper * gj;
            }
        }
    }
    d
}
