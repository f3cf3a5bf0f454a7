//! Parallel transporters on the two-site lattice and local phase
//! transformations of the `{|R⟩, |L⟩}` doublet.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::SpatialProfile;
use super::tls::{tls_from_site, TlsBasis};
use crate::error::{Error, Result};
use crate::linalg::OperatorMatrix;

/// Subintervals used for composite Simpson quadrature.
pub const SIMPSON_INTERVALS: usize = 4096;

/// Composite Simpson rule on `[a, b]` with `intervals` (rounded up to even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals.max(2) + intervals % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// `sin(π u)`, exactly zero at integer `u`.
pub fn sin_pi(u: f64) -> f64 {
    let r = u - 2.0 * (u / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

/// `∫_{x_l}^{x_r} profile(x) dx`: closed form for uniform and cosine shapes,
/// Simpson quadrature for sampled ones.
pub fn line_integral(profile: &SpatialProfile, x_l: f64, x_r: f64) -> Result<f64> {
    match profile {
        SpatialProfile::Uniform => Ok(x_r - x_l),
        SpatialProfile::Cosine { k, phi } => {
            if *k == 0.0 {
                return Ok((x_r - x_l) * phi.cos());
            }
            // sin(k x_r + φ) − sin(k x_l + φ) = 2 cos(k x̄ + φ) sin(k (x_r − x_l)/2)
            let mid = 0.5 * (x_r + x_l);
            let half_turns = k * (x_r - x_l) / (2.0 * PI);
            Ok(2.0 * (k * mid + phi).cos() * sin_pi(half_turns) / k)
        }
        SpatialProfile::Sampled { x, .. } => {
            let (min, max) = (x[0], x[x.len() - 1]);
            if x_l < min || x_r > max {
                return Err(Error::ProfileCoverage { min, max, x_l, x_r });
            }
            Ok(simpson(|s| profile.value(s), x_l, x_r, SIMPSON_INTERVALS))
        }
    }
}

/// A classical vector potential `A(x) = amplitude · profile(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalField {
    pub amplitude: f64,
    pub profile: SpatialProfile,
}

impl ClassicalField {
    pub fn new(amplitude: f64, profile: SpatialProfile) -> Self {
        Self { amplitude, profile }
    }

    pub fn zero() -> Self {
        Self::new(0.0, SpatialProfile::Uniform)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.amplitude * self.profile.value(x)
    }

    pub fn line_integral(&self, x_l: f64, x_r: f64) -> Result<f64> {
        Ok(self.amplitude * line_integral(&self.profile, x_l, x_r)?)
    }
}

/// `U_{x_R, x_L} = exp(i q ∫_{x_L}^{x_R} A(x) dx)`.
pub fn parallel_transporter(field: &ClassicalField, q: f64, x_l: f64, x_r: f64) -> Result<Complex64> {
    if !(x_l < x_r) {
        return Err(Error::invalid("x_l/x_r", format!("need x_l < x_r, got {x_l} and {x_r}")));
    }
    Ok(Complex64::from_polar(1.0, q * field.line_integral(x_l, x_r)?))
}

/// A smooth local phase `θ(x)`.
pub trait GaugeFunction {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// `θ(x) = Σ c_k x^k`, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn constant(c: f64) -> Self {
        Self(vec![c])
    }
}

impl GaugeFunction for Polynomial {
    fn value(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
    }
}

/// Both sides of the transporter gauge law under `A → A + dθ/dx`.
///
/// The first entry is the transporter of the transformed field, integrated
/// by quadrature; the second is `e^{iqθ(x_R)} U e^{−iqθ(x_L)}` built from the
/// untransformed transporter. They agree when the law holds.
pub fn transporter_gauge_law(
    field: &ClassicalField,
    theta: &dyn GaugeFunction,
    q: f64,
    x_l: f64,
    x_r: f64,
) -> Result<(Complex64, Complex64)> {
    let u = parallel_transporter(field, q, x_l, x_r)?;
    let transformed =
        simpson(|x| field.value(x) + theta.derivative(x), x_l, x_r, SIMPSON_INTERVALS);
    let lhs = Complex64::from_polar(1.0, q * transformed);
    let rhs = Complex64::from_polar(1.0, q * theta.value(x_r)) * u * Complex64::from_polar(1.0, -q * theta.value(x_l));
    Ok((lhs, rhs))
}

/// `|ψ⟩ → e^{iqθ_L} c_L |L⟩ + e^{iqθ_R} c_R |R⟩` as a 2×2 unitary.
///
/// Equal to `e^{iqφ} e^{iqθ ρ_z}` with `φ = (θ_R + θ_L)/2`, `θ = (θ_R − θ_L)/2`,
/// i.e. `e^{iqφ} e^{iqθ σ_x}` in the energy basis.
pub fn two_site_phase_unitary(theta_l: f64, theta_r: f64, q: f64, basis: TlsBasis) -> OperatorMatrix {
    let site = OperatorMatrix::from_diagonal(&[
        Complex64::from_polar(1.0, q * theta_r),
        Complex64::from_polar(1.0, q * theta_l),
    ]);
    tls_from_site(&site, basis)
}

/// Gauge-invariant hopping `|R⟩⟨L| U + h.c.`.
pub fn hopping_operator(transporter: Complex64, basis: TlsBasis) -> OperatorMatrix {
    let mut site = OperatorMatrix::zeros(2);
    site[(0, 1)] = transporter;
    site[(1, 0)] = transporter.conj();
    tls_from_site(&site, basis)
}

/// `(ε/2)ρ_z − (Δ/2)(|R⟩⟨L| U + h.c.)`.
pub fn gauge_invariant_tls(delta: f64, epsilon: f64, transporter: Complex64, basis: TlsBasis) -> OperatorMatrix {
    let mut site = hopping_operator(transporter, TlsBasis::Site).scale_real(-0.5 * delta);
    site[(0, 0)] += 0.5 * epsilon;
    site[(1, 1)] -= 0.5 * epsilon;
    tls_from_site(&site, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::tls::{tls_operator, TlsOperator};

    #[test]
    fn zero_field_transporter_is_one() {
        let u = parallel_transporter(&ClassicalField::zero(), 1.3, -0.5, 0.5).unwrap();
        assert_eq!(u, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn uniform_field_transporter() {
        let field = ClassicalField::new(0.7, SpatialProfile::Uniform);
        let u = parallel_transporter(&field, 2.0, -0.3, 0.9).unwrap();
        let expected = Complex64::from_polar(1.0, 2.0 * 0.7 * 1.2);
        assert!((u - expected).norm() < 1e-15);
        assert!((u.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cosine_transporter_matches_quadrature() {
        let (k, a, q) = (2.3, 1.4, 0.9);
        let field = ClassicalField::new(1.0, SpatialProfile::Cosine { k, phi: 0.0 });
        let u = parallel_transporter(&field, q, -a / 2.0, a / 2.0).unwrap();
        let closed = Complex64::from_polar(1.0, q * (2.0 / k) * (k * a / 2.0).sin());
        let quad = Complex64::from_polar(1.0, q * simpson(|x| (k * x).cos(), -a / 2.0, a / 2.0, 2000));
        assert!((u - closed).norm() < 1e-14);
        assert!((u - quad).norm() < 1e-10);
    }

    #[test]
    fn transporter_requires_ordered_sites() {
        assert!(parallel_transporter(&ClassicalField::zero(), 1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn sampled_profile_coverage() {
        let profile = SpatialProfile::Sampled { x: vec![-1.0, 0.0, 1.0], values: vec![1.0, 1.0, 1.0] };
        assert!((line_integral(&profile, -0.5, 0.5).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(line_integral(&profile, -2.0, 0.5), Err(Error::ProfileCoverage { .. })));
    }

    #[test]
    fn sin_pi_exact_zeros() {
        for n in -4..=4 {
            assert_eq!(sin_pi(n as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(2.25) - (0.25 * PI).sin()).abs() < 1e-15);
    }

    #[test]
    fn constant_gauge_function_leaves_transporter() {
        let field = ClassicalField::new(0.4, SpatialProfile::Cosine { k: 1.1, phi: 0.2 });
        let (lhs, rhs) = transporter_gauge_law(&field, &Polynomial::constant(3.0), 1.0, -0.6, 0.8).unwrap();
        let u = parallel_transporter(&field, 1.0, -0.6, 0.8).unwrap();
        assert!((rhs - u).norm() < 1e-15);
        assert!((lhs - u).norm() < 1e-12);
    }

    #[test]
    fn quadratic_gauge_function_on_zero_field() {
        let theta = Polynomial(vec![0.0, 0.0, 1.0]);
        let (x_l, x_r, q) = (-0.4, 1.1, 0.7);
        let (lhs, rhs) = transporter_gauge_law(&ClassicalField::zero(), &theta, q, x_l, x_r).unwrap();
        let exact = Complex64::from_polar(1.0, q * (x_r * x_r - x_l * x_l));
        assert!((lhs - exact).norm() < 1e-14);
        assert!((rhs - exact).norm() < 1e-14);
    }

    #[test]
    fn polynomial_derivative() {
        let p = Polynomial(vec![1.0, -2.0, 0.5, 3.0]);
        let x = 0.7;
        assert!((p.value(x) - (1.0 - 2.0 * x + 0.5 * x * x + 3.0 * x * x * x)).abs() < 1e-15);
        assert!((p.derivative(x) - (-2.0 + x + 9.0 * x * x)).abs() < 1e-15);
    }

    #[test]
    fn phase_unitary_forms() {
        let q = 0.8;
        let g = two_site_phase_unitary(0.5, 0.5, q, TlsBasis::Site);
        assert!(g.max_abs_diff(&OperatorMatrix::identity(2).scale(Complex64::from_polar(1.0, 0.4))) < 1e-15);

        // e^{iqφ} e^{iqθσ_x} in the energy basis
        let (tl, tr) = (-0.3, 1.1);
        let (phi, theta) = (0.5 * (tr + tl), 0.5 * (tr - tl));
        let g_energy = two_site_phase_unitary(tl, tr, q, TlsBasis::Energy);
        let sx = tls_operator(TlsOperator::SigmaX, TlsBasis::Energy);
        let rot = &OperatorMatrix::identity(2).scale_real((q * theta).cos())
            + &sx.scale(Complex64::new(0.0, (q * theta).sin()));
        let expected = rot.scale(Complex64::from_polar(1.0, q * phi));
        assert!(g_energy.max_abs_diff(&expected) < 1e-15);
        assert!(g_energy.unitarity_defect() < 1e-15);
    }

    #[test]
    fn antisymmetric_phases_have_unit_determinant() {
        let g = two_site_phase_unitary(-0.7, 0.7, 1.3, TlsBasis::Site);
        let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
        assert!((det - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
