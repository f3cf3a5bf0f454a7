use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tensor-product layout of a light-matter operator: the two-level factor
/// always comes first, followed by one Fock factor per mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisLabel {
    pub tls_dim: usize,
    pub fock_cutoffs: Vec<usize>,
}

impl BasisLabel {
    pub fn new(tls_dim: usize, fock_cutoffs: Vec<usize>) -> Self {
        Self { tls_dim, fock_cutoffs }
    }

    pub fn tls_only() -> Self {
        Self::new(2, Vec::new())
    }

    pub fn fock_only(cutoff: usize) -> Self {
        Self::new(1, vec![cutoff])
    }

    pub fn single_mode(cutoff: usize) -> Self {
        Self::new(2, vec![cutoff])
    }

    pub fn dim(&self) -> usize {
        self.tls_dim * self.fock_cutoffs.iter().map(|n| n + 1).product::<usize>()
    }

    /// Label of `self ⊗ other`, if the result still has the TLS ⊗ Fock shape.
    fn kron(&self, other: &Self) -> Option<Self> {
        match (self.tls_dim, other.tls_dim) {
            (t, 1) => {
                let mut cutoffs = self.fock_cutoffs.clone();
                cutoffs.extend_from_slice(&other.fock_cutoffs);
                Some(Self::new(t, cutoffs))
            }
            (1, t) if self.fock_cutoffs.is_empty() => Some(other.clone().with_tls(t)),
            _ => None,
        }
    }

    fn with_tls(mut self, tls_dim: usize) -> Self {
        self.tls_dim = tls_dim;
        self
    }
}

/// Dense square complex matrix in row-major layout.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    data: Vec<Complex64>,
    basis: Option<BasisLabel>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim], basis: None }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data, basis: None }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Builds a matrix from row-major entries; fails unless `data.len()` is a perfect square.
    pub fn from_row_major(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::NotSquare { rows: data.len(), cols: 1 });
        }
        Ok(Self { dim, data, basis: None })
    }

    /// Builds a matrix from nested rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare { rows: dim, cols: bad.len() });
        }
        Ok(Self { dim, data: rows.concat(), basis: None })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Attaches a tensor-product label; the label's dimension must match.
    pub fn with_basis(mut self, basis: BasisLabel) -> Result<Self> {
        if basis.dim() != self.dim {
            return Err(Error::BasisMismatch { dim: self.dim, label_dim: basis.dim() });
        }
        self.basis = Some(basis);
        Ok(self)
    }

    pub(crate) fn set_basis(&mut self, basis: Option<BasisLabel>) {
        debug_assert!(basis.as_ref().map_or(true, |b| b.dim() == self.dim));
        self.basis = basis;
    }

    pub fn basis(&self) -> Option<&BasisLabel> {
        self.basis.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + j]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out.basis = self.basis.clone();
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self + s·I`.
    pub fn shift(&self, s: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += s;
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out.basis = common_basis(self, rhs);
        out
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨u|self|v⟩` with the bra conjugated.
    pub fn expectation(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let mv = self.apply(v);
        u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M − M†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                defect = defect.max(d);
            }
        }
        defect
    }

    /// Hermiticity defect relative to the largest entry (0 for the zero matrix).
    pub fn relative_hermiticity_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            self.hermiticity_defect() / scale
        }
    }

    /// Replaces the matrix by `(M + M†)/2`.
    pub fn hermitize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i].conj());
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    /// `max |M M† − I|`, the unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        self.matmul(&self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (na, nb) = (self.dim, rhs.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let a = self.data[i * na + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..nb {
                    let row = (i * nb + k) * n + j * nb;
                    let b_row = &rhs.data[k * nb..(k + 1) * nb];
                    for (o, &b) in out.data[row..row + nb].iter_mut().zip(b_row) {
                        *o = a * b;
                    }
                }
            }
        }
        out.basis = match (&self.basis, &rhs.basis) {
            (Some(a), Some(b)) => a.kron(b),
            _ => None,
        };
        out
    }

    /// Extracts the top-left `size × size` block.
    pub fn top_left(&self, size: usize) -> Self {
        assert!(size <= self.dim);
        Self::from_fn(size, |i, j| self[(i, j)])
    }
}

fn common_basis(a: &OperatorMatrix, b: &OperatorMatrix) -> Option<BasisLabel> {
    match (&a.basis, &b.basis) {
        (Some(x), Some(y)) if x == y => Some(x.clone()),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        _ => None,
    }
}

impl Index<(usize, usize)> for OperatorMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for OperatorMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        out.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a += b);
        out.basis = common_basis(self, rhs);
        out
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        out.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a -= b);
        out.basis = common_basis(self, rhs);
        out
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix({}x{}, {:?})", self.dim, self.dim, self.basis)?;
        if self.dim <= 8 {
            for i in 0..self.dim {
                let row: Vec<String> =
                    self.row(i).iter().map(|z| format!("{:+.4}{:+.4}i", z.re, z.im)).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}
