//! Cyclic Jacobi diagonalization of dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` and then applies
//! the classical real Jacobi rotation, so the whole sweep stays in complex
//! arithmetic without ever forming a real embedding of the matrix.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::matrix::OperatorMatrix;
use crate::error::{Error, Result};

/// Relative Hermiticity defect accepted on input.
pub const HERMITICITY_TOLERANCE: f64 = 1e-9;
/// Off-diagonal Frobenius norm at exit, relative to the initial Frobenius norm.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: OperatorMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The `k`-th eigenvector as a column.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> OperatorMatrix {
        self.map(|x| Complex64::new(x, 0.0))
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> OperatorMatrix {
        let n = self.dim();
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let v = self.eigenvectors.as_slice();
        let mut out = OperatorMatrix::zeros(n);
        {
            let data = out.as_mut_slice();
            for i in 0..n {
                for k in 0..n {
                    let vik = v[i * n + k] * fl[k];
                    if vik == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let row = &mut data[i * n..(i + 1) * n];
                    for (j, o) in row.iter_mut().enumerate() {
                        *o += vik * v[j * n + k].conj();
                    }
                }
            }
        }
        out
    }
}

fn check_input(m: &OperatorMatrix) -> Result<()> {
    let defect = m.relative_hermiticity_defect();
    if !(defect <= HERMITICITY_TOLERANCE) {
        return Err(Error::NotHermitian { defect, tolerance: HERMITICITY_TOLERANCE });
    }
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix entries"));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &OperatorMatrix) -> Result<EigenDecomposition> {
    check_input(m)?;
    let mut work = Jacobi::new(m, true);
    work.run()?;
    Ok(work.finish())
}

/// Eigenvalues only, ascending. Skips eigenvector accumulation.
pub fn eigvalsh(m: &OperatorMatrix) -> Result<Vec<f64>> {
    check_input(m)?;
    let mut work = Jacobi::new(m, false);
    work.run()?;
    Ok(work.finish().eigenvalues)
}

/// `V f(λ) V†` for Hermitian `m` and a real function `f`.
pub fn matrix_function(m: &OperatorMatrix, f: impl Fn(f64) -> f64) -> Result<OperatorMatrix> {
    let mut out = eig_hermitian(m)?.map(|x| Complex64::new(f(x), 0.0));
    out.hermitize();
    out.set_basis(m.basis().cloned());
    Ok(out)
}

/// `V f(λ) V†` for Hermitian `m` and a complex-valued function of the eigenvalues,
/// e.g. `exp(iλ)` for a unitary generated by `m`.
pub fn spectral_map(m: &OperatorMatrix, f: impl Fn(f64) -> Complex64) -> Result<OperatorMatrix> {
    let mut out = eig_hermitian(m)?.map(f);
    out.set_basis(m.basis().cloned());
    Ok(out)
}

struct Jacobi {
    n: usize,
    a: Vec<Complex64>,
    // transposed eigenvector matrix: row k holds eigenvector k
    vt: Option<Vec<Complex64>>,
    scratch: Vec<Complex64>,
}

impl Jacobi {
    fn new(m: &OperatorMatrix, vectors: bool) -> Self {
        let n = m.dim();
        let mut a = m.as_slice().to_vec();
        for i in 0..n {
            a[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let avg = 0.5 * (a[i * n + j] + a[j * n + i].conj());
                a[i * n + j] = avg;
                a[j * n + i] = avg.conj();
            }
        }
        let vt = vectors.then(|| {
            let mut v = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                v[i * n + i] = Complex64::new(1.0, 0.0);
            }
            v
        });
        Self { n, a, vt, scratch: vec![Complex64::new(0.0, 0.0); 2 * n] }
    }

    fn off_norm_sqr(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += self.a[i * n + j].norm_sqr();
            }
        }
        2.0 * s
    }

    fn run(&mut self) -> Result<()> {
        let n = self.n;
        let total: f64 = self.a.iter().map(|z| z.norm_sqr()).sum();
        let target = OFF_DIAGONAL_TOLERANCE * OFF_DIAGONAL_TOLERANCE * total;
        for sweep in 0..MAX_SWEEPS {
            let off = self.off_norm_sqr();
            if off <= target || off == 0.0 {
                return Ok(());
            }
            // small pivots are only worth rotating once the big ones are gone
            let threshold = if sweep < 3 { 0.2 * off.sqrt() / (n * n) as f64 } else { 0.0 };
            for p in 0..n {
                for q in (p + 1)..n {
                    let beta = self.a[p * n + q];
                    let mag = beta.norm();
                    if mag == 0.0 {
                        continue;
                    }
                    let app = self.a[p * n + p].re;
                    let aqq = self.a[q * n + q].re;
                    if sweep > 3
                        && app.abs() + 100.0 * mag == app.abs()
                        && aqq.abs() + 100.0 * mag == aqq.abs()
                    {
                        self.a[p * n + q] = Complex64::new(0.0, 0.0);
                        self.a[q * n + p] = Complex64::new(0.0, 0.0);
                        continue;
                    }
                    if mag <= threshold {
                        continue;
                    }
                    self.rotate(p, q, beta, mag, app, aqq);
                }
            }
        }
        let off = self.off_norm_sqr();
        if off <= target {
            Ok(())
        } else {
            Err(Error::NoConvergence { what: "Jacobi eigensolver", residual: (off / total).sqrt() })
        }
    }

    fn rotate(&mut self, p: usize, q: usize, beta: Complex64, mag: f64, app: f64, aqq: f64) {
        let n = self.n;
        let tau = (aqq - app) / (2.0 * mag);
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            -1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        let phase = beta / mag; // e^{iφ}
        let phase_conj = phase.conj();

        // rows p and q of G†A for columns outside {p, q}
        let (row_p, row_q) = self.scratch.split_at_mut(n);
        row_p.copy_from_slice(&self.a[p * n..(p + 1) * n]);
        row_q.copy_from_slice(&self.a[q * n..(q + 1) * n]);
        for k in 0..n {
            if k == p || k == q {
                continue;
            }
            let apk = row_p[k];
            let aqk = row_q[k];
            let new_p = apk * c - phase * aqk * s;
            let new_q = apk * s + phase * aqk * c;
            self.a[p * n + k] = new_p;
            self.a[q * n + k] = new_q;
            self.a[k * n + p] = new_p.conj();
            self.a[k * n + q] = new_q.conj();
        }
        self.a[p * n + p] = Complex64::new(app - t * mag, 0.0);
        self.a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
        self.a[p * n + q] = Complex64::new(0.0, 0.0);
        self.a[q * n + p] = Complex64::new(0.0, 0.0);

        if let Some(vt) = self.vt.as_mut() {
            let (lo, hi) = vt.split_at_mut(q * n);
            let vp = &mut lo[p * n..(p + 1) * n];
            let vq = &mut hi[..n];
            for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                let xp = *x;
                let yq = *y;
                *x = xp * c - phase_conj * yq * s;
                *y = xp * s + phase_conj * yq * c;
            }
        }
    }

    fn finish(self) -> EigenDecomposition {
        let n = self.n;
        let diag: Vec<f64> = (0..n).map(|i| self.a[i * n + i].re).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
        let eigenvalues = order.iter().map(|&i| diag[i]).collect();
        let eigenvectors = match self.vt {
            Some(vt) => OperatorMatrix::from_fn(n, |i, k| vt[order[k] * n + i]),
            None => OperatorMatrix::zeros(0),
        };
        EigenDecomposition { eigenvalues, eigenvectors }
    }
}
