//! Dense complex matrices of dimension at most four.
//!
//! Everything in the walk's spin space is 2×2 or 4×4, so matrices are stored
//! inline and the Hermitian eigensolver is plain cyclic Jacobi.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::walk::SpinVector;

type C64 = Complex64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub const MAX_DIM: usize = 4;

/// Hermiticity tolerance for eigen-decomposition and density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[−NEG_EIGEN_TOL, 0)` are treated as rounding and clamped.
pub const NEG_EIGEN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
/// Relative size below which an eigenvalue is indistinguishable from zero.
pub const ZERO_EIGEN_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix {
    dim: usize,
    a: [[C64; MAX_DIM]; MAX_DIM],
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "matrix dimension {dim} out of range");
        Self {
            dim,
            a: [[ZERO; MAX_DIM]; MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.a[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > MAX_DIM || rows.iter().any(|r| r.len() != dim) {
            return invalid(format!("expected a square matrix of size 1..={MAX_DIM}"));
        }
        let mut m = Self::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            m.a[i][..dim].copy_from_slice(r);
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.a[i][i] = C64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        let mut m = Self::zeros(v.len());
        m.add_outer(v);
        m
    }

    /// In-place `self += |v⟩⟨v|`.
    #[inline]
    pub fn add_outer(&mut self, v: &[C64]) {
        debug_assert_eq!(v.len(), self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.a[i][j] += v[i] * v[j].conj();
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.a[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.a[i][j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.a[i][j] = self.a[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.a[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.a[i][j] *= s;
            }
        }
        m
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.a[i][j] * v[j]).sum())
            .collect()
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mv = self.apply(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    fn entries(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.dim).flat_map(move |i| (0..self.dim).map(move |j| self.a[i][j]))
    }

    /// Reduced 2×2 matrix of a 4×4 two-qubit operator, keeping `keep`.
    /// Basis index is `i = 2a + b`.
    pub fn partial_trace(&self, keep: Qubit) -> Result<Self> {
        if self.dim != 4 {
            return invalid("partial trace needs a 4x4 two-qubit matrix");
        }
        let mut m = Self::zeros(2);
        for x in 0..2 {
            for y in 0..2 {
                m.a[x][y] = (0..2)
                    .map(|k| match keep {
                        Qubit::A => self.a[2 * x + k][2 * y + k],
                        Qubit::B => self.a[2 * k + x][2 * k + y],
                    })
                    .sum();
            }
        }
        Ok(m)
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(mut self, rhs: Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.a[i][j] += rhs.a[i][j];
            }
        }
        self
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(mut self, rhs: Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.a[i][j] -= rhs.a[i][j];
            }
        }
        self
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let mut m = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.a[i][j] = (0..self.dim).map(|k| self.a[i][k] * rhs.a[k][j]).sum();
            }
        }
        m
    }
}

/// One qubit of the two-qubit spin space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    /// High bit `a` of `i = 2a + b`.
    A,
    /// Low bit `b` of `i = 2a + b`.
    B,
}

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: Matrix,
}

impl Eigen {
    pub fn reconstruct(&self) -> Matrix {
        let lambda: Vec<f64> = self.values.clone();
        self.vectors * Matrix::from_real_diagonal(&lambda) * self.vectors.adjoint()
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        self.vectors * Matrix::from_real_diagonal(&mapped) * self.vectors.adjoint()
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn eig_hermitian(h: &Matrix) -> Result<Eigen> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
        return invalid(format!("matrix is not Hermitian (defect {defect:e})"));
    }
    let n = h.dim;
    let mut a = *h;
    for i in 0..n {
        a.a[i][i] = C64::new(a.a[i][i].re, 0.0);
    }
    let mut v = Matrix::identity(n);
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.a[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.a[p][q];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / r;
                let tau = (a.a[q][q].re - a.a[p][p].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) · [[c, s], [−s, c]] on (p, q)
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a.a[k][p];
                    let akq = a.a[k][q];
                    a.a[k][p] = akp * jpp + akq * jqp;
                    a.a[k][q] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a.a[p][k];
                    let aqk = a.a[q][k];
                    a.a[p][k] = jpp.conj() * apk + jqp.conj() * aqk;
                    a.a[q][k] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a.a[p][q] = ZERO;
                a.a[q][p] = ZERO;
                a.a[p][p] = C64::new(a.a[p][p].re, 0.0);
                a.a[q][q] = C64::new(a.a[q][q].re, 0.0);

                for k in 0..n {
                    let vkp = v.a[k][p];
                    let vkq = v.a[k][q];
                    v.a[k][p] = vkp * jpp + vkq * jqp;
                    v.a[k][q] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.a[j][j].re.total_cmp(&a.a[i][i].re));
    let values = order.iter().map(|&i| a.a[i][i].re).collect();
    let mut vectors = Matrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.a[row][col] = v.a[row][src];
        }
    }
    Ok(Eigen { values, vectors })
}

fn clamp_spectrum(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&l| {
            if l >= 0.0 {
                Ok(l)
            } else if l >= -NEG_EIGEN_TOL {
                Ok(0.0)
            } else {
                invalid(format!("matrix is not positive semidefinite (eigenvalue {l:e})"))
            }
        })
        .collect()
}

/// Non-negative spectrum of a PSD Hermitian matrix, descending.
pub fn psd_spectrum(m: &Matrix) -> Result<Vec<f64>> {
    clamp_spectrum(&eig_hermitian(m)?.values)
}

/// `M^p` for PSD Hermitian `M` and `p ≥ 0`, with `0^p = 0` (so `p = 0`
/// yields the support projector). Eigenvalues within `ZERO_EIGEN_TOL` of
/// the largest are rounding noise and count as zero; a fractional power
/// would otherwise inflate them.
pub fn mat_power(m: &Matrix, p: f64) -> Result<Matrix> {
    if !(p >= 0.0 && p.is_finite()) {
        return invalid(format!("matrix power exponent must be finite and >= 0, got {p}"));
    }
    let eig = eig_hermitian(m)?;
    clamp_spectrum(&eig.values)?;
    let floor = ZERO_EIGEN_TOL * eig.values.first().copied().unwrap_or(0.0).max(0.0);
    Ok(eig.map(|l| if l <= floor { 0.0 } else { l.powf(p) }))
}

/// `−Σ λ ln λ` in nats.
pub fn von_neumann_entropy(rho: &Matrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return invalid(format!("density matrix trace is {tr}, expected 1"));
    }
    let spectrum = psd_spectrum(rho)?;
    Ok(entropy_of_spectrum(&spectrum))
}

pub fn entropy_of_spectrum(spectrum: &[f64]) -> f64 {
    let s: f64 = spectrum
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    s.max(0.0)
}

/// `tr ρ²`, computed as `Σ |ρ_ij|²` (exact for Hermitian input).
pub fn purity(rho: &Matrix) -> f64 {
    rho.entries().map(|z| z.norm_sqr()).sum()
}

/// A validated density matrix: Hermitian, PSD, unit trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix);

impl DensityMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.dim != 2 && m.dim != 4 {
            return invalid(format!("density matrix must be 2x2 or 4x4, got {}", m.dim));
        }
        if !m.is_hermitian(HERMITIAN_TOL) {
            return invalid("density matrix is not Hermitian");
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL {
            return invalid(format!("density matrix trace is {}, expected 1", tr.re));
        }
        psd_spectrum(&m)?;
        Ok(Self(m))
    }

    /// `|s⟩⟨s|` for a normalized spin vector.
    pub fn pure(spin: &SpinVector) -> Result<Self> {
        if !spin.is_normalized() {
            return invalid("pure state needs a normalized vector");
        }
        Ok(Self(Matrix::outer(&spin.0)))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(Matrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_spectrum(&psd_spectrum(&self.0).unwrap_or_default())
    }

    pub fn purity(&self) -> f64 {
        purity(&self.0)
    }

    pub fn reduce(&self, keep: Qubit) -> Result<DensityMatrix> {
        DensityMatrix::new(self.0.partial_trace(keep)?)
    }
}
