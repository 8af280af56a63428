//! Dense complex matrices on `d^n`-dimensional spaces.
//!
//! Everything here is eigendecomposition based: matrix functions, Schatten
//! norms and support decisions all go through [`herm_eig`].

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Max entrywise `|A - A^dagger|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues are clamped below at this floor before matrix functions.
pub const CLAMP_FLOOR: f64 = 1e-14;
/// Eigenvalues at or below this are treated as kernel for support decisions.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!("{} entries for a {dim}x{dim} matrix", entries.len())));
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    /// Diagonal matrix from real entries.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `Tr(A^dagger B)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Max entrywise `|A - A^dagger|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Max entrywise `|U U^dagger - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `U A U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues descending, the
/// eigenvectors are the matching columns.
#[derive(Clone, Debug)]
pub struct HermSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermSpectrum {
    /// `V f(Lambda) V^dagger`.
    pub fn reassemble(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let v = &self.eigenvectors.0;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let fl = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= fl;
            }
        }
        CMatrix(scaled * v.adjoint())
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Projector onto eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        self.reassemble(|l| if keep(l) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Number of eigenvalues above [`SUPPORT_TOL`].
    pub fn support_rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > SUPPORT_TOL).count()
    }
}

pub fn herm_eig(a: &CMatrix) -> Result<HermSpectrum> {
    let dev = a.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let h = a.hermitian_part().0;
    let eig =
        SymmetricEigen::try_new(h, f64::EPSILON, 0).expect("Hermitian eigensolver converges without an iteration cap");
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = a.dim();
    let eigenvectors = CMatrix::from_fn(n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermSpectrum { eigenvalues, eigenvectors })
}

/// Applies `f` to the spectrum of a Hermitian matrix, clamping eigenvalues
/// below at `clamp` first.
pub fn mat_fn(a: &CMatrix, f: impl Fn(f64) -> f64, clamp: f64) -> Result<CMatrix> {
    let spec = herm_eig(a)?;
    let mut values = Vec::with_capacity(spec.eigenvalues.len());
    for &l in &spec.eigenvalues {
        let v = f(l.max(clamp));
        if !v.is_finite() {
            return Err(Error::DomainError(l.max(clamp)));
        }
        values.push(v);
    }
    let out = HermSpectrum { eigenvalues: values, eigenvectors: spec.eigenvectors };
    Ok(out.reassemble(|v| C64::new(v, 0.0)))
}

/// Kronecker product `A (x) B`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix(a.0.kronecker(&b.0))
}

/// `Tr_B M` for `M` on `A (x) B`.
pub fn partial_trace_b(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    if m.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!("matrix of dimension {} is not {dim_a} x {dim_b}", m.dim())));
    }
    Ok(CMatrix::from_fn(dim_a, |i, k| (0..dim_b).map(|j| m.0[(i * dim_b + j, k * dim_b + j)]).sum()))
}

/// `sqrt(Tr A^dagger A)`.
pub fn schatten2_norm(a: &CMatrix) -> f64 {
    a.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Sum of `|eigenvalues|` of a Hermitian matrix.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    Ok(herm_eig(a)?.eigenvalues.iter().map(|l| l.abs()).sum())
}
