//! Dense complex vectors and square matrices for the small dimensions used
//! throughout the crate (3, 4, 9 and 16).
//!
//! Storage is row-major. Every public constructor rejects NaN and infinite
//! entries, so downstream code can assume finite values.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn check_finite(values: &[Complex], what: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A column vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        check_finite(&entries, "vector")?;
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    /// The `index`-th standard basis vector of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut entries = vec![ZERO; dim];
        entries[index] = ONE;
        Self { entries }
    }

    pub(crate) fn from_raw(entries: Vec<Complex>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Complex {
        assert_eq!(self.dim(), other.dim(), "inner product of mismatched vectors");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::EPSILON {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(c(1.0 / n, 0.0)))
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self::from_raw(self.entries.iter().map(|z| z * factor).collect())
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Tensor product `self ⊗ other`, first factor major.
    pub fn kron(&self, other: &ComplexVector) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a * b);
            }
        }
        Self::from_raw(out)
    }

    /// Distance from 1 of `|<u,v>| / (|u| |v|)`; zero iff the rays coincide up to phase.
    pub fn ray_distance(&self, other: &ComplexVector) -> f64 {
        let denom = self.norm() * other.norm();
        if denom == 0.0 {
            return 1.0;
        }
        (1.0 - self.inner(other).norm() / denom).abs()
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex;

    fn index(&self, index: usize) -> &Complex {
        &self.entries[index]
    }
}

/// A dense square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::BadLength { expected: dim * dim, found: entries.len() });
        }
        check_finite(&entries, "matrix")?;
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadLength { expected: dim, found: row.len() });
            }
            entries.extend(row);
        }
        Self::from_entries(dim, entries)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        Self { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::diag_complex(&values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    pub fn diag_complex(values: &[Complex]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDimension);
        }
        check_finite(values, "diagonal")?;
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.entries[i * values.len() + i] = *v;
        }
        Ok(m)
    }

    pub(crate) fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Complex] {
        &mut self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Complex>> {
        self.entries.chunks(self.dim).map(<[Complex]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "matmul of mismatched matrices");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Self { dim: n, entries: out }
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim, v.dim(), "matrix-vector product of mismatched sizes");
        let n = self.dim;
        ComplexVector::from_raw(
            (0..n)
                .map(|i| (0..n).map(|j| self.entries[i * n + j] * v[j]).sum())
                .collect(),
        )
    }

    /// `<u| self |v>`.
    pub fn sandwich(&self, u: &ComplexVector, v: &ComplexVector) -> Complex {
        u.inner(&self.apply(v))
    }

    pub fn trace(&self) -> Complex {
        trace(self)
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        kron(self, other)
    }

    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|A[i][j] - conj(A[j][i])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.dim)) <= tol
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        self.matmul(self).max_abs_diff(self) <= tol
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (row, col): (usize, usize)) -> &Complex {
        &self.entries[row * self.dim + col]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.dim) {
            let cells: Vec<String> =
                row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i][j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let n = da * db;
    let mut out = vec![ZERO; n * n];
    for ia in 0..da {
        for ja in 0..da {
            let s = a.entries[ia * da + ja];
            if s == ZERO {
                continue;
            }
            for ib in 0..db {
                let row = (ia * db + ib) * n + ja * db;
                for jb in 0..db {
                    out[row + jb] = s * b.entries[ib * db + jb];
                }
            }
        }
    }
    ComplexMatrix { dim: n, entries: out }
}

pub fn trace(a: &ComplexMatrix) -> Complex {
    (0..a.dim).map(|i| a.get(i, i)).sum()
}

/// Orthogonal projector onto the ray spanned by `v`.
pub fn projector_from_ray(v: &ComplexVector) -> Result<ComplexMatrix> {
    let u = v.normalized()?;
    Ok(outer(&u, &u))
}

/// `|u><v|`.
pub fn outer(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    assert_eq!(u.dim(), v.dim());
    ComplexMatrix::from_fn(u.dim(), |i, j| u[i] * v[j].conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex {
        c(x, 0.0)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_of_diagonals() {
        let z = ComplexMatrix::diag(&[1.0, -1.0]).unwrap();
        assert_eq!(kron(&z, &z), ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]).unwrap());
    }

    #[test]
    fn trace_of_identity_and_ray_projector() {
        assert_eq!(trace(&ComplexMatrix::identity(3)), r(3.0));
        let v = ComplexVector::new(vec![c(0.3, -0.2), c(1.0, 0.5), c(-0.7, 0.0)]).unwrap();
        let p = projector_from_ray(&v).unwrap();
        assert!((trace(&p) - ONE).norm() < 1e-15);
    }

    #[test]
    fn projector_examples() {
        let p = projector_from_ray(&ComplexVector::from_real(&[0.0, 1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(p, ComplexMatrix::diag(&[0.0, 1.0, 0.0]).unwrap());

        let p = projector_from_ray(&ComplexVector::from_real(&[1.0, 0.0, 1.0]).unwrap()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.5, 0.0, 0.5],
            &[0.0, 0.0, 0.0],
            &[0.5, 0.0, 0.5],
        ])
        .unwrap();
        assert!(p.max_abs_diff(&expected) < 1e-15);

        // (-i, 0, 1)/sqrt(2) outer itself, by hand.
        let p = projector_from_ray(&ComplexVector::new(vec![c(0.0, -1.0), ZERO, ONE]).unwrap())
            .unwrap();
        assert!((p[(0, 0)] - r(0.5)).norm() < 1e-15);
        assert!((p[(0, 2)] - c(0.0, -0.5)).norm() < 1e-15);
        assert!((p[(2, 0)] - c(0.0, 0.5)).norm() < 1e-15);
        assert!((p[(2, 2)] - r(0.5)).norm() < 1e-15);
        assert!(p.is_hermitian(0.0));
        assert!(p.is_idempotent(1e-15));
    }

    #[test]
    fn zero_ray_is_rejected() {
        let z = ComplexVector::from_real(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(projector_from_ray(&z), Err(Error::ZeroVector));
    }

    #[test]
    fn constructors_reject_non_finite_and_bad_shapes() {
        assert_eq!(
            ComplexMatrix::from_entries(2, vec![ONE, ZERO, c(f64::NAN, 0.0), ONE]),
            Err(Error::NonFinite("matrix"))
        );
        assert!(matches!(
            ComplexMatrix::from_entries(2, vec![ONE; 3]),
            Err(Error::BadLength { expected: 4, found: 3 })
        ));
        assert_eq!(ComplexMatrix::from_entries(0, vec![]), Err(Error::EmptyDimension));
        assert!(ComplexVector::new(vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(ComplexMatrix::from_rows(vec![vec![ONE, ZERO], vec![ONE]]).is_err());
    }

    #[test]
    fn predicates() {
        let h = ComplexMatrix::from_rows(vec![vec![r(1.0), c(0.0, 2.0)], vec![c(0.0, -2.0), r(3.0)]])
            .unwrap();
        assert!(h.is_hermitian(0.0));
        let nh = ComplexMatrix::from_rows(vec![vec![r(1.0), c(0.0, 2.0)], vec![c(0.0, 2.0), r(3.0)]])
            .unwrap();
        assert!(!nh.is_hermitian(1e-3));
        let u = ComplexMatrix::diag_complex(&[c(0.0, 1.0), ONE]).unwrap();
        assert!(u.is_unitary(1e-15));
        assert!(!h.is_unitary(1e-3));
    }

    #[test]
    fn ray_distance_ignores_phase() {
        let v = ComplexVector::new(vec![c(1.0, 2.0), c(0.5, -0.5)]).unwrap();
        let w = v.scale(Complex::from_polar(3.0, 1.234));
        assert!(v.ray_distance(&w) < 1e-14);
        assert!(v.ray_distance(&ComplexVector::from_real(&[1.0, 0.0]).unwrap()) > 1e-3);
    }
}
