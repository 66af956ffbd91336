//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! grouping of eigenvectors into spectral projectors.

use crate::error::{Error, Result};
use crate::matrix::{c, outer, Complex, ComplexMatrix, ComplexVector, ZERO};

/// Default off-diagonal convergence threshold for the Jacobi sweeps.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-12;
/// Default tolerance below which neighbouring eigenvalues share a projector.
pub const DEFAULT_MERGE_TOL: f64 = 1e-8;
/// Hard cap on full Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Entries below this modulus are skipped when fixing the eigenvector phase.
const PHASE_ANCHOR_TOL: f64 = 1e-8;

/// Eigenvalues in ascending order, with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<ComplexVector>,
    pub sweeps: usize,
}

impl Eigensystem {
    /// Largest `|<v_i, v_j> - δ_ij|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, u) in self.eigenvectors.iter().enumerate() {
            for (j, v) in self.eigenvectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((u.inner(v) - c(target, 0.0)).norm());
            }
        }
        worst
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Multiplies the eigenvector so that its first entry of modulus above
/// `PHASE_ANCHOR_TOL` is real and positive.
pub(crate) fn fix_phase(v: &ComplexVector) -> ComplexVector {
    match v.entries().iter().find(|z| z.norm() > PHASE_ANCHOR_TOL) {
        Some(anchor) => {
            let idx = v.entries().iter().position(|z| z.norm() > PHASE_ANCHOR_TOL).unwrap();
            let mut entries = v.scale(anchor.conj() / anchor.norm()).entries().to_vec();
            entries[idx] = c(anchor.norm(), 0.0);
            ComplexVector::from_raw(entries)
        }
        None => v.clone(),
    }
}

/// Diagonalizes a Hermitian matrix with cyclic Jacobi sweeps.
///
/// Each pivot `(p, q)` is first made real by a diagonal phase and then
/// annihilated by a real plane rotation. Iteration stops once the
/// off-diagonal Frobenius norm falls to `tol * max(1, ‖A‖_F)`.
pub fn hermitian_eigensystem(a: &ComplexMatrix, tol: f64) -> Result<Eigensystem> {
    let n = a.dim();
    let scale = a.frobenius_norm().max(1.0);
    let herm_dev = a.hermitian_deviation();
    if herm_dev > tol.max(1e-12) * scale {
        return Err(Error::NotHermitian { deviation: herm_dev });
    }

    // symmetrize so that roundoff in the input does not leak into the rotations
    let mut work = ComplexMatrix::from_fn(n, |i, j| {
        if i == j {
            c(a.get(i, i).re, 0.0)
        } else {
            (a.get(i, j) + a.get(j, i).conj()) * 0.5
        }
    });
    let mut vecs = ComplexMatrix::identity(n);
    let threshold = tol * scale;

    let mut sweeps = 0;
    while off_diagonal_norm(&work) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off_diagonal_norm(&work) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut work, &mut vecs, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work.get(i, i).re.total_cmp(&work.get(j, j).re));
    let eigenvalues = order.iter().map(|&k| work.get(k, k).re).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| fix_phase(&ComplexVector::from_raw((0..n).map(|i| vecs.get(i, k)).collect())))
        .collect();
    Ok(Eigensystem { eigenvalues, eigenvectors, sweeps })
}

fn rotate(work: &mut ComplexMatrix, vecs: &mut ComplexMatrix, p: usize, q: usize) {
    let n = work.dim();
    let z = work.get(p, q);
    let r = z.norm();
    if r == 0.0 {
        return;
    }
    let app = work.get(p, p).re;
    let aqq = work.get(q, q).re;
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        let e = work.entries_mut();
        e[p * n + q] = ZERO;
        e[q * n + p] = ZERO;
        return;
    }

    // D = diag(1, e^{-iθ}) turns the pivot into the real value r
    let phase = z.conj() / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    // G = D R with R = [[c, s], [-s, c]]
    let g00 = c(cs, 0.0);
    let g01 = c(sn, 0.0);
    let g10 = phase * (-sn);
    let g11 = phase * cs;

    let e = work.entries_mut();
    for k in 0..n {
        let akp = e[k * n + p];
        let akq = e[k * n + q];
        e[k * n + p] = akp * g00 + akq * g10;
        e[k * n + q] = akp * g01 + akq * g11;
    }
    for k in 0..n {
        let apk = e[p * n + k];
        let aqk = e[q * n + k];
        e[p * n + k] = g00.conj() * apk + g10.conj() * aqk;
        e[q * n + k] = g01.conj() * apk + g11.conj() * aqk;
    }
    e[p * n + q] = ZERO;
    e[q * n + p] = ZERO;
    e[p * n + p] = c(e[p * n + p].re, 0.0);
    e[q * n + q] = c(e[q * n + q].re, 0.0);

    let v = vecs.entries_mut();
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * g00 + vkq * g10;
        v[k * n + q] = vkp * g01 + vkq * g11;
    }
}

/// Eigenvalues of a Hermitian matrix grouped into orthogonal projectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    dim: usize,
    eigenvalues: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
    multiplicities: Vec<usize>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `Σ f(λ_k) P_k`.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex) -> ComplexMatrix {
        matrix_function_from_spectrum(self, f)
    }

    /// `Σ_k P_k`, which should be the identity.
    pub fn resolution_of_identity(&self) -> ComplexMatrix {
        self.projectors
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, p| &acc + p)
    }
}

/// Spectral projectors of a Hermitian matrix; eigenvalues closer than
/// `merge_tol` to their sorted neighbour share one projector.
pub fn spectral_projectors(a: &ComplexMatrix, merge_tol: f64) -> Result<SpectralDecomposition> {
    let eig = hermitian_eigensystem(a, DEFAULT_CONVERGENCE_TOL)?;
    Ok(group_eigensystem(&eig, a.dim(), merge_tol))
}

pub(crate) fn group_eigensystem(eig: &Eigensystem, dim: usize, merge_tol: f64) -> SpectralDecomposition {
    let mut eigenvalues = Vec::new();
    let mut projectors = Vec::new();
    let mut multiplicities = Vec::new();

    let mut start = 0;
    while start < eig.eigenvalues.len() {
        let mut end = start + 1;
        while end < eig.eigenvalues.len()
            && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= merge_tol
        {
            end += 1;
        }
        let group = &eig.eigenvalues[start..end];
        eigenvalues.push(group.iter().sum::<f64>() / group.len() as f64);
        let proj = eig.eigenvectors[start..end]
            .iter()
            .fold(ComplexMatrix::zeros(dim), |acc, v| &acc + &outer(v, v));
        projectors.push(proj);
        multiplicities.push(end - start);
        start = end;
    }
    SpectralDecomposition { dim, eigenvalues, projectors, multiplicities }
}

/// Spectral synthesis `Σ f(λ_k) P_k`.
pub fn matrix_function_from_spectrum(
    d: &SpectralDecomposition,
    f: impl Fn(f64) -> Complex,
) -> ComplexMatrix {
    d.eigenvalues
        .iter()
        .zip(&d.projectors)
        .fold(ComplexMatrix::zeros(d.dim), |acc, (&lambda, p)| &acc + &p.scale(f(lambda)))
}
