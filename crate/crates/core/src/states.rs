//! Bipartite singlet states, their density matrices, and the rotation check
//! for the spin-1 singlet.
//!
//! Amplitudes are flattened first-particle-major: the amplitude of
//! `|i⟩ ⊗ |j⟩` lives at index `i * local_dim + j`. The spin-1 basis order is
//! `(+1, 0, −1)` and the spin-3/2 order is `(3/2, 1/2, −1/2, −3/2)`.

use crate::eigen::{spectral_projectors, DEFAULT_MERGE_TOL};
use crate::error::{Error, Result};
use crate::matrix::{c, kron, outer, Complex, ComplexMatrix, ComplexVector, ZERO};
use crate::observables::{spin1_operator, Direction};

const NORM_TOL: f64 = 1e-12;

/// A pure state of two `local_dim`-level systems.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    local_dim: usize,
    amplitudes: ComplexVector,
    label: String,
}

impl BipartiteState {
    pub fn new(local_dim: usize, amplitudes: ComplexVector, label: impl Into<String>) -> Result<Self> {
        if local_dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if amplitudes.dim() != local_dim * local_dim {
            return Err(Error::DimensionMismatch {
                expected: local_dim * local_dim,
                found: amplitudes.dim(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { local_dim, amplitudes, label: label.into() })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, left: usize, right: usize) -> Complex {
        self.amplitudes[left * self.local_dim + right]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The state with its two tensor factors exchanged.
    pub fn swapped(&self) -> Self {
        let d = self.local_dim;
        let entries = (0..d * d).map(|k| self.amplitude(k % d, k / d)).collect();
        Self {
            local_dim: d,
            amplitudes: ComplexVector::from_raw(entries),
            label: format!("swap({})", self.label),
        }
    }
}

/// `(1/√3)(−|00⟩ + |−+⟩ + |+−⟩)`.
pub fn spin1_singlet() -> BipartiteState {
    let a = 1.0 / 3f64.sqrt();
    let mut amps = vec![ZERO; 9];
    amps[2] = c(a, 0.0); // |+−⟩
    amps[4] = c(-a, 0.0); // |00⟩
    amps[6] = c(a, 0.0); // |−+⟩
    BipartiteState {
        local_dim: 3,
        amplitudes: ComplexVector::from_raw(amps),
        label: "phi_s".into(),
    }
}

/// `½(|3/2,−3/2⟩ − |−3/2,3/2⟩ − |1/2,−1/2⟩ + |−1/2,1/2⟩)`.
pub fn spin32_singlet() -> BipartiteState {
    let mut amps = vec![ZERO; 16];
    amps[3] = c(0.5, 0.0);
    amps[12] = c(-0.5, 0.0);
    amps[6] = c(-0.5, 0.0);
    amps[9] = c(0.5, 0.0);
    BipartiteState {
        local_dim: 4,
        amplitudes: ComplexVector::from_raw(amps),
        label: "psi_s".into(),
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates an arbitrary matrix as a density operator.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > 1e-10 {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::NotNormalized(tr.re));
        }
        let spectrum = spectral_projectors(&matrix, DEFAULT_MERGE_TOL)?;
        if let Some(&low) = spectrum.eigenvalues().first() {
            if low < -1e-10 {
                return Err(Error::NegativeProbability { row: 0, col: 0, value: low });
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }
}

/// `|s⟩⟨s|`.
pub fn density(s: &BipartiteState) -> DensityMatrix {
    DensityMatrix { matrix: outer(&s.amplitudes, &s.amplitudes) }
}

/// Reduced state of the first particle.
pub fn reduced_left(s: &BipartiteState) -> ComplexMatrix {
    let d = s.local_dim;
    ComplexMatrix::from_fn(d, |i, k| (0..d).map(|j| s.amplitude(i, j) * s.amplitude(k, j).conj()).sum())
}

/// Reduced state of the second particle.
pub fn reduced_right(s: &BipartiteState) -> ComplexMatrix {
    let d = s.local_dim;
    ComplexMatrix::from_fn(d, |j, l| (0..d).map(|i| s.amplitude(i, j) * s.amplitude(i, l).conj()).sum())
}

/// `exp(−i·angle·J(d))` by spectral synthesis over the spin-1 component.
pub fn rotation_operator_spin1(d: Direction, angle: f64) -> Result<ComplexMatrix> {
    if !angle.is_finite() {
        return Err(Error::NonFinite("rotation angle"));
    }
    let spectrum = spectral_projectors(&spin1_operator(d), DEFAULT_MERGE_TOL)?;
    Ok(spectrum.apply_function(|lambda| Complex::from_polar(1.0, -angle * lambda)))
}

/// `1 − |⟨s|(U⊗U)|s⟩|` for an arbitrary local unitary `U`.
pub fn local_unitary_infidelity(s: &BipartiteState, u: &ComplexMatrix) -> Result<f64> {
    if u.dim() != s.local_dim {
        return Err(Error::DimensionMismatch { expected: s.local_dim, found: u.dim() });
    }
    let overlap = kron(u, u).sandwich(&s.amplitudes, &s.amplitudes);
    Ok(1.0 - overlap.norm())
}

/// Infidelity of a spin-1 state under the same rotation applied to both particles.
pub fn check_rotation_invariance(s: &BipartiteState, d: Direction, angle: f64) -> Result<f64> {
    if s.local_dim != 3 {
        return Err(Error::UnsupportedDimension(s.local_dim));
    }
    local_unitary_infidelity(s, &rotation_operator_spin1(d, angle)?)
}
