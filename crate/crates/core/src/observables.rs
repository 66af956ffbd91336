//! Spin-1 observables along arbitrary directions and the maximal context
//! operators built from them.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::eigen::DEFAULT_MERGE_TOL;
use crate::error::{Error, Result};
use crate::matrix::{c, projector_from_ray, Complex, ComplexMatrix, ComplexVector, ONE, ZERO};

/// Tolerance on `<b_i, b_j> - δ_ij` accepted by [`context_from_basis`].
pub const BASIS_ORTHONORMALITY_TOL: f64 = 1e-8;

/// A spatial direction in spherical coordinates, `0 ≤ theta ≤ π`, `0 ≤ phi < 2π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// Any finite pair is accepted and folded onto the canonical ranges
    /// without changing the physical direction.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite("direction"));
        }
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Cartesian unit vector.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Outcome values of a context, one per basis ray, pairwise distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueSpectrum {
    values: Vec<f64>,
}

impl EigenvalueSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("spectrum"));
        }
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                if (a - b).abs() <= DEFAULT_MERGE_TOL {
                    return Err(Error::DegenerateSpectrum {
                        first: *a,
                        second: *b,
                        tol: DEFAULT_MERGE_TOL,
                    });
                }
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl TryFrom<&[f64]> for EigenvalueSpectrum {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }
}

/// A maximal observable: an orthonormal basis of outcome rays, one real
/// value per ray, and the Hermitian matrix they synthesize.
#[derive(Clone, Debug)]
pub struct ContextOperator {
    matrix: ComplexMatrix,
    basis: Vec<ComplexVector>,
    spectrum: EigenvalueSpectrum,
    label: String,
}

impl ContextOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &[ComplexVector] {
        &self.basis
    }

    pub fn spectrum(&self) -> &EigenvalueSpectrum {
        &self.spectrum
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Rank-1 projectors onto the basis rays, in outcome-slot order.
    pub fn outcome_projectors(&self) -> Vec<ComplexMatrix> {
        self.basis
            .iter()
            .map(|v| projector_from_ray(v).expect("basis rays are unit vectors"))
            .collect()
    }

    /// `Σ_k λ_k P(b_k)`, the matrix synthesized from basis and spectrum.
    pub fn synthesized_matrix(&self) -> ComplexMatrix {
        synthesize(&self.basis, self.spectrum.values())
    }
}

fn synthesize(basis: &[ComplexVector], values: &[f64]) -> ComplexMatrix {
    let dim = basis[0].dim();
    basis.iter().zip(values).fold(ComplexMatrix::zeros(dim), |acc, (v, &l)| {
        &acc + &projector_from_ray(v).expect("nonzero ray").scale(c(l, 0.0))
    })
}

/// Spin-1 component along `d`, in the `(+1, 0, -1)` basis.
pub fn spin1_operator(d: Direction) -> ComplexMatrix {
    let (st, ct) = d.theta.sin_cos();
    let off = st * FRAC_1_SQRT_2;
    let down = Complex::from_polar(off, -d.phi);
    let up = Complex::from_polar(off, d.phi);
    ComplexMatrix::from_rows(vec![
        vec![c(ct, 0.0), down, ZERO],
        vec![up, ZERO, down],
        vec![ZERO, up, c(-ct, 0.0)],
    ])
    .expect("finite entries")
}

/// Closed-form eigenpairs of [`spin1_operator`] in the order `+1, 0, -1`,
/// with all free phases set to zero.
pub fn spin1_eigensystem(d: Direction) -> [(f64, ComplexVector); 3] {
    let (st, ct) = d.theta.sin_cos();
    let (sh, ch) = (d.theta / 2.0).sin_cos();
    let em = Complex::from_polar(1.0, -d.phi);
    let ep = Complex::from_polar(1.0, d.phi);
    let r = st * FRAC_1_SQRT_2;
    let plus = vec![em * (ch * ch), c(r, 0.0), ep * (sh * sh)];
    let zero = vec![em * (-r), c(ct, 0.0), ep * r];
    let minus = vec![em * (sh * sh), c(-r, 0.0), ep * (ch * ch)];
    [
        (1.0, ComplexVector::from_raw(plus)),
        (0.0, ComplexVector::from_raw(zero)),
        (-1.0, ComplexVector::from_raw(minus)),
    ]
}

fn spin1_squared(theta: f64, phi: f64) -> ComplexMatrix {
    let j = spin1_operator(Direction::new(theta, phi).expect("finite angles"));
    j.matmul(&j)
}

fn require_len(spec: &EigenvalueSpectrum, n: usize) -> Result<()> {
    if spec.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: spec.len() });
    }
    Ok(())
}

/// `½[(α+β−γ) A + (α−β+γ) B + (β+γ−α) Jz²]` for the squared spin components `A`, `B`.
fn ks_combination(spec: &EigenvalueSpectrum, first: &ComplexMatrix, second: &ComplexMatrix) -> ComplexMatrix {
    let [a, b, g] = [spec.values[0], spec.values[1], spec.values[2]];
    let jz2 = spin1_squared(0.0, 0.0);
    let sum = &(&first.scale(c(a + b - g, 0.0)) + &second.scale(c(a - b + g, 0.0)))
        + &jz2.scale(c(b + g - a, 0.0));
    sum.scale(c(0.5, 0.0))
}

fn unit(entries: Vec<Complex>) -> ComplexVector {
    ComplexVector::from_raw(entries).normalized().expect("nonzero ray")
}

/// Rays of the Kochen-Specker context, in `(α, β, γ)` slot order.
pub fn ks_basis() -> Vec<ComplexVector> {
    vec![
        unit(vec![ZERO, ONE, ZERO]),
        unit(vec![ONE, ZERO, ONE]),
        unit(vec![c(-1.0, 0.0), ZERO, ONE]),
    ]
}

/// Rays of the primed Kochen-Specker context, in `(α, β, γ)` slot order.
pub fn ks_prime_basis() -> Vec<ComplexVector> {
    vec![
        unit(vec![ZERO, ONE, ZERO]),
        unit(vec![c(0.0, -1.0), ZERO, ONE]),
        unit(vec![c(0.0, 1.0), ZERO, ONE]),
    ]
}

/// Maximal Kochen-Specker operator from the squared spin-1 components along
/// x, y and z. Outcome slots follow `(0,1,0)`, `(1,0,1)/√2`, `(−1,0,1)/√2`.
pub fn ks_context(spec: &EigenvalueSpectrum) -> Result<ContextOperator> {
    require_len(spec, 3)?;
    let matrix = ks_combination(spec, &spin1_squared(FRAC_PI_2, 0.0), &spin1_squared(FRAC_PI_2, FRAC_PI_2));
    Ok(checked_context(matrix, ks_basis(), spec.clone(), "C_KS"))
}

/// The primed context, rotated by π/4 about z. It shares the ray `(0,1,0)`
/// with [`ks_context`]; the other slots are `(−i,0,1)/√2` and `(i,0,1)/√2`.
pub fn ks_context_prime(spec: &EigenvalueSpectrum) -> Result<ContextOperator> {
    require_len(spec, 3)?;
    let matrix = ks_combination(
        spec,
        &spin1_squared(FRAC_PI_2, FRAC_PI_4),
        &spin1_squared(FRAC_PI_2, 3.0 * FRAC_PI_4),
    );
    Ok(checked_context(matrix, ks_prime_basis(), spec.clone(), "C'_KS"))
}

fn checked_context(
    matrix: ComplexMatrix,
    basis: Vec<ComplexVector>,
    spectrum: EigenvalueSpectrum,
    label: &str,
) -> ContextOperator {
    debug_assert!(
        matrix.max_abs_diff(&synthesize(&basis, spectrum.values()))
            <= 1e-10 * spectrum.values().iter().fold(1.0f64, |m, v| m.max(v.abs())),
        "{label}: matrix disagrees with its eigenbasis"
    );
    ContextOperator { matrix, basis, spectrum, label: label.to_string() }
}

/// The pair of four-dimensional contexts `C` and `C'` linked by `e₃` and `e₄`.
///
/// `C` is diagonal. `C'` mixes the first two basis states: slot 0 is
/// `(1,1,0,0)/√2` and slot 1 is `(−1,1,0,0)/√2`. When `C'` is measured on the
/// right with values `(ε, ζ, η, ν)`, ε therefore sits on `(1,1,0,0)/√2`. Some
/// diagrams draw the labels of the two mixed rays the other way round; the
/// predictions are symmetric under that swap.
pub fn four_dim_contexts(spec: &EigenvalueSpectrum) -> Result<(ContextOperator, ContextOperator)> {
    require_len(spec, 4)?;
    let [a, b, g, d] = [spec.values[0], spec.values[1], spec.values[2], spec.values[3]];
    let diag = ComplexMatrix::diag(spec.values())?;
    let s = (a + b) / 2.0;
    let t = (a - b) / 2.0;
    let prime = ComplexMatrix::from_real_rows(&[
        &[s, t, 0.0, 0.0],
        &[t, s, 0.0, 0.0],
        &[0.0, 0.0, g, 0.0],
        &[0.0, 0.0, 0.0, d],
    ])?;
    let c_ctx = checked_context(diag, (0..4).map(|i| ComplexVector::basis(4, i)).collect(), spec.clone(), "C");
    let c_prime = checked_context(prime, four_dim_prime_basis(), spec.clone(), "C'");
    Ok((c_ctx, c_prime))
}

/// Rays of `C'` in `(α, β, γ, δ)` slot order.
pub fn four_dim_prime_basis() -> Vec<ComplexVector> {
    vec![
        unit(vec![ONE, ONE, ZERO, ZERO]),
        unit(vec![c(-1.0, 0.0), ONE, ZERO, ZERO]),
        ComplexVector::basis(4, 2),
        ComplexVector::basis(4, 3),
    ]
}

/// Context operator from an arbitrary orthonormal basis and one value per ray.
pub fn context_from_basis(
    basis: Vec<ComplexVector>,
    spec: &EigenvalueSpectrum,
    label: impl Into<String>,
) -> Result<ContextOperator> {
    let dim = basis.len();
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    if spec.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: spec.len() });
    }
    if let Some(v) = basis.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
    }
    let deviation = orthonormality_deviation(&basis);
    if deviation > BASIS_ORTHONORMALITY_TOL {
        return Err(Error::NonOrthonormalBasis { deviation });
    }
    let matrix = synthesize(&basis, spec.values());
    Ok(ContextOperator { matrix, basis, spectrum: spec.clone(), label: label.into() })
}

/// Largest `|<b_i, b_j> − δ_ij|` over the basis.
pub fn orthonormality_deviation(basis: &[ComplexVector]) -> f64 {
    let mut worst = 0.0f64;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((u.inner(v) - target).norm());
        }
    }
    worst
}
