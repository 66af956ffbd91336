//! Exact quantum predictions for a pair of contexts measured on the two
//! halves of a bipartite state.
//!
//! Outcomes are always addressed by basis slot. Eigenvalues travel with the
//! slots as labels only, so two outcomes with equal values on opposite sides
//! are never confused.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexVector};
use crate::observables::ContextOperator;
use crate::states::{BipartiteState, DensityMatrix};

/// Probability above which a cell counts as populated.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-10;
/// Largest negative roundoff that is silently clamped to zero.
pub const NEGATIVE_CLAMP_TOL: f64 = 1e-12;
/// Accepted deviation of a table's total from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Largest imaginary part tolerated in `Tr{ρ(A⊗B)}`.
pub const IMAGINARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeLabel {
    pub slot: usize,
    pub eigenvalue: f64,
}

/// Joint outcome probabilities `P[i][j]` for left slot `i` and right slot `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    pub left_labels: Vec<OutcomeLabel>,
    pub right_labels: Vec<OutcomeLabel>,
    pub probabilities: Vec<Vec<f64>>,
    pub state_tag: String,
    pub left_context_tag: String,
    pub right_context_tag: String,
}

impl JointTable {
    /// Builds a table from raw probabilities, clamping roundoff below zero and
    /// rejecting anything that is not a distribution.
    pub fn from_probabilities(
        left_values: &[f64],
        right_values: &[f64],
        mut probabilities: Vec<Vec<f64>>,
        tags: [&str; 3],
    ) -> Result<Self> {
        if probabilities.len() != left_values.len() {
            return Err(Error::DimensionMismatch { expected: left_values.len(), found: probabilities.len() });
        }
        let mut total = 0.0;
        for (i, row) in probabilities.iter_mut().enumerate() {
            if row.len() != right_values.len() {
                return Err(Error::DimensionMismatch { expected: right_values.len(), found: row.len() });
            }
            for (j, p) in row.iter_mut().enumerate() {
                if !p.is_finite() {
                    return Err(Error::NonFinite("probability"));
                }
                if *p < -NEGATIVE_CLAMP_TOL {
                    return Err(Error::NegativeProbability { row: i, col: j, value: *p });
                }
                *p = p.max(0.0);
                total += *p;
            }
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalizedTable(total));
        }
        let label = |vals: &[f64]| {
            vals.iter()
                .enumerate()
                .map(|(slot, &eigenvalue)| OutcomeLabel { slot, eigenvalue })
                .collect()
        };
        Ok(Self {
            left_labels: label(left_values),
            right_labels: label(right_values),
            probabilities,
            state_tag: tags[0].to_string(),
            left_context_tag: tags[1].to_string(),
            right_context_tag: tags[2].to_string(),
        })
    }

    pub fn rows(&self) -> usize {
        self.left_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.right_labels.len()
    }

    pub fn get(&self, left: usize, right: usize) -> f64 {
        self.probabilities[left][right]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().flatten().sum()
    }

    /// `Σ_ij P[i][j] λ_i μ_j`.
    pub fn contracted_expectation(&self) -> f64 {
        let mut sum = 0.0;
        for (l, row) in self.left_labels.iter().zip(&self.probabilities) {
            for (r, p) in self.right_labels.iter().zip(row) {
                sum += p * l.eigenvalue * r.eigenvalue;
            }
        }
        sum
    }
}

/// `Tr{ρ (A ⊗ B)}`.
pub fn expectation(rho: &DensityMatrix, a: &ContextOperator, b: &ContextOperator) -> Result<f64> {
    let expected = a.dim() * b.dim();
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: rho.dim() });
    }
    let raw = rho.matrix().matmul(&kron(a.matrix(), b.matrix())).trace();
    if raw.im.abs() > IMAGINARY_TOL {
        return Err(Error::NonNegligibleImaginaryPart(raw.im));
    }
    Ok(raw.re)
}

/// Born-rule table `P[i][j] = ⟨s|(P_i ⊗ Q_j)|s⟩` over the outcome projectors
/// of both contexts.
pub fn joint_distribution(s: &BipartiteState, a: &ContextOperator, b: &ContextOperator) -> Result<JointTable> {
    let d = s.local_dim();
    for ctx in [a, b] {
        if ctx.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: ctx.dim() });
        }
    }
    let left = a.outcome_projectors();
    let right = b.outcome_projectors();
    let mut probabilities = vec![vec![0.0; right.len()]; left.len()];
    for (i, p) in left.iter().enumerate() {
        for (j, q) in right.iter().enumerate() {
            let value = kron(p, q).sandwich(s.amplitudes(), s.amplitudes());
            probabilities[i][j] = value.re;
        }
    }
    JointTable::from_probabilities(
        a.spectrum().values(),
        b.spectrum().values(),
        probabilities,
        [s.label(), a.label(), b.label()],
    )
}

/// Row sums and column sums.
pub fn marginals(t: &JointTable) -> (Vec<f64>, Vec<f64>) {
    let left = t.probabilities.iter().map(|row| row.iter().sum()).collect();
    let right = (0..t.cols())
        .map(|j| t.probabilities.iter().map(|row| row[j]).sum())
        .collect();
    (left, right)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniquenessStatus {
    /// Support is a perfect matching: each outcome fixes the other side.
    Unique,
    /// Support splits into disjoint complete blocks, so an outcome fixes only
    /// a group of outcomes on the other side.
    Block,
    NotUnique,
}

/// A connected component of the support, as left and right slot sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportBlock {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub mass: f64,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub is_unique: bool,
    pub status: UniquenessStatus,
    /// The support bijection when unique, otherwise the heaviest matching.
    pub pairing: Vec<(usize, usize)>,
    /// Probability outside the reported pairing.
    pub violation_mass: f64,
    pub blocks: Vec<SupportBlock>,
}

/// Checks whether each outcome on one side determines the outcome on the
/// other. `tol` is both the support threshold and the allowed violation mass.
pub fn verify_uniqueness(t: &JointTable, tol: f64) -> UniquenessReport {
    let (pairing, matched) = heaviest_matching(&t.probabilities);
    let violation_mass = (t.total() - matched).max(0.0);
    let blocks = support_blocks(t, tol);

    let covers_all = |b: &[SupportBlock]| {
        b.iter().map(|x| x.left.len()).sum::<usize>() == t.rows()
            && b.iter().map(|x| x.right.len()).sum::<usize>() == t.cols()
    };
    let one_to_one = blocks.iter().all(|b| b.left.len() == 1 && b.right.len() == 1);
    let is_unique = t.rows() == t.cols() && covers_all(&blocks) && one_to_one && violation_mass <= tol;

    let status = if is_unique {
        UniquenessStatus::Unique
    } else if covers_all(&blocks) && blocks.iter().all(|b| b.complete) {
        UniquenessStatus::Block
    } else {
        UniquenessStatus::NotUnique
    };

    UniquenessReport { is_unique, status, pairing, violation_mass, blocks }
}

/// Connected components of the bipartite support graph. Slots with no
/// support at all do not appear in any block.
fn support_blocks(t: &JointTable, tol: f64) -> Vec<SupportBlock> {
    let (rows, cols) = (t.rows(), t.cols());
    let supported = |i: usize, j: usize| t.probabilities[i][j] > tol;
    let mut row_seen = vec![false; rows];
    let mut col_seen = vec![false; cols];
    let mut blocks = Vec::new();

    for start in 0..rows {
        if row_seen[start] || !(0..cols).any(|j| supported(start, j)) {
            continue;
        }
        let mut left = vec![start];
        let mut right = Vec::new();
        row_seen[start] = true;
        let mut frontier = vec![(true, start)];
        while let Some((is_row, k)) = frontier.pop() {
            if is_row {
                for j in 0..cols {
                    if !col_seen[j] && supported(k, j) {
                        col_seen[j] = true;
                        right.push(j);
                        frontier.push((false, j));
                    }
                }
            } else {
                for i in 0..rows {
                    if !row_seen[i] && supported(i, k) {
                        row_seen[i] = true;
                        left.push(i);
                        frontier.push((true, i));
                    }
                }
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        let complete = left.iter().all(|&i| right.iter().all(|&j| supported(i, j)));
        let mass = left.iter().flat_map(|&i| right.iter().map(move |&j| (i, j))).map(|(i, j)| t.get(i, j)).sum();
        blocks.push(SupportBlock { left, right, mass, complete });
    }
    blocks
}

/// Maximum-mass matching between rows and columns, by dynamic programming
/// over subsets of the larger side. Returns pairs sorted by row and their mass.
fn heaviest_matching(p: &[Vec<f64>]) -> (Vec<(usize, usize)>, f64) {
    let rows = p.len();
    let cols = p.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return (Vec::new(), 0.0);
    }
    if rows > cols {
        let transposed: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| p[i][j]).collect()).collect();
        let (pairs, mass) = heaviest_matching(&transposed);
        let mut flipped: Vec<_> = pairs.into_iter().map(|(j, i)| (i, j)).collect();
        flipped.sort_unstable();
        return (flipped, mass);
    }
    assert!(cols <= 20, "matching over {cols} columns is too large for subset DP");

    // best[mask] = heaviest assignment of the first popcount(mask) rows to the columns in mask
    let size = 1usize << cols;
    let mut best = vec![f64::NEG_INFINITY; size];
    let mut choice = vec![usize::MAX; size];
    best[0] = 0.0;
    for mask in 0..size {
        let row = mask.count_ones() as usize;
        if row >= rows || best[mask] == f64::NEG_INFINITY {
            continue;
        }
        for j in 0..cols {
            if mask & (1 << j) == 0 {
                let next = mask | (1 << j);
                let value = best[mask] + p[row][j];
                if value > best[next] {
                    best[next] = value;
                    choice[next] = j;
                }
            }
        }
    }
    let (mut mask, mass) = (0..size)
        .filter(|m| m.count_ones() as usize == rows)
        .map(|m| (m, best[m]))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let mut pairs = Vec::with_capacity(rows);
    for row in (0..rows).rev() {
        let j = choice[mask];
        pairs.push((row, j));
        mask &= !(1 << j);
    }
    pairs.reverse();
    (pairs, mass)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenCell {
    pub left: OutcomeLabel,
    pub right: OutcomeLabel,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub forbidden_cells: Vec<ForbiddenCell>,
    /// Total probability on cells a contextual account expects to be populated.
    pub contextual_mass: f64,
}

/// Probability carried by the listed `(left slot, right slot)` cells.
pub fn contextuality_criterion(t: &JointTable, forbidden: &[(usize, usize)]) -> Result<CriterionReport> {
    let mut cells = Vec::with_capacity(forbidden.len());
    for &(row, col) in forbidden {
        if row >= t.rows() || col >= t.cols() {
            return Err(Error::BadCellIndex { row, col, rows: t.rows(), cols: t.cols() });
        }
        cells.push(ForbiddenCell {
            left: t.left_labels[row],
            right: t.right_labels[col],
            probability: t.get(row, col),
        });
    }
    let contextual_mass = cells.iter().map(|c| c.probability).sum::<f64>().clamp(0.0, 1.0);
    Ok(CriterionReport { forbidden_cells: cells, contextual_mass })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequentialOutcome {
    pub slot: usize,
    pub eigenvalue: f64,
    pub probability: f64,
}

/// Prepare a single particle in `prepared` and measure it in `measured`:
/// `p_k = |⟨b_k | prepared/‖prepared‖⟩|²`.
pub fn sequential_link_test(prepared: &ComplexVector, measured: &ContextOperator) -> Result<Vec<SequentialOutcome>> {
    if prepared.dim() != measured.dim() {
        return Err(Error::DimensionMismatch { expected: measured.dim(), found: prepared.dim() });
    }
    let unit = prepared.normalized()?;
    Ok(measured
        .basis()
        .iter()
        .zip(measured.spectrum().values())
        .enumerate()
        .map(|(slot, (b, &eigenvalue))| SequentialOutcome {
            slot,
            eigenvalue,
            probability: b.inner(&unit).norm_sqr(),
        })
        .collect())
}

/// Slot of `measured` whose ray coincides with `ray` up to phase, if any.
pub fn shared_ray_slot(ray: &ComplexVector, measured: &ContextOperator, tol: f64) -> Option<usize> {
    measured.basis().iter().position(|b| b.dim() == ray.dim() && b.ray_distance(ray) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;
    use crate::observables::{four_dim_contexts, ks_context, ks_context_prime, EigenvalueSpectrum};
    use crate::states::{density, spin1_singlet, spin32_singlet};

    fn spec(v: &[f64]) -> EigenvalueSpectrum {
        EigenvalueSpectrum::new(v.to_vec()).unwrap()
    }

    fn uniform(n: usize) -> JointTable {
        let v: Vec<f64> = (0..n).map(|k| k as f64).collect();
        JointTable::from_probabilities(&v, &v, vec![vec![1.0 / (n * n) as f64; n]; n], ["u", "l", "r"]).unwrap()
    }

    #[test]
    fn expectation_examples() {
        let rho = density(&spin1_singlet());
        let a = ks_context(&spec(&[1.0, 2.0, 3.0])).unwrap();
        let b = ks_context(&spec(&[4.0, 5.0, 6.0])).unwrap();
        let bp = ks_context_prime(&spec(&[4.0, 5.0, 6.0])).unwrap();
        assert!((expectation(&rho, &a, &b).unwrap() - 32.0 / 3.0).abs() < 1e-12);
        assert!((expectation(&rho, &a, &bp).unwrap() - 63.0 / 6.0).abs() < 1e-12);

        let rho4 = density(&spin32_singlet());
        let (c4, _) = four_dim_contexts(&spec(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        let (_, cp4) = four_dim_contexts(&spec(&[5.0, 6.0, 7.0, 8.0])).unwrap();
        assert!((expectation(&rho4, &c4, &cp4).unwrap() - 121.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let rho4 = density(&spin32_singlet());
        let a = ks_context(&spec(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(
            expectation(&rho4, &a, &a),
            Err(Error::DimensionMismatch { expected: 9, found: 16 })
        );
        assert!(joint_distribution(&spin32_singlet(), &a, &a).is_err());
    }

    #[test]
    fn uniqueness_on_uniform_table() {
        let r = verify_uniqueness(&uniform(3), DEFAULT_SUPPORT_TOL);
        assert!(!r.is_unique);
        assert_eq!(r.status, UniquenessStatus::Block);
        assert!((r.violation_mass - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn uniqueness_on_permutation_table() {
        let v = [1.0, 2.0, 3.0];
        let p = vec![vec![0.0, 0.0, 0.5], vec![0.2, 0.0, 0.0], vec![0.0, 0.3, 0.0]];
        let t = JointTable::from_probabilities(&v, &v, p, ["s", "a", "b"]).unwrap();
        let r = verify_uniqueness(&t, DEFAULT_SUPPORT_TOL);
        assert!(r.is_unique);
        assert_eq!(r.pairing, vec![(0, 2), (1, 0), (2, 1)]);
        assert_eq!(r.violation_mass, 0.0);
    }

    #[test]
    fn ragged_support_is_not_unique() {
        let v = [1.0, 2.0];
        let p = vec![vec![0.5, 0.25], vec![0.0, 0.25]];
        let t = JointTable::from_probabilities(&v, &v, p, ["s", "a", "b"]).unwrap();
        let r = verify_uniqueness(&t, DEFAULT_SUPPORT_TOL);
        assert_eq!(r.status, UniquenessStatus::NotUnique);
        assert!((r.violation_mass - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rectangular_matching() {
        let p = vec![vec![0.1, 0.4], vec![0.3, 0.0], vec![0.2, 0.0]];
        let (pairs, mass) = heaviest_matching(&p);
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
        assert!((mass - 0.7).abs() < 1e-15);
    }

    #[test]
    fn table_validation() {
        let v = [1.0, 2.0];
        assert!(matches!(
            JointTable::from_probabilities(&v, &v, vec![vec![1.1, -0.1], vec![0.0, 0.0]], ["", "", ""]),
            Err(Error::NegativeProbability { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            JointTable::from_probabilities(&v, &v, vec![vec![0.5, 0.0], vec![0.0, 0.0]], ["", "", ""]),
            Err(Error::NotNormalizedTable(_))
        ));
        let t = JointTable::from_probabilities(&v, &v, vec![vec![1.0, -1e-13], vec![0.0, 0.0]], ["", "", ""])
            .unwrap();
        assert_eq!(t.get(0, 1), 0.0);
    }

    #[test]
    fn criterion_on_uniform_table() {
        let r = contextuality_criterion(&uniform(4), &[(2, 2), (2, 3), (3, 2), (3, 3)]).unwrap();
        assert!((r.contextual_mass - 0.25).abs() < 1e-15);
        assert_eq!(r.forbidden_cells.len(), 4);
        assert!(matches!(
            contextuality_criterion(&uniform(3), &[(0, 3)]),
            Err(Error::BadCellIndex { row: 0, col: 3, .. })
        ));
    }

    #[test]
    fn sequential_examples() {
        let s = spec(&[1.0, 2.0, 3.0]);
        let cp = ks_context_prime(&s).unwrap();
        let link = ComplexVector::basis(3, 1);
        let out = sequential_link_test(&link, &cp).unwrap();
        assert!((out[0].probability - 1.0).abs() < 1e-15);
        assert_eq!(shared_ray_slot(&link, &cp, 1e-8), Some(0));

        let beta = ComplexVector::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let out = sequential_link_test(&beta, &cp).unwrap();
        let probs: Vec<f64> = out.iter().map(|o| o.probability).collect();
        assert!(probs[0].abs() < 1e-15 && (probs[1] - 0.5).abs() < 1e-15 && (probs[2] - 0.5).abs() < 1e-15);
        assert_eq!(shared_ray_slot(&beta, &cp, 1e-8), None);

        let (c4, _) = four_dim_contexts(&spec(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        let out = sequential_link_test(&ComplexVector::basis(4, 2), &c4).unwrap();
        assert_eq!(out[2].probability, 1.0);
        assert_eq!(out[2].eigenvalue, 3.0);

        assert_eq!(
            sequential_link_test(&ComplexVector::from_real(&[0.0; 3]).unwrap(), &cp),
            Err(Error::ZeroVector)
        );
        assert!(matches!(
            sequential_link_test(&ComplexVector::basis(4, 0), &cp),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn phased_prepared_ray_gives_the_same_distribution() {
        let cp = ks_context_prime(&spec(&[1.0, 2.0, 3.0])).unwrap();
        let v = ComplexVector::new(vec![c(0.3, 0.1), c(-0.2, 0.5), c(0.9, 0.0)]).unwrap();
        let a = sequential_link_test(&v, &cp).unwrap();
        let b = sequential_link_test(&v.scale(c(0.0, -2.5)), &cp).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.probability - y.probability).abs() < 1e-15);
        }
        assert!((a.iter().map(|o| o.probability).sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn marginal_rows_sum_exactly() {
        let s = spec(&[1.0, 2.0, 3.0]);
        let t = joint_distribution(
            &spin1_singlet(),
            &ks_context(&s).unwrap(),
            &ks_context_prime(&s).unwrap(),
        )
        .unwrap();
        let (left, right) = marginals(&t);
        for i in 0..3 {
            assert_eq!(left[i], t.probabilities[i].iter().sum::<f64>());
            assert!((left[i] - 1.0 / 3.0).abs() < 1e-12);
            assert!((right[i] - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}
