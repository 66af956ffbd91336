//! Seeded simulated runs drawn from a [`JointTable`].
//!
//! Each shot draws one uniform `f64` from a ChaCha12 stream seeded with
//! `ChaCha12Rng::seed_from_u64(seed)` and inverts the cumulative distribution
//! over the populated cells in row-major order. Cells at or below the
//! support threshold never enter the distribution, so they are never drawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{JointTable, DEFAULT_SUPPORT_TOL};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot: u64,
    pub left_slot: usize,
    pub right_slot: usize,
}

struct CellSampler {
    cells: Vec<(usize, usize)>,
    cumulative: Vec<f64>,
}

impl CellSampler {
    fn new(t: &JointTable, support_tol: f64) -> Self {
        let mut cells = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for (i, row) in t.probabilities.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if p > support_tol {
                    acc += p;
                    cells.push((i, j));
                    cumulative.push(acc);
                }
            }
        }
        Self { cells, cumulative }
    }

    fn draw(&self, rng: &mut impl Rng) -> (usize, usize) {
        let total = *self.cumulative.last().expect("table has support");
        let u = rng.gen::<f64>() * total;
        let k = self.cumulative.partition_point(|&c| c <= u).min(self.cells.len() - 1);
        self.cells[k]
    }

    fn run(&self, n: u64, seed: u64, first_shot: u64) -> Vec<ShotRecord> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..n)
            .map(|k| {
                let (left_slot, right_slot) = self.draw(&mut rng);
                ShotRecord { shot: first_shot + k, left_slot, right_slot }
            })
            .collect()
    }
}

/// `n` i.i.d. outcome pairs from `t`; identical inputs give identical records.
pub fn sample(t: &JointTable, n: u64, seed: u64) -> Vec<ShotRecord> {
    sample_with_support(t, n, seed, DEFAULT_SUPPORT_TOL)
}

pub fn sample_with_support(t: &JointTable, n: u64, seed: u64, support_tol: f64) -> Vec<ShotRecord> {
    if n == 0 {
        return Vec::new();
    }
    CellSampler::new(t, support_tol).run(n, seed, 0)
}

/// SplitMix64 finalizer over `seed + (batch + 1)·0x9E3779B97F4A7C15`.
pub fn mix_seed(seed: u64, batch: u64) -> u64 {
    let mut z = seed.wrapping_add(batch.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splits `n` shots over `batches` independent streams seeded with
/// [`mix_seed`] and generates them in parallel. The first `n % batches`
/// batches take one extra shot. One batch is exactly [`sample`].
pub fn sample_batched(t: &JointTable, n: u64, seed: u64, batches: u64) -> Vec<ShotRecord> {
    if batches <= 1 {
        return sample(t, n, seed);
    }
    if n == 0 {
        return Vec::new();
    }
    let sampler = CellSampler::new(t, DEFAULT_SUPPORT_TOL);
    let base = n / batches;
    let extra = n % batches;
    let plan: Vec<(u64, u64, u64)> = (0..batches)
        .scan(0u64, |start, b| {
            let size = base + u64::from(b < extra);
            let entry = (b, size, *start);
            *start += size;
            Some(entry)
        })
        .collect();
    plan.par_iter()
        .map(|&(b, size, start)| sampler.run(size, mix_seed(seed, b), start))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalReport {
    pub counts: Vec<Vec<u64>>,
    pub frequencies: Vec<Vec<f64>>,
    pub max_abs_deviation: f64,
    pub total_shots: u64,
    pub seed: u64,
}

/// Tallies `records` against the exact table. With no records all
/// frequencies are zero.
pub fn empirical_report(records: &[ShotRecord], t: &JointTable, seed: u64) -> Result<EmpiricalReport> {
    let (rows, cols) = (t.rows(), t.cols());
    let mut counts = vec![vec![0u64; cols]; rows];
    for r in records {
        if r.left_slot >= rows || r.right_slot >= cols {
            return Err(Error::ShapeMismatch { row: r.left_slot, col: r.right_slot, rows, cols });
        }
        counts[r.left_slot][r.right_slot] += 1;
    }
    let total_shots = records.len() as u64;
    let frequencies: Vec<Vec<f64>> = counts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&k| if total_shots == 0 { 0.0 } else { k as f64 / total_shots as f64 })
                .collect()
        })
        .collect();
    let max_abs_deviation = frequencies
        .iter()
        .flatten()
        .zip(t.probabilities.iter().flatten())
        .map(|(f, p)| (f - p).abs())
        .fold(0.0, f64::max);
    Ok(EmpiricalReport { counts, frequencies, max_abs_deviation, total_shots, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(p: Vec<Vec<f64>>) -> JointTable {
        let v: Vec<f64> = (0..p.len()).map(|k| k as f64 + 1.0).collect();
        JointTable::from_probabilities(&v, &v, p, ["s", "a", "b"]).unwrap()
    }

    fn mixed() -> JointTable {
        let s = 1.0 / 6.0;
        table(vec![vec![1.0 / 3.0, 0.0, 0.0], vec![0.0, s, s], vec![0.0, s, s]])
    }

    #[test]
    fn zero_shots() {
        assert!(sample(&mixed(), 0, 1).is_empty());
        let r = empirical_report(&[], &mixed(), 1).unwrap();
        assert_eq!(r.total_shots, 0);
        assert!(r.frequencies.iter().flatten().all(|&f| f == 0.0));
    }

    #[test]
    fn deterministic_under_seed() {
        let a = sample(&mixed(), 1000, 42);
        let b = sample(&mixed(), 1000, 42);
        assert_eq!(a, b);
        assert_ne!(a, sample(&mixed(), 1000, 43));
        assert!(a.iter().enumerate().all(|(k, r)| r.shot == k as u64));
    }

    #[test]
    fn point_mass_table() {
        let t = table(vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert!(sample(&t, 500, 9).iter().all(|r| r.left_slot == 0 && r.right_slot == 0));
    }

    #[test]
    fn single_shot_fills_one_cell() {
        let r = empirical_report(&sample(&mixed(), 1, 5), &mixed(), 5).unwrap();
        assert_eq!(r.counts.iter().flatten().filter(|&&k| k > 0).count(), 1);
        assert_eq!(r.counts.iter().flatten().sum::<u64>(), 1);
    }

    #[test]
    fn zero_cells_are_never_drawn() {
        let t = mixed();
        let r = empirical_report(&sample(&t, 20_000, 3), &t, 3).unwrap();
        for (i, row) in t.probabilities.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if p == 0.0 {
                    assert_eq!(r.counts[i][j], 0);
                }
            }
        }
    }

    #[test]
    fn dust_below_support_is_excluded() {
        let t = table(vec![vec![1.0 - 1e-11, 1e-11], vec![0.0, 0.0]]);
        assert!(sample(&t, 10_000, 0).iter().all(|r| r.right_slot == 0));
    }

    #[test]
    fn batched_stream_is_deterministic_and_complete() {
        let t = mixed();
        let a = sample_batched(&t, 10_001, 7, 4);
        assert_eq!(a, sample_batched(&t, 10_001, 7, 4));
        assert_eq!(a.len(), 10_001);
        assert!(a.iter().enumerate().all(|(k, r)| r.shot == k as u64));
        assert_eq!(sample_batched(&t, 300, 7, 1), sample(&t, 300, 7));
        // the first batch uses the mixed seed, not the master seed
        let first = CellSampler::new(&t, DEFAULT_SUPPORT_TOL).run(2501, mix_seed(7, 0), 0);
        assert_eq!(&a[..2501], &first[..]);
    }

    #[test]
    fn mix_seed_spreads_batches() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|b| mix_seed(0, b)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn shape_mismatch() {
        let bad = [ShotRecord { shot: 0, left_slot: 3, right_slot: 0 }];
        assert!(matches!(empirical_report(&bad, &mixed(), 0), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn frequencies_converge() {
        let t = mixed();
        for n in [1_000u64, 10_000, 100_000] {
            let r = empirical_report(&sample(&t, n, 11), &t, 11).unwrap();
            assert!(r.max_abs_deviation < 10.0 * 0.5 / (n as f64).sqrt(), "n={n}: {}", r.max_abs_deviation);
        }
    }
}
