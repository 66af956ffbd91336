//! The named context/state configurations, with their closed-form
//! expectation values and the outcome cells quantum mechanics rules out.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::observables::{four_dim_contexts, ks_context, ks_context_prime, ContextOperator, EigenvalueSpectrum};
use crate::states::{spin1_singlet, spin32_singlet, BipartiteState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// `C_KS ⊗ C_KS` on the spin-1 singlet.
    KsCollinear,
    /// `C_KS ⊗ C'_KS` on the spin-1 singlet.
    KsMixed,
    /// `C ⊗ C` on the spin-3/2 singlet.
    Dim4CollinearC,
    /// `C' ⊗ C'` on the spin-3/2 singlet.
    Dim4CollinearCprime,
    /// `C ⊗ C'` on the spin-3/2 singlet.
    Dim4Mixed,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::KsCollinear,
        Scenario::KsMixed,
        Scenario::Dim4CollinearC,
        Scenario::Dim4CollinearCprime,
        Scenario::Dim4Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::KsCollinear => "ks-collinear",
            Scenario::KsMixed => "ks-mixed",
            Scenario::Dim4CollinearC => "dim4-collinear-C",
            Scenario::Dim4CollinearCprime => "dim4-collinear-Cprime",
            Scenario::Dim4Mixed => "dim4-mixed",
        }
    }

    pub fn local_dim(self) -> usize {
        match self {
            Scenario::KsCollinear | Scenario::KsMixed => 3,
            _ => 4,
        }
    }

    /// `(1,2,3)/(4,5,6)` or `(1,2,3,4)/(5,6,7,8)`.
    pub fn default_spectra(self) -> (Vec<f64>, Vec<f64>) {
        match self.local_dim() {
            3 => (vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]),
            _ => (vec![1.0, 2.0, 3.0, 4.0], vec![5.0, 6.0, 7.0, 8.0]),
        }
    }

    pub fn state(self) -> BipartiteState {
        match self.local_dim() {
            3 => spin1_singlet(),
            _ => spin32_singlet(),
        }
    }

    /// Left and right context operators carrying the given spectra.
    pub fn contexts(
        self,
        left: &EigenvalueSpectrum,
        right: &EigenvalueSpectrum,
    ) -> Result<(ContextOperator, ContextOperator)> {
        Ok(match self {
            Scenario::KsCollinear => (ks_context(left)?, ks_context(right)?),
            Scenario::KsMixed => (ks_context(left)?, ks_context_prime(right)?),
            Scenario::Dim4CollinearC => (four_dim_contexts(left)?.0, four_dim_contexts(right)?.0),
            Scenario::Dim4CollinearCprime => (four_dim_contexts(left)?.1, four_dim_contexts(right)?.1),
            Scenario::Dim4Mixed => (four_dim_contexts(left)?.0, four_dim_contexts(right)?.1),
        })
    }

    /// Closed-form `Tr{ρ(A⊗B)}` with left values `l` and right values `r`.
    pub fn closed_form(self, l: &[f64], r: &[f64]) -> f64 {
        match self {
            Scenario::KsCollinear => (l[0] * r[0] + l[1] * r[1] + l[2] * r[2]) / 3.0,
            Scenario::KsMixed => (2.0 * l[0] * r[0] + (l[1] + l[2]) * (r[1] + r[2])) / 6.0,
            Scenario::Dim4CollinearC => (l[0] * r[3] + l[1] * r[2] + l[2] * r[1] + l[3] * r[0]) / 4.0,
            Scenario::Dim4CollinearCprime => ((l[0] + l[1]) * (r[2] + r[3]) + (l[2] + l[3]) * (r[0] + r[1])) / 8.0,
            Scenario::Dim4Mixed => (2.0 * (l[0] * r[3] + l[1] * r[2]) + (l[2] + l[3]) * (r[0] + r[1])) / 8.0,
        }
    }

    /// Cells `(left slot, right slot)` with zero quantum probability that a
    /// contextual account would populate. For the mixed scenarios these are
    /// exactly the cells named by the noncontextuality criterion; for the
    /// collinear ones they are the cells off the perfect-correlation support.
    pub fn forbidden_cells(self) -> Vec<(usize, usize)> {
        match self {
            Scenario::KsMixed => vec![(0, 1), (0, 2), (1, 0), (2, 0)],
            Scenario::Dim4Mixed => vec![(2, 2), (2, 3), (3, 2), (3, 3)],
            Scenario::KsCollinear => cells_where(3, |i, j| i != j),
            Scenario::Dim4CollinearC => cells_where(4, |i, j| i + j != 3),
            Scenario::Dim4CollinearCprime => cells_where(4, |i, j| (i < 2) == (j < 2)),
        }
    }
}

fn cells_where(n: usize, keep: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| keep(i, j))
        .collect()
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown scenario {s:?}"))
    }
}
