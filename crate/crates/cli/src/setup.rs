//! Turns the command-line flags into a state, two contexts and the cells the
//! criterion inspects.

use std::fs;
use std::path::Path;

use interlink_core::{
    context_from_basis, spin1_singlet, spin32_singlet, BipartiteState, Complex, ComplexVector, ContextOperator,
    EigenvalueSpectrum, Scenario,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// A user-supplied configuration for `--scenario custom`.
///
/// Vectors are lists of `[re, im]` pairs. Eigenvalues default to `1..=d` on
/// the left and `d+1..=2d` on the right; the state defaults to the singlet of
/// the local dimension when that is 3 or 4.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomConfig {
    pub left_basis: Vec<Vec<[f64; 2]>>,
    pub right_basis: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub state: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub left: Option<Vec<f64>>,
    #[serde(default)]
    pub right: Option<Vec<f64>>,
    pub forbidden: Vec<[usize; 2]>,
}

pub struct Setup {
    pub name: String,
    pub named: Option<Scenario>,
    pub state: BipartiteState,
    pub left: ContextOperator,
    pub right: ContextOperator,
    pub forbidden: Vec<(usize, usize)>,
}

impl Setup {
    pub fn left_values(&self) -> &[f64] {
        self.left.spectrum().values()
    }

    pub fn right_values(&self) -> &[f64] {
        self.right.spectrum().values()
    }

    pub fn closed_form(&self) -> Option<f64> {
        self.named.map(|sc| sc.closed_form(self.left_values(), self.right_values()))
    }
}

pub fn parse_scenario(name: &str) -> CliResult<Option<Scenario>> {
    match name.to_ascii_lowercase().as_str() {
        "custom" => Ok(None),
        _ => name.parse().map(Some).map_err(CliError::Validation),
    }
}

fn spectrum(values: Vec<f64>, side: &str) -> CliResult<EigenvalueSpectrum> {
    EigenvalueSpectrum::new(values).map_err(|e| CliError::Validation(format!("--{side}: {e}")))
}

fn check_len(values: &[f64], dim: usize, side: &str) -> CliResult<()> {
    if values.len() != dim {
        return Err(CliError::Validation(format!(
            "--{side} needs {dim} eigenvalues, got {}",
            values.len()
        )));
    }
    Ok(())
}

fn vector(pairs: &[[f64; 2]]) -> CliResult<ComplexVector> {
    Ok(ComplexVector::new(pairs.iter().map(|p| Complex::new(p[0], p[1])).collect())?)
}

pub fn build(
    scenario: &str,
    left: Option<Vec<f64>>,
    right: Option<Vec<f64>>,
    config: Option<&Path>,
) -> CliResult<Setup> {
    match parse_scenario(scenario)? {
        Some(sc) => {
            if config.is_some() {
                return Err(CliError::Validation("--config only applies to --scenario custom".into()));
            }
            let (dl, dr) = sc.default_spectra();
            let (l, r) = (left.unwrap_or(dl), right.unwrap_or(dr));
            check_len(&l, sc.local_dim(), "left")?;
            check_len(&r, sc.local_dim(), "right")?;
            let (a, b) = sc.contexts(&spectrum(l, "left")?, &spectrum(r, "right")?)?;
            Ok(Setup {
                name: sc.name().to_string(),
                named: Some(sc),
                state: sc.state(),
                left: a,
                right: b,
                forbidden: sc.forbidden_cells(),
            })
        }
        None => {
            let path = config
                .ok_or_else(|| CliError::Validation("--scenario custom requires --config <file>".into()))?;
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let cfg: CustomConfig = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            custom(cfg, left, right)
        }
    }
}

fn custom(cfg: CustomConfig, left: Option<Vec<f64>>, right: Option<Vec<f64>>) -> CliResult<Setup> {
    let d = cfg.left_basis.len();
    if cfg.right_basis.len() != d {
        return Err(CliError::Validation(format!(
            "left basis has {d} vectors but right basis has {}",
            cfg.right_basis.len()
        )));
    }
    let l = left.or(cfg.left).unwrap_or_else(|| (1..=d).map(|k| k as f64).collect());
    let r = right
        .or(cfg.right)
        .unwrap_or_else(|| (d + 1..=2 * d).map(|k| k as f64).collect());
    check_len(&l, d, "left")?;
    check_len(&r, d, "right")?;

    let basis = |vs: &[Vec<[f64; 2]>]| vs.iter().map(|v| vector(v)).collect::<CliResult<Vec<_>>>();
    let a = context_from_basis(basis(&cfg.left_basis)?, &spectrum(l, "left")?, "left")?;
    let b = context_from_basis(basis(&cfg.right_basis)?, &spectrum(r, "right")?, "right")?;

    let state = match (&cfg.state, d) {
        (Some(amps), _) => BipartiteState::new(d, vector(amps)?, "custom")?,
        (None, 3) => spin1_singlet(),
        (None, 4) => spin32_singlet(),
        (None, _) => {
            return Err(CliError::Validation(format!("no default state in dimension {d}; give \"state\"")))
        }
    };

    let forbidden: Vec<(usize, usize)> = cfg.forbidden.iter().map(|c| (c[0], c[1])).collect();
    if let Some(&(i, j)) = forbidden.iter().find(|&&(i, j)| i >= d || j >= d) {
        return Err(CliError::Validation(format!("forbidden cell ({i}, {j}) is outside a {d}x{d} table")));
    }
    Ok(Setup { name: "custom".into(), named: None, state, left: a, right: b, forbidden })
}
