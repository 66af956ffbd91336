use std::fs;
use std::path::Path;

use interlink_core::correlations::{shared_ray_slot, DEFAULT_SUPPORT_TOL};
use interlink_core::greechie::DEFAULT_RAY_TOL;
use interlink_core::sampler::sample_batched;
use interlink_core::{
    contextuality_criterion, density, diagram_from_contexts, empirical_report, expectation, is_separating,
    joint_distribution, link_atoms, marginals, sequential_link_test, two_valued_states, verify_uniqueness,
    ComplexVector, GreechieDiagram, JointTable,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::setup::Setup;

/// Largest disagreement tolerated between two routes to the same number.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// A finished command: the document to write, plus the first failed
/// consistency check, if any. The document is written either way.
pub struct Outcome {
    pub doc: Value,
    pub failure: Option<String>,
}

impl Outcome {
    fn new(doc: Value, failures: Vec<String>) -> Self {
        Outcome { doc, failure: failures.into_iter().next() }
    }
}

fn header(command: &str, s: &Setup) -> Value {
    json!({
        "command": command,
        "scenario": s.name,
        "state": s.state.label(),
        "left_context": s.left.label(),
        "right_context": s.right.label(),
        "left_spectrum": s.left_values(),
        "right_spectrum": s.right_values(),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn ray_json(v: &ComplexVector) -> Value {
    json!(v.entries().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

fn table(s: &Setup) -> CliResult<JointTable> {
    Ok(joint_distribution(&s.state, &s.left, &s.right)?)
}

pub fn expectation_cmd(s: &Setup) -> CliResult<Outcome> {
    let value = expectation(&density(&s.state), &s.left, &s.right)?;
    let contraction = table(s)?.contracted_expectation();
    let closed = s.closed_form();

    let mut failures = Vec::new();
    if (contraction - value).abs() > CONSISTENCY_TOL {
        failures.push(format!("trace {value} and table contraction {contraction} disagree"));
    }
    if let Some(c) = closed.filter(|c| (c - value).abs() > CONSISTENCY_TOL) {
        failures.push(format!("numeric expectation {value} differs from closed form {c}"));
    }
    let doc = merge(
        header("expectation", s),
        json!({
            "expectation": value,
            "table_contraction": contraction,
            "closed_form": closed,
        }),
    );
    Ok(Outcome::new(doc, failures))
}

pub fn joint_cmd(s: &Setup, tol: Option<f64>) -> CliResult<Outcome> {
    let tol = tol.unwrap_or(DEFAULT_SUPPORT_TOL);
    let t = table(s)?;
    let (left_marginal, right_marginal) = marginals(&t);
    let uniqueness = verify_uniqueness(&t, tol);
    let criterion = contextuality_criterion(&t, &s.forbidden)?;

    let mut failures = Vec::new();
    if (t.total() - 1.0).abs() > CONSISTENCY_TOL {
        failures.push(format!("table sums to {}", t.total()));
    }
    if s.named.is_some() && criterion.contextual_mass > tol {
        failures.push(format!("forbidden cells carry probability {}", criterion.contextual_mass));
    }
    let doc = merge(
        header("joint", s),
        json!({
            "support_tol": tol,
            "table": t,
            "total": t.total(),
            "marginals": { "left": left_marginal, "right": right_marginal },
            "uniqueness": uniqueness,
            "criterion": criterion,
        }),
    );
    Ok(Outcome::new(doc, failures))
}

pub struct SampleArgs<'a> {
    pub seed: u64,
    pub shots: u64,
    pub batches: u64,
    pub csv: Option<&'a Path>,
}

pub fn sample_cmd(s: &Setup, args: &SampleArgs) -> CliResult<Outcome> {
    if args.batches == 0 {
        return Err(CliError::Validation("--batches must be at least 1".into()));
    }
    let t = table(s)?;
    let records = sample_batched(&t, args.shots, args.seed, args.batches);
    let report = empirical_report(&records, &t, args.seed)?;

    if let Some(path) = args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write_err = |e: csv::Error| CliError::io(path, e);
        w.write_record(["shot", "left_slot", "left_eigenvalue", "right_slot", "right_eigenvalue"])
            .map_err(write_err)?;
        for r in &records {
            w.write_record([
                r.shot.to_string(),
                r.left_slot.to_string(),
                t.left_labels[r.left_slot].eigenvalue.to_string(),
                r.right_slot.to_string(),
                t.right_labels[r.right_slot].eigenvalue.to_string(),
            ])
            .map_err(write_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::io(path, e))?;
        fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
    }

    let forbidden: Vec<Value> = s
        .forbidden
        .iter()
        .map(|&(i, j)| json!({ "left": i, "right": j, "probability": t.get(i, j), "count": report.counts[i][j] }))
        .collect();
    let drawn: u64 = s.forbidden.iter().map(|&(i, j)| report.counts[i][j]).sum();
    let mut failures = Vec::new();
    if s.named.is_some() && drawn > 0 {
        failures.push(format!("{drawn} shots landed on forbidden cells"));
    }
    let doc = merge(
        header("sample", s),
        json!({
            "seed": args.seed,
            "shots": args.shots,
            "batches": args.batches,
            "exact": t.probabilities,
            "counts": report.counts,
            "frequencies": report.frequencies,
            "max_abs_deviation": report.max_abs_deviation,
            "forbidden": forbidden,
        }),
    );
    Ok(Outcome::new(doc, failures))
}

pub fn states_cmd(s: Option<&Setup>, diagram: Option<&Path>, tol: Option<f64>) -> CliResult<Outcome> {
    let (source, g) = match (diagram, s) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            ("diagram".to_string(), GreechieDiagram::from_json(&text)?)
        }
        (None, Some(s)) => {
            let g = diagram_from_contexts(&[s.left.clone(), s.right.clone()], tol.unwrap_or(DEFAULT_RAY_TOL))?;
            (s.name.clone(), g)
        }
        (None, None) => return Err(CliError::Validation("states needs a scenario or --diagram".into())),
    };
    let states = two_valued_states(&g);
    let sep = is_separating(&states, &g);

    let mut failures = Vec::new();
    if let Some(bad) = states.iter().position(|st| !st.is_valid_for(&g)) {
        failures.push(format!("enumerated state {bad} violates a block"));
    }
    let ids = |atoms: &[usize]| atoms.iter().map(|&k| g.atom_id(k).to_string()).collect::<Vec<_>>();
    let doc = json!({
        "command": "states",
        "source": source,
        "atoms": g.to_document().atoms,
        "blocks": g.block_ids(),
        "link_atoms": ids(&link_atoms(&g)),
        "warnings": g.warnings(),
        "state_count": states.len(),
        "states": states.iter().map(|st| ids(&st.true_atoms())).collect::<Vec<_>>(),
        "separating": sep.separating,
        "witness": sep.witness.map(|(x, y)| [g.atom_id(x), g.atom_id(y)]),
    });
    Ok(Outcome::new(doc, failures))
}

pub fn sequential_cmd(s: &Setup, prepare: usize, tol: Option<f64>) -> CliResult<Outcome> {
    let basis = s.left.basis();
    let Some(ray) = basis.get(prepare) else {
        return Err(CliError::Validation(format!(
            "--prepare {prepare} is not a slot of {} (0..{})",
            s.left.label(),
            basis.len()
        )));
    };
    let outcomes = sequential_link_test(ray, &s.right)?;
    let link_slot = shared_ray_slot(ray, &s.right, tol.unwrap_or(DEFAULT_RAY_TOL));
    let perfect = link_slot.is_some_and(|k| outcomes[k].probability >= 1.0 - CONSISTENCY_TOL);

    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    let mut failures = Vec::new();
    if (total - 1.0).abs() > CONSISTENCY_TOL {
        failures.push(format!("outcome probabilities sum to {total}"));
    }
    let doc = json!({
        "command": "sequential",
        "scenario": s.name,
        "prepared": {
            "context": s.left.label(),
            "slot": prepare,
            "eigenvalue": s.left_values()[prepare],
            "ray": ray_json(ray),
        },
        "measured": { "context": s.right.label(), "spectrum": s.right_values() },
        "outcomes": outcomes,
        "link_slot": link_slot,
        "perfect_link": perfect,
    });
    Ok(Outcome::new(doc, failures))
}
