//! Joint tables checked against a direct amplitude contraction
//! `P[i][j] = |Σ_ab conj(u_i[a]) conj(v_j[b]) s[a·d + b]|²`, which never builds
//! a projector or a Kronecker product.

use interlink_core::correlations::{contextuality_criterion, marginals, DEFAULT_SUPPORT_TOL};
use interlink_core::{
    density, expectation, joint_distribution, verify_uniqueness, BipartiteState, Complex, ContextOperator, EigenvalueSpectrum,
    JointTable, Scenario, UniquenessStatus,
};
use proptest::prelude::*;

fn spec(v: &[f64]) -> EigenvalueSpectrum {
    EigenvalueSpectrum::new(v.to_vec()).unwrap()
}

fn contracted(s: &BipartiteState, a: &ContextOperator, b: &ContextOperator) -> Vec<Vec<f64>> {
    let d = s.local_dim();
    a.basis()
        .iter()
        .map(|u| {
            b.basis()
                .iter()
                .map(|v| {
                    let mut amp = Complex::new(0.0, 0.0);
                    for x in 0..d {
                        for y in 0..d {
                            amp += u[x].conj() * v[y].conj() * s.amplitude(x, y);
                        }
                    }
                    amp.norm_sqr()
                })
                .collect()
        })
        .collect()
}

fn table_for(sc: Scenario, l: &[f64], r: &[f64]) -> (JointTable, Vec<Vec<f64>>) {
    let (a, b) = sc.contexts(&spec(l), &spec(r)).unwrap();
    let s = sc.state();
    (joint_distribution(&s, &a, &b).unwrap(), contracted(&s, &a, &b))
}

fn assert_table(got: &JointTable, want: &[[f64; 4]], n: usize) {
    for i in 0..n {
        for j in 0..n {
            assert!((got.get(i, j) - want[i][j]).abs() <= 1e-12, "({i},{j}): {} vs {}", got.get(i, j), want[i][j]);
        }
    }
}

const T: f64 = 1.0 / 3.0;
const S: f64 = 1.0 / 6.0;
const Q: f64 = 0.25;
const E: f64 = 0.125;

#[test]
fn frozen_tables() {
    let cases: [(Scenario, [[f64; 4]; 4]); 5] = [
        (Scenario::KsCollinear, [[T, 0.0, 0.0, 0.0], [0.0, T, 0.0, 0.0], [0.0, 0.0, T, 0.0], [0.0; 4]]),
        (Scenario::KsMixed, [[T, 0.0, 0.0, 0.0], [0.0, S, S, 0.0], [0.0, S, S, 0.0], [0.0; 4]]),
        (Scenario::Dim4CollinearC, [[0.0, 0.0, 0.0, Q], [0.0, 0.0, Q, 0.0], [0.0, Q, 0.0, 0.0], [Q, 0.0, 0.0, 0.0]]),
        (Scenario::Dim4CollinearCprime, [[0.0, 0.0, E, E], [0.0, 0.0, E, E], [E, E, 0.0, 0.0], [E, E, 0.0, 0.0]]),
        (Scenario::Dim4Mixed, [[0.0, 0.0, 0.0, Q], [0.0, 0.0, Q, 0.0], [E, E, 0.0, 0.0], [E, E, 0.0, 0.0]]),
    ];
    for (sc, want) in cases {
        let (l, r) = sc.default_spectra();
        let (t, oracle) = table_for(sc, &l, &r);
        assert_table(&t, &want, sc.local_dim());
        for (row, orow) in t.probabilities.iter().zip(&oracle) {
            for (p, o) in row.iter().zip(orow) {
                assert!((p - o).abs() <= 1e-12, "{sc}");
            }
        }
    }
}

#[test]
fn uniform_marginals() {
    for sc in Scenario::ALL {
        let (l, r) = sc.default_spectra();
        let (t, _) = table_for(sc, &l, &r);
        let want = 1.0 / sc.local_dim() as f64;
        let (left, right) = marginals(&t);
        assert!(left.iter().chain(&right).all(|m| (m - want).abs() <= 1e-12), "{sc}");
    }
}

#[test]
fn contextuality_criterion_on_mixed_tables() {
    for sc in [Scenario::KsMixed, Scenario::Dim4Mixed] {
        let (l, r) = sc.default_spectra();
        let (t, _) = table_for(sc, &l, &r);
        let report = contextuality_criterion(&t, &sc.forbidden_cells()).unwrap();
        assert_eq!(report.forbidden_cells.len(), 4);
        assert!(report.contextual_mass <= 1e-12);
    }
}

#[test]
fn mixed_tables_are_not_unique() {
    let (l, r) = Scenario::KsMixed.default_spectra();
    let (t, _) = table_for(Scenario::KsMixed, &l, &r);
    let report = verify_uniqueness(&t, DEFAULT_SUPPORT_TOL);
    assert!(!report.is_unique);
    assert_eq!(report.status, UniquenessStatus::Block);
    // the best bijection keeps α↔δ and one of the 1/6 cells in each remaining row
    assert!((report.violation_mass - 1.0 / 3.0).abs() <= 1e-12);
}

fn distinct_spectrum(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0f64..10.0, n)
        .prop_filter("distinct", |v| EigenvalueSpectrum::new(v.clone()).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn three_dim_contractions_agree(l in distinct_spectrum(3), r in distinct_spectrum(3)) {
        for sc in [Scenario::KsCollinear, Scenario::KsMixed] {
            let (t, oracle) = table_for(sc, &l, &r);
            let (a, b) = sc.contexts(&spec(&l), &spec(&r)).unwrap();
            let direct = expectation(&density(&sc.state()), &a, &b).unwrap();
            prop_assert!((t.contracted_expectation() - direct).abs() <= 1e-9);
            prop_assert!((direct - sc.closed_form(&l, &r)).abs() <= 1e-9);
            for (row, orow) in t.probabilities.iter().zip(&oracle) {
                for (p, o) in row.iter().zip(orow) {
                    prop_assert!((p - o).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn four_dim_contractions_agree(l in distinct_spectrum(4), r in distinct_spectrum(4)) {
        for sc in [Scenario::Dim4CollinearC, Scenario::Dim4CollinearCprime, Scenario::Dim4Mixed] {
            let (t, _) = table_for(sc, &l, &r);
            let (a, b) = sc.contexts(&spec(&l), &spec(&r)).unwrap();
            let direct = expectation(&density(&sc.state()), &a, &b).unwrap();
            prop_assert!((t.contracted_expectation() - direct).abs() <= 1e-9);
            prop_assert!((direct - sc.closed_form(&l, &r)).abs() <= 1e-9);
            for &(i, j) in &sc.forbidden_cells() {
                prop_assert!(t.get(i, j) <= 1e-12);
            }
        }
    }
}
