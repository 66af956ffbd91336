use interlink_core::eigen::DEFAULT_MERGE_TOL;
use interlink_core::{
    kron, ks_context, spectral_projectors, spin1_operator, trace, Complex, ComplexMatrix, Direction,
    EigenvalueSpectrum,
};
use proptest::prelude::*;

fn arb_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n * n).prop_map(move |raw| {
        ComplexMatrix::from_entries(n, raw.into_iter().map(|(re, im)| Complex::new(re, im)).collect()).unwrap()
    })
}

#[test]
fn kron_matches_index_formula() {
    let a = ks_context(&EigenvalueSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap()).unwrap();
    let b = ks_context(&EigenvalueSpectrum::new(vec![4.0, 5.0, 6.0]).unwrap()).unwrap();
    let (a, b) = (a.matrix(), b.matrix());
    let k = kron(a, b);
    assert_eq!(k.dim(), 9);
    for ia in 0..3 {
        for ja in 0..3 {
            for ib in 0..3 {
                for jb in 0..3 {
                    let expected = a[(ia, ja)] * b[(ib, jb)];
                    assert_eq!(k[(ia * 3 + ib, ja * 3 + jb)], expected);
                }
            }
        }
    }
    // spot values from the hand-written factors [[2.5,0,-.5],[0,1,0],[-.5,0,2.5]] and
    // [[5.5,0,-.5],[0,4,0],[-.5,0,5.5]]
    assert!((k[(0, 0)] - Complex::new(13.75, 0.0)).norm() < 1e-12);
    assert!((k[(0, 8)] - Complex::new(0.25, 0.0)).norm() < 1e-12);
    assert!((k[(4, 4)] - Complex::new(4.0, 0.0)).norm() < 1e-12);
    assert!((k[(2, 6)] - Complex::new(0.25, 0.0)).norm() < 1e-12);
}

#[test]
fn spin1_is_traceless_and_squares_through_its_spectrum() {
    for k in 0..20 {
        let d = Direction::new(0.157 * k as f64, 0.611 * k as f64 + 0.2).unwrap();
        let j = spin1_operator(d);
        assert!(trace(&j).norm() < 1e-15);
        let sq = spectral_projectors(&j, DEFAULT_MERGE_TOL).unwrap().apply_function(|l| Complex::new(l * l, 0.0));
        assert!(sq.max_abs_diff(&j.matmul(&j)) < 1e-12);
    }
}

proptest! {
    #[test]
    fn kron_mixed_product(a in arb_matrix(3), b in arb_matrix(3), c in arb_matrix(3), d in arb_matrix(3)) {
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn kron_is_bilinear(a in arb_matrix(3), b in arb_matrix(3), c in arb_matrix(3), s in -2.0f64..2.0) {
        let scale = Complex::new(s, 0.5);
        let lhs = kron(&(&a + &b.scale(scale)), &c);
        let rhs = &kron(&a, &c) + &kron(&b, &c).scale(scale);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
        let lhs = kron(&c, &(&a + &b));
        let rhs = &kron(&c, &a) + &kron(&c, &b);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
    }

    #[test]
    fn trace_is_multiplicative(a in arb_matrix(3), b in arb_matrix(4)) {
        prop_assert!((trace(&kron(&a, &b)) - trace(&a) * trace(&b)).norm() <= 1e-10);
    }
}
