use proptest::prelude::*;

use symseq_core::opnorm::norm_1_to_e;
use symseq_core::schur::{gamma2_norm, GAMMA2_BUDGET};
use symseq_core::seqspace::{kothe_dual_norm, norm};
use symseq_core::triangle::triangle_project;
use symseq_core::{Mat, OrliczFn, SpaceSpec, WeightSeq};

const DIM: usize = 8;

fn space() -> impl Strategy<Value = SpaceSpec> {
    prop_oneof![
        (1.0f64..6.0).prop_map(|p| SpaceSpec::lp(p).unwrap()),
        Just(SpaceSpec::linf()),
        (1.0f64..4.0).prop_map(|k| {
            SpaceSpec::orlicz_lorentz(
                OrliczFn::power(k).unwrap(),
                WeightSeq::harmonic(DIM).unwrap(),
            )
            .unwrap()
        }),
    ]
}

fn vec_pair(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(-10.0f64..10.0, n),
        prop::collection::vec(-10.0f64..10.0, n),
    )
}

fn vectors() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=DIM).prop_flat_map(vec_pair)
}

fn matrix(max: usize) -> impl Strategy<Value = Mat> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| {
        prop::collection::vec(-5.0f64..5.0, m * n).prop_map(move |d| Mat::new(m, n, d).unwrap())
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_axioms(s in space(), (x, y) in vectors(), t in -4.0f64..4.0, shift in 0usize..DIM) {
        let nx = norm(&s, &x).unwrap();
        let ny = norm(&s, &y).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| t * v).collect();
        prop_assert!(close(norm(&s, &scaled).unwrap(), t.abs() * nx, 1e-9));
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert!(norm(&s, &sum).unwrap() <= (nx + ny) * (1.0 + 1e-9) + 1e-12);
        let mut rotated = x.clone();
        rotated.rotate_left(shift % x.len());
        prop_assert!(close(norm(&s, &rotated).unwrap(), nx, 1e-12));
    }

    #[test]
    fn holder_inequality(p in 1.0f64..6.0, (x, y) in vectors()) {
        let s = SpaceSpec::lp(p).unwrap();
        let dual = kothe_dual_norm(&s, &y).unwrap();
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        prop_assert!(dot.abs() <= norm(&s, &x).unwrap() * dual.upper * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn triangle_projection_is_idempotent_and_contractive(a in matrix(6), k in 1usize..=6) {
        let k = k.min(a.rows().min(a.cols()));
        let once = triangle_project(&a, k).unwrap();
        prop_assert_eq!(&triangle_project(&once, k).unwrap(), &once);
        prop_assert!(once.max_abs() <= a.max_abs());
        for (p, q) in once.data().iter().zip(a.data()) {
            prop_assert!(*p == 0.0 || p == q);
        }
    }

    #[test]
    fn one_to_e_is_monotone_on_nonnegative(a in matrix(5), bump in 0.0f64..3.0, p in 1.0f64..5.0) {
        let a = Mat::new(a.rows(), a.cols(), a.data().iter().map(|v| v.abs()).collect()).unwrap();
        let b = Mat::new(a.rows(), a.cols(), a.data().iter().map(|v| v + bump).collect()).unwrap();
        let e = SpaceSpec::lp(p).unwrap();
        prop_assert!(norm_1_to_e(&a, &e).unwrap() <= norm_1_to_e(&b, &e).unwrap() * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gamma2_is_transpose_invariant(a in matrix(6)) {
        let r = gamma2_norm(&a, GAMMA2_BUDGET).unwrap().bounds;
        let t = gamma2_norm(&a.transpose(), GAMMA2_BUDGET).unwrap().bounds;
        prop_assert!(r.lower <= t.upper * (1.0 + 1e-9) && t.lower <= r.upper * (1.0 + 1e-9));
    }
}
