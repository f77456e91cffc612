mod common;

use common::*;
use nlgames::correlations::{
    dump_correlation, from_local, from_qs, is_local, is_no_signalling, load_correlation, marginal_a, marginal_b,
    product_correlation, section, Correlation, ProductShape, QsStrategy,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quantum_correlations_do_not_signal(da in 1usize..4, db in 1usize..4, nx in 1usize..4, na in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = QsStrategy {
            alice: random_channel(da, nx, na, &mut r),
            bob: random_channel(db, 2, 2, &mut r),
            state: random_state(da * db, &mut r),
        };
        let p = s.correlation().unwrap();
        prop_assert!(is_no_signalling(&p, 1e-9).passes);
        let q = s.projective().unwrap().correlation().unwrap();
        prop_assert!(p.max_abs_diff(&q) <= 1e-9);
    }

    #[test]
    fn local_models_are_local(lambdas in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let raw: Vec<f64> = (0..lambdas).map(|_| rand::RngExt::random_range(&mut r, 0.1..1.0)).collect();
        let t: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|v| v / t).collect();
        let alice: Vec<_> = (0..lambdas).map(|_| random_stochastic(2, 2, &mut r)).collect();
        let bob: Vec<_> = (0..lambdas).map(|_| random_stochastic(2, 3, &mut r)).collect();
        let p = from_local(&w, &alice, &bob).unwrap();
        let q = from_qs(&diagonal_channel(&alice), &diagonal_channel(&bob), &correlated_state(&w)).unwrap();
        prop_assert!(p.max_abs_diff(&q) <= 1e-12);
        let rep = is_local(&p, 1e-9).unwrap();
        prop_assert!(rep.local);
        let rebuilt = rep.decomposition.iter().fold(vec![0.0; p.as_slice().len()], |mut acc, (f, g, w)| {
            let d = Correlation::deterministic(2, 3, f, g).unwrap();
            for (a, v) in acc.iter_mut().zip(d.as_slice()) {
                *a += w * v;
            }
            acc
        });
        let gap = rebuilt.iter().zip(p.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(gap <= 1e-9);
    }

    #[test]
    fn products_and_sections(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p1 = from_local(&[1.0], &[random_stochastic(2, 2, &mut r)], &[random_stochastic(2, 3, &mut r)]).unwrap();
        let p2 = QsStrategy {
            alice: random_channel(2, 3, 2, &mut r),
            bob: random_channel(2, 2, 2, &mut r),
            state: random_state(4, &mut r),
        }
        .correlation()
        .unwrap();
        let p = product_correlation(&p1, &p2);
        prop_assert!(is_no_signalling(&p, 1e-9).passes);
        let shape = ProductShape { x: (2, 3), y: (2, 2), a: (2, 2), b: (3, 2) };
        for x2 in 0..3 {
            for y2 in 0..2 {
                prop_assert!(section(&p, shape, x2, y2).unwrap().max_abs_diff(&p1) <= 1e-12);
            }
        }
        let ma = marginal_a(&p1).unwrap();
        let mb = marginal_b(&p1).unwrap();
        prop_assert_eq!(ma.len(), 2);
        prop_assert_eq!(mb[0].len(), 3);
    }

    #[test]
    fn dump_round_trips_exactly(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = QsStrategy {
            alice: random_channel(2, 2, 3, &mut r),
            bob: random_channel(2, 2, 2, &mut r),
            state: random_state(4, &mut r),
        }
        .correlation()
        .unwrap();
        prop_assert_eq!(load_correlation(&dump_correlation(&p)).unwrap(), p);
    }
}

#[test]
fn pr_box_is_nonlocal_but_no_signalling() {
    let pr = Correlation::pr_box();
    assert!(is_no_signalling(&pr, 0.0).passes);
    assert!(!is_local(&pr, 1e-9).unwrap().local);
}
