mod common;

use common::*;
use nlgames::correlations::is_local;
use nlgames::optimize::lp::{simplex_solve, LinearProgram, LpStatus};
use nlgames::optimize::{local_value, ns_value, qs_seesaw, top_deterministic};
use proptest::prelude::*;

/// Maximum of `c·x` over `A x <= b`, `0 <= x <= 1` by trying every vertex
/// (every choice of `n` tight constraints).
fn vertex_oracle(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> f64 {
    let n = c.len();
    let mut rows: Vec<(Vec<f64>, f64)> = a.iter().cloned().zip(b.iter().copied()).collect();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        rows.push((e.clone(), 1.0));
        rows.push((e.iter().map(|v| -v).collect(), 0.0));
    }
    let feasible = |x: &[f64]| {
        rows.iter()
            .all(|(r, rhs)| r.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() <= rhs + 1e-9)
    };
    let mut best = f64::NEG_INFINITY;
    let m = rows.len();
    let mut pick = vec![0usize; n];
    fn next(pick: &mut [usize], m: usize) -> bool {
        let n = pick.len();
        let mut i = n;
        while i > 0 {
            i -= 1;
            if pick[i] < m - (n - i) {
                pick[i] += 1;
                for j in i + 1..n {
                    pick[j] = pick[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    for (i, p) in pick.iter_mut().enumerate() {
        *p = i;
    }
    loop {
        // Gaussian elimination on the chosen rows.
        let mut mat: Vec<Vec<f64>> = pick
            .iter()
            .map(|&k| {
                let mut row = rows[k].0.clone();
                row.push(rows[k].1);
                row
            })
            .collect();
        let mut ok = true;
        for col in 0..n {
            let p = (col..n)
                .max_by(|&i, &j| mat[i][col].abs().total_cmp(&mat[j][col].abs()))
                .unwrap();
            if mat[p][col].abs() < 1e-12 {
                ok = false;
                break;
            }
            mat.swap(p, col);
            for i in 0..n {
                if i != col {
                    let f = mat[i][col] / mat[col][col];
                    for k in col..=n {
                        mat[i][k] -= f * mat[col][k];
                    }
                }
            }
        }
        if ok {
            let x: Vec<f64> = (0..n).map(|i| mat[i][n] / mat[i][i]).collect();
            if feasible(&x) {
                best = best.max(c.iter().zip(&x).map(|(p, q)| p * q).sum());
            }
        }
        if !next(&mut pick, m) {
            break;
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplex_matches_vertex_enumeration(
        n in 1usize..4,
        m in 0usize..4,
        data in proptest::collection::vec(-2.0f64..2.0, 32),
    ) {
        let c: Vec<f64> = data[..n].to_vec();
        let a: Vec<Vec<f64>> = (0..m).map(|i| data[4 + i * 4..4 + i * 4 + n].to_vec()).collect();
        let b: Vec<f64> = (0..m).map(|i| data[20 + i].abs() + 0.1).collect();
        let mut le = a.clone();
        let mut rhs = b.clone();
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            le.push(e);
            rhs.push(1.0);
        }
        let lp = LinearProgram::new(c.clone(), vec![], vec![], le, rhs).unwrap();
        let s = simplex_solve(&lp).unwrap();
        prop_assert_eq!(s.status, LpStatus::Optimal);
        let oracle = vertex_oracle(&c, &a, &b);
        prop_assert!((s.optimum - oracle).abs() < 1e-8, "simplex {} oracle {}", s.optimum, oracle);
        prop_assert!(s.primal_residual < 1e-9);
        prop_assert!(s.dual_infeasibility < 1e-9);
        prop_assert!((s.dual_bound - s.optimum).abs() < 1e-8);
    }

    #[test]
    fn local_value_matches_brute_force(nx in 1usize..4, ny in 1usize..4, na in 1usize..4, nb in 1usize..4, seed in any::<u64>()) {
        let g = random_game(nx, ny, na, nb, &mut rng(seed));
        let s = local_value(&g).unwrap();
        prop_assert!((s.value - brute_force_local(&g)).abs() < 1e-12);
        let p = nlgames::correlations::Correlation::deterministic(na, nb, &s.alice, &s.bob).unwrap();
        prop_assert!((g.payoff(&p).unwrap() - s.value).abs() < 1e-12);
        let top = top_deterministic(&g, 3).unwrap();
        prop_assert_eq!(top[0].value.to_bits(), s.value.to_bits());
    }

    #[test]
    fn value_ordering(seed in any::<u64>()) {
        let g = random_binary_game(&mut rng(seed));
        let loc = local_value(&g).unwrap().value;
        let ns = ns_value(&g).unwrap();
        let qs = qs_seesaw(&g, 2, 6, 100, seed).unwrap();
        prop_assert!(qs.objective >= loc - 1e-9);
        prop_assert!(ns.value >= qs.objective - 1e-9);
        prop_assert!(ns.value <= 1.0 + 1e-9);
        prop_assert!((ns.dual_bound - ns.value).abs() < 1e-8);
        prop_assert!((g.payoff(&ns.correlation).unwrap() - ns.value).abs() < 1e-9);
        if is_local(&ns.correlation, 1e-9).unwrap().local {
            prop_assert!((ns.value - loc).abs() < 1e-9);
        }
        prop_assert!(qs.history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }
}

#[test]
fn infeasible_program_reports_phase_one_residual() {
    let lp = LinearProgram::new(vec![1.0], vec![vec![1.0]], vec![-1.0], vec![], vec![]).unwrap();
    let s = simplex_solve(&lp).unwrap();
    assert_eq!(s.status, LpStatus::Infeasible);
    assert!(s.phase_one_residual > 0.5);
}
