//! Correlations from local, quantum spatial and quantum commuting models,
//! checked against the no-signalling and locality tests.

use nlgames::channels::{FiniteChannel, Povm};
use nlgames::correlations::{from_local, from_qc, from_qs, is_local, is_no_signalling, Correlation};
use nlgames::linalg::{kron, ComplexMatrix, C64};

fn main() -> nlgames::Result<()> {
    let local = from_local(
        &[0.5, 0.5],
        &[
            vec![vec![1.0, 0.0], vec![0.3, 0.7]],
            vec![vec![0.0, 1.0], vec![0.5, 0.5]],
        ],
        &[
            vec![vec![0.2, 0.8], vec![1.0, 0.0]],
            vec![vec![0.6, 0.4], vec![0.0, 1.0]],
        ],
    )?;
    println!(
        "local model:   ns {}  local {}",
        is_no_signalling(&local, 1e-9).passes,
        is_local(&local, 1e-9)?.local
    );

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rot = |t: f64| ComplexMatrix::from_real(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]).unwrap();
    let alice = FiniteChannel::new(vec![
        Povm::rotated_basis(&rot(0.0)),
        Povm::rotated_basis(&rot(std::f64::consts::FRAC_PI_4)),
    ])?;
    let bob = FiniteChannel::new(vec![
        Povm::rotated_basis(&rot(std::f64::consts::FRAC_PI_8)),
        Povm::rotated_basis(&rot(-std::f64::consts::FRAC_PI_8)),
    ])?;
    let phi = [
        C64::new(s, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
    ];
    let qs = from_qs(&alice, &bob, &phi)?;
    println!(
        "tsirelson:     ns {}  local {}",
        is_no_signalling(&qs, 1e-9).passes,
        is_local(&qs, 1e-9)?.local
    );

    // The same strategy with both parties acting on one space.
    let id = ComplexMatrix::identity(2);
    let lift = |ch: &FiniteChannel, left: bool| {
        let povms = ch
            .povms()
            .iter()
            .map(|p| {
                let effects = p
                    .effects()
                    .iter()
                    .map(|e| {
                        let m = if left {
                            kron(e.matrix(), &id)
                        } else {
                            kron(&id, e.matrix())
                        };
                        nlgames::linalg::HermitianOperator::new(m).unwrap()
                    })
                    .collect();
                Povm::new(effects).unwrap()
            })
            .collect();
        FiniteChannel::new(povms).unwrap()
    };
    let qc = from_qc(&lift(&alice, true), &lift(&bob, false), &phi)?;
    println!("qc embedding agrees with qs to {:.2e}", qc.max_abs_diff(&qs));

    let pr = Correlation::pr_box();
    let rep = is_local(&pr, 1e-9)?;
    println!(
        "PR box:        ns {}  local {}  (gap {:.3})",
        is_no_signalling(&pr, 1e-9).passes,
        rep.local,
        rep.max_infeasibility
    );
    Ok(())
}
