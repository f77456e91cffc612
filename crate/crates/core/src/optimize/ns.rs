//! No-signalling value as a linear program over the NS polytope.

use crate::correlations::Correlation;
use crate::error::Result;
use crate::games::FiniteGame;
use crate::optimize::lp::{simplex_solve, LinearProgram};

/// Largest number of equality rows handed to the dense simplex.
pub const ROW_CAP: f64 = 4096.0;

#[derive(Clone, Debug)]
pub struct NsSolution {
    pub value: f64,
    pub correlation: Correlation,
    /// Upper bound from the dual multipliers.
    pub dual_bound: f64,
    pub dual_infeasibility: f64,
    pub primal_residual: f64,
    pub pivots: usize,
}

/// Equality rows of the program: normalisation of every `(x, y)` block plus
/// the non-redundant no-signalling constraints.
pub fn lp_rows(g: &FiniteGame) -> usize {
    let (nx, ny, na, nb) = g.shape();
    nx * ny + nx * (na - 1) * (ny - 1) + ny * (nb - 1) * (nx - 1)
}

/// Maximises the payoff over no-signalling correlations. Alice's marginal
/// for each `y > 0` is tied to `y = 0` for all but the last answer (implied
/// by normalisation); likewise for Bob.
pub fn ns_value(g: &FiniteGame) -> Result<NsSolution> {
    let (nx, ny, na, nb) = g.shape();
    let nvars = nx * ny * na * nb;
    let var = |x: usize, y: usize, a: usize, b: usize| ((x * ny + y) * na + a) * nb + b;
    let mut objective = vec![0.0; nvars];
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nvars];
    for x in 0..nx {
        for y in 0..ny {
            for a in 0..na {
                for b in 0..nb {
                    let j = var(x, y, a, b);
                    if g.wins(x, y, a, b) {
                        objective[j] = g.prob(x, y);
                    }
                    cols[j].push((x * ny + y, 1.0));
                }
            }
        }
    }
    let mut row = nx * ny;
    for x in 0..nx {
        for a in 0..na - 1 {
            for y in 1..ny {
                for b in 0..nb {
                    cols[var(x, y, a, b)].push((row, 1.0));
                    cols[var(x, 0, a, b)].push((row, -1.0));
                }
                row += 1;
            }
        }
    }
    for y in 0..ny {
        for b in 0..nb - 1 {
            for x in 1..nx {
                for a in 0..na {
                    cols[var(x, y, a, b)].push((row, 1.0));
                    cols[var(0, y, a, b)].push((row, -1.0));
                }
                row += 1;
            }
        }
    }
    debug_assert_eq!(row, lp_rows(g));
    let mut rhs = vec![0.0; row];
    rhs[..nx * ny].fill(1.0);
    let lp = LinearProgram::from_columns(objective, cols, rhs, vec![Vec::new(); nvars], Vec::new())?;
    let sol = simplex_solve(&lp)?.into_optimal()?;
    let correlation = Correlation::new(nx, ny, na, nb, sol.x.iter().map(|v| v.max(0.0)).collect())?;
    Ok(NsSolution {
        value: sol.optimum,
        correlation,
        dual_bound: sol.dual_bound,
        dual_infeasibility: sol.dual_infeasibility,
        primal_residual: sol.primal_residual,
        pivots: sol.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::is_no_signalling;

    #[test]
    fn chsh_ns_value_is_one() {
        let s = ns_value(&FiniteGame::chsh()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
        assert!((s.dual_bound - 1.0).abs() < 1e-9);
        assert!(is_no_signalling(&s.correlation, 1e-9).passes);
        assert!((FiniteGame::chsh().payoff(&s.correlation).unwrap() - s.value).abs() < 1e-9);
    }

    #[test]
    fn trivial_games() {
        assert!((ns_value(&FiniteGame::all_win(2, 3, 2, 2)).unwrap().value - 1.0).abs() < 1e-12);
        assert!(ns_value(&FiniteGame::never_win(2, 3, 2, 2)).unwrap().value.abs() < 1e-12);
    }
}
