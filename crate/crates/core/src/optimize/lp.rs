//! Revised simplex method with an explicit dense basis inverse.
//!
//! Problems are stated as
//!
//! ```text
//! maximize    c^T x
//! subject to  A_eq x  = b_eq
//!             A_le x <= b_le
//!             x >= 0
//! ```
//!
//! Inequalities receive slack columns, rows are sign-normalised so the
//! right-hand side is non-negative, and an artificial basis starts Phase I.
//! The entering column has the largest reduced cost; after a run of
//! degenerate pivots both choices switch to Bland's lowest-index rule until
//! the objective moves again, which rules out cycling on the heavily
//! degenerate polytopes that game LPs produce. The inverse is rebuilt every
//! `max(64, m)` pivots.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;
const BLAND_AFTER: usize = 50;
const MAX_PIVOTS: usize = 1_000_000;

/// Sparse column: `(row, value)` pairs.
type Column = Vec<(usize, f64)>;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    eq_cols: Vec<Column>,
    eq_rhs: Vec<f64>,
    le_cols: Vec<Column>,
    le_rhs: Vec<f64>,
}

fn rows_to_columns(rows: &[Vec<f64>], num_vars: usize) -> Result<Vec<Column>> {
    let mut cols = vec![Vec::new(); num_vars];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != num_vars {
            return Err(Error::Shape(format!(
                "constraint row {i} has {} coefficients, expected {num_vars}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 {
                cols[j].push((i, v));
            }
        }
    }
    Ok(cols)
}

fn check_finite(values: impl IntoIterator<Item = f64>) -> Result<()> {
    if values.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(Error::Invariant {
            invariant: "finite LP data",
            residual: f64::INFINITY,
        })
    }
}

impl LinearProgram {
    /// Builds a program from dense constraint rows.
    pub fn new(
        objective: Vec<f64>,
        eq_rows: Vec<Vec<f64>>,
        eq_rhs: Vec<f64>,
        le_rows: Vec<Vec<f64>>,
        le_rhs: Vec<f64>,
    ) -> Result<Self> {
        let n = objective.len();
        let eq_cols = rows_to_columns(&eq_rows, n)?;
        let le_cols = rows_to_columns(&le_rows, n)?;
        Self::from_columns(objective, eq_cols, eq_rhs, le_cols, le_rhs)
    }

    /// Builds a program from sparse columns, one `Vec<(row, value)>` per
    /// variable for each constraint block.
    pub fn from_columns(
        objective: Vec<f64>,
        eq_cols: Vec<Column>,
        eq_rhs: Vec<f64>,
        le_cols: Vec<Column>,
        le_rhs: Vec<f64>,
    ) -> Result<Self> {
        let n = objective.len();
        if eq_cols.len() != n || le_cols.len() != n {
            return Err(Error::Shape("one column per variable is required".into()));
        }
        for (cols, rhs) in [(&eq_cols, &eq_rhs), (&le_cols, &le_rhs)] {
            if let Some(&(r, _)) = cols.iter().flatten().find(|(r, _)| *r >= rhs.len()) {
                return Err(Error::Shape(format!("row index {r} exceeds {} rows", rhs.len())));
            }
        }
        check_finite(objective.iter().copied())?;
        check_finite(eq_rhs.iter().chain(&le_rhs).copied())?;
        check_finite(eq_cols.iter().chain(&le_cols).flatten().map(|&(_, v)| v))?;
        Ok(Self {
            num_vars: n,
            objective,
            eq_cols,
            eq_rhs,
            le_cols,
            le_rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_eq(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn num_le(&self) -> usize {
        self.le_rhs.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// Largest violation of `x >= 0`, the equalities and the inequalities.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let mut eq = vec![0.0; self.num_eq()];
        let mut le = vec![0.0; self.num_le()];
        let mut worst: f64 = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            worst = worst.max(-xj);
            for &(r, v) in &self.eq_cols[j] {
                eq[r] += v * xj;
            }
            for &(r, v) in &self.le_cols[j] {
                le[r] += v * xj;
            }
        }
        for (lhs, rhs) in eq.iter().zip(&self.eq_rhs) {
            worst = worst.max((lhs - rhs).abs());
        }
        for (lhs, rhs) in le.iter().zip(&self.le_rhs) {
            worst = worst.max(lhs - rhs);
        }
        worst
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, x)| c * x).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub optimum: f64,
    /// Values of the original variables.
    pub x: Vec<f64>,
    /// Dual multipliers, equality rows first then inequality rows.
    pub duals: Vec<f64>,
    /// `b^T y`; an upper bound on the optimum whenever `dual_infeasibility`
    /// is within tolerance.
    pub dual_bound: f64,
    /// Largest positive reduced cost `c_j - y^T A_j` over all columns,
    /// including slacks (zero when the duals are feasible).
    pub dual_infeasibility: f64,
    pub primal_residual: f64,
    /// Phase-I objective at termination (sum of artificial values).
    pub phase_one_residual: f64,
    pub pivots: usize,
}

impl LpSolution {
    pub fn into_optimal(self) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::Infeasible {
                residual: self.phase_one_residual,
            }),
            LpStatus::Unbounded => Err(Error::NumericFailure {
                what: "linear program is unbounded",
                residual: f64::INFINITY,
            }),
        }
    }
}

struct Tableau {
    m: usize,
    /// Structural + slack columns in the sign-normalised system.
    cols: Vec<Column>,
    n_struct: usize,
    n_real: usize,
    rhs: Vec<f64>,
    row_sign: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    pivots: usize,
    since_refactor: usize,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Self {
        let m_eq = lp.num_eq();
        let m = m_eq + lp.num_le();
        let n_struct = lp.num_vars;
        let mut cols: Vec<Column> = (0..n_struct)
            .map(|j| {
                let mut c = lp.eq_cols[j].clone();
                c.extend(lp.le_cols[j].iter().map(|&(r, v)| (r + m_eq, v)));
                c
            })
            .collect();
        for i in 0..lp.num_le() {
            cols.push(vec![(m_eq + i, 1.0)]);
        }
        let mut rhs: Vec<f64> = lp.eq_rhs.iter().chain(&lp.le_rhs).copied().collect();
        let row_sign: Vec<f64> = rhs.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect();
        for col in &mut cols {
            for (r, v) in col.iter_mut() {
                *v *= row_sign[*r];
            }
        }
        for (b, s) in rhs.iter_mut().zip(&row_sign) {
            *b *= s;
        }
        let n_real = cols.len();
        // Artificial identity columns occupy indices n_real..n_real+m.
        for i in 0..m {
            cols.push(vec![(i, 1.0)]);
        }
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let basis: Vec<usize> = (n_real..n_real + m).collect();
        let mut is_basic = vec![false; n_real + m];
        for &b in &basis {
            is_basic[b] = true;
        }
        Self {
            m,
            cols,
            n_struct,
            n_real,
            xb: rhs.clone(),
            rhs,
            row_sign,
            basis,
            is_basic,
            binv,
            pivots: 0,
            since_refactor: 0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n_real
    }

    /// `B^{-1} A_j`.
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        for &(r, v) in &self.cols[j] {
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.binv[i * m + r] * v;
            }
        }
        out
    }

    /// `c_B^T B^{-1}`.
    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = cost[bv];
            if cb == 0.0 {
                continue;
            }
            let row = &self.binv[i * m..(i + 1) * m];
            for (yk, &bik) in y.iter_mut().zip(row) {
                *yk += cb * bik;
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, cost: &[f64], y: &[f64]) -> f64 {
        cost[j] - self.cols[j].iter().map(|&(r, v)| y[r] * v).sum::<f64>()
    }

    fn pivot(&mut self, leave_row: usize, enter: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[leave_row];
        let theta = self.xb[leave_row] / piv;
        for i in 0..m {
            if i == leave_row {
                continue;
            }
            self.xb[i] -= theta * alpha[i];
            if self.xb[i] < 0.0 && self.xb[i] > -FEAS_TOL {
                self.xb[i] = 0.0;
            }
        }
        self.xb[leave_row] = theta;
        let (before, rest) = self.binv.split_at_mut(leave_row * m);
        let (prow, after) = rest.split_at_mut(m);
        for v in prow.iter_mut() {
            *v /= piv;
        }
        for (i, row) in before.chunks_mut(m).chain(after.chunks_mut(m)).enumerate() {
            let i = if i < leave_row { i } else { i + 1 };
            let f = alpha[i];
            if f == 0.0 {
                continue;
            }
            for (v, p) in row.iter_mut().zip(prow.iter()) {
                *v -= f * p;
            }
        }
        self.is_basic[self.basis[leave_row]] = false;
        self.basis[leave_row] = enter;
        self.is_basic[enter] = true;
        self.pivots += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY.max(m) {
            self.refactor();
        }
    }

    /// Recomputes `B^{-1}` and `x_B` from scratch by Gauss-Jordan
    /// elimination with partial pivoting.
    fn refactor(&mut self) {
        let m = self.m;
        self.since_refactor = 0;
        let mut b = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for &(r, v) in &self.cols[j] {
                b[r * m + k] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&i, &k| b[i * m + c].abs().total_cmp(&b[k * m + c].abs()))
                .unwrap();
            if b[p * m + c].abs() < 1e-14 {
                // Singular basis; keep the product-form inverse.
                return;
            }
            if p != c {
                for k in 0..m {
                    b.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            let d = b[c * m + c];
            for k in 0..m {
                b[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for i in 0..m {
                if i == c {
                    continue;
                }
                let f = b[i * m + c];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    b[i * m + k] -= f * b[c * m + k];
                    inv[i * m + k] -= f * inv[c * m + k];
                }
            }
        }
        self.binv = inv;
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            let v: f64 = row.iter().zip(&self.rhs).map(|(a, b)| a * b).sum();
            self.xb[i] = if v < 0.0 && v > -FEAS_TOL { 0.0 } else { v };
        }
    }

    /// Runs simplex iterations maximising `cost` over the columns allowed
    /// by `may_enter`. Returns `false` when unbounded.
    fn optimise(&mut self, cost: &[f64], may_enter: impl Fn(usize) -> bool) -> Result<bool> {
        let mut degenerate_run = 0;
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(Error::NumericFailure {
                    what: "simplex pivot limit reached",
                    residual: self.pivots as f64,
                });
            }
            let y = self.duals(cost);
            let eligible = (0..self.cols.len())
                .filter(|&j| !self.is_basic[j] && may_enter(j))
                .map(|j| (j, self.reduced_cost(j, cost, &y)))
                .filter(|&(_, d)| d > COST_TOL);
            let enter = if degenerate_run >= BLAND_AFTER {
                eligible.map(|(j, _)| j).next()
            } else {
                eligible
                    .fold(None, |best: Option<(usize, f64)>, (j, d)| match best {
                        Some((_, bd)) if bd >= d => best,
                        _ => Some((j, d)),
                    })
                    .map(|(j, _)| j)
            };
            let Some(enter) = enter else {
                return Ok(true);
            };
            let alpha = self.ftran(enter);
            let mut leave: Option<(usize, f64)> = None;
            for (i, &a) in alpha.iter().enumerate() {
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.xb[i].max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - 1e-12 || (ratio <= best + 1e-12 && self.basis[i] < self.basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((row, ratio)) = leave else {
                return Ok(false);
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, enter, &alpha);
        }
    }

    /// Pivots zero-level artificials out of the basis where a real column
    /// can replace them; the rest sit on redundant rows.
    fn drive_out_artificials(&mut self) {
        for row in 0..self.m {
            if !self.is_artificial(self.basis[row]) {
                continue;
            }
            let m = self.m;
            let binv_row = self.binv[row * m..(row + 1) * m].to_vec();
            let candidate = (0..self.n_real).find(|&j| {
                !self.is_basic[j] && self.cols[j].iter().map(|&(r, v)| binv_row[r] * v).sum::<f64>().abs() > 1e-7
            });
            if let Some(j) = candidate {
                let alpha = self.ftran(j);
                self.pivot(row, j, &alpha);
            }
        }
    }

    fn values(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.cols.len()];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.xb[i];
        }
        x
    }
}

/// Solves the program to optimality, or reports infeasibility or
/// unboundedness.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution> {
    let mut t = Tableau::new(lp);
    let total = t.cols.len();
    let n_real = t.n_real;

    let phase_one: Vec<f64> = (0..total).map(|j| if j >= n_real { -1.0 } else { 0.0 }).collect();
    t.optimise(&phase_one, |_| true)?;
    t.refactor();
    let artificial_sum: f64 = t
        .basis
        .iter()
        .zip(&t.xb)
        .filter(|(&b, _)| b >= n_real)
        .map(|(_, &v)| v.max(0.0))
        .sum();
    let mut infeasible = LpSolution {
        status: LpStatus::Infeasible,
        optimum: f64::NAN,
        x: vec![0.0; lp.num_vars],
        duals: vec![0.0; t.m],
        dual_bound: f64::NAN,
        dual_infeasibility: f64::NAN,
        primal_residual: f64::NAN,
        phase_one_residual: artificial_sum,
        pivots: t.pivots,
    };
    if artificial_sum > FEAS_TOL * (1.0 + t.m as f64).sqrt() {
        let x = t.values();
        infeasible.x = x[..lp.num_vars].to_vec();
        infeasible.primal_residual = lp.primal_residual(&infeasible.x);
        return Ok(infeasible);
    }
    t.drive_out_artificials();

    let mut cost = vec![0.0; total];
    cost[..t.n_struct].copy_from_slice(&lp.objective);
    let bounded = t.optimise(&cost, |j| j < n_real)?;
    t.refactor();
    if !bounded {
        infeasible.status = LpStatus::Unbounded;
        infeasible.pivots = t.pivots;
        return Ok(infeasible);
    }

    let all = t.values();
    let x: Vec<f64> = all[..lp.num_vars].iter().map(|&v| v.max(0.0)).collect();
    let y_internal = t.duals(&cost);
    let dual_infeasibility = (0..n_real)
        .map(|j| t.reduced_cost(j, &cost, &y_internal))
        .fold(0.0, f64::max);
    let duals: Vec<f64> = y_internal.iter().zip(&t.row_sign).map(|(y, s)| y * s).collect();
    let b_orig: Vec<f64> = lp.eq_rhs.iter().chain(&lp.le_rhs).copied().collect();
    let dual_bound = duals.iter().zip(&b_orig).map(|(y, b)| y * b).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        optimum: lp.evaluate(&x),
        primal_residual: lp.primal_residual(&x),
        x,
        duals,
        dual_bound,
        dual_infeasibility,
        phase_one_residual: artificial_sum,
        pivots: t.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bounded_variable() {
        let lp = LinearProgram::new(vec![1.0], vec![], vec![], vec![vec![1.0]], vec![1.0]).unwrap();
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimum - 1.0).abs() <= 1e-12);
        assert!((s.dual_bound - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
        let lp = LinearProgram::new(
            vec![3.0, 5.0],
            vec![],
            vec![],
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            vec![4.0, 12.0, 18.0],
        )
        .unwrap();
        let s = simplex_solve(&lp).unwrap();
        assert!((s.optimum - 36.0).abs() <= 1e-9);
        assert!((s.x[0] - 2.0).abs() <= 1e-9 && (s.x[1] - 6.0).abs() <= 1e-9);
        assert!((s.dual_bound - s.optimum).abs() <= 1e-8);
        assert!(s.dual_infeasibility <= 1e-9);
    }

    #[test]
    fn equality_with_negative_rhs_and_redundancy() {
        // x + y = 1 stated twice (once negated), maximise x.
        let lp = LinearProgram::new(
            vec![1.0, 0.0],
            vec![vec![1.0, 1.0], vec![-1.0, -1.0]],
            vec![1.0, -1.0],
            vec![],
            vec![],
        )
        .unwrap();
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimum - 1.0).abs() <= 1e-12);
        assert!(s.primal_residual <= 1e-12);
    }

    #[test]
    fn detects_infeasibility() {
        let lp = LinearProgram::new(vec![1.0], vec![vec![1.0]], vec![2.0], vec![vec![1.0]], vec![1.0]).unwrap();
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(s.phase_one_residual > 0.5);
        assert!(matches!(s.into_optimal(), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn detects_unboundedness() {
        let lp = LinearProgram::new(vec![1.0, 0.0], vec![vec![1.0, -1.0]], vec![0.0], vec![], vec![]).unwrap();
        assert_eq!(simplex_solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(LinearProgram::new(vec![1.0], vec![vec![1.0, 2.0]], vec![1.0], vec![], vec![]).is_err());
        assert!(LinearProgram::new(vec![f64::NAN], vec![], vec![], vec![], vec![]).is_err());
    }
}
