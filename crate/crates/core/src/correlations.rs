//! Finite correlations `p(a,b|x,y)` and the classes they fall into.
//!
//! Entries are stored row-major as `((x * nY + y) * nA + a) * nB + b`.
//! Product alphabets always encode the pair `(i, j)` as `i * n2 + j`.

use std::fmt::Write as _;

use crate::channels::{self, FiniteChannel};
use crate::dilation;
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::optimize::lp::{self, LinearProgram, LpStatus};
use crate::text;

/// Entries down to `-CLIP_TOL` are treated as round-off and clipped.
pub const CLIP_TOL: f64 = 1e-12;
/// Allowed deviation of each `(x,y)` block from total mass one.
pub const NORM_TOL: f64 = 1e-9;
/// Largest imaginary residue tolerated in quantum builders.
pub const IMAG_TOL: f64 = 1e-10;
/// Largest deterministic-vertex count accepted by [`is_local`].
pub const LOCAL_VERTEX_CAP: f64 = 1e7;

#[derive(Clone, Debug, PartialEq)]
pub struct Correlation {
    nx: usize,
    ny: usize,
    na: usize,
    nb: usize,
    p: Vec<f64>,
}

impl Correlation {
    /// Validates a table given in the fixed index order. Negative entries
    /// within [`CLIP_TOL`] are clipped to zero and their `(x,y)` block is
    /// renormalised.
    pub fn new(nx: usize, ny: usize, na: usize, nb: usize, mut p: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || na == 0 || nb == 0 {
            return Err(Error::Shape("correlation alphabets must be non-empty".into()));
        }
        let len = nx * ny * na * nb;
        if p.len() != len {
            return Err(Error::Shape(format!("expected {len} probabilities, got {}", p.len())));
        }
        if let Some(&bad) = p.iter().find(|v| !v.is_finite()) {
            return Err(Error::Invariant {
                invariant: "finite probabilities",
                residual: bad.abs(),
            });
        }
        let block = na * nb;
        for chunk in p.chunks_mut(block) {
            let mut clipped = false;
            for v in chunk.iter_mut() {
                if *v < -CLIP_TOL {
                    return Err(Error::Invariant {
                        invariant: "probabilities are non-negative",
                        residual: -*v,
                    });
                }
                if *v < 0.0 {
                    *v = 0.0;
                    clipped = true;
                }
            }
            let total: f64 = chunk.iter().sum();
            if (total - 1.0).abs() > NORM_TOL {
                return Err(Error::Invariant {
                    invariant: "each (x,y) block sums to one",
                    residual: (total - 1.0).abs(),
                });
            }
            if clipped {
                for v in chunk.iter_mut() {
                    *v /= total;
                }
            }
        }
        Ok(Self { nx, ny, na, nb, p })
    }

    pub fn from_fn(
        nx: usize,
        ny: usize,
        na: usize,
        nb: usize,
        f: impl Fn(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut p = Vec::with_capacity(nx * ny * na * nb);
        for x in 0..nx {
            for y in 0..ny {
                for a in 0..na {
                    for b in 0..nb {
                        p.push(f(x, y, a, b));
                    }
                }
            }
        }
        Self::new(nx, ny, na, nb, p)
    }

    /// The binary box winning CHSH with certainty:
    /// `p(a,b|x,y) = 1/2` iff `a XOR b = x AND y`.
    pub fn pr_box() -> Self {
        Self::from_fn(2, 2, 2, 2, |x, y, a, b| if (a ^ b) == (x & y) { 0.5 } else { 0.0 }).unwrap()
    }

    pub fn uniform(nx: usize, ny: usize, na: usize, nb: usize) -> Self {
        let v = 1.0 / (na * nb) as f64;
        Self::from_fn(nx, ny, na, nb, |_, _, _, _| v).unwrap()
    }

    /// `p(a,b|x,y) = [a = f(x)] [b = g(y)]`.
    pub fn deterministic(na: usize, nb: usize, f: &[usize], g: &[usize]) -> Result<Self> {
        if f.iter().any(|&a| a >= na) || g.iter().any(|&b| b >= nb) {
            return Err(Error::Shape(
                "deterministic strategy answers outside the alphabet".into(),
            ));
        }
        Self::from_fn(
            f.len(),
            g.len(),
            na,
            nb,
            |x, y, a, b| {
                if f[x] == a && g[y] == b {
                    1.0
                } else {
                    0.0
                }
            },
        )
    }

    pub fn shape(&self) -> (usize, usize, usize, usize) {
        (self.nx, self.ny, self.na, self.nb)
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, a: usize, b: usize) -> usize {
        ((x * self.ny + y) * self.na + a) * self.nb + b
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.p[self.index(x, y, a, b)]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn alice_marginal(&self, x: usize, y: usize, a: usize) -> f64 {
        (0..self.nb).map(|b| self.get(x, y, a, b)).sum()
    }

    fn bob_marginal(&self, x: usize, y: usize, b: usize) -> f64 {
        (0..self.na).map(|a| self.get(x, y, a, b)).sum()
    }
}

/// Worst no-signalling defects of a correlation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NsCertificate {
    /// `max |sum_b p(a,b|x,y) - sum_b p(a,b|x,y')|`.
    pub max_alice: f64,
    /// `max |sum_a p(a,b|x,y) - sum_a p(a,b|x',y)|`.
    pub max_bob: f64,
    /// `(x, a, y, y')` attaining `max_alice`.
    pub alice_witness: (usize, usize, usize, usize),
    /// `(y, b, x, x')` attaining `max_bob`.
    pub bob_witness: (usize, usize, usize, usize),
    pub passes: bool,
}

pub fn is_no_signalling(p: &Correlation, tol: f64) -> NsCertificate {
    let (nx, ny, na, nb) = p.shape();
    let mut cert = NsCertificate {
        max_alice: 0.0,
        max_bob: 0.0,
        alice_witness: (0, 0, 0, 0),
        bob_witness: (0, 0, 0, 0),
        passes: true,
    };
    for x in 0..nx {
        for a in 0..na {
            let m: Vec<f64> = (0..ny).map(|y| p.alice_marginal(x, y, a)).collect();
            for y in 0..ny {
                for y2 in y + 1..ny {
                    let d = (m[y] - m[y2]).abs();
                    if d > cert.max_alice {
                        cert.max_alice = d;
                        cert.alice_witness = (x, a, y, y2);
                    }
                }
            }
        }
    }
    for y in 0..ny {
        for b in 0..nb {
            let m: Vec<f64> = (0..nx).map(|x| p.bob_marginal(x, y, b)).collect();
            for x in 0..nx {
                for x2 in x + 1..nx {
                    let d = (m[x] - m[x2]).abs();
                    if d > cert.max_bob {
                        cert.max_bob = d;
                        cert.bob_witness = (y, b, x, x2);
                    }
                }
            }
        }
    }
    cert.passes = cert.max_alice <= tol && cert.max_bob <= tol;
    cert
}

/// Conditional table `q[x][a]`, one probability row per input.
pub type StochasticTable = Vec<Vec<f64>>;

const MARGINAL_NS_TOL: f64 = 1e-7;

fn require_ns(p: &Correlation) -> Result<()> {
    let cert = is_no_signalling(p, MARGINAL_NS_TOL);
    if cert.passes {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "correlation signals: Alice defect {:e} at {:?}, Bob defect {:e} at {:?}",
            cert.max_alice, cert.alice_witness, cert.max_bob, cert.bob_witness
        )))
    }
}

/// Alice's marginal `q(a|x) = sum_b p(a,b|x,0)`.
pub fn marginal_a(p: &Correlation) -> Result<StochasticTable> {
    require_ns(p)?;
    Ok((0..p.nx)
        .map(|x| (0..p.na).map(|a| p.alice_marginal(x, 0, a)).collect())
        .collect())
}

/// Bob's marginal `r(b|y) = sum_a p(a,b|0,y)`.
pub fn marginal_b(p: &Correlation) -> Result<StochasticTable> {
    require_ns(p)?;
    Ok((0..p.ny)
        .map(|y| (0..p.nb).map(|b| p.bob_marginal(0, y, b)).collect())
        .collect())
}

fn check_stochastic(t: &StochasticTable, what: &str) -> Result<(usize, usize)> {
    let rows = t.len();
    let cols = t.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || t.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape(format!("{what} table must be a non-empty rectangle")));
    }
    for row in t {
        if let Some(&v) = row.iter().find(|&&v| v < -CLIP_TOL || !v.is_finite()) {
            return Err(Error::Invariant {
                invariant: "table entries are non-negative",
                residual: -v,
            });
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant {
                invariant: "table rows sum to one",
                residual: (s - 1.0).abs(),
            });
        }
    }
    Ok((rows, cols))
}

/// Convex mixture `p = sum_i w_i q_i ⊗ r_i` of product correlations.
pub fn from_local(weights: &[f64], alice: &[StochasticTable], bob: &[StochasticTable]) -> Result<Correlation> {
    if weights.is_empty() || weights.len() != alice.len() || weights.len() != bob.len() {
        return Err(Error::Shape("one Alice and one Bob table per weight".into()));
    }
    if let Some(&w) = weights.iter().find(|&&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::Invariant {
            invariant: "weights are non-negative",
            residual: -w,
        });
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Invariant {
            invariant: "weights sum to one",
            residual: (total - 1.0).abs(),
        });
    }
    let (nx, na) = check_stochastic(&alice[0], "Alice")?;
    let (ny, nb) = check_stochastic(&bob[0], "Bob")?;
    for (q, r) in alice.iter().zip(bob) {
        if check_stochastic(q, "Alice")? != (nx, na) || check_stochastic(r, "Bob")? != (ny, nb) {
            return Err(Error::Shape("all local tables must share one shape".into()));
        }
    }
    Correlation::from_fn(nx, ny, na, nb, |x, y, a, b| {
        weights
            .iter()
            .zip(alice.iter().zip(bob))
            .map(|(w, (q, r))| w * q[x][a] * r[y][b])
            .sum()
    })
}

fn check_state(psi: &[C64], dim: usize) -> Result<()> {
    if psi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.len(),
        });
    }
    let defect = (linalg::vec_norm(psi) - 1.0).abs();
    if defect > 1e-10 {
        return Err(Error::NonUnitState { defect });
    }
    Ok(())
}

fn build_from_amplitudes(
    nx: usize,
    ny: usize,
    na: usize,
    nb: usize,
    left: &[Vec<C64>],
    right: &[Vec<C64>],
) -> Result<Correlation> {
    let mut p = Vec::with_capacity(nx * ny * na * nb);
    for x in 0..nx {
        for y in 0..ny {
            for a in 0..na {
                for b in 0..nb {
                    let z = linalg::inner(&left[x * na + a], &right[y * nb + b]);
                    if z.im.abs() > IMAG_TOL {
                        return Err(Error::NumericFailure {
                            what: "imaginary residue in a quantum correlation",
                            residual: z.im.abs(),
                        });
                    }
                    p.push(z.re);
                }
            }
        }
    }
    Correlation::new(nx, ny, na, nb, p)
}

/// Quantum spatial correlation `p(a,b|x,y) = <psi| E(a|x) ⊗ F(b|y) |psi>`
/// with `psi` on `H_A ⊗ H_B` indexed `i * dim_B + j`.
pub fn from_qs(e: &FiniteChannel, f: &FiniteChannel, psi: &[C64]) -> Result<Correlation> {
    let (da, db) = (e.dim(), f.dim());
    check_state(psi, da * db)?;
    let mut left = Vec::with_capacity(e.inputs() * e.outcomes());
    for x in 0..e.inputs() {
        for a in 0..e.outcomes() {
            let m = e.effect(a, x).matrix();
            let mut out = vec![ZERO; da * db];
            for i in 0..da {
                for k in 0..da {
                    let mik = m[(i, k)];
                    if mik == ZERO {
                        continue;
                    }
                    for j in 0..db {
                        out[i * db + j] += mik * psi[k * db + j];
                    }
                }
            }
            left.push(out);
        }
    }
    let mut right = Vec::with_capacity(f.inputs() * f.outcomes());
    for y in 0..f.inputs() {
        for b in 0..f.outcomes() {
            let m = f.effect(b, y).matrix();
            let mut out = vec![ZERO; da * db];
            for i in 0..da {
                let block = &psi[i * db..(i + 1) * db];
                let v = m.mat_vec(block);
                out[i * db..(i + 1) * db].copy_from_slice(&v);
            }
            right.push(out);
        }
    }
    build_from_amplitudes(e.inputs(), f.inputs(), e.outcomes(), f.outcomes(), &left, &right)
}

/// Quantum commuting correlation `p(a,b|x,y) = <xi| E(a|x) F(b|y) |xi>`
/// for channels with commuting ranges on one space.
pub fn from_qc(e: &FiniteChannel, f: &FiniteChannel, xi: &[C64]) -> Result<Correlation> {
    channels::channels_commute(e, f)?.into_result()?;
    check_state(xi, e.dim())?;
    let apply = |ch: &FiniteChannel| -> Vec<Vec<C64>> {
        (0..ch.inputs())
            .flat_map(|x| (0..ch.outcomes()).map(move |a| (x, a)))
            .map(|(x, a)| ch.effect(a, x).matrix().mat_vec(xi))
            .collect()
    };
    build_from_amplitudes(e.inputs(), f.inputs(), e.outcomes(), f.outcomes(), &apply(e), &apply(f))
}

/// A quantum spatial strategy: two channels and a shared state.
#[derive(Clone, Debug)]
pub struct QsStrategy {
    pub alice: FiniteChannel,
    pub bob: FiniteChannel,
    pub state: Vec<C64>,
}

impl QsStrategy {
    pub fn correlation(&self) -> Result<Correlation> {
        from_qs(&self.alice, &self.bob, &self.state)
    }

    /// Replaces both channels by projection-valued ones through the
    /// simultaneous Naimark dilation, mapping the state through `W ⊗ W~`.
    /// The resulting correlation is unchanged.
    pub fn projective(&self) -> Result<QsStrategy> {
        let da = dilation::simultaneous_naimark(&self.alice)?;
        let db = dilation::simultaneous_naimark(&self.bob)?;
        let w = linalg::kron(&da.isometry, &db.isometry);
        Ok(QsStrategy {
            alice: da.dilated_channel(),
            bob: db.dilated_channel(),
            state: w.mat_vec(&self.state),
        })
    }
}

/// Result of a local-polytope membership test.
#[derive(Clone, Debug)]
pub struct LocalReport {
    pub local: bool,
    /// `(f, g, weight)` with positive weight when `local`; deterministic
    /// strategies listed as answer vectors.
    pub decomposition: Vec<(Vec<usize>, Vec<usize>, f64)>,
    /// Largest entrywise gap `|sum_v w_v D_v - p|` at the Phase-I optimum.
    pub max_infeasibility: f64,
}

/// Decodes a strategy index into answers, first input most significant.
pub(crate) fn decode_strategy(mut idx: usize, inputs: usize, alphabet: usize) -> Vec<usize> {
    let mut out = vec![0; inputs];
    for slot in out.iter_mut().rev() {
        *slot = idx % alphabet;
        idx /= alphabet;
    }
    out
}

/// Tests `p = sum_v w_v D_v` over all deterministic pairs `(f, g)` by a
/// Phase-I linear program.
pub fn is_local(p: &Correlation, tol: f64) -> Result<LocalReport> {
    let (nx, ny, na, nb) = p.shape();
    let nf = (na as f64).powi(nx as i32);
    let ng = (nb as f64).powi(ny as i32);
    if nf * ng > LOCAL_VERTEX_CAP {
        return Err(Error::TooLarge {
            what: "deterministic vertices",
            size: nf * ng,
            cap: LOCAL_VERTEX_CAP,
        });
    }
    let (nf, ng) = (nf as usize, ng as usize);
    let rows = nx * ny * na * nb;
    let fs: Vec<Vec<usize>> = (0..nf).map(|i| decode_strategy(i, nx, na)).collect();
    let gs: Vec<Vec<usize>> = (0..ng).map(|i| decode_strategy(i, ny, nb)).collect();
    let mut cols = Vec::with_capacity(nf * ng);
    for f in &fs {
        for g in &gs {
            let mut col = Vec::with_capacity(nx * ny + 1);
            for x in 0..nx {
                for y in 0..ny {
                    col.push((p.index(x, y, f[x], g[y]), 1.0));
                }
            }
            col.sort_unstable_by_key(|&(r, _)| r);
            col.push((rows, 1.0));
            cols.push(col);
        }
    }
    let mut rhs = p.as_slice().to_vec();
    rhs.push(1.0);
    let n = cols.len();
    let program = LinearProgram::from_columns(vec![0.0; n], cols, rhs, vec![Vec::new(); n], vec![])?;
    let sol = lp::simplex_solve(&program)?;
    let weights = &sol.x;
    let mut recon = vec![0.0; rows];
    for (fi, f) in fs.iter().enumerate() {
        for (gi, g) in gs.iter().enumerate() {
            let w = weights[fi * ng + gi];
            if w == 0.0 {
                continue;
            }
            for x in 0..nx {
                for y in 0..ny {
                    recon[p.index(x, y, f[x], g[y])] += w;
                }
            }
        }
    }
    let max_infeasibility = recon
        .iter()
        .zip(p.as_slice())
        .map(|(r, q)| (r - q).abs())
        .fold(0.0, f64::max);
    let local = sol.status == LpStatus::Optimal && max_infeasibility <= tol;
    let decomposition = if local {
        weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| (fs[i / ng].clone(), gs[i % ng].clone(), w))
            .collect()
    } else {
        Vec::new()
    };
    Ok(LocalReport {
        local,
        decomposition,
        max_infeasibility,
    })
}

/// `(p1 ⊗ p2)(a1a2, b1b2 | x1x2, y1y2) = p1(a1,b1|x1,y1) p2(a2,b2|x2,y2)`.
pub fn product_correlation(p1: &Correlation, p2: &Correlation) -> Correlation {
    let (nx1, ny1, na1, nb1) = p1.shape();
    let (nx2, ny2, na2, nb2) = p2.shape();
    let mut p = Vec::with_capacity(p1.p.len() * p2.p.len());
    for x in 0..nx1 * nx2 {
        for y in 0..ny1 * ny2 {
            for a in 0..na1 * na2 {
                for b in 0..nb1 * nb2 {
                    p.push(p1.get(x / nx2, y / ny2, a / na2, b / nb2) * p2.get(x % nx2, y % ny2, a % na2, b % nb2));
                }
            }
        }
    }
    Correlation {
        nx: nx1 * nx2,
        ny: ny1 * ny2,
        na: na1 * na2,
        nb: nb1 * nb2,
        p,
    }
}

/// Factorisation of product alphabets, `(first, second)` per alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductShape {
    pub x: (usize, usize),
    pub y: (usize, usize),
    pub a: (usize, usize),
    pub b: (usize, usize),
}

/// Section `p_{x',y'}(a,b|x,y) = sum_{a',b'} p(aa', bb' | xx', yy')`.
pub fn section(p: &Correlation, shape: ProductShape, x2: usize, y2: usize) -> Result<Correlation> {
    let ProductShape { x, y, a, b } = shape;
    if (x.0 * x.1, y.0 * y.1, a.0 * a.1, b.0 * b.1) != p.shape() {
        return Err(Error::Shape(format!(
            "factorisation {shape:?} does not match correlation shape {:?}",
            p.shape()
        )));
    }
    if x2 >= x.1 || y2 >= y.1 {
        return Err(Error::Shape(format!("section point ({x2}, {y2}) out of range")));
    }
    let mut out = Vec::with_capacity(x.0 * y.0 * a.0 * b.0);
    for x1 in 0..x.0 {
        for y1 in 0..y.0 {
            for a1 in 0..a.0 {
                for b1 in 0..b.0 {
                    let mut s = 0.0;
                    for a2 in 0..a.1 {
                        for b2 in 0..b.1 {
                            s += p.get(x1 * x.1 + x2, y1 * y.1 + y2, a1 * a.1 + a2, b1 * b.1 + b2);
                        }
                    }
                    out.push(s);
                }
            }
        }
    }
    Correlation::new(x.0, y.0, a.0, b.0, out)
}

/// `corr nX nY nA nB`, then one line per `(x,y)` holding the `nA*nB`
/// probabilities in `a * nB + b` order with 17 significant digits.
pub fn dump_correlation(p: &Correlation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "corr {} {} {} {}", p.nx, p.ny, p.na, p.nb);
    for block in p.p.chunks(p.na * p.nb) {
        let line: Vec<String> = block.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_correlation(src: &str) -> Result<Correlation> {
    let mut lines = channels::Lines::new(src);
    let (n, header) = lines.next_line("a `corr` header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 5 || toks[0] != "corr" {
        return Err(Error::parse(n, "expected `corr nX nY nA nB`"));
    }
    let dims: Vec<usize> = toks[1..]
        .iter()
        .map(|t| text::parse_usize(t, n, "alphabet size"))
        .collect::<Result<_>>()?;
    if dims.contains(&0) {
        return Err(Error::parse(n, "alphabet sizes must be positive"));
    }
    let (nx, ny, na, nb) = (dims[0], dims[1], dims[2], dims[3]);
    let mut p = Vec::with_capacity(nx * ny * na * nb);
    for _ in 0..nx * ny {
        let (ln, line) = lines.next_line("a probability row")?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| text::parse_f64(t, ln))
            .collect::<Result<_>>()?;
        if row.len() != na * nb {
            return Err(Error::parse(
                ln,
                format!("expected {} probabilities, found {}", na * nb, row.len()),
            ));
        }
        p.extend(row);
    }
    lines.finish()?;
    Correlation::new(nx, ny, na, nb, p).map_err(|e| Error::parse(n, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::Povm;
    use crate::linalg::{ComplexMatrix, HermitianOperator};

    fn signalling() -> Correlation {
        Correlation::from_fn(2, 2, 2, 2, |_, y, a, b| if a == y && b == 0 { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Correlation::new(1, 1, 1, 2, vec![0.5, 0.4]).is_err());
        assert!(Correlation::new(1, 1, 1, 2, vec![1.1, -0.1]).is_err());
        let clipped = Correlation::new(1, 1, 1, 2, vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(clipped.as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn ns_examples() {
        let q = vec![vec![0.3, 0.7], vec![1.0, 0.0]];
        let r = vec![vec![0.5, 0.5], vec![0.2, 0.8]];
        let prod = from_local(&[1.0], &[q], &[r]).unwrap();
        let c = is_no_signalling(&prod, 1e-15);
        assert!(c.max_alice < 1e-15 && c.max_bob < 1e-15);

        let pr = is_no_signalling(&Correlation::pr_box(), 0.0);
        assert!(pr.passes);

        let s = is_no_signalling(&signalling(), 1e-9);
        assert!(!s.passes);
        assert_eq!(s.max_alice, 1.0);
    }

    #[test]
    fn marginals() {
        let q = vec![vec![0.3, 0.7], vec![1.0, 0.0]];
        let r = vec![vec![0.5, 0.5]];
        let prod = from_local(&[1.0], std::slice::from_ref(&q), &[r]).unwrap();
        let m = marginal_a(&prod).unwrap();
        for (row, want) in m.iter().zip(&q) {
            for (v, w) in row.iter().zip(want) {
                assert!((v - w).abs() <= 1e-15);
            }
        }
        assert_eq!(marginal_a(&Correlation::pr_box()).unwrap(), vec![vec![0.5, 0.5]; 2]);
        let det = Correlation::deterministic(3, 2, &[2, 0], &[1, 1, 0]).unwrap();
        assert_eq!(
            marginal_a(&det).unwrap(),
            vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]
        );
        assert!(matches!(marginal_a(&signalling()), Err(Error::Precondition(_))));
    }

    #[test]
    fn from_local_examples() {
        let det = from_local(&[1.0], &[vec![vec![0.0, 1.0]]], &[vec![vec![1.0, 0.0]]]).unwrap();
        assert_eq!(det, Correlation::deterministic(2, 2, &[1], &[0]).unwrap());

        let consts = |v: usize| vec![vec![if v == 0 { 1.0 } else { 0.0 }, if v == 1 { 1.0 } else { 0.0 }]; 2];
        let alice: Vec<_> = [0, 0, 1, 1].iter().map(|&v| consts(v)).collect();
        let bob: Vec<_> = [0, 1, 0, 1].iter().map(|&v| consts(v)).collect();
        let u = from_local(&[0.25; 4], &alice, &bob).unwrap();
        assert_eq!(u, Correlation::uniform(2, 2, 2, 2));

        assert!(from_local(&[0.5], &[vec![vec![1.0]]], &[vec![vec![1.0]]]).is_err());
        assert!(from_local(&[1.0], &[vec![vec![0.5, 0.6]]], &[vec![vec![1.0]]]).is_err());
    }

    #[test]
    fn qs_product_state_factors() {
        let e = FiniteChannel::new(vec![Povm::computational_basis(2)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap();
        let f = FiniteChannel::new(vec![Povm::rotated_basis(&h), Povm::computational_basis(2)]).unwrap();
        // |0> ⊗ |+>
        let psi = linalg::kron_vec(&[C64::new(1.0, 0.0), ZERO], &[C64::new(s, 0.0), C64::new(s, 0.0)]);
        let p = from_qs(&e, &f, &psi).unwrap();
        assert!((p.get(0, 0, 0, 0) - 1.0).abs() <= 1e-12);
        assert!((p.get(0, 1, 0, 0) - 0.5).abs() <= 1e-12);
        assert!(p.get(0, 1, 1, 1).abs() <= 1e-12);
    }

    #[test]
    fn qs_with_trivial_alice() {
        let e = FiniteChannel::new(vec![Povm::trivial(2)]).unwrap();
        let f = FiniteChannel::new(vec![Povm::computational_basis(2)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = vec![C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)];
        let p = from_qs(&e, &f, &psi).unwrap();
        assert!((p.get(0, 0, 0, 0) - 0.5).abs() <= 1e-12);
        assert!((p.get(0, 0, 0, 1) - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn qs_rejects_bad_state() {
        let e = FiniteChannel::new(vec![Povm::trivial(2)]).unwrap();
        assert!(matches!(
            from_qs(&e, &e, &[C64::new(1.0, 0.0), ZERO, ZERO, C64::new(1.0, 0.0)]),
            Err(Error::NonUnitState { .. })
        ));
        assert!(matches!(
            from_qs(&e, &e, &[C64::new(1.0, 0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn qc_diagonal_is_deterministic() {
        let e = FiniteChannel::new(vec![Povm::computational_basis(3)]).unwrap();
        let mut xi = vec![ZERO; 3];
        xi[2] = C64::new(1.0, 0.0);
        let p = from_qc(&e, &e, &xi).unwrap();
        assert_eq!(p, Correlation::deterministic(3, 3, &[2], &[2]).unwrap());
    }

    #[test]
    fn qc_rejects_non_commuting() {
        let z = FiniteChannel::new(vec![Povm::computational_basis(2)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap();
        let x = FiniteChannel::new(vec![Povm::rotated_basis(&h)]).unwrap();
        let xi = [C64::new(1.0, 0.0), ZERO];
        assert!(matches!(from_qc(&z, &x, &xi), Err(Error::NonCommuting { .. })));
    }

    #[test]
    fn locality_examples() {
        let rep = is_local(&Correlation::uniform(2, 2, 2, 2), 1e-9).unwrap();
        assert!(rep.local);
        let total: f64 = rep.decomposition.iter().map(|d| d.2).sum();
        assert!((total - 1.0).abs() <= 1e-9);

        let pr = is_local(&Correlation::pr_box(), 1e-9).unwrap();
        assert!(!pr.local);
        assert!(pr.decomposition.is_empty());

        let big = Correlation::uniform(8, 8, 4, 4);
        assert!(matches!(is_local(&big, 1e-9), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn product_and_section() {
        let pr = Correlation::pr_box();
        let pp = product_correlation(&pr, &pr);
        let c = is_no_signalling(&pp, 0.0);
        assert!(c.max_alice < 1e-15 && c.max_bob < 1e-15);

        let det = Correlation::deterministic(1, 1, &[0], &[0]).unwrap();
        let padded = product_correlation(&pr, &det);
        assert_eq!(padded, pr);

        let shape = ProductShape {
            x: (2, 2),
            y: (2, 2),
            a: (2, 2),
            b: (2, 2),
        };
        for x2 in 0..2 {
            for y2 in 0..2 {
                let s = section(&pp, shape, x2, y2).unwrap();
                assert!(s.max_abs_diff(&pr) <= 1e-15);
            }
        }
        let d1 = Correlation::deterministic(2, 2, &[1, 0], &[0, 1]).unwrap();
        let d2 = Correlation::deterministic(3, 2, &[2], &[1, 0]).unwrap();
        let dd = product_correlation(&d1, &d2);
        let shape = ProductShape {
            x: (2, 1),
            y: (2, 2),
            a: (2, 3),
            b: (2, 2),
        };
        assert_eq!(section(&dd, shape, 0, 1).unwrap(), d1);
        assert!(section(&dd, ProductShape { x: (3, 1), ..shape }, 0, 0).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let p = from_qs(
            &FiniteChannel::new(vec![Povm::new(vec![
                HermitianOperator::from_diag(&[0.1, 0.7]),
                HermitianOperator::from_diag(&[0.9, 0.3]),
            ])
            .unwrap()])
            .unwrap(),
            &FiniteChannel::new(vec![Povm::computational_basis(2)]).unwrap(),
            &[C64::new(0.6, 0.0), ZERO, ZERO, C64::new(0.8, 0.0)],
        )
        .unwrap();
        let back = load_correlation(&dump_correlation(&p)).unwrap();
        assert_eq!(back, p);
        assert!(dump_correlation(&Correlation::pr_box()).starts_with("corr 2 2 2 2\n"));
    }

    #[test]
    fn load_reports_lines() {
        let src = "corr 1 1 1 2\n# comment\n0.5 oops\n";
        assert!(matches!(load_correlation(src), Err(Error::Parse { line: 3, .. })));
    }
}
