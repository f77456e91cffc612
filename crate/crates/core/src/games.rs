//! Finite non-local games, games over shift spaces whose rule depends on a
//! finite window of coordinates, and the constructions relating them:
//! products, iterates, the embedding of a finite game, memory games, and
//! normalised value sequences.

use std::fmt::Write as _;

use crate::correlations::Correlation;
use crate::error::{Error, Result};
use crate::optimize::{self, local::DeterministicStrategy, ns::NsSolution, seesaw::SeesawState};
use crate::text;

/// Largest predicate tensor any construction will materialise.
pub const PREDICATE_CAP: f64 = 1e9;
const DIST_TOL: f64 = 1e-12;
const PAYOFF_TOL: f64 = 1e-9;

/// A rule predicate `λ(x,y,a,b)` with a question distribution `π₀(x,y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGame {
    nx: usize,
    ny: usize,
    na: usize,
    nb: usize,
    /// Row-major over `(x, y, a, b)`.
    predicate: Vec<bool>,
    /// Row-major over `(x, y)`.
    dist: Vec<f64>,
}

fn check_dist(dist: &[f64], len: usize) -> Result<()> {
    if dist.len() != len {
        return Err(Error::Shape(format!(
            "expected {len} question probabilities, got {}",
            dist.len()
        )));
    }
    if let Some(&v) = dist.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::Invariant {
            invariant: "question probabilities are non-negative",
            residual: -v,
        });
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > DIST_TOL {
        return Err(Error::Invariant {
            invariant: "question distribution sums to one",
            residual: (total - 1.0).abs(),
        });
    }
    Ok(())
}

fn check_cap(entries: f64) -> Result<()> {
    if entries > PREDICATE_CAP {
        Err(Error::TooLarge {
            what: "predicate entries",
            size: entries,
            cap: PREDICATE_CAP,
        })
    } else {
        Ok(())
    }
}

impl FiniteGame {
    pub fn new(nx: usize, ny: usize, na: usize, nb: usize, predicate: Vec<bool>, dist: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || na == 0 || nb == 0 {
            return Err(Error::Shape("game alphabets must be non-empty".into()));
        }
        let len = nx * ny * na * nb;
        if predicate.len() != len {
            return Err(Error::Shape(format!(
                "expected {len} predicate entries, got {}",
                predicate.len()
            )));
        }
        check_dist(&dist, nx * ny)?;
        Ok(Self {
            nx,
            ny,
            na,
            nb,
            predicate,
            dist,
        })
    }

    pub fn from_fn(
        nx: usize,
        ny: usize,
        na: usize,
        nb: usize,
        dist: Vec<f64>,
        rule: impl Fn(usize, usize, usize, usize) -> bool,
    ) -> Result<Self> {
        check_cap((nx * ny * na * nb) as f64)?;
        let mut predicate = Vec::with_capacity(nx * ny * na * nb);
        for x in 0..nx {
            for y in 0..ny {
                for a in 0..na {
                    for b in 0..nb {
                        predicate.push(rule(x, y, a, b));
                    }
                }
            }
        }
        Self::new(nx, ny, na, nb, predicate, dist)
    }

    pub fn uniform_dist(nx: usize, ny: usize) -> Vec<f64> {
        vec![1.0 / (nx * ny) as f64; nx * ny]
    }

    /// Binary inputs and outputs, uniform questions, win iff
    /// `a XOR b = x AND y`.
    pub fn chsh() -> Self {
        Self::from_fn(2, 2, 2, 2, Self::uniform_dist(2, 2), |x, y, a, b| (a ^ b) == (x & y)).unwrap()
    }

    /// Every answer wins.
    pub fn all_win(nx: usize, ny: usize, na: usize, nb: usize) -> Self {
        Self::from_fn(nx, ny, na, nb, Self::uniform_dist(nx, ny), |_, _, _, _| true).unwrap()
    }

    /// No answer wins.
    pub fn never_win(nx: usize, ny: usize, na: usize, nb: usize) -> Self {
        Self::from_fn(nx, ny, na, nb, Self::uniform_dist(nx, ny), |_, _, _, _| false).unwrap()
    }

    pub fn shape(&self) -> (usize, usize, usize, usize) {
        (self.nx, self.ny, self.na, self.nb)
    }

    #[inline]
    pub fn wins(&self, x: usize, y: usize, a: usize, b: usize) -> bool {
        self.predicate[((x * self.ny + y) * self.na + a) * self.nb + b]
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.dist[x * self.ny + y]
    }

    pub fn predicate(&self) -> &[bool] {
        &self.predicate
    }

    pub fn dist(&self) -> &[f64] {
        &self.dist
    }

    /// Same game with the players' roles exchanged.
    pub fn transposed(&self) -> Self {
        Self::from_fn(
            self.ny,
            self.nx,
            self.nb,
            self.na,
            (0..self.ny)
                .flat_map(|y| (0..self.nx).map(move |x| (x, y)))
                .map(|(x, y)| self.prob(x, y))
                .collect(),
            |y, x, b, a| self.wins(x, y, a, b),
        )
        .expect("transpose preserves validity")
    }

    /// Winning probability `sum_{x,y} π₀(x,y) sum_{λ=1} p(a,b|x,y)`.
    pub fn payoff(&self, p: &Correlation) -> Result<f64> {
        payoff(self, p)
    }
}

pub fn payoff(g: &FiniteGame, p: &Correlation) -> Result<f64> {
    if p.shape() != g.shape() {
        return Err(Error::Shape(format!(
            "game shape {:?} does not match correlation shape {:?}",
            g.shape(),
            p.shape()
        )));
    }
    let mut total = 0.0;
    for x in 0..g.nx {
        for y in 0..g.ny {
            let w = g.prob(x, y);
            if w == 0.0 {
                continue;
            }
            let mut win = 0.0;
            for a in 0..g.na {
                for b in 0..g.nb {
                    if g.wins(x, y, a, b) {
                        win += p.get(x, y, a, b);
                    }
                }
            }
            total += w * win;
        }
    }
    if !(-PAYOFF_TOL..=1.0 + PAYOFF_TOL).contains(&total) {
        return Err(Error::NumericFailure {
            what: "payoff outside [0, 1]",
            residual: total,
        });
    }
    Ok(total)
}

/// Product game over pair alphabets `(i, j) -> i * n2 + j`: both rules
/// must hold and questions are drawn independently.
pub fn product_game(g1: &FiniteGame, g2: &FiniteGame) -> Result<FiniteGame> {
    let (nx, ny, na, nb) = (g1.nx * g2.nx, g1.ny * g2.ny, g1.na * g2.na, g1.nb * g2.nb);
    check_cap(nx as f64 * ny as f64 * na as f64 * nb as f64)?;
    let mut dist = Vec::with_capacity(nx * ny);
    for x in 0..nx {
        for y in 0..ny {
            dist.push(g1.prob(x / g2.nx, y / g2.ny) * g2.prob(x % g2.nx, y % g2.ny));
        }
    }
    // Renormalise away the round-off of the products.
    let total: f64 = dist.iter().sum();
    for v in &mut dist {
        *v /= total;
    }
    FiniteGame::from_fn(nx, ny, na, nb, dist, |x, y, a, b| {
        g1.wins(x / g2.nx, y / g2.ny, a / g2.na, b / g2.nb) && g2.wins(x % g2.nx, y % g2.ny, a % g2.na, b % g2.nb)
    })
}

/// `n`-fold product `G ×̇ ... ×̇ G`, nested left to right.
pub fn power_game(g: &FiniteGame, n: usize) -> Result<FiniteGame> {
    if n == 0 {
        return Err(Error::Precondition("power of a game needs n >= 1".into()));
    }
    let (nx, ny, na, nb) = g.shape();
    check_cap(((nx * ny * na * nb) as f64).powi(n as i32))?;
    let mut out = g.clone();
    for _ in 1..n {
        out = product_game(&out, g)?;
    }
    Ok(out)
}

/// Game over bi-infinite sequences with the product question measure
/// `⊗ π₀`, whose rule reads coordinates `0..window`.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderGame {
    window: usize,
    nx: usize,
    ny: usize,
    na: usize,
    nb: usize,
    /// Rule over window tuples, each tuple encoded row-major with
    /// coordinate 0 most significant.
    rule: FiniteGame,
    base_dist: Vec<f64>,
}

fn pow(base: usize, exp: usize) -> usize {
    base.pow(exp as u32)
}

fn digits(mut idx: usize, base: usize, len: usize, out: &mut [usize]) {
    for slot in out[..len].iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
}

fn product_dist(base: &[f64], nx: usize, ny: usize, len: usize) -> Vec<f64> {
    let (bx, by) = (pow(nx, len), pow(ny, len));
    let mut dx = vec![0; len];
    let mut dy = vec![0; len];
    let mut dist = Vec::with_capacity(bx * by);
    for x in 0..bx {
        digits(x, nx, len, &mut dx);
        for y in 0..by {
            digits(y, ny, len, &mut dy);
            dist.push((0..len).map(|k| base[dx[k] * ny + dy[k]]).product());
        }
    }
    let total: f64 = dist.iter().sum();
    dist.iter().map(|v| v / total).collect()
}

impl CylinderGame {
    /// `rule(xs, ys, as, bs)` receives the window coordinates `0..window`.
    pub fn new(
        window: usize,
        nx: usize,
        ny: usize,
        na: usize,
        nb: usize,
        base_dist: Vec<f64>,
        rule: impl Fn(&[usize], &[usize], &[usize], &[usize]) -> bool,
    ) -> Result<Self> {
        if window == 0 {
            return Err(Error::Precondition("window must be at least 1".into()));
        }
        check_dist(&base_dist, nx * ny)?;
        let dims = [nx, ny, na, nb].map(|n| pow(n, window));
        check_cap(dims.iter().map(|&d| d as f64).product())?;
        let dist = product_dist(&base_dist, nx, ny, window);
        let windowed = FiniteGame::from_fn(dims[0], dims[1], dims[2], dims[3], dist, |x, y, a, b| {
            let [mut dx, mut dy, mut da, mut db] = [0; 4].map(|_| vec![0; window]);
            digits(x, nx, window, &mut dx);
            digits(y, ny, window, &mut dy);
            digits(a, na, window, &mut da);
            digits(b, nb, window, &mut db);
            rule(&dx, &dy, &da, &db)
        })?;
        Ok(Self {
            window,
            nx,
            ny,
            na,
            nb,
            rule: windowed,
            base_dist,
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn base_shape(&self) -> (usize, usize, usize, usize) {
        (self.nx, self.ny, self.na, self.nb)
    }

    pub fn base_dist(&self) -> &[f64] {
        &self.base_dist
    }

    /// The window game itself: rule and `π₀^{⊗ window}`.
    pub fn windowed(&self) -> &FiniteGame {
        &self.rule
    }

    /// Whether the rule holds on window tuples given as encoded indices.
    pub fn wins_window(&self, x: usize, y: usize, a: usize, b: usize) -> bool {
        self.rule.wins(x, y, a, b)
    }

    /// The `n`-th iterate: all `n` shifted copies of the rule must hold.
    /// The result lives on windows of length `window + n - 1`.
    pub fn iterate(&self, n: usize) -> Result<FiniteGame> {
        iterate(self, n)
    }
}

/// Builds `κ^(n)` as a finite game over `X^{w+n-1}` (and likewise for
/// `Y`, `A`, `B`).
pub fn iterate(k: &CylinderGame, n: usize) -> Result<FiniteGame> {
    if n == 0 {
        return Err(Error::Precondition("iterate needs n >= 1".into()));
    }
    let w = k.window;
    let len = w + n - 1;
    let (nx, ny, na, nb) = k.base_shape();
    let size = [nx, ny, na, nb]
        .iter()
        .map(|&d| (d as f64).powi(len as i32))
        .product::<f64>();
    check_cap(size)?;
    let dims = [nx, ny, na, nb].map(|d| pow(d, len));
    let dist = product_dist(&k.base_dist, nx, ny, len);
    let shift = |idx: usize, base: usize, s: usize| -> usize {
        // Coordinates s..s+w of a length-`len` tuple, coordinate 0 most significant.
        (idx / pow(base, len - s - w)) % pow(base, w)
    };
    FiniteGame::from_fn(dims[0], dims[1], dims[2], dims[3], dist, |x, y, a, b| {
        (0..n).all(|s| {
            k.rule
                .wins(shift(x, nx, s), shift(y, ny, s), shift(a, na, s), shift(b, nb, s))
        })
    })
}

/// Cylinder version of a finite game: window 1, same rule and questions.
pub fn embed(g: &FiniteGame) -> CylinderGame {
    CylinderGame::new(1, g.nx, g.ny, g.na, g.nb, g.dist.clone(), |x, y, a, b| {
        g.wins(x[0], y[0], a[0], b[0])
    })
    .expect("a valid finite game embeds")
}

/// Window-2 game won when the rule holds at coordinate 0 or 1.
pub fn memory_game(g: &FiniteGame) -> CylinderGame {
    CylinderGame::new(2, g.nx, g.ny, g.na, g.nb, g.dist.clone(), |x, y, a, b| {
        g.wins(x[0], y[0], a[0], b[0]) || g.wins(x[1], y[1], a[1], b[1])
    })
    .expect("a valid finite game has a memory game")
}

/// Which value to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueType {
    /// Exact optimum over deterministic (hence local) strategies.
    Local,
    /// Exact optimum over the no-signalling polytope.
    NoSignalling,
    /// See-saw lower bound over quantum spatial strategies of fixed dimension.
    QuantumLowerBound,
}

impl ValueType {
    pub fn tag(self) -> &'static str {
        match self {
            ValueType::Local => "loc",
            ValueType::NoSignalling => "ns",
            ValueType::QuantumLowerBound => "qs",
        }
    }

    pub fn is_exact(self) -> bool {
        self != ValueType::QuantumLowerBound
    }
}

impl std::str::FromStr for ValueType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loc" => Ok(ValueType::Local),
            "ns" => Ok(ValueType::NoSignalling),
            "qs" => Ok(ValueType::QuantumLowerBound),
            other => Err(Error::Precondition(format!("unknown value type `{other}` (loc|ns|qs)"))),
        }
    }
}

/// Engine parameters for the see-saw; ignored by exact engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValueOptions {
    pub dim: usize,
    pub seeds: usize,
    pub sweeps: usize,
    pub rng_seed: u64,
}

impl Default for ValueOptions {
    fn default() -> Self {
        Self {
            dim: 2,
            seeds: 20,
            sweeps: 200,
            rng_seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Certificate {
    Strategy(DeterministicStrategy),
    Lp(NsSolution),
    Seesaw(SeesawState),
}

impl Certificate {
    /// The correlation that attains the reported value.
    pub fn correlation(&self, g: &FiniteGame) -> Result<Correlation> {
        let (_, _, na, nb) = g.shape();
        match self {
            Certificate::Strategy(s) => Correlation::deterministic(na, nb, &s.alice, &s.bob),
            Certificate::Lp(s) => Ok(s.correlation.clone()),
            Certificate::Seesaw(s) => s.correlation(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValueReport {
    pub game_id: String,
    pub kind: ValueType,
    pub value: f64,
    pub exact: bool,
    pub certificate: Certificate,
}

impl ValueReport {
    /// `|payoff(certificate) - value|`.
    pub fn certificate_gap(&self, g: &FiniteGame) -> Result<f64> {
        Ok((payoff(g, &self.certificate.correlation(g)?)? - self.value).abs())
    }

    pub fn summary(&self) -> String {
        match &self.certificate {
            Certificate::Strategy(s) => format!("deterministic strategy f={:?} g={:?}", s.alice, s.bob),
            Certificate::Lp(s) => format!(
                "LP optimum, dual bound {}, {} pivots",
                text::format_sig(s.dual_bound, 17),
                s.pivots
            ),
            Certificate::Seesaw(s) => format!(
                "lower bound, dimension {}, seed {}, {} sweeps{}",
                s.dim,
                s.seed_index,
                s.history.len().saturating_sub(1),
                if s.heuristic {
                    ", heuristic measurement update"
                } else {
                    ""
                }
            ),
        }
    }
}

pub fn value(g: &FiniteGame, kind: ValueType, opts: &ValueOptions) -> Result<ValueReport> {
    let (value, certificate) = match kind {
        ValueType::Local => {
            let s = optimize::local_value(g)?;
            (s.value, Certificate::Strategy(s))
        }
        ValueType::NoSignalling => {
            let s = optimize::ns_value(g)?;
            (s.value, Certificate::Lp(s))
        }
        ValueType::QuantumLowerBound => {
            let s = optimize::qs_seesaw(g, opts.dim, opts.seeds, opts.sweeps, opts.rng_seed)?;
            (s.objective, Certificate::Seesaw(s))
        }
    };
    let (nx, ny, na, nb) = g.shape();
    Ok(ValueReport {
        game_id: format!("game[{nx}x{ny}x{na}x{nb}]"),
        kind,
        value: value.clamp(0.0, 1.0),
        exact: kind.is_exact(),
        certificate,
    })
}

/// Whether the engine for `kind` can handle `g` within its caps.
fn within_engine_caps(g: &FiniteGame, kind: ValueType) -> bool {
    let (nx, ny, na, nb) = g.shape();
    match kind {
        ValueType::Local => {
            let fa = (na as f64).powi(nx as i32);
            let fb = (nb as f64).powi(ny as i32);
            fa.min(fb) <= optimize::local::ENUMERATION_CAP
        }
        ValueType::NoSignalling => optimize::ns::lp_rows(g) as f64 <= optimize::ns::ROW_CAP,
        ValueType::QuantumLowerBound => true,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceEntry {
    pub n: usize,
    /// `ω(G_n)`.
    pub raw: f64,
    /// `ω(G_n)^{1/n}`.
    pub normalized: f64,
    /// Maximum of `normalized` over entries `1..=n`.
    pub running_max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceReport {
    pub kind: ValueType,
    pub entries: Vec<SequenceEntry>,
    /// Set when a size cap stopped the sequence before `n_max`.
    pub truncated: bool,
}

impl SequenceReport {
    fn push(&mut self, n: usize, raw: f64) {
        let normalized = raw.max(0.0).powf(1.0 / n as f64);
        let running_max = self
            .entries
            .last()
            .map_or(normalized, |e| e.running_max.max(normalized));
        self.entries.push(SequenceEntry {
            n,
            raw,
            normalized,
            running_max,
        });
    }

    /// Largest `ω(n)ω(m) - ω(n+m)` over computed entries; non-positive (up
    /// to round-off) for supermultiplicative sequences.
    pub fn supermultiplicativity_gap(&self) -> f64 {
        let raw = |n: usize| self.entries.iter().find(|e| e.n == n).map(|e| e.raw);
        let mut worst = f64::NEG_INFINITY;
        for e in &self.entries {
            for f in &self.entries {
                if let Some(sum) = raw(e.n + f.n) {
                    worst = worst.max(e.raw * f.raw - sum);
                }
            }
        }
        worst
    }

    pub fn label(&self) -> &'static str {
        if self.kind.is_exact() {
            "exact"
        } else {
            "lower bound"
        }
    }
}

/// `(n, ω(Gⁿ)^{1/n})` for `n = 1..=n_max`.
pub fn asymptotic_sequence(
    g: &FiniteGame,
    kind: ValueType,
    n_max: usize,
    opts: &ValueOptions,
) -> Result<SequenceReport> {
    let mut report = SequenceReport {
        kind,
        entries: Vec::new(),
        truncated: false,
    };
    let mut power: Option<FiniteGame> = None;
    for n in 1..=n_max {
        let next = match &power {
            None => Ok(g.clone()),
            Some(p) => product_game(p, g),
        };
        let game = match next {
            Ok(game) if within_engine_caps(&game, kind) => game,
            Ok(_) | Err(Error::TooLarge { .. }) => {
                report.truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let v = value(&game, kind, opts)?.value;
        report.push(n, v);
        power = Some(game);
    }
    Ok(report)
}

/// `(n, ω(κ^(n))^{1/n})` with the running maximum as a lower estimate of
/// the limsup. For exact types the raw values must not increase.
pub fn inner_value_sequence(
    k: &CylinderGame,
    kind: ValueType,
    n_max: usize,
    opts: &ValueOptions,
) -> Result<SequenceReport> {
    let mut report = SequenceReport {
        kind,
        entries: Vec::new(),
        truncated: false,
    };
    for n in 1..=n_max {
        let game = match iterate(k, n) {
            Ok(game) if within_engine_caps(&game, kind) => game,
            Ok(_) | Err(Error::TooLarge { .. }) => {
                report.truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let v = value(&game, kind, opts)?.value;
        if kind.is_exact() {
            if let Some(prev) = report.entries.last() {
                if v > prev.raw + 1e-9 {
                    return Err(Error::NumericFailure {
                        what: "iterate values increased with n",
                        residual: v - prev.raw,
                    });
                }
            }
        }
        report.push(n, v);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// A parsed game file: either a plain finite game or a cylinder game.
#[derive(Clone, Debug, PartialEq)]
pub enum GameFile {
    Finite(FiniteGame),
    Cylinder(CylinderGame),
}

impl GameFile {
    /// The game whose value `cmd_value` reports (the window game for
    /// cylinder files).
    pub fn finite(&self) -> &FiniteGame {
        match self {
            GameFile::Finite(g) => g,
            GameFile::Cylinder(c) => c.windowed(),
        }
    }
}

/// Game file:
///
/// ```text
/// game nX nY nA nB [window w]
/// dist p(0,0) p(0,1) ...            # nX*nY values, row-major
/// win x y a b                       # one winning quadruple per line
/// ```
///
/// For cylinder games `dist` is the base distribution and each `win` line
/// lists `w` coordinates per player: `win x0..x{w-1} y0.. a0.. b0..`.
pub fn load_game(src: &str) -> Result<GameFile> {
    let mut lines = crate::channels::Lines::new(src);
    let (n, header) = lines.next_line("a `game` header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let window = match toks.as_slice() {
        ["game", _, _, _, _] => None,
        ["game", _, _, _, _, "window", w] => Some(text::parse_usize(w, n, "window")?),
        _ => return Err(Error::parse(n, "expected `game nX nY nA nB [window w]`")),
    };
    let dims: Vec<usize> = toks[1..5]
        .iter()
        .map(|t| text::parse_usize(t, n, "alphabet size"))
        .collect::<Result<_>>()?;
    if dims.contains(&0) || window == Some(0) {
        return Err(Error::parse(n, "alphabet sizes and window must be positive"));
    }
    let (nx, ny, na, nb) = (dims[0], dims[1], dims[2], dims[3]);
    let w = window.unwrap_or(1);
    let win_size = [nx, ny, na, nb]
        .iter()
        .map(|&d| (d as f64).powi(w as i32))
        .product::<f64>();
    if win_size > PREDICATE_CAP {
        return Err(Error::parse(
            n,
            format!("predicate with {win_size} entries exceeds the cap"),
        ));
    }

    let (dn, dline) = lines.next_line("a `dist` line")?;
    let mut dtoks = dline.split_whitespace();
    if dtoks.next() != Some("dist") {
        return Err(Error::parse(
            dn,
            "expected `dist` followed by the question distribution",
        ));
    }
    let dist: Vec<f64> = dtoks.map(|t| text::parse_f64(t, dn)).collect::<Result<_>>()?;
    check_dist(&dist, nx * ny).map_err(|e| Error::parse(dn, e.to_string()))?;

    let (wx, wy, wa, wb) = (pow(nx, w), pow(ny, w), pow(na, w), pow(nb, w));
    let mut predicate = vec![false; wx * wy * wa * wb];
    while let Ok((ln, line)) = lines.next_line("") {
        let mut t = line.split_whitespace();
        if t.next() != Some("win") {
            return Err(Error::parse(ln, format!("expected a `win` line, found `{line}`")));
        }
        let coords: Vec<usize> = t
            .map(|s| text::parse_usize(s, ln, "coordinate"))
            .collect::<Result<_>>()?;
        if coords.len() != 4 * w {
            return Err(Error::parse(
                ln,
                format!("expected {} coordinates, found {}", 4 * w, coords.len()),
            ));
        }
        let mut idx = [0usize; 4];
        for (p, (&base, slot)) in [nx, ny, na, nb].iter().zip(idx.iter_mut()).enumerate() {
            for &c in &coords[p * w..(p + 1) * w] {
                if c >= base {
                    return Err(Error::parse(
                        ln,
                        format!("coordinate {c} outside alphabet of size {base}"),
                    ));
                }
                *slot = *slot * base + c;
            }
        }
        predicate[((idx[0] * wy + idx[1]) * wa + idx[2]) * wb + idx[3]] = true;
    }

    let game = match window {
        None => GameFile::Finite(
            FiniteGame::new(nx, ny, na, nb, predicate, dist).map_err(|e| Error::parse(n, e.to_string()))?,
        ),
        Some(w) => {
            let pred = predicate;
            let c = CylinderGame::new(w, nx, ny, na, nb, dist, |xs, ys, as_, bs| {
                let enc = |v: &[usize], base: usize| v.iter().fold(0, |acc, &d| acc * base + d);
                let (x, y, a, b) = (enc(xs, nx), enc(ys, ny), enc(as_, na), enc(bs, nb));
                pred[((x * wy + y) * wa + a) * wb + b]
            })
            .map_err(|e| Error::parse(n, e.to_string()))?;
            GameFile::Cylinder(c)
        }
    };
    Ok(game)
}

/// Writes a finite game in the format read by [`load_game`].
pub fn dump_game(g: &FiniteGame) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "game {} {} {} {}", g.nx, g.ny, g.na, g.nb);
    let dist: Vec<String> = g.dist.iter().map(|v| format!("{v:?}")).collect();
    let _ = writeln!(out, "dist {}", dist.join(" "));
    for x in 0..g.nx {
        for y in 0..g.ny {
            for a in 0..g.na {
                for b in 0..g.nb {
                    if g.wins(x, y, a, b) {
                        let _ = writeln!(out, "win {x} {y} {a} {b}");
                    }
                }
            }
        }
    }
    out
}
