//! Positive operator-valued measures on finite outcome sets, their
//! projection-valued special case, input-indexed families of them
//! (operator-valued channels) and the equivalent unital completely
//! positive maps on functions over the outcome set.
//!
//! A measurable set of outcomes is just a subset; its measure is the sum
//! of the atomic effects, so every object here is determined by its list
//! of effects.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, HermitianOperator, C64, ZERO};
use crate::text;

/// Tolerance for every operator identity checked in this module.
pub const OP_TOL: f64 = 1e-9;

/// A positive operator-valued measure with finitely many outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    dim: usize,
    effects: Vec<HermitianOperator>,
}

impl Povm {
    /// Validates positivity of every effect and normalisation
    /// `sum_a E_a = I`, both at [`OP_TOL`].
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        let dim = effects
            .first()
            .map(HermitianOperator::dim)
            .ok_or_else(|| Error::Shape("a POVM needs at least one outcome".into()))?;
        for e in &effects {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
        }
        for e in &effects {
            let min = linalg::min_eigenvalue(e)?;
            if min < -OP_TOL {
                return Err(Error::Invariant {
                    invariant: "effects are positive semidefinite",
                    residual: -min,
                });
            }
        }
        let povm = Self { dim, effects };
        let defect = povm.normalisation_defect();
        if defect > OP_TOL {
            return Err(Error::Invariant {
                invariant: "effects sum to the identity",
                residual: defect,
            });
        }
        Ok(povm)
    }

    /// The one-outcome measure `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            effects: vec![HermitianOperator::identity(dim)],
        }
    }

    /// Projections onto the standard basis vectors.
    pub fn computational_basis(dim: usize) -> Self {
        Self::rotated_basis(&ComplexMatrix::identity(dim))
    }

    /// Projections onto the columns of a unitary.
    pub fn rotated_basis(u: &ComplexMatrix) -> Self {
        let effects = (0..u.cols())
            .map(|j| HermitianOperator::projector(&u.column(j)))
            .collect();
        Self { dim: u.rows(), effects }
    }

    /// Symmetric three-outcome qubit measurement: `(2/3)|ψ_j><ψ_j|` with
    /// real unit vectors `ψ_j` at angles `jπ/3`.
    pub fn trine() -> Self {
        let effects = (0..3)
            .map(|j| {
                let t = std::f64::consts::PI * j as f64 / 3.0;
                let v = [C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0)];
                HermitianOperator::projector(&v).scale(2.0 / 3.0)
            })
            .collect();
        Self::new(effects).expect("trine effects sum to the identity")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn effect(&self, a: usize) -> &HermitianOperator {
        &self.effects[a]
    }

    /// `E(delta)` for a set of outcomes.
    pub fn measure(&self, outcomes: impl IntoIterator<Item = usize>) -> HermitianOperator {
        outcomes
            .into_iter()
            .fold(HermitianOperator::zeros(self.dim), |acc, a| acc.add(&self.effects[a]))
    }

    /// `|sum_a E_a - I|_max`.
    pub fn normalisation_defect(&self) -> f64 {
        self.measure(0..self.outcomes())
            .matrix()
            .max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Appends zero effects until there are `outcomes` of them.
    pub fn padded(&self, outcomes: usize) -> Self {
        let mut effects = self.effects.clone();
        while effects.len() < outcomes {
            effects.push(HermitianOperator::zeros(self.dim));
        }
        Self { dim: self.dim, effects }
    }

    /// Worst projectivity and orthogonality defects:
    /// `max_a |E_a^2 - E_a|_max` and `max_{a != a'} |E_a E_a'|_max`.
    pub fn projectivity_defects(&self) -> (f64, f64) {
        let mut idem: f64 = 0.0;
        let mut orth: f64 = 0.0;
        for (a, e) in self.effects.iter().enumerate() {
            let sq = e.matrix() * e.matrix();
            idem = idem.max(sq.max_abs_diff(e.matrix()));
            for f in &self.effects[a + 1..] {
                orth = orth.max((e.matrix() * f.matrix()).max_abs());
            }
        }
        (idem, orth)
    }

    /// The measure as a unital completely positive map on functions.
    pub fn to_ucp(&self) -> UcpOnFunctions {
        povm_to_ucp(self)
    }

    /// Outcome distribution `<v|E_a|v>`.
    pub fn probabilities(&self, v: &[C64]) -> Vec<f64> {
        self.effects.iter().map(|e| e.expectation(v)).collect()
    }
}

/// A POVM whose effects are mutually orthogonal projections.
#[derive(Clone, Debug, PartialEq)]
pub struct Pvm(Povm);

impl Pvm {
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        Self::try_from(Povm::new(effects)?)
    }

    pub fn computational_basis(dim: usize) -> Self {
        Pvm(Povm::computational_basis(dim))
    }

    pub fn as_povm(&self) -> &Povm {
        &self.0
    }

    pub fn into_povm(self) -> Povm {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn outcomes(&self) -> usize {
        self.0.outcomes()
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.0.effects
    }

    pub fn effect(&self, a: usize) -> &HermitianOperator {
        &self.0.effects[a]
    }
}

impl TryFrom<Povm> for Pvm {
    type Error = Error;

    fn try_from(povm: Povm) -> Result<Self> {
        let (idem, orth) = povm.projectivity_defects();
        if idem > OP_TOL {
            return Err(Error::Invariant {
                invariant: "effects are projections",
                residual: idem,
            });
        }
        if orth > OP_TOL {
            return Err(Error::Invariant {
                invariant: "effects are mutually orthogonal",
                residual: orth,
            });
        }
        Ok(Pvm(povm))
    }
}

/// Input-indexed family of POVMs on one space, `x -> E(.|x)`.
///
/// Every member carries the same number of outcomes; shorter inputs are
/// padded with zero effects at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteChannel {
    dim: usize,
    povms: Vec<Povm>,
}

impl FiniteChannel {
    pub fn new(povms: Vec<Povm>) -> Result<Self> {
        let dim = povms
            .first()
            .map(Povm::dim)
            .ok_or_else(|| Error::Shape("a channel needs at least one input".into()))?;
        if let Some(p) = povms.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        let outcomes = povms.iter().map(Povm::outcomes).max().unwrap_or(1);
        let povms = povms.iter().map(|p| p.padded(outcomes)).collect();
        Ok(Self { dim, povms })
    }

    /// The same POVM at every one of `inputs` inputs.
    pub fn constant(povm: Povm, inputs: usize) -> Self {
        Self {
            dim: povm.dim(),
            povms: vec![povm; inputs],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inputs(&self) -> usize {
        self.povms.len()
    }

    pub fn outcomes(&self) -> usize {
        self.povms[0].outcomes()
    }

    pub fn povms(&self) -> &[Povm] {
        &self.povms
    }

    pub fn povm(&self, x: usize) -> &Povm {
        &self.povms[x]
    }

    /// `E(a|x)`.
    pub fn effect(&self, a: usize, x: usize) -> &HermitianOperator {
        self.povms[x].effect(a)
    }

    /// Conjugates every effect as `W* E W` for a fixed isometry or unitary.
    pub fn compress(&self, w: &ComplexMatrix) -> Result<Self> {
        let povms = self
            .povms
            .iter()
            .map(|p| Povm::new(p.effects().iter().map(|e| e.conjugate_by(w)).collect()))
            .collect::<Result<_>>()?;
        Self::new(povms)
    }
}

/// Unital completely positive map from functions on a finite outcome set
/// into operators, stored as the images of the point indicators.
#[derive(Clone, Debug, PartialEq)]
pub struct UcpOnFunctions {
    dim: usize,
    effects: Vec<HermitianOperator>,
}

impl UcpOnFunctions {
    /// Validates the images of the indicators with the POVM invariants.
    pub fn new(images: Vec<HermitianOperator>) -> Result<Self> {
        ucp_to_povm(&Self::unchecked(images)).map(|p| povm_to_ucp(&p))
    }

    fn unchecked(effects: Vec<HermitianOperator>) -> Self {
        let dim = effects.first().map_or(0, HermitianOperator::dim);
        Self { dim, effects }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn apply(&self, f: &[C64]) -> Result<ComplexMatrix> {
        apply_ucp(self, f)
    }
}

pub fn povm_to_ucp(e: &Povm) -> UcpOnFunctions {
    UcpOnFunctions {
        dim: e.dim,
        effects: e.effects.clone(),
    }
}

pub fn ucp_to_povm(phi: &UcpOnFunctions) -> Result<Povm> {
    Povm::new(phi.effects.clone()).map_err(|err| match err {
        Error::Invariant { invariant, residual } => Error::Invariant {
            invariant: match invariant {
                "effects sum to the identity" => "map is unital",
                "effects are positive semidefinite" => "map is positive on indicators",
                other => other,
            },
            residual,
        },
        other => other,
    })
}

/// `phi(f) = sum_a f(a) E_a`.
pub fn apply_ucp(phi: &UcpOnFunctions, f: &[C64]) -> Result<ComplexMatrix> {
    if f.len() != phi.outcomes() {
        return Err(Error::DimensionMismatch {
            expected: phi.outcomes(),
            found: f.len(),
        });
    }
    let mut out = ComplexMatrix::zeros(phi.dim, phi.dim);
    for (e, &fa) in phi.effects.iter().zip(f) {
        if fa != ZERO {
            out = &out + &e.matrix().scale(fa);
        }
    }
    Ok(out)
}

/// Whether `S` commutes with every effect, with the worst commutator.
pub fn commutes_with(e: &Povm, s: &HermitianOperator) -> Result<(bool, f64)> {
    let mut worst: f64 = 0.0;
    for eff in &e.effects {
        worst = worst.max(linalg::commutator_norm(eff, s)?);
    }
    Ok((worst <= OP_TOL, worst))
}

/// Outcome of a cross-commutation check between two channels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutationReport {
    pub commute: bool,
    pub residual: f64,
    /// `(x, a, y, b)` where the worst commutator `[E(a|x), F(b|y)]` occurs.
    pub witness: (usize, usize, usize, usize),
}

impl CommutationReport {
    pub fn into_result(self) -> Result<Self> {
        if self.commute {
            Ok(self)
        } else {
            Err(Error::NonCommuting {
                residual: self.residual,
                witness: self.witness,
            })
        }
    }
}

pub fn channels_commute(e: &FiniteChannel, f: &FiniteChannel) -> Result<CommutationReport> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: f.dim(),
        });
    }
    let mut report = CommutationReport {
        commute: true,
        residual: 0.0,
        witness: (0, 0, 0, 0),
    };
    for (x, pe) in e.povms.iter().enumerate() {
        for (a, ea) in pe.effects.iter().enumerate() {
            for (y, pf) in f.povms.iter().enumerate() {
                for (b, fb) in pf.effects.iter().enumerate() {
                    let r = linalg::commutator_norm(ea, fb)?;
                    if r > report.residual {
                        report.residual = r;
                        report.witness = (x, a, y, b);
                    }
                }
            }
        }
    }
    report.commute = report.residual <= OP_TOL;
    Ok(report)
}

pub fn povms_commute(e: &Povm, f: &Povm) -> Result<CommutationReport> {
    channels_commute(
        &FiniteChannel::constant(e.clone(), 1),
        &FiniteChannel::constant(f.clone(), 1),
    )
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

fn write_effect(out: &mut String, m: &ComplexMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                format!("{},{}", text::format_hex_float(z.re), text::format_hex_float(z.im))
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

/// Writes `povm dim=<d> outcomes=<k>` followed by one block of `d` rows of
/// `re,im` pairs per effect, in hex-float notation.
pub fn dump_povm(e: &Povm) -> String {
    let mut out = String::new();
    write_povm(&mut out, e);
    out
}

fn write_povm(out: &mut String, e: &Povm) {
    let _ = writeln!(out, "povm dim={} outcomes={}", e.dim, e.outcomes());
    for (a, eff) in e.effects.iter().enumerate() {
        if a > 0 {
            out.push('\n');
        }
        write_effect(out, eff.matrix());
    }
}

/// `channel dim=<d> inputs=<n> outcomes=<k>` followed by one POVM section
/// per input.
pub fn dump_channel(ch: &FiniteChannel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "channel dim={} inputs={} outcomes={}",
        ch.dim,
        ch.inputs(),
        ch.outcomes()
    );
    for p in &ch.povms {
        write_povm(&mut out, p);
    }
    out
}

pub(crate) struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(text::content_lines(src));
        Self {
            inner: it.peekable(),
            last: 0,
        }
    }

    pub(crate) fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(Error::parse(
                self.last + 1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    pub(crate) fn finish(mut self) -> Result<()> {
        match self.inner.next() {
            Some((n, l)) => Err(Error::parse(n, format!("unexpected trailing content `{l}`"))),
            None => Ok(()),
        }
    }
}

pub(crate) fn read_matrix(lines: &mut Lines<'_>, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (n, line) = lines.next_line("a matrix row")?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Error::parse(
                n,
                format!("expected {cols} entries, found {}", entries.len()),
            ));
        }
        for tok in entries {
            let (re, im) = tok
                .split_once(',')
                .ok_or_else(|| Error::parse(n, format!("expected `re,im`, found `{tok}`")))?;
            data.push(C64::new(text::parse_f64(re, n)?, text::parse_f64(im, n)?));
        }
    }
    ComplexMatrix::new(rows, cols, data).map_err(|e| Error::parse(lines.last, e.to_string()))
}

fn read_povm(lines: &mut Lines<'_>) -> Result<Povm> {
    let (n, header) = lines.next_line("a `povm` header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "povm" {
        return Err(Error::parse(n, "expected `povm dim=<d> outcomes=<k>`"));
    }
    let dim = text::parse_keyed(toks[1], "dim", n)?;
    let outcomes = text::parse_keyed(toks[2], "outcomes", n)?;
    if dim == 0 || outcomes == 0 {
        return Err(Error::parse(n, "dim and outcomes must be positive"));
    }
    let mut effects = Vec::with_capacity(outcomes);
    for _ in 0..outcomes {
        let m = read_matrix(lines, dim, dim)?;
        effects.push(HermitianOperator::new(m).map_err(|e| Error::parse(n, e.to_string()))?);
    }
    Povm::new(effects).map_err(|e| Error::parse(n, e.to_string()))
}

pub fn load_povm(src: &str) -> Result<Povm> {
    let mut lines = Lines::new(src);
    let p = read_povm(&mut lines)?;
    lines.finish()?;
    Ok(p)
}

pub fn load_channel(src: &str) -> Result<FiniteChannel> {
    let mut lines = Lines::new(src);
    let (n, header) = lines.next_line("a `channel` header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "channel" {
        return Err(Error::parse(n, "expected `channel dim=<d> inputs=<n> outcomes=<k>`"));
    }
    let dim = text::parse_keyed(toks[1], "dim", n)?;
    let inputs = text::parse_keyed(toks[2], "inputs", n)?;
    let outcomes = text::parse_keyed(toks[3], "outcomes", n)?;
    let mut povms = Vec::with_capacity(inputs);
    for _ in 0..inputs {
        let line = lines.last + 1;
        let p = read_povm(&mut lines)?;
        if p.dim() != dim || p.outcomes() != outcomes {
            return Err(Error::parse(line, "POVM section does not match the channel header"));
        }
        povms.push(p);
    }
    lines.finish()?;
    FiniteChannel::new(povms).map_err(|e| Error::parse(n, e.to_string()))
}
