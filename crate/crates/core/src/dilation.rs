//! Finite-dimensional dilation theory and products of measures.
//!
//! Every POVM `E` on `H` is the compression `E_a = V* P_a V` of a PVM `P`
//! on a larger space `K` through an isometry `V: H -> K`. Here `K` is
//! always `H^{⊕k}` with the block square-root isometry. The simultaneous
//! version serves a whole channel with one input-independent isometry,
//! and the joint version dilates a commuting pair to commuting PVMs.

use std::fmt::Write as _;

use crate::channels::{self, FiniteChannel, Povm, Pvm, OP_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, HermitianOperator, ONE};
use crate::text;

/// Largest pre-symmetrisation defect of `E_a F_b` tolerated before the
/// product is rejected.
pub const HERMITIZATION_TOL: f64 = 1e-8;

/// An isometry together with one PVM per input that it compresses onto
/// the dilated measures.
#[derive(Clone, Debug)]
pub struct Dilation {
    pub isometry: ComplexMatrix,
    pub pvms: Vec<Pvm>,
    /// `max_{x,a} |V* P(a|x) V - E(a|x)|_max`.
    pub residual: f64,
}

impl Dilation {
    pub fn input_dim(&self) -> usize {
        self.isometry.cols()
    }

    pub fn dilated_dim(&self) -> usize {
        self.isometry.rows()
    }

    pub fn pvm(&self) -> &Pvm {
        &self.pvms[0]
    }

    pub fn isometry_defect(&self) -> f64 {
        self.isometry.isometry_defect()
    }

    /// Worst `|P^2 - P|_max` and `|P_a P_a'|_max` over all PVMs.
    pub fn projectivity_defects(&self) -> (f64, f64) {
        self.pvms
            .iter()
            .map(|p| p.as_povm().projectivity_defects())
            .fold((0.0, 0.0), |(i, o), (pi, po)| (f64::max(i, pi), f64::max(o, po)))
    }

    /// The PVMs as a channel on the dilation space.
    pub fn dilated_channel(&self) -> FiniteChannel {
        FiniteChannel::new(self.pvms.iter().map(|p| p.as_povm().clone()).collect())
            .expect("dilated PVMs share one space")
    }

    /// Compresses the PVMs back through the isometry.
    pub fn compressed(&self, x: usize, a: usize) -> HermitianOperator {
        self.pvms[x].effect(a).conjugate_by(&self.isometry)
    }
}

/// Dilation of a commuting pair to commuting PVMs `P`, `Q` through one
/// isometry, with both obtained as marginals of a single PVM `R`.
#[derive(Clone, Debug)]
pub struct CommutingDilation {
    pub isometry: ComplexMatrix,
    pub pvm_p: Pvm,
    pub pvm_q: Pvm,
    /// `R_{(a,b)}` with `P_a = sum_b R_{ab}` and `Q_b = sum_a R_{ab}`.
    pub joint: Pvm,
    /// `max_{a,b} |[P_a, Q_b]|_max`.
    pub cross_residual: f64,
    /// Worst of the three reconstructions `V*P_aV = E_a`, `V*Q_bV = F_b`
    /// and `V*P_aQ_bV = E_aF_b`.
    pub residual: f64,
}

fn block_projection(k: usize, d: usize, a: usize) -> HermitianOperator {
    let mut diag = vec![0.0; k * d];
    for v in &mut diag[a * d..(a + 1) * d] {
        *v = 1.0;
    }
    HermitianOperator::from_diag(&diag)
}

/// Naimark dilation `V h = ⊕_a E_a^{1/2} h` with `P_a` the projection onto
/// the `a`-th block of `H^{⊕k}`.
pub fn naimark(e: &Povm) -> Result<Dilation> {
    let d = e.dim();
    let k = e.outcomes();
    let mut v = ComplexMatrix::zeros(k * d, d);
    for (a, eff) in e.effects().iter().enumerate() {
        let root = linalg::psd_sqrt(eff)?;
        v.set_block(a * d, 0, root.matrix());
    }
    let pvm = Pvm::new((0..k).map(|a| block_projection(k, d, a)).collect())?;
    let mut dil = Dilation {
        isometry: v,
        pvms: vec![pvm],
        residual: 0.0,
    };
    dil.residual = reconstruction_residual(&dil, std::slice::from_ref(e));
    Ok(dil)
}

fn reconstruction_residual(dil: &Dilation, povms: &[Povm]) -> f64 {
    let mut worst: f64 = 0.0;
    for (x, p) in povms.iter().enumerate() {
        for (a, eff) in p.effects().iter().enumerate() {
            worst = worst.max(dil.compressed(x, a).matrix().max_abs_diff(eff.matrix()));
        }
    }
    worst
}

/// Dilates every POVM of a channel through one input-independent
/// isometry `W`, the coordinate inclusion of `H` into `H^{⊕k}`.
///
/// For each input the Naimark isometry `V_x` is completed to a unitary
/// `U_x` with `U_x W = V_x`; then `P(a|x) = U_x* Π_a U_x` satisfies
/// `W* P(a|x) W = V_x* Π_a V_x = E(a|x)`.
pub fn simultaneous_naimark(e: &FiniteChannel) -> Result<Dilation> {
    let d = e.dim();
    let k = e.outcomes();
    if let Some(p) = e.povms().iter().find(|p| p.dim() != d || p.outcomes() != k) {
        return Err(Error::Shape(format!(
            "channel members must share dim {d} and {k} outcomes, found dim {} with {}",
            p.dim(),
            p.outcomes()
        )));
    }
    let mut w = ComplexMatrix::zeros(k * d, d);
    for i in 0..d {
        w[(i, i)] = ONE;
    }
    let blocks: Vec<HermitianOperator> = (0..k).map(|a| block_projection(k, d, a)).collect();
    let mut pvms = Vec::with_capacity(e.inputs());
    for p in e.povms() {
        let vx = naimark(p)?.isometry;
        let ux = linalg::extend_isometry_to_unitary(&vx)?;
        let rotated = blocks.iter().map(|b| b.conjugate_by(&ux)).collect();
        pvms.push(Pvm::new(rotated)?);
    }
    let mut dil = Dilation {
        isometry: w,
        pvms,
        residual: 0.0,
    };
    dil.residual = reconstruction_residual(&dil, e.povms());
    Ok(dil)
}

/// Product measure `G_{(a,b)} = E_a F_b` of two commuting POVMs, with
/// outcomes indexed `a * |B| + b`.
pub fn product_povm_commuting(e: &Povm, f: &Povm) -> Result<Povm> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: f.dim(),
        });
    }
    channels::povms_commute(e, f)?.into_result()?;
    let mut effects = Vec::with_capacity(e.outcomes() * f.outcomes());
    for ea in e.effects() {
        for fb in f.effects() {
            let prod = ea.matrix() * fb.matrix();
            let defect = prod.hermiticity_defect();
            if defect > HERMITIZATION_TOL {
                return Err(Error::Invariant {
                    invariant: "product of commuting effects is Hermitian",
                    residual: defect,
                });
            }
            effects.push(HermitianOperator::new(prod)?);
        }
    }
    Povm::new(effects)
}

/// `(E ⊗ F)_{(a,b)} = E_a ⊗ F_b` on `H ⊗ K`.
pub fn tensor_povm(e: &Povm, f: &Povm) -> Povm {
    let mut effects = Vec::with_capacity(e.outcomes() * f.outcomes());
    for ea in e.effects() {
        for fb in f.effects() {
            let m = linalg::kron(ea.matrix(), fb.matrix());
            effects.push(HermitianOperator::new(m).expect("Kronecker product of square matrices"));
        }
    }
    Povm::new(effects).expect("tensor product of POVMs is a POVM")
}

/// Tensor product of two spectral measures, again spectral.
pub fn tensor_pvm(e: &Pvm, f: &Pvm) -> Result<Pvm> {
    Pvm::try_from(tensor_povm(e.as_povm(), f.as_povm()))
}

/// How two channels are multiplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    /// `E(a|x) F(b|y)` on the common space; requires commuting ranges.
    Commuting,
    /// `E(a|x) ⊗ F(b|y)` on the tensor product space.
    Tensor,
}

/// Product channel over inputs `x * |Y| + y` and outcomes `a * |B| + b`.
pub fn product_channel(e: &FiniteChannel, f: &FiniteChannel, mode: ProductMode) -> Result<FiniteChannel> {
    if mode == ProductMode::Commuting {
        channels::channels_commute(e, f)?.into_result()?;
    }
    let mut povms = Vec::with_capacity(e.inputs() * f.inputs());
    for pe in e.povms() {
        for pf in f.povms() {
            povms.push(match mode {
                ProductMode::Commuting => product_povm_commuting(pe, pf)?,
                ProductMode::Tensor => tensor_povm(pe, pf),
            });
        }
    }
    FiniteChannel::new(povms)
}

/// Dilates a commuting pair `E`, `F` on one space to commuting PVMs.
pub fn joint_commuting_dilation(e: &Povm, f: &Povm) -> Result<CommutingDilation> {
    let g = product_povm_commuting(e, f)?;
    let dil = naimark(&g)?;
    let joint = dil.pvms[0].clone();
    let nb = f.outcomes();
    let k = dil.dilated_dim();
    let sum =
        |idx: &mut dyn Iterator<Item = usize>| idx.fold(HermitianOperator::zeros(k), |acc, i| acc.add(joint.effect(i)));
    let p = Pvm::new(
        (0..e.outcomes())
            .map(|a| sum(&mut (0..nb).map(|b| a * nb + b)))
            .collect(),
    )?;
    let q = Pvm::new(
        (0..nb)
            .map(|b| sum(&mut (0..e.outcomes()).map(|a| a * nb + b)))
            .collect(),
    )?;

    let v = &dil.isometry;
    let mut cross: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for (a, pa) in p.effects().iter().enumerate() {
        residual = residual.max(pa.conjugate_by(v).matrix().max_abs_diff(e.effect(a).matrix()));
        for (b, qb) in q.effects().iter().enumerate() {
            cross = cross.max(linalg::commutator_norm(pa, qb)?);
            let vpqv = &(&v.adjoint() * &(pa.matrix() * qb.matrix())) * v;
            let target = e.effect(a).matrix() * f.effect(b).matrix();
            residual = residual.max(vpqv.max_abs_diff(&target));
        }
    }
    for (b, qb) in q.effects().iter().enumerate() {
        residual = residual.max(qb.conjugate_by(v).matrix().max_abs_diff(f.effect(b).matrix()));
    }
    if cross > OP_TOL {
        return Err(Error::NumericFailure {
            what: "dilated marginals fail to commute",
            residual: cross,
        });
    }
    Ok(CommutingDilation {
        isometry: dil.isometry,
        pvm_p: p,
        pvm_q: q,
        joint,
        cross_residual: cross,
        residual,
    })
}

/// Machine-readable dilation report: header, residual lines, the
/// isometry as a `K x d` block of `re,im` hex floats, then the dilated
/// PVMs in the POVM text format.
pub fn dump_dilation(dil: &Dilation) -> String {
    let (idem, orth) = dil.projectivity_defects();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "dilation dim={} k={} inputs={}",
        dil.input_dim(),
        dil.dilated_dim(),
        dil.pvms.len()
    );
    for (name, r) in [
        ("isometry", dil.isometry_defect()),
        ("projectivity", idem),
        ("orthogonality", orth),
        ("reconstruction", dil.residual),
    ] {
        let _ = writeln!(out, "residual {name} {}", text::format_sig(r, 17));
    }
    out.push_str("isometry\n");
    for i in 0..dil.isometry.rows() {
        let row: Vec<String> = (0..dil.isometry.cols())
            .map(|j| {
                let z = dil.isometry[(i, j)];
                format!("{},{}", text::format_hex_float(z.re), text::format_hex_float(z.im))
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    for p in &dil.pvms {
        out.push_str(&channels::dump_povm(p.as_povm()));
    }
    out
}

/// Machine-readable report of a joint commuting dilation: header, residual
/// lines, the isometry, then `P`, `Q` and the joint PVM.
pub fn dump_commuting_dilation(dil: &CommutingDilation) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "joint-dilation dim={} k={}",
        dil.isometry.cols(),
        dil.isometry.rows()
    );
    let (pi, po) = dil.pvm_p.as_povm().projectivity_defects();
    let (qi, qo) = dil.pvm_q.as_povm().projectivity_defects();
    for (name, r) in [
        ("isometry", dil.isometry.isometry_defect()),
        ("projectivity", pi.max(qi)),
        ("orthogonality", po.max(qo)),
        ("reconstruction", dil.residual),
        ("cross-commutation", dil.cross_residual),
    ] {
        let _ = writeln!(out, "residual {name} {}", text::format_sig(r, 17));
    }
    out.push_str("isometry\n");
    for i in 0..dil.isometry.rows() {
        let row: Vec<String> = (0..dil.isometry.cols())
            .map(|j| {
                let z = dil.isometry[(i, j)];
                format!("{},{}", text::format_hex_float(z.re), text::format_hex_float(z.im))
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    for p in [&dil.pvm_p, &dil.pvm_q, &dil.joint] {
        out.push_str(&channels::dump_povm(p.as_povm()));
    }
    out
}
