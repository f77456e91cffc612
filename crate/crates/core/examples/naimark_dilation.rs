//! Projective dilations: a single POVM, a whole channel at once, and a
//! commuting pair on a common space.

use nlgames::channels::{povms_commute, FiniteChannel, Povm};
use nlgames::dilation::{joint_commuting_dilation, naimark, simultaneous_naimark};
use nlgames::linalg::{kron, pauli_x, pauli_z, ComplexMatrix, HermitianOperator};

fn main() -> nlgames::Result<()> {
    let trine = Povm::trine();
    let d = naimark(&trine)?;
    let (idem, orth) = d.projectivity_defects();
    println!("trine: K = {}", d.dilated_dim());
    println!(
        "  isometry {:.2e}  projectivity {:.2e}  orthogonality {:.2e}  reconstruction {:.2e}",
        d.isometry_defect(),
        idem,
        orth,
        d.residual
    );

    let channel = FiniteChannel::new(vec![trine.clone(), Povm::computational_basis(2)])?;
    let s = simultaneous_naimark(&channel)?;
    println!(
        "channel with {} inputs: K = {}, residual {:.2e}",
        channel.inputs(),
        s.dilated_dim(),
        s.residual
    );

    let id = ComplexMatrix::identity(2);
    let half = |op: &HermitianOperator, left: bool| {
        let m = if left {
            kron(op.matrix(), &id)
        } else {
            kron(&id, op.matrix())
        };
        let op = HermitianOperator::new(m).unwrap();
        let one = HermitianOperator::identity(4);
        Povm::new(vec![one.add(&op).scale(0.5), one.sub(&op).scale(0.5)]).unwrap()
    };
    let (e, f) = (half(&pauli_z(), true), half(&pauli_x(), false));
    println!("Z⊗I and I⊗X commute: {}", povms_commute(&e, &f)?.commute);
    let j = joint_commuting_dilation(&e, &f)?;
    println!(
        "joint: K = {}, cross-commutator {:.2e}, reconstruction {:.2e}",
        j.isometry.rows(),
        j.cross_residual,
        j.residual
    );
    Ok(())
}
