//! The dense complex linear algebra underneath: eigendecomposition, square
//! roots of positive operators, and completing an isometry to a unitary.

use nlgames::linalg::{extend_isometry_to_unitary, herm_eig, psd_sqrt, ComplexMatrix, HermitianOperator, C64};

fn main() -> nlgames::Result<()> {
    let m = HermitianOperator::new(ComplexMatrix::new(
        2,
        2,
        vec![
            C64::new(2.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(2.0, 0.0),
        ],
    )?)?;
    let eig = herm_eig(&m)?;
    println!("eigenvalues {:?}", eig.values);

    let root = psd_sqrt(&m)?;
    let back = root.matrix() * root.matrix();
    println!("|sqrt(M)^2 - M| = {:.2e}", back.max_abs_diff(m.matrix()));

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = ComplexMatrix::from_real(3, 1, &[s, s, 0.0])?;
    let u = extend_isometry_to_unitary(&v)?;
    println!(
        "unitary defect {:.2e}, first column kept: {}",
        u.isometry_defect(),
        u.column(0) == v.column(0)
    );
    Ok(())
}
