mod common;

use common::*;
use nlgames::linalg::{
    extend_isometry_to_unitary, herm_eig, kron, psd_sqrt, spectral_map, ComplexMatrix, HermitianOperator,
};
use proptest::prelude::*;

fn random_hermitian(d: usize, seed: u64) -> HermitianOperator {
    let mut r = rng(seed);
    let a = random_matrix(d, d, &mut r);
    HermitianOperator::new(&a + &a.adjoint()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(d in 1usize..7, seed in any::<u64>()) {
        let m = random_hermitian(d, seed);
        let eig = herm_eig(&m).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(eig.vectors.isometry_defect() < 1e-10);
        let back = spectral_map(&eig, |v| v);
        prop_assert!(back.matrix().max_abs_diff(m.matrix()) < 1e-10 * (1.0 + m.matrix().max_abs()));
        let trace: f64 = eig.values.iter().sum();
        prop_assert!((trace - m.matrix().trace().re).abs() < 1e-9);
    }

    #[test]
    fn square_root_squares_back(d in 1usize..6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_matrix(d, d, &mut r);
        let p = HermitianOperator::new(&a * &a.adjoint()).unwrap();
        let s = psd_sqrt(&p).unwrap();
        prop_assert!(herm_eig(&s).unwrap().values.iter().all(|&v| v >= -1e-12));
        prop_assert!((s.matrix() * s.matrix()).max_abs_diff(p.matrix()) < 1e-9 * (1.0 + p.matrix().max_abs()));
    }

    #[test]
    fn isometries_complete_to_unitaries(n in 1usize..6, extra in 0usize..3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = n + extra;
        let u = random_unitary(k, &mut r);
        let v = u.block(0, 0, k, n);
        let full = extend_isometry_to_unitary(&v).unwrap();
        prop_assert!(full.isometry_defect() < 1e-10);
        prop_assert!(full.block(0, 0, k, n).max_abs_diff(&v) == 0.0);
    }

    #[test]
    fn kron_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c, d) = (random_matrix(2, 2, &mut r), random_matrix(3, 3, &mut r), random_matrix(2, 2, &mut r), random_matrix(3, 3, &mut r));
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }
}

#[test]
fn non_isometry_is_rejected() {
    let v = ComplexMatrix::from_real(2, 1, &[1.0, 1.0]).unwrap();
    assert!(extend_isometry_to_unitary(&v).is_err());
}
