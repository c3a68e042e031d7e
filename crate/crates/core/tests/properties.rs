mod common;

use common::*;
use mintwist::algebra::{random_element, AlgebraElement};
use mintwist::clifford::{build_gammas, hodge_star, ConstantForm};
use mintwist::krein::{
    check_hermitian_product, implementer_residual, krein_decompose, select_hermitian_invertible, solve_implementers,
    twisted_product, twisted_unitary_algebra_dim, verify_fundamental_symmetry,
};
use mintwist::numerics::hermitian_eigendecompose;
use mintwist::twist::{build_minimal_twist, DoubledElement, MinimalTwist};
use mintwist::{builtin, ComplexMatrix, Tolerance, C64, BUILTIN_NAMES};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn twist_of(name: &str) -> MinimalTwist {
    let md = builtin(name).unwrap();
    build_minimal_twist(&md.triple, md.twist_operator.as_ref().unwrap(), Tolerance::default()).unwrap()
}

fn doubled(mt: &MinimalTwist, seed: u64) -> DoubledElement {
    let spec = mt.base().rep.algebra();
    DoubledElement::new(random_element(spec, seed), random_element(spec, seed ^ 0x5a5a))
}

fn mat_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| ComplexMatrix::from_vec(n, n, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representation_is_a_star_homomorphism(idx in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let md = builtin(BUILTIN_NAMES[idx]).unwrap();
        let rep = &md.triple.rep;
        let a = random_element(rep.algebra(), s1);
        let b = random_element(rep.algebra(), s2);
        let pa = rep.represent(&a).unwrap();
        let pb = rep.represent(&b).unwrap();
        prop_assert!(rep.represent(&a.mul(&b)).unwrap().distance(&(&pa * &pb)) < 1e-12);
        prop_assert!(rep.represent(&a.star()).unwrap().distance(&pa.adjoint()) < 1e-12);
        prop_assert!(rep.represent(&AlgebraElement::one(rep.algebra())).unwrap().distance(&ComplexMatrix::identity(rep.total_dim())) < 1e-14);
    }

    #[test]
    fn doubled_representation_is_multiplicative(idx in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let mt = twist_of(BUILTIN_NAMES[idx]);
        let (a, b) = (doubled(&mt, s1), doubled(&mt, s2));
        let pa = mt.doubled_represent(&a).unwrap();
        let pb = mt.doubled_represent(&b).unwrap();
        prop_assert!(mt.doubled_represent(&a.mul(&b)).unwrap().distance(&(&pa * &pb)) < 1e-12);
        prop_assert!(mt.doubled_represent(&a.star()).unwrap().distance(&pa.adjoint()) < 1e-12);
    }

    #[test]
    fn twisted_commutator_obeys_twisted_leibniz(idx in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let mt = twist_of(BUILTIN_NAMES[idx]);
        let (a, b) = (doubled(&mt, s1), doubled(&mt, s2));
        let lhs = mt.twisted_commutator(&a.mul(&b)).unwrap();
        let rhs = &(&mt.twisted_commutator(&a).unwrap() * &mt.doubled_represent(&b).unwrap())
            + &(&mt.doubled_represent(&a.flip()).unwrap() * &mt.twisted_commutator(&b).unwrap());
        prop_assert!(lhs.distance(&rhs) < 1e-11);
    }

    #[test]
    fn implementers_conjugate_to_the_flip(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mt = twist_of("manifold-fiber");
        let space = solve_implementers(&mt, tol);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = ComplexMatrix::zeros(4, 4);
        for b in &space.basis {
            r += &b.scale_real(rand::Rng::random_range(&mut rng, -1.0..1.0));
        }
        prop_assert!(implementer_residual(&mt, &r) < 1e-12);
        if let Some(inv) = r.inverse() {
            let d = doubled(&mt, seed);
            let lhs = &(&r * &mt.doubled_represent(&d).unwrap()) * &inv;
            let scale = r.max_norm() * inv.max_norm();
            prop_assert!(lhs.distance(&mt.doubled_represent(&d.flip()).unwrap()) < 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(x in mat_strategy(5)) {
        let h = &x + &x.adjoint();
        let e = hermitian_eigendecompose(&h, Tolerance::default()).unwrap();
        prop_assert!(e.apply_spectral(|v| v).distance(&h) < 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let gram = &e.vectors.adjoint() * &e.vectors;
        prop_assert!(gram.distance(&ComplexMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn krein_decomposition_gives_a_fundamental_symmetry(x in mat_strategy(4)) {
        let tol = Tolerance::default();
        let h = &x + &x.adjoint();
        if let Ok(k) = krein_decompose(&h, tol) {
            prop_assume!(k.lambda_min > 1e-6);
            prop_assert_eq!(k.signature.0 + k.signature.1, 4);
            prop_assert!(verify_fundamental_symmetry(&h, &k.fundamental_symmetry, tol));
            for v in &k.h_plus_basis {
                prop_assert!(twisted_product(&h, v, v).unwrap().re > 0.0);
            }
            for v in &k.h_minus_basis {
                prop_assert!(twisted_product(&h, v, v).unwrap().re < 0.0);
            }
        }
    }

    #[test]
    fn hermitian_product_iff_hermitian_operator(x in mat_strategy(3), s in any::<u64>()) {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        for r in [x.clone(), &x + &x.adjoint()] {
            let symmetric = (0..8).all(|_| {
                let (p, q) = (seeded_vec(&mut rng, 3), seeded_vec(&mut rng, 3));
                let a = twisted_product(&r, &p, &q).unwrap();
                let b = twisted_product(&r, &q, &p).unwrap().conj();
                (a - b).norm() < 1e-10
            });
            prop_assert_eq!(symmetric, check_hermitian_product(&r, tol));
        }
    }

    #[test]
    fn hodge_star_squares_to_sign(k in 0usize..=4, v in prop::collection::vec(-1.0f64..1.0, 6)) {
        let n = [1, 4, 6, 4, 1][k];
        let w = ConstantForm::new(k, v[..n].iter().map(|&a| C64::new(a, 0.0)).collect()).unwrap();
        let sign = if (k * (4 - k)) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(hodge_star(&hodge_star(&w)).max_abs_difference(&w.scale(C64::new(sign, 0.0))) < 1e-15);
    }

    #[test]
    fn matrix_json_round_trip(x in mat_strategy(3)) {
        let v = x.to_json_value();
        prop_assert_eq!(ComplexMatrix::from_json_value(&v, "$").unwrap(), x);
    }
}

#[test]
fn large_hermitian_twisted_unitary_dimension() {
    let tol = Tolerance::default();
    let g0 = build_gammas().gammas[0].kron(&ComplexMatrix::identity(8));
    assert_eq!(twisted_unitary_algebra_dim(&g0, tol).unwrap(), 32 * 32);
}

#[test]
fn selected_implementers_are_hermitian_invertible() {
    let tol = Tolerance::default();
    for name in ["manifold-fiber", "electrodynamics", "sm-structural"] {
        let mt = twist_of(name);
        let r = select_hermitian_invertible(&solve_implementers(&mt, tol), None, tol).unwrap();
        assert!(r.is_hermitian(tol));
        assert!(krein_decompose(&r, tol).unwrap().lambda_min > 1e-6, "{name}");
        assert!(implementer_residual(&mt, &r) < 1e-10);
    }
}
