mod common;

use common::*;
use mintwist::krein::{solve_implementers, twisted_unitary_algebra_dim, implementer_residual};
use mintwist::twist::{build_minimal_twist, selfadjoint_fluctuation_space, twisted_one_form_space};
use mintwist::{builtin, ComplexMatrix, ModelDescriptor, Tolerance, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ELIM_TOL: f64 = 1e-9;

type LinearMap = dyn Fn(&ComplexMatrix) -> ComplexMatrix;

fn projections(t: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let id = ComplexMatrix::identity(t.rows());
    ((&id + t).scale_real(0.5), (&id - t).scale_real(0.5))
}

/// `π′` and `π′∘ρ` on the doubled basis, built directly from `π` and `T`.
fn doubled_pairs(md: &ModelDescriptor) -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let (pp, pm) = projections(md.twist_operator.as_ref().unwrap());
    let basis = md.triple.rep.represented_basis();
    let mut out = Vec::new();
    for a in &basis {
        out.push((&pp * a, &pm * a));
        out.push((&pm * a, &pp * a));
    }
    out
}

/// Complex solution space of `R π′(a′) = π′(ρ(a′)) R` over the doubled basis.
fn implementer_oracle(md: &ModelDescriptor) -> Vec<ComplexMatrix> {
    let n = md.triple.dim();
    let pairs = doubled_pairs(md);
    let maps: Vec<Box<LinearMap>> = pairs
        .into_iter()
        .map(|(a, fa)| Box::new(move |x: &ComplexMatrix| &(x * &a) - &(&fa * x)) as Box<LinearMap>)
        .collect();
    let refs: Vec<&LinearMap> = maps.iter().map(|b| b.as_ref()).collect();
    null_basis(complex_linear_rows(n, &refs), n * n, ELIM_TOL).iter().map(|v| unvec(n, v)).collect()
}

fn has_invertible(basis: &[ComplexMatrix], seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = basis[0].rows();
    (0..4).any(|_| {
        let mut r = ComplexMatrix::zeros(n, n);
        for b in basis {
            r += &b.scale(C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        }
        det(&r).norm() > 1e-6
    })
}

#[test]
fn implementer_space_matches_elimination_oracle() {
    let tol = Tolerance::default();
    for name in ["manifold-fiber", "c-on-c3", "c-m2-on-c10", "electrodynamics"] {
        let md = builtin(name).unwrap();
        let mt = build_minimal_twist(&md.triple, md.twist_operator.as_ref().unwrap(), tol).unwrap();
        let space = solve_implementers(&mt, tol);
        let oracle = implementer_oracle(&md);
        assert_eq!(space.constraint_solution_dimension, 2 * oracle.len(), "{name}");
        let expected = if !oracle.is_empty() && has_invertible(&oracle, 7) { 2 * oracle.len() } else { 0 };
        assert_eq!(space.real_dimension, expected, "{name}");
        for r in &oracle {
            if expected > 0 {
                assert!(space.projection_residual(r) < 1e-9, "{name}: oracle vector outside library span");
            }
        }
        for b in &space.basis {
            assert!(implementer_residual(&mt, b) < 1e-10, "{name}");
        }
    }
}

#[test]
fn pinned_implementer_dimensions() {
    let tol = Tolerance::default();
    let expect = [("manifold-fiber", 16, 16), ("c-on-c3", 0, 8), ("c-m2-on-c10", 0, 20), ("electrodynamics", 128, 128)];
    for (name, dim, cons) in expect {
        let md = builtin(name).unwrap();
        let mt = build_minimal_twist(&md.triple, md.twist_operator.as_ref().unwrap(), tol).unwrap();
        let s = solve_implementers(&mt, tol);
        assert_eq!((s.real_dimension, s.constraint_solution_dimension), (dim, cons), "{name}");
    }
}

#[test]
fn twisted_unitary_dimension_matches_oracle() {
    let tol = Tolerance::default();
    let g0 = mintwist::clifford::build_gammas().gammas[0].clone();
    assert_eq!(unitary_oracle(&g0), 16);
    assert_eq!(twisted_unitary_algebra_dim(&g0, tol).unwrap(), 16);
    let d = ComplexMatrix::diag_real(&[1.0, -1.0]);
    assert_eq!(unitary_oracle(&d), 4);
    assert_eq!(twisted_unitary_algebra_dim(&d, tol).unwrap(), 4);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=4 {
        for _ in 0..5 {
            let x = seeded_matrix(&mut rng, n);
            let herm = &x + &x.adjoint();
            for r in [x, herm] {
                assert_eq!(twisted_unitary_algebra_dim(&r, tol).unwrap(), unitary_oracle(&r), "n={n}");
            }
        }
    }
}

/// Real dimension of `{A ∈ span(gens) : A + JAJ⁻¹ selfadjoint}` from the
/// generators of the one-form space.
fn selfadjoint_oracle(gens: &[ComplexMatrix], j: &ComplexMatrix) -> usize {
    let n = gens[0].rows();
    let m = gens.len();
    let combine = |x: &[f64]| {
        let mut a = ComplexMatrix::zeros(n, n);
        for (k, g) in gens.iter().enumerate() {
            a += &g.scale(C64::new(x[k], x[m + k]));
        }
        a
    };
    let rows_of = |f: &dyn Fn(&ComplexMatrix) -> ComplexMatrix| {
        let cols: Vec<Vec<C64>> = (0..2 * m)
            .map(|k| {
                let mut x = vec![0.0; 2 * m];
                x[k] = 1.0;
                let y = f(&combine(&x));
                y.entries().iter().flat_map(|z| [C64::new(z.re, 0.0), C64::new(z.im, 0.0)]).collect()
            })
            .collect();
        (0..cols[0].len()).map(|r| cols.iter().map(|c| c[r]).collect::<Vec<_>>()).collect::<Vec<_>>()
    };
    let constraint = |a: &ComplexMatrix| {
        let h = a + &(&(j * &a.conj()) * &j.adjoint());
        &h - &h.adjoint()
    };
    let null_constraint = null_basis(rows_of(&constraint), 2 * m, ELIM_TOL).len();
    let null_combine = null_basis(rows_of(&|a: &ComplexMatrix| a.clone()), 2 * m, ELIM_TOL).len();
    null_constraint - null_combine
}

fn one_form_generators(md: &ModelDescriptor) -> Vec<ComplexMatrix> {
    let pairs = doubled_pairs(md);
    let d = &md.triple.dirac;
    let mut comms: Vec<ComplexMatrix> = pairs.iter().map(|(a, fa)| &(d * a) - &(fa * d)).collect();
    for s in &md.triple.symbol {
        comms.extend(pairs.iter().map(|(a, _)| s * a));
    }
    pairs.iter().flat_map(|(a, _)| comms.iter().map(move |x| a * x)).filter(|g| g.max_norm() > 0.0).collect()
}

#[test]
fn selfadjoint_fluctuations_match_oracle() {
    let tol = Tolerance::default();
    for name in ["manifold-fiber", "electrodynamics"] {
        let md = builtin(name).unwrap();
        let mt = build_minimal_twist(&md.triple, md.twist_operator.as_ref().unwrap(), tol).unwrap();
        let gens = one_form_generators(&md);
        let space = twisted_one_form_space(&mt, tol);
        for g in &gens {
            assert!(space.projection_residual(g) < 1e-10);
        }
        let j = &md.triple.real.as_ref().unwrap().j_matrix;
        let sa = selfadjoint_fluctuation_space(&mt, tol).unwrap();
        assert_eq!(sa.real_dimension, selfadjoint_oracle(&gens, j), "{name}");
    }
}

#[test]
fn manifold_fiber_form_dimensions() {
    let tol = Tolerance::default();
    let md = builtin("manifold-fiber").unwrap();
    let mt = build_minimal_twist(&md.triple, md.twist_operator.as_ref().unwrap(), tol).unwrap();
    assert_eq!(twisted_one_form_space(&mt, tol).dimension, 8);
    assert_eq!(selfadjoint_fluctuation_space(&mt, tol).unwrap().real_dimension, 12);
}
