//! Implementing operators of a minimal twist and the Krein structure of the
//! twisted product `(ψ, φ)_R = ⟨ψ, Rφ⟩`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eigendecompose, inner, min_singular_value, nullspace, realify, top_singular_pair, ComplexMatrix,
    RealMatrix, Tolerance, C64, I, ONE, ZERO,
};
use crate::twist::MinimalTwist;

const SEARCH_SEED: u64 = 0x006b_7265_696e;
const SEARCH_TRIES: usize = 64;
const INVERTIBILITY_PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpandabilityReport {
    pub dims_equal: bool,
    pub traces_equal: bool,
    pub rank_plus: usize,
    pub rank_minus: usize,
    /// Max over the algebra basis of `|Tr p₊π(a) − Tr p₋π(a)|`.
    pub trace_residual: f64,
}

/// Necessary conditions for an implementer to exist: the eigenspaces of `T`
/// have equal dimension and `Tr p₊π(a) = Tr p₋π(a)` for all `a`.
pub fn expandability_necessary(mt: &MinimalTwist, tol: Tolerance) -> ExpandabilityReport {
    let rank_plus = mt.p_plus().trace().re.round() as usize;
    let rank_minus = mt.p_minus().trace().re.round() as usize;
    let trace_residual = mt
        .base()
        .rep
        .represented_basis()
        .iter()
        .map(|a| ((mt.p_plus() * a).trace() - (mt.p_minus() * a).trace()).norm())
        .fold(0.0, f64::max);
    ExpandabilityReport {
        dims_equal: rank_plus == rank_minus,
        traces_equal: tol.accepts(trace_residual),
        rank_plus,
        rank_minus,
        trace_residual,
    }
}

/// Real span of operators implementing the flip: `{R, T} = 0`, `[R, π(a)] = 0`
/// and `R` invertible.
///
/// The linear constraints alone always admit a solution space (of dimension
/// [`Self::constraint_solution_dimension`]); it only consists of implementers
/// if it contains an invertible operator, in which case invertible elements
/// are dense in it and span it. Otherwise the space is empty.
#[derive(Debug, Clone)]
pub struct ImplementerSpace {
    /// Orthonormal for `Re Tr(X† Y)`.
    pub basis: Vec<ComplexMatrix>,
    pub real_dimension: usize,
    pub constraint_solution_dimension: usize,
}

impl ImplementerSpace {
    /// A space given directly by a real basis (orthonormalized here).
    pub fn from_basis(basis: &[ComplexMatrix]) -> Self {
        let n = basis.first().map_or(0, ComplexMatrix::rows);
        let vectors: Vec<Vec<f64>> = basis.iter().map(|b| realify(b.entries())).collect();
        let basis: Vec<ComplexMatrix> = crate::numerics::real_orthonormal_span(&vectors)
            .iter()
            .map(|v| ComplexMatrix::from_vec(n, n, crate::numerics::complexify(v)).expect("square"))
            .collect();
        let d = basis.len();
        Self { basis, real_dimension: d, constraint_solution_dimension: d }
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Max-norm distance from `m` to the real span.
    pub fn projection_residual(&self, m: &ComplexMatrix) -> f64 {
        let mut r = m.clone();
        for b in &self.basis {
            r = &r - &b.scale_real(b.hs_inner(m).re);
        }
        r.max_norm()
    }

    pub fn contains(&self, m: &ComplexMatrix, tol: Tolerance) -> bool {
        self.basis.first().is_some_and(|b| b.rows() == m.rows() && b.cols() == m.cols())
            && tol.accepts(self.projection_residual(m))
    }
}

/// `max(‖RT + TR‖, max_a ‖[R, π(a)]‖)`.
pub fn implementer_residual(mt: &MinimalTwist, r: &ComplexMatrix) -> f64 {
    let t = mt.t_op();
    mt.base()
        .rep
        .represented_basis()
        .iter()
        .map(|a| r.commutator(a).max_norm())
        .fold(r.anticommutator(t).max_norm(), f64::max)
}

/// `max_d ‖R π′(d) R⁻¹ − π′(ρ(d))‖` over the doubled basis.
pub fn flip_implementation_residual(mt: &MinimalTwist, r: &ComplexMatrix) -> Result<f64> {
    let inv = r.inverse().ok_or(Error::Singular { lambda_min: 0.0 })?;
    Ok(mt
        .doubled_basis_images()
        .iter()
        .zip(mt.flipped_basis_images())
        .map(|(a, fa)| (&(&(r * a) * &inv) - fa).max_norm())
        .fold(0.0, f64::max))
}

/// Solves the implementer constraints blockwise in the eigenbasis of `T`,
/// where `R = [[0, X], [Y, 0]]` with `π₊X = Xπ₋` and `π₋Y = Yπ₊`.
pub fn solve_implementers(mt: &MinimalTwist, tol: Tolerance) -> ImplementerSpace {
    let n = mt.dim();
    let eig = hermitian_eigendecompose(mt.t_op(), tol).expect("validated twisting operator");
    let p = eig.values.iter().filter(|&&v| v > 0.0).count();
    let q = n - p;
    let u = &eig.vectors;
    let ud = u.adjoint();
    let reps: Vec<ComplexMatrix> = mt.base().rep.represented_basis().iter().map(|a| &(&ud * a) * u).collect();
    let plus: Vec<ComplexMatrix> = reps.iter().map(|a| a.block(0, 0, p, p)).collect();
    let minus: Vec<ComplexMatrix> = reps.iter().map(|a| a.block(p, p, q, q)).collect();

    let mut complex_basis = Vec::new();
    for x in intertwiners(&plus, &minus) {
        let mut r = ComplexMatrix::zeros(n, n);
        for i in 0..p {
            for j in 0..q {
                r[(i, p + j)] = x[(i, j)];
            }
        }
        complex_basis.push(&(u * &r) * &ud);
    }
    for y in intertwiners(&minus, &plus) {
        let mut r = ComplexMatrix::zeros(n, n);
        for i in 0..q {
            for j in 0..p {
                r[(p + i, j)] = y[(i, j)];
            }
        }
        complex_basis.push(&(u * &r) * &ud);
    }
    let basis: Vec<ComplexMatrix> =
        complex_basis.iter().flat_map(|b| [b.clone(), b.scale(I)]).collect();
    debug_assert!(basis.iter().all(|b| implementer_residual(mt, b) < 1e-8));
    let constraint_solution_dimension = basis.len();

    let has_invertible = p == q && !basis.is_empty() && {
        let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
        (0..INVERTIBILITY_PROBES).any(|_| {
            let r = random_combination(&basis, &mut rng);
            min_singular_value(&r) > 1e-8 * r.max_norm().max(1.0)
        })
    };
    if has_invertible {
        ImplementerSpace { real_dimension: basis.len(), basis, constraint_solution_dimension }
    } else {
        ImplementerSpace { basis: Vec::new(), real_dimension: 0, constraint_solution_dimension }
    }
}

/// Orthonormal basis (over ℂ) of `{X : A_k X = X B_k ∀k}`.
fn intertwiners(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let (p, q) = (a[0].rows(), b[0].rows());
    // Row-major vec: vec(AX) = (A ⊗ I) vec X, vec(XB) = (I ⊗ Bᵀ) vec X.
    let blocks: Vec<ComplexMatrix> = a
        .iter()
        .zip(b)
        .map(|(ak, bk)| &ak.kron(&ComplexMatrix::identity(q)) - &ComplexMatrix::identity(p).kron(&bk.transpose()))
        .collect();
    let rows = blocks.len() * p * q;
    let mut stacked = ComplexMatrix::zeros(rows, p * q);
    for (k, blk) in blocks.iter().enumerate() {
        for i in 0..p * q {
            for j in 0..p * q {
                stacked[(k * p * q + i, j)] = blk[(i, j)];
            }
        }
    }
    nullspace(&stacked, Tolerance::default())
        .into_iter()
        .map(|v| ComplexMatrix::from_vec(p, q, v).expect("p*q entries"))
        .collect()
}

fn random_combination(basis: &[ComplexMatrix], rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let n = basis[0].rows();
    let mut r = ComplexMatrix::zeros(n, n);
    for b in basis {
        r += &b.scale_real(rng.random_range(-1.0..=1.0));
    }
    r
}

fn smallest_abs_eigenvalue(r: &ComplexMatrix, tol: Tolerance) -> Result<f64> {
    let eig = hermitian_eigendecompose(r, tol)?;
    Ok(eig.values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min))
}

fn is_hermitian_invertible(r: &ComplexMatrix, tol: Tolerance) -> bool {
    r.is_hermitian(tol) && smallest_abs_eigenvalue(r, tol).is_ok_and(|l| l > tol.atol())
}

/// Picks a Hermitian invertible element of the space, preferring `preference`.
pub fn select_hermitian_invertible(
    space: &ImplementerSpace,
    preference: Option<&ComplexMatrix>,
    tol: Tolerance,
) -> Result<ComplexMatrix> {
    if space.is_empty() {
        return Err(Error::NoHermitianInvertible);
    }
    if let Some(pref) = preference {
        if space.contains(pref, tol) && is_hermitian_invertible(pref, tol) {
            return Ok(pref.clone());
        }
    }
    // Real coefficients c with Σ c_k B_k Hermitian.
    let columns: Vec<Vec<f64>> = space.basis.iter().map(|b| realify((b - &b.adjoint()).entries())).collect();
    let slice: Vec<ComplexMatrix> = RealMatrix::from_columns(&columns)
        .nullspace()
        .iter()
        .map(|c| {
            let mut h = ComplexMatrix::zeros(space.basis[0].rows(), space.basis[0].cols());
            for (ck, b) in c.iter().zip(&space.basis) {
                h += &b.scale_real(*ck);
            }
            // Remove rounding asymmetry.
            (&h + &h.adjoint()).scale_real(0.5)
        })
        .collect();
    if slice.is_empty() {
        return Err(Error::NoHermitianInvertible);
    }
    let normalized = |h: ComplexMatrix| -> ComplexMatrix {
        let scale = hermitian_eigendecompose(&h, tol)
            .map(|e| e.values.iter().fold(0.0_f64, |a, v| a.max(v.abs())))
            .unwrap_or(0.0);
        if scale > 0.0 {
            h.scale_real(1.0 / scale)
        } else {
            h
        }
    };
    for h in &slice {
        let h = normalized(h.clone());
        if is_hermitian_invertible(&h, tol) {
            return Ok(h);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for _ in 0..SEARCH_TRIES {
        let h = normalized(random_combination(&slice, &mut rng));
        if is_hermitian_invertible(&h, tol) {
            return Ok(h);
        }
    }
    Err(Error::NoHermitianInvertible)
}

/// `⟨ψ, Rφ⟩`, conjugate-linear in `ψ`.
pub fn twisted_product(r: &ComplexMatrix, psi: &[C64], phi: &[C64]) -> Result<C64> {
    if !r.is_square() || psi.len() != r.rows() || phi.len() != r.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator with vectors of length {} and {}",
            r.rows(),
            r.cols(),
            psi.len(),
            phi.len()
        )));
    }
    Ok(inner(psi, &r.mul_vec(phi)))
}

/// The twisted product is Hermitian iff `R = R†`.
pub fn check_hermitian_product(r: &ComplexMatrix, tol: Tolerance) -> bool {
    r.is_hermitian(tol)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KreinAnalysis {
    pub r_op: ComplexMatrix,
    pub eigenvalues: Vec<f64>,
    /// `(p, q)`: numbers of positive and negative eigenvalues.
    pub signature: (usize, usize),
    pub h_plus_basis: Vec<Vec<C64>>,
    pub h_minus_basis: Vec<Vec<C64>>,
    pub lambda_min: f64,
    pub fundamental_symmetry: ComplexMatrix,
    /// Both `p` and `q` are nonzero.
    pub indefinite: bool,
}

/// Splits the space into the positive and negative eigenspaces of `R`.
pub fn krein_decompose(r: &ComplexMatrix, tol: Tolerance) -> Result<KreinAnalysis> {
    let eig = hermitian_eigendecompose(r, tol)?;
    let lambda_min = eig.values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    if lambda_min <= tol.atol() {
        return Err(Error::Singular { lambda_min });
    }
    let mut h_plus_basis = Vec::new();
    let mut h_minus_basis = Vec::new();
    for (k, &v) in eig.values.iter().enumerate() {
        if v > 0.0 {
            h_plus_basis.push(eig.vector(k));
        } else {
            h_minus_basis.push(eig.vector(k));
        }
    }
    let fundamental_symmetry = eig.apply_spectral(f64::signum);
    let signature = (h_plus_basis.len(), h_minus_basis.len());
    Ok(KreinAnalysis {
        r_op: r.clone(),
        eigenvalues: eig.values,
        signature,
        h_plus_basis,
        h_minus_basis,
        lambda_min,
        fundamental_symmetry,
        indefinite: signature.0 > 0 && signature.1 > 0,
    })
}

/// `F² = I`, `F` symmetric for the twisted product (`RF = F†R`) and
/// `(ψ, Fψ)_R > 0`, i.e. `RF` Hermitian positive definite.
pub fn verify_fundamental_symmetry(r: &ComplexMatrix, f: &ComplexMatrix, tol: Tolerance) -> bool {
    if !r.is_square() || r.rows() != f.rows() || !f.is_square() || !is_hermitian_invertible(r, tol) {
        return false;
    }
    let id = ComplexMatrix::identity(r.rows());
    if !tol.accepts((&(f * f) - &id).max_norm()) {
        return false;
    }
    let rf = r * f;
    if !tol.accepts((&rf - &(&f.adjoint() * r)).max_norm()) {
        return false;
    }
    hermitian_eigendecompose(&rf, tol)
        .is_ok_and(|e| e.values.iter().all(|&v| v > tol.atol()))
}

/// `max_{i,j} |⟨e_i, e_j⟩ − (e_i, R⁻¹ e_j)_R|`.
pub fn hilbert_recovery_residual(r: &ComplexMatrix, tol: Tolerance) -> Result<f64> {
    let lambda_min = smallest_abs_eigenvalue(r, tol)?;
    if lambda_min <= tol.atol() {
        return Err(Error::Singular { lambda_min });
    }
    let inv = r.inverse().ok_or(Error::Singular { lambda_min })?;
    let n = r.rows();
    let mut res: f64 = 0.0;
    for j in 0..n {
        let mut ej = vec![ZERO; n];
        ej[j] = ONE;
        let v = inv.mul_vec(&ej);
        for i in 0..n {
            let mut ei = vec![ZERO; n];
            ei[i] = ONE;
            let expect = if i == j { ONE } else { ZERO };
            res = res.max((twisted_product(r, &ei, &v)? - expect).norm());
        }
    }
    Ok(res)
}

/// The Hilbert product is recovered as `⟨ψ, φ⟩ = (ψ, R⁻¹φ)_R`.
pub fn recover_hilbert_product(r: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    Ok(tol.accepts(hilbert_recovery_residual(r, tol)?))
}

/// Vectors `ψ = (φ₊, φ₋)` and `ψ̃ = (φ₊, −φ₋)` in the eigenbasis of `T` whose
/// twisted products have opposite signs.
#[derive(Debug, Clone)]
pub struct IndefinitenessWitness {
    pub psi: Vec<C64>,
    pub psi_tilde: Vec<C64>,
    pub product_psi: f64,
    pub product_psi_tilde: f64,
}

/// Builds the witness pair from the top singular pair of the block `ℛ` of
/// `R` coupling the `−1` eigenspace of `T` to the `+1` eigenspace.
pub fn indefiniteness_witness(mt: &MinimalTwist, r: &ComplexMatrix, tol: Tolerance) -> Result<IndefinitenessWitness> {
    let eig = hermitian_eigendecompose(mt.t_op(), tol)?;
    let n = mt.dim();
    let p = eig.values.iter().filter(|&&v| v > 0.0).count();
    let u_plus = eig.vectors.block(0, 0, n, p);
    let u_minus = eig.vectors.block(0, p, n, n - p);
    let coupling = &(&u_plus.adjoint() * r) * &u_minus;
    let (_, phi_plus, phi_minus) = top_singular_pair(&coupling);
    let a = u_plus.mul_vec(&phi_plus);
    let b = u_minus.mul_vec(&phi_minus);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi: Vec<C64> = a.iter().zip(&b).map(|(x, y)| (x + y) * s).collect();
    let psi_tilde: Vec<C64> = a.iter().zip(&b).map(|(x, y)| (x - y) * s).collect();
    let product_psi = twisted_product(r, &psi, &psi)?.re;
    let product_psi_tilde = twisted_product(r, &psi_tilde, &psi_tilde)?.re;
    Ok(IndefinitenessWitness { psi, psi_tilde, product_psi, product_psi_tilde })
}

/// `u† R u = R`.
pub fn is_twisted_unitary(r: &ComplexMatrix, u: &ComplexMatrix, tol: Tolerance) -> bool {
    r.is_square()
        && u.is_square()
        && r.rows() == u.rows()
        && tol.accepts((&(&u.adjoint() * r) * u).distance(r))
}

/// Real dimension of `{X : X†R + RX = 0}`, the Lie algebra of the group
/// preserving the twisted product.
///
/// Up to 16×16, or for non-Hermitian `R`, the full ℝ-linear system on `X` is
/// solved. Beyond that a Hermitian `R` allows the substitution `Y = RX` (a
/// bijection for invertible `R`), turning the system into `Y + Y† = 0`, which
/// splits into independent entry pairs.
pub fn twisted_unitary_algebra_dim(r: &ComplexMatrix, tol: Tolerance) -> Result<usize> {
    let n = r.ensure_square()?;
    let smin = min_singular_value(r);
    if smin <= tol.atol() {
        return Err(Error::Singular { lambda_min: smin });
    }
    if n <= 16 || !r.is_hermitian(tol) {
        let map = RealMatrix::of_real_linear_map(n * n, |x| {
            let xm = ComplexMatrix::from_vec(n, n, x.to_vec()).expect("n*n entries");
            (&(&xm.adjoint() * r) + &(r * &xm)).entries().to_vec()
        });
        return Ok(map.nullspace().len());
    }
    let mut dim = 0;
    for i in 0..n {
        // Y_ii + conj(Y_ii) = 0 leaves the imaginary part free.
        dim += RealMatrix::of_real_linear_map(1, |y| vec![y[0] + y[0].conj()]).nullspace().len();
        for _ in i + 1..n {
            let pair = RealMatrix::of_real_linear_map(2, |y| vec![y[0] + y[1].conj(), y[1] + y[0].conj()]);
            dim += pair.nullspace().len();
        }
    }
    Ok(dim)
}

/// `max_d ‖R π′(d)† R⁻¹ − R† π′(d)† (R⁻¹)†‖`: the two expressions of
/// `π′(ρ(d*))` and `π′((ρ⁻¹(d))*)` when `ρ` is implemented by `R`.
pub fn rho_unitarity_residual(mt: &MinimalTwist, r: &ComplexMatrix) -> Result<f64> {
    let inv = r.inverse().ok_or(Error::Singular { lambda_min: 0.0 })?;
    let rd = r.adjoint();
    let inv_d = inv.adjoint();
    Ok(mt
        .doubled_basis_images()
        .iter()
        .map(|a| {
            let ad = a.adjoint();
            (&(&(r * &ad) * &inv) - &(&(&rd * &ad) * &inv_d)).max_norm()
        })
        .fold(0.0, f64::max))
}

pub fn check_rho_unitarity(mt: &MinimalTwist, r: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    Ok(tol.accepts(rho_unitarity_residual(mt, r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn gamma0() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0., 1.], &[1., 0.]]).unwrap().kron(&ComplexMatrix::identity(2))
    }

    #[test]
    fn gamma0_decomposition() {
        let k = krein_decompose(&gamma0(), tol()).unwrap();
        assert_eq!(k.signature, (2, 2));
        assert!((k.lambda_min - 1.0).abs() < 1e-12);
        assert!(k.indefinite);
        assert!(verify_fundamental_symmetry(&gamma0(), &k.fundamental_symmetry, tol()));
        // γ⁰ is unitary, so it is its own fundamental symmetry.
        assert!(verify_fundamental_symmetry(&gamma0(), &gamma0(), tol()));
        assert!(!verify_fundamental_symmetry(&gamma0(), &ComplexMatrix::identity(4), tol()));
    }

    #[test]
    fn definite_and_singular_products() {
        let k = krein_decompose(&ComplexMatrix::identity(4), tol()).unwrap();
        assert_eq!(k.signature, (4, 0));
        assert!(!k.indefinite);
        let err = krein_decompose(&ComplexMatrix::diag_real(&[1.0, 0.0]), tol()).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
        let err = krein_decompose(&ComplexMatrix::identity(2).scale(I), tol()).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn gamma0_products() {
        let g = gamma0();
        let e0 = [ONE, ZERO, ZERO, ZERO];
        assert_eq!(twisted_product(&g, &e0, &e0).unwrap(), ZERO);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(s, 0.), ZERO, c(s, 0.), ZERO];
        let psi_t = [c(s, 0.), ZERO, c(-s, 0.), ZERO];
        assert!((twisted_product(&g, &psi, &psi).unwrap() - ONE).norm() < 1e-15);
        assert!((twisted_product(&g, &psi_t, &psi_t).unwrap() + ONE).norm() < 1e-15);
        assert!(matches!(twisted_product(&g, &e0[..3], &e0), Err(Error::DimensionMismatch(_))));
        let v = [c(1., 2.), c(0., 1.), c(-1., 0.5), c(3., 0.)];
        assert!((twisted_product(&ComplexMatrix::identity(4), &v, &e0).unwrap() - inner(&v, &e0)).norm() < 1e-15);
    }

    #[test]
    fn hermitian_product_detection() {
        assert!(check_hermitian_product(&gamma0(), tol()));
        assert!(!check_hermitian_product(&ComplexMatrix::identity(3).scale(I), tol()));
        let mut h = gamma0();
        h[(0, 1)] += c(0.0, 1e-6);
        assert!(!check_hermitian_product(&h, tol()));
    }

    #[test]
    fn hilbert_product_recovery() {
        for r in [gamma0(), ComplexMatrix::identity(3).scale_real(2.0), ComplexMatrix::diag_real(&[1., -1.])] {
            assert!(recover_hilbert_product(&r, tol()).unwrap());
        }
        assert!(matches!(
            recover_hilbert_product(&ComplexMatrix::diag_real(&[1., 0.]), tol()),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn twisted_unitaries() {
        let g = gamma0();
        assert!(is_twisted_unitary(&g, &ComplexMatrix::identity(4), tol()));
        for theta in [0.1, 0.7, 2.3] {
            // exp(iθγ⁰) = cos θ I + i sin θ γ⁰ since (γ⁰)² = I.
            let u = &ComplexMatrix::identity(4).scale_real(f64::cos(theta)) + &g.scale(c(0.0, f64::sin(theta)));
            assert!(is_twisted_unitary(&g, &u, tol()));
        }
        assert!(!is_twisted_unitary(&g, &ComplexMatrix::diag_real(&[2., 1., 1., 1.]), tol()));
    }

    #[test]
    fn unitary_algebra_dimensions() {
        assert_eq!(twisted_unitary_algebra_dim(&gamma0(), tol()).unwrap(), 16);
        assert_eq!(twisted_unitary_algebra_dim(&ComplexMatrix::identity(2), tol()).unwrap(), 4);
        assert_eq!(twisted_unitary_algebra_dim(&ComplexMatrix::diag_real(&[1., -1.]), tol()).unwrap(), 4);
        // Both code paths agree.
        let big = ComplexMatrix::diag_real(&[1.0; 17].iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -v }).collect::<Vec<_>>());
        assert_eq!(twisted_unitary_algebra_dim(&big, tol()).unwrap(), 17 * 17);
        assert!(matches!(
            twisted_unitary_algebra_dim(&ComplexMatrix::diag_real(&[1., 0.]), tol()),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn symmetrized_selection() {
        let e12 = ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]).unwrap();
        let e21 = e12.transpose();
        let space = ImplementerSpace::from_basis(&[e12, e21]);
        let r = select_hermitian_invertible(&space, None, tol()).unwrap();
        assert!(r.is_hermitian(tol()));
        assert!(r.distance(&ComplexMatrix::from_real_rows(&[&[0., 1.], &[1., 0.]]).unwrap()) < 1e-12
            || r.distance(&ComplexMatrix::from_real_rows(&[&[0., -1.], &[-1., 0.]]).unwrap()) < 1e-12);
        let empty = ImplementerSpace { basis: vec![], real_dimension: 0, constraint_solution_dimension: 0 };
        assert_eq!(select_hermitian_invertible(&empty, None, tol()), Err(Error::NoHermitianInvertible));
    }

    #[test]
    fn rho_unitarity_needs_a_hermitian_implementer() {
        use crate::algebra::{AlgebraSpec, Representation, SummandKind};
        use crate::triple::FiniteTriple;
        use crate::twist::build_minimal_twist;
        let rep = Representation::new(AlgebraSpec::new(vec![SummandKind::Complex]).unwrap(), vec![(0, 2, false).into()])
            .unwrap();
        let st = FiniteTriple::new(rep, ComplexMatrix::zeros(2, 2)).unwrap();
        let mt = build_minimal_twist(&st, &ComplexMatrix::diag_real(&[1., -1.]), tol()).unwrap();
        let swap = ComplexMatrix::from_real_rows(&[&[0., 1.], &[1., 0.]]).unwrap();
        assert!(check_rho_unitarity(&mt, &swap, tol()).unwrap());
        let shear = ComplexMatrix::from_real_rows(&[&[1., 1.], &[0., 1.]]).unwrap();
        assert!((rho_unitarity_residual(&mt, &shear).unwrap() - 1.0).abs() < 1e-12);
        assert!(!check_rho_unitarity(&mt, &shear, tol()).unwrap());
    }
}
