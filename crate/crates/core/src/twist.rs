//! Minimal twists of a finite triple by a twisting operator `T`.
//!
//! The algebra is doubled to `A ⊗ ℂ²`, acting as `π′(a₁, a₂) = p₊π(a₁) + p₋π(a₂)`
//! with `p± = (I ± T)/2`, and the automorphism used in twisted commutators is
//! the flip `ρ(a₁, a₂) = (a₂, a₁)`.

use crate::algebra::{algebra_basis, faithfulness_rank, AlgebraElement};
use crate::error::{Error, Result};
use crate::numerics::{
    complexify, orthonormal_span, projection_residual, real_orthonormal_span, ComplexMatrix, RealMatrix,
    Tolerance, C64,
};
use crate::triple::FiniteTriple;

/// An element `(a₁, a₂)` of the doubled algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledElement {
    pub first: AlgebraElement,
    pub second: AlgebraElement,
}

impl DoubledElement {
    pub fn new(first: AlgebraElement, second: AlgebraElement) -> Self {
        Self { first, second }
    }

    /// `(a, a)`.
    pub fn diagonal(a: &AlgebraElement) -> Self {
        Self { first: a.clone(), second: a.clone() }
    }

    pub fn flip(&self) -> Self {
        Self { first: self.second.clone(), second: self.first.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { first: self.first.mul(&other.first), second: self.second.mul(&other.second) }
    }

    pub fn star(&self) -> Self {
        Self { first: self.first.star(), second: self.second.star() }
    }
}

#[derive(Debug, Clone)]
pub struct MinimalTwist {
    base: FiniteTriple,
    t_op: ComplexMatrix,
    p_plus: ComplexMatrix,
    p_minus: ComplexMatrix,
    /// π′ of the doubled basis `(b, 0)…, (0, b)…`, in that order.
    images: Vec<ComplexMatrix>,
    /// π′ of the flipped doubled basis.
    flipped: Vec<ComplexMatrix>,
}

/// The grading, which is always an admissible twisting operator.
pub fn grading_as_twist(st: &FiniteTriple) -> Result<ComplexMatrix> {
    st.grading.clone().ok_or(Error::NoGrading)
}

pub fn build_minimal_twist(st: &FiniteTriple, t_op: &ComplexMatrix, tol: Tolerance) -> Result<MinimalTwist> {
    let n = st.dim();
    if t_op.rows() != n || t_op.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "twisting operator is {}x{}, Hilbert space has dimension {n}",
            t_op.rows(),
            t_op.cols()
        )));
    }
    let invalid = |what: &str, r: f64| Err(Error::InvalidTwistOperator(format!("{what} (residual {r:e})")));
    let id = ComplexMatrix::identity(n);
    let r = t_op.hermiticity_residual();
    if !tol.accepts(r) {
        return invalid("T is not selfadjoint", r);
    }
    let r = (&(t_op * t_op) - &id).max_norm();
    if !tol.accepts(r) {
        return invalid("T does not square to the identity", r);
    }
    if t_op.approx_eq(&id, tol) || t_op.approx_eq(&-&id, tol) {
        return Err(Error::InvalidTwistOperator("T must not be ±I".into()));
    }
    let basis = st.rep.represented_basis();
    let r = basis.iter().map(|a| t_op.commutator(a).max_norm()).fold(0.0, f64::max);
    if !tol.accepts(r) {
        return invalid("T does not commute with the algebra", r);
    }
    let r = st.symbol.iter().map(|s| t_op.anticommutator(s).max_norm()).fold(0.0, f64::max);
    if !tol.accepts(r) {
        return invalid("the Dirac symbol does not anticommute with T", r);
    }

    let p_plus = (&id + t_op).scale_real(0.5);
    let p_minus = (&id - t_op).scale_real(0.5);
    let mut images: Vec<ComplexMatrix> = basis.iter().map(|b| &p_plus * b).collect();
    images.extend(basis.iter().map(|b| &p_minus * b));
    let k = basis.len();
    let flipped: Vec<ComplexMatrix> = (0..2 * k).map(|i| images[(i + k) % (2 * k)].clone()).collect();

    let rank = faithfulness_rank(&images);
    if rank < 2 * k {
        return Err(Error::NotFaithful { rank, expected: 2 * k });
    }
    Ok(MinimalTwist { base: st.clone(), t_op: t_op.clone(), p_plus, p_minus, images, flipped })
}

fn max_residual<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> f64) -> f64 {
    items.into_iter().map(f).fold(0.0, f64::max)
}

impl MinimalTwist {
    pub fn base(&self) -> &FiniteTriple {
        &self.base
    }

    pub fn t_op(&self) -> &ComplexMatrix {
        &self.t_op
    }

    pub fn p_plus(&self) -> &ComplexMatrix {
        &self.p_plus
    }

    pub fn p_minus(&self) -> &ComplexMatrix {
        &self.p_minus
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Basis `(b, 0)…, (0, b)…` of the doubled algebra over ℝ.
    pub fn doubled_basis(&self) -> Vec<DoubledElement> {
        let spec = self.base.rep.algebra();
        let basis = algebra_basis(spec);
        let zero = AlgebraElement::zero(spec);
        let mut out: Vec<DoubledElement> = basis.iter().map(|b| DoubledElement::new(b.clone(), zero.clone())).collect();
        out.extend(basis.iter().map(|b| DoubledElement::new(zero.clone(), b.clone())));
        out
    }

    /// `π′` of [`Self::doubled_basis`].
    pub fn doubled_basis_images(&self) -> &[ComplexMatrix] {
        &self.images
    }

    /// `π′ ∘ ρ` of [`Self::doubled_basis`].
    pub fn flipped_basis_images(&self) -> &[ComplexMatrix] {
        &self.flipped
    }

    pub fn doubled_represent(&self, d: &DoubledElement) -> Result<ComplexMatrix> {
        let a1 = self.base.rep.represent(&d.first)?;
        let a2 = self.base.rep.represent(&d.second)?;
        Ok(&(&self.p_plus * &a1) + &(&self.p_minus * &a2))
    }

    /// `D π′(d) - π′(ρ(d)) D` for the bounded part of the Dirac operator.
    pub fn twisted_commutator(&self, d: &DoubledElement) -> Result<ComplexMatrix> {
        let a = self.doubled_represent(d)?;
        let fa = self.doubled_represent(&d.flip())?;
        Ok(&(&self.base.dirac * &a) - &(&fa * &self.base.dirac))
    }

    /// Generators of the twisted commutators `[D, π′(a′)]_ρ`: bounded parts over
    /// the doubled basis, and symbol terms `S_μ π′(e)`.
    fn twisted_commutator_generators(&self) -> Vec<ComplexMatrix> {
        let d = &self.base.dirac;
        let mut out: Vec<ComplexMatrix> =
            self.images.iter().zip(&self.flipped).map(|(a, fa)| &(d * a) - &(fa * d)).collect();
        for s in &self.base.symbol {
            out.extend(self.images.iter().map(|e| s * e));
        }
        out
    }

    fn one_form_generators(&self) -> Vec<ComplexMatrix> {
        let comms = self.twisted_commutator_generators();
        let mut out = Vec::with_capacity(comms.len() * self.images.len());
        for a in &self.images {
            for x in &comms {
                out.push(a * x);
            }
        }
        out
    }
}

/// Max over doubled basis pairs of `‖X Y − ρ₀(Y) X‖` with
/// `X = [D, π′(a′)]_ρ`, `Y = Jπ′(b′)J⁻¹` and `ρ₀(Y) = Jπ′(ρ(b′))J⁻¹`.
pub fn twisted_first_order_residual(mt: &MinimalTwist) -> Result<f64> {
    let real = mt.base.real_structure()?;
    let ys: Vec<ComplexMatrix> = mt.images.iter().map(|b| real.conjugate(b)).collect();
    let rys: Vec<ComplexMatrix> = mt.flipped.iter().map(|b| real.conjugate(b)).collect();
    let xs = mt.twisted_commutator_generators();
    Ok(max_residual(&xs, |x| {
        max_residual(ys.iter().zip(&rys), |(y, ry)| (&(x * y) - &(ry * x)).max_norm())
    }))
}

pub fn check_twisted_first_order(mt: &MinimalTwist, tol: Tolerance) -> Result<bool> {
    Ok(tol.accepts(twisted_first_order_residual(mt)?))
}

/// A Hilbert–Schmidt orthonormal basis of a space of one-forms.
#[derive(Debug, Clone)]
pub struct OneFormSpace {
    pub basis: Vec<ComplexMatrix>,
    pub dimension: usize,
    dim: usize,
}

pub type TwistedOneFormSpace = OneFormSpace;

impl OneFormSpace {
    fn from_generators(dim: usize, generators: &[ComplexMatrix]) -> Self {
        let vectors: Vec<Vec<C64>> =
            generators.iter().filter(|g| g.max_norm() > 0.0).map(|g| g.entries().to_vec()).collect();
        let basis: Vec<ComplexMatrix> = orthonormal_span(&vectors)
            .into_iter()
            .map(|v| ComplexMatrix::from_vec(dim, dim, v).expect("square"))
            .collect();
        Self { dimension: basis.len(), basis, dim }
    }

    /// Max-norm distance from `m` to its orthogonal projection on the space.
    pub fn projection_residual(&self, m: &ComplexMatrix) -> f64 {
        let basis: Vec<Vec<C64>> = self.basis.iter().map(|b| b.entries().to_vec()).collect();
        projection_residual(&basis, m.entries())
    }

    pub fn contains(&self, m: &ComplexMatrix, tol: Tolerance) -> bool {
        m.rows() == self.dim && m.cols() == self.dim && tol.accepts(self.projection_residual(m))
    }
}

/// Span of `π′(a′)[D, π′(b′)]_ρ` over the doubled basis.
pub fn twisted_one_form_space(mt: &MinimalTwist, _tol: Tolerance) -> TwistedOneFormSpace {
    OneFormSpace::from_generators(mt.dim(), &mt.one_form_generators())
}

/// Span of `π(a)[D, π(b)]` over the algebra basis.
pub fn one_form_space(st: &FiniteTriple, _tol: Tolerance) -> OneFormSpace {
    let basis = st.rep.represented_basis();
    let comms = st.commutator_generators(&basis);
    let gens: Vec<ComplexMatrix> = basis.iter().flat_map(|a| comms.iter().map(move |x| a * x)).collect();
    OneFormSpace::from_generators(st.dim(), &gens)
}

/// Result of a (twisted) fluctuation `D + A + JAJ⁻¹`.
#[derive(Debug, Clone)]
pub struct Fluctuation {
    pub operator: ComplexMatrix,
    pub hermitian: bool,
    pub hermiticity_residual: f64,
}

fn fluctuate_in(st: &FiniteTriple, space: &OneFormSpace, a: &ComplexMatrix, tol: Tolerance) -> Result<Fluctuation> {
    let real = st.real_structure()?;
    st.check_dim("one-form", a)?;
    let residual = space.projection_residual(a);
    if !tol.accepts(residual) {
        return Err(Error::NotAOneForm { residual });
    }
    let operator = &(&st.dirac + a) + &real.conjugate(a);
    let hermiticity_residual = operator.hermiticity_residual();
    Ok(Fluctuation { hermitian: tol.accepts(hermiticity_residual), hermiticity_residual, operator })
}

/// `D + A + JAJ⁻¹` for a twisted one-form `A`.
pub fn twisted_fluctuate(mt: &MinimalTwist, a: &ComplexMatrix, tol: Tolerance) -> Result<Fluctuation> {
    mt.base.real_structure()?;
    fluctuate_in(&mt.base, &twisted_one_form_space(mt, tol), a, tol)
}

/// `D + A + JAJ⁻¹` for an ordinary one-form `A`.
pub fn fluctuate(st: &FiniteTriple, a: &ComplexMatrix, tol: Tolerance) -> Result<Fluctuation> {
    st.real_structure()?;
    fluctuate_in(st, &one_form_space(st, tol), a, tol)
}

/// Real subspace of twisted one-forms whose fluctuation is selfadjoint.
/// The basis is orthonormal for `Re Tr(X† Y)`.
#[derive(Debug, Clone)]
pub struct SelfadjointFluctuationSpace {
    pub basis: Vec<ComplexMatrix>,
    pub real_dimension: usize,
}

impl SelfadjointFluctuationSpace {
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

pub fn selfadjoint_fluctuation_space(mt: &MinimalTwist, tol: Tolerance) -> Result<SelfadjointFluctuationSpace> {
    let real = mt.base.real_structure()?;
    let space = twisted_one_form_space(mt, tol);
    let n = space.dimension;
    if n == 0 {
        return Ok(SelfadjointFluctuationSpace { basis: Vec::new(), real_dimension: 0 });
    }
    let combine = |coeffs: &[C64]| {
        let mut a = ComplexMatrix::zeros(mt.dim(), mt.dim());
        for (c, b) in coeffs.iter().zip(&space.basis) {
            a += &b.scale(*c);
        }
        a
    };
    // A ↦ (A + JAJ⁻¹) − (A + JAJ⁻¹)† is only ℝ-linear in the coefficients.
    let constraint = RealMatrix::of_real_linear_map(n, |coeffs| {
        let a = combine(coeffs);
        let h = &a + &real.conjugate(&a);
        (&h - &h.adjoint()).entries().to_vec()
    });
    let null = constraint.nullspace();
    // Coefficients are realified and the complex basis is orthonormal, so an
    // orthonormal real coefficient basis gives an orthonormal matrix basis.
    let basis: Vec<ComplexMatrix> = real_orthonormal_span(&null).iter().map(|x| combine(&complexify(x))).collect();
    Ok(SelfadjointFluctuationSpace { real_dimension: basis.len(), basis })
}

/// Max-norm residual of (twisted) commutation of `m` with the algebra.
pub fn transparency_residual(mt: &MinimalTwist, m: &ComplexMatrix, twisted: bool) -> Result<f64> {
    mt.base.check_dim("operator", m)?;
    Ok(if twisted {
        max_residual(mt.images.iter().zip(&mt.flipped), |(a, fa)| (&(m * a) - &(fa * m)).max_norm())
    } else {
        max_residual(mt.base.rep.represented_basis(), |a| m.commutator(&a).max_norm())
    })
}

pub fn check_transparency(mt: &MinimalTwist, m: &ComplexMatrix, twisted: bool, tol: Tolerance) -> Result<bool> {
    Ok(tol.accepts(transparency_residual(mt, m, twisted)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraSpec, Block, Representation, SummandKind};
    use crate::numerics::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c_on_c3() -> FiniteTriple {
        let spec = AlgebraSpec::new(vec![SummandKind::Complex]).unwrap();
        let rep = Representation::new(spec, vec![Block::new(0, 3, false)]).unwrap();
        FiniteTriple::new(rep, ComplexMatrix::zeros(3, 3)).unwrap()
    }

    fn scalars(z1: f64, z2: f64) -> DoubledElement {
        let spec = AlgebraSpec::new(vec![SummandKind::Complex]).unwrap();
        DoubledElement::new(
            AlgebraElement::scalars(&spec, &[c(z1, 0.0)]).unwrap(),
            AlgebraElement::scalars(&spec, &[c(z2, 0.0)]).unwrap(),
        )
    }

    #[test]
    fn toy_doubled_representation() {
        let t = ComplexMatrix::diag_real(&[1., -1., -1.]);
        let mt = build_minimal_twist(&c_on_c3(), &t, tol()).unwrap();
        let m = mt.doubled_represent(&scalars(1.0, 2.0)).unwrap();
        assert_eq!(m, ComplexMatrix::diag_real(&[1., 2., 2.]));
        assert_eq!(m.trace(), c(5.0, 0.0));
        assert_eq!(mt.doubled_represent(&scalars(1.0, -1.0)).unwrap(), t);
        assert_eq!(mt.doubled_represent(&scalars(3.0, 3.0)).unwrap(), ComplexMatrix::diag_real(&[3., 3., 3.]));
    }

    #[test]
    fn invalid_twisting_operators() {
        let st = c_on_c3();
        let err = |t: ComplexMatrix| build_minimal_twist(&st, &t, tol()).unwrap_err();
        assert!(matches!(err(ComplexMatrix::identity(3)), Error::InvalidTwistOperator(_)));
        assert!(matches!(err(ComplexMatrix::identity(3).scale_real(-1.0)), Error::InvalidTwistOperator(_)));
        assert!(matches!(err(ComplexMatrix::diag_real(&[1., 2., -1.])), Error::InvalidTwistOperator(_)));
        assert!(matches!(err(ComplexMatrix::identity(2)), Error::DimensionMismatch(_)));
        let mut skew = ComplexMatrix::diag_real(&[1., -1., -1.]);
        skew[(0, 1)] = c(0.0, 1.0);
        assert!(matches!(err(skew), Error::InvalidTwistOperator(_)));
    }

    #[test]
    fn grading_needed_for_twist_by_grading() {
        assert_eq!(grading_as_twist(&c_on_c3()), Err(Error::NoGrading));
    }

    #[test]
    fn zero_dirac_has_no_one_forms() {
        let mt = build_minimal_twist(&c_on_c3(), &ComplexMatrix::diag_real(&[1., -1., -1.]), tol()).unwrap();
        assert_eq!(twisted_one_form_space(&mt, tol()).dimension, 0);
        assert_eq!(mt.twisted_commutator(&scalars(1.0, 1.0)).unwrap(), ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn identity_is_not_twisted_transparent() {
        let t = ComplexMatrix::diag_real(&[1., -1., -1.]);
        let mt = build_minimal_twist(&c_on_c3(), &t, tol()).unwrap();
        let id = ComplexMatrix::identity(3);
        assert!(check_transparency(&mt, &id, false, tol()).unwrap());
        assert!(!check_transparency(&mt, &id, true, tol()).unwrap());
        // I·π′((1,−1)) − π′((−1,1))·I = 2T.
        let d = scalars(1.0, -1.0);
        let diff = &mt.doubled_represent(&d).unwrap() - &mt.doubled_represent(&d.flip()).unwrap();
        assert_eq!(diff, t.scale_real(2.0));
    }

    #[test]
    fn unfaithful_doubling_is_rejected() {
        // T commuting with ℂ on ℂ² is diagonal; a block where T acts as -1 on
        // everything leaves the first copy unrepresented.
        let spec = AlgebraSpec::new(vec![SummandKind::Complex, SummandKind::Complex]).unwrap();
        let rep = Representation::new(spec, vec![Block::new(0, 1, false), Block::new(1, 1, false)]).unwrap();
        let st = FiniteTriple::new(rep, ComplexMatrix::zeros(2, 2)).unwrap();
        let t = ComplexMatrix::diag_real(&[1., -1.]);
        assert!(matches!(build_minimal_twist(&st, &t, tol()), Err(Error::NotFaithful { rank: 4, expected: 8 })));
    }
}
