//! Finite spectral triples and their axiom checks.
//!
//! Besides the bounded Dirac matrix a triple may carry a *symbol*: matrices
//! `S_μ` giving the first-order differential part `S_μ ∂_μ` of the Dirac
//! operator at a point of a manifold (for the spinor fiber, `S_μ = -iγ^μ`).
//! Commutators with the algebra then pick up the terms `S_μ π(∂_μ a)`, and
//! since the derivative of an algebra element at a point is arbitrary these
//! are treated as `S_μ π(e)` for every basis element `e`.

use serde::{Deserialize, Serialize};

use crate::algebra::Representation;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, Tolerance};

/// One named pass/fail item with the residual that decided it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    /// Short statement of the property being checked.
    pub anchor: String,
}

impl CheckItem {
    /// Item that passes iff `residual < atol`.
    pub fn residual(name: &str, residual: f64, anchor: &str, tol: Tolerance) -> Self {
        Self { name: name.into(), pass: tol.accepts(residual), residual, anchor: anchor.into() }
    }

    /// Item for a yes/no fact; `residual` is carried for information only.
    pub fn flag(name: &str, pass: bool, residual: f64, anchor: &str) -> Self {
        Self { name: name.into(), pass, residual, anchor: anchor.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub items: Vec<CheckItem>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }
}

/// Antiunitary `J ψ = j · conj(ψ)` with its sign table.
#[derive(Debug, Clone, PartialEq)]
pub struct RealStructure {
    pub j_matrix: ComplexMatrix,
    pub eps: i8,
    pub eps_prime: i8,
    pub eps_second: i8,
}

impl RealStructure {
    pub fn new(j_matrix: ComplexMatrix, eps: i64, eps_prime: i64, eps_second: i64) -> Result<Self> {
        let sign = |s: i64| match s {
            1 => Ok(1),
            -1 => Ok(-1),
            _ => Err(Error::InvalidSign(s)),
        };
        j_matrix.ensure_square()?;
        Ok(Self { j_matrix, eps: sign(eps)?, eps_prime: sign(eps_prime)?, eps_second: sign(eps_second)? })
    }

    /// `J M J⁻¹ = j conj(M) j^dagger`.
    pub fn conjugate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.j_matrix * &m.conj()) * &self.j_matrix.adjoint()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTriple {
    pub rep: Representation,
    pub dirac: ComplexMatrix,
    /// Principal symbol of the differential part of the Dirac operator.
    pub symbol: Vec<ComplexMatrix>,
    pub grading: Option<ComplexMatrix>,
    pub real: Option<RealStructure>,
}

impl FiniteTriple {
    pub fn new(rep: Representation, dirac: ComplexMatrix) -> Result<Self> {
        let st = Self { rep, dirac, symbol: Vec::new(), grading: None, real: None };
        st.check_dim("dirac", &st.dirac)?;
        Ok(st)
    }

    pub fn with_symbol(mut self, symbol: Vec<ComplexMatrix>) -> Result<Self> {
        for s in &symbol {
            self.check_dim("dirac_symbol", s)?;
        }
        self.symbol = symbol;
        Ok(self)
    }

    pub fn with_grading(mut self, grading: ComplexMatrix) -> Result<Self> {
        self.check_dim("grading", &grading)?;
        self.grading = Some(grading);
        Ok(self)
    }

    pub fn with_real(mut self, real: RealStructure) -> Result<Self> {
        self.check_dim("j_matrix", &real.j_matrix)?;
        self.real = Some(real);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.rep.total_dim()
    }

    pub(crate) fn check_dim(&self, what: &str, m: &ComplexMatrix) -> Result<()> {
        let n = self.rep.total_dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{what} is {}x{}, Hilbert space has dimension {n}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }

    pub fn real_structure(&self) -> Result<&RealStructure> {
        self.real.as_ref().ok_or(Error::NoRealStructure)
    }

    /// Generators of `[D, π(a)]` over the algebra basis, including the
    /// symbol terms `S_μ π(e)`.
    pub(crate) fn commutator_generators(&self, basis: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let mut out: Vec<ComplexMatrix> = basis.iter().map(|a| self.dirac.commutator(a)).collect();
        for s in &self.symbol {
            out.extend(basis.iter().map(|e| s * e));
        }
        out
    }
}

/// Reads off `(ε, ε′, ε″)` for a candidate `j`: the signs for which the
/// relations `J² = εI`, `JD = ε′DJ` (symbol included) and `JΓ = ε″ΓJ` hold.
/// Returns `None` when some relation holds with neither sign. When an
/// operator vanishes both signs hold and `+1` is reported.
pub fn infer_real_signs(
    j: &ComplexMatrix,
    dirac: &ComplexMatrix,
    symbol: &[ComplexMatrix],
    grading: Option<&ComplexMatrix>,
    tol: Tolerance,
) -> Option<(i64, i64, i64)> {
    let id = ComplexMatrix::identity(j.rows());
    let holds = |s: f64, ops: &[&ComplexMatrix]| {
        ops.iter().all(|m| tol.accepts((&(j * &m.conj()) - &(*m * j).scale_real(s)).max_norm()))
    };
    let pick = |ops: &[&ComplexMatrix]| {
        if holds(1.0, ops) {
            Some(1)
        } else if holds(-1.0, ops) {
            Some(-1)
        } else {
            None
        }
    };
    let jj = j * &j.conj();
    let eps = if jj.approx_eq(&id, tol) {
        1
    } else if jj.approx_eq(&id.scale_real(-1.0), tol) {
        -1
    } else {
        return None;
    };
    let mut dirac_ops = vec![dirac];
    dirac_ops.extend(symbol.iter());
    let eps_prime = pick(&dirac_ops)?;
    let eps_second = match grading {
        Some(g) => pick(&[g])?,
        None => 1,
    };
    Some((eps, eps_prime, eps_second))
}

/// `J M J⁻¹`.
pub fn conjugate_by_real(st: &FiniteTriple, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let real = st.real_structure()?;
    st.check_dim("operator", m)?;
    Ok(real.conjugate(m))
}

fn max_over<'a>(it: impl IntoIterator<Item = &'a ComplexMatrix>, f: impl Fn(&ComplexMatrix) -> f64) -> f64 {
    it.into_iter().map(f).fold(0.0, f64::max)
}

pub fn validate_triple(st: &FiniteTriple, tol: Tolerance) -> ValidationReport {
    let n = st.dim();
    let id = ComplexMatrix::identity(n);
    let basis = st.rep.represented_basis();
    let d = &st.dirac;
    let mut r = ValidationReport::default();

    r.push(CheckItem::residual("dirac_selfadjoint", d.hermiticity_residual(), "D = D†", tol));
    if !st.symbol.is_empty() {
        let res = max_over(&st.symbol, |s| (s + &s.adjoint()).max_norm());
        r.push(CheckItem::residual("symbol_antiselfadjoint", res, "S_μ† = -S_μ", tol));
        let res = max_over(&st.symbol, |s| max_over(&basis, |a| s.commutator(a).max_norm()));
        r.push(CheckItem::residual("symbol_commutes_with_algebra", res, "[S_μ, π(a)] = 0", tol));
    }

    if let Some(g) = &st.grading {
        r.push(CheckItem::residual("grading_selfadjoint", g.hermiticity_residual(), "Γ = Γ†", tol));
        r.push(CheckItem::residual("grading_involution", (&(g * g) - &id).max_norm(), "Γ² = I", tol));
        r.push(CheckItem::residual(
            "grading_anticommutes_dirac",
            g.anticommutator(d).max_norm(),
            "{Γ, D} = 0",
            tol,
        ));
        if !st.symbol.is_empty() {
            let res = max_over(&st.symbol, |s| g.anticommutator(s).max_norm());
            r.push(CheckItem::residual("grading_anticommutes_symbol", res, "{Γ, S_μ} = 0", tol));
        }
        let res = max_over(&basis, |a| g.commutator(a).max_norm());
        r.push(CheckItem::residual("grading_commutes_algebra", res, "[Γ, π(a)] = 0", tol));
    }

    if let Some(real) = &st.real {
        let j = &real.j_matrix;
        let eps = |s: i8| f64::from(s);
        r.push(CheckItem::residual(
            "j_unitary",
            (&(j * &j.adjoint()) - &id).max_norm(),
            "J antiunitary",
            tol,
        ));
        r.push(CheckItem::residual(
            "j_squared",
            (&(j * &j.conj()) - &id.scale_real(eps(real.eps))).max_norm(),
            "J² = εI",
            tol,
        ));
        let sign_res = |m: &ComplexMatrix, s: i8| (&(j * &m.conj()) - &(m * j).scale_real(eps(s))).max_norm();
        r.push(CheckItem::residual("j_dirac", sign_res(d, real.eps_prime), "JD = ε′DJ", tol));
        if !st.symbol.is_empty() {
            let res = max_over(&st.symbol, |s| sign_res(s, real.eps_prime));
            r.push(CheckItem::residual("j_symbol", res, "J S_μ = ε′ S_μ J", tol));
        }
        if let Some(g) = &st.grading {
            r.push(CheckItem::residual("j_grading", sign_res(g, real.eps_second), "JΓ = ε″ΓJ", tol));
        }
        let (z, f) = order_residuals(st, real, &basis);
        r.push(CheckItem::residual("order_zero", z, "[π(a), Jπ(b)J⁻¹] = 0", tol));
        r.push(CheckItem::residual("first_order", f, "[[D, π(a)], Jπ(b)J⁻¹] = 0", tol));
    }
    r
}

fn order_residuals(st: &FiniteTriple, real: &RealStructure, basis: &[ComplexMatrix]) -> (f64, f64) {
    let opposite: Vec<ComplexMatrix> = basis.iter().map(|b| real.conjugate(b)).collect();
    let zero = max_over(basis, |a| max_over(&opposite, |b| a.commutator(b).max_norm()));
    let gens = st.commutator_generators(basis);
    let first = max_over(&gens, |x| max_over(&opposite, |b| x.commutator(b).max_norm()));
    (zero, first)
}

pub fn order_zero_residual(st: &FiniteTriple) -> Result<f64> {
    let real = st.real_structure()?;
    Ok(order_residuals(st, real, &st.rep.represented_basis()).0)
}

pub fn first_order_residual(st: &FiniteTriple) -> Result<f64> {
    let real = st.real_structure()?;
    Ok(order_residuals(st, real, &st.rep.represented_basis()).1)
}

pub fn check_order_zero(st: &FiniteTriple, tol: Tolerance) -> Result<bool> {
    Ok(tol.accepts(order_zero_residual(st)?))
}

pub fn check_first_order(st: &FiniteTriple, tol: Tolerance) -> Result<bool> {
    Ok(tol.accepts(first_order_residual(st)?))
}
