//! Euclidean gamma matrices in dimension 4, their Lorentzian counterparts,
//! the Krein operator on spinors, constant-coefficient forms on ℝ⁴ with the
//! Hodge star, and the Clifford action of forms.
//!
//! Conventions: chiral basis with `γ^μ = [[0, σ^μ], [σ̃^μ, 0]]`,
//! `σ^μ = (I, -iσ_j)`, `σ̃^μ = (I, iσ_j)`; chirality `γ_M = diag(I₂, -I₂)`;
//! orientation `dx⁰∧dx¹∧dx²∧dx³`; the Clifford action of `dx^{μ₁}∧…∧dx^{μ_k}`
//! (increasing indices) is the plain product `γ^{μ₁}⋯γ^{μ_k}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{c, direct_sum, ComplexMatrix, C64, I, ONE, ZERO};

/// `γ_M = CHIRALITY_PHASE · γ⁰γ¹γ²γ³`.
pub const CHIRALITY_PHASE: C64 = c(-1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    pub gammas: [ComplexMatrix; 4],
    pub chirality: ComplexMatrix,
    pub pauli: [ComplexMatrix; 3],
}

pub fn pauli() -> [ComplexMatrix; 3] {
    [
        ComplexMatrix::from_rows(vec![vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap(),
        ComplexMatrix::from_rows(vec![vec![ZERO, -I], vec![I, ZERO]]).unwrap(),
        ComplexMatrix::diag_real(&[1.0, -1.0]),
    ]
}

fn off_diagonal(upper: &ComplexMatrix, lower: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, 2 + j)] = upper[(i, j)];
            m[(2 + i, j)] = lower[(i, j)];
        }
    }
    m
}

pub fn build_gammas() -> GammaSet {
    let sigma = pauli();
    let id = ComplexMatrix::identity(2);
    let mut gammas: Vec<ComplexMatrix> = vec![off_diagonal(&id, &id)];
    for s in &sigma {
        gammas.push(off_diagonal(&s.scale(-I), &s.scale(I)));
    }
    let chirality = direct_sum(&[&id, &id.scale_real(-1.0)]);
    GammaSet { gammas: gammas.try_into().expect("four gammas"), chirality, pauli: sigma }
}

impl GammaSet {
    /// `γ⁰γ¹γ²γ³`.
    pub fn volume_product(&self) -> ComplexMatrix {
        self.gammas.iter().skip(1).fold(self.gammas[0].clone(), |acc, g| &acc * g)
    }

    /// `γ^{μ₁}⋯γ^{μ_k}`, identity for the empty product.
    pub fn product(&self, indices: &[usize]) -> ComplexMatrix {
        indices.iter().fold(ComplexMatrix::identity(4), |acc, &m| &acc * &self.gammas[m])
    }
}

/// `γ_L⁰ = γ⁰`, `γ_L^j = iγ^j`.
pub fn lorentzian_gammas(gs: &GammaSet) -> [ComplexMatrix; 4] {
    [gs.gammas[0].clone(), gs.gammas[1].scale(I), gs.gammas[2].scale(I), gs.gammas[3].scale(I)]
}

/// `𝔍 = i^{n(n−1)/2} γ_L¹⋯γ_L^k` on the spinors of ℝⁿ; only `n = 4`,
/// `k ≤ 3` is available.
pub fn krein_operator(n: usize, k: usize) -> Result<ComplexMatrix> {
    if n != 4 {
        return Err(Error::Unsupported(format!("Krein operator in dimension {n}; only 4 is implemented")));
    }
    if k > 3 {
        return Err(Error::Unsupported(format!("{k} Lorentzian directions; at most 3 are available")));
    }
    let lg = lorentzian_gammas(&build_gammas());
    let phase = I.powu((n * (n - 1) / 2) as u32);
    Ok((1..=k).fold(ComplexMatrix::identity(4), |acc, j| &acc * &lg[j]).scale(phase))
}

/// The unitary `U = (1/√2)[[I, I], [−iI, iI]]`, which brings both `γ⁰` (as
/// `Uγ⁰U†`) and `𝔍 = krein_operator(4, 3)` (as `U†𝔍U`) to `diag(I₂, −I₂)`.
pub fn krein_equivalence_unitary() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        u[(i, i)] = c(s, 0.0);
        u[(i, 2 + i)] = c(s, 0.0);
        u[(2 + i, i)] = c(0.0, -s);
        u[(2 + i, 2 + i)] = c(0.0, s);
    }
    u
}

/// `W = U²` with `Wγ⁰W† = 𝔍`, and the residual of that identity.
pub fn krein_equivalence_witness() -> (ComplexMatrix, f64) {
    let u = krein_equivalence_unitary();
    let w = &u * &u;
    let j = krein_operator(4, 3).expect("n = 4");
    let g0 = &build_gammas().gammas[0];
    let residual = (&(&w * g0) * &w.adjoint()).distance(&j);
    (w, residual)
}

/// Strictly increasing `k`-subsets of `{0, 1, 2, 3}` in lexicographic order.
pub fn multi_indices(k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..4 {
            cur.push(i);
            rec(i + 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= 4 {
        rec(0, k, &mut Vec::new(), &mut out);
    }
    out
}

/// A constant-coefficient `k`-form on ℝ⁴; coefficients follow
/// [`multi_indices`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantForm {
    degree: usize,
    coefficients: Vec<C64>,
}

impl ConstantForm {
    pub fn new(degree: usize, coefficients: Vec<C64>) -> Result<Self> {
        let expected = multi_indices(degree).len();
        if degree > 4 || coefficients.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a {degree}-form on R^4",
                coefficients.len()
            )));
        }
        Ok(Self { degree, coefficients })
    }

    pub fn zero(degree: usize) -> Result<Self> {
        Self::new(degree, vec![ZERO; multi_indices(degree).len()])
    }

    /// `f_μ dx^μ`.
    pub fn one_form(f: [f64; 4]) -> Self {
        Self { degree: 1, coefficients: f.iter().map(|&x| c(x, 0.0)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// Coefficient of `dx^I` for an increasing multi-index.
    pub fn coefficient(&self, index: &[usize]) -> Option<C64> {
        multi_indices(self.degree).iter().position(|m| m == index).map(|k| self.coefficients[k])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { degree: self.degree, coefficients: self.coefficients.iter().map(|z| z * s).collect() }
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        if self.degree != other.degree {
            return f64::INFINITY;
        }
        self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

fn index_key(index: &[usize]) -> String {
    index.iter().map(|i| i.to_string()).collect()
}

#[derive(Serialize, Deserialize)]
struct FormWire {
    degree: usize,
    coefficients: BTreeMap<String, [f64; 2]>,
}

impl Serialize for ConstantForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coefficients = multi_indices(self.degree)
            .iter()
            .zip(&self.coefficients)
            .map(|(m, z)| (index_key(m), [z.re, z.im]))
            .collect();
        FormWire { degree: self.degree, coefficients }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConstantForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = FormWire::deserialize(deserializer)?;
        let mut form = ConstantForm::zero(wire.degree).map_err(D::Error::custom)?;
        let indices = multi_indices(wire.degree);
        for (key, [re, im]) in wire.coefficients {
            let k = indices
                .iter()
                .position(|m| index_key(m) == key)
                .ok_or_else(|| D::Error::custom(format!("'{key}' is not an increasing multi-index")))?;
            form.coefficients[k] = c(re, im);
        }
        Ok(form)
    }
}

/// Sign of the permutation taking `seq` to increasing order.
fn permutation_sign(seq: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 { 1.0 } else { -1.0 }
}

/// Euclidean Hodge star: `⋆dx^I = sign(I, Iᶜ) dx^{Iᶜ}`.
pub fn hodge_star(w: &ConstantForm) -> ConstantForm {
    let target = 4 - w.degree;
    let mut out = ConstantForm::zero(target).expect("degree ≤ 4");
    let out_indices = multi_indices(target);
    for (index, z) in multi_indices(w.degree).iter().zip(&w.coefficients) {
        let complement: Vec<usize> = (0..4).filter(|i| !index.contains(i)).collect();
        let mut seq = index.clone();
        seq.extend(&complement);
        let k = out_indices.iter().position(|m| *m == complement).expect("complement is increasing");
        out.coefficients[k] += z * permutation_sign(&seq);
    }
    out
}

/// `c(ω) = Σ_I ω_I γ^{i₁}⋯γ^{i_k}`.
pub fn clifford_action(gs: &GammaSet, w: &ConstantForm) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for (index, z) in multi_indices(w.degree).iter().zip(&w.coefficients) {
        out += &gs.product(index).scale(*z);
    }
    out
}

/// `(−i f_μ γ^μ γ_M, −⋆(f_μ dx^μ))`.
pub fn torsion_fluctuation(gs: &GammaSet, f: [f64; 4]) -> (ComplexMatrix, ConstantForm) {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (g, &fm) in gs.gammas.iter().zip(&f) {
        m += &(g * &gs.chirality).scale(c(0.0, -fm));
    }
    let torsion = hodge_star(&ConstantForm::one_form(f)).scale(c(-1.0, 0.0));
    (m, torsion)
}

/// Half the spacetime dimension.
const M: u32 = 2;

/// `‖−i f_μγ^μγ_M − prefactor · c(⋆ω_f)‖_max`.
pub fn clifford_identity_residual(gs: &GammaSet, f: [f64; 4], prefactor: C64) -> f64 {
    let (lhs, _) = torsion_fluctuation(gs, f);
    let rhs = clifford_action(gs, &hodge_star(&ConstantForm::one_form(f))).scale(prefactor);
    lhs.distance(&rhs)
}

/// Residual of `−i f_μγ^μγ_M = (−i)^{m+1} c(⋆ω_f)` with `m = 2`.
///
/// Under the conventions of this module the identity holds with prefactor
/// `(−i)^{m+1}`; normalizing by an extra `1/(2m)` leaves a residual
/// proportional to `|f|` (see [`clifford_identity_residual`]).
pub fn verify_clifford_identity(gs: &GammaSet, f: [f64; 4]) -> f64 {
    clifford_identity_residual(gs, f, (-I).powu(M + 1))
}

/// `(−i)^{m+1} / (2m)`, the prefactor with the extra normalization.
pub fn normalized_prefactor() -> C64 {
    (-I).powu(M + 1) / f64::from(2 * M)
}
