//! Built-in models and the JSON model format.
//!
//! Spinor-valued models use the ordering `spinor ⊗ internal`, so the spinor
//! index is outermost and operators are assembled as `γ ⊗ X`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraSpec, Block, Representation, SummandKind};
use crate::clifford::build_gammas;
use crate::error::{Error, Result};
use crate::numerics::{c, direct_sum, kron, ComplexMatrix, Tolerance, C64, I};
use crate::triple::{infer_real_signs, FiniteTriple, RealStructure};

pub const SCHEMA_VERSION: u64 = 1;

pub const BUILTIN_NAMES: [&str; 5] = ["manifold-fiber", "electrodynamics", "c-on-c3", "c-m2-on-c10", "sm-structural"];

/// Majorana mass used by the `sm-structural` registry entry.
pub const DEFAULT_MAJORANA_MASS: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelDescriptor {
    pub name: String,
    pub triple: FiniteTriple,
    pub twist_operator: Option<ComplexMatrix>,
    /// Extra operators on the Hilbert space referred to by name (e.g. blocks
    /// of the Dirac operator to test for transparency).
    pub named_operators: BTreeMap<String, ComplexMatrix>,
    pub notes: Vec<String>,
}

pub fn builtin(name: &str) -> Result<ModelDescriptor> {
    match name {
        "manifold-fiber" => Ok(manifold_fiber_twist()),
        "electrodynamics" => Ok(electrodynamics_twist()),
        "c-on-c3" => Ok(toy_c_on_c3()),
        "c-m2-on-c10" => Ok(toy_c_m2_on_c10()),
        "sm-structural" => sm_structural_fiber(DEFAULT_MAJORANA_MASS),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

fn spec(summands: &[SummandKind]) -> AlgebraSpec {
    AlgebraSpec::new(summands.to_vec()).expect("nonempty")
}

fn blocks(list: &[(usize, usize, bool)]) -> Vec<Block> {
    list.iter().map(|&b| b.into()).collect()
}

/// Same block list once per spinor component.
fn per_spinor(list: &[(usize, usize, bool)]) -> Vec<Block> {
    (0..4).flat_map(|_| blocks(list)).collect()
}

/// Charge conjugation on spinors: `diag(a, −a)` with `a = [[0, 1], [−1, 0]]`.
pub fn spinor_charge_conjugation() -> ComplexMatrix {
    let a = ComplexMatrix::from_real_rows(&[&[0., 1.], &[-1., 0.]]).unwrap();
    direct_sum(&[&a, &a.scale_real(-1.0)])
}

/// `−iγ^μ ⊗ I_k`.
fn spinor_symbol(k: usize) -> Vec<ComplexMatrix> {
    build_gammas().gammas.iter().map(|g| kron(&g.scale(-I), &ComplexMatrix::identity(k))).collect()
}

fn real_structure(j: ComplexMatrix, st: &FiniteTriple) -> RealStructure {
    let (e, ep, es) = infer_real_signs(&j, &st.dirac, &st.symbol, st.grading.as_ref(), Tolerance::default())
        .expect("built-in real structure satisfies a sign table");
    RealStructure::new(j, e, ep, es).expect("signs are ±1")
}

/// Spinor fiber of a 4-manifold: functions act as scalars on ℂ⁴, the Dirac
/// operator is `−iγ^μ∂_μ` (stored as its symbol), twisted by `γ_M`.
pub fn manifold_fiber_twist() -> ModelDescriptor {
    let gs = build_gammas();
    let rep = Representation::new(spec(&[SummandKind::Complex]), blocks(&[(0, 4, false)])).unwrap();
    let st = FiniteTriple::new(rep, ComplexMatrix::zeros(4, 4))
        .and_then(|st| st.with_symbol(spinor_symbol(1)))
        .and_then(|st| st.with_grading(gs.chirality.clone()))
        .unwrap();
    let real = real_structure(spinor_charge_conjugation(), &st);
    let triple = st.with_real(real).unwrap();
    ModelDescriptor {
        name: "manifold-fiber".into(),
        triple,
        twist_operator: Some(gs.chirality.clone()),
        named_operators: BTreeMap::new(),
        notes: vec![
            "Fiber at a point of a Riemannian spin 4-manifold in the chiral basis.".into(),
            "The Dirac operator enters through its symbol -i gamma^mu; its bounded part is zero.".into(),
            "Twisted by the chirality gamma_M, so the doubled algebra acts as diag(f I2, g I2).".into(),
        ],
    }
}

/// Finite Dirac matrix of the electrodynamics fiber on `{e_R, e_L, ē_R, ē_L}`.
pub fn electrodynamics_finite_dirac(d: C64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 1)] = d;
    m[(1, 0)] = d.conj();
    m[(2, 3)] = d.conj();
    m[(3, 2)] = d;
    m
}

/// Electrodynamics fiber `ℂ⁴ ⊗ ℂ⁴` with algebra ℂ² acting as
/// `diag(f, f, g, g)` on the internal factor, twisted by its grading.
pub fn electrodynamics_twist() -> ModelDescriptor {
    let gs = build_gammas();
    let gamma_f = ComplexMatrix::diag_real(&[1., -1., -1., 1.]);
    let j_f = ComplexMatrix::from_real_rows(&[&[0., 1.], &[1., 0.]]).unwrap().kron(&ComplexMatrix::identity(2));
    let dirac = kron(&gs.chirality, &electrodynamics_finite_dirac(c(0.7, 0.3)));
    let rep = Representation::new(
        spec(&[SummandKind::Complex, SummandKind::Complex]),
        per_spinor(&[(0, 2, false), (1, 2, false)]),
    )
    .unwrap();
    let grading = kron(&gs.chirality, &gamma_f);
    let st = FiniteTriple::new(rep, dirac)
        .and_then(|st| st.with_symbol(spinor_symbol(4)))
        .and_then(|st| st.with_grading(grading.clone()))
        .unwrap();
    let real = real_structure(kron(&spinor_charge_conjugation(), &j_f), &st);
    let triple = st.with_real(real).unwrap();
    ModelDescriptor {
        name: "electrodynamics".into(),
        triple,
        twist_operator: Some(grading),
        named_operators: BTreeMap::new(),
        notes: vec![
            "Hilbert space spinor (C^4) tensor internal C^4 = {e_R, e_L, anti e_R, anti e_L}, spinor index outermost."
                .into(),
            "Internal Dirac matrix with one complex Dirac mass d = 0.7 + 0.3i.".into(),
            "Twisted by the grading gamma_M tensor gamma_F.".into(),
        ],
    }
}

/// ℂ acting on ℂ³ by scalars, twisted by `diag(1, −1, −1)`.
pub fn toy_c_on_c3() -> ModelDescriptor {
    let rep = Representation::new(spec(&[SummandKind::Complex]), blocks(&[(0, 3, false)])).unwrap();
    ModelDescriptor {
        name: "c-on-c3".into(),
        triple: FiniteTriple::new(rep, ComplexMatrix::zeros(3, 3)).unwrap(),
        twist_operator: Some(ComplexMatrix::diag_real(&[1., -1., -1.])),
        named_operators: BTreeMap::new(),
        notes: vec!["Eigenspaces of T have dimensions 1 and 2, so no implementer exists.".into()],
    }
}

/// ℂ ⊕ M₂(ℂ) on ℂ¹⁰ as `diag(m, c, c, c, m, m, c)`, twisted by
/// `diag(I₂, 1, 1, 1, −I₂, −I₂, −1)`.
pub fn toy_c_m2_on_c10() -> ModelDescriptor {
    let rep = Representation::new(
        spec(&[SummandKind::Complex, SummandKind::FullMatrix(2)]),
        blocks(&[(1, 1, false), (0, 3, false), (1, 2, false), (0, 1, false)]),
    )
    .unwrap();
    let t = ComplexMatrix::diag_real(&[1., 1., 1., 1., 1., -1., -1., -1., -1., -1.]);
    ModelDescriptor {
        name: "c-m2-on-c10".into(),
        triple: FiniteTriple::new(rep, ComplexMatrix::zeros(10, 10)).unwrap(),
        twist_operator: Some(t),
        named_operators: BTreeMap::new(),
        notes: vec!["Eigenspaces of T both have dimension 5 but the traces of the two representations differ.".into()],
    }
}

/// Internal basis of the structural lepton fiber.
pub const SM_INTERNAL_BASIS: [&str; 8] = ["nu_R", "nu_L", "e_R", "e_L", "anti nu_R", "anti nu_L", "anti e_R", "anti e_L"];

/// Dirac masses of the structural fiber (neutrino, electron).
const SM_DIRAC_MASSES: [C64; 2] = [c(0.4, 0.1), c(0.9, -0.2)];

/// `D_0`: Dirac masses linking right and left components, the antiparticle
/// block being the complex conjugate of the particle block.
pub fn sm_dirac_block() -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(4, 4);
    for (k, m) in SM_DIRAC_MASSES.iter().enumerate() {
        p[(2 * k, 2 * k + 1)] = *m;
        p[(2 * k + 1, 2 * k)] = m.conj();
    }
    direct_sum(&[&p, &p.conj()])
}

/// `D_M`: the Majorana mass linking the right neutrino to its conjugate.
pub fn sm_majorana_block(k_m: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(8, 8);
    m[(0, 4)] = c(k_m, 0.0);
    m[(4, 0)] = c(k_m, 0.0);
    m
}

/// `T_F`: `+1` on left particles and antiparticles, `−1` on right ones.
pub fn sm_twisting_operator_internal() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[-1., 1., -1., 1., -1., 1., -1., 1.])
}

/// One-generation lepton fiber `ℂ⁴ ⊗ ℂ⁸` with algebra ℂ ⊕ ℂ `(λ, μ)`:
/// `λ` on `ν_R`, `λ̄` on `e_R`, `μ` on left particles, `λ` on antiparticles.
/// The twisting operator is `γ_M ⊗ T_F`; `γ_M ⊗ D_M` is available as the
/// named operator `majorana`.
pub fn sm_structural_fiber(k_m: f64) -> Result<ModelDescriptor> {
    if k_m == 0.0 || !k_m.is_finite() {
        return Err(Error::InvalidMass);
    }
    let gs = build_gammas();
    let rep = Representation::new(
        spec(&[SummandKind::Complex, SummandKind::Complex]),
        per_spinor(&[(0, 1, false), (1, 1, false), (0, 1, true), (1, 1, false), (0, 4, false)]),
    )?;
    let d_f = &sm_dirac_block() + &sm_majorana_block(k_m);
    let gamma_f = ComplexMatrix::diag_real(&[1., -1., 1., -1., -1., 1., -1., 1.]);
    let swap = ComplexMatrix::from_real_rows(&[&[0., 1.], &[1., 0.]]).unwrap().kron(&ComplexMatrix::identity(4));
    let st = FiniteTriple::new(rep, kron(&gs.chirality, &d_f))?
        .with_symbol(spinor_symbol(8))?
        .with_grading(kron(&gs.chirality, &gamma_f))?;
    let real = real_structure(kron(&spinor_charge_conjugation(), &swap), &st);
    let triple = st.with_real(real)?;
    let mut named_operators = BTreeMap::new();
    named_operators.insert("majorana".to_string(), kron(&gs.chirality, &sm_majorana_block(k_m)));
    Ok(ModelDescriptor {
        name: "sm-structural".into(),
        triple,
        twist_operator: Some(kron(&gs.chirality, &sm_twisting_operator_internal())),
        named_operators,
        notes: vec![
            format!("Internal basis {}; spinor index outermost.", SM_INTERNAL_BASIS.join(", ")),
            "Algebra C + C stands in for C + H; only the block pattern matters for the checks.".into(),
            format!("Majorana mass k_M = {k_m} between nu_R and its conjugate."),
        ],
    })
}

fn matrix_value(m: &ComplexMatrix) -> Value {
    m.to_json_value()
}

/// Serializes a model to the versioned JSON document.
pub fn save_model(md: &ModelDescriptor) -> Value {
    let st = &md.triple;
    let mut doc = Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("name".into(), json!(md.name));
    doc.insert("algebra".into(), serde_json::to_value(st.rep.algebra()).expect("serializable"));
    doc.insert("representation".into(), serde_json::to_value(st.rep.blocks()).expect("serializable"));
    doc.insert("dirac".into(), matrix_value(&st.dirac));
    if !st.symbol.is_empty() {
        doc.insert("dirac_symbol".into(), Value::Array(st.symbol.iter().map(matrix_value).collect()));
    }
    if let Some(g) = &st.grading {
        doc.insert("grading".into(), matrix_value(g));
    }
    if let Some(r) = &st.real {
        doc.insert(
            "real".into(),
            json!({
                "j_matrix": matrix_value(&r.j_matrix),
                "eps": r.eps,
                "eps_prime": r.eps_prime,
                "eps_second": r.eps_second,
            }),
        );
    }
    if let Some(t) = &md.twist_operator {
        doc.insert("twist_operator".into(), matrix_value(t));
    }
    if !md.named_operators.is_empty() {
        let ops: Map<String, Value> = md.named_operators.iter().map(|(k, v)| (k.clone(), matrix_value(v))).collect();
        doc.insert("named_operators".into(), Value::Object(ops));
    }
    doc.insert("notes".into(), json!(md.notes));
    Value::Object(doc)
}

/// Canonical text form: sorted keys, no insignificant whitespace.
pub fn to_canonical_string(md: &ModelDescriptor) -> String {
    serde_json::to_string(&save_model(md)).expect("serializable")
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(&format!("{path}.{key}"), "missing required field"))
}

fn sign_field(obj: &Map<String, Value>, key: &str) -> Result<i64> {
    let path = format!("$.real.{key}");
    field(obj, key, "$.real")?.as_i64().ok_or_else(|| schema(&path, "expected an integer"))
}

fn shape_error(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::DimensionMismatch(message) => Error::MatrixShape { path: path.to_string(), message },
        other => other,
    }
}

/// Parses a model document.
pub fn load_model(doc: &Value) -> Result<ModelDescriptor> {
    let obj = doc.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    let version = field(obj, "schema_version", "$")?
        .as_u64()
        .ok_or_else(|| schema("$.schema_version", "expected an integer"))?;
    if version != SCHEMA_VERSION {
        return Err(schema("$.schema_version", format!("unsupported version {version}")));
    }
    let name = field(obj, "name", "$")?.as_str().ok_or_else(|| schema("$.name", "expected a string"))?;
    let algebra: AlgebraSpec = serde_json::from_value(field(obj, "algebra", "$")?.clone())
        .map_err(|e| schema("$.algebra", e.to_string()))?;
    let block_list: Vec<Block> = serde_json::from_value(field(obj, "representation", "$")?.clone())
        .map_err(|e| schema("$.representation", e.to_string()))?;
    let rep = Representation::new(algebra, block_list).map_err(|e| schema("$.representation", e.to_string()))?;

    let dirac = ComplexMatrix::from_json_value(field(obj, "dirac", "$")?, "$.dirac")?;
    let mut st = FiniteTriple::new(rep, dirac).map_err(shape_error("$.dirac"))?;
    if let Some(v) = obj.get("dirac_symbol") {
        let list = v.as_array().ok_or_else(|| schema("$.dirac_symbol", "expected an array of matrices"))?;
        let symbol = list
            .iter()
            .enumerate()
            .map(|(k, m)| ComplexMatrix::from_json_value(m, &format!("$.dirac_symbol[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        st = st.with_symbol(symbol).map_err(shape_error("$.dirac_symbol"))?;
    }
    if let Some(v) = obj.get("grading") {
        st = st.with_grading(ComplexMatrix::from_json_value(v, "$.grading")?).map_err(shape_error("$.grading"))?;
    }
    if let Some(v) = obj.get("real") {
        let r = v.as_object().ok_or_else(|| schema("$.real", "expected an object"))?;
        let j = ComplexMatrix::from_json_value(field(r, "j_matrix", "$.real")?, "$.real.j_matrix")?;
        let real = RealStructure::new(j, sign_field(r, "eps")?, sign_field(r, "eps_prime")?, sign_field(r, "eps_second")?)
            .map_err(|e| match e {
                Error::NonSquare { rows, cols } => Error::MatrixShape {
                    path: "$.real.j_matrix".into(),
                    message: format!("{rows}x{cols} is not square"),
                },
                other => schema("$.real", other.to_string()),
            })?;
        st = st.with_real(real).map_err(shape_error("$.real.j_matrix"))?;
    }
    let twist_operator = match obj.get("twist_operator") {
        Some(v) => {
            let t = ComplexMatrix::from_json_value(v, "$.twist_operator")?;
            st.check_dim("twist_operator", &t).map_err(shape_error("$.twist_operator"))?;
            Some(t)
        }
        None => None,
    };
    let mut named_operators = BTreeMap::new();
    if let Some(v) = obj.get("named_operators") {
        let ops = v.as_object().ok_or_else(|| schema("$.named_operators", "expected an object"))?;
        for (k, m) in ops {
            let path = format!("$.named_operators.{k}");
            let m = ComplexMatrix::from_json_value(m, &path)?;
            st.check_dim("named operator", &m).map_err(shape_error(&path))?;
            named_operators.insert(k.clone(), m);
        }
    }
    let notes = match obj.get("notes") {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| schema("$.notes", e.to_string()))?,
        None => Vec::new(),
    };
    Ok(ModelDescriptor { name: name.to_string(), triple: st, twist_operator, named_operators, notes })
}

/// Parses a model document from text.
pub fn load_model_str(text: &str) -> Result<ModelDescriptor> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))?;
    load_model(&doc)
}

/// `γ^a ⊗ I` on a Hilbert space of dimension `4k` with spinor index outermost.
pub fn lifted_gamma(a: usize, dim: usize) -> Result<ComplexMatrix> {
    if a > 3 || !dim.is_multiple_of(4) || dim == 0 {
        return Err(Error::DimensionMismatch(format!("gamma{a} cannot act on dimension {dim}")));
    }
    Ok(kron(&build_gammas().gammas[a], &ComplexMatrix::identity(dim / 4)))
}
