use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mintwist::algebra::{random_element, AlgebraElement};
use mintwist::clifford::{
    build_gammas, clifford_identity_residual, krein_equivalence_witness, krein_operator, normalized_prefactor,
    torsion_fluctuation, verify_clifford_identity,
};
use mintwist::krein::{
    expandability_necessary, hilbert_recovery_residual, implementer_residual, indefiniteness_witness, krein_decompose,
    rho_unitarity_residual, select_hermitian_invertible, solve_implementers, twisted_unitary_algebra_dim,
    verify_fundamental_symmetry,
};
use mintwist::models::lifted_gamma;
use mintwist::numerics::c;
use mintwist::triple::validate_triple;
use mintwist::twist::{
    build_minimal_twist, grading_as_twist, selfadjoint_fluctuation_space, transparency_residual,
    twisted_first_order_residual, twisted_one_form_space, MinimalTwist,
};
use mintwist::{builtin, load_model_str, CheckItem, ComplexMatrix, Error, ModelDescriptor, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Report;

/// Seed of the random one-forms used by the torsion demo.
const TORSION_SEED: u64 = 31;
const TORSION_SAMPLES: usize = 100;
const TRACE_SAMPLES: u64 = 100;

pub enum ModelSource<'a> {
    Builtin(&'a str),
    File(&'a Path),
}

pub fn load(source: ModelSource) -> Result<ModelDescriptor> {
    match source {
        ModelSource::Builtin(name) => Ok(builtin(name)?),
        ModelSource::File(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            load_model_str(&text).with_context(|| format!("cannot load {}", path.display()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TwistSource {
    Grading,
    Inline,
}

fn twist_operator(md: &ModelDescriptor, by: Option<TwistSource>) -> Result<(TwistSource, ComplexMatrix)> {
    let by = by.unwrap_or(if md.twist_operator.is_some() { TwistSource::Inline } else { TwistSource::Grading });
    let t = match by {
        TwistSource::Inline => {
            md.twist_operator.clone().ok_or_else(|| anyhow!("model '{}' has no twist_operator", md.name))?
        }
        TwistSource::Grading => grading_as_twist(&md.triple).map_err(|_| anyhow!("model '{}' has no grading", md.name))?,
    };
    Ok((by, t))
}

fn source_name(by: TwistSource) -> &'static str {
    match by {
        TwistSource::Grading => "grading",
        TwistSource::Inline => "inline",
    }
}

pub fn validate(md: &ModelDescriptor, tol: Tolerance) -> Report {
    let mut report = Report::new("validate", &md.name);
    report.items = validate_triple(&md.triple, tol).items;
    report.set("dimension", md.triple.dim());
    report
}

fn max_over(ms: &[ComplexMatrix], f: impl Fn(&ComplexMatrix) -> f64) -> f64 {
    ms.iter().map(f).fold(0.0, f64::max)
}

/// Checks the twisting operator itself and builds the twist if it is valid.
fn twist_items(report: &mut Report, md: &ModelDescriptor, t: &ComplexMatrix, tol: Tolerance) -> Option<MinimalTwist> {
    let st = &md.triple;
    let n = st.dim();
    if t.rows() != n || t.cols() != n {
        report.push(CheckItem::flag("twist_shape", false, f64::NAN, "T acts on the Hilbert space"));
        return None;
    }
    let id = ComplexMatrix::identity(n);
    let basis = st.rep.represented_basis();
    report.push(CheckItem::residual("twist_selfadjoint", t.hermiticity_residual(), "T = T†", tol));
    report.push(CheckItem::residual("twist_involution", (&(t * t) - &id).max_norm(), "T² = I", tol));
    let trivial = t.distance(&id).min(t.distance(&id.scale_real(-1.0)));
    report.push(CheckItem::flag("twist_nontrivial", trivial > tol.atol(), trivial, "T ≠ ±I"));
    report.push(CheckItem::residual(
        "twist_commutes_algebra",
        max_over(&basis, |a| t.commutator(a).max_norm()),
        "[T, π(a)] = 0",
        tol,
    ));
    if !st.symbol.is_empty() {
        report.push(CheckItem::residual(
            "twist_anticommutes_symbol",
            max_over(&st.symbol, |s| t.anticommutator(s).max_norm()),
            "{T, S_μ} = 0",
            tol,
        ));
    }
    match build_minimal_twist(st, t, tol) {
        Ok(mt) => {
            report.push(CheckItem::flag("doubled_faithful", true, 0.0, "π′ is faithful on A ⊗ C²"));
            Some(mt)
        }
        Err(Error::NotFaithful { rank, expected }) => {
            let msg = format!("π′ is faithful on A ⊗ C² (rank {rank} of {expected})");
            report.push(CheckItem::flag("doubled_faithful", false, (expected - rank) as f64, &msg));
            None
        }
        Err(_) => None,
    }
}

pub fn twist(md: &ModelDescriptor, by: Option<TwistSource>, blocks: &[String], tol: Tolerance) -> Result<Report> {
    let (by, t) = twist_operator(md, by)?;
    for b in blocks {
        if !md.named_operators.contains_key(b) {
            bail!("model '{}' has no named operator '{b}'", md.name);
        }
    }
    let mut report = Report::new("twist", &md.name);
    report.set("twist_source", source_name(by));
    let Some(mt) = twist_items(&mut report, md, &t, tol) else {
        return Ok(report);
    };
    if md.triple.real.is_some() {
        let res = twisted_first_order_residual(&mt)?;
        report.push(CheckItem::residual("twisted_first_order", res, "[D, π′(a)]_ρ Jπ′(b)J⁻¹ = Jπ′(ρ(b))J⁻¹ [D, π′(a)]_ρ", tol));
    } else {
        report.set("twisted_first_order", "not evaluated: no real structure");
    }
    let selected: Vec<&String> =
        if blocks.is_empty() { md.named_operators.keys().collect() } else { blocks.iter().collect() };
    for name in selected {
        let m = &md.named_operators[name];
        let untwisted = transparency_residual(&mt, m, false)?;
        let twisted = transparency_residual(&mt, m, true)?;
        report.push(CheckItem::residual(&format!("commutes:{name}"), untwisted, "[M, π(a)] = 0", tol));
        report.push(CheckItem::residual(&format!("twist_commutes:{name}"), twisted, "M π′(a) = π′(ρ(a)) M", tol));
    }
    report.set("one_form_dimension", twisted_one_form_space(&mt, tol).dimension);
    let ex = expandability_necessary(&mt, tol);
    report.set("expandability_necessary", ex);
    if !(ex.dims_equal && ex.traces_equal) {
        report.set("flags", ["necessary conditions for an implementing operator fail; krein will find none"]);
    }
    Ok(report)
}

/// Resolves `--prefer`: `gamma0`..`gamma3`, a named operator, or an inline
/// JSON matrix.
fn preferred_operator(md: &ModelDescriptor, prefer: &str) -> Result<ComplexMatrix> {
    if let Some(a) = prefer.strip_prefix("gamma").and_then(|s| s.parse::<usize>().ok()) {
        return Ok(lifted_gamma(a, md.triple.dim())?);
    }
    if let Some(m) = md.named_operators.get(prefer) {
        return Ok(m.clone());
    }
    if prefer.trim_start().starts_with('[') {
        let value: serde_json::Value = serde_json::from_str(prefer).context("--prefer is not valid JSON")?;
        let m = ComplexMatrix::from_json_value(&value, "--prefer")?;
        if m.rows() != md.triple.dim() || m.cols() != md.triple.dim() {
            bail!("--prefer matrix is {}x{}, expected {n}x{n}", m.rows(), m.cols(), n = md.triple.dim());
        }
        return Ok(m);
    }
    bail!("--prefer '{prefer}' is neither gamma0..gamma3, a named operator nor a JSON matrix")
}

pub fn krein(md: &ModelDescriptor, by: Option<TwistSource>, prefer: Option<&str>, tol: Tolerance) -> Result<Report> {
    let (by, t) = twist_operator(md, by)?;
    let mut preference = prefer.map(|p| preferred_operator(md, p)).transpose()?;
    if preference.is_none() && !md.triple.symbol.is_empty() {
        preference = lifted_gamma(0, md.triple.dim()).ok();
    }
    let mut report = Report::new("krein", &md.name);
    report.set("twist_source", source_name(by));
    let mt = build_minimal_twist(&md.triple, &t, tol).with_context(|| "twisting operator is not valid")?;
    let space = solve_implementers(&mt, tol);
    report.set("implementer_dimension", space.real_dimension);
    report.set("constraint_solution_dimension", space.constraint_solution_dimension);
    report.push(CheckItem::flag(
        "implementer_exists",
        !space.is_empty(),
        space.real_dimension as f64,
        "R invertible with R π′(a) R⁻¹ = π′(ρ(a))",
    ));
    if space.is_empty() {
        return Ok(report);
    }
    let r = select_hermitian_invertible(&space, preference.as_ref(), tol);
    let r = match r {
        Ok(r) => r,
        Err(_) => {
            report.push(CheckItem::flag("hermitian_invertible_exists", false, f64::NAN, "R = R† invertible"));
            return Ok(report);
        }
    };
    if prefer.is_some() {
        let accepted = preference.as_ref().is_some_and(|p| p.distance(&r) == 0.0);
        report.push(CheckItem::flag("preferred_accepted", accepted, 0.0, "preferred operator implements the flip"));
    }
    report.push(CheckItem::residual("implements_flip", implementer_residual(&mt, &r), "R π′(a) = π′(ρ(a)) R", tol));
    let hermiticity = r.hermiticity_residual();
    report.push(CheckItem::residual("hermitian", hermiticity, "R = R†", tol));
    let k = krein_decompose(&r, tol)?;
    report.push(CheckItem::flag("invertible", k.lambda_min > tol.atol(), k.lambda_min, "min |λ(R)| > 0"));
    let fs_ok = verify_fundamental_symmetry(&r, &k.fundamental_symmetry, tol);
    report.push(CheckItem::flag("fundamental_symmetry", fs_ok, 0.0, "F² = I, RF > 0"));
    let w = indefiniteness_witness(&mt, &r, tol)?;
    report.push(CheckItem::flag(
        "indefinite",
        w.product_psi * w.product_psi_tilde < 0.0,
        w.product_psi.abs().min(w.product_psi_tilde.abs()),
        "(ψ, ψ)_R and (ψ̃, ψ̃)_R have opposite signs",
    ));
    let rec = hilbert_recovery_residual(&r, tol)?;
    report.push(CheckItem::residual("hilbert_recovery", rec, "⟨ψ, φ⟩ = (ψ, R⁻¹φ)_R", tol));
    let rho = rho_unitarity_residual(&mt, &r)?;
    report.push(CheckItem::residual("rho_unitarity", rho, "R π′(a)† R⁻¹ = R† π′(a)† R⁻¹†", tol));
    report.set("chosen_R", &r);
    report.set("hermitian", tol.accepts(hermiticity));
    report.set("signature", [k.signature.0, k.signature.1]);
    report.set("lambda_min", k.lambda_min);
    report.set("fundamental_symmetry_ok", fs_ok);
    report.set("unitary_algebra_dim", twisted_unitary_algebra_dim(&r, tol)?);
    report.set("rho_unitarity", tol.accepts(rho));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Demo {
    Torsion,
    KreinManifold,
    Traces,
}

pub fn demo(which: Demo, tol: Tolerance) -> Result<Report> {
    match which {
        Demo::Torsion => demo_torsion(tol),
        Demo::KreinManifold => demo_krein_manifold(tol),
        Demo::Traces => demo_traces(tol),
    }
}

fn demo_torsion(tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("demo", "torsion");
    let gs = build_gammas();
    let md = builtin("manifold-fiber")?;
    let mt = build_minimal_twist(&md.triple, md.twist_operator.as_ref().expect("built-in twist"), tol)?;
    let space = selfadjoint_fluctuation_space(&mt, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(TORSION_SEED);
    let (mut identity, mut herm, mut proj, mut normalized): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..TORSION_SAMPLES {
        let f: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        identity = identity.max(verify_clifford_identity(&gs, f));
        normalized = normalized.max(clifford_identity_residual(&gs, f, normalized_prefactor()));
        let (m, _) = torsion_fluctuation(&gs, f);
        herm = herm.max(m.hermiticity_residual());
        proj = proj.max(space.projection_residual(&m));
    }
    report.push(CheckItem::residual("clifford_identity", identity, "-i f_μ γ^μ γ_M = (-i)³ c(⋆ω_f)", tol));
    report.push(CheckItem::residual("fluctuation_hermitian", herm, "-i f_μ γ^μ γ_M is selfadjoint", tol));
    report.push(CheckItem::residual(
        "in_selfadjoint_fluctuations",
        proj,
        "-i f_μ γ^μ γ_M lies in the selfadjoint twisted fluctuations",
        tol,
    ));
    report.set("samples", TORSION_SAMPLES);
    report.set("seed", TORSION_SEED);
    report.set("selfadjoint_fluctuation_real_dimension", space.real_dimension);
    report.set("residual_with_extra_1_over_2m", normalized);
    Ok(report)
}

fn demo_krein_manifold(tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("demo", "krein-manifold");
    let k = krein_operator(4, 3)?;
    let i = c(0.0, 1.0);
    let expected = ComplexMatrix::from_fn(4, 4, |r, col| match (r, col) {
        (0, 2) | (1, 3) => i,
        (2, 0) | (3, 1) => -i,
        _ => c(0.0, 0.0),
    });
    report.push(CheckItem::residual("krein_operator", k.distance(&expected), "𝔍 = i[[0, I], [-I, 0]]", tol));
    let analysis = krein_decompose(&k, tol)?;
    report.push(CheckItem::flag(
        "signature",
        analysis.signature == (2, 2),
        0.0,
        "𝔍 has signature (2, 2)",
    ));
    let (w, residual) = krein_equivalence_witness();
    report.push(CheckItem::residual("equivalent_to_gamma0", residual, "W γ⁰ W† = 𝔍", tol));
    report.set("krein_operator", &k);
    report.set("signature", [analysis.signature.0, analysis.signature.1]);
    report.set("conjugating_unitary", &w);
    Ok(report)
}

fn demo_traces(tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("demo", "traces");

    let md = builtin("c-on-c3")?;
    let mt = build_minimal_twist(&md.triple, md.twist_operator.as_ref().expect("built-in twist"), tol)?;
    let spec = md.triple.rep.algebra();
    let mut table = Vec::new();
    let mut differ = true;
    for (z1, z2) in [(1.0, 2.0), (1.0, 0.0), (0.0, 1.0), (3.0, -1.0)] {
        let d = mintwist::DoubledElement::new(
            AlgebraElement::scalars(spec, &[c(z1, 0.0)])?,
            AlgebraElement::scalars(spec, &[c(z2, 0.0)])?,
        );
        let tr = mt.doubled_represent(&d)?.trace().re;
        let tr_flip = mt.doubled_represent(&d.flip())?.trace().re;
        differ &= (z1 == z2) || (tr - tr_flip).abs() > tol.atol();
        table.push(serde_json::json!({"z": [z1, z2], "trace": tr, "trace_flipped": tr_flip}));
    }
    report.push(CheckItem::flag("c_on_c3_traces_differ", differ, 0.0, "Tr π′(z) ≠ Tr π′(ρ(z)) for z₁ ≠ z₂"));
    report.set("c_on_c3", table);

    let md = builtin("c-m2-on-c10")?;
    let mt = build_minimal_twist(&md.triple, md.twist_operator.as_ref().expect("built-in twist"), tol)?;
    let spec = md.triple.rep.algebra();
    let (mut plus_res, mut minus_res): (f64, f64) = (0.0, 0.0);
    let mut table = Vec::new();
    for seed in 0..TRACE_SAMPLES {
        let x = random_element(spec, seed);
        let (cc, m) = (x.components[0][(0, 0)], &x.components[1]);
        let pi = md.triple.rep.represent(&x)?;
        let plus = (mt.p_plus() * &pi).trace();
        let minus = (mt.p_minus() * &pi).trace();
        plus_res = plus_res.max((plus - (m.trace() + cc * 3.0)).norm());
        minus_res = minus_res.max((minus - (m.trace() * 2.0 + cc)).norm());
        if seed < 4 {
            table.push(serde_json::json!({
                "c": [cc.re, cc.im],
                "trace_m": [m.trace().re, m.trace().im],
                "trace_plus": [plus.re, plus.im],
                "trace_minus": [minus.re, minus.im],
            }));
        }
    }
    report.push(CheckItem::residual("c_m2_trace_plus", plus_res, "Tr π₊(c, m) = Tr m + 3c", tol));
    report.push(CheckItem::residual("c_m2_trace_minus", minus_res, "Tr π₋(c, m) = 2 Tr m + c", tol));
    report.set("c_m2_on_c10_samples", TRACE_SAMPLES);
    report.set("c_m2_on_c10", table);
    Ok(report)
}
