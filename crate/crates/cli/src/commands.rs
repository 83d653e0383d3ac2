use quadraform_core::assoc::AssocValidation;
use quadraform_core::constructions::{
    double_extension, heisenberg, heisenberg_current_alpha, heisenberg_current_alpha_unchecked,
    heisenberg_extended, witt_split as split_core,
};
use quadraform_core::current::{
    check_alpha, extract_frobenius_from_alpha, metric_from_alpha, solve_current_metric, verify_invariant_metric,
    CurrentMetricOutcome, SolveRoute,
};
use quadraform_core::exact::search::{SearchLimits, SearchOutcome};
use quadraform_core::exact::{nullspace, unit_vector};
use quadraform_core::lie::find_nondegenerate;
use quadraform_core::reverse::{
    canonical_f, canonical_h, check_diagram, metric_from_nilpotent, recover_metric, search_transfer,
    DiagramVerdict, TransferSearch,
};
use quadraform_core::{AssocAlgebra, BilinearForm, CurrentAlgebra, Indecomposability, LieAlgebra, RationalMatrix, Validation};
use serde_json::{json, Value};

use crate::certificate::{self as cert, Outcome};
use crate::error::CliError;
use crate::input::{assoc_json, lie_json, vector_arg, Inputs};

pub struct Ctx {
    pub inputs: Inputs,
    pub limits: SearchLimits,
}

type Run = Result<Outcome, CliError>;

fn lie_validation_json(v: &Validation) -> Value {
    match v {
        Validation::Ok => json!({"ok": true}),
        Validation::Antisymmetry { i, j, k, residue } => json!({
            "ok": false, "kind": "antisymmetry", "triple": [i, j, k], "residue": cert::rat(residue),
        }),
        Validation::Jacobi { i, j, k, l, residue } => json!({
            "ok": false, "kind": "jacobi", "triple": [i, j, k], "component": l, "residue": cert::rat(residue),
        }),
    }
}

fn assoc_validation_json(v: &AssocValidation) -> Value {
    match v {
        AssocValidation::Ok => json!({"ok": true}),
        AssocValidation::Commutativity { a, b, c } => json!({"ok": false, "kind": "commutativity", "indices": [a, b, c]}),
        AssocValidation::Associativity { a, b, c, e } => {
            json!({"ok": false, "kind": "associativity", "indices": [a, b, c], "component": e})
        }
        AssocValidation::Unit { a } => json!({"ok": false, "kind": "unit", "indices": [a]}),
    }
}

pub fn validate(ctx: &Ctx) -> Run {
    let inp = &ctx.inputs;
    if inp.lie.is_none() && inp.assoc.is_none() {
        return Err(CliError::Usage("nothing to validate".into()));
    }
    let mut ok = true;
    let mut out = Outcome::positive("ok");
    if let Some(g) = &inp.lie {
        let v = g.validate();
        ok &= v.is_ok();
        out.put("lie", lie_validation_json(&v));
        if v.is_ok() {
            if let Some(b) = inp.metric() {
                let r = verify_invariant_metric(g, b)?;
                ok &= r.all_ok();
                out.put("form", cert::report(&r));
            }
        }
    }
    if let Some(s) = &inp.assoc {
        let v = s.validate();
        ok &= v.is_ok();
        out.put("assoc", assoc_validation_json(&v));
    }
    if let (Some(g), Some(s), Some(bbar)) = (&inp.lie, &inp.assoc, &inp.current_form) {
        if ok {
            let current = CurrentAlgebra::build(g, s)?;
            let r = verify_invariant_metric(current.as_lie(), bbar)?;
            ok &= r.all_ok();
            out.put("current_form", cert::report(&r));
        }
    }
    if !ok {
        out.verdict = "violation".into();
        out.negative = true;
    }
    Ok(out)
}

/// Searches the invariant symmetric forms of `g` for a nondegenerate one.
fn search_metric(g: &LieAlgebra, limits: SearchLimits) -> (Option<BilinearForm>, Value) {
    let forms = g.invariant_symmetric_forms();
    match find_nondegenerate(&forms, g.dim(), limits) {
        SearchOutcome::Found { coeffs, k, value, .. } => {
            let info = json!({"forms_dim": forms.len(), "coeffs": coeffs, "k": k});
            (Some(value), info)
        }
        SearchOutcome::Exhausted {
            searched_k,
            proven_bound,
            certified,
            candidates_tried,
        } => {
            let info = json!({
                "forms_dim": forms.len(),
                "forms": forms.iter().map(cert::form).collect::<Vec<_>>(),
                "searched_k": searched_k,
                "proven_bound": proven_bound,
                "certified": certified,
                "candidates_tried": candidates_tried,
            });
            (None, info)
        }
    }
}

pub fn invariants(ctx: &Ctx) -> Run {
    let g = ctx.inputs.require_lie()?;
    let v = g.validate();
    if !v.is_ok() {
        return Ok(Outcome::negative("violation").with("lie", lie_validation_json(&v)));
    }
    let centroid = g.centroid_basis();
    let forms = g.invariant_symmetric_forms();
    let (metric, search) = search_metric(g, ctx.limits);
    let mut out = Outcome::positive("ok")
        .with("dim", json!(g.dim()))
        .with("center", cert::subspace(&g.center()))
        .with("derived", cert::subspace(&g.derived_subalgebra()))
        .with("centroid_dim", json!(centroid.len()))
        .with("centroid_basis", Value::Array(centroid.iter().map(cert::matrix).collect()))
        .with("invariant_forms", Value::Array(forms.iter().map(cert::form).collect()))
        .with("killing_form", cert::form(&g.killing_form()))
        .with("nilpotent", json!(g.is_nilpotent()))
        .with("perfect", json!(g.is_perfect()))
        .with("abelian", json!(g.is_abelian()))
        .with("metric_search", search)
        .with("metric", metric.as_ref().map_or(Value::Null, cert::form));
    if let Some(b) = ctx.inputs.metric() {
        let report = verify_invariant_metric(g, b)?;
        out.put("form", cert::report(&report));
        if report.all_ok() {
            let sym = g.symmetric_centroids(b)?;
            out.put("symmetric_centroids", Value::Array(sym.iter().map(cert::matrix).collect()));
            out.put("indecomposability", indecomposability_json(&g.is_indecomposable(b)?));
            out.put("nilpotent_annihilator", cert::subspace(&g.nilpotent_annihilator(b)?));
        }
    }
    Ok(out)
}

fn indecomposability_json(v: &Indecomposability) -> Value {
    match v {
        Indecomposability::Indecomposable => json!({"verdict": "indecomposable"}),
        Indecomposability::Splits { idempotent } => json!({"verdict": "splits", "idempotent": cert::matrix(idempotent)}),
        Indecomposability::Inconclusive { reason } => json!({"verdict": "inconclusive", "reason": reason}),
    }
}

/// The metric on `g` to work with: given, builtin, or searched for.
/// `Err(outcome)` is the certified (or bounded) failure to find one.
fn metric_for(ctx: &Ctx, g: &LieAlgebra) -> Result<Result<BilinearForm, Outcome>, CliError> {
    if let Some(b) = ctx.inputs.metric() {
        let report = verify_invariant_metric(g, b)?;
        if !report.all_ok() {
            return Ok(Err(Outcome::negative("form is not an invariant metric on g").with("form", cert::report(&report))));
        }
        return Ok(Ok(b.clone()));
    }
    match search_metric(g, ctx.limits) {
        (Some(b), _) => Ok(Ok(b)),
        (None, info) => {
            let certified = info["certified"].as_bool().unwrap_or(false);
            let verdict = if certified {
                "g not quadratic"
            } else {
                "no invariant metric on g found within the search bound"
            };
            Ok(Err(Outcome::negative(verdict)
                .with("certified", json!(certified))
                .with("metric_search", info)
                .with(
                    "note",
                    json!("det of a combination of the invariant forms is a polynomial of degree dim g; \
                           it vanishes on every grid point up to the proven bound exactly when certified"),
                )))
        }
    }
}

fn require_valid(g: &LieAlgebra, s: Option<&AssocAlgebra>) -> Result<Option<Outcome>, CliError> {
    let v = g.validate();
    if !v.is_ok() {
        return Ok(Some(Outcome::negative("violation").with("lie", lie_validation_json(&v))));
    }
    if let Some(s) = s {
        let v = s.validate();
        if !v.is_ok() {
            return Ok(Some(Outcome::negative("violation").with("assoc", assoc_validation_json(&v))));
        }
    }
    Ok(None)
}

pub fn current_metric(ctx: &Ctx, verify_only: bool) -> Run {
    let g = ctx.inputs.require_lie()?;
    let s = ctx.inputs.require_assoc()?;
    if let Some(bad) = require_valid(g, Some(s))? {
        return Ok(bad);
    }
    if verify_only {
        let bbar = ctx
            .inputs
            .current_form
            .as_ref()
            .ok_or_else(|| CliError::Usage("--verify-only needs a current_form input".into()))?;
        let current = CurrentAlgebra::build(g, s)?;
        let r = verify_invariant_metric(current.as_lie(), bbar)?;
        let out = if r.all_ok() {
            Outcome::positive("invariant metric")
        } else {
            Outcome::negative("not an invariant metric")
        };
        return Ok(out.with("report", cert::report(&r)));
    }
    let b = match metric_for(ctx, g)? {
        Ok(b) => b,
        Err(neg) => return Ok(neg),
    };
    let centroid = g.centroid_basis();
    match solve_current_metric(g, &b, s, ctx.limits)? {
        CurrentMetricOutcome::Found(sol) => {
            let m = s.dim();
            let route = match &sol.route {
                SolveRoute::ProductFastPath { gamma } => json!({"kind": "product", "gamma": cert::form(gamma)}),
                SolveRoute::BoxSearch { coeffs, k } => json!({"kind": "box_search", "coeffs": coeffs, "k": k}),
            };
            let mut coords = serde_json::Map::new();
            for (idx, c) in sol.alpha_coordinates.iter().enumerate() {
                coords.insert(format!("{},{}", idx / m, idx % m), cert::vector(c));
            }
            let nullity = nullspace(&sol.alpha.stacked_f()).len();
            Ok(Outcome::positive("invariant metric found")
                .with("metric_g", cert::form(&b))
                .with("route", route)
                .with("centroid_basis", Value::Array(centroid.iter().map(cert::matrix).collect()))
                .with("alpha", cert::alpha(&sol.alpha))
                .with("alpha_coordinates", Value::Object(coords))
                .with("metric", cert::form(&sol.metric))
                .with("report", cert::report(&sol.report))
                .with(
                    "conditions",
                    json!({
                        "i": true,
                        "ii": {"kernel": cert::subspace(&sol.kernel), "stacked_nullity": nullity},
                        "iii": true,
                    }),
                ))
        }
        CurrentMetricOutcome::NoMetric {
            space,
            searched_k,
            proven_bound,
        } => Ok(Outcome::negative("no invariant metric on g ⊗ S")
            .with("certified", json!(true))
            .with("condition_space", space_json(&space))
            .with("searched_k", json!(searched_k))
            .with("proven_bound", json!(proven_bound))
            .with(
                "note",
                json!("every α in the span of the condition space fails condition (ii): det of the induced form \
                       has degree dim g · dim S in the coefficients and vanishes on the full grid up to the bound"),
            )),
        CurrentMetricOutcome::Inconclusive {
            space,
            searched_k,
            proven_bound,
            candidates_tried,
        } => Ok(Outcome::negative("inconclusive")
            .with("certified", json!(false))
            .with("condition_space", space_json(&space))
            .with("searched_k", json!(searched_k))
            .with("proven_bound", json!(proven_bound))
            .with("candidates_tried", json!(candidates_tried))),
    }
}

fn space_json(space: &quadraform_core::current::AlphaSpace) -> Value {
    json!({
        "dim": space.dim(),
        "centroid_basis": space.centroid_basis.iter().map(cert::matrix).collect::<Vec<_>>(),
        "elements": space.coordinates.iter().map(|el| el.iter().map(|c| cert::vector(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn double_extend(ctx: &Ctx, d: &RationalMatrix, round_trip: bool) -> Run {
    let h = ctx.inputs.require_lie()?;
    if let Some(bad) = require_valid(h, None)? {
        return Ok(bad);
    }
    let b_h = ctx
        .inputs
        .metric()
        .ok_or_else(|| CliError::Usage("double-extend needs a form on h".into()))?;
    let ext = double_extension(h, b_h, d)?;
    let mut out = Outcome::positive("double extension built")
        .with("algebra", lie_json(&ext.result))
        .with("metric", cert::form(&ext.b_ext))
        .with("d_index", json!(ext.d_index()))
        .with("c_index", json!(ext.c_index()))
        .with("derivation", cert::matrix(d));
    if round_trip {
        let c = unit_vector(ext.result.dim(), ext.c_index());
        let split = split_core(&ext.result, &ext.b_ext, &c)?;
        let back = double_extension(&split.h, &split.b_h, &split.derivation)?;
        let same = back.result.structure_constants() == ext.result.structure_constants() && back.b_ext == ext.b_ext;
        out.put("round_trip", json!(same));
        if !same {
            out.verdict = "round trip mismatch".into();
            out.negative = true;
        }
    }
    Ok(out)
}

pub fn witt_split(ctx: &Ctx, center: &str, round_trip: bool) -> Run {
    let g = ctx.inputs.require_lie()?;
    if let Some(bad) = require_valid(g, None)? {
        return Ok(bad);
    }
    let b = ctx
        .inputs
        .metric()
        .ok_or_else(|| CliError::Usage("witt-split needs a metric on g".into()))?;
    let c = vector_arg(center, g)?;
    let split = split_core(g, b, &c)?;
    let mut out = Outcome::positive("split")
        .with("c", cert::vector(&split.c))
        .with("c_in_derived", json!(split.c_in_derived))
        .with("d", cert::vector(&split.d))
        .with("h_basis", Value::Array(split.h_basis.iter().map(|v| cert::vector(v)).collect()))
        .with("h", lie_json(&split.h))
        .with("b_h", cert::form(&split.b_h))
        .with("derivation", cert::matrix(&split.derivation))
        .with("change_of_basis", cert::matrix(&split.change_of_basis));
    if round_trip {
        let same = split.round_trip(g, b)?;
        out.put("round_trip", json!(same));
        if !same {
            out.verdict = "round trip mismatch".into();
            out.negative = true;
        }
    }
    Ok(out)
}

fn full_index_nilpotent(s: &AssocAlgebra, s_index: Option<usize>) -> Option<usize> {
    let m = s.dim();
    let full = |a: usize| s.nil_index(&unit_vector(m, a)) == Some(m);
    match s_index {
        Some(a) => full(a).then_some(a),
        None => (0..m).find(|&a| full(a)),
    }
}

fn diagram_json(v: &DiagramVerdict) -> Value {
    match v {
        DiagramVerdict::Commutes { perp, kernel } => json!({
            "commutes": true, "perp": cert::subspace(perp), "kernel": cert::subspace(kernel),
        }),
        DiagramVerdict::Fails { witness, perp, kernel } => json!({
            "commutes": false, "witness": [witness.0, witness.1],
            "perp": cert::subspace(perp), "kernel": cert::subspace(kernel),
        }),
    }
}

pub fn reverse(ctx: &Ctx, s_index: Option<usize>, verify_only: bool) -> Run {
    let g = ctx.inputs.require_lie()?;
    let s = ctx.inputs.require_assoc()?;
    if let Some(bad) = require_valid(g, Some(s))? {
        return Ok(bad);
    }
    let bbar = ctx
        .inputs
        .current_form
        .as_ref()
        .ok_or_else(|| CliError::Usage("reverse needs a current_form input".into()))?;
    let m = s.dim();
    if let Some(a) = s_index {
        if a >= m {
            return Err(CliError::Usage(format!("--s-index {a} out of range for dim S = {m}")));
        }
    }
    let current = CurrentAlgebra::build(g, s)?;
    let report = verify_invariant_metric(current.as_lie(), bbar)?;
    if !report.all_ok() {
        return Ok(Outcome::negative("current_form is not an invariant metric on g ⊗ S").with("report", cert::report(&report)));
    }
    if verify_only {
        return Ok(Outcome::positive("invariant metric").with("report", cert::report(&report)));
    }

    if g.is_perfect() {
        if let Some(a) = full_index_nilpotent(s, s_index) {
            let sv = unit_vector(m, a);
            let metric = metric_from_nilpotent(g, s, bbar, &sv)?;
            return Ok(Outcome::positive("metric recovered")
                .with("route", json!({"kind": "nilpotent", "s": cert::vector(&sv), "t": cert::vector(&s.power(&sv, m - 1))}))
                .with("metric", cert::form(&metric))
                .with("report", cert::report(&verify_invariant_metric(g, &metric)?)));
        }
    }

    if let Some(b) = ctx.inputs.metric() {
        let sv = s_index.map_or_else(|| s.unit().to_vec(), |a| unit_vector(m, a));
        let f = canonical_f(g, s, b, bbar)?;
        let h = canonical_h(g, s, b, bbar)?;
        let diagram = diagram_json(&check_diagram(g, s, bbar, &sv, &f, &h)?);
        let rec = match recover_metric(g, s, bbar, &sv, &f, &h) {
            Ok(rec) => rec,
            Err(e) if cert::is_negative(&e) => return Ok(Outcome::rejected(&e).with("diagram", diagram)),
            Err(e) => return Err(e.into()),
        };
        return Ok(Outcome::positive("metric recovered")
            .with("route", json!({"kind": "canonical", "s": cert::vector(&sv)}))
            .with("f", cert::matrix(&rec.pair.f))
            .with("h", cert::matrix(&rec.pair.h))
            .with("diagram", diagram)
            .with("metric", cert::form(&rec.metric))
            .with("report", cert::report(&verify_invariant_metric(g, &rec.metric)?)));
    }

    match search_transfer(g, s, bbar, ctx.limits)? {
        TransferSearch::Found(rec) => Ok(Outcome::positive("metric recovered")
            .with("route", json!({"kind": "search", "s": cert::vector(&rec.pair.s)}))
            .with("f", cert::matrix(&rec.pair.f))
            .with("h", cert::matrix(&rec.pair.h))
            .with("perp", cert::subspace(&rec.perp))
            .with("metric", cert::form(&rec.metric))
            .with("report", cert::report(&verify_invariant_metric(g, &rec.metric)?))),
        TransferSearch::Exhausted {
            s_candidates,
            f_space_dim,
            searched_k,
            candidates_tried,
        } => Ok(Outcome::negative("no transfer pair found")
            .with("certified", json!(false))
            .with(
                "exhaustion",
                json!({
                    "s_candidates": s_candidates,
                    "f_space_dim": f_space_dim,
                    "searched_k": searched_k,
                    "candidates_tried": candidates_tried,
                }),
            )),
    }
}

pub struct HeisenbergArgs {
    pub n: usize,
    pub extended: bool,
    pub phi: Option<RationalMatrix>,
    pub gamma: Option<RationalMatrix>,
    pub xi: Option<RationalMatrix>,
}

pub fn heisenberg_cmd(ctx: &Ctx, args: &HeisenbergArgs) -> Run {
    if !args.extended {
        if args.phi.is_some() || args.gamma.is_some() {
            return Err(CliError::Usage("--phi and --gamma need --extended".into()));
        }
        let h = heisenberg(args.n)?;
        let (_, search) = search_metric(&h, ctx.limits);
        return Ok(Outcome::positive("heisenberg algebra")
            .with("algebra", lie_json(&h))
            .with("center", cert::subspace(&h.center()))
            .with("metric_search", search));
    }
    let data = heisenberg_extended(args.n, args.phi.as_ref())?;
    let mut out = Outcome::positive("extended heisenberg algebra")
        .with("algebra", lie_json(&data.algebra))
        .with("metric", cert::form(&data.metric))
        .with("omega", cert::matrix(&data.omega))
        .with("phi", cert::matrix(&data.phi))
        .with("nilpotent", cert::matrix(&data.nilpotent))
        .with("centroid_basis", Value::Array(data.algebra.centroid_basis().iter().map(cert::matrix).collect()));
    let Some(gamma) = &args.gamma else {
        return Ok(out);
    };
    let s = ctx.inputs.require_assoc()?;
    let m = s.dim();
    let gamma = BilinearForm::new(gamma.clone())?;
    let xi = match &args.xi {
        Some(x) => BilinearForm::new(x.clone())?,
        None => BilinearForm::zero(m),
    };
    // A symmetric invariant but degenerate γ still defines α; condition (ii)
    // then fails and the kernel of ℱ is the witness.
    let degenerate_only = gamma.dim() == m && gamma.is_symmetric() && s.is_frobenius_invariant(&gamma) && !gamma.is_nondegenerate();
    let alpha = if degenerate_only && xi.dim() == m && xi.is_symmetric() {
        heisenberg_current_alpha_unchecked(args.n, &gamma, &xi)
    } else {
        heisenberg_current_alpha(args.n, s, &gamma, &xi)?
    };
    let check = check_alpha(&data.algebra, &data.metric, s, &alpha)?;
    let bbar = metric_from_alpha(&data.metric, &alpha);
    out.put("alpha", cert::alpha(&alpha));
    out.put("current_metric", cert::form(&bbar));
    out.put(
        "conditions",
        json!({
            "centroid_witness": check.centroid_witness,
            "i_witness": check.condition_i_witness,
            "ii_kernel": cert::subspace(&check.kernel),
            "iii_witness": check.condition_iii_witness,
        }),
    );
    if !check.all_ok() {
        out.verdict = "condition (ii) fails".into();
        out.negative = true;
        if let Some(v) = check.kernel.basis().first() {
            out.put("kernel_witness", cert::vector(v));
        }
    }
    Ok(out)
}

pub fn frobenius(ctx: &Ctx) -> Run {
    let s = ctx.inputs.require_assoc()?;
    let v = s.validate();
    if !v.is_ok() {
        return Ok(Outcome::negative("violation").with("assoc", assoc_validation_json(&v)));
    }
    let forms = s.frobenius_forms();
    let mut out = Outcome::positive("frobenius")
        .with("algebra", assoc_json(s))
        .with("invariant_forms", Value::Array(forms.iter().map(cert::form).collect()))
        .with("unit_dual_functional", cert::vector(&s.unit_dual_functional()));
    match find_nondegenerate(&forms, s.dim(), ctx.limits) {
        SearchOutcome::Found { value, .. } => out.put("gamma", cert::form(&value)),
        SearchOutcome::Exhausted { certified, proven_bound, searched_k, .. } => {
            out.put("gamma", Value::Null);
            out.put("search", json!({"certified": certified, "proven_bound": proven_bound, "searched_k": searched_k}));
            out.verdict = if certified { "not frobenius" } else { "inconclusive" }.into();
            out.negative = true;
            return Ok(out);
        }
    }
    let Some(g) = &ctx.inputs.lie else {
        return Ok(out);
    };
    if let Some(bad) = require_valid(g, None)? {
        return Ok(bad);
    }
    let b = match metric_for(ctx, g)? {
        Ok(b) => b,
        Err(neg) => return Ok(neg),
    };
    let CurrentMetricOutcome::Found(sol) = solve_current_metric(g, &b, s, ctx.limits)? else {
        return Ok(Outcome::negative("no invariant metric on g ⊗ S"));
    };
    let verdict = g.is_indecomposable(&b)?;
    out.put("indecomposability", indecomposability_json(&verdict));
    let ex = extract_frobenius_from_alpha(s, &sol.alpha, &verdict)?;
    out.put("alpha", cert::alpha(&sol.alpha));
    out.put("extracted_gamma", cert::form(&ex.gamma));
    out.put("sigma", Value::Array(ex.sigma.iter().map(cert::matrix).collect()));
    Ok(out)
}
