//! One function per subcommand, each returning an [`Outcome`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use dglie::ce::{ce_chain_complex, induced_chain_map, CEChainComplex, Validity};
use dglie::complex::{is_quasi_iso, ChainComplex};
use dglie::dgla::{cone, free_dgla, is_weak_equivalence, validate_dgla, DgLieAlgebra};
use dglie::env::{sym_vs_gr_check, universal_enveloping, validate_dg_algebra, DgAlgebra};
use dglie::graded::GradedVectorSpace;
use dglie::moduli::{
    gauge_quotient, mc_elements, smallness_certificate, spec_points, tangent_space, validate_artin, zariski_tangent,
    ArtinAlgebra, Convention, GaugeOrbits, MCElements, SolutionSet,
};
use dglie::report::ValidationReport;
use dglie::scalar::Scalar;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::document::{
    self, artin_data, dg_algebra_data, dgla_data, dgla_document, expect_kind, load, payload, ArtinPayload, DgAlgebraPayload,
    DglaPayload, Kind, Loaded, Metadata, PresentationPayload,
};
use crate::{CliError, Config, Outcome};

fn load_dgla(path: &Path) -> Result<(Loaded, DgLieAlgebra), CliError> {
    let loaded = load(path)?;
    expect_kind(&loaded, &[Kind::Dgla])?;
    let p: DglaPayload = payload(&loaded)?;
    let g = DgLieAlgebra::new(dgla_data(path, &p)?)?;
    Ok((loaded, g))
}

fn load_artin(path: &Path) -> Result<(Loaded, ArtinAlgebra), CliError> {
    let loaded = load(path)?;
    expect_kind(&loaded, &[Kind::ArtinAlgebra])?;
    let p: ArtinPayload = payload(&loaded)?;
    let r = ArtinAlgebra::new(artin_data(path, &p)?)?;
    Ok((loaded, r))
}

fn load_presentation(path: &Path) -> Result<(Loaded, dglie::moduli::Presentation), CliError> {
    let loaded = load(path)?;
    expect_kind(&loaded, &[Kind::Presentation])?;
    let p: PresentationPayload = payload(&loaded)?;
    let a = document::presentation(path, &p, Default::default())?;
    Ok((loaded, a))
}

/// Nonzero coordinates keyed by basis label.
fn labelled(space: &GradedVectorSpace, v: &[Scalar]) -> BTreeMap<String, String> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (space.display_label(i), c.to_string()))
        .collect()
}

fn labelled_by(labels: &[String], v: &[Scalar]) -> BTreeMap<String, String> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (labels[i].clone(), c.to_string())).collect()
}

fn vector_text(map: &BTreeMap<String, String>) -> String {
    if map.is_empty() {
        return "0".into();
    }
    map.iter().map(|(l, c)| if c == "1" { l.clone() } else { format!("{c}·{l}") }).collect::<Vec<_>>().join(" + ")
}

fn validity_text(v: Validity) -> String {
    match v {
        Validity::Exact => "exact".into(),
        Validity::TruncatedWindow { cutoff } => format!("truncated-window, cutoff {cutoff}"),
    }
}

fn report_json(report: &ValidationReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "axiom": v.axiom,
                "witness": v.witness,
                "defect": v.defect.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "ok": report.is_ok(), "violations": violations })
}

fn report_text(report: &ValidationReport) -> String {
    if report.is_ok() {
        return "all axioms hold\n".into();
    }
    let mut s = format!("{} violation(s)\n", report.violations.len());
    for v in &report.violations {
        let _ = writeln!(s, "  {} fails on ({})", v.axiom, v.witness.join(", "));
    }
    s
}

fn name_of(loaded: &Loaded) -> &str {
    &loaded.document.metadata.name
}

pub fn validate(path: &Path, _cfg: &Config) -> Result<Outcome, CliError> {
    let mut loaded = load(path)?;
    let kind = loaded.document.kind;
    let (report, extra) = match kind {
        Kind::Dgla => (validate_dgla(&dgla_data(path, &payload::<DglaPayload>(&loaded)?)?)?, json!({})),
        Kind::DgAlgebra => (validate_dg_algebra(&dg_algebra_data(path, &payload::<DgAlgebraPayload>(&loaded)?)?)?, json!({})),
        Kind::ArtinAlgebra => {
            let checked = validate_artin(&artin_data(path, &payload::<ArtinPayload>(&loaded)?)?)?;
            (checked.report, json!({ "nilpotence": checked.nilpotence }))
        }
        Kind::Presentation => {
            let (_, a) = load_presentation(path)?;
            (ValidationReport::default(), json!({ "generators": a.generators(), "relations": a.relations().len() }))
        }
        Kind::Morphism => match document::morphism(&mut loaded) {
            Ok(_) => (ValidationReport::default(), json!({})),
            Err(CliError::Core(dglie::Error::Invalid(report))) => (report, json!({})),
            Err(CliError::Core(dglie::Error::NotAChainMap { degree })) => {
                let mut report = ValidationReport::default();
                report.push(dglie::report::Axiom::ChainMap, vec![format!("degree {degree}")], Vec::new());
                (report, json!({}))
            }
            Err(e) => return Err(e),
        },
    };
    let mut text = format!("{} ({}): ", name_of(&loaded), kind.name());
    text.push_str(&report_text(&report));
    if let Some(n) = extra.get("nilpotence").and_then(Value::as_u64) {
        let _ = writeln!(text, "nilpotence index N = {n}");
    }
    let mut result = report_json(&report);
    result["kind"] = json!(kind.name());
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    Ok(Outcome {
        command: "validate",
        arguments: json!({ "file": path.display().to_string() }),
        inputs: loaded.digests,
        success: report.is_ok(),
        result,
        text,
    })
}

/// Which degrees to report: one, or the whole support.
#[derive(Clone, Copy, Debug)]
pub enum Degrees {
    One(i32),
    All,
}

fn degree_list(space: &GradedVectorSpace, which: Degrees) -> Vec<i32> {
    match which {
        Degrees::One(n) => vec![n],
        Degrees::All => space.degrees().collect(),
    }
}

fn plain_homology(c: &ChainComplex, which: Degrees, witnesses: bool) -> (Vec<Value>, String) {
    let mut entries = Vec::new();
    let mut text = String::new();
    for n in degree_list(c.space(), which) {
        let h = c.homology(n);
        let mut entry = json!({ "degree": n, "dimension": h.dimension, "validity": "exact" });
        let _ = writeln!(text, "H_{n} = {}  [exact]", h.dimension);
        if witnesses {
            let offset = c.space().range(n).start;
            let reps: Vec<_> = h
                .representatives
                .iter()
                .map(|z| {
                    let mut global = vec![Scalar::zero(); c.space().total_dim()];
                    for (i, x) in z.iter().enumerate() {
                        global[offset + i] = x.clone();
                    }
                    labelled(c.space(), &global)
                })
                .collect();
            for r in &reps {
                let _ = writeln!(text, "  {}", vector_text(r));
            }
            entry["representatives"] = json!(reps);
        }
        entries.push(entry);
    }
    (entries, text)
}

fn ce_homology_entries(ce: &CEChainComplex, which: Degrees, witnesses: bool) -> (Vec<Value>, String) {
    let mut entries = Vec::new();
    let mut text = String::new();
    let c = ce.complex();
    for n in degree_list(c.space(), which) {
        let h = ce.homology(n);
        let mut entry = serde_json::to_value(&h).expect("homology serializes");
        let _ = writeln!(text, "H^CE_{n} = {}  [{}]", h.dimension, validity_text(h.validity));
        if witnesses {
            let (rest, _) = plain_homology(c, Degrees::One(n), true);
            entry["representatives"] = rest[0]["representatives"].clone();
            for r in rest[0]["representatives"].as_array().into_iter().flatten() {
                let map: BTreeMap<String, String> = serde_json::from_value(r.clone()).unwrap_or_default();
                let _ = writeln!(text, "  {}", vector_text(&map));
            }
        }
        entries.push(entry);
    }
    (entries, text)
}

pub fn homology(path: &Path, which: Degrees, ce: Option<usize>, witnesses: bool, cfg: &Config) -> Result<Outcome, CliError> {
    let loaded = load(path)?;
    expect_kind(&loaded, &[Kind::Dgla, Kind::DgAlgebra])?;
    let (entries, text, complex_name) = match (loaded.document.kind, ce) {
        (Kind::Dgla, Some(cutoff)) => {
            let g = DgLieAlgebra::new(dgla_data(path, &payload::<DglaPayload>(&loaded)?)?)?;
            let ce = ce_chain_complex(&g, cutoff, cfg.limits)?;
            let (e, t) = ce_homology_entries(&ce, which, witnesses);
            (e, t, "chevalley-eilenberg")
        }
        (Kind::Dgla, None) => {
            let g = DgLieAlgebra::new(dgla_data(path, &payload::<DglaPayload>(&loaded)?)?)?;
            let (e, t) = plain_homology(g.complex(), which, witnesses);
            (e, t, "underlying")
        }
        (Kind::DgAlgebra, None) => {
            let a = DgAlgebra::new(dg_algebra_data(path, &payload::<DgAlgebraPayload>(&loaded)?)?)?;
            let (e, t) = plain_homology(a.complex(), which, witnesses);
            (e, t, "underlying")
        }
        _ => return Err(CliError::Parse("--ce needs a dgla document".into())),
    };
    let arguments = json!({
        "file": path.display().to_string(),
        "degree": match which { Degrees::One(n) => json!(n), Degrees::All => json!("all") },
        "ce_cutoff": ce,
        "witnesses": witnesses,
    });
    Ok(Outcome {
        command: "homology",
        arguments,
        inputs: loaded.digests,
        result: json!({ "complex": complex_name, "homology": entries }),
        text,
        success: true,
    })
}

fn dims_json(space: &GradedVectorSpace) -> BTreeMap<String, usize> {
    space.dims().into_iter().filter(|(_, d)| *d > 0).map(|(n, d)| (n.to_string(), d)).collect()
}

fn dims_text(space: &GradedVectorSpace) -> String {
    let parts: Vec<String> = space.dims().into_iter().filter(|(_, d)| *d > 0).map(|(n, d)| format!("{d} in degree {n}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    }
}

fn write_document(out: &Path, doc: &document::Document) -> Result<(), CliError> {
    fs::write(out, document::render(doc)).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))
}

pub fn cone_cmd(path: &Path, out: Option<&Path>, _cfg: &Config) -> Result<Outcome, CliError> {
    let (loaded, g) = load_dgla(path)?;
    let c = cone(&g)?;
    let doc = dgla_document(
        &c.algebra,
        Metadata { name: format!("cone({})", name_of(&loaded)), description: format!("The cone on {}.", name_of(&loaded)) },
    );
    let mut result = json!({
        "dimensions": dims_json(c.algebra.space()),
        "acyclic": c.algebra.complex().is_acyclic(),
    });
    if let Some(out) = out {
        write_document(out, &doc)?;
        result["output"] = json!(out.display().to_string());
    } else {
        result["document"] = serde_json::to_value(&doc).expect("documents serialize");
    }
    let text = format!(
        "cone({}): {}\nacyclic: {}\n",
        name_of(&loaded),
        dims_text(c.algebra.space()),
        c.algebra.complex().is_acyclic()
    );
    Ok(Outcome {
        command: "cone",
        arguments: json!({ "file": path.display().to_string(), "out": out.map(|p| p.display().to_string()) }),
        inputs: loaded.digests,
        result,
        text,
        success: true,
    })
}

pub fn env(path: &Path, cutoff: usize, cfg: &Config) -> Result<Outcome, CliError> {
    let (loaded, g) = load_dgla(path)?;
    let u = universal_enveloping(&g, cutoff, cfg.limits)?;
    let mut levels = Vec::new();
    let mut totals = Vec::new();
    for m in 0..=cutoff {
        let dims = u.level_dims(m)?;
        let total: usize = dims.values().sum();
        totals.push(total);
        levels.push(json!({
            "level": m,
            "total": total,
            "by_degree": dims.iter().map(|(n, d)| (n.to_string(), *d)).collect::<BTreeMap<_, _>>(),
        }));
    }
    let pbw = sym_vs_gr_check(&g, cutoff, cfg.limits)?;
    let text = format!(
        "U({}) filtration through level {cutoff} (cumulative): {}\ngr^m U = Sym^m: {}\n",
        name_of(&loaded),
        totals.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", "),
        pbw.passes()
    );
    Ok(Outcome {
        command: "env",
        arguments: json!({ "file": path.display().to_string(), "cutoff": cutoff }),
        inputs: loaded.digests,
        result: json!({ "filtration": levels, "cumulative_dimensions": totals, "pbw": { "passes": pbw.passes(), "checks": pbw.checks } }),
        text,
        success: pbw.passes(),
    })
}

pub fn free(path: &Path, cutoff: usize, out: Option<&Path>, cfg: &Config) -> Result<Outcome, CliError> {
    let (loaded, g) = load_dgla(path)?;
    let f = free_dgla(g.complex(), cutoff, cfg.limits)?;
    let a = f.algebra();
    let betti: BTreeMap<String, usize> = a.complex().betti().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    let mut result = json!({
        "weight_dimensions": f.weight_dims(),
        "dimensions": dims_json(a.space()),
        "homology": betti,
    });
    if let Some(out) = out {
        let doc = dgla_document(
            a,
            Metadata {
                name: format!("free({})", name_of(&loaded)),
                description: format!("Free dg-Lie algebra on {} modulo brackets of weight above {cutoff}.", name_of(&loaded)),
            },
        );
        write_document(out, &doc)?;
        result["output"] = json!(out.display().to_string());
    }
    let text = format!(
        "free dg-Lie algebra on {} through weight {cutoff}\nweight dimensions: {}\n{}\n",
        name_of(&loaded),
        f.weight_dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "),
        dims_text(a.space())
    );
    Ok(Outcome {
        command: "free",
        arguments: json!({ "file": path.display().to_string(), "cutoff": cutoff, "out": out.map(|p| p.display().to_string()) }),
        inputs: loaded.digests,
        result,
        text,
        success: true,
    })
}

fn mc_json(mc: &MCElements) -> (Value, String) {
    let s = &mc.solution;
    let vars = &mc.system.variables;
    let coordinates: BTreeMap<String, String> =
        vars.iter().zip(&s.coordinates).filter(|(_, p)| !p.is_zero()).map(|(v, p)| (v.clone(), p.render(&s.params))).collect();
    let constraints: Vec<String> = s.constraints.iter().map(|p| p.render(&s.params)).collect();
    let equations: Vec<String> = mc.system.equations.iter().filter(|e| !e.is_zero()).map(|e| e.render(vars)).collect();
    let tree = &mc.lift_tree;
    let branches: Vec<Value> = tree
        .branches
        .iter()
        .map(|b| {
            json!({
                "root": b.root,
                "reached_order": b.reached_order,
                "lift": labelled_by(vars, &b.lift),
                "stages": b.stages.iter().map(|st| json!({
                    "order": st.order,
                    "lifted": st.lifted,
                    "obstructions": st.obstructions.iter().map(|o| json!({
                        "basis": o.basis,
                        "class": o.class.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "vanishes": o.vanishes(),
                    })).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut text = format!("Maurer–Cartan equation ({} convention) in {} coordinates\n", mc.convention, vars.len());
    match s.dimension() {
        Some(d) => {
            let _ = writeln!(text, "solutions: linear, {d}-parameter family");
        }
        None => {
            let _ = writeln!(text, "solutions: {} parameters, {} polynomial constraint(s)", s.params.len(), constraints.len());
        }
    }
    for (v, p) in &coordinates {
        let _ = writeln!(text, "  {v} = {p}");
    }
    for c in &constraints {
        let _ = writeln!(text, "  constraint: {c} = 0");
    }
    let _ = writeln!(text, "lift tree: {} branch(es), full: {}", tree.branches.len(), tree.is_full());
    for b in &tree.branches {
        let _ = writeln!(text, "  {}: reaches order {} of {}", b.root, b.reached_order, tree.max_order);
        for st in b.stages.iter().filter(|st| !st.lifted) {
            for o in st.obstructions.iter().filter(|o| !o.vanishes()) {
                let class: Vec<String> = o.class.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(text, "    obstruction at order {} on {}: class ({}) in H_-2", st.order, o.basis, class.join(", "));
            }
        }
    }
    let value = json!({
        "convention": mc.convention.name(),
        "variables": vars,
        "equations": equations,
        "parameters": s.params,
        "coordinates": coordinates,
        "constraints": constraints,
        "linear": s.is_linear(),
        "dimension": s.dimension(),
        "lift_tree": { "max_order": tree.max_order, "full": tree.is_full(), "branches": branches },
    });
    (value, text)
}

pub fn mc(lie: &Path, artin: &Path, convention: Convention, _cfg: &Config) -> Result<Outcome, CliError> {
    let (lloaded, g) = load_dgla(lie)?;
    let (aloaded, r) = load_artin(artin)?;
    let elements = mc_elements(&r, &g, convention)?;
    let (mut result, mut text) = mc_json(&elements);
    let value = gauge_quotient(elements)?;
    let orbits = match &value.gauge_orbits {
        GaugeOrbits::Linear { dimension, representatives } => {
            let _ = writeln!(text, "gauge orbits: vector space of dimension {dimension}");
            json!({
                "linear": true,
                "dimension": dimension,
                "representatives": representatives.iter().map(|v| labelled_by(&value.mc.system.variables, v)).collect::<Vec<_>>(),
            })
        }
        GaugeOrbits::Nonlinear { linearized_dimension } => {
            let _ = writeln!(text, "gauge orbits: nonlinear; first-order orbit space at the base point has dimension {linearized_dimension}");
            json!({ "linear": false, "linearized_dimension": linearized_dimension })
        }
    };
    let _ = writeln!(text, "tangent dimension: {}", value.tangent_dimension);
    result["gauge_orbits"] = orbits;
    result["tangent_dimension"] = json!(value.tangent_dimension);
    let mut inputs = lloaded.digests;
    inputs.extend(aloaded.digests);
    Ok(Outcome {
        command: "mc",
        arguments: json!({ "lie": lie.display().to_string(), "artin": artin.display().to_string(), "convention": convention.name() }),
        inputs,
        result,
        text,
        success: true,
    })
}

pub fn tangent(path: &Path, _cfg: &Config) -> Result<Outcome, CliError> {
    let loaded = load(path)?;
    expect_kind(&loaded, &[Kind::Dgla, Kind::Presentation])?;
    let (result, text, success) = if loaded.document.kind == Kind::Dgla {
        let (_, g) = load_dgla(path)?;
        let t = tangent_space(&g)?;
        (
            json!({ "dimension": t.homology_route, "gauge_route": t.gauge_route, "homology_route": t.homology_route }),
            format!("tangent space of {}: dimension {} (gauge quotient on dual numbers and H_-1 agree)\n", name_of(&loaded), t.gauge_route),
            true,
        )
    } else {
        let (_, a) = load_presentation(path)?;
        let z = zariski_tangent(&a);
        let points = spec_points(&a, &ArtinAlgebra::dual_numbers())?;
        let count = points.parameter_count();
        let agree = count == Some(z.dimension);
        let basis: Vec<_> = z.basis.iter().map(|v| labelled_by(a.generators(), v)).collect();
        (
            json!({ "dimension": z.dimension, "basis": basis, "dual_number_points": count, "agree": agree }),
            format!(
                "Zariski tangent space of {}: dimension {}; maps to the dual numbers form a {}-parameter family\n",
                name_of(&loaded),
                z.dimension,
                count.map_or("non-linear".to_string(), |c| c.to_string())
            ),
            agree,
        )
    };
    Ok(Outcome { command: "tangent", arguments: json!({ "file": path.display().to_string() }), inputs: loaded.digests, result, text, success })
}

pub fn small(path: &Path, _cfg: &Config) -> Result<Outcome, CliError> {
    let (loaded, r) = load_artin(path)?;
    let certificate = smallness_certificate(&r)?;
    let mut text = format!("{}: chain of {} elementary quotient(s)\n", name_of(&loaded), certificate.len());
    let steps: Vec<Value> = certificate
        .steps
        .iter()
        .map(|s| {
            let kernel = labelled_by(s.map.source().labels(), &s.kernel);
            let _ = writeln!(text, "  kill ({}) -> basis {}", vector_text(&kernel), s.map.target().labels().join(", "));
            json!({
                "kernel": kernel,
                "kernel_dimension": s.kernel_dimension,
                "annihilated_by_m": s.annihilated,
                "target_basis": s.map.target().labels(),
            })
        })
        .collect();
    Ok(Outcome {
        command: "small",
        arguments: json!({ "file": path.display().to_string() }),
        inputs: loaded.digests,
        result: json!({ "dimension": r.dim(), "length": certificate.len(), "steps": steps }),
        text,
        success: true,
    })
}

pub fn spec(presentation: &Path, artin: &Path, _cfg: &Config) -> Result<Outcome, CliError> {
    let (ploaded, a) = load_presentation(presentation)?;
    let (aloaded, r) = load_artin(artin)?;
    let points = spec_points(&a, &r)?;
    let equations: Vec<String> = points.equations.iter().map(|e| e.render(&points.variables)).collect();
    let mut text = format!("maps {} -> {} in {} coordinates\n", name_of(&ploaded), name_of(&aloaded), points.variables.len());
    let solutions = match &points.solutions {
        SolutionSet::Linear { dimension, basis } => {
            let _ = writeln!(text, "linear solution space of dimension {dimension}");
            json!({ "linear": true, "dimension": dimension, "basis": basis.iter().map(|v| labelled_by(&points.variables, v)).collect::<Vec<_>>() })
        }
        SolutionSet::Polynomial { tangent_dimension } => {
            let _ = writeln!(text, "polynomial system; tangent space at the origin has dimension {tangent_dimension}");
            json!({ "linear": false, "tangent_dimension": tangent_dimension })
        }
    };
    for e in &equations {
        let _ = writeln!(text, "  {e} = 0");
    }
    let mut inputs = ploaded.digests;
    inputs.extend(aloaded.digests);
    Ok(Outcome {
        command: "spec",
        arguments: json!({ "presentation": presentation.display().to_string(), "artin": artin.display().to_string() }),
        inputs,
        result: json!({ "variables": points.variables, "equations": equations, "solutions": solutions }),
        text,
        success: true,
    })
}

pub fn qiso(path: &Path, cutoff: usize, cfg: &Config) -> Result<Outcome, CliError> {
    let mut loaded = load(path)?;
    expect_kind(&loaded, &[Kind::Morphism])?;
    let f = document::morphism(&mut loaded)?;
    let report = is_weak_equivalence(&f);
    let source = ce_chain_complex(f.source(), cutoff, cfg.limits)?;
    let target = ce_chain_complex(f.target(), cutoff, cfg.limits)?;
    let induced = induced_chain_map(&f, &source, &target)?;
    let failures: BTreeSet<i32> = is_quasi_iso(&induced).failures.into_iter().collect();
    let degrees: BTreeSet<i32> = source.space().degrees().chain(target.space().degrees()).collect();
    let mut rows = Vec::new();
    let mut text = format!(
        "{}: weak equivalence: {}{}\n",
        name_of(&loaded),
        report.is_quasi_iso(),
        if report.is_quasi_iso() { String::new() } else { format!(" (fails in degrees {:?})", report.failures) }
    );
    let mut window_iso = true;
    let mut exact_degrees = 0;
    for n in degrees {
        let exact = source.validity(n) == Validity::Exact && target.validity(n) == Validity::Exact;
        let iso = !failures.contains(&n);
        if exact {
            window_iso &= iso;
            exact_degrees += 1;
        }
        let (hs, ht) = (source.homology(n).dimension, target.homology(n).dimension);
        let _ = writeln!(text, "  H^CE_{n}: {hs} -> {ht}  iso: {iso}  [{}]", if exact { "exact" } else { "truncated-window" });
        rows.push(json!({
            "degree": n,
            "source_dimension": hs,
            "target_dimension": ht,
            "isomorphism": iso,
            "source_validity": source.validity(n),
            "target_validity": target.validity(n),
        }));
    }
    // With no exact degree the window says nothing either way.
    let verdict = (exact_degrees > 0).then_some(window_iso);
    let _ = writeln!(
        text,
        "induced CE map is a quasi-isomorphism on exact degrees: {}",
        verdict.map_or("undetermined (no exact degrees)".to_string(), |v| v.to_string())
    );
    Ok(Outcome {
        command: "qiso",
        arguments: json!({ "file": path.display().to_string(), "cutoff": cutoff }),
        inputs: loaded.digests,
        result: json!({
            "weak_equivalence": report.is_quasi_iso(),
            "failures": report.failures,
            "ce": { "cutoff": cutoff, "quasi_isomorphism_on_exact_degrees": verdict, "exact_degrees": exact_degrees, "degrees": rows },
        }),
        text,
        success: true,
    })
}
