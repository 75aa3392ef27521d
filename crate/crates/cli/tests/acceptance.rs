//! Acceptance run: one PASS/FAIL line per criterion, each with its own oracle and
//! time budget. The test fails if any criterion fails.
//!
//! Run with `cargo test -p dglie-cli --test acceptance -- --nocapture` to see the lines.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use dglie::ce::{ce_chain_complex, ce_cochain_algebra, filtration, induced_chain_map, CEChainComplex, Validity};
use dglie::dgla::{cone, is_weak_equivalence, validate_dgla, Limits};
use dglie::env::{sym_vs_gr_check, universal_enveloping};
use dglie::moduli::{
    fiber_product, mc_elements, mc_fiber_product_check, smallness_certificate, spec_points, tangent_space, zariski_tangent,
    AlgebraSurjection, ArtinAlgebra, Convention,
};
use dglie::scalar::{parse_scalar, Scalar};
use num_traits::Zero;
use serde_json::Value;
use support::oracles::{brute_force_dgla, homology_dims, quasi_iso_at, sym_dims, transpose_rank_cohomology, BruteReport};
use support::{catalog, random};

type Check = Result<String, String>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

struct Outcome {
    passed: bool,
    line: String,
}

fn criterion(id: usize, name: &str, budget: Duration, check: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = result.is_ok() && in_time;
    let detail = match &result {
        Ok(d) => d.clone(),
        Err(e) => e.clone(),
    };
    let timing = format!("{} ms of {} ms", elapsed.as_millis(), budget.as_millis());
    let line = format!(
        "criterion {id:>2} {} {name}: {detail} [{timing}{}]",
        if passed { "PASS" } else { "FAIL" },
        if in_time { "" } else { ", over budget" }
    );
    Outcome { passed, line }
}

fn validator_soundness() -> Check {
    let base: Vec<_> = catalog::dgla_documents().into_iter().filter(|(_, d)| d.space.total_dim() <= 12).collect();
    let mut r = random::rng(0xacce_0001);
    let (mut accepted, mut rejected) = (0, 0);
    for i in 0..240 {
        let (name, data) = &base[i % base.len()];
        let perturbed = random::perturb(&mut r, data);
        let report = validate_dgla(&perturbed).map_err(|e| e.to_string())?;
        let ours = BruteReport::from_report(&report, &perturbed);
        let brute = brute_force_dgla(&perturbed);
        ensure(ours == brute, || format!("perturbation {i} of {name}: {ours:?} vs {brute:?}"))?;
        if report.is_ok() {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    ensure(accepted > 0 && rejected > 0, || "only one verdict occurred".into())?;
    Ok(format!("240 perturbations agree exactly ({accepted} valid, {rejected} invalid)"))
}

fn cone_acyclicity() -> Check {
    let all = catalog::dglas();
    ensure(all.len() >= 6, || format!("only {} catalog algebras", all.len()))?;
    for (name, g) in &all {
        let c = cone(g).map_err(|e| e.to_string())?;
        let h = homology_dims(c.algebra.complex());
        ensure(h.values().all(|&d| d == 0), || format!("{name}: homology {h:?}"))?;
    }
    Ok(format!("H(Cn(g)) = 0 for {} algebras", all.len()))
}

fn pbw() -> Check {
    let all = catalog::dglas();
    for (name, g) in &all {
        let report = sym_vs_gr_check(g, 4, Limits::default()).map_err(|e| e.to_string())?;
        ensure(report.passes(), || format!("{name}: {:?}", report.failures()))?;
        let e = universal_enveloping(g, 4, Limits::default()).map_err(|e| e.to_string())?;
        for m in 0..=4 {
            let upper = e.level_dims(m).unwrap();
            let lower = if m == 0 { BTreeMap::new() } else { e.level_dims(m - 1).unwrap() };
            let mut gr: BTreeMap<i32, usize> = upper.iter().map(|(d, n)| (*d, n - lower.get(d).copied().unwrap_or(0))).collect();
            gr.retain(|_, n| *n > 0);
            let sym = sym_dims(g.degrees(), m);
            ensure(gr == sym, || format!("{name} level {m}: gr {gr:?}, Sym {sym:?}"))?;
        }
    }
    Ok(format!("dim gr^m U = dim Sym^m for {} algebras, m ≤ 4", all.len()))
}

fn squares_to_zero(c: &CEChainComplex) -> bool {
    let d = c.complex().differential().global_matrix();
    let columns: Vec<Vec<(usize, Scalar)>> = (0..d.cols())
        .map(|j| (0..d.rows()).filter(|&i| !d.get(i, j).is_zero()).map(|i| (i, d.get(i, j).clone())).collect())
        .collect();
    columns.iter().all(|col| {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, a) in col {
            for (i, b) in &columns[*k] {
                *out.entry(*i).or_insert_with(Scalar::zero) += a * b;
            }
        }
        out.values().all(Zero::is_zero)
    })
}

fn ce_square_zero() -> Check {
    let all = catalog::dglas();
    for (name, g) in &all {
        let c = ce_chain_complex(g, 5, Limits::default()).map_err(|e| e.to_string())?;
        ensure(squares_to_zero(&c), || format!("{name}: D² ≠ 0"))?;
    }
    let mut r = random::rng(0xacce_0004);
    for i in 0..50 {
        let g = random::dgla(&mut r, 6);
        let c = ce_chain_complex(&g, 5, Limits::default()).map_err(|e| e.to_string())?;
        ensure(squares_to_zero(&c), || format!("random algebra {i}: D² ≠ 0"))?;
    }
    Ok(format!("D² = 0 at cutoff 5 on {} catalog and 50 random algebras", all.len()))
}

fn filtration_quotients() -> Check {
    let all = catalog::dglas();
    for (name, g) in &all {
        let c = ce_chain_complex(g, 5, Limits::default()).map_err(|e| e.to_string())?;
        let f = filtration(&c).map_err(|e| e.to_string())?;
        ensure(f.stable, || format!("{name}: filtration not preserved by D"))?;
        for n in 0..=5 {
            let q: BTreeMap<i32, usize> = f.quotients[n].space().dims().into_iter().filter(|(_, d)| *d > 0).collect();
            let sym = sym_dims(c.shifted_degrees(), n);
            ensure(q == sym, || format!("{name} level {n}: {q:?} vs {sym:?}"))?;
        }
    }
    Ok(format!("quotients match Sym^n(g[1]) for n ≤ 5 on {} algebras", all.len()))
}

fn quasi_iso_preservation() -> Check {
    let (mut kept, mut detected) = (Vec::new(), Vec::new());
    for (name, f) in catalog::morphisms() {
        let weq = is_weak_equivalence(&f).is_quasi_iso();
        let s = ce_chain_complex(f.source(), 3, Limits::default()).map_err(|e| e.to_string())?;
        let t = ce_chain_complex(f.target(), 3, Limits::default()).map_err(|e| e.to_string())?;
        let map = induced_chain_map(&f, &s, &t).map_err(|e| e.to_string())?;
        let degrees: std::collections::BTreeSet<i32> = s.space().degrees().chain(t.space().degrees()).collect();
        let exact: Vec<i32> = degrees.into_iter().filter(|&h| s.validity(h) == Validity::Exact && t.validity(h) == Validity::Exact).collect();
        if exact.is_empty() {
            continue;
        }
        let iso = exact.iter().all(|&h| quasi_iso_at(&map, h));
        ensure(iso == weq, || format!("{name}: weak equivalence {weq}, CE iso on exact degrees {iso}"))?;
        if weq {
            kept.push(name);
        } else {
            detected.push(name);
        }
    }
    ensure(kept.len() >= 3 && detected.len() >= 3, || format!("{} equivalences, {} others", kept.len(), detected.len()))?;
    Ok(format!("{} equivalences preserved, {} non-equivalences detected", kept.len(), detected.len()))
}

fn sl2_cohomology() -> Check {
    let g = catalog::dgla("sl2.json");
    let a = ce_cochain_algebra(&g, 3, Limits::default()).map_err(|e| e.to_string())?;
    let dims: Vec<usize> = (0..=3).map(|c| a.cohomology(c).dimension).collect();
    let oracle: Vec<usize> = (0..=3).map(|c| transpose_rank_cohomology(a.chains().complex(), c)).collect();
    ensure(dims == [1, 0, 0, 1] && dims == oracle, || format!("{dims:?}, oracle {oracle:?}"))?;
    ensure((0..=3).all(|c| a.cohomology(c).validity == Validity::Exact), || "a degree is truncated".into())?;
    Ok(format!("H^0..3 = {dims:?}, oracle agrees"))
}

fn tangent_spaces() -> Check {
    let all = catalog::dglas();
    for (name, g) in &all {
        let t = tangent_space(g).map_err(|e| format!("{name}: {e}"))?;
        let h = homology_dims(g.complex()).get(&-1).copied().unwrap_or(0);
        ensure(t.gauge_route == h && t.homology_route == h, || format!("{name}: {t:?}, H_-1 = {h}"))?;
    }
    let cusp = catalog::presentations().into_iter().find(|(n, _)| n == "cusp.json").ok_or("no cusp")?.1;
    let z = zariski_tangent(&cusp).dimension;
    let count = spec_points(&cusp, &ArtinAlgebra::dual_numbers()).map_err(|e| e.to_string())?.parameter_count();
    ensure(z == 2 && count == Some(2), || format!("cusp: Zariski {z}, points {count:?}"))?;
    Ok(format!("both routes agree on {} algebras; cusp tangent 2 by both counts", all.len()))
}

fn fiber_products() -> Check {
    let dual = catalog::artin("dual_numbers.json");
    let t3 = catalog::artin("q_t3.json");
    let to_field = AlgebraSurjection::to_field(&dual);
    let top = t3.m_power(t3.nilpotence() - 1)[0].clone();
    let q = t3.quotient_by_socle_vector(&top).map_err(|e| e.to_string())?;
    let pairs = [(to_field.clone(), to_field.clone()), (q.clone(), q.clone())];
    let lies = ["x_deg_minus1.json", "obstruction.json", "unobstructed.json", "gauge_sample.json"];
    let mut triples = 0;
    for (f0, f1) in &pairs {
        for lie in lies {
            let check = mc_fiber_product_check(f0, f1, &catalog::dgla(lie)).map_err(|e| e.to_string())?;
            ensure(check.passes(), || format!("{lie}: {check:?}"))?;
            triples += 1;
        }
    }
    let dim = fiber_product(&to_field, &to_field).map_err(|e| e.to_string())?.algebra.dim();
    ensure(dim == 3, || format!("dual ×_ℚ dual has dimension {dim}"))?;
    Ok(format!("{triples} triples commute, dual ×_ℚ dual has dimension 3"))
}

fn smallness() -> Check {
    let all = catalog::artins();
    for (name, r) in &all {
        let cert = smallness_certificate(r).map_err(|e| format!("{name}: {e}"))?;
        cert.verify(r).map_err(|e| format!("{name}: {e}"))?;
        ensure(cert.len() + 1 == r.dim(), || format!("{name}: length {} for dimension {}", cert.len(), r.dim()))?;
        ensure(cert.steps.iter().all(|s| s.kernel_dimension == 1 && s.annihilated), || format!("{name}: bad step"))?;
    }
    Ok(format!("{} algebras, chains of length dim − 1", all.len()))
}

fn obstruction_reporting() -> Check {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/mc_q_t3.json");
    let fixture: Value = serde_json::from_str(&std::fs::read_to_string(path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r = catalog::artin("q_t3.json");
    let cases = fixture["cases"].as_array().ok_or("no cases")?;
    let mut notes = Vec::new();
    for case in cases {
        let lie = case["lie"].as_str().unwrap();
        let mc = mc_elements(&r, &catalog::dgla(lie), Convention::Standard).map_err(|e| e.to_string())?;
        let tree = &mc.lift_tree;
        ensure(tree.is_full() == case["full"].as_bool().unwrap(), || format!("{lie}: fullness"))?;
        if let Some(o) = case["obstruction"].as_object() {
            let order = o["order"].as_u64().unwrap() as usize;
            let class: Vec<Scalar> = o["class"].as_array().unwrap().iter().map(|c| parse_scalar(c.as_str().unwrap()).unwrap()).collect();
            let found = tree.obstructions_at(order);
            ensure(!found.is_empty() && found.iter().all(|ob| ob.class == class), || format!("{lie}: obstructions {found:?}"))?;
            ensure(tree.surviving(order) == 0 && !tree.branches.is_empty(), || format!("{lie}: lifts beyond order {}", order - 1))?;
            notes.push(format!("{lie}: class {} at order {order}, nothing past order {}", o["class"], order - 1));
        } else {
            notes.push(format!("{lie}: full lift tree"));
        }
        // the raw equations match the hand expansion at a sample point
        let x: Vec<Scalar> = (0..mc.tensor.dim(-1)).map(|i| Scalar::from_integer((i as i64 + 2).into())).collect();
        let residual = mc.residual(&x);
        let expected = hand_residual(&mc, case, &x);
        ensure(residual == expected, || format!("{lie}: {residual:?} vs hand {expected:?}"))?;
    }
    Ok(notes.join("; "))
}

fn hand_residual(mc: &dglie::moduli::MCElements, case: &Value, x: &[Scalar]) -> Vec<Scalar> {
    let coordinate = |n: i32, m: &str, v: &str| {
        let r = mc.tensor.algebra();
        let k = (0..r.m_dim()).find(|&k| r.m_label(k) == m).unwrap();
        mc.tensor.local_index(n, k, mc.tensor.lie().space().index_of(n, v).unwrap())
    };
    let mut out = vec![Scalar::zero(); mc.tensor.dim(-2)];
    for eq in case["equations"].as_array().unwrap() {
        let e = coordinate(-2, eq["at"][0].as_str().unwrap(), eq["at"][1].as_str().unwrap());
        for term in eq["terms"].as_array().unwrap() {
            let mut value = parse_scalar(term[0].as_str().unwrap()).unwrap();
            for f in term[1].as_array().unwrap() {
                value *= &x[coordinate(-1, f[0].as_str().unwrap(), f[1].as_str().unwrap())];
            }
            out[e] += value;
        }
    }
    out
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dglie"))
}

fn cat(name: &str) -> String {
    catalog::dir().join(name).display().to_string()
}

fn cli_contract() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let malformed: PathBuf = tmp.path().join("malformed.json");
    std::fs::write(&malformed, "{ \"schema_version\": 1, \"kind\": ").map_err(|e| e.to_string())?;
    let malformed = malformed.display().to_string();
    let mut runs: Vec<(Vec<String>, u8)> = Vec::new();
    let mut push = |args: &[&str], code: u8| runs.push((args.iter().map(|s| s.to_string()).collect(), code));
    for entry in std::fs::read_dir(catalog::dir()).map_err(|e| e.to_string())? {
        let name = entry.map_err(|e| e.to_string())?.file_name().to_string_lossy().into_owned();
        push(&["validate", &cat(&name)], if name == "sl2_corrupt.json" { 1 } else { 0 });
    }
    for (name, _) in catalog::morphisms() {
        push(&["qiso", &cat(&name)], 0);
    }
    push(&["homology", &cat("sl2.json"), "--ce", "--all"], 0);
    push(&["homology", &cat("en.json"), "--all", "--witnesses"], 0);
    push(&["homology", &cat("obstruction.json"), "--degree", "-2"], 0);
    push(&["cone", &cat("sl2.json")], 0);
    push(&["env", &cat("sl2.json"), "--cutoff", "3"], 0);
    push(&["free", &cat("e1_complex.json"), "--cutoff", "3"], 0);
    push(&["mc", &cat("obstruction.json"), &cat("q_t3.json")], 0);
    push(&["mc", &cat("unobstructed.json"), &cat("q_t3.json"), "--convention", "paper-literal"], 0);
    push(&["mc", &cat("gauge_sample.json"), &cat("fiber_dual_dual.json")], 0);
    push(&["tangent", &cat("x_deg_minus1.json")], 0);
    push(&["tangent", &cat("cusp.json")], 0);
    push(&["small", &cat("q_t3.json")], 0);
    push(&["spec", &cat("cusp.json"), &cat("q_xy2.json")], 0);
    push(&["validate", &malformed], 2);
    push(&["validate", "/nonexistent/dglie.json"], 2);
    push(&["small", &cat("sl2.json")], 2);
    push(&["mc", &cat("q_t3.json"), &cat("dual_numbers.json")], 2);
    push(&["no-such-command"], 2);
    let mut checked = 0;
    for (args, code) in &runs {
        let run = || binary().arg("--json").args(args).output();
        let (a, b) = (run().map_err(|e| e.to_string())?, run().map_err(|e| e.to_string())?);
        let got = a.status.code();
        ensure(got == Some(*code as i32), || format!("{args:?}: exit {got:?}, expected {code}"))?;
        ensure(a.stdout == b.stdout, || format!("{args:?}: output differs between runs"))?;
        if *code != 2 {
            ensure(serde_json::from_slice::<Value>(&a.stdout).is_ok(), || format!("{args:?}: stdout is not JSON"))?;
        }
        checked += 1;
    }
    let limited = binary().env("DGLIE_MAX_DIM", "5").args(["env", &cat("sl2.json"), "--cutoff", "3"]).output().map_err(|e| e.to_string())?;
    ensure(limited.status.code() == Some(2), || "dimension limit not enforced".into())?;
    Ok(format!("{checked} invocations byte-identical with the expected exit codes"))
}

#[test]
fn acceptance() {
    let suite = Instant::now();
    let s = Duration::from_secs;
    let outcomes = [
        criterion(1, "validator agrees with brute force", s(10), validator_soundness),
        criterion(2, "cones are acyclic", s(5), cone_acyclicity),
        criterion(3, "PBW dimensions", s(20), pbw),
        criterion(4, "CE differential squares to zero", s(30), ce_square_zero),
        criterion(5, "filtration quotients", s(30), filtration_quotients),
        criterion(6, "quasi-isomorphisms preserved and detected", s(30), quasi_iso_preservation),
        criterion(7, "sl2 cohomology", s(1), sl2_cohomology),
        criterion(8, "deformation tangent spaces", s(30), tangent_spaces),
        criterion(9, "fiber products", s(30), fiber_products),
        criterion(10, "smallness certificates", s(30), smallness),
        criterion(11, "obstruction reporting", s(30), obstruction_reporting),
        criterion(12, "CLI determinism and exit codes", s(120), cli_contract),
    ];
    for o in &outcomes {
        println!("{}", o.line);
    }
    println!("acceptance total: {} ms", suite.elapsed().as_millis());
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.line.as_str()).collect();
    assert!(failed.is_empty(), "failing criteria:\n{}", failed.join("\n"));
}
