use std::collections::BTreeMap;

use anyhow::{bail, Result};
use k3auto::appendix::appendix_checks;
use k3auto::classify::{classification_table, irreducible_components, SpecialLocus};
use k3auto::fibers::catalog::DEFAULT_SEED;
use k3auto::fibers::{find_example, FibrationReport, WeierstrassModel};
use k3auto::lattice::{parse_lattice_expr, Elementary};
use k3auto::lefschetz::{check_supported, solve_table1, SUPPORTED_PRIMES};
use k3auto::verify::{self, CriterionResult};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::render::{file_stem, Document, Table};

/// A rendered-ready result plus the outcome of any reference checks.
pub struct Report {
    pub stem: String,
    pub doc: Document,
    /// Reference comparisons that failed; non-empty means exit status 1.
    pub failures: Vec<String>,
}

fn failures_of(results: &[CriterionResult]) -> Vec<String> {
    results
        .iter()
        .flat_map(|r| r.failures.iter().map(move |f| format!("criterion {}: {f}", r.id)))
        .collect()
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn lattice_info(expr: &str) -> Result<Report> {
    let lattice = parse_lattice_expr(expr)?;
    let inv = lattice.invariants();
    let mut table = Table::new(["property", "value"]);
    let discriminant = if inv.discriminant.is_empty() {
        "trivial".to_string()
    } else {
        inv.discriminant.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    };
    let elementary = match inv.elementary {
        Some(Elementary::Unimodular) => "unimodular".to_string(),
        Some(Elementary::Prime { p, a }) => format!("{p}-elementary a={a}"),
        None => "no".to_string(),
    };
    for (k, v) in [
        ("rank", inv.rank.to_string()),
        ("signature", inv.signature.to_string()),
        ("det", inv.det.to_string()),
        ("discriminant group", discriminant),
        ("elementary", elementary),
        ("delta", opt(inv.delta)),
    ] {
        table.push(vec![k.into(), v]);
    }
    let gram: Vec<Vec<Value>> = lattice
        .gram()
        .to_nested()
        .iter()
        .map(|row| row.iter().map(|x| x.to_i64().map_or_else(|| json!(x.to_string()), |v| json!(v))).collect())
        .collect();
    let mut value = serde_json::to_value(&inv)?;
    value["expr"] = json!(expr);
    value["gram"] = json!(gram);
    Ok(Report {
        stem: format!("lattice-{}", file_stem(expr)),
        doc: Document { lines: vec![format!("{expr}: {inv}")], table, json: value },
        failures: Vec::new(),
    })
}

pub fn table1(prime: Option<u32>) -> Result<Report> {
    let primes = match prime {
        Some(p) => {
            check_supported(p)?;
            vec![p]
        }
        None => SUPPORTED_PRIMES.to_vec(),
    };
    let mut table = Table::new(["p", "n_t", "n", "α(r)"]);
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for &p in &primes {
        let s = solve_table1(p)?;
        let n_t: Vec<String> = s.point_counts.iter().map(ToString::to_string).collect();
        table.push(vec![p.to_string(), n_t.join(", "), s.total_points.to_string(), s.alpha_of_r.to_string()]);
        rows.push(json!({
            "p": p,
            "n_t": n_t,
            "n": s.total_points.to_string(),
            "alpha": s.alpha_of_r.to_string(),
        }));
        results.push(verify::run_for_prime(1, p));
    }
    let stem = prime.map_or_else(|| "table1".to_string(), |p| format!("table1-p{p}"));
    let lines = vec!["Isolated fixed points by type as functions of α = Σ(1 - g(C)), and α in terms of r.".into()];
    Ok(Report { stem, doc: Document { lines, table, json: Value::Array(rows) }, failures: failures_of(&results) })
}

pub fn classify(p: u32) -> Result<Report> {
    let rows = classification_table(p)?;
    let mut headers = vec!["r", "a"];
    if p == 2 {
        headers.push("δ");
    }
    headers.extend(["m", "fixed curves", "n_t", "n", "α", "g", "k", "S", "T", "moduli"]);
    let mut table = Table::new(headers);
    let mut records = Vec::new();
    for row in &rows {
        let rec = row.record();
        let curves = match rec.special {
            SpecialLocus::Empty => "none (empty)".to_string(),
            SpecialLocus::TwoEllipticCurves => "two elliptic curves".to_string(),
            SpecialLocus::Generic if rec.curve_genera.is_empty() => "none".to_string(),
            SpecialLocus::Generic => format!("genera {}", list(&rec.curve_genera)),
        };
        let mut cells = vec![rec.r.to_string(), rec.a.to_string()];
        if p == 2 {
            cells.push(opt(rec.delta));
        }
        cells.extend([
            rec.m.to_string(),
            curves,
            list(&rec.n_t),
            rec.n.to_string(),
            rec.alpha.to_string(),
            opt(rec.g_thm),
            opt(rec.k_thm),
            opt(rec.s.clone()),
            opt(rec.t.clone()),
            rec.moduli_dim.to_string(),
        ]);
        table.push(cells);
        records.push(serde_json::to_value(&rec)?);
    }
    // the order 2 and 3 data live in the chart criterion
    let result = if p <= 3 { verify::run(3) } else { verify::run_for_prime(2, p) };
    Ok(Report {
        stem: format!("classify-p{p}"),
        doc: Document {
            lines: vec![format!("p = {p}: {} row{}", rows.len(), if rows.len() == 1 { "" } else { "s" })],
            table,
            json: Value::Array(records),
        },
        failures: failures_of(&[result]),
    })
}

pub fn moduli(p: u32) -> Result<Report> {
    let comps = irreducible_components(p)?;
    let mut headers = vec!["S", "lattice", "r", "a"];
    if p == 2 {
        headers.push("δ");
    }
    headers.push("dimension");
    let mut table = Table::new(headers);
    for c in &comps {
        let mut cells = vec![c.s_name.clone(), c.display.clone(), c.r.to_string(), c.a.to_string()];
        if p == 2 {
            cells.push(opt(c.delta));
        }
        cells.push(c.dimension.to_string());
        table.push(cells);
    }
    Ok(Report {
        stem: format!("moduli-p{p}"),
        doc: Document {
            lines: vec![format!("p = {p}: {} irreducible component{}", comps.len(), if comps.len() == 1 { "" } else { "s" })],
            table,
            json: serde_json::to_value(&comps)?,
        },
        failures: failures_of(&[verify::run_for_prime(9, p)]),
    })
}

fn fiber_table(report: &FibrationReport) -> Table {
    let mut table = Table::new(["factor", "ord f", "ord g", "ord Δ", "type", "euler", "count"]);
    let ord = |o: Option<u32>| o.map_or_else(|| "∞".to_string(), |v| v.to_string());
    for r in &report.places {
        table.push(vec![
            r.place.to_string(),
            ord(r.ord_f),
            ord(r.ord_g),
            r.ord_delta.to_string(),
            r.kodaira.to_string(),
            r.euler.to_string(),
            r.count.to_string(),
        ]);
    }
    table
}

fn bindings_line<K: std::fmt::Display, V: std::fmt::Display>(bindings: &BTreeMap<K, V>) -> Option<String> {
    if bindings.is_empty() {
        return None;
    }
    let parts: Vec<String> = bindings.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    Some(format!("parameters: {}", parts.join(", ")))
}

pub fn fibers_example(key: &str, seed: u64, overrides: &BTreeMap<String, BigRational>) -> Result<Report> {
    let entry = find_example(key)?;
    let out = entry.verify_with(seed, overrides)?;
    let a = out.action;
    let mut lines = vec![format!("example {} ({})", entry.key, entry.name), format!("model: {}", out.model)];
    lines.extend(bindings_line(&out.bindings));
    lines.push(format!(
        "action: (x, y, t) -> (ζ^{} x, ζ^{} y, ζ^{} t), ζ of order {}; equation semi-invariant: {}",
        a.u,
        a.v,
        a.w,
        a.p,
        if out.invariant { "yes" } else { "no" }
    ));
    lines.push(format!("configuration: {}", out.summary));
    lines.push(format!("expected: {}", out.expected));
    lines.push(format!("euler: {}", out.report.euler_total));
    let mut failures = Vec::new();
    if overrides.is_empty() {
        if !out.matches {
            failures.push(format!("example {}: got {}, expected {}", entry.key, out.summary, out.expected));
        }
        if !out.invariant {
            failures.push(format!("example {}: equation is not semi-invariant", entry.key));
        }
    }
    let mut stem = format!("fibers-{}", file_stem(entry.key));
    if seed != DEFAULT_SEED {
        stem.push_str(&format!("-seed{seed}"));
    }
    for (k, v) in overrides {
        stem.push_str(&format!("-{}", file_stem(&format!("{k}={v}"))));
    }
    Ok(Report {
        stem,
        doc: Document { lines, table: fiber_table(&out.report), json: serde_json::to_value(&out.report)? },
        failures,
    })
}

pub fn fibers_model(f: &str, g: &str, bindings: &BTreeMap<String, BigRational>) -> Result<Report> {
    let model = WeierstrassModel::parse(f, g, bindings)?;
    let unused: Vec<&String> = bindings.keys().filter(|k| !model.bindings().contains_key(*k)).collect();
    if !unused.is_empty() {
        bail!("parameters not used by the model: {}", list(&unused));
    }
    let report = model.classify_fibers()?;
    let mut lines = vec![format!("model: {model}")];
    lines.extend(bindings_line(model.bindings()));
    lines.push(format!("configuration: {}", report.summary()));
    lines.push(format!("euler: {}", report.euler_total));
    let mut stem = format!("fibers-{}--{}", file_stem(f), file_stem(g));
    for (k, v) in bindings {
        stem.push_str(&format!("-{}", file_stem(&format!("{k}={v}"))));
    }
    Ok(Report {
        stem,
        doc: Document { lines, table: fiber_table(&report), json: serde_json::to_value(&report)? },
        failures: Vec::new(),
    })
}

pub fn appendix_verify() -> Result<Report> {
    let checks = appendix_checks()?;
    let mut table = Table::new(["check", "expected", "actual", "result"]);
    let mut failures = Vec::new();
    for c in &checks {
        table.push(vec![c.name.clone(), c.expected.clone(), c.actual.clone(), pass_fail(c.pass).into()]);
        if !c.pass {
            failures.push(format!("{}: expected {}, got {}", c.name, c.expected, c.actual));
        }
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok(Report {
        stem: "appendix-verify".into(),
        doc: Document {
            lines: vec![format!("order 7 isometry of U+U+K7+A6+A6: {passed}/{} checks pass", checks.len())],
            table,
            json: serde_json::to_value(&checks)?,
        },
        failures,
    })
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn verify_all() -> Result<Report> {
    let results = verify::run_all();
    let mut table = Table::new(["id", "criterion", "checks", "result"]);
    for r in &results {
        table.push(vec![r.id.to_string(), r.name.into(), r.checks.to_string(), pass_fail(r.pass).into()]);
    }
    let passed = results.iter().filter(|r| r.pass).count();
    Ok(Report {
        stem: "verify-all".into(),
        doc: Document {
            lines: vec![format!("{passed}/{} acceptance criteria pass", results.len())],
            table,
            json: serde_json::to_value(&results)?,
        },
        failures: failures_of(&results),
    })
}
