//! Command implementations behind the `holimcat` binary.
//!
//! Every command returns an [`Outcome`]: a JSON report with sorted keys, a
//! few summary lines, and a pass flag. Nothing here depends on wall-clock
//! time or hashing order, so identical inputs give identical bytes.

use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::equivariant::{equivariant_reedy_check, lemma_equivariance};
use crate::error::{Error, Result};
use crate::fincat::{degree_function, degree_layer, Diagram, FinCategory, ObjId};
use crate::holim::{
    bn_condition_count, cofinality_check, compare_cospan_models, cube_cartesian_check, cube_matching,
    cube_total_fiber, grothendieck, holim_model, lambda_functor, lemma_indgrot_iso, lydakis_check_capped,
    overcat_diagram, reedy_qf_check, theorem_bn_conditions, Budget,
};
use crate::io::{category_to_doc, diagram_of, g_diagram_of, read_document, validate_document, Document};
use crate::simpl::{homology, nerve, HomologyResult, PROXY_LABEL};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub max_dim: usize,
    pub budget: u64,
    /// `lydakis`: highest simplex dimension compared.
    pub dim: usize,
    /// `lemma-iso`: object ids of `U`; empty means the top degree layer.
    pub members: Vec<String>,
    /// `cofinality`: cube dimension when no input is given.
    pub n: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_dim: 8,
            budget: DEFAULT_BUDGET,
            dim: 2,
            members: Vec::new(),
            n: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub summary: Vec<String>,
    pub pass: bool,
}

impl Outcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize") + "\n"
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// 2 for unusable input, 3 for an exhausted budget.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) => 3,
        _ => 2,
    }
}

pub const CHECKS: [&str; 7] = [
    "reedy",
    "reedy-equivariant",
    "cube-cartesian",
    "bn-conditions",
    "lydakis",
    "lemma-iso",
    "cofinality",
];

pub const MODELS: [&str; 4] = ["holim", "bk-pullback", "total-fiber", "grothendieck"];

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn envelope(command: &str, kind: &str, pass: bool, report: Value) -> Value {
    json!({
        "command": command,
        "kind": kind,
        "method": PROXY_LABEL,
        "pass": pass,
        "report": report,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn cmd_validate(paths: &[&Path]) -> Result<Outcome> {
    let mut files = Vec::new();
    let mut summary = Vec::new();
    let mut pass = true;
    for p in paths {
        let reports = validate_document(&read_document(p)?)?;
        let clean = reports.iter().all(|r| r.is_clean());
        pass &= clean;
        let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
        summary.push(format!("{}: {} ({violations} violations)", p.display(), verdict(clean)));
        files.push(json!({ "path": p.display().to_string(), "clean": clean, "reports": value(&reports) }));
    }
    Ok(Outcome {
        report: envelope("validate", "structure", pass, Value::Array(files)),
        summary,
        pass,
    })
}

fn require_valid(doc: &Document) -> Result<()> {
    let reports = validate_document(doc)?;
    if let Some(bad) = reports.iter().find(|r| !r.is_clean()) {
        return Err(Error::precondition(format!(
            "input fails validation ({}): {}",
            bad.subject,
            serde_json::to_string(&bad.violations)?
        )));
    }
    Ok(())
}

fn members_of(x: &Diagram, ids: &[String]) -> Result<Vec<ObjId>> {
    let base = x.base();
    if ids.is_empty() {
        let top = degree_function(base)?.into_iter().max().unwrap_or(0);
        return degree_layer(base, top);
    }
    ids.iter().map(|s| base.object_by_id(s)).collect()
}

/// `n` with `2^{n+1} − 1` objects in the base.
fn punctured_cube_dimension(base: &FinCategory) -> Result<usize> {
    let size = base.num_objects() + 1;
    if size < 4 || !size.is_power_of_two() {
        return Err(Error::precondition("base is not a punctured cube P_0(n_+) with n ≥ 1"));
    }
    Ok(size.trailing_zeros() as usize - 1)
}

pub fn cmd_check(kind: &str, input: Option<&Path>, cfg: &RunConfig) -> Result<Outcome> {
    let doc = input.map(read_document).transpose()?;
    check_document(kind, doc.as_ref(), cfg)
}

/// [`cmd_check`] on an already parsed document.
pub fn check_document(kind: &str, doc: Option<&Document>, cfg: &RunConfig) -> Result<Outcome> {
    let budget = Budget::new(cfg.budget);
    if let Some(d) = doc {
        require_valid(d)?;
    }
    let need = || doc.ok_or_else(|| Error::precondition(format!("`{kind}` needs an input file")));
    let (pass, report, summary) = match kind {
        "reedy" => {
            let r = reedy_qf_check(&diagram_of(need()?)?, &budget)?;
            let lines = r
                .objects
                .iter()
                .map(|o| format!("m at {} (degree {}): {}", o.object, o.degree, verdict(o.report.pass)))
                .collect();
            (r.pass, value(&r), lines)
        }
        "reedy-equivariant" => {
            let x = g_diagram_of(need()?)?;
            let r = equivariant_reedy_check(&x, &budget)?;
            let lines = r
                .rows
                .iter()
                .map(|row| {
                    let ok = row.objects.iter().all(|o| o.report.pass);
                    format!("H = {{{}}}: {} objects, {}", row.subgroup.join(","), row.objects.len(), verdict(ok))
                })
                .collect();
            (r.pass, value(&r), lines)
        }
        "cube-cartesian" => {
            let r = cube_cartesian_check(&diagram_of(need()?)?, &budget)?;
            let mut lines = vec![
                format!("reedy: {}", verdict(r.reedy.pass)),
                format!("{} total fibers, all contractible: {}", r.fibers.len(), r.fibers_contractible),
            ];
            if let Some(w) = r.warning {
                lines.push(format!("warning: {w}"));
            }
            lines.push(if r.cartesian { "cartesian" } else { "not cartesian" }.to_string());
            (r.cartesian, value(&r), lines)
        }
        "bn-conditions" => {
            let x = diagram_of(need()?)?;
            let n = punctured_cube_dimension(x.base())?;
            let r = theorem_bn_conditions(&x, n, &budget)?;
            let failing = r.conditions.iter().filter(|c| !c.report.pass).count();
            let lines = vec![
                format!("{} conditions (expected {})", r.count, bn_condition_count(n)),
                format!("{failing} failing"),
            ];
            (r.pass, value(&r), lines)
        }
        "lydakis" => {
            let x = diagram_of(need()?)?;
            let y = overcat_diagram(x.base()).diagram;
            let r = lydakis_check_capped(&y, &x, cfg.dim, cfg.max_dim, &budget)?;
            let lines = r
                .dims
                .iter()
                .map(|d| format!("dim {}: {} chains, {} maps, bijective: {}", d.dim, d.chains, d.maps, d.bijective))
                .collect();
            (r.pass, value(&r), lines)
        }
        "lemma-iso" => {
            let d = need()?;
            let x = diagram_of(d)?;
            let members = members_of(&x, &cfg.members)?;
            let iso = lemma_indgrot_iso(&x, &members, &budget)?;
            let r = &iso.report;
            let mut lines = vec![
                format!("U = {{{}}}", r.members.join(", ")),
                format!("left: {} objects, {} morphisms", r.left_objects, r.left_morphisms),
                format!("right: {} objects, {} morphisms", r.right_objects, r.right_morphisms),
                format!("inverse after theta is the identity: {}", r.right_round_trip),
                format!("theta after inverse is the identity: {}", r.left_round_trip),
            ];
            let mut pass = r.pass;
            let mut report = json!({ "lemma": value(r) });
            if matches!(d, Document::GDiagram(_)) {
                let e = lemma_equivariance(&g_diagram_of(d)?, &members, &budget)?;
                lines.push(format!("equivariant under G_U = {{{}}}: {}", e.stabilizer.join(","), e.pass));
                pass &= e.pass;
                report["equivariance"] = value(&e);
            }
            (pass, report, lines)
        }
        "cofinality" => {
            let n = match (cfg.n, doc) {
                (Some(n), _) => n,
                (None, Some(d)) => punctured_cube_dimension(diagram_of(d)?.base())?,
                (None, None) => return Err(Error::precondition("`cofinality` needs --n or an input file")),
            };
            let r = cofinality_check(&lambda_functor(n)?)?;
            let contractible = r.slices.iter().filter(|s| s.contractible).count();
            let initial = r.initial_objects.iter().filter(|c| c.is_initial).count();
            let lines = vec![
                format!("n = {n}: {contractible}/{} slices with point homology", r.slices.len()),
                format!("explicit initial object verified on {initial}/{} subsets", r.initial_objects.len()),
            ];
            (r.pass, value(&r), lines)
        }
        other => return Err(Error::precondition(format!("unknown check `{other}`"))),
    };
    Ok(Outcome {
        report: envelope("check", kind, pass, report),
        summary,
        pass,
    })
}

#[derive(Serialize)]
struct Artifact {
    name: String,
    category: crate::io::TablesDoc,
    homology: HomologyResult,
}

fn artifact(name: impl Into<String>, c: &Arc<FinCategory>) -> Result<Artifact> {
    Ok(Artifact {
        name: name.into(),
        category: category_to_doc(c),
        homology: homology(&nerve(c)?.set),
    })
}

fn describe(a: &Artifact) -> String {
    format!(
        "{}: {} objects, {} morphisms, betti {:?}",
        a.name,
        a.category.objects.len(),
        a.category.morphisms.len(),
        a.homology.betti
    )
}

pub fn cmd_model(kind: &str, input: &Path, cfg: &RunConfig) -> Result<Outcome> {
    model_document(kind, &read_document(input)?, cfg)
}

/// [`cmd_model`] on an already parsed document.
pub fn model_document(kind: &str, doc: &Document, cfg: &RunConfig) -> Result<Outcome> {
    let budget = Budget::new(cfg.budget);
    require_valid(doc)?;
    let x = diagram_of(doc)?;
    let (artifacts, extra) = match kind {
        "holim" => {
            let m = holim_model(&x, &budget)?;
            (vec![artifact("holim", &m.hom.category)?], Value::Null)
        }
        "bk-pullback" => {
            let (cmp, bk) = compare_cospan_models(&x, &budget)?;
            (vec![artifact("bk-pullback", &bk.category)?], value(&cmp))
        }
        "total-fiber" => {
            let m = cube_matching(&x, &budget)?;
            let h = m.functor.target().clone();
            let arts = h
                .objects()
                .map(|phi| artifact(format!("fiber over {}", h.object_id(phi)), &cube_total_fiber(&m, phi)?.category))
                .collect::<Result<_>>()?;
            (arts, Value::Null)
        }
        "grothendieck" => {
            let gr = grothendieck(&x);
            (vec![artifact("grothendieck", &gr.category)?], Value::Null)
        }
        other => return Err(Error::precondition(format!("unknown model `{other}`"))),
    };
    let summary = artifacts.iter().map(describe).collect();
    let report = json!({ "artifacts": value(&artifacts), "comparison": extra });
    Ok(Outcome {
        report: envelope("model", kind, true, report),
        summary,
        pass: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    const POINT_SQUARE: &str = r#"{"base": {"subsets": {"letters": ["1", "2"]}}, "constant": {"ordinal": 0}}"#;

    #[test]
    fn reedy_on_constant_point() {
        let f = file(POINT_SQUARE);
        let out = cmd_check("reedy", Some(f.path()), &RunConfig::default()).unwrap();
        assert!(out.pass);
        assert!(out.to_json().contains("homology proxy"));
    }

    #[test]
    fn lemma_on_punctured_square() {
        let f = file(r#"{"base": {"subsets": {"letters": ["1", "2"]}}, "constant": {"ordinal": 1}}"#);
        let out = cmd_check("lemma-iso", Some(f.path()), &RunConfig::default()).unwrap();
        assert!(out.pass);
        assert!(out.summary.iter().any(|l| l == "inverse after theta is the identity: true"));
    }

    #[test]
    fn bn_count_for_a_square_cube() {
        let f = file(r#"{"base": {"subsets": {"letters": ["1", "2", "+"]}}, "constant": {"ordinal": 0}}"#);
        let out = cmd_check("bn-conditions", Some(f.path()), &RunConfig::default()).unwrap();
        assert_eq!(out.summary[0], "4 conditions (expected 4)");
    }

    #[test]
    fn holim_of_a_point() {
        let f = file(POINT_SQUARE);
        let out = cmd_model("holim", f.path(), &RunConfig::default()).unwrap();
        assert_eq!(out.report["report"]["artifacts"][0]["category"]["objects"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn exit_codes() {
        let missing = cmd_validate(&[Path::new("/nonexistent/input.json")]).unwrap_err();
        assert_eq!(error_exit_code(&missing), 2);
        assert_eq!(error_exit_code(&Error::BudgetExceeded(5)), 3);
        let tiny = RunConfig {
            budget: 1,
            ..RunConfig::default()
        };
        let f = file(r#"{"base": {"subsets": {"letters": ["1", "2"]}}, "constant": {"ordinal": 2}}"#);
        let e = cmd_check("reedy", Some(f.path()), &tiny).unwrap_err();
        assert_eq!(error_exit_code(&e), 3);
    }
}
