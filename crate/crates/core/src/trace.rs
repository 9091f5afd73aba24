//! Claim-to-check traceability.
//!
//! Tests declare what they verify with a line comment of the form
//! `// covers: <claim-id>[, <claim-id>...]` directly above the test function.
//! The matrix is rebuilt from those annotations; a claim without one, or an
//! annotation naming no known claim, is a coverage error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub command: &'static str,
    /// Name of the `verify all` check whose verdict decides the status.
    pub check: Option<&'static str>,
}

const fn claim(
    id: &'static str,
    statement: &'static str,
    command: &'static str,
    check: Option<&'static str>,
) -> Claim {
    Claim {
        id,
        statement,
        command,
        check,
    }
}

pub const CLAIMS: &[Claim] = &[
    claim(
        "form-normalization",
        "The invariant form on g_B(l) and g_D(l) satisfies (θ, θ) = 2; the dual basis pairs to δ_ij.",
        "affine-verma dump-algebra --type {B|D} --l N",
        None,
    ),
    claim(
        "clifford-realization",
        "Normally ordered Clifford quadratics and the linear generators close into g_B(l) ⊃ g_D(l) with the fixed root vectors.",
        "affine-verma dump-algebra --type {B|D} --l N",
        None,
    ),
    claim(
        "short-coroot",
        "h_{ε_i} = [e_{ε_i}, f_{ε_i}] = 2 H_i.",
        "affine-verma dump-algebra --type B --l N",
        None,
    ),
    claim(
        "sugawara",
        "ω = Σ a^i(-1) b^i(-1) 1 / (2(k + h∨)) is basis independent with central charge k dim g / (k + h∨).",
        "affine-verma verify conformal --l N",
        Some("conformal"),
    ),
    claim(
        "vb-singular",
        "v_B is annihilated by e_{β_i}(0), i = 1..l, and f_θ(1) in N_B(-l+3/2, 0).",
        "affine-verma verify singular --type B --l N",
        Some("singular-B"),
    ),
    claim(
        "admissible-pairings",
        "At k = -l+3/2 the shifted pairings are 1 on every α_i∨, -l+5/2 on α_0∨ and 2 on (2δ-θ)∨; λ = kΛ_0 is admissible for the D_l affinization.",
        "affine-verma verify admissible --l N",
        Some("admissible"),
    ),
    claim(
        "vd-singular",
        "v_D is annihilated by e_{α_i}(0), i = 1..l, and f_θ(1) in N_D(-l+3/2, 0).",
        "affine-verma verify singular --type D --l N",
        Some("singular-D"),
    ),
    claim(
        "vd-weight",
        "v_D has degree 4 and h-weight 2θ, the weight r_{2δ-θ}.λ = λ - 4δ + 2θ.",
        "affine-verma verify singular --type D --l N",
        Some("singular-D"),
    ),
    claim(
        "singular-uniqueness",
        "The singular vectors of degree 2, weight 2ε_1 in N_B and of degree 4, weight 2θ in N_D form one-dimensional spaces.",
        "cargo test -p affine-verma --test acceptance",
        None,
    ),
    claim(
        "zero-mode-relations",
        "The nine families of zero-mode relations X v_B = Y 1 hold in N_B(-l+3/2, 0).",
        "affine-verma verify embedding --l N",
        Some("embedding"),
    ),
    claim(
        "membership",
        "An explicit element of U(ĝ_B) maps v_B to the embedded v_D, so v_D lies in the maximal submodule generated by v_B.",
        "affine-verma verify embedding --l N",
        Some("embedding"),
    ),
    claim(
        "quadratic-relation",
        "(2l-1) Σ_short e f + f e - 4 Σ_long e f + f e - Σ_short h h applied to 1 lies in U(ĝ_B) v_B.",
        "affine-verma verify conformal --l N",
        Some("conformal"),
    ),
    claim(
        "conformal-equality",
        "ω_B - ω_D lies in U(ĝ_B) v_B and both central charges equal -l(2l-3), which is -20 at l = 4.",
        "affine-verma verify conformal --l N",
        Some("conformal"),
    ),
    claim(
        "level-equation",
        "c_B(k) = c_D(k) holds exactly for k ∈ {0, -l+3/2}.",
        "affine-verma verify conformal --l N",
        Some("conformal"),
    ),
    claim(
        "triality-maps",
        "π' and π'' permute the D_4 Chevalley generators and extend to Lie algebra automorphisms with π'^3 = π''^2 = 1.",
        "affine-verma verify triality --l 4",
        Some("triality"),
    ),
    claim(
        "triality-invariance",
        "π'(v_{D_4}) = π''(v_{D_4}) = v_{D_4}, and both fix ω_{D_4}.",
        "affine-verma verify triality --l 4",
        Some("triality"),
    ),
    claim(
        "appendix-relations",
        "Each auxiliary identity e_{ε_1-ε_2}(0) X 1 = Y 1 used to show e_{ε_1-ε_2}(0) v_D = 0 holds.",
        "affine-verma verify appendix --l N",
        Some("appendix"),
    ),
];

/// One annotated test: `path::function`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TestRef {
    pub file: String,
    pub function: String,
}

impl std::fmt::Display for TestRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}::{}", self.file, self.function)
    }
}

/// Annotations found in Rust sources: claim id → tests.
pub type Annotations = BTreeMap<String, BTreeSet<TestRef>>;

/// Extracts `// covers:` annotations from one source text.
pub fn parse_annotations(file: &str, source: &str) -> Annotations {
    let mut out = Annotations::new();
    let mut pending: Vec<String> = Vec::new();
    for line in source.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("// covers:") {
            pending.extend(rest.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()));
            continue;
        }
        if pending.is_empty() {
            continue;
        }
        if let Some(name) = fn_name(t) {
            let r = TestRef {
                file: file.to_string(),
                function: name.to_string(),
            };
            for id in pending.drain(..) {
                out.entry(id).or_default().insert(r.clone());
            }
        } else if !(t.starts_with("#[") || t.starts_with("//")) {
            // The annotation must sit on the item it describes.
            pending.clear();
        }
    }
    out
}

fn fn_name(line: &str) -> Option<&str> {
    let rest = line
        .strip_prefix("pub fn ")
        .or_else(|| line.strip_prefix("fn "))?;
    let end = rest.find(|c: char| !(c.is_alphanumeric() || c == '_'))?;
    Some(&rest[..end])
}

/// Scans every `.rs` file under `root/crates`, skipping build output.
pub fn collect_annotations(root: &Path) -> std::io::Result<Annotations> {
    let mut out = Annotations::new();
    let crates = root.join("crates");
    for entry in WalkDir::new(&crates).sort_by_file_name() {
        let entry = entry.map_err(std::io::Error::other)?;
        let p = entry.path();
        if p.components().any(|c| c.as_os_str() == "target") || p.extension().is_none_or(|e| e != "rs") {
            continue;
        }
        let text = std::fs::read_to_string(p)?;
        let rel = p.strip_prefix(root).unwrap_or(p).to_string_lossy().replace('\\', "/");
        for (id, tests) in parse_annotations(&rel, &text) {
            out.entry(id).or_default().extend(tests);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Tests exist; no verification results were supplied.
    Covered,
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub claim: String,
    pub statement: String,
    pub command: String,
    pub tests: Vec<String>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceMatrix {
    pub entries: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverageError {
    #[error("claims without a verifying test: {0:?}")]
    Uncovered(Vec<String>),
    #[error("annotations naming unknown claims: {0:?}")]
    Unknown(Vec<String>),
}

/// Builds the matrix. `results` maps a check name to its overall verdict.
pub fn generate_trace_matrix(
    claims: &[Claim],
    annotations: &Annotations,
    results: Option<&BTreeMap<String, bool>>,
) -> Result<TraceMatrix, CoverageError> {
    let known: BTreeSet<&str> = claims.iter().map(|c| c.id).collect();
    let unknown: Vec<String> = annotations
        .keys()
        .filter(|k| !known.contains(k.as_str()))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(CoverageError::Unknown(unknown));
    }
    let uncovered: Vec<String> = claims
        .iter()
        .filter(|c| annotations.get(c.id).is_none_or(|t| t.is_empty()))
        .map(|c| c.id.to_string())
        .collect();
    if !uncovered.is_empty() {
        return Err(CoverageError::Uncovered(uncovered));
    }
    let entries = claims
        .iter()
        .map(|c| {
            let status = match (results, c.check) {
                (Some(r), Some(check)) => match r.get(check) {
                    Some(true) => Status::Pass,
                    Some(false) => Status::Fail,
                    None => Status::Covered,
                },
                _ => Status::Covered,
            };
            TraceEntry {
                claim: c.id.to_string(),
                statement: c.statement.to_string(),
                command: c.command.to_string(),
                tests: annotations[c.id].iter().map(|t| t.to_string()).collect(),
                status,
            }
        })
        .collect();
    Ok(TraceMatrix { entries })
}

impl TraceMatrix {
    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| claim | statement | command | tests | status |\n|---|---|---|---|---|\n");
        for e in &self.entries {
            let tests = e
                .tests
                .iter()
                .map(|t| format!("`{t}`"))
                .collect::<Vec<_>>()
                .join("<br>");
            let status = serde_json::to_value(e.status).expect("plain enum");
            let _ = writeln!(
                s,
                "| {} | {} | `{}` | {} | {} |",
                e.claim,
                e.statement.replace('|', "\\|"),
                e.command.replace('|', "\\|"),
                tests,
                status.as_str().unwrap_or_default()
            );
        }
        s
    }
}
