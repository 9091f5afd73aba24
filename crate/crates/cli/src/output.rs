use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use affine_verma::LieAlgebra;
use serde::Serialize;

use crate::checks::Summary;

/// Pretty JSON with sorted keys: going through `Value` reorders struct
/// fields because `serde_json::Map` is a `BTreeMap` here.
pub fn json<T: Serialize>(x: &T) -> String {
    let v = serde_json::to_value(x).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn emit(text: &str, out: Option<&Path>) -> ExitCode {
    match out {
        None => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                ExitCode::from(2)
            }
        },
    }
}

pub fn algebra_text(g: &LieAlgebra) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}  dim {}  h∨ {}", g.id(), g.dim(), g.dual_coxeter());
    for i in 0..g.dim() {
        let _ = writeln!(s, "{i:>4}  {}", g.label(i));
    }
    s
}

pub fn summary_table(summary: &Summary) -> String {
    let rows: Vec<[String; 4]> = summary
        .checks
        .iter()
        .map(|c| {
            [
                c.check.clone(),
                c.l.to_string(),
                if c.pass { "pass" } else { "FAIL" }.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    let header = ["check", "l", "verdict", "detail"].map(String::from);
    let mut width = [0; 4];
    for r in std::iter::once(&header).chain(&rows) {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut s = String::new();
    for r in std::iter::once(&header).chain(&rows) {
        let line: Vec<String> = r
            .iter()
            .zip(width)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    }
    let _ = writeln!(
        s,
        "{} of {} checks passed",
        summary.checks.iter().filter(|c| c.pass).count(),
        summary.checks.len()
    );
    s
}
