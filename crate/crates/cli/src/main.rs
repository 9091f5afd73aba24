//! `affine-verma`: batch front end for the verification suite.
//!
//! Exit codes: 0 pass, 1 mathematical failure, 2 usage error.

mod checks;
mod output;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use affine_verma::triality::build_automorphism;
use affine_verma::trace::{collect_annotations, generate_trace_matrix, CLAIMS};
use affine_verma::{build_algebra, LieType};
use clap::{Parser, Subcommand, ValueEnum};

use checks::{CheckKind, RunConfig};

#[derive(Parser)]
#[command(name = "affine-verma", version, about = "Exact verification of singular vectors and conformal embeddings for affine B_l and D_l")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TypeArg {
    #[value(name = "B")]
    B,
    #[value(name = "D")]
    D,
}

impl From<TypeArg> for LieType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::B => LieType::B,
            TypeArg::D => LieType::D,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceFormat {
    Markdown,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the basis, roots, bracket table and invariant form.
    DumpAlgebra {
        #[arg(long = "type", value_enum, ignore_case = true)]
        ty: TypeArg,
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: DumpFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a D_4 diagram automorphism as its full basis map.
    DumpAutomorphism {
        /// Images of the simple-root indices 1..4, e.g. `3,2,4,1` for π'.
        #[arg(long, value_delimiter = ',', required = true)]
        sigma: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one verification family, or all of them.
    Verify {
        #[arg(value_enum)]
        check: CheckKind,
        #[arg(long, conflicts_with = "l_range")]
        l: Option<usize>,
        /// Inclusive range `a..b`.
        #[arg(long, value_parser = parse_range)]
        l_range: Option<RangeInclusive<usize>>,
        /// Restrict `singular` and `admissible` to one type.
        #[arg(long = "type", value_enum, ignore_case = true)]
        ty: Option<TypeArg>,
        /// Largest mode scanned before the exact tail argument takes over.
        #[arg(long, env = "AFFINE_VERMA_MODE_BOUND", default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..))]
        mode_bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to the number of available cores.
        #[arg(long, value_parser = clap::value_parser!(usize))]
        jobs: Option<usize>,
        /// Also check every positive e_α(0) and every x(1).
        #[arg(long)]
        strict: bool,
        /// Aligned text table instead of JSON.
        #[arg(long)]
        human: bool,
        /// Test fixture: doubles one family of v_D before checking it.
        #[arg(long, hide = true)]
        corrupt_vd: bool,
    },
    /// Build the claim-to-test matrix; fails if a claim has no test.
    Trace {
        /// Repository root to scan for test annotations.
        #[arg(long, default_value = ".")]
        root: PathBuf,
        /// JSON output of `verify all`, used to fill in pass/fail.
        #[arg(long)]
        results: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: TraceFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

const USAGE: u8 = 2;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    match cli.command {
        Command::DumpAlgebra { ty, l, format, out } => {
            let g = match build_algebra(ty.into(), l) {
                Ok(g) => g,
                Err(e) => return usage(e),
            };
            let text = match format {
                DumpFormat::Json => output::json(&g.dump()),
                DumpFormat::Text => output::algebra_text(&g),
            };
            output::emit(&text, out.as_deref())
        }
        Command::DumpAutomorphism { sigma, out } => {
            let g = build_algebra(LieType::D, 4).expect("D_4 builds");
            match build_automorphism(&g, &sigma) {
                Ok(pi) => output::emit(&output::json(&pi.dump(&g)), out.as_deref()),
                Err(e) => usage(e),
            }
        }
        Command::Verify {
            check,
            l,
            l_range,
            ty,
            mode_bound,
            out,
            jobs,
            strict,
            human,
            corrupt_vd,
        } => {
            let ranks = match (l, l_range) {
                (Some(l), _) => l..=l,
                (None, Some(r)) => r,
                (None, None) if check == CheckKind::All => 4..=6,
                (None, None) => 4..=4,
            };
            if *ranks.start() < 4 {
                return usage(format!("l must be at least 4, got {}", ranks.start()));
            }
            if check == CheckKind::Triality && ranks != (4..=4) {
                return usage("triality is defined on D_4 only (use --l 4)");
            }
            if check == CheckKind::Appendix && ty == Some(TypeArg::B) {
                return usage("appendix relations live in type D");
            }
            if jobs == Some(0) {
                return usage("--jobs must be positive");
            }
            if let Some(n) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("global pool is configured once");
            }
            let config = RunConfig {
                check,
                ranks,
                ty: ty.map(Into::into),
                mode_bound,
                strict,
                corrupt_vd,
            };
            let summary = checks::run(&config);
            let text = if human {
                output::summary_table(&summary)
            } else {
                output::json(&summary)
            };
            let code = output::emit(&text, out.as_deref());
            if code != ExitCode::SUCCESS {
                return code;
            }
            if summary.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Trace {
            root,
            results,
            format,
            out,
        } => {
            let annotations = match collect_annotations(&root) {
                Ok(a) => a,
                Err(e) => return usage(format!("cannot scan {}: {e}", root.display())),
            };
            let verdicts = match results.map(|p| checks::load_verdicts(&p)).transpose() {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            match generate_trace_matrix(CLAIMS, &annotations, verdicts.as_ref()) {
                Ok(m) => {
                    let text = match format {
                        TraceFormat::Markdown => m.to_markdown(),
                        TraceFormat::Json => output::json(&m),
                    };
                    output::emit(&text, out.as_deref())
                }
                Err(e) => {
                    eprintln!("coverage: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
