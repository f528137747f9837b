//! Command-line interface: parse arrangement documents, dispatch the
//! computations, emit deterministic JSON reports.
//!
//! Exit codes: 0 success, 2 precondition/input violations (with a
//! machine-readable diagnostic on stdout), 1 internal errors.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use discrim_core::completion::{
    collinearity_flat, conjecture_report, pappus_lines, pinned_pappus_p, pinned_pappus_pc,
    sigma_completion, union_certify, CompletionResult, Involution, PappusParams,
};
use discrim_core::discriminantal::build;
use discrim_core::lattice::{flats_up_to_rank, is_simple, very_generic_report};
use discrim_core::orchard::orchard_max;
use discrim_core::planar::{
    collinearity_conditions, incidence_stats, projective_lines, quadrilateral_translates,
};
use discrim_core::{Arrangement, Field};

use crate::formats::{
    to_json_pretty, validate_completion_against, ArrangementDoc, CompletionDoc, FormatError,
};
use crate::render::render_svg;
use crate::report::*;

#[derive(Parser)]
#[command(
    name = "discrim",
    version,
    about = "Exact discriminantal-arrangement toolkit"
)]
pub struct Cli {
    /// Seed for every sampling step (translate realization).
    #[arg(long, global = true, default_value_t = discrim_core::DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check the genericity condition and report a minimal violation.
    CheckGeneric { input: PathBuf },
    /// Construct the discriminantal arrangement B(n, k, A).
    Build { input: PathBuf },
    /// Enumerate intersection-lattice flats up to a rank.
    Lattice {
        input: PathBuf,
        #[arg(long)]
        max_rank: Option<usize>,
    },
    /// Very-genericity verdict with witness flats.
    VeryGeneric {
        input: PathBuf,
        #[arg(long)]
        max_rank: Option<usize>,
    },
    /// Quadrilateral-set flats of a six-line arrangement with realized
    /// translates.
    Qsets { input: PathBuf },
    /// Maximum triple-point count over translates, with witnesses.
    Orchard {
        input: PathBuf,
        /// Refuse inputs with more lines than this (hard cap 9).
        #[arg(long = "max-n-check")]
        max_n_check: Option<usize>,
    },
    /// Emit a committed Pappus trace (p: three collinearities, pc: four).
    Pappus {
        #[arg(long, value_parser = ["p", "pc"])]
        make: String,
    },
    /// Compute the sigma-completion of a trace.
    SigmaComplete {
        input: PathBuf,
        #[arg(long)]
        sigma: String,
    },
    /// Census and verdicts for the union of a trace with its completion.
    CertifyUnion {
        input: PathBuf,
        #[arg(long)]
        sigma: Option<String>,
        /// Use a precomputed completion document instead of recomputing.
        #[arg(long)]
        completion: Option<PathBuf>,
    },
    /// Clause-by-clause extremality report on one instance.
    Conjecture {
        input: PathBuf,
        #[arg(long)]
        sigma: String,
    },
    /// Incidence census (t-vector) of a planar arrangement.
    Stats { input: PathBuf },
    /// Draw an affine chart of a planar arrangement.
    Render {
        input: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// Label of the line to place at infinity.
        #[arg(long)]
        chart: Option<String>,
    },
}

pub struct Failure {
    pub code: i32,
    pub diagnostic: serde_json::Value,
}

impl Failure {
    fn user(kind: &str, message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            diagnostic: json!({ "error": { "kind": kind, "message": message.into() } }),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            diagnostic: json!({ "error": { "kind": "internal", "message": message.into() } }),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Failure {
        let mut obj = json!({ "kind": "parse", "message": e.message });
        if let (Some(l), Some(c)) = (e.line, e.column) {
            obj["line"] = json!(l);
            obj["column"] = json!(c);
        }
        Failure {
            code: 2,
            diagnostic: json!({ "error": obj }),
        }
    }
}

struct Input {
    arr: Arrangement,
    field: Field,
    hash: String,
}

fn load(path: &PathBuf) -> Result<Input, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::user("io", format!("{}: {e}", path.display())))?;
    let doc = ArrangementDoc::parse(&text)?;
    let (arr, field) = doc.to_arrangement(Some(&text))?;
    let hash = doc.canonical_hash()?;
    Ok(Input { arr, field, hash })
}

fn require_generic(arr: &Arrangement) -> Result<(), Failure> {
    arr.check_generic().map_err(|e| Failure {
        code: 2,
        diagnostic: json!({
            "error": {
                "kind": "non-generic",
                "message": e.to_string(),
                "witness": e.witness.elements().map(|i| i + 1).collect::<Vec<_>>(),
            }
        }),
    })
}

fn parse_sigma(text: &str) -> Result<Involution, Failure> {
    Involution::parse(text).map_err(|e| Failure::user("bad-sigma", e.to_string()))
}

fn header(command: &str, hash: Option<String>, seed: u64) -> ReportHeader {
    ReportHeader {
        command: command.to_string(),
        input_hash: hash,
        seed,
    }
}

fn emit<T: Serialize>(out: &Option<PathBuf>, report: &T) -> Result<String, Failure> {
    let text = to_json_pretty(report);
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::internal(e.to_string()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Run a command; `Ok` carries the stdout payload.
pub fn run(cli: &Cli) -> Result<String, Failure> {
    let seed = cli.seed;
    match &cli.command {
        Command::CheckGeneric { input } => {
            let inp = load(input)?;
            require_generic(&inp.arr)?;
            let report = GenericReport {
                header: header("check-generic", Some(inp.hash), seed),
                generic: true,
                witness: None,
            };
            emit(&cli.out, &report)
        }
        Command::Build { input } => {
            let inp = load(input)?;
            require_generic(&inp.arr)?;
            let disc = build(&inp.arr).map_err(|e| Failure::user("non-generic", e.to_string()))?;
            let report = BuildReport::of(header("build", Some(inp.hash), seed), &disc);
            emit(&cli.out, &report)
        }
        Command::Lattice { input, max_rank } => {
            let inp = load(input)?;
            require_generic(&inp.arr)?;
            let disc = build(&inp.arr).map_err(|e| Failure::user("non-generic", e.to_string()))?;
            let essential = disc.n - disc.k;
            let r_max = max_rank.unwrap_or(essential).min(essential);
            let flats = flats_up_to_rank(&disc, r_max);
            let ranks = flats
                .iter()
                .enumerate()
                .map(|(i, group)| RankGroup {
                    rank: i + 1,
                    count: group.len(),
                    flats: group
                        .iter()
                        .map(|f| {
                            let flags = (disc.k == 2).then(|| {
                                let s = is_simple(&disc, f);
                                (s, s && f.multiplicity() > f.rank)
                            });
                            FlatDoc::of(f, disc.k, flags)
                        })
                        .collect(),
                })
                .collect();
            let report = LatticeReport {
                header: header("lattice", Some(inp.hash), seed),
                n: disc.n,
                k: disc.k,
                max_rank: r_max,
                ranks,
            };
            emit(&cli.out, &report)
        }
        Command::VeryGeneric { input, max_rank } => {
            let inp = load(input)?;
            require_generic(&inp.arr)?;
            let disc = build(&inp.arr).map_err(|e| Failure::user("non-generic", e.to_string()))?;
            let essential = disc.n - disc.k;
            let r_max = max_rank.unwrap_or(essential.min(3)).min(essential);
            let rep = very_generic_report(&disc, r_max)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let report = VeryGenericDoc {
                header: header("very-generic", Some(inp.hash), seed),
                max_rank: r_max,
                very_generic_up_to_max_rank: rep.very_generic_up_to_rank,
                witnesses: rep
                    .witnesses
                    .iter()
                    .map(|f| FlatDoc::of(f, disc.k, Some((true, true))))
                    .collect(),
            };
            emit(&cli.out, &report)
        }
        Command::Qsets { input } => {
            let inp = load(input)?;
            require_generic(&inp.arr)?;
            if inp.arr.dim() != 2 || inp.arr.len() != 6 {
                return Err(Failure::user(
                    "precondition",
                    "quadrilateral sets need six lines in the plane",
                ));
            }
            let pairs = quadrilateral_translates(&inp.arr, seed)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let report = QsetsReport {
                header: header("qsets", Some(inp.hash), seed),
                count: pairs.len(),
                entries: pairs
                    .iter()
                    .map(|(flat, translate)| QsetEntry {
                        flat: FlatDoc::of(flat, 2, Some((true, true))),
                        translate: doc_of(translate, inp.field),
                    })
                    .collect(),
            };
            emit(&cli.out, &report)
        }
        Command::Orchard { input, max_n_check } => {
            let inp = load(input)?;
            require_generic(&inp.arr)?;
            let cap = max_n_check.unwrap_or(discrim_core::orchard::MAX_N);
            if inp.arr.len() > cap {
                return Err(Failure::user(
                    "precondition",
                    format!("arrangement has {} lines, cap is {cap}", inp.arr.len()),
                ));
            }
            if inp.arr.dim() != 2 {
                return Err(Failure::user("precondition", "orchard search needs lines"));
            }
            let rep = orchard_max(&inp.arr, seed)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let report = OrchardReportDoc {
                header: header("orchard", Some(inp.hash), seed),
                m_max: rep.m_max,
                rank: rep.rank,
                witnesses: rep
                    .witnesses
                    .iter()
                    .map(|(system, translate)| OrchardWitness {
                        triples: triples_doc(system),
                        translate: doc_of(translate, inp.field),
                    })
                    .collect(),
            };
            emit(&cli.out, &report)
        }
        Command::Pappus { make } => {
            let params = match make.as_str() {
                "p" => pinned_pappus_p(),
                _ => pinned_pappus_pc(),
            };
            let doc = pappus_trace_doc(&params)
                .map_err(|e| Failure::user("degenerate", e.to_string()))?;
            emit(&cli.out, &doc)
        }
        Command::SigmaComplete { input, sigma } => {
            let inp = load(input)?;
            let sigma = parse_sigma(sigma)?;
            let lines = projective_lines(&inp.arr)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let comp = sigma_completion(&lines, &sigma)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let mut doc =
                serde_json::to_value(CompletionDoc::of(&comp)).expect("serializable");
            doc["input_hash"] = json!(inp.hash);
            emit(&cli.out, &doc)
        }
        Command::CertifyUnion {
            input,
            sigma,
            completion,
        } => {
            let inp = load(input)?;
            let lines = projective_lines(&inp.arr)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let comp = load_completion(&inp, &lines, sigma.as_deref(), completion.as_ref())?;
            let cert = union_certify(&lines, &comp)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let report = CertifyReport::of(header("certify-union", Some(inp.hash), seed), &cert);
            emit(&cli.out, &report)
        }
        Command::Conjecture { input, sigma } => {
            let inp = load(input)?;
            let sigma = parse_sigma(sigma)?;
            let lines = projective_lines(&inp.arr)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let rep = conjecture_report(&lines, &sigma)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let report = ConjectureDoc::of(header("conjecture", Some(inp.hash), seed), &rep);
            emit(&cli.out, &report)
        }
        Command::Stats { input } => {
            let inp = load(input)?;
            let lines = projective_lines(&inp.arr)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let stats = incidence_stats(&lines)
                .map_err(|e| Failure::user("precondition", e.to_string()))?;
            let labels = arrangement_labels(&inp.arr);
            let (t, points) = stats_doc(&stats, &labels);
            let report = StatsReport {
                header: header("stats", Some(inp.hash), seed),
                s: stats.s,
                t,
                points,
            };
            emit(&cli.out, &report)
        }
        Command::Render { input, svg, chart } => {
            let inp = load(input)?;
            let image =
                render_svg(&inp.arr, chart.as_deref()).map_err(|e| Failure::user("render", e.0))?;
            fs::write(svg, image).map_err(|e| Failure::internal(e.to_string()))?;
            let report = json!({
                "command": "render",
                "input_hash": inp.hash,
                "seed": seed,
                "svg": svg.display().to_string(),
            });
            emit(&cli.out, &report)
        }
    }
}

fn load_completion(
    inp: &Input,
    lines: &[discrim_core::ProjectiveFlat],
    sigma: Option<&str>,
    completion: Option<&PathBuf>,
) -> Result<CompletionResult, Failure> {
    match (sigma, completion) {
        (_, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::user("io", format!("{}: {e}", path.display())))?;
            let doc = CompletionDoc::parse(&text)?;
            let comp = doc.to_completion(inp.field)?;
            validate_completion_against(&comp, lines)?;
            Ok(comp)
        }
        (Some(s), None) => {
            let sigma = parse_sigma(s)?;
            sigma_completion(lines, &sigma)
                .map_err(|e| Failure::user("precondition", e.to_string()))
        }
        (None, None) => Err(Failure::user(
            "precondition",
            "provide --sigma or --completion",
        )),
    }
}

/// The trace arrangement document of a Pappus family instance, with its
/// collinearity structure attached.
fn pappus_trace_doc(params: &PappusParams) -> Result<serde_json::Value, FormatError> {
    let lines = pappus_lines(params).map_err(|e| FormatError {
        message: e.to_string(),
        line: None,
        column: None,
    })?;
    let arr = discrim_core::completion::trace_arrangement(&lines);
    let doc = ArrangementDoc::from_arrangement(&arr, Field::Rational);
    let cols = collinearity_conditions(&lines).map_err(|e| FormatError {
        message: e.to_string(),
        line: None,
        column: None,
    })?;
    let col_docs: Vec<serde_json::Value> = cols
        .iter()
        .map(|c| {
            let flat = collinearity_flat(c).ok().map(|fam| {
                fam.iter()
                    .map(|s| s.elements().map(|e| e + 1).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            });
            json!({
                "axis": c.axis.coeffs().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "points": c.pairs().iter().map(|&(i, j)| vec![i + 1, j + 1]).collect::<Vec<_>>(),
                "b633_flat": flat,
            })
        })
        .collect();
    let mut value = serde_json::to_value(&doc).expect("serializable");
    value["collinearities"] = json!(col_docs);
    Ok(value)
}
