//! Command-line parsing and execution. Exit codes: 0 on success, agreement
//! or pass; 1 on a mathematical disagreement or failure; 2 on input errors.

use clap::{Parser, Subcommand};
use serde_json::json;
use stokeslab_core::costokes::{
    build_arc_subsheaf, circle_cohomology, extract_stokes_data, realize_presentation, CostokesError,
};
use stokeslab_core::decomp::{
    compare_decompositions, rebase_presentation, stokes_decomposition, vanishing_cycle_decomposition,
    Comparison, DecompError,
};
use stokeslab_core::exactplane::Direction;
use stokeslab_core::linalg::Subspace;
use stokeslab_core::presentation::Constr0Presentation;

use crate::format::{
    matrix_doc, parse_direction, parse_point_arg, point_doc, Body, Document, FormatError, PresentationDoc,
    Report, StokesDoc,
};
use crate::generate::{gen_random, GenError, GeneratorSpec};
use crate::suite::{run_suite, sample_directions, SuiteConfig};

pub const SEED_ENV: &str = "STOKESLAB_SEED";

#[derive(Parser, Debug)]
#[command(name = "stokeslab", version, about = "Exact Stokes data and vanishing cycles of rational presentations")]
pub struct Cli {
    /// Print only the verdict.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Read the input document from this file instead of standard input.
    #[arg(long, global = true)]
    pub input: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a presentation.
    Validate,
    /// Total monodromy around the base square.
    Monodromy,
    /// Cohomology of the circle sheaf at a point.
    Cohomology {
        /// The point as `re,im` with rational parts.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// Stokes data of a presentation at a direction.
    Laplace {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Presentation realizing Stokes data.
    InverseLaplace {
        /// Cut direction; defaults to the opposite of the data's direction.
        #[arg(long, allow_hyphen_values = true)]
        cut: Option<String>,
        /// Base direction; defaults to the data's direction.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// Stokes and vanishing cycle decompositions at a direction.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Compare the two decompositions at a direction.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Round trips through Stokes data at the given or sampled directions.
    Roundtrip {
        #[arg(long, allow_hyphen_values = true)]
        theta: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A seeded random presentation.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        maxdim: usize,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Run the full invariant suite.
    Selftest {
        #[arg(long, default_value_t = 500)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug)]
enum Failure {
    Input(String, String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let kind = match e {
            FormatError::Invalid(_) => "validation",
            _ => "parse",
        };
        Failure::Input(kind.into(), e.to_string())
    }
}

impl From<CostokesError> for Failure {
    fn from(e: CostokesError) -> Self {
        Failure::Input("computation".into(), e.to_string())
    }
}

impl From<DecompError> for Failure {
    fn from(e: DecompError) -> Self {
        Failure::Input("computation".into(), e.to_string())
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::Input("generator".into(), e.to_string())
    }
}

struct Done {
    code: i32,
    verdict: String,
    doc: Document,
}

fn report(r: Report, code: i32) -> Done {
    Done { code, verdict: r.verdict.clone(), doc: Document::new(Body::Report(r)) }
}

fn subspace_json(s: &Subspace) -> serde_json::Value {
    json!({ "dim": s.dim(), "basis": matrix_doc(&s.basis().transpose()) })
}

/// Parses `argv` (including the program name), reads the input through
/// `read_input` when the command needs one, and runs it. `seed_env` is the
/// value of the seed override variable, if set.
pub fn dispatch(
    argv: &[String],
    read_input: impl FnOnce(Option<&str>) -> std::io::Result<String>,
    seed_env: Option<&str>,
) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                return Outcome { code, stdout: e.to_string() };
            }
            let r = Report::new("parse_arguments", "error")
                .with("error", "usage")
                .with("message", e.to_string());
            return Outcome { code: 2, stdout: Document::new(Body::Report(r)).to_json() };
        }
    };
    let name = command_name(&cli.command);
    let result = run(&cli, read_input, seed_env);
    let done = match result {
        Ok(d) => d,
        Err(Failure::Input(kind, message)) => {
            report(Report::new(name, "error").with("error", kind).with("message", message), 2)
        }
    };
    let stdout = if cli.quiet { format!("{}\n", done.verdict) } else { done.doc.to_json() };
    Outcome { code: done.code, stdout }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Monodromy => "monodromy",
        Command::Cohomology { .. } => "cohomology",
        Command::Laplace { .. } => "laplace",
        Command::InverseLaplace { .. } => "inverse-laplace",
        Command::Decompose { .. } => "decompose",
        Command::Compare { .. } => "compare",
        Command::Roundtrip { .. } => "roundtrip",
        Command::Generate { .. } => "generate",
        Command::Selftest { .. } => "selftest",
    }
}

fn effective_seed(flag: u64, env: Option<&str>) -> Result<u64, Failure> {
    match env {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input("parse".into(), format!("{SEED_ENV}={s:?} is not a 64-bit seed"))),
        None => Ok(flag),
    }
}

fn run(
    cli: &Cli,
    read_input: impl FnOnce(Option<&str>) -> std::io::Result<String>,
    seed_env: Option<&str>,
) -> Result<Done, Failure> {
    let name = command_name(&cli.command);
    let needs_input = !matches!(cli.command, Command::Generate { .. } | Command::Selftest { .. });
    let doc = if needs_input {
        let text = read_input(cli.input.as_deref())
            .map_err(|e| Failure::Input("io".into(), e.to_string()))?;
        Some(Document::parse(&text)?)
    } else {
        None
    };
    let presentation = || -> Result<Constr0Presentation, Failure> {
        Ok(doc.as_ref().expect("input document").presentation()?)
    };
    match &cli.command {
        Command::Validate => {
            let p = presentation()?;
            Ok(report(Report::new(name, "ok").with("n", p.n()).with("dims", &p.dims), 0))
        }
        Command::Monodromy => {
            let p = presentation()?;
            let order: Vec<usize> = p.monodromy_order().iter().map(|k| k + 1).collect();
            Ok(report(
                Report::new(name, "ok")
                    .with("order", order)
                    .with("total_monodromy", matrix_doc(&p.total_monodromy())),
                0,
            ))
        }
        Command::Cohomology { xi } => {
            let p = presentation()?;
            let xi = parse_point_arg(xi)?;
            let a = build_arc_subsheaf(&p, &xi)?;
            let h = circle_cohomology(&a)?;
            let stalk = p.stalk(&xi).dim();
            let pass = h.h0_dim() == 0 && h.h1_dim() == stalk;
            let r = Report::new(name, if pass { "pass" } else { "fail" })
                .with("xi", point_doc(&xi))
                .with("jumps", a.jumps.iter().map(|d| d.to_string()).collect::<Vec<_>>())
                .with("arc_dims", a.arcs.iter().map(|s| s.dim()).collect::<Vec<_>>())
                .with("point_dims", a.points.iter().map(|s| s.dim()).collect::<Vec<_>>())
                .with("h0_dim", h.h0_dim())
                .with("h1_dim", h.h1_dim())
                .with("stalk_dim", stalk);
            Ok(report(r, if pass { 0 } else { 1 }))
        }
        Command::Laplace { theta } => {
            let p = presentation()?;
            let theta = parse_direction(theta)?;
            let d = extract_stokes_data(&p, &theta)?;
            Ok(Done { code: 0, verdict: "ok".into(), doc: Document::new(Body::StokesData(StokesDoc::from_stokes_data(&d))) })
        }
        Command::InverseLaplace { cut, base } => {
            let d = doc.as_ref().expect("input document").stokes_data()?;
            let base = base.as_deref().map(parse_direction).transpose()?.unwrap_or_else(|| d.theta.clone());
            let cut = cut.as_deref().map(parse_direction).transpose()?.unwrap_or_else(|| base.neg());
            let p = realize_presentation(&d, &cut, &base)?;
            Ok(Done {
                code: 0,
                verdict: "ok".into(),
                doc: Document::new(Body::Presentation(PresentationDoc::from_presentation(&p))),
            })
        }
        Command::Decompose { theta } => {
            let p = presentation()?;
            let theta = parse_direction(theta)?;
            let s = stokes_decomposition(&p, &theta)?;
            let v = vanishing_cycle_decomposition(&p, &theta)?;
            let r = Report::new(name, "ok")
                .with("theta", theta.to_string())
                .with("stokes", s.components.iter().map(subspace_json).collect::<Vec<_>>())
                .with("vanishing_cycle", v.components.iter().map(subspace_json).collect::<Vec<_>>());
            Ok(report(r, 0))
        }
        Command::Compare { theta } => {
            let p = presentation()?;
            let theta = parse_direction(theta)?;
            let c = compare_decompositions(&p, &theta)?;
            let (verdict, code, bad) = match c {
                Comparison::Agree => ("agree", 0, vec![]),
                Comparison::Disagree(b) => ("disagree", 1, b.iter().map(|i| i + 1).collect()),
            };
            Ok(report(Report::new(name, verdict).with("theta", theta.to_string()).with("differing", bad), code))
        }
        Command::Roundtrip { theta, seed } => {
            let p = presentation()?;
            let dirs: Vec<Direction> = if theta.is_empty() {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(effective_seed(*seed, seed_env)?);
                sample_directions(&p, &mut rng, 8)
            } else {
                theta.iter().map(|s| parse_direction(s)).collect::<Result<_, _>>()?
            };
            let mut results = Vec::new();
            let mut all = true;
            for th in &dirs {
                let d = extract_stokes_data(&p, th)?;
                let back = realize_presentation(&d, &th.neg(), th)?;
                let rebased = rebase_presentation(&p, th)?;
                let again = extract_stokes_data(&back, th)?;
                let ok = back == rebased && again == d;
                all &= ok;
                results.push(json!({
                    "theta": th.to_string(),
                    "realize_extract": back == rebased,
                    "extract_realize": again == d,
                }));
            }
            let r = Report::new(name, if all { "pass" } else { "fail" }).with("directions", results);
            Ok(report(r, if all { 0 } else { 1 }))
        }
        Command::Generate { seed, n, maxdim, bound } => {
            let spec = GeneratorSpec { seed: effective_seed(*seed, seed_env)?, n: *n, max_dim: *maxdim, bound: *bound };
            let p = gen_random(&spec)?;
            Ok(Done {
                code: 0,
                verdict: "ok".into(),
                doc: Document::new(Body::Presentation(PresentationDoc::from_presentation(&p))),
            })
        }
        Command::Selftest { instances, seed } => {
            let cfg = SuiteConfig { instances: *instances, seed: effective_seed(*seed, seed_env)?, ..SuiteConfig::default() };
            let results = run_suite(&cfg);
            let all = results.iter().all(|c| c.passed());
            let crit: Vec<serde_json::Value> = results
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "name": c.name,
                        "passed": c.passed(),
                        "checks": c.checks,
                        "failures": c.failures.iter().take(20).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let r = Report::new(name, if all { "pass" } else { "fail" })
                .with("instances", cfg.instances)
                .with("seed", cfg.seed)
                .with("criteria", crit);
            Ok(report(r, if all { 0 } else { 1 }))
        }
    }
}
