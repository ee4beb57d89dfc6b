//! boundspec: construct matrix spaces over GF(2^k), check bounded-spectrum
//! predicates, run the structural procedures and lemma harnesses, and emit
//! deterministic JSON reports.
//!
//! Exit codes: 0 all checks hold, 1 a check failed, 2 usage or config error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use boundspec::acceptance::{run_acceptance, AcceptanceConfig, DETERMINISM_WORKERS, MIN_SAMPLES, MIN_TRIALS};
use boundspec::constructions::build;
use boundspec::error::Error;
use boundspec::gf::FieldSpec;
use boundspec::harness::{run_lemma, LemmaConfig, LEMMAS};
use boundspec::json::{parse_matrix, MatrixJson, SubspaceJson};
use boundspec::par;
use boundspec::report::{Report, RunConfig, Runtime};
use boundspec::spectra::{check_space, CheckConfig, SpecPredicate, DEFAULT_BUDGET};
use boundspec::structure::choice::{choice_audit, choice_solve};
use boundspec::structure::{adapted_scan, detect_hurdle, find_intransitivity_veil, transitive_rank, HurdleSearch, VeilSearch};
use boundspec::subspace::MatSubspace;
use boundspec::upoly::Poly;

#[derive(Parser)]
#[command(name = "boundspec", version, about = "Bounded-spectrum matrix spaces over GF(2^k)")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// gf2, gf4, gf8, gf16 or gf2^k
    #[arg(long, global = true, default_value = "gf4")]
    field: String,
    /// Reduction polynomial as an integer bit pattern (default: least irreducible)
    #[arg(long, global = true)]
    modulus: Option<u32>,
    /// Largest number of objects an exhaustive pass may visit
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Samples drawn when a space is over budget
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0: one per core)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// Construction expression, e.g. `sl2-join-nt`, `joint(sl(2),sl(2))`, `b2m(2)`
    #[arg(long, conflicts_with = "space")]
    construction: Option<String>,
    /// Size for constructions given without arguments
    #[arg(long)]
    n: Option<usize>,
    /// Subspace or single matrix as JSON text or a path to a JSON file
    #[arg(long)]
    space: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a space and check a predicate on every (or sampled) element
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Predicate such as `1-spec`, `2bar-spec`, `bar*-spec` (bound from --k)
        #[arg(long, default_value = "1-spec")]
        pred: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Classify every projective point as adapted, weakly adapted or neither
    ScanAdapted {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Search for a hurdle certificate
    DetectHurdle {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Transitive rank and intransitivity veil
    Trk {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Solve for a block giving a prescribed characteristic polynomial,
    /// or audit the solver over all regular Hessenberg matrices
    Choice {
        /// Matrix as JSON text or a path
        #[arg(long, required_unless_present = "audit")]
        matrix: Option<String>,
        /// Target polynomial codes, constant term first, comma separated
        #[arg(long, required_unless_present = "audit", value_delimiter = ',')]
        target: Vec<u32>,
        /// Size of the trailing block to choose
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long)]
        audit: bool,
        /// Matrix size for the audit
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Run a seeded lemma harness
    Lemma {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(LEMMAS))]
        name: String,
        #[arg(long, default_value_t = MIN_TRIALS)]
        trials: u64,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run the acceptance suite at worker counts 1, 4 and 8
    Acceptance {
        #[arg(long, default_value_t = MIN_TRIALS)]
        trials: u64,
    },
}

struct Outcome {
    passed: bool,
    result: Value,
    config: RunConfig,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read_json_arg(arg: &str) -> Result<String, Error> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))
    }
}

fn load_space(f: &FieldSpec, args: &SpaceArgs) -> Result<(String, MatSubspace, Option<usize>), Error> {
    match (&args.construction, &args.space) {
        (Some(expr), _) => {
            let named = build(expr, f, args.n)?;
            Ok((named.name, named.space, Some(named.expected_dim)))
        }
        (None, Some(arg)) => {
            let text = read_json_arg(arg)?;
            if let Ok(js) = serde_json::from_str::<SubspaceJson>(&text) {
                return Ok(("json".into(), js.to_subspace(f)?, None));
            }
            let m = parse_matrix(&text, f)?;
            let s = MatSubspace::span(f, m.rows(), m.cols(), &[m])?;
            Ok(("json".into(), s, None))
        }
        (None, None) => Err(Error::Parse("pass --construction or --space".into())),
    }
}

fn predicate(text: &str, k: Option<usize>) -> Result<SpecPredicate, Error> {
    let p = SpecPredicate::parse_with_default(text, k)?;
    match k {
        Some(k) if k != p.k => Err(Error::Parse(format!("--k {k} contradicts predicate {text}"))),
        _ => Ok(p),
    }
}

fn run(cli: &Cli, f: &FieldSpec) -> Result<(String, Outcome), Error> {
    let c = &cli.common;
    let check = CheckConfig { budget: c.budget.unwrap_or(DEFAULT_BUDGET), samples: c.samples.unwrap_or(MIN_SAMPLES), seed: c.seed };
    let mut config = RunConfig::new(f, check.budget, check.samples, c.seed);
    let with_space = |config: &mut RunConfig, args: &SpaceArgs| -> Result<(String, MatSubspace, Option<usize>), Error> {
        let loaded = load_space(f, args)?;
        config.construction = Some(loaded.0.clone());
        config.n = Some(loaded.1.rows());
        Ok(loaded)
    };
    let (name, passed, result) = match &cli.command {
        Command::Verify { space, pred, k } => {
            let pred = predicate(pred, *k)?;
            config.predicate = Some(pred.to_string());
            let (id, s, expected) = with_space(&mut config, space)?;
            let v = check_space(&s, &pred, &check, &id)?;
            let dim_ok = expected.is_none_or(|d| d == s.dim());
            let result = json!({ "dim": s.dim(), "expected_dim": expected, "verdict": v });
            ("verify", v.holds() && dim_ok, result)
        }
        Command::ScanAdapted { space } => {
            let (id, s, _) = with_space(&mut config, space)?;
            ("scan-adapted", true, to_value(&adapted_scan(&s, &id)?))
        }
        Command::DetectHurdle { space } => {
            let (_, s, _) = with_space(&mut config, space)?;
            let h = detect_hurdle(&s, check.budget)?;
            ("detect-hurdle", !matches!(h, HurdleSearch::Budget { .. }), to_value(&h))
        }
        Command::Trk { space } => {
            let (_, s, _) = with_space(&mut config, space)?;
            let t = transitive_rank(&s)?;
            let veil = find_intransitivity_veil(&s, check.budget)?;
            let result = json!({ "transitive_rank": t, "intransitive": t.trk < t.target_dim, "veil": veil });
            ("trk", !matches!(veil, VeilSearch::Budget { .. }), result)
        }
        Command::Choice { matrix, target, p, audit, n } => {
            if *audit {
                config.n = Some(*n);
                let a = choice_audit(f, *n, &check)?;
                ("choice", a.unsolved == 0 && a.errors == 0, to_value(&a))
            } else {
                let m = parse_matrix(&read_json_arg(matrix.as_deref().expect("required"))?, f)?;
                config.n = Some(m.rows());
                let r = Poly::from_codes(f, target)?;
                let out = choice_solve(&m, &r, *p, check.budget)?;
                let completed = out.block().map(|b| MatrixJson::from(&boundspec::structure::choice::with_block(&m, b, *p)));
                let result = json!({ "target": r.to_string(), "p": p, "outcome": out, "completed": completed });
                ("choice", out.block().is_some(), result)
            }
        }
        Command::Lemma { name, trials, n } => {
            config.n = *n;
            config.budget = c.budget.unwrap_or(1 << 18);
            config.samples = c.samples.unwrap_or(20_000);
            let lc = LemmaConfig {
                n: *n,
                check: CheckConfig { budget: config.budget, samples: config.samples, seed: c.seed },
                ..LemmaConfig::new(f.clone(), *trials, c.seed)
            };
            let r = run_lemma(name, &lc)?;
            ("lemma", r.passed(), to_value(&r))
        }
        Command::Acceptance { trials } => {
            let cfg = AcceptanceConfig { seed: c.seed, budget: check.budget, samples: check.samples, trials: *trials };
            let r = run_acceptance(f, &cfg, &DETERMINISM_WORKERS);
            ("acceptance", r.all_passed(), to_value(&r))
        }
    };
    Ok((name.to_string(), Outcome { passed, result, config }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.common.clone();
    let f = match FieldSpec::parse(&c.field, c.modulus) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let (command, out) = match par::with_workers(c.workers, || run(&cli, &f)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let runtime = Runtime { workers: c.workers, elapsed_ms: start.elapsed().as_millis() as u64 };
    let report = Report::new(&command, out.config, out.passed, out.result, runtime);
    let text = report.to_json();
    match &c.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
            eprintln!("{command}: {}", if report.passed { "holds" } else { "fails" });
        }
        None => println!("{text}"),
    }
    ExitCode::from(if report.passed { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use boundspec::matrix::Matrix;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn predicate_bound_from_k() {
        assert_eq!(predicate("bar*-spec", Some(1)).unwrap(), SpecPredicate::bar_star(1));
        assert_eq!(predicate("1bar*-spec", Some(1)).unwrap(), SpecPredicate::bar_star(1));
        assert!(predicate("2-spec", Some(1)).is_err());
        assert!(predicate("bar-spec", None).is_err());
    }

    #[test]
    fn matrix_argument_spans_a_line() {
        let f = FieldSpec::gf4();
        let args = SpaceArgs { construction: None, n: None, space: Some(r#"{"rows":2,"cols":2,"entries":[1,0,0,2]}"#.into()) };
        let (_, s, _) = load_space(&f, &args).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&Matrix::from_rows(&f, &[vec![1, 0], vec![0, 2]]).unwrap()));
    }
}
