//! `incidence`: command-line front end for the incidence algebra engine.
//!
//! Exit status: 0 on success or a verified property, 1 when a verification
//! fails, 2 on usage or parse errors.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use incidence_core::expr::{self, Element};
use incidence_core::incidence::basis_pairs;
use incidence_core::props::{run_properties, PropsConfig};
use incidence_core::stories::verify_differential_ideal;
use incidence_core::{betti, corpus, Complex, Execution};

#[derive(Parser)]
#[command(name = "incidence", version, about = "Exact incidence algebras of simplicial complexes")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Use worker threads for the exhaustive checks.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a complex file and summarize it.
    Validate { complex: PathBuf },
    /// List the incidence basis pairs of one degree.
    Basis {
        complex: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Apply d to an incidence element or the envelope differential to a story element.
    Diff {
        complex: PathBuf,
        #[arg(long = "expr", allow_hyphen_values = true)]
        expr: String,
    },
    /// Project a story element onto the incidence algebra.
    Sigma {
        complex: PathBuf,
        #[arg(long = "expr", allow_hyphen_values = true)]
        expr: String,
    },
    /// Exit 0 if the story element lies in the ideal, 1 otherwise.
    IdealCheck {
        complex: PathBuf,
        #[arg(long = "expr", allow_hyphen_values = true)]
        expr: String,
    },
    /// Check that the ideal is a differential two-sided ideal up to a degree.
    IdealVerify {
        complex: PathBuf,
        #[arg(long)]
        max_degree: usize,
    },
    /// Betti numbers over the rationals.
    Betti { complex: PathBuf },
    /// Check that a vertex map induces a differentiable mapping.
    MapCheck {
        source: PathBuf,
        target: PathBuf,
        map: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Run the full property suite on each complex.
    Props {
        complexes: Vec<PathBuf>,
        /// Also run on the built-in corpus with this many random complexes.
        #[arg(long)]
        corpus: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 500)]
        random_pairs: usize,
    },
}

/// Failure of a command: `Usage` maps to exit 2, `Failed` to exit 1.
enum Failure {
    Usage(String),
    Failed,
}

type Outcome = Result<(), Failure>;

fn usage(context: impl Display, e: impl Display) -> Failure {
    Failure::Usage(format!("{context}: {e}"))
}

fn load_complex(path: &Path) -> Result<Arc<Complex>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(path.display(), e))?;
    expr::parse_complex(&text).map(Arc::new).map_err(|e| usage(path.display(), e))
}

fn parse(text: &str, c: &Arc<Complex>) -> Result<Element, Failure> {
    expr::parse_element(text, c).map_err(|e| usage("--expr", e))
}

fn print_element(cli: &Cli, x: &Element) {
    if cli.json {
        println!("{}", expr::element_to_json(x));
    } else {
        println!("{x}");
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: &Cli) -> Outcome {
    let exec = if cli.parallel { Execution::Parallel } else { Execution::Sequential };
    match &cli.command {
        Command::Validate { complex } => {
            let c = load_complex(complex)?;
            let f_vector: Vec<usize> = (0..=c.dim()).map(|k| c.skeleton(k).len()).collect();
            if cli.json {
                let facets: Vec<Vec<String>> = c.facets().into_iter().map(|id| c.labels(c.simplex(id))).collect();
                print_json(&json!({
                    "vertices": c.vertex_order(),
                    "simplices": c.len(),
                    "dim": c.dim(),
                    "f_vector": f_vector,
                    "facets": facets,
                }));
            } else {
                println!("ok: {} vertices, {} simplices, dimension {}", c.vertex_count(), c.len(), c.dim());
                println!("f-vector: {}", join(&f_vector, " "));
            }
        }
        Command::Basis { complex, degree } => {
            let c = load_complex(complex)?;
            let pairs = basis_pairs(&c, *degree);
            if cli.json {
                let records: Vec<_> = pairs
                    .iter()
                    .map(|p| json!({ "p": c.labels(c.simplex(p.lower())), "q": c.labels(c.simplex(p.upper())) }))
                    .collect();
                print_json(&records);
            } else {
                for p in &pairs {
                    println!("{}", expr::format_pair(&c, p));
                }
            }
        }
        Command::Diff { complex, expr } => {
            let c = load_complex(complex)?;
            let out = match parse(expr, &c)? {
                Element::Incidence(x) => Element::Incidence(x.differential()),
                Element::Story(x) => Element::Story(x.kahler_d().map_err(|e| usage("--expr", e))?),
            };
            print_element(cli, &out);
        }
        Command::Sigma { complex, expr } => {
            let c = load_complex(complex)?;
            let x = expr::parse_story_element(expr, &c).map_err(|e| usage("--expr", e))?;
            print_element(cli, &Element::Incidence(x.sigma()));
        }
        Command::IdealCheck { complex, expr } => {
            let c = load_complex(complex)?;
            let x = expr::parse_story_element(expr, &c).map_err(|e| usage("--expr", e))?;
            let image = x.sigma();
            let member = image.is_zero();
            if cli.json {
                print_json(&json!({ "in_ideal": member, "sigma": expr::incidence_records(&image) }));
            } else if member {
                println!("in ideal");
            } else {
                println!("not in ideal: sigma = {image}");
            }
            if !member {
                return Err(Failure::Failed);
            }
        }
        Command::IdealVerify { complex, max_degree } => {
            let c = load_complex(complex)?;
            let report = verify_differential_ideal(&c, *max_degree, cli.seed, exec);
            if cli.json {
                print_json(&report);
            } else {
                println!(
                    "checked {} generators and {} products up to degree {}",
                    report.generators, report.products, report.max_degree
                );
                for v in &report.violations {
                    println!("violation ({:?}, degree {}): {}", v.kind, v.degree, v.generator);
                }
                println!("{}", if report.passed() { "verified" } else { "FAILED" });
            }
            if !report.passed() {
                return Err(Failure::Failed);
            }
        }
        Command::Betti { complex } => {
            let c = load_complex(complex)?;
            let b = betti(&c);
            if cli.json {
                println!("[{}]", join(&b, ", "));
            } else {
                println!("{}", join(&b, " "));
            }
        }
        Command::MapCheck { source, target, map, max_degree } => {
            let src = load_complex(source)?;
            let dst = load_complex(target)?;
            let text = std::fs::read_to_string(map).map_err(|e| usage(map.display(), e))?;
            let m = expr::parse_map(&text, &src, &dst).map_err(|e| usage(map.display(), e))?;
            let report = m.check_differentiable(*max_degree, exec);
            if cli.json {
                print_json(&report);
            } else {
                let show = |x: Option<bool>| match x {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "n/a",
                };
                println!("simplicial: {}", if report.simplicial { "yes" } else { "no" });
                println!("multiplicative: {}", show(report.multiplicative));
                println!("commutes with d: {}", show(report.commutes));
                println!("ideal preserved: {}", if report.ideal_preserved { "yes" } else { "no" });
                for w in &report.witnesses {
                    println!("  {w}");
                }
                println!("{}", if report.passed() { "differentiable" } else { "not differentiable" });
            }
            if !report.passed() {
                return Err(Failure::Failed);
            }
        }
        Command::Props { complexes, corpus: random, max_degree, random_pairs } => {
            let mut named = Vec::new();
            for path in complexes {
                named.push((path.display().to_string(), load_complex(path)?));
            }
            if let Some(n) = random {
                named.extend(corpus::complexes(*n, cli.seed));
            }
            if named.is_empty() {
                return Err(Failure::Usage("props: no complexes given".into()));
            }
            let cfg = PropsConfig {
                seed: cli.seed,
                max_degree: *max_degree,
                random_pairs: *random_pairs,
                exec: Execution::Parallel,
                ..Default::default()
            };
            let outcomes = run_properties(&named, &cfg);
            let passed = outcomes.iter().all(|o| o.passed);
            if cli.json {
                print_json(&outcomes);
            } else {
                for o in &outcomes {
                    println!("{} {} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.complex, o.property, o.detail);
                }
                let failed = outcomes.iter().filter(|o| !o.passed).count();
                println!("{} properties, {failed} failed", outcomes.len());
            }
            if !passed {
                return Err(Failure::Failed);
            }
        }
    }
    Ok(())
}

fn join(xs: &[usize], sep: &str) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
