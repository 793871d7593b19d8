use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use moorecat_core::braiding::{
    braid2, braid_class, braid_map, braid_map_via_mu, naturality_witness, non_naturality_fixture,
};
use moorecat_core::gmaps::{compose, decompose_map, tensor_all};
use moorecat_core::lawcheck::{self, SUITES};
use moorecat_core::pspaces::{colimit, restrict};
use moorecat_core::random::Profile;
use moorecat_core::rational::parse_rational;
use moorecat_core::tensorcalc::{canonicalize, colimit_tensor_check, restrict_class};
use moorecat_core::{Element, Length, PLMap, PSpace, RawTriple, TensorClass};

/// Exact calculator for piecewise-linear reparametrizations and their
/// presheaves. Inputs are JSON files (`-` reads stdin); outputs are JSON.
#[derive(Parser)]
#[command(name = "moorecat", version)]
struct Cli {
    /// Print compact single-line JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a map (or its inverse) at a point.
    Eval {
        #[arg(long)]
        map: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Compose maps in diagrammatic order: FIRST, then SECOND.
    Compose { first: String, second: String },
    /// Concatenate two or more maps.
    Tensor {
        #[arg(required = true, num_args = 2..)]
        maps: Vec<String>,
    },
    /// Split a map along a decomposition `c1,c2` of its codomain.
    Decompose {
        #[arg(long)]
        map: String,
        #[arg(long)]
        split: String,
    },
    /// Swap the halves of a map along `--split l1,l2` of its codomain,
    /// or at t = 1 when the domain is [0,2] and no split is given.
    Braid {
        #[arg(long)]
        map: String,
        #[arg(long)]
        split: Option<String>,
        /// Compute through the scaled two-point braid instead.
        #[arg(long)]
        via_mu: bool,
    },
    /// Braid a binary tensor class.
    BraidClass {
        #[arg(long)]
        class: String,
    },
    /// Normalize a representative `{"psi": map, "parts": [point, ...]}`.
    Canon {
        #[arg(long)]
        triple: String,
    },
    /// Restrict a class or a point along a map.
    Restrict {
        #[command(flatten)]
        target: RestrictTarget,
        #[arg(long)]
        along: String,
    },
    /// Colimit of a space, or the product comparison for a pair.
    Colim {
        #[arg(long)]
        space: String,
        /// Second factor: check colim(D⊗E) against colim D × colim E.
        #[arg(long)]
        with: Option<String>,
        /// JSON array of binary representatives to test compatibility on.
        #[arg(long, requires = "with")]
        samples: Option<String>,
    },
    /// Run law suites.
    Check(CheckArgs),
    /// Report a failure of naturality for the braid.
    Witness {
        /// First factor; the shipped fixture is used when omitted.
        #[arg(long, requires = "with")]
        space: Option<String>,
        #[arg(long, requires = "space")]
        with: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct RestrictTarget {
    #[arg(long)]
    class: Option<String>,
    #[arg(long)]
    element: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// `all`, or a comma-separated list of suite names.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, env = "MOORECAT_SEED", default_value_t = 0)]
    seed: u64,
    /// Random cases per check (default: per-suite).
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long, default_value_t = Profile::default().denominator_bound)]
    denominator_bound: u32,
    #[arg(long, default_value_t = Profile::default().max_breaks)]
    max_breaks: usize,
    #[arg(long, default_value_t = Profile::default().max_length)]
    max_length: u32,
}

/// Why a run did not succeed: bad input, or a law that failed.
enum Failure {
    Usage(anyhow::Error),
    Law,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<moorecat_core::Error> for Failure {
    fn from(e: moorecat_core::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn read_source(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load<T: DeserializeOwned>(path: &str) -> anyhow::Result<T> {
    let text = read_source(path)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {path}"))
}

fn lengths(list: &str) -> anyhow::Result<Vec<Length>> {
    list.split(',')
        .map(|s| {
            let q = parse_rational(s.trim())?;
            Ok(Length::new(q)?)
        })
        .collect()
}

fn pair(list: &str) -> anyhow::Result<(Length, Length)> {
    match lengths(list)?.as_slice() {
        [a, b] => Ok((a.clone(), b.clone())),
        other => bail!("expected two lengths `c1,c2`, got {}", other.len()),
    }
}

fn emit<T: Serialize>(value: &T, compact: bool) -> anyhow::Result<()> {
    let text = if compact {
        serde_json::to_string(value)?
    } else {
        serde_json::to_string_pretty(value)?
    };
    println!("{text}");
    Ok(())
}

fn suite_names(arg: &str) -> Vec<&str> {
    if arg == "all" {
        SUITES.to_vec()
    } else {
        arg.split(',').map(str::trim).collect()
    }
}

fn check(args: &CheckArgs, compact: bool) -> Result<(), Failure> {
    let profile = Profile {
        max_breaks: args.max_breaks,
        denominator_bound: args.denominator_bound,
        max_length: args.max_length,
    };
    if profile.denominator_bound == 0 || profile.max_length == 0 {
        return Err(anyhow!("--denominator-bound and --max-length must be positive").into());
    }
    let report = lawcheck::run(&suite_names(&args.suite), args.seed, args.cases, profile)?;
    if !compact {
        for s in &report.suites {
            for c in &s.checks {
                let verdict = if c.failed == 0 { "ok  " } else { "FAIL" };
                eprintln!("{verdict} {}/{} ({}/{})", s.name, c.name, c.passed, c.cases);
            }
        }
    }
    emit(&report, compact)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Law)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let compact = cli.json;
    match cli.command {
        Command::Eval { map, at, inverse } => {
            let f: PLMap = load(&map)?;
            let t = parse_rational(&at)?;
            let v = if inverse {
                f.eval_inverse(&t)?
            } else {
                f.eval(&t)?
            };
            emit(&v.to_string(), compact)?;
        }
        Command::Compose { first, second } => {
            let (f, g): (PLMap, PLMap) = (load(&first)?, load(&second)?);
            emit(&compose(&f, &g)?, compact)?;
        }
        Command::Tensor { maps } => {
            let fs = maps
                .iter()
                .map(|m| load::<PLMap>(m))
                .collect::<anyhow::Result<Vec<_>>>()?;
            emit(&tensor_all(&fs).expect("at least two maps"), compact)?;
        }
        Command::Decompose { map, split } => {
            let f: PLMap = load(&map)?;
            let (c1, c2) = pair(&split)?;
            let (f1, f2) = decompose_map(&f, &c1, &c2)?;
            emit(&[f1, f2], compact)?;
        }
        Command::Braid { map, split, via_mu } => {
            let f: PLMap = load(&map)?;
            let out = match split {
                Some(s) => {
                    let (l1, l2) = pair(&s)?;
                    if via_mu {
                        braid_map_via_mu(&f, &l1, &l2)?
                    } else {
                        braid_map(&f, &l1, &l2)?
                    }
                }
                None if via_mu => return Err(anyhow!("--via-mu needs --split").into()),
                None => braid2(&f)?,
            };
            emit(&out, compact)?;
        }
        Command::BraidClass { class } => {
            let c: TensorClass = load(&class)?;
            emit(&braid_class(&c)?, compact)?;
        }
        Command::Canon { triple } => {
            let r: RawTriple = load(&triple)?;
            let r = RawTriple::new(r.psi, r.parts)?;
            emit(&canonicalize(&r)?, compact)?;
        }
        Command::Restrict { target, along } => {
            let omega: PLMap = load(&along)?;
            match (target.class, target.element) {
                (Some(c), _) => emit(&restrict_class(&load::<TensorClass>(&c)?, &omega)?, compact)?,
                (_, Some(x)) => emit(&restrict(&load::<Element>(&x)?, &omega)?, compact)?,
                _ => unreachable!("clap requires one target"),
            }
        }
        Command::Colim {
            space,
            with,
            samples,
        } => {
            let d: PSpace = load(&space)?;
            match with {
                None => {
                    let classes: Vec<_> = colimit(&d)
                        .classes()
                        .iter()
                        .map(|(c, l)| serde_json::json!({ "cell": c, "label": l }))
                        .collect();
                    emit(&classes, compact)?;
                }
                Some(e) => {
                    let e: PSpace = load(&e)?;
                    let samples: Vec<RawTriple> = match samples {
                        Some(p) => load(&p)?,
                        None => Vec::new(),
                    };
                    let w = colimit_tensor_check(&d, &e, &samples)?;
                    emit(&w, compact)?;
                    if !w.holds() {
                        return Err(Failure::Law);
                    }
                }
            }
        }
        Command::Check(args) => check(&args, compact)?,
        Command::Witness { space, with } => {
            let report = match (space, with) {
                (Some(d), Some(e)) => {
                    let (d, e): (PSpace, PSpace) = (load(&d)?, load(&e)?);
                    naturality_witness(&d, &e)?
                }
                _ => non_naturality_fixture(),
            };
            emit(&report, compact)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Law) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
