//! `dp4`: JSON reports on pencils of quadrics in P⁴ over Q.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use dp4::brauer::brauer_group;
use dp4::exact::parse_rat;
use dp4::fixtures::{self, BSD_POINTS};
use dp4::localfield::Place;
use dp4::obstruction::{adelic_report, eval_at_t, fiber_solvable, PointP1, DEFAULT_DEPTH};
use dp4::pencil::Pencil;
use dp4::points::search_points;
use dp4::report::{self, EvalValue, Report};
use dp4::{input, Error};

#[derive(Parser)]
#[command(name = "dp4", version, about = "Arithmetic of pencils of quadrics in P^4 over Q")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for place-parallel work.
    #[arg(long, global = true, env = "DP4_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PencilArg {
    /// Pencil file (JSON with Q0 and Q1 or Qinf); `-` reads stdin.
    file: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide smoothness; exits with 3 when it fails.
    Check(PencilArg),
    /// Singular locus with ε data and vertices.
    Singular(PencilArg),
    /// Brauer group of the line fibration and its generators.
    Brauer(PencilArg),
    /// The sets R_T and R'_T with their parities.
    Rt(PencilArg),
    /// Local profiles and the adelic Brauer-Manin decision.
    Obstruction {
        #[command(flatten)]
        pencil: PencilArg,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
    /// Evaluate every generator at a point of P^1 over one completion.
    /// The parameter is that of the normalized pencil.
    Evaluate {
        #[command(flatten)]
        pencil: PencilArg,
        /// A prime or `inf`.
        #[arg(long)]
        place: Place,
        /// A rational or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Search points over Q(sqrt d) with coordinates of height at most H.
    Points {
        #[command(flatten)]
        pencil: PencilArg,
        /// 1 searches rational points.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        d: BigInt,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Check that a point lies on X.
    VerifyPoint {
        #[command(flatten)]
        pencil: PencilArg,
        /// Five coordinates written `a+b*sqrt(d)`.
        #[arg(long, num_args = 5, allow_hyphen_values = true, required = true)]
        coords: Vec<String>,
    },
    /// Reduction mod p: split-fiber certificate, multiplicity, local points.
    Reduce {
        #[command(flatten)]
        pencil: PencilArg,
        /// One or more primes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long, value_delimiter = ',', num_args = 1)]
        weights: Option<Vec<u32>>,
    },
    /// The bundled worked examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    /// Names of the bundled examples.
    List,
    /// Full report on one example, or all of them.
    Run {
        #[arg(required_unless_present = "all")]
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
}

fn load(arg: &PencilArg) -> Result<Pencil, Error> {
    let text = if arg.file == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(&arg.file).map_err(|e| Error::Parse(format!("{}: {e}", arg.file)))?
    };
    input::parse_pencil(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", arg.file)),
        other => other,
    })
}

fn parse_t(s: &str) -> Result<PointP1, Error> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(PointP1::Infinity),
        x => parse_rat(x).map(PointP1::Finite),
    }
}

fn bundled_points(name: &str) -> Vec<&'static [&'static str]> {
    if name == "bsd" {
        BSD_POINTS.iter().map(|(_, c)| &c[..]).collect()
    } else {
        Vec::new()
    }
}

fn example_report(name: &str, depth: u32) -> Result<Report, Error> {
    let text = fixtures::by_name(name).ok_or_else(|| Error::Parse(format!("no example named {name:?}")))?;
    let p = input::parse_pencil(text)?;
    report::full(&p, depth, &bundled_points(name))
}

/// Output text and whether the pencil failed smoothness.
fn run(cmd: Command) -> Result<(String, bool), Error> {
    let one = |r: Report| Ok((r.to_json(), false));
    match cmd {
        Command::Check(f) => {
            let p = load(&f)?;
            let mut r = Report::new(&p);
            let s = report::smoothness(&p);
            let smooth = s.smooth;
            r.normalization = Some(report::normalization(&p));
            r.smoothness = Some(s);
            Ok((r.to_json(), !smooth))
        }
        Command::Singular(f) => {
            let p = load(&f)?;
            let mut r = Report::new(&p);
            r.normalization = Some(report::normalization(&p));
            r.singular_locus = Some(report::locus(&p.singular_locus()?));
            one(r)
        }
        Command::Brauer(f) => {
            let p = load(&f)?;
            let l = p.singular_locus()?;
            let mut r = Report::new(&p);
            r.brauer = Some(report::brauer(&brauer_group(&p, &l)?));
            one(r)
        }
        Command::Rt(f) => {
            let p = load(&f)?;
            let l = p.singular_locus()?;
            let mut r = Report::new(&p);
            r.rt = Some(report::rt(&brauer_group(&p, &l)?)?);
            one(r)
        }
        Command::Obstruction { pencil, depth } => {
            let p = load(&pencil)?;
            let l = p.singular_locus()?;
            let b = brauer_group(&p, &l)?;
            let mut r = Report::new(&p);
            r.obstruction = Some(report::obstruction(&adelic_report(&p, &l, &b, depth)?));
            one(r)
        }
        Command::Evaluate { pencil, place, t } => {
            let p = load(&pencil)?;
            let t = parse_t(&t)?;
            let l = p.singular_locus()?;
            let b = brauer_group(&p, &l)?;
            let values: BTreeMap<String, EvalValue> = b
                .candidates
                .iter()
                .map(|(g, _)| {
                    let v = match eval_at_t(g, &t, &place) {
                        Ok(h) => EvalValue::Value(h),
                        Err(e) => EvalValue::Undefined(e.to_string()),
                    };
                    (g.t.to_string(), v)
                })
                .collect();
            let mut r = Report::new(&p);
            r.evaluation = Some(report::Evaluation {
                fiber_solvable: fiber_solvable(&p, &l, &t, &place),
                place,
                t: t.to_string(),
                values,
            });
            one(r)
        }
        Command::Points { pencil, d, bound } => {
            let p = load(&pencil)?;
            let found = search_points(&p, &d, bound)?;
            let mut r = Report::new(&p);
            r.points = Some(report::Points {
                verified: Vec::new(),
                found: found.iter().map(|x| report::found_point(&p, x)).collect(),
            });
            one(r)
        }
        Command::VerifyPoint { pencil, coords } => {
            let p = load(&pencil)?;
            let mut r = Report::new(&p);
            r.points = Some(report::Points { verified: vec![report::checked_point(&p, &coords)?], found: Vec::new() });
            one(r)
        }
        Command::Reduce { pencil, p: primes, weights } => {
            let p = load(&pencil)?;
            let w = match weights {
                None => None,
                Some(w) => Some(<[u32; 5]>::try_from(w).map_err(|w| Error::Parse(format!("--weights needs 5 entries, got {}", w.len())))?),
            };
            for &q in &primes {
                if !dp4::exact::int::is_prime(&BigInt::from(q)) {
                    return Err(Error::Parse(format!("--p: {q} is not prime")));
                }
            }
            let mut r = Report::new(&p);
            r.reduction = Some(primes.iter().map(|&q| report::reduction(&p, q, w)).collect());
            one(r)
        }
        Command::Examples { action: ExamplesAction::List } => {
            let names: Vec<&str> = fixtures::ALL.iter().map(|(n, _)| *n).collect();
            Ok((names.join("\n") + "\n", false))
        }
        Command::Examples { action: ExamplesAction::Run { name, all, depth } } => {
            if all {
                let reports: Vec<Report> =
                    fixtures::ALL.iter().map(|(n, _)| example_report(n, depth)).collect::<Result<_, _>>()?;
                let text = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
                Ok((text, false))
            } else {
                one(example_report(name.as_deref().unwrap_or_default(), depth)?)
            }
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::NotSmooth(_) | Error::DegeneratePencil(_) => 3,
        Error::Inconsistent(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (text, not_smooth) = match run(cli.command) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(if not_smooth { 3 } else { 0 })
}
