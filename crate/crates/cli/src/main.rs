//! `streamzeros` — command-line front end for the stream-zeros library.
//!
//! Exit codes: 0 success, 1 domain error (not hyperbolic, not coprime, ...),
//! 2 usage error. Rationals are printed as "n/d" strings, floats with 17
//! significant digits in CSV/tables; JSON floats use shortest round-trip.
//! Worker parallelism (entropy sweeps, searches) honors RAYON_NUM_THREADS.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;
use serde_json::{json, Value};

use streamzeros::automorphism::{saut_discriminant, saut_eigendata, saut_group, SautClass};
use streamzeros::dynamics::{
    decode, encode, entropy_estimate, entropy_exact, is_admissible, orbit, orbit_cycle, CodeWord,
    DecodeResult, TorusSeq, Verdict,
};
use streamzeros::inverse::inverse;
use streamzeros::poly::{bezout, resultant};
use streamzeros::quad::{cf_expand, parse_quadirr, pell_solve, QuadIrr};
use streamzeros::rat::{parse_rat, rat_to_string, Rat};
use streamzeros::structure::{decompose, dim_check, dim_omega, enumerate_common_zeros};
use streamzeros::LaurentPoly;

#[derive(Parser)]
#[command(name = "streamzeros", version, about = "Exact computation with stream zeros of integer polynomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct WindowOpt {
    /// Index window "lo..hi"
    #[arg(long, default_value = "-20..20", value_parser = parse_range, allow_hyphen_values = true)]
    window: (i64, i64),
    /// Target precision for float windows
    #[arg(long, default_value_t = 1e-12)]
    precision: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convolution inverse of a hyperbolic polynomial
    Inverse {
        poly: String,
        #[command(flatten)]
        win: WindowOpt,
    },
    /// Forward/backward orbit of a rational seed
    Orbit {
        poly: String,
        /// Comma-separated rational seed of length k, e.g. "0,1/2"
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        back: usize,
        /// Backward branch index in 0..|a_k|
        #[arg(long, default_value_t = 0)]
        branch: usize,
        /// Follow the orbit to its cycle and emit the periodic sequence
        #[arg(long)]
        cycle: bool,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        output: Output,
    },
    /// Symbolic coding of the orbit of a rational seed
    Encode {
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long)]
        cycle: bool,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        output: Output,
    },
    /// Reconstruct the sequence coded by a word
    Decode {
        poly: String,
        /// Comma-separated letters, e.g. "-1,-1,1"
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Treat the word as one period of a periodic word
        #[arg(long)]
        periodic: bool,
        #[command(flatten)]
        win: WindowOpt,
    },
    /// Decide whether a word is admissible
    Admissible {
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        periodic: bool,
        #[arg(long, default_value_t = 1e-12)]
        precision: f64,
    },
    /// Exact entropy and the word-counting estimate
    Entropy {
        poly: String,
        #[arg(long, default_value_t = 1024)]
        grid: u64,
        #[arg(long, default_value_t = 10)]
        word_len: usize,
        #[arg(long, value_enum, default_value_t = Output::Table)]
        output: Output,
    },
    /// Sylvester resultant of two polynomials
    Resultant { p: String, q: String },
    /// Bezout cofactors A, B with A P + B Q = Delta
    Bezout { p: String, q: String },
    /// Dimension of the stream-zero set, with an optional constructive check
    Dim {
        poly: String,
        /// Verify that k independent coordinates extend to members
        #[arg(long)]
        check_k: Option<usize>,
        #[arg(long, default_value_t = 4)]
        grid: u64,
    },
    /// Common zeros of two coprime polynomials on a window
    CommonZeros {
        p: String,
        q: String,
        #[arg(long, default_value = "0..5", value_parser = parse_range, allow_hyphen_values = true)]
        window: (i64, i64),
    },
    /// Split a member of the product's zero set along coprime factors
    Decompose {
        p: String,
        q: String,
        /// Seed for an orbit of P*Q supplying the member to split
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Strong automorphism group of a quadratic polynomial
    Saut { poly: String },
    /// Fundamental solution of w^2 - D v^2 = +-4
    Pell { d: i64 },
    /// Continued fraction of a quadratic irrational, e.g. "(3+sqrt5)/2"
    Cf { expr: String },
    /// Run the full acceptance suite
    VerifyAll,
}

enum Failure {
    Usage(String),
    Domain(streamzeros::Error),
}

impl From<streamzeros::Error> for Failure {
    fn from(e: streamzeros::Error) -> Self {
        Failure::Domain(e)
    }
}

type RunResult = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected \"lo..hi\", got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty window {s:?}"));
    }
    Ok((lo, hi))
}

fn parse_poly(s: &str) -> Result<LaurentPoly, Failure> {
    LaurentPoly::parse(s).map_err(|e| usage(format!("bad polynomial {s:?}: {e}")))
}

fn parse_seed(s: &str) -> Result<Vec<Rat>, Failure> {
    s.split(',')
        .map(|t| parse_rat(t.trim()).map_err(|e| usage(format!("bad rational {t:?}: {e}"))))
        .collect()
}

fn parse_word(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("bad letter {t:?}")))
        })
        .collect()
}

fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn seq_json(x: &TorusSeq) -> Value {
    json!({
        "start": x.start,
        "periodic": x.periodic,
        "values": x.values.iter().map(rat_to_string).collect::<Vec<_>>(),
    })
}

fn mat_json(m: &[Vec<BigInt>]) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|c| json!(c.to_string())).collect()))
            .collect(),
    )
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable report");
    s.push('\n');
    s
}

fn run(cmd: &Cmd) -> RunResult {
    match cmd {
        Cmd::Inverse { poly, win } => {
            let p = parse_poly(poly)?;
            let inv = inverse(&p, win.precision)?;
            let w = inv.window_of(win.window.0, win.window.1, win.precision)?;
            Ok(pretty(json!({
                "poly": p.to_json(),
                "stream": inv.to_json(),
                "window": { "lo": w.lo, "hi": w.hi, "values": w.values,
                            "tail_bound": w.tail_bound, "err": w.err },
            })))
        }
        Cmd::Orbit { poly, seed, steps, back, branch, cycle, output } => {
            let p = parse_poly(poly)?;
            let seed = parse_seed(seed)?;
            let x = if *cycle {
                orbit_cycle(&p, &seed)?
            } else {
                orbit(&p, &seed, *steps, *back, *branch)?
            };
            match output {
                Output::Json => Ok(pretty(seq_json(&x))),
                _ => {
                    let mut s = String::from("index,value\n");
                    for (i, v) in x.values.iter().enumerate() {
                        writeln!(s, "{},{}", x.start + i as i64, rat_to_string(v)).unwrap();
                    }
                    Ok(s)
                }
            }
        }
        Cmd::Encode { poly, seed, steps, cycle, output } => {
            let p = parse_poly(poly)?;
            let seed = parse_seed(seed)?;
            let x = if *cycle {
                orbit_cycle(&p, &seed)?
            } else {
                orbit(&p, &seed, *steps, 0, 0)?
            };
            let e = encode(&p, &x)?;
            match output {
                Output::Json => Ok(pretty(json!({
                    "start": e.start,
                    "periodic": e.word.periodic,
                    "letters": e.word.letters,
                }))),
                _ => {
                    let mut s = String::from("index,letter\n");
                    for (i, l) in e.word.letters.iter().enumerate() {
                        writeln!(s, "{},{}", e.start + i as i64, l).unwrap();
                    }
                    Ok(s)
                }
            }
        }
        Cmd::Decode { poly, word, periodic, win } => {
            let p = parse_poly(poly)?;
            let letters = parse_word(word)?;
            let w = if *periodic {
                CodeWord::periodic(letters)
            } else {
                CodeWord::finite(letters)
            };
            match decode(&p, &w, win.window, win.precision)? {
                DecodeResult::Exact(x) => Ok(pretty(json!({
                    "kind": "exact",
                    "start": x.start,
                    "periodic": x.periodic,
                    "values": x.values.iter().map(rat_to_string).collect::<Vec<_>>(),
                }))),
                DecodeResult::Approx(w) => Ok(pretty(json!({
                    "kind": "window",
                    "lo": w.lo, "hi": w.hi, "values": w.values,
                    "tail_bound": w.tail_bound, "err": w.err,
                }))),
            }
        }
        Cmd::Admissible { poly, word, periodic, precision } => {
            let p = parse_poly(poly)?;
            let letters = parse_word(word)?;
            let w = if *periodic {
                CodeWord::periodic(letters)
            } else {
                CodeWord::finite(letters)
            };
            let verdict = match is_admissible(&p, &w, *precision)? {
                Verdict::Yes => "yes",
                Verdict::No => "no",
                Verdict::Boundary => "boundary",
            };
            Ok(pretty(json!({ "verdict": verdict })))
        }
        Cmd::Entropy { poly, grid, word_len, output } => {
            let p = parse_poly(poly)?;
            let exact = entropy_exact(&p)?;
            let pts = entropy_estimate(&p, *word_len, *grid)?;
            match output {
                Output::Json => Ok(pretty(json!({
                    "exact": exact,
                    "estimates": pts.iter().map(|pt| json!({
                        "n": pt.n, "count": pt.count, "estimate": pt.estimate,
                        "ratio": pt.gap, "gap": (pt.gap - exact).abs(),
                    })).collect::<Vec<_>>(),
                }))),
                Output::Csv => {
                    let mut s = String::from("n,count,estimate,ratio,exact,gap\n");
                    for pt in &pts {
                        writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            pt.n,
                            pt.count,
                            f17(pt.estimate),
                            f17(pt.gap),
                            f17(exact),
                            f17((pt.gap - exact).abs())
                        )
                        .unwrap();
                    }
                    Ok(s)
                }
                Output::Table => {
                    let mut s = format!(
                        "{:>4} {:>12} {:>10} {:>10} {:>10} {:>10}\n",
                        "n", "count", "estimate", "ratio", "exact", "gap"
                    );
                    for pt in &pts {
                        writeln!(
                            s,
                            "{:>4} {:>12} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                            pt.n,
                            pt.count,
                            pt.estimate,
                            pt.gap,
                            exact,
                            (pt.gap - exact).abs()
                        )
                        .unwrap();
                    }
                    Ok(s)
                }
            }
        }
        Cmd::Resultant { p, q } => {
            let p = parse_poly(p)?;
            let q = parse_poly(q)?;
            let info = resultant(&p, &q);
            Ok(pretty(json!({
                "delta": info.delta.to_string(),
                "shift_p": info.shift_p,
                "shift_q": info.shift_q,
                "matrix": mat_json(&info.matrix),
            })))
        }
        Cmd::Bezout { p, q } => {
            let p = parse_poly(p)?;
            let q = parse_poly(q)?;
            let (a, b, delta) = bezout(&p, &q)?;
            Ok(pretty(json!({
                "a": a.to_json(),
                "b": b.to_json(),
                "delta": delta.to_string(),
                "identity": format!("({a})*({p}) + ({b})*({q}) = {delta}"),
            })))
        }
        Cmd::Dim { poly, check_k, grid } => {
            let p = parse_poly(poly)?;
            let dim = dim_omega(&p);
            let checked = match check_k {
                Some(k) => Some(dim_check(&p, *k, *grid)?),
                None => None,
            };
            Ok(pretty(json!({ "dim": dim, "checked": checked })))
        }
        Cmd::CommonZeros { p, q, window } => {
            let p = parse_poly(p)?;
            let q = parse_poly(q)?;
            let zeros = enumerate_common_zeros(&p, &q, *window)?;
            Ok(pretty(json!({
                "count": zeros.len(),
                "zeros": zeros.iter().map(seq_json).collect::<Vec<_>>(),
            })))
        }
        Cmd::Decompose { p, q, seed, steps } => {
            let p = parse_poly(p)?;
            let q = parse_poly(q)?;
            let seed = parse_seed(seed)?;
            let prod = p.mul(&q);
            let x = orbit(&prod, &seed, *steps, 0, 0)?;
            let w = decompose(&p, &q, &x)?;
            Ok(pretty(json!({
                "x": seq_json(&x),
                "u": seq_json(&w.u),
                "v": seq_json(&w.v),
                "scale": w.scale.to_string(),
            })))
        }
        Cmd::Saut { poly } => {
            let p = parse_poly(poly)?;
            let class = saut_group(&p)?;
            let (name, generator) = match &class {
                SautClass::InfiniteCyclic { generator } => ("infinite_cyclic", Some(generator)),
                SautClass::CyclicOrder2 { generator } => ("cyclic_order_2", Some(generator)),
                SautClass::Trivial => ("trivial", None),
            };
            let d = saut_discriminant(&p)?;
            let mut report = json!({
                "class": name,
                "discriminant": d.to_string(),
                "generator": generator.map(|g| mat_json(g)),
            });
            if let Some(g) = generator {
                let eig = saut_eigendata(g, &p)?;
                report["eigenvalues"] = json!(eig
                    .pairs
                    .iter()
                    .map(|(theta, lambda)| json!({
                        "root": [theta.re, theta.im],
                        "eigenvalue": [lambda.re, lambda.im],
                    }))
                    .collect::<Vec<_>>());
                if let Some(exact) = &eig.exact {
                    report["eigenvalues_exact"] = json!(exact
                        .iter()
                        .map(|(theta, lambda)| json!({
                            "root": theta.to_string(),
                            "eigenvalue": lambda.to_string(),
                        }))
                        .collect::<Vec<_>>());
                }
            }
            // continued-fraction and Pell data back the infinite cyclic case
            // with nonzero nonsquare discriminant
            if name == "infinite_cyclic" && d != BigInt::from(0) {
                if let Ok(pell) = pell_solve(&d) {
                    report["pell"] = json!({
                        "d": d.to_string(),
                        "w": pell.w.to_string(),
                        "v": pell.v.to_string(),
                        "sign": pell.sign,
                    });
                    let theta = positive_root(&p)?;
                    let cf = cf_expand(&theta);
                    report["cf"] = json!({
                        "preperiod": cf.preperiod.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "period": cf.period.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "display": cf.to_string(),
                    });
                }
            }
            Ok(pretty(report))
        }
        Cmd::Pell { d } => {
            let s = pell_solve(&BigInt::from(*d))?;
            Ok(pretty(json!({
                "d": d,
                "w": s.w.to_string(),
                "v": s.v.to_string(),
                "sign": s.sign,
            })))
        }
        Cmd::Cf { expr } => {
            let theta = parse_quadirr(expr).map_err(|e| usage(format!("bad expression: {e}")))?;
            let cf = cf_expand(&theta);
            let conv = cf.eval(24);
            Ok(pretty(json!({
                "preperiod": cf.preperiod.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "period": cf.period.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "display": cf.to_string(),
                "convergent": rat_to_string(&conv),
            })))
        }
        Cmd::VerifyAll => {
            let reports = streamzeros::verify::run_all();
            let mut s = String::new();
            let mut all = true;
            for r in &reports {
                writeln!(
                    s,
                    "[{}] criterion {}: {} — {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.details
                )
                .unwrap();
                all &= r.pass;
            }
            if all {
                Ok(s)
            } else {
                print!("{s}");
                Err(Failure::Domain(streamzeros::Error::Invalid(
                    "acceptance criteria failed".into(),
                )))
            }
        }
    }
}

/// Root of largest modulus of the normalized quadratic, as used to seed the
/// continued-fraction construction of the Saut generator.
fn positive_root(p: &LaurentPoly) -> Result<QuadIrr, streamzeros::Error> {
    let f = streamzeros::dynamics::form3(p)?;
    let a1 = f.a[0].clone();
    let a2 = f.a[1].clone();
    let d: BigInt = &a1 * &a1 - BigInt::from(4) * &a2;
    let s = if a2 > BigInt::from(0) {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    };
    QuadIrr::new(-a1, s, BigInt::from(2) * a2, d)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.cmd) {
        Ok(report) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, report) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{report}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
