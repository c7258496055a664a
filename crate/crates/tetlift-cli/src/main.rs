//! Command-line front end: JSON polynomial and trace I/O, the lifting
//! subcommands, and the verification/stability harnesses.
//!
//! Exit codes: 0 on success, 1 on validation failure (incompatible traces,
//! failed round-trips, bad input files), 2 on usage errors. With `--json`,
//! errors go to stderr as machine-readable JSON.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use tetlift::bump::BumpSpec;
use tetlift::hardy::{edge_kernel_closed_form, partial_fraction_decompose};
use tetlift::kernels::{lift_e, lift_m1, lift_m2, lift_r, lift_s, lift_s_krq, BumpKernel};
use tetlift::norms::{stability_experiment, QuadOpts};
use tetlift::pipeline::{lift_l4, verify_roundtrip};
use tetlift::sample::monomials_up_to;
use tetlift::trace::{check_polynomial_compatibility, normal_trace_tuple, TraceTuple};
use tetlift::{Poly2, Poly3};

#[derive(Parser)]
#[command(name = "tetlift", version, about = "Exact trace lifting on the reference tetrahedron")]
struct Cli {
    /// Emit errors as machine-readable JSON on stderr.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bump moment table as CSV.
    Moments {
        /// Bump smoothness power.
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Largest total moment order to include.
        #[arg(long)]
        max_degree: u32,
    },
    /// Take traces of a polynomial to order k and emit the tuple as JSON.
    Trace {
        /// Input polynomial (3 variables) as JSON.
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        k: u32,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check trace data for polynomial compatibility.
    Check {
        #[arg(long)]
        traces: PathBuf,
    },
    /// Base lift from the bottom face.
    LiftE {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        k: u32,
        /// Bump smoothness power.
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single-weight lift from face 1 or 2.
    LiftM {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        face: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-weight lift from face 1 or 3 (optionally three-parameter).
    LiftS {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        /// Independent vanishing power on the second edge (defaults to r).
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        face: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three-weight lift from face 1 or 4.
    LiftR {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        face: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a full trace tuple through all four stages.
    Lift {
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        bump_m: u32,
    },
    /// Randomized exact round-trip harness.
    VerifyRoundtrip {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 25)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        coeff_bound: u32,
        #[arg(long, default_value_t = 2)]
        bump_m: u32,
        /// Write the JSON report here as well as summarizing on stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decompose 1/(w1^a w2^b w3^c) into two-weight terms.
    PartialFractions {
        /// Comma-separated exponents a,b,c with a+b+c ≥ 2.
        #[arg(long)]
        beta: String,
    },
    /// Print the edge kernel over an interior lattice as CSV.
    EdgeKernel {
        /// Lattice resolution: points (i/(n+1), j/(n+1)), i+j ≤ n.
        #[arg(long, default_value_t = 10)]
        grid: u32,
    },
    /// Empirical operator-norm ratios for the lifting.
    Stability {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 25)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        coeff_bound: u32,
        #[arg(long, default_value_t = 2)]
        bump_m: u32,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Serialize)]
struct CliError {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<serde_json::Value>,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.error)
    }
}

impl CliError {
    fn new(msg: impl Into<String>) -> Self {
        CliError { error: msg.into(), detail: None }
    }

    fn with_detail(msg: impl Into<String>, detail: serde_json::Value) -> Self {
        CliError { error: msg.into(), detail: Some(detail) }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if cli.json {
                eprintln!("{}", serde_json::to_string(&e).unwrap());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::FAILURE
        }
    }
}

fn quad_opts() -> QuadOpts {
    let mut opts = QuadOpts::default();
    if let Ok(raw) = std::env::var("TETLIFT_MAX_QUAD_ORDER") {
        if let Ok(n) = raw.parse::<usize>() {
            opts.max_order = n.max(2);
        }
    }
    opts
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {what} from {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| CliError::new(format!("cannot parse {what} in {}: {e}", path.display())))
}

fn write_output<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    match out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| CliError::new(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_text(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::new(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Moments { m, max_degree } => {
            let spec = BumpSpec::new(*m);
            println!("alpha1,alpha2,value");
            for alpha in monomials_up_to::<2>(*max_degree) {
                println!("{},{},{}", alpha[0], alpha[1], spec.moment(alpha));
            }
            Ok(())
        }
        Command::Trace { poly, k, out } => {
            let u: Poly3 = read_json(poly, "polynomial")?;
            let tuple = normal_trace_tuple(&u, *k);
            write_output(&tuple, out)
        }
        Command::Check { traces } => {
            let tuple: TraceTuple = read_json(traces, "trace tuple")?;
            let report = check_polynomial_compatibility(&tuple);
            let text = serde_json::to_string_pretty(&report).unwrap();
            println!("{text}");
            if report.is_compatible() {
                Ok(())
            } else {
                Err(CliError::with_detail(
                    format!("{} compatibility violations", report.violations.len()),
                    serde_json::to_value(&report).unwrap(),
                ))
            }
        }
        Command::LiftE { poly, k, m, out } => {
            let f: Poly2 = read_json(poly, "face polynomial")?;
            let kernel = BumpKernel::new(BumpSpec::new(*m));
            write_output(&lift_e(&f, *k, &kernel), out)
        }
        Command::LiftM { poly, k, r, m, face, out } => {
            let f: Poly2 = read_json(poly, "face polynomial")?;
            let kernel = BumpKernel::new(BumpSpec::new(*m));
            let lifted = match face {
                1 => lift_m1(&f, *k, *r, &kernel),
                2 => lift_m2(&f, *k, *r, &kernel),
                _ => return Err(CliError::new("lift-m supports faces 1 and 2")),
            }
            .map_err(|e| CliError::new(e.to_string()))?;
            write_output(&lifted, out)
        }
        Command::LiftS { poly, k, r, q, m, face, out } => {
            let f: Poly2 = read_json(poly, "face polynomial")?;
            let kernel = BumpKernel::new(BumpSpec::new(*m));
            let lifted = match (face, q) {
                (1, Some(q)) => lift_s_krq(&f, *k, *r, *q, &kernel),
                (1, None) => lift_s(&f, *k, *r, &kernel, 1),
                (3, None) => lift_s(&f, *k, *r, &kernel, 3),
                (3, Some(_)) => {
                    return Err(CliError::new("the three-parameter variant is based on face 1"))
                }
                _ => return Err(CliError::new("lift-s supports faces 1 and 3")),
            }
            .map_err(|e| CliError::new(e.to_string()))?;
            write_output(&lifted, out)
        }
        Command::LiftR { poly, k, r, m, face, out } => {
            let f: Poly2 = read_json(poly, "face polynomial")?;
            let kernel = BumpKernel::new(BumpSpec::new(*m));
            if *face != 1 && *face != 4 {
                return Err(CliError::new("lift-r supports faces 1 and 4"));
            }
            let lifted =
                lift_r(&f, *k, *r, &kernel, *face).map_err(|e| CliError::new(e.to_string()))?;
            write_output(&lifted, out)
        }
        Command::Lift { traces, out, bump_m } => {
            let tuple: TraceTuple = read_json(traces, "trace tuple")?;
            let lifted = lift_l4(&tuple, &BumpSpec::new(*bump_m)).map_err(|e| {
                CliError::with_detail(
                    e.to_string(),
                    serde_json::json!({
                        "face": e.face,
                        "edge": [e.edge.0, e.edge.1],
                        "order": e.order,
                    }),
                )
            })?;
            write_output(&lifted, out)
        }
        Command::VerifyRoundtrip {
            degree,
            order,
            samples,
            seed,
            coeff_bound,
            bump_m,
            report,
        } => {
            let rep = verify_roundtrip(
                *degree,
                *order,
                *samples,
                *seed,
                *coeff_bound,
                &BumpSpec::new(*bump_m),
            );
            if let Some(path) = report {
                write_output(&rep, &Some(path.clone()))?;
            }
            println!(
                "degree {} order {}: {}/{} exact round-trips ({} ms)",
                rep.degree, rep.order, rep.passes, rep.samples, rep.total_ms
            );
            if rep.all_passed() {
                Ok(())
            } else {
                Err(CliError::with_detail(
                    format!("{} round-trip failures", rep.failures.len()),
                    serde_json::to_value(&rep.failures).unwrap(),
                ))
            }
        }
        Command::PartialFractions { beta } => {
            let parts: Vec<u32> = beta
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::new(format!("bad --beta {beta:?}: {e}")))?;
            if parts.len() != 3 {
                return Err(CliError::new("--beta needs exactly three exponents a,b,c"));
            }
            if parts.iter().sum::<u32>() < 2 {
                return Err(CliError::new("total exponent must be at least 2"));
            }
            let terms = partial_fraction_decompose([parts[0], parts[1], parts[2]]);
            println!("weight1,exp1,weight2,exp2,coefficient");
            for t in &terms {
                println!(
                    "{},{},{},{},{}",
                    t.weights.0, t.exponents.0, t.weights.1, t.exponents.1, t.coefficient
                );
            }
            Ok(())
        }
        Command::EdgeKernel { grid } => {
            let n = *grid;
            if n == 0 {
                return Err(CliError::new("--grid must be positive"));
            }
            println!("x1,x2,value");
            let h = 1.0 / (n as f64 + 1.0);
            for i in 1..=n {
                for j in 1..=n {
                    if i + j > n {
                        continue;
                    }
                    let (x1, x2) = (i as f64 * h, j as f64 * h);
                    let a = edge_kernel_closed_form(x1, x2)
                        .map_err(|e| CliError::new(e.to_string()))?;
                    println!("{x1},{x2},{a}");
                }
            }
            Ok(())
        }
        Command::Stability {
            degree,
            order,
            s,
            p,
            samples,
            seed,
            coeff_bound,
            bump_m,
            csv,
        } => {
            if *s < *order + 1 {
                return Err(CliError::new("stability needs --s at least order + 1"));
            }
            if *p <= 1.0 {
                return Err(CliError::new("--p must exceed 1"));
            }
            let table = stability_experiment(
                *degree,
                *order,
                *samples,
                *s,
                *p,
                *seed,
                *coeff_bound,
                &BumpSpec::new(*bump_m),
                &quad_opts(),
            );
            // The trace column is an integer-order surrogate, not the full
            // trace-space norm; flag that in the artifact itself.
            let mut text = String::from("# trace_surrogate uses integer-order face norms\n");
            text.push_str(&table.to_csv());
            write_text(&text, csv)
        }
    }
}
