//! `tropkm`: distances, tropical invariants, assignments and checks on
//! lattices over Laurent series fields.
//!
//! Exit codes: 0 ok, 1 check failed, 2 parse or usage error, 3 dimension
//! or field mismatch, 4 precision exhausted, 5 index-sum mismatch,
//! 6 internal verification failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropkm::invariants::{self, Configuration};
use tropkm::lattice::Lattice;
use tropkm::oracle;
use tropkm::tropkm::{assignment_solve_in, WitnessCertificate};
use tropkm::webs::{self, WebParams};
use tropkm::{io, Error, FieldConfig};

#[derive(Parser)]
#[command(name = "tropkm", version, about = "Lattice Kuhn-Munkres and tropical invariants in the affine building")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Coefficient field, fp:<p> or q. Lattice files carry their own field;
    /// when given explicitly it must agree with them.
    #[arg(long, global = true)]
    field: Option<FieldConfig>,
    /// Exponents in input files must stay below this.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(i64).range(8..))]
    horizon: i64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Vector distance and its fundamental pairings from A to B.
    Distance { a: PathBuf, b: PathBuf },
    /// The tropical invariant of a configuration.
    Invariant {
        conf: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        /// Indices sum to (k-1)n; evaluate the dual function.
        #[arg(long)]
        dual: bool,
        /// Append the witness certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Minimum-cost transversal of a square integer CSV matrix.
    Assignment { cost: PathBuf },
    /// Identity, positivity, conjecture and oracle checks.
    Check {
        #[command(subcommand)]
        check: Check,
    },
    /// Re-verify a certificate document.
    Verify { certificate: PathBuf },
}

#[derive(Subcommand)]
enum Check {
    /// The tropical exchange relation for four points.
    Identity {
        conf: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
    /// Positivity of ordered bases, one block per point.
    Positivity {
        conf: PathBuf,
        #[arg(long)]
        bases: PathBuf,
        #[arg(long)]
        triangulation: Option<PathBuf>,
    },
    /// The conjectured formula for the web function (report only).
    Conjecture {
        conf: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        params: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Witness optimum against sampled determinants.
    OracleSample {
        conf: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Invariant against the distance sum minimised over a ball.
    OracleMetric {
        conf: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long)]
        dual: bool,
    },
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(..) => 2,
            Failure::Lib(e) => match e {
                Error::Parse { .. } => 2,
                Error::DimensionMismatch(_) | Error::FieldMismatch => 3,
                Error::PrecisionExhausted(_) | Error::IndeterminateValuation { .. } => 4,
                Error::IndexSum { .. } => 5,
                Error::VerificationFailed(_) | Error::ClaimViolated(_) | Error::AssertionFailed(_) | Error::IterationBudgetExceeded(_) => 6,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

/// Text for the terminal, JSON for machines, and whether the check passed.
struct Report {
    text: String,
    json: Value,
    passed: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, passed: true }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn check_field(run: &RunConfig, got: FieldConfig) -> Result<(), Failure> {
    match run.field {
        Some(f) if f != got => Err(Error::FieldMismatch.into()),
        _ => Ok(()),
    }
}

fn load_lattice(run: &RunConfig, path: &Path) -> Result<Lattice, Failure> {
    let l = io::parse_lattice(&read(path)?, run.horizon)?;
    check_field(run, l.field())?;
    Ok(l)
}

fn load_conf(run: &RunConfig, path: &Path) -> Result<Configuration, Failure> {
    let c = io::parse_configuration(&read(path)?, run.horizon)?;
    check_field(run, c.field())?;
    Ok(c)
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn distance(run: &RunConfig, a: &Path, b: &Path) -> Result<Report, Failure> {
    let (la, lb) = (load_lattice(run, a)?, load_lattice(run, b)?);
    if la.field() != lb.field() {
        return Err(Error::FieldMismatch.into());
    }
    let mu = la.distance(&lb)?;
    let d: Vec<String> = (1..la.n()).map(|i| mu.pair_fundamental(i).to_string()).collect();
    let mut text = format!("{mu}\n");
    for (i, v) in d.iter().enumerate() {
        writeln!(text, "d_{} = {v}", i + 1).unwrap();
    }
    Ok(Report::ok(text, json!({ "mu": mu.entries(), "d": d })))
}

fn invariant(run: &RunConfig, conf: &Path, indices: &[usize], dual: bool, certificate: bool) -> Result<Report, Failure> {
    let c = load_conf(run, conf)?;
    let (value, cert) = if dual {
        invariants::dual_f_t(indices, &c)?
    } else {
        invariants::f_t_with(indices, &c, run.seed)?
    };
    let mut text = format!("{value}\n");
    let mut doc = json!({ "indices": indices, "dual": dual, "value": value.to_string() });
    if certificate {
        let cert_json = io::certificate_to_json(&cert);
        text.push_str(&cert_json);
        text.push('\n');
        doc["certificate"] = serde_json::from_str(&cert_json).expect("certificate documents are JSON");
    }
    Ok(Report::ok(text, doc))
}

fn assignment(run: &RunConfig, cost: &Path) -> Result<Report, Failure> {
    let c = io::parse_cost_csv(&read(cost)?)?;
    let field = run.field.unwrap_or_default();
    let a = assignment_solve_in(&c, field, run.seed)?;
    let n = c.len();
    let dual_ok = (0..n).all(|i| (0..n).all(|j| a.row_potentials[i] + a.col_potentials[j] <= c[i][j]));
    let perm_sum: i64 = (0..n).map(|i| c[i][a.permutation[i]]).sum();
    let pot_sum: i64 = a.row_potentials.iter().chain(&a.col_potentials).sum();
    if !dual_ok || perm_sum != a.value || pot_sum != a.value {
        return Err(Error::VerificationFailed("assignment potentials or permutation do not certify the optimum".into()).into());
    }
    let one_line: Vec<usize> = a.permutation.iter().map(|j| j + 1).collect();
    let text = format!(
        "value: {}\npermutation: {}\nrow potentials: {}\ncolumn potentials: {}\n",
        a.value,
        join(&one_line, " "),
        join(&a.row_potentials, " "),
        join(&a.col_potentials, " ")
    );
    let doc = json!({
        "value": a.value,
        "permutation": one_line,
        "row_potentials": a.row_potentials,
        "column_potentials": a.col_potentials,
    });
    Ok(Report::ok(text, doc))
}

fn verify(cert: &Path) -> Result<Report, Failure> {
    let c: WitnessCertificate = io::certificate_from_json(&read(cert)?)?;
    match c.verify() {
        Ok(()) => Ok(Report::ok(
            format!("certificate verified, optimum {}\n", c.optimum),
            json!({ "verified": true, "optimum": c.optimum }),
        )),
        Err(e @ (Error::VerificationFailed(_) | Error::DimensionMismatch(_))) => Ok(Report {
            text: format!("certificate rejected: {e}\n"),
            json: json!({ "verified": false, "reason": e.to_string() }),
            passed: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn four(v: &[usize], what: &str) -> Result<[usize; 4], Failure> {
    v.try_into()
        .map_err(|_| Error::InvalidArgument(format!("{what} needs four values, got {}", v.len())).into())
}

fn check(run: &RunConfig, which: &Check) -> Result<Report, Failure> {
    match which {
        Check::Identity { conf, indices } => {
            let c = load_conf(run, conf)?;
            let rep = invariants::exchange_identity_check(four(indices, "--indices")?, &c)?;
            let sums: Vec<String> = rep.sums.iter().map(|s| s.to_string()).collect();
            let text = format!("sums: {}\nexchange identity: {}\n", sums.join(" "), if rep.holds { "holds" } else { "FAILS" });
            Ok(Report {
                text,
                json: json!({ "sums": sums, "holds": rep.holds }),
                passed: rep.holds,
            })
        }
        Check::Positivity { conf, bases, triangulation } => {
            let c = load_conf(run, conf)?;
            let b = io::parse_bases(&read(bases)?, run.horizon)?;
            let tri = triangulation.as_deref().map(|p| read(p).and_then(|t| Ok(io::parse_triangulation(&t)?))).transpose()?;
            let rep = invariants::positivity_check(&c, &b, tri.as_deref())?;
            let mut text = format!("checked: {}\npositive: {}\n", rep.checked, rep.positive);
            if let Some(v) = &rep.first_violation {
                writeln!(text, "violation: {v}").unwrap();
            }
            Ok(Report {
                text,
                json: json!({ "checked": rep.checked, "positive": rep.positive, "violation": rep.first_violation }),
                passed: rep.positive,
            })
        }
        Check::Conjecture { conf, params, radius, trials } => {
            let c = load_conf(run, conf)?;
            let [a, b, cc, d] = four(params, "--params")?;
            let p = WebParams::new(c.n(), a, b, cc, d)?;
            let rep = webs::conjecture_check(&p, &c, *radius, *trials, run.seed)?;
            let doc = json!({
                "label": webs::CONJECTURE_LABEL,
                "params": [a, b, cc, d],
                "lhs": rep.lhs.to_string(),
                "rhs": rep.rhs.to_string(),
                "radius": rep.radius,
                "trials": rep.trials,
                "ball_size": rep.ball_size,
                "lhs_le_rhs": rep.lhs_le_rhs,
                "agree": rep.agree,
            });
            Ok(Report::ok(format!("{rep}\n"), doc))
        }
        Check::OracleSample { conf, indices, trials } => {
            let c = load_conf(run, conf)?;
            let (_, cert) = invariants::f_t_with(indices, &c, run.seed)?;
            let sampled = oracle::sample_a(&cert.inputs, *trials, run.seed)?;
            let passed = sampled == cert.optimum;
            let text = format!("witness optimum: {}\nsampled minimum: {sampled}\nagree: {passed}\n", cert.optimum);
            Ok(Report {
                text,
                json: json!({ "witness": cert.optimum, "sampled": sampled, "trials": trials, "agree": passed }),
                passed,
            })
        }
        Check::OracleMetric { conf, indices, radius, dual } => {
            let c = load_conf(run, conf)?;
            let (value, point) = if *dual {
                let (v, cert) = invariants::dual_f_t(indices, &c)?;
                (v, cert.lattice.dual())
            } else {
                let (v, cert) = invariants::f_t_with(indices, &c, run.seed)?;
                (v, cert.lattice)
            };
            let brute = oracle::metric_min_brute(indices, &c, *radius)?;
            let inside = oracle::in_ball_up_to_scale(&c.lattice_sum()?, &point, *radius)?;
            let passed = brute.value >= value.0 && (!inside || brute.value == value.0);
            let text = format!(
                "invariant: {value}\nball minimum: {}\nball size: {}\nwitness in ball: {inside}\nconsistent: {passed}\n",
                brute.value, brute.count
            );
            let doc = json!({
                "invariant": value.to_string(),
                "ball_minimum": brute.value.to_string(),
                "ball_size": brute.count,
                "radius": radius,
                "witness_in_ball": inside,
                "consistent": passed,
            });
            Ok(Report { text, json: doc, passed })
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let rc = &cli.run;
    match &cli.command {
        Command::Distance { a, b } => distance(rc, a, b),
        Command::Invariant {
            conf,
            indices,
            dual,
            certificate,
        } => invariant(rc, conf, indices, *dual, *certificate),
        Command::Assignment { cost } => assignment(rc, cost),
        Command::Check { check: c } => check(rc, c),
        Command::Verify { certificate } => verify(certificate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            match cli.run.output {
                Output::Text => print!("{}", rep.text),
                Output::Json => println!("{}", serde_json::to_string_pretty(&rep.json).expect("reports are JSON")),
            }
            ExitCode::from(if rep.passed { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
