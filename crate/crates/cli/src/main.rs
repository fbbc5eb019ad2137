//! Command-line front end: state specs in, deterministic CSV/JSON out.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

use entroq::states::parse_angle;
use entroq::{
    audit_random_batch, correlation_report, detect_crossing, find_werner_threshold_with_tolerance,
    purify, sweep_w_family, uncertainty_report, BuiltState, ClaimId, CorrelationReport, Error,
    ObservablePair, StateSpec, SweepPoint, ToleranceTier,
};
use output::{Document, Footer, Metadata, Record, Value};

const EXIT_AUDIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DIMENSION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "entroq",
    about = "Quantum-memory-assisted uncertainty bounds, correlation measures, and claim audits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the run-metadata header so identical runs are byte-identical.
    #[arg(long, global = true)]
    no_metadata: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the memory-assisted uncertainty bound on a bipartite state.
    /// Args: a state spec (family=... plus params) and optionally obs=Z,X.
    Bound { args: Vec<String> },
    /// Sweep theta/pi over the generalized W family at fixed phi.
    /// Args: phi=0.25pi n=512.
    Sweep { args: Vec<String> },
    /// Run the claim audit suite on seeded random states.
    /// Args: n=1000 seed=42 claims=EQ16,EQ9 (default: every claim).
    Audit { args: Vec<String> },
    /// Locate the Werner mixing weight where S(A|B) crosses zero.
    /// Args: tol=1e-6.
    WernerThreshold { args: Vec<String> },
    /// Emit the full correlation bundle for a (purified) state spec.
    /// Args: a state spec.
    Report { args: Vec<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command_line = render_command_line(&cli.command);
    match run(&cli, command_line) {
        Ok((document, exit)) => {
            let text = match cli.format {
                Format::Csv => document.to_csv(),
                Format::Json => document.to_json(),
            };
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_DIMENSION);
                }
            } else {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(text.as_bytes()).is_err() {
                    return ExitCode::from(EXIT_DIMENSION);
                }
            }
            ExitCode::from(exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::SpecParse(_) | Error::ParamOutOfRange(_) => EXIT_PARSE,
        _ => EXIT_DIMENSION,
    }
}

fn render_command_line(command: &Command) -> String {
    let (name, args) = match command {
        Command::Bound { args } => ("bound", args),
        Command::Sweep { args } => ("sweep", args),
        Command::Audit { args } => ("audit", args),
        Command::WernerThreshold { args } => ("werner-threshold", args),
        Command::Report { args } => ("report", args),
    };
    let mut line = name.to_string();
    for arg in args {
        line.push(' ');
        line.push_str(arg);
    }
    line
}

fn metadata(cli: &Cli, command: String, seed: Option<u64>) -> Option<Metadata> {
    if cli.no_metadata {
        return None;
    }
    Some(Metadata {
        command,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    })
}

fn run(cli: &Cli, command_line: String) -> Result<(Document, u8), Error> {
    match &cli.command {
        Command::Bound { args } => {
            let (spec, extras) = split_state_spec(args, &["obs"])?;
            let obs = parse_observables(extras.get("obs").map(String::as_str))?;
            let rho = spec.realize()?.density();
            let report = uncertainty_report(&rho, &obs)?;
            let record: Record = vec![
                ("s_q_given_b", Value::Float(report.s_q_given_b)),
                ("s_r_given_b", Value::Float(report.s_r_given_b)),
                ("lhs", Value::Float(report.lhs)),
                ("ub", Value::Float(report.ub)),
                ("s_a_given_b", Value::Float(report.s_a_given_b)),
                ("slack", Value::Float(report.slack)),
            ];
            Ok((
                Document {
                    metadata: metadata(cli, command_line, None),
                    records: vec![record],
                    footer: Footer::None,
                },
                0,
            ))
        }
        Command::Sweep { args } => {
            let kv = KvArgs::parse(args, &["phi", "n"])?;
            let phi = kv.angle("phi")?.unwrap_or(0.25 * std::f64::consts::PI);
            let n = kv.int("n")?.unwrap_or(512) as usize;
            let points = sweep_w_family(phi, n)?;
            let crossing = detect_crossing(&points);
            let records: Vec<Record> = points.iter().map(sweep_record).collect();
            Ok((
                Document {
                    metadata: metadata(cli, command_line, None),
                    records,
                    footer: Footer::Crossing(crossing),
                },
                0,
            ))
        }
        Command::Audit { args } => {
            let kv = KvArgs::parse(args, &["n", "seed", "claims"])?;
            let n = kv.int("n")?.unwrap_or(100) as usize;
            let seed = kv.int("seed")?.unwrap_or(42);
            let claims = match kv.text("claims") {
                None => ClaimId::ALL.to_vec(),
                Some(list) => list
                    .split(',')
                    .map(ClaimId::from_str)
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let mut records = Vec::with_capacity(claims.len());
            let mut failures = 0usize;
            for claim in claims {
                let summary = audit_random_batch(claim, n, &claim.default_dims(), seed)?;
                failures += summary.failures;
                records.push(vec![
                    ("claim", Value::Text(summary.claim.name().to_string())),
                    ("n", Value::Int(summary.n as u64)),
                    ("passes", Value::Int(summary.passes as u64)),
                    ("failures", Value::Int(summary.failures as u64)),
                    ("not_applicable", Value::Int(summary.not_applicable as u64)),
                    ("worst_residual", Value::OptFloat(summary.worst_residual)),
                    (
                        "worst_spec",
                        Value::Text(
                            summary
                                .worst_spec
                                .map(|s| s.to_string())
                                .unwrap_or_default(),
                        ),
                    ),
                ]);
            }
            let exit = if failures == 0 { 0 } else { EXIT_AUDIT_FAILURE };
            Ok((
                Document {
                    metadata: metadata(cli, command_line, Some(seed)),
                    records,
                    footer: Footer::None,
                },
                exit,
            ))
        }
        Command::WernerThreshold { args } => {
            let kv = KvArgs::parse(args, &["tol"])?;
            let tol = kv.float("tol")?.unwrap_or(1e-6);
            if !(tol > 0.0) {
                return Err(Error::ParamOutOfRange(format!(
                    "tolerance must be positive, got {tol}"
                )));
            }
            let found = find_werner_threshold_with_tolerance(tol);
            let record: Record = vec![
                ("r_star", Value::Float(found.r_star)),
                ("residual", Value::Float(found.residual)),
                ("iterations", Value::Int(found.iterations as u64)),
            ];
            Ok((
                Document {
                    metadata: metadata(cli, command_line, None),
                    records: vec![record],
                    footer: Footer::None,
                },
                0,
            ))
        }
        Command::Report { args } => {
            let (spec, _) = split_state_spec(args, &[])?;
            let built = spec.realize()?;
            let psi = match &built {
                BuiltState::Pure(psi) if psi.space().subsystem_count() == 3 => psi.clone(),
                _ => purify(&built.density()),
            };
            let report = correlation_report(&psi)?;
            Ok((
                Document {
                    metadata: metadata(cli, command_line, None),
                    records: vec![report_record(&report)],
                    footer: Footer::None,
                },
                0,
            ))
        }
    }
}

fn sweep_record(p: &SweepPoint) -> Record {
    vec![
        ("theta_over_pi", Value::Float(p.theta_over_pi)),
        ("s_a_given_b", Value::Float(p.s_a_given_b)),
        ("d_b_given_a", Value::Float(p.d_b_given_a)),
        ("d_c_given_a", Value::Float(p.d_c_given_a)),
        ("ddb", Value::Float(p.derivative_d_b)),
        ("ddc", Value::Float(p.derivative_d_c)),
    ]
}

fn report_record(report: &CorrelationReport) -> Record {
    let tier = |t: ToleranceTier| Value::Text(t.label().to_string());
    vec![
        ("j", Value::Float(report.j)),
        ("d", Value::Float(report.d)),
        ("e_f", Value::OptFloat(report.e_f)),
        ("e_a", Value::Float(report.e_a)),
        ("e_u", Value::Float(report.e_u)),
        ("delta_u", Value::Float(report.delta_u)),
        ("j_tier", tier(ToleranceTier::Optimizer)),
        ("d_tier", tier(ToleranceTier::Optimizer)),
        ("e_f_tier", tier(ToleranceTier::Exact)),
        ("e_a_tier", tier(ToleranceTier::Optimizer)),
        ("e_u_tier", tier(ToleranceTier::Optimizer)),
        ("delta_u_tier", tier(ToleranceTier::Optimizer)),
        ("j_theta", Value::Float(report.j_basis.theta())),
        ("j_phi", Value::Float(report.j_basis.phi())),
        ("e_a_theta", Value::Float(report.e_a_basis.theta())),
        ("e_a_phi", Value::Float(report.e_a_basis.phi())),
        ("delta_u_theta", Value::Float(report.delta_u_basis.theta())),
        ("delta_u_phi", Value::Float(report.delta_u_basis.phi())),
    ]
}

/// Key=value argument bag restricted to an allowed key set.
struct KvArgs {
    pairs: Vec<(String, String)>,
}

impl KvArgs {
    fn parse(tokens: &[String], allowed: &[&str]) -> Result<Self, Error> {
        let mut pairs = Vec::new();
        for token in tokens {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::SpecParse(format!("expected key=value, got {token:?}")))?;
            if !allowed.contains(&key) {
                return Err(Error::SpecParse(format!(
                    "unknown flag {key:?}; expected one of {allowed:?}"
                )));
            }
            pairs.push((key.to_string(), value.to_string()));
        }
        Ok(Self { pairs })
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn int(&self, key: &str) -> Result<Option<u64>, Error> {
        self.text(key)
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    Error::SpecParse(format!("expected an integer for {key}, got {v:?}"))
                })
            })
            .transpose()
    }

    fn float(&self, key: &str) -> Result<Option<f64>, Error> {
        self.text(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    Error::SpecParse(format!("expected a number for {key}, got {v:?}"))
                })
            })
            .transpose()
    }

    fn angle(&self, key: &str) -> Result<Option<f64>, Error> {
        self.text(key).map(parse_angle).transpose()
    }
}

/// Split tokens into a state spec and a set of extra keys (e.g. obs=Z,X).
fn split_state_spec(
    tokens: &[String],
    extra_keys: &[&str],
) -> Result<(StateSpec, std::collections::BTreeMap<String, String>), Error> {
    let mut extras = std::collections::BTreeMap::new();
    let mut spec_tokens = Vec::new();
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::SpecParse(format!("expected key=value, got {token:?}")))?;
        if extra_keys.contains(&key) {
            extras.insert(key.to_string(), value.to_string());
        } else {
            spec_tokens.push(token.clone());
        }
    }
    let spec = StateSpec::from_str(&spec_tokens.join(" "))?;
    Ok((spec, extras))
}

fn parse_observables(text: Option<&str>) -> Result<ObservablePair, Error> {
    match text {
        None => Ok(ObservablePair::pauli_zx()),
        Some(pair) => {
            let (q, r) = pair.split_once(',').ok_or_else(|| {
                Error::SpecParse(format!("expected obs=Q,R (e.g. obs=Z,X), got {pair:?}"))
            })?;
            ObservablePair::from_names(q.trim(), r.trim())
        }
    }
}
