//! `rankcoset`: parameter computation, security reports, coset
//! encode/decode, adversarial simulation, and fixture generation.
//!
//! Exit codes: 0 success, 2 input error, 3 budget exceeded, 4 theorem
//! violation (oracle disagreement — must never fire).
//!
//! All reports go to stdout and are byte-deterministic for a fixed
//! invocation and seed; timing diagnostics go to stderr.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use rankcoset::coset::NestedPair;
use rankcoset::fields::ExtElem;
use rankcoset::fixtures;
use rankcoset::io::{DistSpec, NetSpec, PairSpec};
use rankcoset::linalg::{enumerate_gamma, MatrixFq};
use rankcoset::netcode::{self, DecodeOutcome, ErrorEvent};
use rankcoset::rparams;
use rankcoset::security::{self, ENTROPY_TOL};
use rankcoset::{Error as CoreError, DEFAULT_BUDGET_OPS};

const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_THEOREM: u8 = 4;

#[derive(Parser)]
#[command(name = "rankcoset", version, about = "Rank-metric nested coset coding toolkit")]
struct Cli {
    /// Seed for every randomized step; identical seeds give identical bytes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on scan work (subspaces visited / codewords enumerated).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET_OPS)]
    budget_ops: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// RDIP/RGRW profiles of a pair (dual-pair profiles first, primal
    /// alongside) with the Singleton-type comparison.
    Params {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Security report: equivocation, leakage thresholds, strong security.
    Security {
        #[arg(long)]
        pair: PathBuf,
        /// Largest number of observed links to report (default n).
        #[arg(long)]
        mu_max: Option<usize>,
        /// Also compute the strong-security order Ω.
        #[arg(long)]
        omega: bool,
        /// Cross-check the equivocation formula against the exhaustive
        /// entropy oracle; disagreement is a theorem violation (exit 4).
        #[arg(long)]
        oracle: bool,
        /// Message distribution file for the distribution-robustness check.
        #[arg(long)]
        dist: Option<PathBuf>,
    },
    /// Encode a message with seeded randomness.
    Encode {
        #[arg(long)]
        pair: PathBuf,
        /// Message as a JSON list of coefficient arrays, e.g. [[1,0],[0,1]].
        #[arg(long)]
        message: String,
    },
    /// Recover the message from an error-free codeword.
    Decode {
        #[arg(long)]
        pair: PathBuf,
        /// Codeword as a JSON list of coefficient arrays.
        #[arg(long)]
        x: String,
    },
    /// Decode trials against errors and rank deficiency: seeded sampling
    /// on a fixed network, or an exhaustive sweep over transfer matrices.
    Simulate {
        #[arg(long)]
        pair: PathBuf,
        /// Network spec with a fixed transfer matrix (sampled trials).
        #[arg(long, conflicts_with = "sweep_a")]
        net: Option<PathBuf>,
        /// Exhaustively sweep every A with rank >= n - rho.
        #[arg(long)]
        sweep_a: bool,
        /// Injected error packets per trial.
        #[arg(long, default_value_t = 0)]
        t: usize,
        /// Tolerated rank deficiency (sweep mode).
        #[arg(long, default_value_t = 0)]
        rho: usize,
        /// Number of sampled trials (network mode).
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Sink incoming links N for sweep mode (default n).
        #[arg(long)]
        incoming: Option<usize>,
    },
    /// Write the pair/network specs of a named built-in instance.
    Fixtures {
        #[arg(long)]
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

/// Everything a report needs to be reproduced.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    inputs: BTreeMap<String, String>,
    seed: u64,
    budget_ops: u64,
    version: &'static str,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }

    fn theorem(message: impl Into<String>) -> Self {
        CliError { code: EXIT_THEOREM, message: message.into() }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::Budget { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(format!("json: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(format!("io: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = run(&cli);
    eprintln!("elapsed_ms={}", started.elapsed().as_millis());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

struct Manifest {
    command: String,
    inputs: BTreeMap<String, String>,
    seed: u64,
    budget_ops: u64,
}

impl Manifest {
    fn new(cli: &Cli, command: &str) -> Self {
        Manifest {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            seed: cli.seed,
            budget_ops: cli.budget_ops,
        }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        self.inputs
            .insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }

    fn finish(self) -> RunManifest {
        RunManifest {
            command: self.command,
            inputs: self.inputs,
            seed: self.seed,
            budget_ops: self.budget_ops,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

fn load_pair(manifest: &mut Manifest, path: &Path) -> Result<NestedPair, CliError> {
    let bytes = manifest.read(path)?;
    let spec: PairSpec = serde_json::from_slice(&bytes)?;
    Ok(spec.to_pair()?)
}

fn parse_inline_vector(
    pair: &NestedPair,
    text: &str,
    expected_len: usize,
    what: &str,
) -> Result<Vec<ExtElem>, CliError> {
    let lists: Vec<Vec<u64>> = serde_json::from_str(text)?;
    if lists.len() != expected_len {
        return Err(CliError::input(format!(
            "{what} must have length {expected_len}, got {}",
            lists.len()
        )));
    }
    Ok(rankcoset::io::parse_vector(pair.field(), &lists)?)
}

fn emit<T: Serialize>(value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    print!("{text}");
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Params { pair } => cmd_params(cli, pair),
        Command::Security { pair, mu_max, omega, oracle, dist } => {
            cmd_security(cli, pair, *mu_max, *omega, *oracle, dist.as_deref())
        }
        Command::Encode { pair, message } => cmd_encode(cli, pair, message),
        Command::Decode { pair, x } => cmd_decode(cli, pair, x),
        Command::Simulate { pair, net, sweep_a, t, rho, trials, incoming } => {
            cmd_simulate(cli, pair, net.as_deref(), *sweep_a, *t, *rho, *trials, *incoming)
        }
        Command::Fixtures { name, out_dir } => cmd_fixtures(cli, name, out_dir),
    }
}

#[derive(Serialize)]
struct RationalOut {
    num: u64,
    den: u64,
}

#[derive(Serialize)]
struct ProfileReport {
    rdip: Vec<usize>,
    rgrw: Vec<usize>,
    singleton: Vec<RationalOut>,
    mrd_equality: bool,
}

#[derive(Serialize)]
struct ParamsReport {
    manifest: RunManifest,
    /// Dual-pair (C2⊥, C1⊥) profiles: the security-facing parameters.
    rdip: Vec<usize>,
    rgrw: Vec<usize>,
    singleton: Vec<RationalOut>,
    mrd_equality: bool,
    /// Primal (C1, C2) profiles: the error-correction-facing parameters.
    primal: ProfileReport,
}

fn profile_report(
    pair: &rankcoset::codes::NestedCodes,
    budget_ops: u64,
) -> Result<ProfileReport, CliError> {
    let rdip = rparams::rdip_profile(pair, budget_ops)?;
    let rgrw = rparams::rgrw_profile(pair, budget_ops)?;
    let singleton: Vec<RationalOut> = (1..=pair.quotient_dim())
        .map(|i| {
            let b = rparams::singleton_bound(pair, i);
            RationalOut { num: b.num() as u64, den: b.den() as u64 }
        })
        .collect();
    let mrd_equality = rparams::singleton_equality_all(pair, budget_ops)?;
    Ok(ProfileReport {
        rdip: rdip.values().to_vec(),
        rgrw: rgrw.values().to_vec(),
        singleton,
        mrd_equality,
    })
}

fn cmd_params(cli: &Cli, pair_path: &Path) -> Result<(), CliError> {
    let mut manifest = Manifest::new(cli, "params");
    let pair = load_pair(&mut manifest, pair_path)?;
    let dual = profile_report(&pair.codes().dual_pair(), cli.budget_ops)?;
    let primal = profile_report(pair.codes(), cli.budget_ops)?;
    if cli.format == Format::Csv {
        let mut out = String::from("table,index,value\n");
        for (name, values) in [
            ("rdip", &dual.rdip),
            ("rgrw", &dual.rgrw),
            ("rdip_primal", &primal.rdip),
            ("rgrw_primal", &primal.rgrw),
        ] {
            for (i, v) in values.iter().enumerate() {
                out.push_str(&format!("{name},{i},{v}\n"));
            }
        }
        print!("{out}");
        return Ok(());
    }
    let report = ParamsReport {
        manifest: manifest.finish(),
        rdip: dual.rdip,
        rgrw: dual.rgrw,
        singleton: dual.singleton,
        mrd_equality: dual.mrd_equality,
        primal,
    };
    emit(&report)
}

#[derive(Serialize)]
struct SecurityOut {
    manifest: RunManifest,
    theta: Vec<usize>,
    max_leakage: Vec<usize>,
    leakage_thresholds: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    omega_capped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_theta: Option<Vec<f64>>,
    /// Largest |I(S; BXᵀ)| over observation spaces below the first
    /// leakage threshold, under the supplied distribution.
    #[serde(skip_serializing_if = "Option::is_none")]
    dist_max_mi_below_threshold: Option<f64>,
}

fn cmd_security(
    cli: &Cli,
    pair_path: &Path,
    mu_max: Option<usize>,
    omega: bool,
    oracle: bool,
    dist: Option<&Path>,
) -> Result<(), CliError> {
    let mut manifest = Manifest::new(cli, "security");
    let pair = load_pair(&mut manifest, pair_path)?;
    let mu_max = mu_max.unwrap_or(pair.length()).min(pair.length());
    let report = security::security_report(&pair, mu_max, omega, cli.budget_ops)?;
    let oracle_theta = if oracle {
        let mut values = Vec::with_capacity(mu_max + 1);
        for mu in 0..=mu_max {
            let h = security::equivocation_oracle(&pair, mu, cli.budget_ops)?;
            let formula = report.theta[mu] as f64;
            if (h - formula).abs() > ENTROPY_TOL {
                return Err(CliError::theorem(format!(
                    "equivocation oracle disagrees at mu = {mu}: oracle {h}, formula {formula}"
                )));
            }
            values.push(h);
        }
        Some(values)
    } else {
        None
    };
    let dist_max_mi = match dist {
        Some(path) => {
            let bytes = manifest.read(path)?;
            let spec: DistSpec = serde_json::from_slice(&bytes)?;
            let dist = spec.to_dist(&pair)?;
            let threshold = security::leakage_threshold(&pair, 1, cli.budget_ops)?;
            let z: Vec<usize> = (0..pair.message_len()).collect();
            let mut worst: f64 = 0.0;
            for dim in 0..threshold {
                for v in enumerate_gamma(pair.field().q(), pair.length(), dim) {
                    let mi =
                        security::empirical_mi(&pair, &z, v.basis(), &dist, cli.budget_ops)?;
                    worst = worst.max(mi.abs());
                }
            }
            Some(worst)
        }
        None => None,
    };
    if cli.format == Format::Csv {
        let mut out = String::from("mu,theta,max_leakage\n");
        for mu in 0..report.theta.len() {
            out.push_str(&format!("{mu},{},{}\n", report.theta[mu], report.max_leakage[mu]));
        }
        print!("{out}");
        return Ok(());
    }
    emit(&SecurityOut {
        manifest: manifest.finish(),
        theta: report.theta,
        max_leakage: report.max_leakage,
        leakage_thresholds: report.leakage_thresholds,
        omega: report.omega,
        omega_capped: report.omega_capped,
        oracle_theta,
        dist_max_mi_below_threshold: dist_max_mi,
    })
}

#[derive(Serialize)]
struct EncodeOut {
    manifest: RunManifest,
    x: Vec<Vec<u64>>,
}

fn cmd_encode(cli: &Cli, pair_path: &Path, message: &str) -> Result<(), CliError> {
    let mut manifest = Manifest::new(cli, "encode");
    let pair = load_pair(&mut manifest, pair_path)?;
    let s = parse_inline_vector(&pair, message, pair.message_len(), "message")?;
    let x = pair.encode(&s, cli.seed)?;
    emit(&EncodeOut {
        manifest: manifest.finish(),
        x: rankcoset::io::vector_to_lists(&x),
    })
}

#[derive(Serialize)]
struct DecodeOut {
    manifest: RunManifest,
    s: Vec<Vec<u64>>,
}

fn cmd_decode(cli: &Cli, pair_path: &Path, x_text: &str) -> Result<(), CliError> {
    let mut manifest = Manifest::new(cli, "decode");
    let pair = load_pair(&mut manifest, pair_path)?;
    let x = parse_inline_vector(&pair, x_text, pair.length(), "codeword")?;
    let s = pair.decode_clean(&x)?;
    emit(&DecodeOut {
        manifest: manifest.finish(),
        s: rankcoset::io::vector_to_lists(&s),
    })
}

#[derive(Serialize)]
struct TrialLine {
    trial: u64,
    s: Vec<Vec<u64>>,
    outcome: &'static str,
}

#[derive(Serialize)]
struct SimulateOut {
    manifest: RunManifest,
    trials: u64,
    successes: u64,
    ambiguous: u64,
    failures: u64,
    capability: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_witness: Option<netcode::SweepWitness>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cli: &Cli,
    pair_path: &Path,
    net: Option<&Path>,
    sweep_a: bool,
    t: usize,
    rho: usize,
    trials: u64,
    incoming: Option<usize>,
) -> Result<(), CliError> {
    let mut manifest = Manifest::new(cli, "simulate");
    let pair = load_pair(&mut manifest, pair_path)?;
    if sweep_a {
        let incoming = incoming.unwrap_or(pair.length());
        let summary = netcode::exhaustive_decode_sweep(
            &pair,
            incoming,
            t,
            rho,
            cli.budget_ops,
            false,
        )?;
        return emit(&SimulateOut {
            manifest: manifest.finish(),
            trials: summary.trials,
            successes: summary.successes,
            ambiguous: summary.ambiguous,
            failures: summary.failures,
            capability: summary.capability,
            first_witness: summary.first_witness,
        });
    }
    let Some(net_path) = net else {
        return Err(CliError::input("simulate needs --net FILE or --sweep-a"));
    };
    let bytes = manifest.read(net_path)?;
    let net_spec: NetSpec = serde_json::from_slice(&bytes)?;
    let network = net_spec.to_network(pair.field().p())?;
    if network.n() != pair.length() {
        return Err(CliError::input("network and pair disagree on n"));
    }
    let field = pair.field().clone();
    let a = network.transfer().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut summary = SimulateOut {
        manifest: manifest.finish(),
        trials: 0,
        successes: 0,
        ambiguous: 0,
        failures: 0,
        capability: netcode::correction_capability(&pair, cli.budget_ops)?,
        first_witness: None,
    };
    let mut lines = String::new();
    for trial in 0..trials {
        let random_elem = |rng: &mut ChaCha8Rng| {
            let coeffs: Vec<u64> =
                (0..field.m()).map(|_| rng.random_range(0..field.p())).collect();
            field.elem(&coeffs).expect("in range")
        };
        let s: Vec<ExtElem> = (0..pair.message_len()).map(|_| random_elem(&mut rng)).collect();
        let r: Vec<ExtElem> =
            (0..pair.codes().c2().dim()).map(|_| random_elem(&mut rng)).collect();
        let x = pair.encode_with_r(&s, &r)?;
        let mut d = MatrixFq::zeros(field.p(), network.incoming(), t);
        for row in 0..network.incoming() {
            for col in 0..t {
                d.set(row, col, rng.random_range(0..field.p()));
            }
        }
        let z: Vec<ExtElem> = (0..t).map(|_| random_elem(&mut rng)).collect();
        let err = ErrorEvent::new(d, z)?;
        let y = netcode::transmit(&field, &a, &x, Some(&err));
        let outcome = match netcode::md_decode(&pair, &a, &y, cli.budget_ops)? {
            DecodeOutcome::Decoded(got) if got == s => {
                summary.successes += 1;
                "success"
            }
            DecodeOutcome::Decoded(_) => {
                summary.failures += 1;
                "failure"
            }
            DecodeOutcome::Ambiguous(_) => {
                summary.ambiguous += 1;
                "ambiguous"
            }
        };
        summary.trials += 1;
        if cli.format == Format::Csv {
            lines.push_str(&format!("{trial},{outcome}\n"));
        } else {
            let line = TrialLine {
                trial,
                s: rankcoset::io::vector_to_lists(&s),
                outcome,
            };
            lines.push_str(&serde_json::to_string(&line)?);
            lines.push('\n');
        }
    }
    if cli.format == Format::Csv {
        print!("trial,outcome\n{lines}");
        println!(
            "summary,trials={},successes={},ambiguous={},failures={},capability={}",
            summary.trials,
            summary.successes,
            summary.ambiguous,
            summary.failures,
            summary.capability
        );
        return Ok(());
    }
    print!("{lines}");
    emit(&summary)
}

#[derive(Serialize)]
struct FixturesOut {
    manifest: RunManifest,
    written: Vec<String>,
    sha256: BTreeMap<String, String>,
}

fn cmd_fixtures(cli: &Cli, name: &str, out_dir: &Path) -> Result<(), CliError> {
    let manifest = Manifest::new(cli, "fixtures");
    let fix = fixtures::fixture(name)?;
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let mut hashes = BTreeMap::new();
    let mut write = |path: PathBuf, text: String| -> Result<(), CliError> {
        std::fs::write(&path, &text)?;
        let display = path.display().to_string();
        hashes.insert(display.clone(), sha256_hex(text.as_bytes()));
        written.push(display);
        Ok(())
    };
    let mut pair_text = serde_json::to_string(&fix.pair_spec())?;
    pair_text.push('\n');
    write(out_dir.join(format!("{name}.pair.json")), pair_text)?;
    if let Some(net) = &fix.net_spec {
        let mut net_text = serde_json::to_string(net)?;
        net_text.push('\n');
        write(out_dir.join(format!("{name}.net.json")), net_text)?;
    }
    emit(&FixturesOut { manifest: manifest.finish(), written, sha256: hashes })
}
