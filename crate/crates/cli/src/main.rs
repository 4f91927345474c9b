//! `qprog`: resource estimation and desk-scale simulation for programming
//! low-depth brickwork quantum circuits.
//!
//! Every run prints its results to stdout (JSON for single values, CSV files
//! for sweeps) and a run manifest to stderr. Stochastic subcommands take an
//! explicit `--seed`; identical (argv, seed) pairs produce byte-identical
//! stdout. `QPROG_THREADS` caps internal parallelism without changing any
//! output. Exit codes: 0 success, 1 validation error, 2 numeric failure.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qprog_core::bounds::{self, DesignExtras, DesignRow, GateCostConstants};
use qprog_core::circuit::{self};
use qprog_core::lightcone::{self, ConeStats, TradeoffConstants};
use qprog_core::matrixcore::{self, CMat};
use qprog_core::mosim::{self, MeasureEnsemble, ProbeConfig};
use qprog_core::processor;
use qprog_core::repr;

mod verify;

#[derive(Debug)]
enum CliError {
    Validation(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numeric(m) => m,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

macro_rules! validation_from {
    ($($ty:ty),+) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Validation(e.to_string())
            }
        }
    )+};
}

validation_from!(
    bounds::BoundsError,
    circuit::CircuitError,
    repr::ReprError,
    mosim::MosimError,
    processor::ProcessorError,
    lightcone::LightconeError
);

impl From<matrixcore::MatrixError> for CliError {
    fn from(e: matrixcore::MatrixError) -> Self {
        match e {
            matrixcore::MatrixError::Numerical(m) => CliError::Numeric(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io error: {e}"))
    }
}

#[derive(Parser)]
#[command(name = "qprog", version, about = "Program-cost estimation for low-depth brickwork circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form cost bounds.
    Bounds {
        #[command(subcommand)]
        sub: BoundsCmd,
    },
    /// Partition and dimension combinatorics.
    Repr {
        #[command(subcommand)]
        sub: ReprCmd,
    },
    /// Light-cone decomposition and trade-offs.
    Lightcone {
        #[command(subcommand)]
        sub: LightconeCmd,
    },
    /// Program a circuit against per-gate epsilon-nets.
    Program(ProgramArgs),
    /// Measure-and-operate channel simulation.
    Mosim {
        #[command(subcommand)]
        sub: MosimCmd,
    },
    /// Run a property suite.
    Verify {
        /// Suite: all, repr, bounds, matrixcore, circuit, lightcone,
        /// processor, mosim.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Base seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// CSV parameter sweeps.
    Sweep {
        #[command(subcommand)]
        sub: SweepCmd,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Brickwork program-cost upper bound (bits).
    Upper {
        #[arg(long)]
        n_qubits: u64,
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long)]
        gates: u64,
        #[arg(long)]
        eps: f64,
    },
    /// Worst-case program-cost lower bound (bits). Omitting --varpi
    /// maximizes over it.
    Lower {
        #[arg(long)]
        n_qubits: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        varpi: Option<f64>,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Scaling sweep over N = 2^from .. 2^to (CSV).
    Sweep {
        #[arg(long, default_value_t = 6)]
        from_exp: u32,
        #[arg(long, default_value_t = 20)]
        to_exp: u32,
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        csv: std::path::PathBuf,
    },
    /// Depth formula of a published design construction.
    DesignDepth {
        #[arg(long)]
        row: String,
        #[arg(long)]
        n_qubits: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long)]
        lattice_dim: Option<f64>,
    },
    /// Measure-and-operate gate-cost model.
    GateCost {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        copies: u64,
        #[arg(long)]
        zeta: f64,
        #[arg(long)]
        tau: f64,
    },
    /// Retrieval error budget.
    ErrorBudget {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        zeta: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        delta: f64,
    },
}

#[derive(Subcommand)]
enum ReprCmd {
    /// Program dimension C(n + d^2 - 1, d^2 - 1).
    Dn {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
    },
    /// Exhaustively check the squared-dimension identity.
    CheckCauchy {
        #[arg(long, default_value_t = 4)]
        max_d: usize,
        #[arg(long, default_value_t = 8)]
        max_n: u64,
    },
}

#[derive(Subcommand)]
enum LightconeCmd {
    /// Decompose a circuit into light-cones of window depth W.
    Decompose {
        #[arg(long)]
        circuit: std::path::PathBuf,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Replay the decomposition densely (N <= 10) and report the gap.
        #[arg(long, default_value_t = false)]
        verify: bool,
    },
    /// Cost trade-off between gate-wise and light-cone programming.
    Tradeoff(TradeoffArgs),
}

#[derive(Args)]
struct TradeoffArgs {
    /// generic or structured.
    #[arg(long)]
    mode: String,
    #[arg(long)]
    n_qubits: u64,
    #[arg(long)]
    depth: Option<u64>,
    #[arg(long)]
    w: Option<u64>,
    #[arg(long)]
    eps: f64,
    /// Exponent constant c in 2^(cW) (generic mode).
    #[arg(long, default_value_t = 1.0)]
    cone_exponent: f64,
    /// Structured mode: number of cones.
    #[arg(long)]
    cones: Option<u64>,
    /// Structured mode: distinct supports per cone.
    #[arg(long)]
    t_per_cone: Option<u64>,
    /// Structured mode: cone width in qubits.
    #[arg(long)]
    cone_width: Option<u64>,
    /// Structured mode: gates per cone.
    #[arg(long)]
    gates_per_cone: Option<u64>,
    /// Structured mode: total gate count.
    #[arg(long)]
    gates: Option<u64>,
    /// Structured mode: primitive locality k.
    #[arg(long, default_value_t = 2)]
    k: u64,
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ProgramArgs {
    #[arg(long)]
    circuit: std::path::PathBuf,
    #[arg(long)]
    eps: f64,
    /// Write the full per-gate report here.
    #[arg(long)]
    report: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum MosimCmd {
    /// Depolarizing coefficient via the character route.
    EstimateP {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        seed: u64,
        /// Sector weights (defaults to uniform).
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<f64>>,
        /// JSON output (the default; accepted for compatibility).
        #[arg(long, default_value_t = true)]
        json: bool,
    },
    /// Dense channel simulation with Choi accumulation.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        seed: u64,
        /// JSON output (the default; accepted for compatibility).
        #[arg(long, default_value_t = true)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Lower/upper scaling sweep (same as `bounds sweep`).
    Scaling {
        #[arg(long, default_value_t = 6)]
        from_exp: u32,
        #[arg(long, default_value_t = 20)]
        to_exp: u32,
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        csv: std::path::PathBuf,
    },
    /// Reduced-vs-primitive cost ratio over N (no-saving sweep).
    Tradeoff {
        #[arg(long, default_value_t = 4)]
        from_exp: u32,
        #[arg(long, default_value_t = 20)]
        to_exp: u32,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long)]
        csv: std::path::PathBuf,
    },
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    args: Vec<String>,
    seed: Option<u64>,
    version: &'a str,
    wall_ms: u128,
    output_digest: String,
}

fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    format!("{hash:016x}")
}

fn seed_of(argv: &[String]) -> Option<u64> {
    argv.iter()
        .position(|a| a == "--seed")
        .and_then(|i| argv.get(i + 1))
        .and_then(|s| s.parse().ok())
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli.command);
    let (stdout_payload, code) = match outcome {
        Ok(payload) => (payload, 0),
        Err(err) => {
            eprintln!("error: {}", err.message());
            (String::new(), err.code())
        }
    };
    if !stdout_payload.is_empty() {
        println!("{stdout_payload}");
    }
    let manifest = RunManifest {
        command: argv.get(1).map(String::as_str).unwrap_or(""),
        args: argv.iter().skip(1).cloned().collect(),
        seed: seed_of(&argv),
        version: env!("CARGO_PKG_VERSION"),
        wall_ms: start.elapsed().as_millis(),
        output_digest: fnv1a_hex(stdout_payload.as_bytes()),
    };
    eprintln!("{}", serde_json::to_string(&manifest).expect("manifest serializes"));
    std::process::exit(code);
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn mat_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::Bounds { sub } => run_bounds(sub),
        Command::Repr { sub } => run_repr(sub),
        Command::Lightcone { sub } => run_lightcone(sub),
        Command::Program(args) => run_program(args),
        Command::Mosim { sub } => run_mosim(sub),
        Command::Verify { suite, seed } => verify::run_suite(&suite, seed),
        Command::Sweep { sub } => match sub {
            SweepCmd::Scaling { from_exp, to_exp, kappa, grid, csv } => {
                scaling_sweep(from_exp, to_exp, kappa, grid, &csv)
            }
            SweepCmd::Tradeoff { from_exp, to_exp, eps, csv } => {
                tradeoff_sweep(from_exp, to_exp, eps, &csv)
            }
        },
    }
}

#[derive(Serialize)]
struct ValueReport<T: Serialize> {
    #[serde(flatten)]
    value: T,
    units: &'static str,
}

fn run_bounds(cmd: BoundsCmd) -> Result<String> {
    match cmd {
        BoundsCmd::Upper { n_qubits, k, gates, eps } => {
            let report = bounds::program_cost_upper(n_qubits, k, gates, eps)?;
            Ok(to_json(&ValueReport { value: report, units: "bits" }))
        }
        BoundsCmd::Lower { n_qubits, eps, varpi, kappa, grid } => {
            #[derive(Serialize)]
            struct LowerOut {
                varpi: f64,
                #[serde(flatten)]
                report: bounds::CostReport,
            }
            let (varpi, report) = match varpi {
                Some(v) => (v, bounds::program_cost_lower(n_qubits, eps, v, kappa)?),
                None => bounds::optimize_lower(n_qubits, eps, kappa, grid)?,
            };
            Ok(to_json(&ValueReport { value: LowerOut { varpi, report }, units: "bits" }))
        }
        BoundsCmd::Sweep { from_exp, to_exp, kappa, grid, csv } => {
            scaling_sweep(from_exp, to_exp, kappa, grid, &csv)
        }
        BoundsCmd::DesignDepth { row, n_qubits, t, rho, xi, lattice_dim } => {
            let row: DesignRow = row.parse()?;
            let (depth, valid) =
                bounds::design_depth_bound(row, n_qubits, t, rho, DesignExtras { lattice_dim, xi })?;
            #[derive(Serialize)]
            struct DepthOut {
                row: DesignRow,
                n_qubits: u64,
                t: u64,
                rho: f64,
                depth: f64,
                valid: bool,
                units: &'static str,
            }
            Ok(to_json(&DepthOut { row, n_qubits, t, rho, depth, valid, units: "layers" }))
        }
        BoundsCmd::GateCost { d, copies, zeta, tau } => {
            let est = bounds::mo_gate_complexity(d, copies, zeta, tau, GateCostConstants::default())?;
            Ok(to_json(&ValueReport { value: est, units: "gates" }))
        }
        BoundsCmd::ErrorBudget { eps, zeta, tau, delta } => {
            let budget = bounds::mo_error_budget(eps, zeta, tau, delta)?;
            Ok(to_json(&ValueReport { value: budget, units: "diamond" }))
        }
    }
}

fn run_repr(cmd: ReprCmd) -> Result<String> {
    match cmd {
        ReprCmd::Dn { n, d } => {
            let dn = repr::program_dimension_dn(n, d);
            #[derive(Serialize)]
            struct DnOut {
                n: u64,
                d: u64,
                dn: String,
                log2: f64,
                units: &'static str,
            }
            let log2 = repr::ln_biguint(&dn) / std::f64::consts::LN_2;
            Ok(to_json(&DnOut { n, d, dn: dn.to_string(), log2, units: "dimension" }))
        }
        ReprCmd::CheckCauchy { max_d, max_n } => {
            let mut checks = 0u64;
            for d in 1..=max_d {
                for n in 0..=max_n {
                    let total = num_bigint_total(n, d);
                    let expected = repr::program_dimension_dn(n, d as u64);
                    if total != expected {
                        return Err(CliError::Numeric(format!(
                            "identity failed at d = {d}, n = {n}"
                        )));
                    }
                    checks += 1;
                }
            }
            #[derive(Serialize)]
            struct CauchyOut {
                pairs_checked: u64,
                all_exact: bool,
                units: &'static str,
            }
            Ok(to_json(&CauchyOut { pairs_checked: checks, all_exact: true, units: "count" }))
        }
    }
}

fn num_bigint_total(n: u64, d: usize) -> num_bigint::BigUint {
    let mut total = num_bigint::BigUint::from(0u32);
    for lambda in repr::partitions(n, d) {
        let w = repr::weyl_dimension(&lambda, d).expect("parts bounded by d");
        total += &w * &w;
    }
    total
}

fn run_lightcone(cmd: LightconeCmd) -> Result<String> {
    match cmd {
        LightconeCmd::Decompose { circuit: path, w, out, verify } => {
            let text = std::fs::read_to_string(&path)?;
            let c = circuit::parse_circuit(&text)?;
            let dec = lightcone::decompose(&c, w)?;
            if let Some(out_path) = out {
                std::fs::write(&out_path, to_json(&dec))?;
            }
            #[derive(Serialize)]
            struct DecOut {
                cones: usize,
                forward: usize,
                backward: usize,
                max_width: usize,
                execution_order: Vec<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                unitary_gap: Option<f64>,
                units: &'static str,
            }
            let forward = dec
                .cones
                .iter()
                .filter(|k| matches!(k.kind, lightcone::ConeKind::Forward))
                .count();
            let unitary_gap = if verify {
                Some(lightcone::verify_decomposition(&c, &dec)?.unitary_gap)
            } else {
                None
            };
            Ok(to_json(&DecOut {
                cones: dec.cones.len(),
                forward,
                backward: dec.cones.len() - forward,
                max_width: dec.cones.iter().map(|k| k.width()).max().unwrap_or(0),
                execution_order: dec.execution_order.clone(),
                unitary_gap,
                units: "gates",
            }))
        }
        LightconeCmd::Tradeoff(args) => run_tradeoff(args),
    }
}

fn run_tradeoff(args: TradeoffArgs) -> Result<String> {
    let report = match args.mode.as_str() {
        "generic" => {
            let depth = args.depth.ok_or_else(|| {
                CliError::Validation("generic mode needs --depth".into())
            })?;
            let w = args
                .w
                .ok_or_else(|| CliError::Validation("generic mode needs --w".into()))?;
            lightcone::generic_tradeoff(
                args.n_qubits,
                depth,
                w,
                args.eps,
                TradeoffConstants { cone_growth_exponent: args.cone_exponent, scale: 1.0 },
            )?
        }
        "structured" => {
            let cones = args
                .cones
                .ok_or_else(|| CliError::Validation("structured mode needs --cones".into()))?;
            let t = args.t_per_cone.ok_or_else(|| {
                CliError::Validation("structured mode needs --t-per-cone".into())
            })?;
            let width = args.cone_width.ok_or_else(|| {
                CliError::Validation("structured mode needs --cone-width".into())
            })?;
            let gates_per_cone = args.gates_per_cone.unwrap_or(t);
            let gates = args.gates.unwrap_or(cones * gates_per_cone);
            let stats = vec![
                ConeStats { distinct_supports: t, width, gate_count: gates_per_cone };
                cones as usize
            ];
            lightcone::structured_tradeoff(&stats, gates, args.k, args.n_qubits, args.eps)?
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown trade-off mode `{other}` (generic|structured)"
            )))
        }
    };
    if let Some(csv) = &args.csv {
        let mut text = String::from("primitive_bits,reduced_bits,reduced_is_cheaper\n");
        let _ = writeln!(
            text,
            "{},{},{}",
            report.primitive_bits, report.reduced_bits, report.reduced_is_cheaper
        );
        std::fs::write(csv, text)?;
    }
    Ok(to_json(&ValueReport { value: report, units: "bits" }))
}

fn run_program(args: ProgramArgs) -> Result<String> {
    let text = std::fs::read_to_string(&args.circuit)?;
    let c = circuit::parse_circuit(&text)?;
    let programmed = processor::program_circuit(&c, args.eps)?;
    #[derive(Serialize)]
    struct GateOut {
        layer: usize,
        support: Vec<usize>,
        location_bits: String,
        net_index: u64,
        gap: f64,
    }
    #[derive(Serialize)]
    struct ProgramOut {
        total_cost_bits: f64,
        achieved_error: f64,
        error_units: &'static str,
        cost_units: &'static str,
        m_bits: u32,
        net_eps: f64,
        net_log2_len: f64,
        per_gate: Vec<GateOut>,
    }
    let out = ProgramOut {
        total_cost_bits: programmed.total_cost_bits,
        achieved_error: programmed.achieved_error,
        error_units: "diamond",
        cost_units: "bits",
        m_bits: programmed.m_bits,
        net_eps: programmed.net.target_eps,
        net_log2_len: programmed.net.log2_len(),
        per_gate: programmed
            .program
            .gates
            .iter()
            .map(|g| GateOut {
                layer: g.layer,
                support: g.support.clone(),
                location_bits: g.location_bits(programmed.m_bits),
                net_index: g.net_index,
                gap: g.gap,
            })
            .collect(),
    };
    let rendered = to_json(&out);
    if let Some(path) = &args.report {
        std::fs::write(path, &rendered)?;
    }
    Ok(rendered)
}

fn run_mosim(cmd: MosimCmd) -> Result<String> {
    match cmd {
        MosimCmd::EstimateP { n, samples, ensemble, seed, q, json: _ } => {
            let cfg = match q {
                Some(weights) => ProbeConfig::new(n, weights)?,
                None => ProbeConfig::uniform(n)?,
            };
            let ensemble: MeasureEnsemble = ensemble.parse()?;
            let u = matrixcore::identity(2);
            let est = mosim::estimate_p(&u, &cfg, samples, ensemble, seed)?;
            #[derive(Serialize)]
            struct EstimateOut {
                p_hat: f64,
                stderr: f64,
                samples: usize,
                ensemble: MeasureEnsemble,
                copies: usize,
                units: &'static str,
            }
            Ok(to_json(&EstimateOut {
                p_hat: est.p_hat,
                stderr: est.stderr,
                samples: est.samples,
                ensemble: est.ensemble,
                copies: n,
                units: "probability",
            }))
        }
        MosimCmd::Simulate { n, samples, ensemble, seed, json: _ } => {
            let cfg = ProbeConfig::uniform(n)?;
            let ensemble: MeasureEnsemble = ensemble.parse()?;
            let u = matrixcore::identity(2);
            let est = mosim::simulate_mo_channel(&u, &cfg, samples, ensemble, seed)?;
            let choi = est.choi_hat.clone().expect("simulation always yields a Choi matrix");
            let residual =
                matrixcore::trace_norm(&(&choi - mosim::mo_model_choi(&u, est.p_hat)));
            #[derive(Serialize)]
            struct SimulateOut {
                p_hat: f64,
                stderr: f64,
                samples: usize,
                ensemble: MeasureEnsemble,
                copies: usize,
                model_residual_trace_norm: f64,
                choi: Vec<Vec<[f64; 2]>>,
                units: &'static str,
            }
            Ok(to_json(&SimulateOut {
                p_hat: est.p_hat,
                stderr: est.stderr,
                samples: est.samples,
                ensemble: est.ensemble,
                copies: n,
                model_residual_trace_norm: residual,
                choi: mat_rows(&choi),
                units: "probability",
            }))
        }
    }
}

fn scaling_sweep(
    from_exp: u32,
    to_exp: u32,
    kappa: f64,
    grid: usize,
    csv: &std::path::Path,
) -> Result<String> {
    if from_exp < 6 || to_exp > 40 || from_exp > to_exp {
        return Err(CliError::Validation(format!(
            "exponent range [{from_exp}, {to_exp}] invalid (need 6 <= from <= to)"
        )));
    }
    let mut text = String::from(
        "n_exp,n_qubits,depth,gates,eps,kappa,varpi_star,lower_bits,upper_bits,lower_ratio,upper_ratio,valid\n",
    );
    for exp in from_exp..=to_exp {
        let n = 2u64.pow(exp);
        let lg2 = (exp as f64) * (exp as f64);
        let depth = lg2.ceil() as u64;
        let gates = n * depth / 2;
        let eps = 1.0 / lg2;
        let (varpi, low) = bounds::optimize_lower(n, eps, kappa, grid)?;
        let up = bounds::program_cost_upper(n, 2, gates, eps)?;
        let scale = n as f64 * lg2;
        let _ = writeln!(
            text,
            "{exp},{n},{depth},{gates},{eps},{kappa},{varpi},{},{},{},{},{}",
            low.value_bits,
            up.value_bits,
            low.value_bits / scale,
            up.value_bits / scale,
            low.valid && up.valid
        );
    }
    std::fs::write(csv, &text)?;
    #[derive(Serialize)]
    struct SweepOut {
        rows: u32,
        csv: String,
        units: &'static str,
    }
    Ok(to_json(&SweepOut {
        rows: to_exp - from_exp + 1,
        csv: csv.display().to_string(),
        units: "bits",
    }))
}

fn tradeoff_sweep(from_exp: u32, to_exp: u32, eps: f64, csv: &std::path::Path) -> Result<String> {
    if from_exp < 2 || from_exp > to_exp {
        return Err(CliError::Validation(format!(
            "exponent range [{from_exp}, {to_exp}] invalid"
        )));
    }
    let mut text = String::from("n_exp,n_qubits,depth_and_window,eps,primitive_bits,reduced_bits,ratio\n");
    for exp in from_exp..=to_exp {
        let n = 2u64.pow(exp);
        let lg2 = (exp as f64) * (exp as f64);
        let d = lg2.ceil() as u64;
        let r = lightcone::generic_tradeoff(n, d, d, eps, TradeoffConstants::default())?;
        let _ = writeln!(
            text,
            "{exp},{n},{d},{eps},{},{},{}",
            r.primitive_bits,
            r.reduced_bits,
            r.reduced_bits / r.primitive_bits
        );
    }
    std::fs::write(csv, &text)?;
    #[derive(Serialize)]
    struct SweepOut {
        rows: u32,
        csv: String,
        units: &'static str,
    }
    Ok(to_json(&SweepOut {
        rows: to_exp - from_exp + 1,
        csv: csv.display().to_string(),
        units: "bits",
    }))
}
