//! Command-line front end: one-shot bound queries, benchmark sweeps over
//! time, randomized verification runs, and a model listing. Output is CSV or
//! JSON with full-precision floats so downstream plotting scripts can consume
//! it losslessly.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 infeasible bound
//! request (or verification violations), 3 truncation failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use landauer::bounds::{self, BoundEvaluation, BoundStatus, EntropyChangeTarget};
use landauer::envmodels::{EnvironmentModel, ModelConfig};
use landauer::fmt::float17;
use landauer::harness::{run_fuzz, FuzzConfig};
use landauer::rabi::{self, RabiConfig, SweepRow, CSV_HEADER};
use landauer::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "landauer", version, about = "Heat bounds for entropy changes against thermal environments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate both heat bounds for one (T, dS) request against a model.
    Bound(BoundArgs),
    /// Sweep the qubit-plus-mode benchmark over a time grid.
    Rabi(RabiArgs),
    /// Run the randomized inequality verification matrix.
    Verify(VerifyArgs),
    /// List available environment models and their parameters.
    Models,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Model selection, inline via flags or from a JSON file; flags win.
#[derive(Args)]
struct ModelArgs {
    /// Model kind: bosonic | waveguide | phonon | gapped | finite | tabulated.
    #[arg(long)]
    model: Option<String>,
    /// JSON file {"kind": "...", ...} with the same field names as the flags.
    #[arg(long)]
    model_file: Option<PathBuf>,
    /// Mode frequency (bosonic).
    #[arg(long)]
    omega: Option<f64>,
    /// Waveguide length.
    #[arg(long = "L")]
    length: Option<f64>,
    /// Waveguide propagation speed.
    #[arg(long)]
    c: Option<f64>,
    /// Cubic heat-capacity coefficient (phonon).
    #[arg(long)]
    a: Option<f64>,
    /// Exponential-tail prefactor (gapped).
    #[arg(long)]
    b: Option<f64>,
    /// Gap energy (gapped).
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated level energies (finite).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    levels: Option<Vec<f64>>,
    /// Two-column CSV path, T,C with header (tabulated).
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl ModelArgs {
    /// Merges the file document (if any) with the flags and builds the model.
    fn build(&self) -> Result<EnvironmentModel, String> {
        let mut doc = match &self.model_file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => serde_json::json!({}),
        };
        let mut set = |key: &str, v: Option<serde_json::Value>| {
            if let Some(v) = v {
                doc[key] = v;
            }
        };
        let num = |x: Option<f64>| x.map(|v| serde_json::json!(v));
        set("kind", self.model.as_ref().map(|k| serde_json::json!(k)));
        set("omega", num(self.omega));
        set("L", num(self.length));
        set("c", num(self.c));
        set("a", num(self.a));
        set("b", num(self.b));
        set("delta", num(self.delta));
        set("levels", self.levels.as_ref().map(|l| serde_json::json!(l)));
        set("csv", self.csv.as_ref().map(|p| serde_json::json!(p.display().to_string())));

        let cfg: ModelConfig = serde_json::from_value(doc)
            .map_err(|e| format!("model configuration: {e} (see `landauer models`)"))?;
        cfg.build().map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Environment temperature.
    #[arg(long = "T")]
    temperature: f64,
    /// System entropy change in nats.
    #[arg(long = "dS", allow_hyphen_values = true)]
    ds: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct RabiArgs {
    /// Coupling strength.
    #[arg(long, default_value_t = 0.2)]
    g: f64,
    /// Mode temperature.
    #[arg(long = "T", default_value_t = 0.01)]
    temperature: f64,
    /// Qubit excitation probability.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Mode frequency.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Qubit splitting.
    #[arg(long = "Omega", default_value_t = 1.0)]
    big_omega: f64,
    /// Last time of the sweep.
    #[arg(long, default_value_t = 20.0)]
    tmax: f64,
    /// Number of grid points on [0, tmax].
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Initial Fock truncation (grows until certified).
    #[arg(long, default_value_t = 30)]
    fock: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Seed of the first trial; trial i uses seed + i.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Comma-separated temperature cycle.
    #[arg(long = "Tlist", value_delimiter = ',', default_values_t = vec![0.0, 0.1, 1.0, 10.0])]
    tlist: Vec<f64>,
    /// Maximum system,environment dimensions.
    #[arg(long, value_delimiter = ',', default_values_t = vec![3, 6])]
    dims: Vec<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let code = match cli.cmd {
        Cmd::Bound(args) => cmd_bound(args),
        Cmd::Rabi(args) => cmd_rabi(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Models => cmd_models(),
    };
    ExitCode::from(code)
}

fn cmd_bound(args: BoundArgs) -> u8 {
    if !args.temperature.is_finite() || args.temperature < 0.0 || !args.ds.is_finite() {
        eprintln!("error: --T must be finite and >= 0, --dS finite");
        return 1;
    }
    let model = match args.model.build() {
        Ok(m) => m,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let ev = match bounds::modified_bound(
        &model,
        args.temperature,
        EntropyChangeTarget::new(args.ds),
    ) {
        Ok(ev) => ev,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match args.format {
        Format::Csv => {
            println!("reference_temperature,modified_bound,original_bound,status");
            println!(
                "{},{},{},{}",
                float17(ev.reference_temperature),
                float17(ev.modified_bound),
                float17(ev.original_bound),
                ev.status.as_str()
            );
        }
        Format::Json => println!("{}", bound_json(&ev)),
    }
    if ev.status == BoundStatus::Infeasible {
        2
    } else {
        0
    }
}

/// Hand-rendered so finite numbers keep 17 significant digits and non-finite
/// ones become the string markers instead of null.
fn json_value(x: f64) -> String {
    if x.is_finite() {
        float17(x)
    } else {
        format!("\"{}\"", float17(x))
    }
}

fn bound_json(ev: &BoundEvaluation) -> String {
    format!(
        "{{\n  \"reference_temperature\": {},\n  \"modified_bound\": {},\n  \"original_bound\": {},\n  \"status\": \"{}\"\n}}",
        json_value(ev.reference_temperature),
        json_value(ev.modified_bound),
        json_value(ev.original_bound),
        ev.status.as_str()
    )
}

fn cmd_rabi(args: RabiArgs) -> u8 {
    if !(args.tmax >= 0.0 && args.tmax.is_finite()) || args.steps == 0 {
        eprintln!("error: --tmax must be finite and >= 0, --steps >= 1");
        return 1;
    }
    let cfg = RabiConfig {
        omega: args.omega,
        big_omega: args.big_omega,
        g: args.g,
        temperature: args.temperature,
        p: args.p,
        fock_dim: args.fock,
        t_grid: rabi::time_grid(args.tmax, args.steps),
    };
    match rabi::sweep(&cfg) {
        Ok(rows) => {
            match args.format {
                Format::Csv => {
                    println!("{CSV_HEADER}");
                    for row in &rows {
                        println!("{}", rabi::csv_line(row));
                    }
                }
                Format::Json => println!("{}", rabi_json(&rows)),
            }
            0
        }
        Err(Error::TruncationUnconverged(n)) => {
            eprintln!("error: record still moving when doubling past {n} mode levels");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn rabi_json(rows: &[SweepRow]) -> String {
    let mut out = String::from("[");
    for (k, row) in rows.iter().enumerate() {
        let r = &row.record;
        let sep = if k == 0 { "" } else { "," };
        out.push_str(&format!(
            "{sep}\n  {{\"t\": {}, \"dS_S\": {}, \"dQ_E\": {}, \"dS_E\": {}, \"mutual_info\": {}, \"sigma\": {}, \"T_prime\": {}, \"bound_modified\": {}, \"bound_original\": {}}}",
            json_value(r.time),
            json_value(r.delta_s_system),
            json_value(r.delta_q_env),
            json_value(r.delta_s_env),
            json_value(r.mutual_info),
            json_value(r.entropy_production),
            json_value(r.reference_temperature),
            json_value(row.bound_modified),
            json_value(row.bound_original),
        ));
    }
    out.push_str("\n]");
    out
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    if args.trials == 0 || args.tlist.is_empty() || args.dims.len() != 2 {
        eprintln!("error: need --trials >= 1, a nonempty --Tlist and --dims SYS,ENV");
        return 1;
    }
    if args.tlist.iter().any(|t| !(*t >= 0.0)) {
        eprintln!("error: temperatures must be >= 0");
        return 1;
    }
    if args.dims[0] < 2 || args.dims[1] < 2 {
        eprintln!("error: dimensions must be >= 2");
        return 1;
    }
    let cfg = FuzzConfig {
        trials: args.trials,
        seed0: args.seed,
        temperatures: args.tlist.clone(),
        max_dims: (args.dims[0], args.dims[1]),
    };
    match run_fuzz(&cfg) {
        Ok(report) => {
            println!("{}", report.to_json());
            if report.violations.is_empty() {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn cmd_models() -> u8 {
    println!("bosonic: omega            single mode of frequency omega");
    println!("waveguide: L, c           linear-dispersion field, length L, speed c");
    println!("phonon: a                 cubic heat capacity C = a T^3");
    println!("gapped: b, delta          exponentially suppressed C = b exp(-delta/T)");
    println!("finite: levels            explicit spectrum, ground level at 0");
    println!("tabulated: csv path       two-column T,C table with header row");
    println!();
    println!("all quantities in natural units; temperatures and energies share one unit");
    0
}
