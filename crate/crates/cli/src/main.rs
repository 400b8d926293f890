//! `isac-sim`: run, sweep and figure generation for the THz/VLC ISAC model.

mod config;
mod figures;
mod sweep;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isac_core::{run_monte_carlo_with_threads, run_trial, trial_seed, Error, Mode, TrialResult};
use serde_json::json;

use config::{load, Override};
use sweep::{fmt_float, run_sweep, to_csv, BlockageChoice, SweepParam, SweepSpec};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Config(Error),
    Model(Error),
    Io(String),
    InfeasibleSplit { required: f64 },
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Config(_) => 2,
            Failure::InfeasibleSplit { .. } => 3,
            Failure::Model(_) | Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Config(e) => write!(f, "invalid configuration: {e}"),
            Failure::Model(e) => write!(f, "model error: {e}"),
            Failure::Io(m) => write!(f, "io error: {m}"),
            Failure::InfeasibleSplit { required } => write!(
                f,
                "infeasible power split: sensing needs rho1 = {required:.6} > 1 in the reporting trial"
            ),
        }
    }
}

#[derive(Parser)]
#[command(name = "isac-sim", version, about = "Indoor THz/VLC integrated sensing and communication simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Scenario JSON; the built-in defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config field, e.g. `--set blockage.enabled=true`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<Override>,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo run: writes summary.json and per_user.csv.
    Run(RunArgs),
    /// Sweep one parameter: writes sweep_<param>.csv.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "proposed")]
        modes: Vec<Mode>,
        #[arg(long, value_enum, default_value = "both")]
        blockage: BlockageChoice,
    },
    /// Writes one CSV per figure recipe into --out.
    Figures(RunArgs),
    /// Validates the configuration and prints its fingerprint.
    Validate(ConfigArgs),
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn check_counts(trials: usize, threads: Option<usize>) -> Result<(), Failure> {
    if trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    if threads == Some(0) {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    Ok(())
}

fn per_user_csv(trial: &TrialResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# reporting trial seed: {}", trial.seed);
    let _ = writeln!(
        out,
        "user,x,y,rcs,snr_sens,p_d,covered,detected,snr_thz,decision,snr,rate,illuminance"
    );
    for u in &trial.users {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            u.index,
            fmt_float(u.x),
            fmt_float(u.y),
            fmt_float(u.rcs),
            fmt_float(u.snr_sens),
            fmt_float(u.p_d),
            u.covered,
            u.detected,
            fmt_float(u.snr_thz),
            u.decision,
            fmt_float(u.snr),
            fmt_float(u.rate),
            fmt_float(u.illuminance),
        );
    }
    out
}

fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    check_counts(args.trials, args.threads)?;
    let (config, scenario) = load(args.config.config.as_deref(), &args.config.overrides)?;
    let aggregate =
        run_monte_carlo_with_threads(&scenario, args.trials, args.seed, args.threads).map_err(Failure::Model)?;
    let report = run_trial(&scenario, trial_seed(args.seed, 0)).map_err(Failure::Model)?;

    std::fs::create_dir_all(&args.out).map_err(|e| io_err(&args.out, e))?;
    let summary = json!({
        "fingerprint": scenario.fingerprint(),
        "seed": args.seed,
        "trials": args.trials,
        "mode": scenario.mode,
        "blockage_enabled": scenario.blockage_enabled,
        "overrides": args.config.overrides.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        "config": config,
        "reporting_trial": {
            "seed": report.seed,
            "rho1": report.split.rho1,
            "required_rho1": report.split.required_rho1,
            "sensing_ok": report.split.sensing_ok,
            "feasible_for": report.split.feasible_for,
            "active_vlc_aps": report.milp.active,
            "vlc_power": report.milp.power,
        },
        "aggregate": aggregate,
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    write_file(&args.out.join("summary.json"), &text)?;
    write_file(&args.out.join("per_user.csv"), &per_user_csv(&report))?;

    println!("fingerprint {}", scenario.fingerprint());
    for m in &aggregate.metrics {
        println!("{:<20} mean {:>14} std {:>14}", m.name, fmt_float(m.mean), fmt_float(m.std));
    }
    println!("wrote {}", args.out.display());
    if !report.split.sensing_ok {
        return Err(Failure::InfeasibleSplit {
            required: report.split.required_rho1,
        });
    }
    Ok(())
}

fn cmd_sweep(
    args: &RunArgs,
    param: SweepParam,
    values: &[f64],
    modes: &[Mode],
    blockage: BlockageChoice,
) -> Result<(), Failure> {
    check_counts(args.trials, args.threads)?;
    if modes.is_empty() {
        return Err(Failure::Usage("--modes needs at least one mode".into()));
    }
    let (config, scenario) = load(args.config.config.as_deref(), &args.config.overrides)?;
    let spec = SweepSpec {
        param,
        values: values.to_vec(),
        trials: args.trials,
        base_seed: args.seed,
        modes: modes.to_vec(),
        blockage,
    };
    let rows = run_sweep(&config, &spec, param.as_str(), args.threads)?;
    let header = vec![
        format!("sweep: param={}", param.as_str()),
        format!("fingerprint: {}", scenario.fingerprint()),
        format!("trials: {} seed: {}", args.trials, args.seed),
        format!(
            "overrides: [{}]",
            args.config.overrides.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(" ")
        ),
    ];
    std::fs::create_dir_all(&args.out).map_err(|e| io_err(&args.out, e))?;
    let path = args.out.join(format!("sweep_{}.csv", param.as_str()));
    write_file(&path, &to_csv(&header, &rows, false))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_figures(args: &RunArgs) -> Result<(), Failure> {
    check_counts(args.trials, args.threads)?;
    let (config, scenario) = load(args.config.config.as_deref(), &args.config.overrides)?;
    let written = figures::write_figures(
        &config,
        &scenario.fingerprint(),
        args.trials,
        args.seed,
        args.threads,
        &args.out,
    )?;
    for f in written {
        println!("wrote {}", args.out.join(f).display());
    }
    Ok(())
}

fn cmd_validate(args: &ConfigArgs) -> Result<(), Failure> {
    let (_, scenario) = load(args.config.as_deref(), &args.overrides)?;
    println!("ok fingerprint {}", scenario.fingerprint());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep {
            run,
            param,
            values,
            modes,
            blockage,
        } => cmd_sweep(run, *param, values, modes, *blockage),
        Command::Figures(args) => cmd_figures(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
