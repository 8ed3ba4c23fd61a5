use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eulerflight_scenario::bench::benchmark_derivatives;
use eulerflight_scenario::output::write_csv_file;
use eulerflight_scenario::report::compare;
use eulerflight_scenario::runner::{guard_expected, StopLabel};
use eulerflight_scenario::{run_all, Param, RunError, ScenarioConfig, OUT_DIR_ENV};
use log::error;

const EXIT_CONFIG: u8 = 2;
const EXIT_SINGULARITY: u8 = 3;
const EXIT_INTEGRATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "eulerflight",
    version,
    about = "Point-mass flight propagation in quaternion and classical forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a scenario and write one CSV per parameterization.
    Run {
        config: PathBuf,
        /// rv, rvl, rvh, spherical, cartesian or all. Repeatable; defaults to
        /// the forms listed in the scenario.
        #[arg(long = "param", value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
        /// Also write a JSON report comparing the runs.
        #[arg(long)]
        compare: bool,
    },
    /// Time derivative evaluations at the scenario's initial state.
    Bench {
        config: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        evals: usize,
        /// Write the report as JSON here as well.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Load and check a scenario file.
    Validate { config: PathBuf },
}

fn load(path: &Path) -> Result<ScenarioConfig, ExitCode> {
    ScenarioConfig::from_path(path).map_err(|e| {
        error!("{}: {e}", path.display());
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_CONFIG)
    })
}

fn select(params: &[String], cfg: &ScenarioConfig) -> Result<Vec<Param>, String> {
    if params.is_empty() {
        return Ok(cfg.parameterizations.clone());
    }
    let mut out = Vec::new();
    for p in params {
        if p.eq_ignore_ascii_case("all") {
            out.extend(Param::ALL);
        } else {
            out.push(p.parse::<Param>()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn run(config: &Path, params: &[String], out: Option<PathBuf>, with_report: bool) -> Result<(), ExitCode> {
    let cfg = load(config)?;
    let params = select(params, &cfg).map_err(|e| {
        eprintln!("error: --param: {e}");
        ExitCode::from(EXIT_CONFIG)
    })?;
    let dir = out
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir).map_err(|e| {
        eprintln!("error: {}: {e}", dir.display());
        ExitCode::from(EXIT_CONFIG)
    })?;

    let mut runs = Vec::new();
    let mut code = None;
    for result in run_all(&params, &cfg) {
        match result {
            Ok(r) => {
                let path = dir.join(format!("{}_{}.csv", cfg.name, r.param));
                if let Err(e) = write_csv_file(&path, &r.rows) {
                    eprintln!("error: {}: {e}", path.display());
                    code.get_or_insert(EXIT_INTEGRATION);
                }
                let msg = r.stop.message.as_deref().unwrap_or("");
                println!(
                    "{:<10} {:<18} t = {:<14.6} samples = {:<7} evals = {:<9} {}",
                    r.param.as_str(),
                    format!("{:?}", r.stop.kind),
                    r.stop.t,
                    r.rows.len(),
                    r.evaluations,
                    msg
                );
                if !guard_expected(&cfg, &r) {
                    code.get_or_insert(EXIT_SINGULARITY);
                } else if r.stop.kind == StopLabel::StepFailure {
                    code.get_or_insert(EXIT_INTEGRATION);
                }
                runs.push(r);
            }
            Err(e) => {
                eprintln!("error: {e}");
                code.get_or_insert(match e {
                    RunError::Config { .. } => EXIT_CONFIG,
                    RunError::Integration { .. } => EXIT_INTEGRATION,
                });
            }
        }
    }
    if with_report {
        let report = compare(&cfg.name, &runs);
        let path = dir.join(format!("{}_report.json", cfg.name));
        let written = serde_json::to_string_pretty(&report)
            .map_err(std::io::Error::other)
            .and_then(|s| std::fs::write(&path, s));
        if let Err(e) = written {
            eprintln!("error: {}: {e}", path.display());
            code.get_or_insert(EXIT_INTEGRATION);
        }
        for p in &report.pairs {
            if let Some(m) = p.max_e_r {
                println!("max e_r {} vs {}: {:.6e} m", p.a, p.b, m);
            }
        }
    }
    match code {
        Some(c) => Err(ExitCode::from(c)),
        None => Ok(()),
    }
}

fn bench(config: &Path, evals: usize, json: Option<PathBuf>) -> Result<(), ExitCode> {
    let cfg = load(config)?;
    let report = benchmark_derivatives(&cfg, evals).map_err(|e| {
        eprintln!("error: --evals: {e}");
        ExitCode::from(EXIT_CONFIG)
    })?;
    print!("{}", report.table());
    if let Some(path) = json {
        let s = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(&path, s).map_err(|e| {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(EXIT_CONFIG)
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            params,
            out,
            compare,
        } => run(&config, &params, out, compare),
        Command::Bench { config, evals, json } => bench(&config, evals, json),
        Command::Validate { config } => load(&config).map(|cfg| {
            println!(
                "{}: ok ({} forms, t_final = {} s)",
                cfg.name,
                cfg.parameterizations.len(),
                cfg.stop.t_final
            );
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
