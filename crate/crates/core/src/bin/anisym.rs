use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use anisym::harness::{self, exit_code, ExperimentConfig, Expr};
use anisym::Error;

#[derive(Parser)]
#[command(name = "anisym", version, about = "Symmetrisation experiments for anisotropic elliptic problems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// experiment config (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory; overrides `output.dir`
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// worker threads for sweeps
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// seed for random test fields; overrides `seed`
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(..=i64::MAX as u64))]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Klimov symmetrisation of `phi`
    Symmetrize,
    /// radial barrier built from the data alone
    Barrier,
    /// solve the discrete problem
    Solve,
    /// solve and run every declared check
    Verify,
    /// run the config once per value of a scalar key
    Sweep {
        /// dotted key, e.g. `domain.h` or `phi.p.1`
        #[arg(long)]
        axis: String,
        /// comma separated numbers or constant expressions such as `1/16`
        #[arg(long)]
        values: String,
    },
    /// declared norms of the data and the solution
    Norms,
}

fn parse_values(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Expr::parse(s, 1).map(|e| e.eval(&[0.0])))
        .collect()
}

fn execute(cli: &Cli) -> Result<i32, Error> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("--config is required".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let out = cli.out.clone().unwrap_or_else(|| cfg.output_dir());
    std::fs::create_dir_all(&out)?;
    match &cli.cmd {
        Cmd::Symmetrize => print_json(&harness::symmetrize(&cfg, &out)?),
        Cmd::Barrier => print_json(&harness::barrier_only(&cfg, &out)?),
        Cmd::Solve => print_json(&harness::solve_only(&cfg, &out)?),
        Cmd::Norms => print_json(&harness::norms_only(&cfg, &out)?),
        Cmd::Verify => {
            let o = harness::run_config(&cfg, &out)?;
            for c in &o.report.checks {
                println!("{:<18} {:?}{}", c.kind, c.status, c.message.as_ref().map_or(String::new(), |m| format!(": {m}")));
            }
            if let Some(c) = o.report.empirical_c {
                println!("empirical_C = {c:.6}");
            }
            println!("report: {}", o.out_dir.join("report.json").display());
            return Ok(o.exit);
        }
        Cmd::Sweep { axis, values } => {
            let values = parse_values(values)?;
            let o = harness::sweep_config(&cfg, axis, &values, &out, cli.workers)?;
            print!("{}", harness::SweepOutcome::to_csv(&o.rows));
            for r in o.rows.iter().filter(|r| r.message.is_some()) {
                eprintln!("value {}: {}", r.value, r.message.as_deref().unwrap_or_default());
            }
            return Ok(o.exit);
        }
    }
    Ok(0)
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).unwrap_or_default());
}

fn main() -> ExitCode {
    // exit 2 means refusal, so argument errors must not use clap's default
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
