use anyhow::Context;
use bpr_harness::error::HarnessError;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bpr", version, about = "Bayesian policy reuse experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a knowledge base offline and write kb.json.
    Train(Common),
    /// Run one strategy over the evaluation tasks and write trace.csv.
    Run(Common),
    /// Run several strategies on shared tasks and write per-episode summaries.
    Compare(Common),
    /// Sweep library fraction against episode budget.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use this trained kb instead of training in memory.
    #[arg(long)]
    kb: Option<PathBuf>,
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    let (name, common) = match &cli.command {
        Command::Train(c) => ("train", c),
        Command::Run(c) => ("run", c),
        Command::Compare(c) => ("compare", c),
        Command::Sweep(c) => ("sweep", c),
    };
    let cfg = bpr_harness::load_config(
        &common.config,
        common.seed,
        common.out.clone(),
        common.kb.clone(),
    )
    .with_context(|| format!("loading {}", common.config.display()))?;
    match cli.command {
        Command::Train(_) => {
            let out = bpr_harness::cmd_train(&cfg)?;
            println!("{}", out.kb_path.display());
        }
        Command::Run(_) => {
            let out = bpr_harness::cmd_run(&cfg)?;
            println!("{}", out.trace_path.display());
        }
        Command::Compare(_) => {
            let out = bpr_harness::cmd_compare(&cfg)?;
            for (label, s) in &out.summaries {
                if let Some(last) = s.last() {
                    println!("{label}: final mean regret {:.4}", last.mean_regret);
                }
            }
        }
        Command::Sweep(_) => {
            let out = bpr_harness::cmd_sweep(&cfg)?;
            println!("{}", out.path.display());
        }
    }
    log::debug!("{name} finished");
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .chain()
                .find_map(|c| c.downcast_ref::<HarnessError>())
                .map_or(3, HarnessError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
