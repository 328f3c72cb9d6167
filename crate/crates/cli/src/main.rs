//! `hscomp`: ball enumeration, lemma verification, compression bounds and
//! empirical exponent estimates from the command line.
//!
//! Results are written as CSV (to `--out` or stdout) followed by a `#`
//! metadata block; summaries go to stderr. Failures print
//! `error[<category>]: <message>` and exit with the category's code.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Config;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "hscomp", version, about = "Hilbert space compression toolkit")]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Override a configuration key; repeatable.
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// CSV output path (stdout when absent).
    #[arg(short, long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    threads: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate a ball and print |B_r| and |S_r| per radius.
    Ball(BallArgs),
    /// Check a lemma's inequalities numerically.
    Verify(VerifyArgs),
    /// Evaluate a compression lower bound.
    Bound(BoundArgs),
    /// Fit an empirical compression exponent.
    Estimate(EstimateArgs),
    /// Manage the ball cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
struct BallArgs {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    radius: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// schoenberg, poly, hyp or combine.
    #[arg(long)]
    lemma: Option<String>,
    #[arg(long)]
    group: Option<String>,
    /// N or an inclusive range A..B.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    radius: Option<String>,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// limit, limit_quasi, direct_sum, extension_poly, extension_hyp or wreath.
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    /// identity or sqrt.
    #[arg(long)]
    embedding: Option<String>,
    /// Path for the plot points CSV.
    #[arg(long)]
    points: Option<String>,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Enumerate a ball and store it.
    Build(BallArgs),
    /// Load a stored ball and validate it against its group.
    Check(BallArgs),
    /// Print the cache file path for a group and radius.
    Path(BallArgs),
}

fn flags(pairs: &[(&str, &Option<String>)], cfg: &mut Config) {
    for (k, v) in pairs {
        if let Some(v) = v {
            cfg.set(k, v.clone());
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    for pair in &cli.set {
        cfg.set_pair(pair)?;
    }
    flags(&[("out", &cli.out), ("seed", &cli.seed), ("threads", &cli.threads)], &mut cfg);
    match &cli.command {
        Command::Ball(a) => flags(&[("group", &a.group), ("radius", &a.radius)], &mut cfg),
        Command::Verify(a) => flags(
            &[
                ("lemma", &a.lemma),
                ("group", &a.group),
                ("n", &a.n),
                ("p", &a.p),
                ("radius", &a.radius),
            ],
            &mut cfg,
        ),
        Command::Bound(a) => flags(
            &[("formula", &a.formula), ("delta", &a.delta), ("n_max", &a.n_max)],
            &mut cfg,
        ),
        Command::Estimate(a) => flags(
            &[
                ("group", &a.group),
                ("radius", &a.radius),
                ("embedding", &a.embedding),
                ("points", &a.points),
            ],
            &mut cfg,
        ),
        Command::Cache { action } => {
            let (CacheAction::Build(a) | CacheAction::Check(a) | CacheAction::Path(a)) = action;
            flags(&[("group", &a.group), ("radius", &a.radius)], &mut cfg)
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    match &cli.command {
        Command::Ball(_) => commands::ball(&cfg),
        Command::Verify(_) => commands::verify(&cfg),
        Command::Bound(_) => commands::bound(&cfg),
        Command::Estimate(_) => commands::estimate(&cfg),
        Command::Cache { action } => match action {
            CacheAction::Build(_) => commands::cache_build(&cfg),
            CacheAction::Check(_) => commands::cache_check(&cfg),
            CacheAction::Path(_) => commands::cache_path(&cfg),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
