//! relperc: percolation experiments on Cayley balls with subgroup-relative
//! observables.

mod config;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::parse_config_text;
use runner::RunError;

/// Output root fallback when neither `--out` nor the config sets one.
const OUT_ENV: &str = "RELPERC_OUT";

#[derive(Parser)]
#[command(name = "relperc")]
#[command(about = "Bond percolation on Cayley balls: subgroup-relative thresholds, tails, \
walks, and exact small-instance identity checks")]
#[command(long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a key=value config file.
    ///
    /// Emits one or more CSV files plus a manifest; reruns with an
    /// identical config produce byte-identical CSV regardless of thread
    /// count. CSV columns per experiment:
    ///   sweep:      p,reach,ci_low,ci_high,n_samples (+ _summary: level,pc,pc_status,radius)
    ///   tail:       p,n,q_max,ci_low,ci_high,q_origin,origin_ci_low,origin_ci_high,n_samples
    ///   kappa:      p,n,kappa,ci_low,ci_high,successes,trials (+ _audit, _summary)
    ///   trichotomy: p,zero,one,many,n_samples
    ///   pu-probe:   p,d,tau_min,ci_low,ci_high,successes,trials (+ _summary: verdict)
    ///   freq:       seed,steps,cluster_id,frequency,ci_low,ci_high,reflection_fraction,flagged
    ///   visits:     seed,distinct_clusters,returns_to_start,horizon,start_fraction,reflection_fraction
    ///   oracle:*:   check,instance,lhs,rhs,gap,verdict,notes
    Run {
        /// Path to the config file.
        config: PathBuf,
        /// Override a config key, e.g. --set seed=7 (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
        /// Worker threads (overrides the `threads` key).
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory (overrides `out_dir` and RELPERC_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config file against the schema without running it.
    Validate {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Run a named exact check over its built-in instances.
    Oracle {
        /// One of: russo, osss, integral, kgh, mtp, tilted-mtp, spanning.
        name: String,
        /// Select a single built-in instance by name.
        #[arg(long)]
        builtin: Option<String>,
    },
    /// List the supported group and subgroup DSL strings.
    ListGroups,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn parse_sets(sets: &[String]) -> Result<Vec<(String, String)>, RunError> {
    sets.iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| RunError::Config(format!("--set expects KEY=VALUE, got `{s}`")))
        })
        .collect()
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run { config, sets, threads, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| RunError::Config(format!("cannot read {}: {e}", config.display())))?;
            let overrides = parse_sets(&sets)?;
            let (parsed, report) = parse_config_text(&text, &overrides);
            let Some(mut parsed) = parsed else {
                return Err(RunError::Config(report.render()));
            };
            if let Some(t) = threads {
                parsed.threads = Some(t);
            }
            if let Some(t) = parsed.threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()
                    .map_err(|e| RunError::Config(format!("thread pool: {e}")))?;
            }
            let out_root = out
                .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            let outcome = runner::run(&parsed, &out_root)?;
            for f in outcome.files {
                println!("{}", f.display());
            }
            Ok(())
        }
        Command::Validate { config, sets } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| RunError::Config(format!("cannot read {}: {e}", config.display())))?;
            let overrides = parse_sets(&sets)?;
            let (_, report) = parse_config_text(&text, &overrides);
            print!("{}", report.render());
            if report.ok() {
                Ok(())
            } else {
                Err(RunError::Config("validation failed".into()))
            }
        }
        Command::Oracle { name, builtin } => {
            let reports = relperc_core::oracles::run_builtin(&name, builtin.as_deref())?;
            for r in &reports {
                println!("{r}");
            }
            match reports.iter().find(|r| !r.holds) {
                Some(bad) => Err(RunError::OracleViolation(bad.to_string())),
                None => Ok(()),
            }
        }
        Command::ListGroups => {
            println!("groups:");
            for (dsl, desc) in relperc_core::groups::dsl::known_groups() {
                println!("  {dsl:<24} {desc}");
            }
            println!("subgroups:");
            for (dsl, desc) in relperc_core::groups::dsl::known_subgroups() {
                println!("  {dsl:<24} {desc}");
            }
            println!("oracles:");
            for (name, desc) in relperc_core::oracles::oracle_names() {
                println!("  {name:<24} {desc}");
            }
            Ok(())
        }
    }
}
