use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use holimcat::cli::{cmd_check, cmd_model, cmd_validate, error_exit_code, Outcome, RunConfig, CHECKS, MODELS};
use holimcat::simpl::PROXY_LABEL;

/// Finite categorical models for homotopy limits of nerves of categories.
#[derive(Parser)]
#[command(name = "holimcat", version)]
struct Cli {
    /// Cap on the dimension of source simplicial sets in mapping-space enumeration.
    #[arg(long, global = true, default_value_t = 8)]
    max_dim: usize,
    /// Search budget in backtracking nodes.
    #[arg(long, global = true, default_value_t = holimcat::cli::DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every structural validator on the inputs.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Run a named check on a diagram.
    Check {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(CHECKS))]
        kind: String,
        input: Option<PathBuf>,
        /// Highest simplex dimension for `lydakis`.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Object id of a member of U for `lemma-iso`; repeat for each member.
        #[arg(long = "member")]
        members: Vec<String>,
        /// Cube dimension for `cofinality`.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Build a categorical model and report its nerve homology.
    Model {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(MODELS))]
        kind: String,
        input: PathBuf,
    },
}

fn emit(cli: &Cli, out: &Outcome) -> std::io::Result<()> {
    let text = out.to_json();
    if let Some(p) = &cli.out {
        std::fs::write(p, &text)?;
    }
    if cli.json {
        print!("{text}");
    } else {
        for line in &out.summary {
            println!("{line}");
        }
        println!("method: {PROXY_LABEL}");
        println!("{}", if out.pass { "PASS" } else { "FAIL" });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = RunConfig {
        max_dim: cli.max_dim,
        budget: cli.budget,
        ..RunConfig::default()
    };
    let result = match &cli.command {
        Command::Validate { paths } => {
            let refs: Vec<&std::path::Path> = paths.iter().map(PathBuf::as_path).collect();
            cmd_validate(&refs)
        }
        Command::Check {
            kind,
            input,
            dim,
            members,
            n,
        } => {
            cfg.dim = *dim;
            cfg.members = members.clone();
            cfg.n = *n;
            cmd_check(kind, input.as_deref(), &cfg)
        }
        Command::Model { kind, input } => cmd_model(kind, input, &cfg),
    };
    match result {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
