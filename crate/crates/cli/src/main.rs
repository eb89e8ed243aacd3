mod args;
mod commands;
mod config;
mod parse;

use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use thiserror::Error;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qmbc_core::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    /// 1 for bad input, 2 for failures while running.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(qmbc_core::Error::Io(_) | qmbc_core::Error::Json(_)) => 2,
            CliError::Core(_) => 1,
            CliError::Output { .. } | CliError::Pool(_) => 2,
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(t) = cli.shared.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let s = &cli.shared;
    match &cli.command {
        Command::Capacity(a) => commands::capacity(s, a),
        Command::DeThreshold(a) => commands::de_threshold(s, a),
        Command::DeRegion(a) => commands::de_region(s, a),
        Command::Simulate(a) => commands::simulate(s, a),
        Command::LabelOptimize(a) => commands::label_optimize(s, a),
        Command::MlSnbre(a) => commands::ml_snbre(s, a),
        Command::MlLdpcBound(a) => commands::ml_ldpc_bound(s, a),
        Command::GraphGen(a) => commands::graph_gen(s, a),
        Command::GraphValidate(a) => commands::graph_validate(s, a),
    }
}

fn main() -> ExitCode {
    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let argv = match config::merge(std::env::args_os().collect(), &names) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
