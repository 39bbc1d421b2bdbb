use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;

use args::{Cli, Command, OracleCommand};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds(a) => commands::bounds_cmd(a),
        Command::Frank(a) => commands::frank_cmd(a),
        Command::Profile(a) => commands::profile_cmd(a),
        Command::Estimate(a) => commands::estimate_cmd(a),
        Command::Oracle { what: OracleCommand::Leaves(a) } => commands::oracle_leaves_cmd(a),
        Command::Oracle { what: OracleCommand::States(a) } => commands::oracle_states_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
    };
    match result {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
