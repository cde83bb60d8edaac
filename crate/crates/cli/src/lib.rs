//! Command-line front end: argument definitions, command runners and report output.

pub mod args;
pub mod commands;
pub mod output;

use anyhow::Result;

use args::{Cli, Command, IdealCommand};
use output::Report;

pub fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Ideal(IdealCommand::Info { path }) => commands::ideal_info(path),
        Command::System(cmd) => commands::system(cmd),
        Command::Repro(cmd) => commands::repro(cmd),
    }
}
