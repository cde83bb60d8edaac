use std::process::ExitCode;

use clap::Parser;
use multigraded_cli::args::Cli;
use multigraded_cli::execute;
use multigraded_cli::output::write_tables;

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if cli.single_thread {
        rayon::ThreadPoolBuilder::new().num_threads(1).build_global()?;
    }
    let report = execute(cli)?;
    print!("{}", report.text);
    if let Some(out) = &cli.out {
        for path in write_tables(out, &report.tables)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
