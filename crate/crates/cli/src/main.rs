use std::process::ExitCode;

use clap::Parser;

use vaoi_cli::args::Cli;
use vaoi_cli::{emit, execute, CliError, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION_FAILED};

fn run(cli: &Cli) -> Result<bool, CliError> {
    let spec = cli.command.resolve()?;
    let output = execute(&spec)?;
    let common = cli.command.common();
    emit(&spec, &output, common.out.as_deref(), common.json.as_deref())?;
    if common.out.is_some() {
        for line in &output.report {
            println!("{line}");
        }
    } else {
        for line in &output.report {
            eprintln!("{line}");
        }
    }
    Ok(output.all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_VALIDATION_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
