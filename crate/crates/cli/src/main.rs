use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use tsch_delay_cli::error::{exit, CliError};
use tsch_delay_cli::{run, Cli};

fn emit(cli: &Cli) -> Result<i32, CliError> {
    let report = run(cli)?;
    match &cli.command.common().out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Output(format!("cannot create {}: {e}", path.display())))?;
            report.table.write_to(BufWriter::new(file))?;
            let mut stdout = io::stdout().lock();
            for line in &report.summary {
                writeln!(stdout, "{line}")?;
            }
        }
        None => {
            report.table.write_to(io::stdout().lock())?;
            let mut stderr = io::stderr().lock();
            for line in &report.summary {
                writeln!(stderr, "{line}")?;
            }
        }
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT as u8 } else { exit::SUCCESS as u8 });
        }
    };
    match emit(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("tsch-delay: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
