use std::process::ExitCode;

use clap::Parser;
use spin7::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("spin7: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
