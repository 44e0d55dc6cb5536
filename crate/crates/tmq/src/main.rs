use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use tmq::args::Cli;
use tmq::commands::run;
use tmq::config::RunConfig;
use tmq::EXIT_USAGE;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = RunConfig::resolve(&cli).and_then(|cfg| run(&cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tmq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
