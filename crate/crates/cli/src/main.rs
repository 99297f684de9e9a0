use std::process::ExitCode;

use clap::Parser;
use lz_dissipate::app::{self, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                app::EXIT_CONFIG
            } else {
                app::EXIT_OK
            });
        }
    };
    ExitCode::from(app::execute(&cli))
}
