use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match saltus_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the generic error status so 2 stays "inconclusive".
            return ExitCode::from(if e.use_stderr() { saltus_cli::EXIT_ERROR } else { 0 });
        }
    };
    match saltus_cli::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(saltus_cli::EXIT_ERROR)
        }
    }
}
