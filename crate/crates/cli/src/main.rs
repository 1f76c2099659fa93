use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(rld_cli::run(std::env::args_os()))
}
