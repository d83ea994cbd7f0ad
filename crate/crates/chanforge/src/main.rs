use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(chanforge::cli::run(std::env::args_os()))
}
