use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lmg_cli::run(std::env::args_os()))
}
