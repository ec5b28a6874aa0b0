use std::process::ExitCode;

fn main() -> ExitCode {
    cascade_lab::cli::main_with(std::env::args_os())
}
