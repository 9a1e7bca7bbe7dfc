use std::process::ExitCode;

fn main() -> ExitCode {
    sunidyn::cli::main_with_args(std::env::args_os())
}
