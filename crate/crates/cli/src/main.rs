use std::process::ExitCode;

fn main() -> ExitCode {
    sds_cli::main_with_args(std::env::args_os())
}
