use std::process::ExitCode;

fn main() -> ExitCode {
    dplearn::harness::cli_main()
}
