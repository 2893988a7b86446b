use std::process::ExitCode;

fn main() -> ExitCode {
    hiord::cli::run()
}
