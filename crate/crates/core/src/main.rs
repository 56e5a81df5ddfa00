use std::process::ExitCode;

fn main() -> ExitCode {
    topvs::cli::main()
}
