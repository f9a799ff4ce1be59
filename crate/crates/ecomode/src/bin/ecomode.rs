use std::process::ExitCode;

fn main() -> ExitCode {
    ecomode::cli::main()
}
