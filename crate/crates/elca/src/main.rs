use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(elca::cli::main_entry() as u8)
}
