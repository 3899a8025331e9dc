use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(pairing_automata::cli::run())
}
