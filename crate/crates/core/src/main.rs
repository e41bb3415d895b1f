use std::process::ExitCode;

fn main() -> ExitCode {
    zeno_ring::cli::main_entry()
}
