use clap::Parser;
use restart_bench::cli::{execute, Cli};

fn main() {
    if let Err(error) = execute(Cli::parse()) {
        eprintln!("error: {error}");
        std::process::exit(1);
    }
}
