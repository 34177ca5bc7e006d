use clap::Parser;
use covertower::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
