use clap::Parser;

use chipfire::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
