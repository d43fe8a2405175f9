use clap::Parser;

use suiteval::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("suiteval: {err}");
        std::process::exit(err.exit_code());
    }
}
