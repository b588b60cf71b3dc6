use clap::Parser;
use sclego_cli::{run_to_exit_code, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    std::process::exit(run_to_exit_code(&cli));
}
