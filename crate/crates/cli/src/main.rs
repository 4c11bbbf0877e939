use std::process::ExitCode;

use clap::Parser;
use cmnorm::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(cli, &mut std::io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cmnorm: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
