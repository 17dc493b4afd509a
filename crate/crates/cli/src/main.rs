use clap::Parser;
use surfcrack_cli::{run, CliError, Flags, RunConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let flags = Flags::parse();
    let result = RunConfig::resolve(&flags).and_then(|cfg| run(&cfg));
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("surfcrack: {e}");
            if let CliError::Residual(_) = e {
                eprintln!("output files were written; see their residual columns");
            }
            std::process::exit(e.exit_code());
        }
    }
}
