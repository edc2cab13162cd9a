use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use perturb_cli::{run_experiment, ExperimentConfig};

fn main() -> ExitCode {
    let cfg = match ExperimentConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run_experiment(&cfg) {
        Ok((outcome, written)) => {
            println!("{}", cfg.experiment.name());
            for line in &outcome.summary {
                println!("  {line}");
            }
            for path in written {
                println!("  wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
