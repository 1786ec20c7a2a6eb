use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use lambda_thermo::commands::{run, Cli, Format};
use lambda_thermo::THREADS_ENV;

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var(THREADS_ENV) {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("{THREADS_ENV} must be a positive integer, got {threads:?}");
                return ExitCode::from(lambda_thermo::EXIT_VALIDATION as u8);
            }
        }
    }

    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Json => {
                    let mut s = out.envelope.to_json();
                    s.push('\n');
                    s
                }
                Format::Csv => out.csv.render(),
            };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(lambda_thermo::EXIT_VALIDATION as u8);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    let _ = stdout.write_all(rendered.as_bytes());
                }
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code as u8)
        }
    }
}
