use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ergopress_cli::commands::{emit, out_path};
use ergopress_cli::{run, Cli, CliError, THREADS_VAR};

fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::validation(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::validation(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = pool().and_then(|p| {
        p.install(|| run(&cli.command))
            .and_then(|o| emit(&o, out_path(&cli.command)).map(|text| (o.all_pass, text)))
    });
    match result {
        Ok((all_pass, text)) => {
            if let Some(t) = text {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(t.as_bytes()).is_err() {
                    return ExitCode::from(2);
                }
            }
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
