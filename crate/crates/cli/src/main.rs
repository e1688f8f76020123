use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use subflat_cli::{init_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let written = match &out.raw {
                Some(text) => stdout.write_all(text.as_bytes()),
                None => writeln!(stdout, "{}", serde_json::to_string_pretty(&out.record).expect("record serializes")),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            eprintln!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
