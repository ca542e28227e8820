use std::io::Write;
use std::process::ExitCode;

use abeliant_cli::{run, RunConfig, EXIT_INPUT};
use clap::Parser;

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cfg) {
        Ok((report, code)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_INPUT as u8);
                    }
                }
                None => {
                    let _ = writeln!(std::io::stdout(), "{text}");
                }
            }
            ExitCode::from(code as u8)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
