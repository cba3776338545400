use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use strength_cli::app::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(&cli) {
        Ok(out) => {
            let _ = write!(stdout, "{}", out.report);
            if let Some(a) = out.artifact {
                let _ = write!(stdout, "{a}");
            }
            ExitCode::from(out.code as u8)
        }
        Err(f) => {
            let _ = writeln!(stdout, "error = {}", f.name);
            eprintln!("strength: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
