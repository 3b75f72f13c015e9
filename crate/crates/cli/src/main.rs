use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use density_core::Error;
use density_lab::{error_json, exit_code, render, run, Cli};

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::pre("write", format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Error::pre("write", e.to_string()))
                }
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let msg = msg
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!("{}", error_json(&Error::parse(msg)));
            return ExitCode::from(2);
        }
    };
    let result = run(&cli).and_then(|r| {
        let text = render(&r, cli.format)?;
        emit(&cli, &text)?;
        Ok(r.json.get("all_pass") != Some(&serde_json::Value::Bool(false)))
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
