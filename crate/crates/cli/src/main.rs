//! `intdiff` command-line tool.

use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let env_field = std::env::var(intdiff_cli::FIELD_ENV).ok();
    let out = intdiff_cli::run(&args, &mut std::io::stdin().lock(), env_field.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
