//! Command-line front end for the relmol kernels.
//!
//! Exit codes: 0 when the run completed and all embedded invariants
//! passed, 1 on a convergence or invariant failure (with the evidence in
//! the report) or an output I/O failure, 2 on any rejected input —
//! unknown flags, domain violations, unreadable config files.  Once a
//! command dispatches, exit 2 can no longer occur.

mod config;
mod emit;
mod run;

use clap::Parser;

fn main() {
    // clap itself exits 2 on unknown flags or malformed values.
    let cli = config::Cli::parse();
    let resolved = match config::resolve(cli) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    };

    let (report, code) = run::execute(&resolved);
    let rendered = emit::render(
        &report,
        resolved.settings.format,
        !resolved.settings.no_timing,
    );
    match &resolved.settings.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: could not write {}: {e}", path.display());
                std::process::exit(1);
            }
        }
        None => print!("{rendered}"),
    }
    std::process::exit(code);
}
