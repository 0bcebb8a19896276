//! Recompute a reference table and print it beside the published values.
//! The 1e10 tables need `--confirm-long` as a second argument.
//!
//! cargo run --release --example reproduce_tables -- scaled-1e8

use psimoment::report::{render_table, Mode};
use psimoment::{reproduce, RunConfig, Table};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "scaled-1e8".into());
    let mut base = RunConfig::new(Mode::Reproduce, 0.0, &[2, 4, 6]);
    base.threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    base.confirm_long = args.next().as_deref() == Some("--confirm-long");

    let result = Table::parse(&name).and_then(|t| reproduce(t, &base).map(|r| (t, r)));
    match result {
        Ok((table, report)) => print!("{}", render_table(table, &report)),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
