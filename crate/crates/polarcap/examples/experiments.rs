//! Runs one of the three experiments at reduced size and prints the summary.
//!
//! `cargo run --release --example experiments -- [2|3|4] [trials]`

use polarcap::sim::{run_figure, Figure};

fn main() -> polarcap::Result<()> {
    let mut args = std::env::args().skip(1);
    let figure: Figure = args.next().as_deref().unwrap_or("3").parse()?;
    let mut cfg = figure.default_config();
    cfg.trials = args.next().and_then(|t| t.parse().ok()).unwrap_or(20_000);
    let res = run_figure(figure, &cfg, None)?;
    print!("{}", res.summary());
    Ok(())
}
