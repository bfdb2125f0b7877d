//! Query counts as n doubles, written as CSV.

use hyperest::experiment::{doubling_ratios, run_sweep, write_sweep_csv, EstimateOptions, SweepOptions};
use hyperest::Result;

pub fn run_example() -> Result<()> {
    let opts = SweepOptions {
        d: 2,
        log_n_from: 6,
        log_n_to: 9,
        density: 4,
        estimate: EstimateOptions { timing: false, ..EstimateOptions::new(0.3, 1) },
        repeat: 1,
        jobs: 1,
    };
    let rows = run_sweep(&opts)?;
    write_sweep_csv(&rows, std::io::stdout().lock())?;
    for (n, ratio) in doubling_ratios(&rows) {
        println!("n = {n}: x{ratio:.2}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
