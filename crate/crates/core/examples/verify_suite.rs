//! The full check suite, as run by `euclid verify`.

use euclid_companion::analysis::{run_suite, SuiteConfig};

fn main() -> euclid_companion::Result<()> {
    let k_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let report = run_suite(&SuiteConfig {
        k_max,
        ..SuiteConfig::default()
    })?;
    print!("{}", report.summary_table());
    if report.hard_failure() {
        std::process::exit(1);
    }
    Ok(())
}
