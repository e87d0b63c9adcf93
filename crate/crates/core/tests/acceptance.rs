//! Runs every acceptance criterion at its stated limits, one line each.

use std::process::ExitCode;

use realiz_core::suite::run_all;

fn main() -> ExitCode {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
