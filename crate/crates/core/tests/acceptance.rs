//! Runs the eleven acceptance criteria and prints one line per criterion.

use std::process::ExitCode;

use conesphere::verify::{acceptance, VerifyConfig};

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let outcomes = acceptance(&cfg);
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
