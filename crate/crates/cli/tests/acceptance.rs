//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use std::process::ExitCode;

use freext_cli::verify::{self, Hooks};

fn main() -> ExitCode {
    let report = verify::run_with(&[], &Hooks::default(), |r| println!("{r}")).expect("no filter");
    let passed = report.results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria passed", report.results.len());
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
