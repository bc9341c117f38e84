//! One line per acceptance criterion; exits nonzero if any fails.

use matchpoly::coverings::DEFAULT_BUDGET;
use matchpoly::verify::run_criterion;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=11 {
        let result = run_criterion(id, 0, DEFAULT_BUDGET);
        println!("{result}");
        failed += usize::from(!result.passed);
    }
    println!("acceptance: {}/11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
