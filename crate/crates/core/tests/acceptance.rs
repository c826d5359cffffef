use std::process::ExitCode;
use trisect_core::selftest::{report_line, run, Options};

fn main() -> ExitCode {
    let outcomes = run(&Options::default());
    for o in &outcomes {
        println!("{}", report_line(o));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
