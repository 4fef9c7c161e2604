//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use wsat_core::verify::{run_criterion, summary_line, CRITERIA, DEFAULT_SEED};
use wsat_core::Caps;

fn main() -> ExitCode {
    let caps = match Caps::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("bad caps: {e}");
            return ExitCode::FAILURE;
        }
    };
    // `cargo test -- <filter>` passes extra arguments; numeric ones pick criteria
    let picked: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<usize> = if picked.is_empty() { (1..=CRITERIA).collect() } else { picked };
    let mut failed = 0;
    for id in ids {
        let rep = match run_criterion(id, &caps, DEFAULT_SEED) {
            Ok(rep) => rep,
            Err(e) => {
                println!("FAIL [{id:>2}] {e}");
                failed += 1;
                continue;
            }
        };
        println!("{}", summary_line(&rep));
        for note in &rep.notes {
            println!("       note: {note}");
        }
        for f in &rep.failures {
            println!("       fail: {f}");
        }
        if !rep.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
