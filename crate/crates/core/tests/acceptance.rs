//! Runs acceptance criteria 1-10 and prints one line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are reported but do not fail the run; every
//! other criterion must pass.

use critlab_core::acceptance::run;

/// No finite group of prime order has a proper nontrivial subgroup, so the
/// critical pairs of `Z_5`, `Z_7` and `Z_11` cannot be locally sub-critical.
const KNOWN_RED: &[u8] = &[9];

fn main() {
    let only: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = Vec::new();
    for id in 1..=10u8 {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let report = run(id).expect("criterion exists");
        println!("{}", report.line());
        if !report.passed && !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
        if report.passed && KNOWN_RED.contains(&id) {
            println!("note: criterion {id} is listed as known red but passed");
        }
    }
    if !unexpected.is_empty() {
        eprintln!("failing criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
