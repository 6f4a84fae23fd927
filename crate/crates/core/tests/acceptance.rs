use std::process::ExitCode;

use k3auto::verify::{run, CRITERIA};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let r = run(id);
        println!("{} criterion {:>2}: {} ({} checks)", if r.pass { "PASS" } else { "FAIL" }, r.id, r.name, r.checks);
        for f in r.failures.iter().take(10) {
            println!("    {f}");
        }
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
