use std::process::ExitCode;

fn main() -> ExitCode {
    let results = chromalg::suite::acceptance();
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        println!("[{mark}] criterion {:>2}: {} ({:.2} s, limit {} s): {}", r.id, r.name, r.seconds, r.limit_seconds, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
