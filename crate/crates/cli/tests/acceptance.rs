use std::process::{Command, ExitCode};
use std::time::Instant;

use slpelim::suite::{criterion_name, run_criterion, SuiteConfig, CRITERIA};

fn report_of_run(out: &std::path::Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_slpelim"))
        .args(["check", "all", "--max-n", "3", "--out"])
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("check all exited with {status}"));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> (bool, String) {
    let dir = tempfile::tempdir().expect("temp dir");
    let a = report_of_run(&dir.path().join("a.txt"));
    let b = report_of_run(&dir.path().join("b.txt"));
    match (a, b) {
        (Ok(a), Ok(b)) if a == b => (true, format!("{} identical bytes", a.len())),
        (Ok(a), Ok(b)) => (false, format!("reports differ ({} vs {} bytes)", a.len(), b.len())),
        (Err(e), _) | (_, Err(e)) => (false, e),
    }
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let mut failed = 0;
    for id in 1..=CRITERIA {
        let t = Instant::now();
        let r = run_criterion(id, &cfg);
        failed += u32::from(!r.passed);
        println!(
            "criterion {id:>2}: {} {} ({}) [{:.1}s]",
            if r.passed { "PASS" } else { "FAIL" },
            criterion_name(id),
            r.detail,
            t.elapsed().as_secs_f64()
        );
    }
    let t = Instant::now();
    let (ok, detail) = determinism();
    failed += u32::from(!ok);
    println!(
        "criterion 11: {} determinism ({detail}) [{:.1}s]",
        if ok { "PASS" } else { "FAIL" },
        t.elapsed().as_secs_f64()
    );
    println!("acceptance: {} of 11 passed in {:.1}s", 11 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
