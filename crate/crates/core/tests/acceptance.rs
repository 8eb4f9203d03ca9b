//! One PASS/FAIL line per acceptance criterion, q in {0.5, structural m=2},
//! grid k in [-40, 60]. Exits non-zero when any criterion fails.

use std::time::Instant;

use qcalc::verify::{corrected_checks, run_check, VerifyConfig};

fn main() {
    let cfg = VerifyConfig::standard().expect("standard configuration");
    let t0 = Instant::now();
    let mut failed = 0;
    for n in 1..=14u8 {
        let t = Instant::now();
        let c = run_check(n, &cfg);
        if !c.pass {
            failed += 1;
        }
        println!(
            "[{}] {:<24} residual {:>10.3e} tol {:>8.1e} ({:.1}s)  {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.max_residual,
            c.tolerance,
            t.elapsed().as_secs_f64(),
            c.detail
        );
    }
    println!("-- corrected targets (informational) --");
    for c in corrected_checks(&[7, 8, 13], &cfg) {
        println!(
            "[{}] {:<24} residual {:>10.3e} tol {:>8.1e}  {}",
            if c.pass { "pass" } else { "fail" },
            c.id,
            c.max_residual,
            c.tolerance,
            c.detail
        );
    }
    println!(
        "acceptance: {}/14 passed in {:.1}s",
        14 - failed,
        t0.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
