//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Frozen reference values are asserted here directly as well as through
//! the library's selftest runner.

use std::process::ExitCode;

use hyperjet::bounds::{debarre_bound, decompose, dt_bound, kobayashi_bound, Decomposition};
use hyperjet::incidence::{verify_product_mult, verify_single_mult};
use hyperjet::selftest::{run_all, SelftestOptions};
use num_bigint::BigUint;

fn frozen() -> Vec<(&'static str, bool)> {
    let big = |v: u64| BigUint::from(v);
    let exact = |r: hyperjet::Result<hyperjet::bounds::BoundReport>| r.map(|r| (r.exact, r.simplified)).ok();
    let decomposed = matches!(
        decompose(&big(265), 2, 1),
        Ok(Decomposition::Feasible { ref eps, ref r, delta0: 4, k: 1, .. }) if *eps == big(1) && *r == big(65)
    );
    vec![
        ("kobayashi(2) = 269 <= 384", exact(kobayashi_bound(2)) == Some((big(269), Some(big(384))))),
        ("kobayashi(3) = 61274 <= 78732", exact(kobayashi_bound(3)) == Some((big(61274), Some(big(78732))))),
        ("debarre(3) = 25011 <= 46656", exact(debarre_bound(3)) == Some((big(25011), Some(big(46656))))),
        ("dt(3,1) = 61265 <= 118098", exact(dt_bound(3, 1)) == Some((big(61265), Some(big(118098))))),
        ("dt(2,1) = 265", exact(dt_bound(2, 1)).map(|v| v.0) == Some(big(265))),
        ("decompose(265,2,1) = (1,65,4,1)", decomposed),
        ("single-mult (2,2) = 2", verify_single_mult(2, 2).map(|r| r.computed).ok() == Some(2)),
        ("single-mult (2,3) = 3", verify_single_mult(2, 3).map(|r| r.computed).ok() == Some(3)),
        ("single-mult (3,2) = 4", verify_single_mult(3, 2).map(|r| r.computed).ok() == Some(4)),
        ("product-mult (2,1,(2,3),1) = 18", verify_product_mult(2, 1, &[2, 3], 1).map(|r| r.computed).ok() == Some(18)),
        ("product-mult (2,1,(2,3),2) = 12", verify_product_mult(2, 1, &[2, 3], 2).map(|r| r.computed).ok() == Some(12)),
    ]
}

fn main() -> ExitCode {
    let mut ok = true;
    for r in run_all(&SelftestOptions::default()) {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("criterion {} [{}]: {status} ({} ms / {} ms) {}", r.id, r.name, r.elapsed_ms, r.budget_ms, r.detail);
        ok &= r.passed;
    }
    for (label, passed) in frozen() {
        println!("frozen {label}: {}", if passed { "PASS" } else { "FAIL" });
        ok &= passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
