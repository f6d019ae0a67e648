//! Exact degree bounds for small dimensions.
//!
//! Run with `cargo run --example bounds_table`.

use hyperjet::bounds::{debarre_bound, dt_bound, kobayashi_bound};

fn main() -> hyperjet::Result<()> {
    println!("{:>3}  {:>24}  {:>24}", "n", "kobayashi (exact)", "debarre (exact)");
    for n in 2..=8 {
        let kob = kobayashi_bound(n)?;
        let deb = debarre_bound(n)?;
        println!("{n:>3}  {:>24}  {:>24}", kob.exact.to_string(), deb.exact.to_string());
    }

    println!();
    println!("{:>3} {:>3}  {:>3} {:>7}  {:>30}", "n", "c", "k", "delta0", "complete intersections (d0)");
    for n in 2..=6 {
        for c in 1..n {
            let r = dt_bound(n, c)?;
            println!("{n:>3} {c:>3}  {:>3} {:>7}  {:>30}", r.k, r.delta0, r.exact.to_string());
        }
    }
    Ok(())
}
