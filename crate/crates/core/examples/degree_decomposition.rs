//! Splitting a degree as `d = delta0 (r + k) + eps`.
//!
//! Run with `cargo run --example degree_decomposition -- 1000 2 1`.

use hyperjet::bounds::{decompose, Decomposition};
use num_bigint::BigUint;

fn main() -> hyperjet::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: BigUint = args.first().map_or(Ok(BigUint::from(265u32)), |s| s.parse()).expect("d");
    let n: usize = args.get(1).map_or(2, |s| s.parse().expect("n"));
    let c: usize = args.get(2).map_or(1, |s| s.parse().expect("c"));

    match decompose(&d, n, c)? {
        Decomposition::Feasible { eps, r, delta0, k, r_bound, .. } => {
            println!("d = {d} = {delta0} * ({r} + {k}) + {eps}");
            println!("r = {r} > {r_bound}");
        }
        Decomposition::Infeasible { d0 } => println!("d = {d} is below the threshold {d0}"),
    }
    Ok(())
}
