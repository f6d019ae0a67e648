//! Local lengths of zero-dimensional ideals, and the multiplicities of the
//! degree-one curves of linear systems against the hyperplane z0 + zN = 0.
//!
//! Run with `cargo run --example intersection_multiplicity`.

use hyperjet::incidence::{local_length, verify_product_mult, verify_single_mult, ChartIdeal, LengthOptions};
use hyperjet::scalar::int;
use hyperjet::MultiPoly;

fn main() -> hyperjet::Result<()> {
    let x = MultiPoly::var(2, 0);
    let y = MultiPoly::var(2, 1);
    let ideal = ChartIdeal::new(vec!["x".into(), "y".into()], vec![&y - &x.pow(3), y.pow(2)], vec![int(0), int(0)])?;
    println!("length of (y - x^3, y^2) at 0: {}", local_length(&ideal, LengthOptions::default())?);

    for big_n in 2..=4 {
        for delta in 1..=4 {
            let r = verify_single_mult(big_n, delta)?;
            println!("N={big_n} delta={delta}: computed {:>3}, expected {:>3}", r.computed, r.expected);
        }
    }
    let r = verify_product_mult(2, 1, &[2, 3], 1)?;
    println!("{}: computed {}, expected {}", r.instance, r.computed, r.expected);
    Ok(())
}
