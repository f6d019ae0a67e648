//! Degrees of parametrized curves of linear systems under the Plücker embedding.
//!
//! Run with `cargo run --example plucker_curves`.

use hyperjet::incidence::{matrix_plucker_degree, plucker_degree, GrassCurveSpec};
use hyperjet::MultiPoly;

fn main() -> hyperjet::Result<()> {
    for spec in [
        GrassCurveSpec::Single { big_n: 2, delta: 2 },
        GrassCurveSpec::Single { big_n: 3, delta: 3 },
        GrassCurveSpec::Product { c: 3, k: 1, deltas: vec![2, 3, 1], i: 3 },
    ] {
        println!("{spec:?}: {:?}", plucker_degree(&spec)?.degrees);
    }

    // A twisted cubic: the span of t0^3 e0 + t0^2 t1 e1 + t0 t1^2 e2 + t1^3 e3.
    let t0 = MultiPoly::var(2, 0);
    let t1 = MultiPoly::var(2, 1);
    let row = vec![t0.pow(3), &t0.pow(2) * &t1, &t0 * &t1.pow(2), t1.pow(3)];
    println!("twisted cubic: {}", matrix_plucker_degree(&[row])?);
    Ok(())
}
