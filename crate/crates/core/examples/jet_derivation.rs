//! The canonical derivation on jet polynomials, checked against the time
//! derivative of the evaluation on a curve germ.
//!
//! Run with `cargo run --example jet_derivation`.

use hyperjet::jet::JetSpace;
use hyperjet::series::CurveGerm;

fn main() -> hyperjet::Result<()> {
    let space = JetSpace::new(2, 1);
    let z1 = space.var(0, 0)?;
    let dz2 = space.var(1, 1)?;
    // Q = z1^2 * z2'
    let q = &(&z1 * &z1) * &dz2;
    let dq = q.derive();
    println!("Q    = {q}   weight {:?}", q.weighted_degree());
    println!("D Q  = {dq}   weight {:?}", dq.weighted_degree());

    // f(t) = (1 + t + 2t^2 - t^3 + t^4, 3t - t^2 + 5t^3)
    let f = CurveGerm::from_ints(4, &[&[1, 1, 2, -1, 1], &[0, 3, -1, 5, 0]]);
    let lhs = dq.eval_on_germ(&f, 2)?;
    let rhs = q.eval_on_germ(&f, 3)?.derivative()?;
    println!("(D Q)(f)       = {lhs}");
    println!("d/dt Q(f)      = {rhs}");
    assert_eq!(lhs, rhs);
    Ok(())
}
