//! Wronskians as invariant jet differentials.
//!
//! Run with `cargo run --example wronskian_identities`.

use hyperjet::random;
use hyperjet::wronskian::{check_oracle, check_reparam_invariance, check_unit_scaling, wronskian, WronskianInput};
use hyperjet::MultiPoly;

fn main() -> hyperjet::Result<()> {
    let z = |i| MultiPoly::var(2, i);
    let inp = WronskianInput::new(vec![MultiPoly::one(2), z(0), z(1)])?;
    let w = wronskian(&inp);
    println!("W(1, z1, z2) = {w}");
    println!("weight       = {:?}", w.weighted_degree());

    let mut rng = random::seeded(11);
    let f = random::germ(&mut rng, 2, 3);
    let phi = random::reparam(&mut rng, 3);
    let cov = check_reparam_invariance(&inp, &f, &phi)?;
    println!("W(f o phi)(0) = {}, phi'(0)^3 W(f)(0) = {}", cov.lhs, cov.rhs);

    let h = &MultiPoly::one(2) + &z(0).pow(2);
    let scaled = check_unit_scaling(&inp, &h, &f)?;
    println!("W(h g)(f)(0) = {}, h^3 W(g)(f)(0) = {}", scaled.lhs, scaled.rhs);

    let oracle = check_oracle(&inp, &f, 1)?;
    println!("matches the series Wronskian through order 1: {}", oracle.equal);
    Ok(())
}
