//! Is the common zero set of a linear system finite? Exact for linear forms,
//! point counts over F_p and F_{p^2} otherwise.
//!
//! Run with `cargo run --example fiber_finiteness`.

use hyperjet::incidence::{fiber_finite, GrassPointFq};
use hyperjet::MultiPoly;

fn main() -> hyperjet::Result<()> {
    let z = |n, i| MultiPoly::var(n, i);
    let cases: Vec<(&str, Vec<MultiPoly>, Vec<usize>)> = vec![
        ("Span(z0, z1) in P^2", vec![z(3, 0), z(3, 1)], vec![]),
        ("Span(z0, z1) in P^3", vec![z(4, 0), z(4, 1)], vec![]),
        ("Span(z0^2, z1^2) in P^2", vec![z(3, 0).pow(2), z(3, 1).pow(2)], vec![]),
        ("Span(z0^2, z0 z1) in P^2", vec![z(3, 0).pow(2), &z(3, 0) * &z(3, 1)], vec![]),
        (
            "Span(z0^2 + z1 z2, z1^2 - z2^2) on z2 = 0",
            vec![&z(3, 0).pow(2) + &(&z(3, 1) * &z(3, 2)), &z(3, 1).pow(2) - &z(3, 2).pow(2)],
            vec![2],
        ),
    ];
    for (label, forms, j) in cases {
        let point = GrassPointFq::from_forms(5, &forms)?;
        let r = fiber_finite(&point, &j)?;
        let tag = if r.heuristic { " (heuristic)" } else { "" };
        println!("{label}: {:?}{tag}; {}", r.verdict, r.method);
    }
    Ok(())
}
