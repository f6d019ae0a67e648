//! A Fermat-type complete intersection and a smoothness probe over F_p.
//!
//! Run with `cargo run --example fermat_family`.

use hyperjet::fermat::{build_family, smoothness_probe, FermatCoeffs, FermatSpec};
use hyperjet::random;

fn main() -> hyperjet::Result<()> {
    let spec = FermatSpec::new(3, 1, 1, 1, 1)?;
    let mut rng = random::seeded(5);
    let coeffs = vec![FermatCoeffs::random(&spec, &mut rng), FermatCoeffs::random(&spec, &mut rng)];
    let family = build_family(&[spec.clone(), spec], &coeffs)?;
    for (s, d) in family.sections.iter().zip(&family.degrees) {
        println!("degree {d}: {s}");
    }
    if let Some(h) = &family.hypotheses {
        println!("hypotheses: deltas {} eps {} r {} -> {}", h.deltas_ok, h.eps_ok, h.r_ok, h.verdict);
    }

    let probe = smoothness_probe(&family.sections, 500, 11, 0)?;
    println!("probe over F_11: {} points tested, {} rank drops", probe.tested, probe.failures.len());
    for w in probe.failures.iter().take(3) {
        println!("  singular point {:?} (rank {})", w.point, w.rank);
    }
    Ok(())
}
