//! Seeded generators for random test instances.
//!
//! Every randomized suite in the crate draws from a [`ChaCha8Rng`] built by
//! [`seeded`], so a seed fully determines the instances. Coefficients come
//! from the small integer box `[-9, 9]`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::jet::JetPoly;
use crate::poly::MultiPoly;
use crate::scalar::{self, Scalar};
use crate::series::{CurveGerm, ReparamGerm, TruncatedSeries};
use crate::wronskian::WronskianInput;

pub const COEFF_BOX: i64 = 9;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coeff<R: Rng>(rng: &mut R) -> Scalar {
    scalar::int(rng.gen_range(-COEFF_BOX..=COEFF_BOX))
}

pub fn nonzero_coeff<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let v = rng.gen_range(-COEFF_BOX..=COEFF_BOX);
        if v != 0 {
            return scalar::int(v);
        }
    }
}

/// Occasionally a proper fraction, otherwise an integer from the box.
pub fn rational<R: Rng>(rng: &mut R) -> Scalar {
    if rng.gen_bool(0.25) {
        scalar::ratio(rng.gen_range(-COEFF_BOX..=COEFF_BOX), rng.gen_range(1..=4))
    } else {
        coeff(rng)
    }
}

fn exponent<R: Rng>(rng: &mut R, n: usize, max_deg: u32) -> Vec<u32> {
    let total = rng.gen_range(0..=max_deg);
    let mut e = vec![0; n];
    for _ in 0..total {
        e[rng.gen_range(0..n)] += 1;
    }
    e
}

/// Up to `max_terms` terms of total degree `<= max_deg`, integer coefficients.
pub fn poly<R: Rng>(rng: &mut R, n: usize, max_deg: u32, max_terms: usize) -> MultiPoly {
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut p = MultiPoly::zero(n);
    for _ in 0..terms {
        p.add_term(exponent(rng, n, max_deg), coeff(rng));
    }
    p
}

/// Homogeneous of degree `d` with at most `max_terms` terms.
pub fn homogeneous_poly<R: Rng>(rng: &mut R, n: usize, d: u32, max_terms: usize) -> MultiPoly {
    let monos = crate::poly::monomials_of_degree(n, d);
    let mut p = MultiPoly::zero(n);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let e = monos[rng.gen_range(0..monos.len())].clone();
        p.add_term(e, coeff(rng));
    }
    p
}

/// A jet polynomial of order `k`: coordinate part of degree `<= 2`,
/// jet part of total multiplicity `<= 3`.
pub fn jet_poly<R: Rng>(rng: &mut R, n: usize, k: usize, max_terms: usize) -> JetPoly {
    let slots = n * (k + 1);
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let mut e = vec![0u32; slots];
        for _ in 0..rng.gen_range(0..=2) {
            e[rng.gen_range(0..n) * (k + 1)] += 1;
        }
        if k > 0 {
            for _ in 0..rng.gen_range(0..=3) {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(1..=k);
                e[i * (k + 1) + j] += 1;
            }
        }
        terms.push((e, rational(rng)));
    }
    JetPoly::from_terms(n, k, terms).expect("slot count")
}

/// A jet polynomial homogeneous of weight `m` (zero is possible if all draws cancel).
pub fn homogeneous_jet_poly<R: Rng>(rng: &mut R, n: usize, k: usize, m: u32, max_terms: usize) -> JetPoly {
    assert!(k > 0 || m == 0, "positive weight needs k >= 1");
    let slots = n * (k + 1);
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let mut e = vec![0u32; slots];
        for _ in 0..rng.gen_range(0..=2) {
            e[rng.gen_range(0..n) * (k + 1)] += 1;
        }
        let mut left = m as usize;
        while left > 0 {
            let j = rng.gen_range(1..=k.min(left));
            e[rng.gen_range(0..n) * (k + 1) + j] += 1;
            left -= j;
        }
        terms.push((e, nonzero_coeff(rng)));
    }
    JetPoly::from_terms(n, k, terms).expect("slot count")
}

pub fn series<R: Rng>(rng: &mut R, order: usize) -> TruncatedSeries {
    TruncatedSeries::new(order, (0..=order).map(|_| rational(rng)).collect())
}

/// `phi(t) = a_1 t + a_2 t^2 + ...` with `a_1 != 0`.
pub fn reparam<R: Rng>(rng: &mut R, order: usize) -> ReparamGerm {
    let mut c = vec![scalar::zero(), nonzero_coeff(rng)];
    c.extend((2..=order).map(|_| coeff(rng)));
    ReparamGerm::new(TruncatedSeries::new(order, c)).expect("nondegenerate by construction")
}

pub fn germ<R: Rng>(rng: &mut R, n: usize, order: usize) -> CurveGerm {
    CurveGerm::new((0..n).map(|_| series(rng, order)).collect()).expect("shared order")
}

/// A germ based at `base`.
pub fn germ_at<R: Rng>(rng: &mut R, base: &[Scalar], order: usize) -> CurveGerm {
    let comps = base
        .iter()
        .map(|x| {
            let mut c = vec![x.clone()];
            c.extend((1..=order).map(|_| coeff(rng)));
            TruncatedSeries::new(order, c)
        })
        .collect();
    CurveGerm::new(comps).expect("shared order")
}

/// `k + 1` random polynomials in `n` variables of degree `<= max_deg`.
pub fn wronskian_input<R: Rng>(rng: &mut R, n: usize, k: usize, max_deg: u32) -> WronskianInput {
    WronskianInput::new((0..=k).map(|_| poly(rng, n, max_deg, 3)).collect()).expect("shared variable count")
}

pub fn point<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| scalar::int(rng.gen_range(-3..=3))).collect()
}
