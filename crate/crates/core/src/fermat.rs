//! Fermat-type sections and complete-intersection families.
//!
//! Given linear forms `tau_0, ..., tau_n` in general position on `P^n`, the
//! Fermat-type section with coefficients `a_I` (homogeneous of degree `eps`,
//! indexed by `|I| = delta`) is
//!
//! ```text
//! sigma(a) = sum_{|I| = delta} a_I * tau^{(r+k) I},   tau^J = prod_j tau_j^{J_j}
//! ```
//!
//! and is homogeneous of degree `m = eps + (r + k) delta`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{kjet_check, KjetVerdict};
use crate::error::{Error, Result};
use crate::ffield::{Elem, FfPoly, Gf};
use crate::linalg::rank_q;
use crate::poly::{monomials_of_degree, Exponent, MultiPoly, PolyDoc};
use crate::random;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatSpec {
    pub n: usize,
    pub eps: u32,
    pub delta: u32,
    pub r: u32,
    pub k: u32,
    tau: Vec<MultiPoly>,
}

impl FermatSpec {
    /// Uses the coordinate forms `z_0, ..., z_n` for `tau`.
    pub fn new(n: usize, eps: u32, delta: u32, r: u32, k: u32) -> Result<Self> {
        let tau = (0..=n).map(|j| MultiPoly::var(n + 1, j)).collect();
        Self::with_tau(n, eps, delta, r, k, tau)
    }

    pub fn with_tau(n: usize, eps: u32, delta: u32, r: u32, k: u32, tau: Vec<MultiPoly>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("ambient dimension must be >= 1".into()));
        }
        if r < 1 {
            return Err(Error::OutOfRange("r must be >= 1".into()));
        }
        if tau.len() != n + 1 {
            return Err(Error::Invalid(format!("expected {} linear forms, got {}", n + 1, tau.len())));
        }
        for t in &tau {
            if t.num_vars() != n + 1 {
                return Err(Error::VarMismatch { left: n + 1, right: t.num_vars() });
            }
            if t.is_zero() || !t.is_homogeneous_of(1) {
                return Err(Error::Invalid(format!("tau entry {t} is not a nonzero linear form")));
            }
        }
        if !in_general_position(&tau) {
            return Err(Error::Invalid("linear forms are not in general position".into()));
        }
        Ok(FermatSpec { n, eps, delta, r, k, tau })
    }

    pub fn tau(&self) -> &[MultiPoly] {
        &self.tau
    }

    /// `m = eps + (r + k) delta`.
    pub fn degree(&self) -> u32 {
        self.eps + (self.r + self.k) * self.delta
    }

    /// The multi-indices `I` with `|I| = delta` over `n + 1` slots.
    pub fn index_set(&self) -> Vec<Exponent> {
        monomials_of_degree(self.n + 1, self.delta)
    }
}

/// Every `n`-element subset of the `n + 1` forms is linearly independent.
pub fn in_general_position(tau: &[MultiPoly]) -> bool {
    let Some(first) = tau.first() else {
        return false;
    };
    let vars = first.num_vars();
    let vectors: Vec<Vec<crate::Scalar>> = tau
        .iter()
        .map(|t| {
            (0..vars)
                .map(|i| {
                    let mut e = vec![0; vars];
                    e[i] = 1;
                    t.coeff(&e)
                })
                .collect()
        })
        .collect();
    let need = tau.len().saturating_sub(1).min(vars);
    (0..tau.len()).all(|skip| {
        let sub: Vec<Vec<crate::Scalar>> =
            vectors.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect();
        rank_q(&sub) >= need
    })
}

/// Coefficients `a_I`, one homogeneous polynomial of degree `eps` per index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FermatCoeffs {
    pub entries: BTreeMap<Exponent, MultiPoly>,
}

impl FermatCoeffs {
    /// All coefficients zero.
    pub fn zeros(spec: &FermatSpec) -> Self {
        FermatCoeffs { entries: spec.index_set().into_iter().map(|i| (i, MultiPoly::zero(spec.n + 1))).collect() }
    }

    pub fn set(&mut self, index: Exponent, a: MultiPoly) {
        self.entries.insert(index, a);
    }

    /// Generic coefficients: each `a_I` is a random form of degree `eps`
    /// with coefficients from the integer box `[-9, 9]`.
    pub fn random<R: Rng>(spec: &FermatSpec, rng: &mut R) -> Self {
        FermatCoeffs {
            entries: spec
                .index_set()
                .into_iter()
                .map(|i| (i, random::homogeneous_poly(rng, spec.n + 1, spec.eps, 3)))
                .collect(),
        }
    }

    /// Termwise sum (indices must match).
    pub fn add(&self, other: &FermatCoeffs) -> FermatCoeffs {
        let mut out = self.clone();
        for (i, a) in &other.entries {
            let cur = out.entries.entry(i.clone()).or_insert_with(|| MultiPoly::zero(a.num_vars()));
            *cur = &*cur + a;
        }
        out
    }
}

/// `sigma(a) = sum_I a_I tau^{(r+k) I}`.
pub fn build_section(spec: &FermatSpec, a: &FermatCoeffs) -> Result<MultiPoly> {
    let vars = spec.n + 1;
    let expected = spec.index_set();
    for (idx, coeff) in &a.entries {
        if idx.len() != vars || idx.iter().sum::<u32>() != spec.delta {
            return Err(Error::Invalid(format!("index {idx:?} is not a multi-index of weight {}", spec.delta)));
        }
        if coeff.num_vars() != vars {
            return Err(Error::VarMismatch { left: vars, right: coeff.num_vars() });
        }
        if !coeff.is_homogeneous_of(spec.eps) {
            return Err(Error::Invalid(format!("coefficient {coeff} is not homogeneous of degree {}", spec.eps)));
        }
    }
    if a.entries.len() != expected.len() || expected.iter().any(|i| !a.entries.contains_key(i)) {
        return Err(Error::Invalid(format!(
            "coefficient map must cover exactly the {} indices of weight {}",
            expected.len(),
            spec.delta
        )));
    }
    let power = spec.r + spec.k;
    let mut tau_pows: Vec<BTreeMap<u32, MultiPoly>> = vec![BTreeMap::new(); vars];
    let mut sigma = MultiPoly::zero(vars);
    for (idx, coeff) in &a.entries {
        if coeff.is_zero() {
            continue;
        }
        let mut term = coeff.clone();
        for (j, &ij) in idx.iter().enumerate() {
            if ij == 0 {
                continue;
            }
            let e = power * ij;
            let tp = tau_pows[j].entry(e).or_insert_with(|| spec.tau[j].pow(e));
            term = &term * tp;
        }
        sigma = &sigma + &term;
    }
    debug_assert!(sigma.is_homogeneous_of(spec.degree()));
    Ok(sigma)
}

/// The sections of a complete-intersection family plus the hypothesis check
/// for almost jet ampleness where it applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub sections: Vec<MultiPoly>,
    pub degrees: Vec<u32>,
    /// `None` when the codimension is outside `1..=n-1` or the specs use different `r`.
    pub hypotheses: Option<KjetVerdict>,
}

pub fn build_family(specs: &[FermatSpec], coeffs: &[FermatCoeffs]) -> Result<FamilyReport> {
    let Some(first) = specs.first() else {
        return Err(Error::Invalid("a family needs at least one section".into()));
    };
    if specs.len() != coeffs.len() {
        return Err(Error::Invalid(format!("{} specs but {} coefficient maps", specs.len(), coeffs.len())));
    }
    let n = first.n;
    if let Some(bad) = specs.iter().find(|s| s.n != n) {
        return Err(Error::VarMismatch { left: n + 1, right: bad.n + 1 });
    }
    let sections = specs.iter().zip(coeffs).map(|(s, a)| build_section(s, a)).collect::<Result<Vec<_>>>()?;
    let degrees = specs.iter().map(FermatSpec::degree).collect();
    let c = specs.len();
    let hypotheses = if c < n && specs.iter().all(|s| s.r == first.r) {
        let eps: Vec<BigUint> = specs.iter().map(|s| BigUint::from(s.eps)).collect();
        let deltas: Vec<BigUint> = specs.iter().map(|s| BigUint::from(s.delta)).collect();
        if deltas.iter().any(|d| *d == BigUint::from(0u32)) {
            None
        } else {
            Some(kjet_check(n, c, &eps, &deltas, &BigUint::from(first.r))?)
        }
    } else {
        None
    };
    Ok(FamilyReport { sections, degrees, hypotheses })
}

/// A sampled point of the common zero locus where the Jacobian drops rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankDrop {
    /// Projective coordinates normalized so the first nonzero entry is 1.
    pub point: Vec<u64>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub p: u64,
    pub seed: u64,
    pub trials: usize,
    /// Number of zero-locus points actually found and tested.
    pub tested: usize,
    pub failures: Vec<RankDrop>,
}

/// Monte Carlo smoothness check of `{sigma_1 = ... = sigma_c = 0}` over `F_p`.
///
/// Each trial fixes random values for all coordinates but one and solves the
/// first section for the remaining coordinate by exhaustive search; further
/// sections are handled by rejection. At each point found, the `c x (n+1)`
/// Jacobian must have rank `c`.
pub fn smoothness_probe(sections: &[MultiPoly], trials: usize, p: u64, seed: u64) -> Result<ProbeReport> {
    let field = Gf::prime(p)?;
    let Some(first) = sections.first() else {
        return Err(Error::Invalid("no sections to probe".into()));
    };
    let vars = first.num_vars();
    if let Some(bad) = sections.iter().find(|s| s.num_vars() != vars) {
        return Err(Error::VarMismatch { left: vars, right: bad.num_vars() });
    }
    let reduced = sections.iter().map(|s| FfPoly::reduce(&field, s)).collect::<Result<Vec<_>>>()?;
    let jacobian: Vec<Vec<FfPoly>> =
        reduced.iter().map(|s| (0..vars).map(|i| s.partial(&field, i)).collect()).collect();
    let mut rng = random::seeded(seed);
    let mut report = ProbeReport { p, seed, trials, tested: 0, failures: Vec::new() };
    for _ in 0..trials {
        let Some(point) = sample_zero(&field, &reduced, vars, &mut rng) else {
            continue;
        };
        report.tested += 1;
        let rows: Vec<Vec<Elem>> =
            jacobian.iter().map(|row| row.iter().map(|d| d.eval(&field, &point)).collect()).collect();
        let rank = field.rank(rows);
        if rank < sections.len() {
            report.failures.push(RankDrop { point: normalize(&field, &point), rank });
        }
    }
    Ok(report)
}

fn sample_zero<R: Rng>(field: &Gf, sections: &[FfPoly], vars: usize, rng: &mut R) -> Option<Vec<Elem>> {
    let p = field.characteristic();
    let solve = rng.gen_range(0..vars);
    let mut point: Vec<Elem> = (0..vars).map(|_| field.from_base(rng.gen_range(0..p))).collect();
    let roots: Vec<u64> = (0..p)
        .filter(|&v| {
            point[solve] = field.from_base(v);
            field.is_zero(sections[0].eval(field, &point))
        })
        .collect();
    if roots.is_empty() {
        return None;
    }
    point[solve] = field.from_base(roots[rng.gen_range(0..roots.len())]);
    if point.iter().all(|&x| field.is_zero(x)) {
        return None;
    }
    sections[1..].iter().all(|s| field.is_zero(s.eval(field, &point))).then_some(point)
}

fn normalize(field: &Gf, point: &[Elem]) -> Vec<u64> {
    let lead = point.iter().copied().find(|&x| !field.is_zero(x)).expect("nonzero point");
    let inv = field.inv(lead).expect("nonzero");
    point.iter().map(|&x| field.mul(x, inv).0).collect()
}

/// Interchange document for one Fermat-type section. `coeffs` is keyed by
/// comma-separated index strings such as `"2,0,1"`; when absent, generic
/// coefficients are drawn from the seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatDoc {
    pub n: usize,
    pub eps: u32,
    pub delta: u32,
    pub r: u32,
    pub k: u32,
    #[serde(default)]
    pub tau: Option<Vec<PolyDoc>>,
    #[serde(default)]
    pub coeffs: Option<BTreeMap<String, PolyDoc>>,
}

impl FermatDoc {
    pub fn spec(&self) -> Result<FermatSpec> {
        match &self.tau {
            None => FermatSpec::new(self.n, self.eps, self.delta, self.r, self.k),
            Some(t) => {
                let tau = t.iter().map(MultiPoly::try_from).collect::<Result<Vec<_>>>()?;
                FermatSpec::with_tau(self.n, self.eps, self.delta, self.r, self.k, tau)
            }
        }
    }

    /// Explicit coefficients if given, otherwise generic ones from `rng`.
    pub fn coeffs<R: Rng>(&self, spec: &FermatSpec, rng: &mut R) -> Result<FermatCoeffs> {
        let Some(map) = &self.coeffs else {
            return Ok(FermatCoeffs::random(spec, rng));
        };
        let mut out = FermatCoeffs::default();
        for (key, doc) in map {
            out.set(parse_index(key)?, MultiPoly::try_from(doc)?);
        }
        Ok(out)
    }
}

pub fn parse_index(key: &str) -> Result<Exponent> {
    key.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("bad index key {key:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(spec: &FermatSpec) -> FermatCoeffs {
        FermatCoeffs { entries: spec.index_set().into_iter().map(|i| (i, MultiPoly::one(spec.n + 1))).collect() }
    }

    #[test]
    fn conic_example() {
        let spec = FermatSpec::new(1, 0, 1, 1, 1).unwrap();
        let s = build_section(&spec, &ones(&spec)).unwrap();
        assert_eq!(s, MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 2], 1)]));
        assert_eq!(spec.degree(), 2);
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let spec = FermatSpec::new(2, 1, 2, 1, 1).unwrap();
        assert!(build_section(&spec, &FermatCoeffs::zeros(&spec)).unwrap().is_zero());
    }

    #[test]
    fn single_term_example() {
        let spec = FermatSpec::new(2, 1, 1, 2, 1).unwrap();
        let mut a = FermatCoeffs::zeros(&spec);
        a.set(vec![1, 0, 0], MultiPoly::var(3, 2));
        let s = build_section(&spec, &a).unwrap();
        assert_eq!(s, MultiPoly::from_int_terms(3, &[(&[3, 0, 1], 1)]));
        assert_eq!(s.homogeneous_degree(), Some(4));
    }

    #[test]
    fn rejects_bad_coefficients() {
        let spec = FermatSpec::new(1, 1, 1, 1, 0).unwrap();
        let mut a = FermatCoeffs::zeros(&spec);
        a.set(vec![1, 0], MultiPoly::one(2));
        assert!(build_section(&spec, &a).is_err());
        let mut a = FermatCoeffs::zeros(&spec);
        a.entries.remove(&vec![0, 1]);
        assert!(build_section(&spec, &a).is_err());
        let mut a = FermatCoeffs::zeros(&spec);
        a.set(vec![2, 0], MultiPoly::zero(2));
        assert!(build_section(&spec, &a).is_err());
    }

    #[test]
    fn general_position() {
        let coords: Vec<MultiPoly> = (0..3).map(|j| MultiPoly::var(3, j)).collect();
        assert!(in_general_position(&coords));
        let mut bad = coords.clone();
        bad[2] = MultiPoly::var(3, 1);
        assert!(!in_general_position(&bad));
        assert!(FermatSpec::with_tau(2, 0, 1, 1, 1, bad).is_err());
        let mut sum = coords;
        sum[2] = &(&MultiPoly::var(3, 0) + &MultiPoly::var(3, 1)) + &MultiPoly::var(3, 2);
        assert!(in_general_position(&sum));
    }

    #[test]
    fn family_reduces_to_sections() {
        let spec = FermatSpec::new(1, 0, 1, 1, 1).unwrap();
        let fam = build_family(std::slice::from_ref(&spec), &[ones(&spec)]).unwrap();
        assert_eq!(fam.sections, vec![build_section(&spec, &ones(&spec)).unwrap()]);
        assert!(build_family(&[], &[]).is_err());

        let spec2 = FermatSpec::new(2, 0, 1, 1, 1).unwrap();
        let mut rng = random::seeded(3);
        let a = FermatCoeffs::random(&spec2, &mut rng);
        let b = FermatCoeffs::random(&spec2, &mut rng);
        let fam = build_family(&[spec2.clone(), spec2.clone()], &[a, b]).unwrap();
        assert_eq!(fam.degrees, vec![2, 2]);
        assert!(fam.sections.iter().all(|s| s.is_homogeneous_of(2)));
        assert!(fam.hypotheses.is_none(), "c = 2 is not below n = 2");
        assert!(build_family(&[spec, spec2.clone()], &[ones(&spec2), ones(&spec2)]).is_err());
    }

    #[test]
    fn probe_smooth_quadric() {
        let q = MultiPoly::from_int_terms(3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        let r = smoothness_probe(&[q], 100, 7, 0).unwrap();
        assert!(r.tested > 0);
        assert!(r.failures.is_empty());
    }

    #[test]
    fn probe_double_hyperplane() {
        let q = MultiPoly::from_int_terms(3, &[(&[2, 0, 0], 1)]);
        let r = smoothness_probe(&[q], 100, 7, 0).unwrap();
        assert!(!r.failures.is_empty());
        assert!(r.failures.iter().all(|w| w.point[0] == 0 && w.rank == 0));
    }

    #[test]
    fn probe_zero_trials_and_bad_prime() {
        let q = MultiPoly::from_int_terms(3, &[(&[2, 0, 0], 1)]);
        let r = smoothness_probe(std::slice::from_ref(&q), 0, 7, 0).unwrap();
        assert_eq!((r.tested, r.failures.len()), (0, 0));
        assert!(smoothness_probe(std::slice::from_ref(&q), 1, 8, 0).is_err());
        let half = q.scale(&crate::scalar::ratio(1, 7));
        assert_eq!(smoothness_probe(&[half], 1, 7, 0).unwrap_err(), Error::BadPrime { p: 7 });
    }

    #[test]
    fn parse_index_keys() {
        assert_eq!(parse_index("2,0,1").unwrap(), vec![2, 0, 1]);
        assert!(parse_index("2,x").is_err());
    }
}
