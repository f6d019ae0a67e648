//! Effective degree bounds, the degree decomposition, and the hypothesis
//! checker for almost jet ampleness of complete intersections.
//!
//! All arithmetic is on [`BigUint`]; no bound ever overflows.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn big(v: usize) -> BigUint {
    BigUint::from(v)
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_big_opt<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_big_vec<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_big_map<S: Serializer>(v: &BTreeMap<String, BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(v.iter().map(|(k, x)| (k, x.to_string())))
}

pub fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Kobayashi,
    Debarre,
    DiverioTrapani,
}

/// A bound together with every intermediate constant used to reach it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub n: usize,
    pub c: usize,
    pub k: usize,
    pub delta0: usize,
    #[serde(serialize_with = "ser_big")]
    pub exact: BigUint,
    #[serde(serialize_with = "ser_big_opt")]
    pub simplified: Option<BigUint>,
    /// Named intermediate constants (`M`, `R`, `m_inf`, ...).
    #[serde(serialize_with = "ser_big_map")]
    pub params: BTreeMap<String, BigUint>,
    /// Coefficients `b_i` where the construction uses them.
    #[serde(serialize_with = "ser_big_vec")]
    pub b: Vec<BigUint>,
    /// Whether independent formula routes for `exact` agree.
    pub routes_agree: bool,
}

impl BoundReport {
    /// `exact <= simplified` (vacuously true without a simplified value).
    pub fn within_simplified(&self) -> bool {
        self.simplified.as_ref().is_none_or(|s| self.exact <= *s)
    }

    pub fn passes(&self) -> bool {
        self.routes_agree && self.within_simplified()
    }
}

/// `d0 = delta0 (c (k+1) (k + delta0 + k delta0 - 1) delta0^{c(k+1)-1} + 1 + k) + k`.
pub fn threshold_degree(c: usize, k: usize, delta0: usize) -> BigUint {
    let d0 = big(delta0);
    let inner = big(c) * big(k + 1) * big(k + delta0 + k * delta0 - 1) * d0.pow((c * (k + 1) - 1) as u32) + big(1 + k);
    &d0 * inner + big(k)
}

/// Degree bound for Kobayashi hyperbolicity of a general hypersurface in
/// `|A^d|` on a projective manifold of dimension `n`.
///
/// Uses jet order `k = n - 1`, auxiliary degree `delta = n^2`, the Wronskian
/// stabilization order `m_inf = k` and the effective base-locus threshold
/// `M = delta^k`.
pub fn kobayashi_bound(n: usize) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("kobayashi bound needs n >= 2, got {n}")));
    }
    let k = n - 1;
    let delta = n * n;
    let m_inf = big(crate::wronskian::asymptotic_wronskian_order(k));
    let d = big(delta);
    let big_m = d.pow(k as u32);
    let big_r = &big_m * big(k + 1) * (&m_inf + &d - 1u32 + big(k) * &d) + 1u32;
    let exact = &m_inf + &d + (&big_r + big(k)) * &d;

    // Second route: the expanded polynomial form in n alone.
    let nb = big(n);
    let closed = nb.pow(2 * n as u32 + 1) * (nb.pow(3) + &nb - 2u32) + nb.pow(3) + nb.pow(2) + &nb - 1u32;
    let simplified = nb.pow(2 * n as u32 + 3) * big(n + 1);

    let mut params = BTreeMap::new();
    params.insert("delta".into(), d);
    params.insert("m_inf".into(), m_inf);
    params.insert("M".into(), big_m);
    params.insert("R".into(), big_r);
    params.insert("closed_form".into(), closed.clone());
    Ok(BoundReport {
        kind: BoundKind::Kobayashi,
        n,
        c: 1,
        k,
        delta0: delta,
        routes_agree: closed == exact,
        exact,
        simplified: Some(simplified),
        params,
        b: Vec::new(),
    })
}

/// Degree bound for ampleness of the cotangent bundle of general complete
/// intersections, via `c = ceil(n/2)`, `k = 1`, `delta0 = 2n - 1`.
pub fn debarre_bound(n: usize) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("debarre bound needs n >= 2, got {n}")));
    }
    let c = ceil_div(n, 2);
    let k = 1;
    let delta0 = 2 * n - 1;
    let d0 = big(delta0);
    let direct = big(4) * d0.pow(2 * c as u32 + 1) * big(c) + big(2) * &d0 + 1u32;
    let generic = threshold_degree(c, k, delta0);
    let intermediate = big(2) * d0.pow(n as u32 + 2) * big(n + 1) + big(4 * n - 1);
    let simplified = big(2 * n).pow(n as u32 + 3);
    let mut params = BTreeMap::new();
    params.insert("generic_formula".into(), generic.clone());
    params.insert("intermediate".into(), intermediate);
    Ok(BoundReport {
        kind: BoundKind::Debarre,
        n,
        c,
        k,
        delta0,
        routes_agree: direct == generic,
        exact: direct,
        simplified: Some(simplified),
        params,
        b: vec![d0.pow((c * (k + 1) - 1) as u32); c],
    })
}

/// Degree bound for almost `k`-jet ampleness of general complete
/// intersections of codimension `c` in `P^n`, with `k = ceil(n/c) - 1`
/// and `delta0 = n(k+1)`.
pub fn dt_bound(n: usize, c: usize) -> Result<BoundReport> {
    if c < 1 || c + 1 > n {
        return Err(Error::OutOfRange(format!("need 1 <= c <= n - 1, got n = {n}, c = {c}")));
    }
    let q = ceil_div(n, c);
    let k = q - 1;
    let delta0 = n * (k + 1);
    let exact = threshold_degree(c, k, delta0);
    let d0 = big(delta0);
    let intermediate = d0.pow((c * (k + 1)) as u32) * big(c) * big(k + 1).pow(2) * big(delta0 + 1);
    let simplified = big(2 * c) * big(n).pow((c * q + 1) as u32) * big(q).pow((c * q + 3) as u32);
    let mut params = BTreeMap::new();
    params.insert("intermediate".into(), intermediate.clone());
    Ok(BoundReport {
        kind: BoundKind::DiverioTrapani,
        n,
        c,
        k,
        delta0,
        routes_agree: exact <= intermediate,
        exact,
        simplified: Some(simplified),
        params,
        b: vec![d0.pow((c * (k + 1) - 1) as u32); c],
    })
}

/// `b_i = (prod_j delta_j^{k+1}) / delta_i`.
pub fn b_coeffs(deltas: &[usize], k: usize) -> Result<Vec<BigUint>> {
    if deltas.contains(&0) {
        return Err(Error::OutOfRange("all delta_j must be >= 1".into()));
    }
    let prod: BigUint = deltas.iter().map(|&d| big(d).pow(k as u32 + 1)).product();
    Ok(deltas
        .iter()
        .map(|&d| {
            let (q, r) = prod.div_rem(&big(d));
            debug_assert!(r.is_zero());
            q
        })
        .collect())
}

/// `sum_i b_i (k+1) (eps_i + k delta_i)`, the quantity `r` must exceed.
pub fn r_threshold(b: &[BigUint], k: usize, eps: &[BigUint], deltas: &[BigUint]) -> BigUint {
    b.iter().zip(eps).zip(deltas).map(|((bi, e), d)| bi * big(k + 1) * (e + big(k) * d)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Decomposition {
    Feasible {
        #[serde(serialize_with = "ser_big")]
        eps: BigUint,
        #[serde(serialize_with = "ser_big")]
        r: BigUint,
        delta0: usize,
        k: usize,
        #[serde(serialize_with = "ser_big")]
        d0: BigUint,
        #[serde(serialize_with = "ser_big_vec")]
        b: Vec<BigUint>,
        /// `sum_i b_i (k+1)(eps + k delta0)`.
        #[serde(serialize_with = "ser_big")]
        r_bound: BigUint,
        /// Whether `r > r_bound` holds.
        r_condition: bool,
    },
    Infeasible {
        #[serde(serialize_with = "ser_big")]
        d0: BigUint,
    },
}

/// Writes `d = delta0 (r + k) + eps` with `k <= eps < k + delta0`, using
/// equal `delta_i = delta0` and equal `eps_i = eps`. Degrees below the
/// threshold `d0` are reported infeasible.
pub fn decompose(d: &BigUint, n: usize, c: usize) -> Result<Decomposition> {
    let report = dt_bound(n, c)?;
    let (k, delta0, d0) = (report.k, report.delta0, report.exact);
    if *d < d0 {
        return Ok(Decomposition::Infeasible { d0 });
    }
    let dd = big(delta0);
    let kk = big(k);
    // eps is the unique value in [k, k + delta0) congruent to d mod delta0.
    let eps = &kk + (d - &kk) % &dd;
    let matches = (k..k + delta0)
        .filter(|&e| {
            let rest = d - big(e) - &kk * &dd;
            (rest % &dd).is_zero()
        })
        .count();
    assert_eq!(matches, 1, "residue window must contain exactly one admissible eps");
    let r = (d - &eps) / &dd - &kk;
    debug_assert_eq!(&dd * (&r + &kk) + &eps, *d);
    let b = report.b;
    let eps_list = vec![eps.clone(); c];
    let delta_list = vec![dd.clone(); c];
    let r_bound = r_threshold(&b, k, &eps_list, &delta_list);
    Ok(Decomposition::Feasible { r_condition: r > r_bound, eps, r, delta0, k, d0, b, r_bound })
}

/// Per-condition outcome of the jet-ampleness hypothesis check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KjetVerdict {
    pub n: usize,
    pub c: usize,
    pub k: usize,
    pub delta0: usize,
    /// `delta_i >= n(k+1)` for all `i`.
    pub deltas_ok: bool,
    /// `eps_i >= k` for all `i`.
    pub eps_ok: bool,
    /// `r > sum_i b_i (k+1)(eps_i + k delta_i)`.
    pub r_ok: bool,
    #[serde(serialize_with = "ser_big_vec")]
    pub b: Vec<BigUint>,
    #[serde(serialize_with = "ser_big")]
    pub r_bound: BigUint,
    /// `d_i = eps_i + (r + k) delta_i`.
    #[serde(serialize_with = "ser_big_vec")]
    pub degrees: Vec<BigUint>,
    pub verdict: bool,
}

pub fn kjet_check(n: usize, c: usize, eps: &[BigUint], deltas: &[BigUint], r: &BigUint) -> Result<KjetVerdict> {
    if c < 1 || c + 1 > n {
        return Err(Error::OutOfRange(format!("need 1 <= c <= n - 1, got n = {n}, c = {c}")));
    }
    if eps.len() != c || deltas.len() != c {
        return Err(Error::Invalid(format!("expected {c} entries, got {} eps and {} deltas", eps.len(), deltas.len())));
    }
    if deltas.iter().any(Zero::is_zero) {
        return Err(Error::OutOfRange("all delta_i must be >= 1".into()));
    }
    let k = ceil_div(n, c) - 1;
    let delta0 = n * (k + 1);
    let deltas_ok = deltas.iter().all(|d| *d >= big(delta0));
    let eps_ok = eps.iter().all(|e| *e >= big(k));
    let prod: BigUint = deltas.iter().map(|d| d.pow(k as u32 + 1)).product();
    let b: Vec<BigUint> = deltas.iter().map(|d| &prod / d).collect();
    let r_bound = r_threshold(&b, k, eps, deltas);
    let r_ok = *r > r_bound;
    let degrees = eps.iter().zip(deltas).map(|(e, d)| e + (r + big(k)) * d).collect();
    Ok(KjetVerdict {
        n,
        c,
        k,
        delta0,
        deltas_ok,
        eps_ok,
        r_ok,
        b,
        r_bound,
        degrees,
        verdict: deltas_ok && eps_ok && r_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn kobayashi_small() {
        let r = kobayashi_bound(2).unwrap();
        assert_eq!((r.exact.clone(), r.simplified.clone().unwrap()), (b(269), b(384)));
        assert!(r.passes());
        assert_eq!(r.params["M"], b(4));
        let r = kobayashi_bound(3).unwrap();
        assert_eq!((r.exact.clone(), r.simplified.clone().unwrap()), (b(61274), b(78732)));
        assert!(kobayashi_bound(1).is_err());
    }

    #[test]
    fn debarre_small() {
        let r = debarre_bound(3).unwrap();
        assert_eq!((r.exact.clone(), r.simplified.clone().unwrap()), (b(25011), b(46656)));
        assert!(r.routes_agree);
        assert_eq!(debarre_bound(2).unwrap().exact, b(115));
        assert_eq!(debarre_bound(2).unwrap().simplified, Some(b(1024)));
    }

    #[test]
    fn dt_small() {
        let r = dt_bound(3, 1).unwrap();
        assert_eq!((r.k, r.delta0), (2, 9));
        assert_eq!((r.exact.clone(), r.simplified.clone().unwrap()), (b(61265), b(118098)));
        assert_eq!(dt_bound(2, 1).unwrap().exact, b(265));
        assert!(dt_bound(3, 3).is_err());
        assert!(dt_bound(3, 0).is_err());
    }

    #[test]
    fn b_coeff_examples() {
        assert_eq!(b_coeffs(&[2, 3], 1).unwrap(), vec![b(18), b(12)]);
        assert_eq!(b_coeffs(&[5], 3).unwrap(), vec![b(125)]);
        assert_eq!(b_coeffs(&[1, 1, 1], 4).unwrap(), vec![b(1); 3]);
    }

    #[test]
    fn decompose_threshold_case() {
        match decompose(&b(265), 2, 1).unwrap() {
            Decomposition::Feasible { eps, r, delta0, k, r_bound, r_condition, .. } => {
                assert_eq!((eps, r, delta0, k), (b(1), b(65), 4, 1));
                assert_eq!(r_bound, b(40));
                assert!(r_condition);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(decompose(&b(264), 2, 1).unwrap(), Decomposition::Infeasible { d0: b(265) });
        assert!(matches!(decompose(&b(100), 2, 1).unwrap(), Decomposition::Infeasible { .. }));
    }

    #[test]
    fn kjet_examples() {
        let v = kjet_check(2, 1, &[b(1)], &[b(4)], &b(65)).unwrap();
        assert!(v.verdict);
        assert_eq!(v.degrees, vec![b(265)]);
        let v = kjet_check(2, 1, &[b(1)], &[b(4)], &b(0)).unwrap();
        assert!(!v.r_ok && !v.verdict);
        let v = kjet_check(2, 1, &[b(1)], &[b(3)], &b(1000)).unwrap();
        assert!(!v.deltas_ok && !v.verdict);
        assert!(kjet_check(3, 1, &[b(1), b(2)], &[b(9)], &b(1)).is_err());
    }
}
