//! Wronskian operators on polynomial sections and the identities they obey.
//!
//! `W(g_0, ..., g_k)` is the determinant of the `(k+1) x (k+1)` matrix whose
//! row `i` holds `D^i(g_0), ..., D^i(g_k)`. It is an invariant jet
//! differential of order `k` and weighted degree `k(k+1)/2`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{JetPoly, JetSpace};
use crate::linalg::{det_cofactor, det_leibniz};
use crate::poly::{MultiPoly, PolyDoc};
use crate::scalar::{self, ser_scalar, ser_scalars, Scalar};
use crate::series::{poly_eval_germ, CurveGerm, ReparamGerm, TruncatedSeries};

/// Stabilization order of the asymptotic Wronskian ideal: `m_inf = k`.
pub fn asymptotic_wronskian_order(k: usize) -> usize {
    k
}

/// Weighted degree `k(k+1)/2` of a Wronskian of order `k`.
pub fn wronskian_weight(k: usize) -> usize {
    k * (k + 1) / 2
}

/// `k + 1` polynomials in a shared set of `n` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WronskianInput {
    k: usize,
    g: Vec<MultiPoly>,
}

impl WronskianInput {
    pub fn new(g: Vec<MultiPoly>) -> Result<Self> {
        let Some(first) = g.first() else {
            return Err(Error::Invalid("a Wronskian needs at least one function".into()));
        };
        let n = first.num_vars();
        if n == 0 {
            return Err(Error::Invalid("functions must have at least one variable".into()));
        }
        for p in &g {
            if p.num_vars() != n {
                return Err(Error::VarMismatch { left: n, right: p.num_vars() });
            }
        }
        Ok(WronskianInput { k: g.len() - 1, g })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.g[0].num_vars()
    }

    pub fn functions(&self) -> &[MultiPoly] {
        &self.g
    }

    fn with_functions(&self, g: Vec<MultiPoly>) -> WronskianInput {
        WronskianInput { k: self.k, g }
    }

    pub fn to_doc(&self) -> WronskianDoc {
        WronskianDoc { k: Some(self.k), g: self.g.iter().map(PolyDoc::from).collect() }
    }

    pub fn from_doc(doc: &WronskianDoc) -> Result<Self> {
        let g = doc.g.iter().map(MultiPoly::try_from).collect::<Result<Vec<_>>>()?;
        let inp = Self::new(g)?;
        if let Some(k) = doc.k {
            if k != inp.k {
                return Err(Error::Invalid(format!("k = {k} but {} functions given", inp.g.len())));
            }
        }
        Ok(inp)
    }
}

/// Interchange form: `{"k": k, "g": [poly, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WronskianDoc {
    #[serde(default)]
    pub k: Option<usize>,
    pub g: Vec<PolyDoc>,
}

/// The Wronskian as a jet polynomial of order `k`.
pub fn wronskian(inp: &WronskianInput) -> JetPoly {
    let space = JetSpace::new(inp.n(), inp.k);
    let matrix: Vec<Vec<JetPoly>> = (0..=inp.k)
        .map(|i| inp.g.iter().map(|g| space.d_pow(g, i).expect("i <= k and variable counts agree")).collect())
        .collect();
    det_cofactor(&matrix)
}

/// The classical univariate Wronskian of the composed series `g_j ∘ f`,
/// truncated at order `trunc`. Uses the permutation expansion and series
/// derivatives only, so it shares no code path with [`wronskian`].
pub fn wronskian_series_oracle(inp: &WronskianInput, f: &CurveGerm, trunc: usize) -> Result<TruncatedSeries> {
    let need = inp.k + trunc;
    if f.order() < need {
        return Err(Error::InsufficientOrder { have: f.order(), need });
    }
    let composed = inp.g.iter().map(|g| poly_eval_germ(g, f)).collect::<Result<Vec<_>>>()?;
    let mut matrix: Vec<Vec<TruncatedSeries>> = Vec::with_capacity(inp.k + 1);
    let mut row = composed;
    for i in 0..=inp.k {
        if i > 0 {
            row = row.iter().map(TruncatedSeries::derivative).collect::<Result<Vec<_>>>()?;
        }
        matrix.push(row.iter().map(|s| s.truncate(trunc)).collect());
    }
    Ok(det_leibniz(&matrix))
}

/// Exact comparison `lhs == rhs` of two rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    #[serde(serialize_with = "ser_scalar")]
    pub lhs: Scalar,
    #[serde(serialize_with = "ser_scalar")]
    pub rhs: Scalar,
    pub equal: bool,
}

impl Comparison {
    pub fn new(lhs: Scalar, rhs: Scalar) -> Self {
        let equal = lhs == rhs;
        Comparison { lhs, rhs, equal }
    }
}

fn value_at_origin(q: &JetPoly, f: &CurveGerm) -> Result<Scalar> {
    Ok(q.eval_on_germ(f, 0)?.constant_term().clone())
}

/// Compares `W([f∘phi])(0)` with `phi'(0)^{k(k+1)/2} W([f])(0)`.
pub fn check_reparam_invariance(inp: &WronskianInput, f: &CurveGerm, phi: &ReparamGerm) -> Result<Comparison> {
    let w = wronskian(inp);
    let reparam = f.reparametrize(phi);
    let lhs = value_at_origin(&w, &reparam)?;
    let factor = scalar::pow(phi.linear_coeff(), wronskian_weight(inp.k));
    let rhs = factor * value_at_origin(&w, f)?;
    Ok(Comparison::new(lhs, rhs))
}

/// Compares `W(h g_0, ..., h g_k)([f])(0)` with `h(f(0))^{k+1} W(g)([f])(0)`
/// for a function `h` that does not vanish at the base point.
pub fn check_unit_scaling(inp: &WronskianInput, h: &MultiPoly, f: &CurveGerm) -> Result<Comparison> {
    let h0 = h.eval(&f.base_point())?;
    if h0.is_zero() {
        return Err(Error::Invalid("the scaling function vanishes at the germ base point".into()));
    }
    let scaled = inp.with_functions(inp.g.iter().map(|g| h * g).collect());
    let lhs = value_at_origin(&wronskian(&scaled), f)?;
    let rhs = scalar::pow(&h0, inp.k + 1) * value_at_origin(&wronskian(inp), f)?;
    Ok(Comparison::new(lhs, rhs))
}

/// The order-`k` Taylor truncation of a polynomial at a base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetOfSection {
    pub base: Vec<Scalar>,
    pub order: usize,
    /// Polynomial in the shifted variables `w = z - base`, total degree `<= order`.
    pub shifted: MultiPoly,
}

impl JetOfSection {
    /// The truncation rewritten in the original coordinates `z`.
    pub fn to_absolute(&self) -> MultiPoly {
        let neg: Vec<Scalar> = self.base.iter().map(|x| -x.clone()).collect();
        self.shifted.translate(&neg).expect("dimensions agree")
    }
}

/// `sum_{|a| <= k} (1/a!) d^a g(x) (z - x)^a`.
pub fn jet_truncate(g: &MultiPoly, x: &[Scalar], k: usize) -> Result<JetOfSection> {
    let shifted = g.translate(x)?.truncate_degree(k as u32);
    Ok(JetOfSection { base: x.to_vec(), order: k, shifted })
}

/// Values of two Wronskians on germs sharing one base point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JetDependenceReport {
    pub samples: Vec<Comparison>,
    pub equal: bool,
}

/// Checks that perturbing `g_0` by `h` (vanishing to order `k+1` at `x`)
/// leaves the Wronskian's value at `t = 0` unchanged on each germ based at `x`.
pub fn check_jet_dependence(
    inp: &WronskianInput,
    h: &MultiPoly,
    x: &[Scalar],
    germs: &[CurveGerm],
) -> Result<JetDependenceReport> {
    if h.num_vars() != inp.n() || x.len() != inp.n() {
        return Err(Error::VarMismatch { left: inp.n(), right: h.num_vars().min(x.len()) });
    }
    let shifted = h.translate(x)?;
    if let Some(ord) = shifted.min_degree() {
        if (ord as usize) < inp.k + 1 {
            return Err(Error::PerturbationOrder { needed: inp.k + 1 });
        }
    }
    let mut perturbed = inp.g.clone();
    perturbed[0] = &perturbed[0] + h;
    let w = wronskian(inp);
    let wp = wronskian(&inp.with_functions(perturbed));
    let mut samples = Vec::with_capacity(germs.len());
    for f in germs {
        if f.base_point() != x {
            return Err(Error::Invalid("germ is not based at the perturbation point".into()));
        }
        samples.push(Comparison::new(value_at_origin(&wp, f)?, value_at_origin(&w, f)?));
    }
    let equal = samples.iter().all(|c| c.equal);
    Ok(JetDependenceReport { samples, equal })
}

/// Exact equality of two series, with both sides kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesComparison {
    #[serde(serialize_with = "ser_scalars")]
    pub lhs: Vec<Scalar>,
    #[serde(serialize_with = "ser_scalars")]
    pub rhs: Vec<Scalar>,
    pub equal: bool,
}

/// `eval_on_germ(wronskian(inp), f, trunc)` against the series oracle.
pub fn check_oracle(inp: &WronskianInput, f: &CurveGerm, trunc: usize) -> Result<SeriesComparison> {
    let lhs = wronskian(inp).eval_on_germ(f, trunc)?;
    let rhs = wronskian_series_oracle(inp, f, trunc)?;
    Ok(SeriesComparison { equal: lhs == rhs, lhs: lhs.coeffs().to_vec(), rhs: rhs.coeffs().to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Weight;
    use crate::scalar::int;

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn one(n: usize) -> MultiPoly {
        MultiPoly::one(n)
    }

    #[test]
    fn order_one_wronskian_is_derivative() {
        let inp = WronskianInput::new(vec![one(1), z(1, 0)]).unwrap();
        let w = wronskian(&inp);
        assert_eq!(w, JetSpace::new(1, 1).var(0, 1).unwrap());
    }

    #[test]
    fn order_two_wronskian_of_monomials() {
        let sq = MultiPoly::from_int_terms(1, &[(&[2], 1)]);
        let inp = WronskianInput::new(vec![one(1), z(1, 0), sq]).unwrap();
        let w = wronskian(&inp);
        let d1 = JetSpace::new(1, 2).var(0, 1).unwrap();
        let expect = (&(&d1 * &d1) * &d1).scale(&int(2));
        assert_eq!(w, expect);
        assert_eq!(w.weighted_degree(), Weight::Homogeneous(3));
    }

    #[test]
    fn repeated_argument_vanishes() {
        let g = MultiPoly::from_int_terms(2, &[(&[1, 2], 3), (&[0, 1], -1)]);
        let inp = WronskianInput::new(vec![g.clone(), z(2, 0), g]).unwrap();
        assert!(wronskian(&inp).is_zero());
    }

    #[test]
    fn oracle_examples() {
        let inp = WronskianInput::new(vec![one(1), z(1, 0)]).unwrap();
        let f = CurveGerm::from_ints(4, &[&[0, 0, 1]]);
        assert_eq!(wronskian_series_oracle(&inp, &f, 2).unwrap(), TruncatedSeries::from_ints(2, &[0, 2]));

        let sq = MultiPoly::from_int_terms(1, &[(&[2], 1)]);
        let inp = WronskianInput::new(vec![one(1), z(1, 0), sq]).unwrap();
        let f = CurveGerm::from_ints(5, &[&[0, 1]]);
        assert_eq!(wronskian_series_oracle(&inp, &f, 3).unwrap(), TruncatedSeries::from_ints(3, &[2]));

        let rep = WronskianInput::new(vec![z(1, 0), z(1, 0)]).unwrap();
        assert!(wronskian_series_oracle(&rep, &f, 2).unwrap().is_zero());

        assert_eq!(wronskian_series_oracle(&inp, &f, 4).unwrap_err(), Error::InsufficientOrder { have: 5, need: 6 });
    }

    #[test]
    fn invariance_examples() {
        let inp = WronskianInput::new(vec![one(1), z(1, 0)]).unwrap();
        let f = CurveGerm::from_ints(3, &[&[0, 1]]);
        let phi = ReparamGerm::new(TruncatedSeries::from_ints(3, &[0, 3])).unwrap();
        let r = check_reparam_invariance(&inp, &f, &phi).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.equal), (int(3), int(3), true));

        let id = ReparamGerm::new(TruncatedSeries::from_ints(3, &[0, 1])).unwrap();
        let g = MultiPoly::from_int_terms(1, &[(&[3], 1), (&[1], 2)]);
        let inp = WronskianInput::new(vec![one(1), z(1, 0), g]).unwrap();
        let f = CurveGerm::from_ints(3, &[&[1, 2, -1, 4]]);
        assert!(check_reparam_invariance(&inp, &f, &id).unwrap().equal);
    }

    #[test]
    fn jet_truncate_examples() {
        let cube = MultiPoly::from_int_terms(1, &[(&[3], 1)]);
        assert!(jet_truncate(&cube, &[int(0)], 2).unwrap().shifted.is_zero());

        let sq = MultiPoly::from_int_terms(1, &[(&[2], 1)]);
        let j = jet_truncate(&sq, &[int(1)], 2).unwrap();
        assert_eq!(j.shifted, MultiPoly::from_int_terms(1, &[(&[0], 1), (&[1], 2), (&[2], 1)]));
        assert_eq!(j.to_absolute(), sq);

        let c = MultiPoly::constant(2, int(5));
        let j = jet_truncate(&c, &[int(3), int(-2)], 4).unwrap();
        assert_eq!(j.shifted, c);
    }

    #[test]
    fn jet_dependence_examples() {
        let inp = WronskianInput::new(vec![z(1, 0), MultiPoly::from_int_terms(1, &[(&[2], 1), (&[0], 1)])]).unwrap();
        let germ = CurveGerm::from_ints(2, &[&[0, 3, -2]]);
        let zero = MultiPoly::zero(1);
        assert!(check_jet_dependence(&inp, &zero, &[int(0)], std::slice::from_ref(&germ)).unwrap().equal);
        let h = MultiPoly::from_int_terms(1, &[(&[3], 1)]);
        assert!(check_jet_dependence(&inp, &h, &[int(0)], std::slice::from_ref(&germ)).unwrap().equal);
        let low = MultiPoly::from_int_terms(1, &[(&[1], 1), (&[3], 1)]);
        assert_eq!(
            check_jet_dependence(&inp, &low, &[int(0)], &[germ]).unwrap_err(),
            Error::PerturbationOrder { needed: 2 }
        );
    }

    #[test]
    fn jet_dependence_off_origin() {
        // k = 2, x = (1, 0), h = (z1 - 1)^3
        let g = vec![
            MultiPoly::from_int_terms(2, &[(&[1, 1], 1), (&[0, 0], 2)]),
            MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], -1)]),
            MultiPoly::from_int_terms(2, &[(&[0, 2], 3), (&[1, 0], 1)]),
        ];
        let inp = WronskianInput::new(g).unwrap();
        let h = MultiPoly::from_int_terms(2, &[(&[1, 0], 1), (&[0, 0], -1)]).pow(3);
        let germ = CurveGerm::from_ints(2, &[&[1, 2, 5], &[0, -1, 3]]);
        let r = check_jet_dependence(&inp, &h, &[int(1), int(0)], &[germ]).unwrap();
        assert!(r.equal);
    }

    #[test]
    fn unit_scaling_example() {
        let inp = WronskianInput::new(vec![one(1), z(1, 0)]).unwrap();
        let h = MultiPoly::from_int_terms(1, &[(&[1], 1), (&[0], 2)]);
        let f = CurveGerm::from_ints(2, &[&[1, 1, 1]]);
        let r = check_unit_scaling(&inp, &h, &f).unwrap();
        assert!(r.equal);
        assert_eq!(r.rhs, int(9));
    }

    #[test]
    fn input_validation() {
        assert!(WronskianInput::new(vec![]).is_err());
        assert!(WronskianInput::new(vec![z(1, 0), z(2, 0)]).is_err());
    }
}
