//! Truncated power series in one variable `t` and curve germs built from them.
//!
//! Every series carries its truncation order explicitly. Binary operations on
//! series of different orders truncate to the smaller order, so a result never
//! claims more precision than its inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::scalar::{self, fmt_scalar, RationalDoc, Scalar};

/// `c_0 + c_1 t + ... + c_K t^K  (mod t^{K+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to exactly `order + 1` entries.
    pub fn new(order: usize, mut coeffs: Vec<Scalar>) -> Self {
        coeffs.resize(order + 1, scalar::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_ints(order: usize, coeffs: &[i64]) -> Self {
        Self::new(order, coeffs.iter().map(|&c| scalar::int(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn constant(order: usize, c: Scalar) -> Self {
        Self::new(order, vec![c])
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        Self::new(order, vec![scalar::zero(), scalar::one()])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Scalar {
        self.coeffs.get(j).cloned().unwrap_or_else(scalar::zero)
    }

    /// Value at `t = 0`.
    pub fn constant_term(&self) -> &Scalar {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(order.min(self.order()), self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(self.order(), scalar::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Termwise derivative; the order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderZero);
        }
        Ok(TruncatedSeries {
            coeffs: (0..self.order()).map(|j| &self.coeffs[j + 1] * scalar::int(j as i64 + 1)).collect(),
        })
    }

    /// `j`-fold derivative.
    pub fn nth_derivative(&self, j: usize) -> Result<Self> {
        let mut s = self.clone();
        for _ in 0..j {
            s = s.derivative()?;
        }
        Ok(s)
    }

    /// `self(inner(t))`, truncated to the smaller of the two orders.
    /// Requires `inner(0) = 0`; `self` may have any constant term.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<Self> {
        if !inner.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        // Horner from the highest retained coefficient: since inner(0) = 0,
        // coefficients above `order` cannot affect the truncation.
        let mut acc = Self::constant(order, self.coeffs[order].clone());
        for j in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[j];
        }
        Ok(acc)
    }

    pub fn to_doc(&self) -> SeriesDoc {
        SeriesDoc { order: self.order(), coeffs: self.coeffs.iter().map(RationalDoc::from_scalar).collect() }
    }

    pub fn from_doc(doc: &SeriesDoc) -> Result<Self> {
        if doc.coeffs.len() > doc.order + 1 {
            return Err(Error::Invalid(format!("series of order {} has {} coefficients", doc.order, doc.coeffs.len())));
        }
        let coeffs = doc.coeffs.iter().map(RationalDoc::to_scalar).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(doc.order, coeffs))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match j {
                0 => fmt_scalar(c),
                1 => format!("{}*t", fmt_scalar(c)),
                _ => format!("{}*t^{}", fmt_scalar(c), j),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(t^{})", parts.join(" + "), self.order() + 1)
    }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=order).map(|j| &self.coeffs[j] + &rhs.coeffs[j]).collect() }
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=order).map(|j| &self.coeffs[j] - &rhs.coeffs[j]).collect() }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![scalar::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs }
    }
}

/// A reparametrization germ `phi` with `phi(0) = 0` and `phi'(0) != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReparamGerm(TruncatedSeries);

impl ReparamGerm {
    pub fn new(phi: TruncatedSeries) -> Result<Self> {
        if !phi.coeff(0).is_zero() || phi.order() == 0 || phi.coeff(1).is_zero() {
            return Err(Error::DegenerateReparam);
        }
        Ok(ReparamGerm(phi))
    }

    /// `lambda * t`, the action of a nonzero scalar.
    pub fn scaling(order: usize, lambda: Scalar) -> Result<Self> {
        Self::new(TruncatedSeries::new(order, vec![scalar::zero(), lambda]))
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.0
    }

    /// `phi'(0)`.
    pub fn linear_coeff(&self) -> &Scalar {
        &self.0.coeffs[1]
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    /// `self ∘ other`.
    pub fn then(&self, other: &ReparamGerm) -> ReparamGerm {
        ReparamGerm(self.0.compose(&other.0).expect("reparametrizations vanish at 0"))
    }
}

/// Taylor coefficients of `f ∘ phi` through the shared truncation order.
pub fn series_compose(f: &TruncatedSeries, phi: &ReparamGerm) -> Result<TruncatedSeries> {
    f.compose(&phi.0)
}

pub fn series_derivative(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    f.derivative()
}

/// A germ of curve `f: (C, 0) -> C^n` given by `n` truncated component series
/// of a common order. The base point `f(0)` need not be the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveGerm {
    components: Vec<TruncatedSeries>,
}

impl CurveGerm {
    pub fn new(components: Vec<TruncatedSeries>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Invalid("curve germ needs at least one component".into()));
        };
        let order = first.order();
        if components.iter().any(|c| c.order() != order) {
            return Err(Error::Invalid("germ components must share one truncation order".into()));
        }
        Ok(CurveGerm { components })
    }

    pub fn from_ints(order: usize, comps: &[&[i64]]) -> Self {
        Self::new(comps.iter().map(|c| TruncatedSeries::from_ints(order, c)).collect())
            .expect("components share an order")
    }

    pub fn num_vars(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.components[0].order()
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    pub fn base_point(&self) -> Vec<Scalar> {
        self.components.iter().map(|c| c.constant_term().clone()).collect()
    }

    /// `f ∘ phi`, componentwise.
    pub fn reparametrize(&self, phi: &ReparamGerm) -> CurveGerm {
        CurveGerm {
            components: self
                .components
                .iter()
                .map(|c| c.compose(phi.series()).expect("reparametrizations vanish at 0"))
                .collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> CurveGerm {
        CurveGerm { components: self.components.iter().map(|c| c.truncate(order)).collect() }
    }

    pub fn to_doc(&self) -> GermDoc {
        GermDoc { components: self.components.iter().map(TruncatedSeries::to_doc).collect() }
    }

    pub fn from_doc(doc: &GermDoc) -> Result<Self> {
        Self::new(doc.components.iter().map(TruncatedSeries::from_doc).collect::<Result<Vec<_>>>()?)
    }
}

/// Taylor expansion of `g ∘ f` through the germ's order.
pub fn poly_eval_germ(g: &MultiPoly, f: &CurveGerm) -> Result<TruncatedSeries> {
    if g.num_vars() != f.num_vars() {
        return Err(Error::VarMismatch { left: g.num_vars(), right: f.num_vars() });
    }
    let order = f.order();
    let mut powers: Vec<Vec<TruncatedSeries>> =
        f.components.iter().map(|c| vec![TruncatedSeries::constant(order, scalar::one()), c.clone()]).collect();
    let mut acc = TruncatedSeries::zero(order);
    for (e, c) in g.terms() {
        let mut term = TruncatedSeries::constant(order, c.clone());
        for (i, &k) in e.iter().enumerate() {
            let k = k as usize;
            while powers[i].len() <= k {
                let next = &powers[i][powers[i].len() - 1] * &f.components[i];
                powers[i].push(next);
            }
            if k > 0 {
                term = &term * &powers[i][k];
            }
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Series interchange document: `{"order": K, "coeffs": [{"num", "den"}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub order: usize,
    pub coeffs: Vec<RationalDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermDoc {
    pub components: Vec<SeriesDoc>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn s(order: usize, c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_ints(order, c)
    }

    #[test]
    fn compose_linear() {
        let phi = ReparamGerm::new(s(4, &[0, 2])).unwrap();
        assert_eq!(series_compose(&s(4, &[0, 1]), &phi).unwrap(), s(4, &[0, 2]));
    }

    #[test]
    fn compose_square_with_shift() {
        // (t + t^2)^2 = t^2 + 2t^3 + t^4
        let phi = ReparamGerm::new(s(5, &[0, 1, 1])).unwrap();
        let out = series_compose(&s(5, &[0, 0, 1]), &phi).unwrap();
        assert_eq!(out, s(5, &[0, 0, 1, 2, 1]));
        // truncated at K = 3 the t^4 term disappears
        let phi3 = ReparamGerm::new(s(3, &[0, 1, 1])).unwrap();
        assert_eq!(series_compose(&s(3, &[0, 0, 1]), &phi3).unwrap(), s(3, &[0, 0, 1, 2]));
    }

    #[test]
    fn compose_constant_fixed() {
        let phi = ReparamGerm::new(s(3, &[0, -5, 7, 1])).unwrap();
        assert_eq!(series_compose(&s(3, &[1]), &phi).unwrap(), s(3, &[1]));
    }

    #[test]
    fn compose_rejects_nonzero_constant() {
        assert_eq!(s(3, &[1, 1]).compose(&s(3, &[1, 1])).unwrap_err(), Error::NonzeroConstantTerm);
        assert_eq!(ReparamGerm::new(s(3, &[1, 1])).unwrap_err(), Error::DegenerateReparam);
        assert_eq!(ReparamGerm::new(s(3, &[0, 0, 1])).unwrap_err(), Error::DegenerateReparam);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(series_derivative(&s(2, &[1, 1, 1])).unwrap(), s(1, &[1, 2]));
        assert_eq!(series_derivative(&s(3, &[0, 0, 0, 1])).unwrap(), s(2, &[0, 0, 3]));
        assert_eq!(series_derivative(&s(2, &[5, 2, -1])).unwrap(), s(1, &[2, -2]));
        assert_eq!(series_derivative(&s(0, &[5])).unwrap_err(), Error::OrderZero);
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = s(4, &[1, 1, 1, 1, 1]);
        let b = s(2, &[1, 1, 1]);
        assert_eq!((&a * &b).order(), 2);
        assert_eq!((&a + &b).order(), 2);
    }

    #[test]
    fn eval_germ_examples() {
        let f = CurveGerm::from_ints(3, &[&[0, 1], &[0, 0, 1]]);
        assert_eq!(poly_eval_germ(&MultiPoly::var(2, 0), &f).unwrap(), s(3, &[0, 1]));

        let f = CurveGerm::from_ints(3, &[&[0, 1], &[0, 1]]);
        let g = MultiPoly::from_int_terms(2, &[(&[1, 1], 1)]);
        assert_eq!(poly_eval_germ(&g, &f).unwrap(), s(3, &[0, 0, 1]));

        // (1+t)^2 + t^2 = 1 + 2t + 2t^2
        let f = CurveGerm::from_ints(3, &[&[1, 1], &[0, 0, 1]]);
        let g = MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], 1)]);
        assert_eq!(poly_eval_germ(&g, &f).unwrap(), s(3, &[1, 2, 2]));

        assert!(poly_eval_germ(&MultiPoly::var(3, 0), &f).is_err());
    }

    #[test]
    fn germ_requires_shared_order() {
        assert!(CurveGerm::new(vec![s(2, &[1]), s(3, &[1])]).is_err());
    }

    #[test]
    fn doc_roundtrip() {
        let f = TruncatedSeries::new(3, vec![crate::scalar::ratio(1, 2), int(0), int(-4)]);
        assert_eq!(TruncatedSeries::from_doc(&f.to_doc()).unwrap(), f);
    }
}
