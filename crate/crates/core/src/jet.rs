//! Green–Griffiths jet polynomials and the canonical derivation.
//!
//! A [`JetPoly`] of order `k` over `n` coordinates is a polynomial in the
//! formal variables `z_i^(j)` for `0 <= i < n`, `0 <= j <= k`, stored flat:
//! slot `i * (k + 1) + j` holds the exponent of `z_i^(j)`. The `j = 0` slots
//! are the coordinates themselves, so coefficient functions `c(z)` live in
//! the same monomials as the jet part.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Exponent, MultiPoly, PolyDoc};
use crate::scalar::{self, Scalar};
use crate::series::{CurveGerm, TruncatedSeries};

/// Declared bounds for jet computations: `n` coordinates, jet order at most `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetSpace {
    pub n: usize,
    pub k: usize,
}

/// The formal variable `z_coord^(deriv_order)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVariable {
    pub coord: usize,
    pub deriv_order: usize,
}

impl JetSpace {
    pub fn new(n: usize, k: usize) -> Self {
        JetSpace { n, k }
    }

    pub fn variable(&self, coord: usize, deriv_order: usize) -> Result<JetVariable> {
        if coord >= self.n || deriv_order > self.k {
            return Err(Error::JetVariableOutOfRange { coord, deriv: deriv_order, n: self.n, k: self.k });
        }
        Ok(JetVariable { coord, deriv_order })
    }

    /// `z_coord^(deriv_order)` as a jet polynomial of order `k`.
    pub fn var(&self, coord: usize, deriv_order: usize) -> Result<JetPoly> {
        let v = self.variable(coord, deriv_order)?;
        let mut e = vec![0; self.n * (self.k + 1)];
        e[v.coord * (self.k + 1) + v.deriv_order] = 1;
        Ok(JetPoly::monomial(self.n, self.k, e, scalar::one()))
    }

    /// `D^j(s)` for a polynomial `s` in the coordinates, lifted to order `k`.
    ///
    /// The result is homogeneous of weight `j`. When `s` has integer
    /// coefficients so do all coefficient polynomials of the result.
    pub fn d_pow(&self, s: &MultiPoly, j: usize) -> Result<JetPoly> {
        if j > self.k {
            return Err(Error::JetOrderExceeded { requested: j, max: self.k });
        }
        if s.num_vars() != self.n {
            return Err(Error::VarMismatch { left: self.n, right: s.num_vars() });
        }
        let mut q = JetPoly::from_multipoly(s, 0);
        for _ in 0..j {
            q = q.derive();
        }
        Ok(q.lift(self.k))
    }
}

/// Result of [`JetPoly::weighted_degree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// The zero polynomial, homogeneous of every weight.
    Zero,
    Homogeneous(u32),
    Inhomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JetPoly {
    n: usize,
    k: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl JetPoly {
    pub fn zero(n: usize, k: usize) -> Self {
        JetPoly { n, k, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, k: usize, c: Scalar) -> Self {
        Self::monomial(n, k, vec![0; n * (k + 1)], c)
    }

    pub fn monomial(n: usize, k: usize, exp: Exponent, c: Scalar) -> Self {
        let mut q = Self::zero(n, k);
        q.add_term(exp, c);
        q
    }

    pub fn from_terms<I>(n: usize, k: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let slots = n * (k + 1);
        let mut q = Self::zero(n, k);
        for (e, c) in terms {
            if e.len() != slots {
                return Err(Error::BadExponent { expected: slots, got: e.len() });
            }
            q.add_term(e, c);
        }
        Ok(q)
    }

    /// Embeds a polynomial in the coordinates as a weight-0 jet polynomial of order `k`.
    pub fn from_multipoly(s: &MultiPoly, k: usize) -> Self {
        let n = s.num_vars();
        let mut q = Self::zero(n, k);
        for (e, c) in s.terms() {
            let mut je = vec![0; n * (k + 1)];
            for (i, &a) in e.iter().enumerate() {
                je[i * (k + 1)] = a;
            }
            q.add_term(je, c.clone());
        }
        q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn slot(&self, coord: usize, deriv: usize) -> usize {
        coord * (self.k + 1) + deriv
    }

    fn add_term(&mut self, exp: Exponent, c: Scalar) {
        use num_traits::Zero;
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-indexes into order `k_new >= k` (the inclusion `E_k ⊂ E_{k_new}`).
    pub fn lift(&self, k_new: usize) -> JetPoly {
        assert!(k_new >= self.k, "cannot lower jet order {} to {}", self.k, k_new);
        if k_new == self.k {
            return self.clone();
        }
        let mut out = JetPoly::zero(self.n, k_new);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.n * (k_new + 1)];
            for i in 0..self.n {
                for j in 0..=self.k {
                    ne[i * (k_new + 1) + j] = e[self.slot(i, j)];
                }
            }
            out.terms.insert(ne, c.clone());
        }
        out
    }

    fn monomial_weight(&self, e: &[u32]) -> u32 {
        (0..self.n).flat_map(|i| (1..=self.k).map(move |j| (i, j))).map(|(i, j)| j as u32 * e[self.slot(i, j)]).sum()
    }

    /// Weighted degree: `z_i^(j)` has weight `j`, so coordinates weigh nothing.
    pub fn weighted_degree(&self) -> Weight {
        let mut weights = self.terms.keys().map(|e| self.monomial_weight(e));
        let Some(first) = weights.next() else {
            return Weight::Zero;
        };
        if weights.all(|w| w == first) {
            Weight::Homogeneous(first)
        } else {
            Weight::Inhomogeneous
        }
    }

    /// The canonical derivation `D`: a derivation sending `z_i^(j)` to
    /// `z_i^(j+1)`. On coefficient functions this is `sum_i dc/dz_i * z_i'`.
    /// The result has order `k + 1`.
    pub fn derive(&self) -> JetPoly {
        let k_new = self.k + 1;
        let lifted = self.lift(k_new);
        let mut out = JetPoly::zero(self.n, k_new);
        for (e, c) in &lifted.terms {
            for i in 0..self.n {
                for j in 0..=self.k {
                    let s = i * (k_new + 1) + j;
                    let a = e[s];
                    if a == 0 {
                        continue;
                    }
                    let mut ne = e.clone();
                    ne[s] -= 1;
                    ne[s + 1] += 1;
                    out.add_term(ne, c * scalar::int(a as i64));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> JetPoly {
        let mut out = JetPoly::zero(self.n, self.k);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Groups terms by their jet part (the `j >= 1` exponents, laid out as
    /// `n * k` slots) and returns the coefficient polynomial in `z` of each.
    pub fn coefficient_polys(&self) -> BTreeMap<Exponent, MultiPoly> {
        let mut out: BTreeMap<Exponent, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let jet: Exponent =
                (0..self.n).flat_map(|i| (1..=self.k).map(move |j| (i, j))).map(|(i, j)| e[self.slot(i, j)]).collect();
            let z: Exponent = (0..self.n).map(|i| e[self.slot(i, 0)]).collect();
            let entry = out.entry(jet).or_insert_with(|| MultiPoly::zero(self.n));
            entry.add_term(z, c.clone());
        }
        out
    }

    /// Evaluates on a curve germ: `z_i^(j)` becomes the `j`-th derivative of
    /// the `i`-th component, and the result is truncated at order `trunc`.
    pub fn eval_on_germ(&self, f: &CurveGerm, trunc: usize) -> Result<TruncatedSeries> {
        if f.num_vars() != self.n {
            return Err(Error::VarMismatch { left: self.n, right: f.num_vars() });
        }
        let need = self.k + trunc;
        if f.order() < need {
            return Err(Error::InsufficientOrder { have: f.order(), need });
        }
        let mut derivs: Vec<Vec<TruncatedSeries>> = Vec::with_capacity(self.n);
        for comp in f.components() {
            let mut row = Vec::with_capacity(self.k + 1);
            let mut cur = comp.clone();
            for j in 0..=self.k {
                if j > 0 {
                    cur = cur.derivative()?;
                }
                row.push(cur.truncate(trunc));
            }
            derivs.push(row);
        }
        let mut cache: BTreeMap<(usize, u32), TruncatedSeries> = BTreeMap::new();
        let mut acc = TruncatedSeries::zero(trunc);
        for (e, c) in &self.terms {
            let mut term = TruncatedSeries::constant(trunc, c.clone());
            for (s, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let (i, j) = (s / (self.k + 1), s % (self.k + 1));
                let p = cache.entry((s, a)).or_insert_with(|| derivs[i][j].pow(a as usize));
                term = &term * p;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    pub fn to_doc(&self) -> JetPolyDoc {
        let p = MultiPoly::from_terms(self.n * (self.k + 1), self.terms.clone()).expect("slot count is consistent");
        let doc = PolyDoc::from(&p);
        JetPolyDoc { vars: self.n, order: self.k, terms: doc.terms }
    }

    pub fn from_doc(doc: &JetPolyDoc) -> Result<Self> {
        let flat = PolyDoc { vars: doc.vars * (doc.order + 1), terms: doc.terms.clone() };
        let p = MultiPoly::try_from(&flat)?;
        JetPoly::from_terms(doc.vars, doc.order, p.into_terms())
    }

    fn align(&self, other: &JetPoly) -> (JetPoly, JetPoly) {
        assert_eq!(self.n, other.n, "coordinate count mismatch");
        let k = self.k.max(other.k);
        (self.lift(k), other.lift(k))
    }
}

fn var_name(i: usize, j: usize) -> String {
    match j {
        0 => format!("z{}", i + 1),
        1..=3 => format!("z{}{}", i + 1, "'".repeat(j)),
        _ => format!("z{}^({})", i + 1, j),
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k;
        let p = MultiPoly::from_terms(self.n * (k + 1), self.terms.clone()).expect("consistent");
        f.write_str(&p.display_with(|s| {
            let name = var_name(s / (k + 1), s % (k + 1));
            if name.ends_with('\'') {
                format!("({name})")
            } else {
                name
            }
        }))
    }
}

impl<'a> Add<&'a JetPoly> for &'a JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: &JetPoly) -> JetPoly {
        let (mut a, b) = self.align(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl<'a> Sub<&'a JetPoly> for &'a JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: &JetPoly) -> JetPoly {
        let (mut a, b) = self.align(rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl Neg for &JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        self.scale(&-scalar::one())
    }
}

impl<'a> Mul<&'a JetPoly> for &'a JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: &JetPoly) -> JetPoly {
        let (a, b) = self.align(rhs);
        let mut out = JetPoly::zero(a.n, a.k);
        let mut acc: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(scalar::zero) += ca * cb;
            }
        }
        use num_traits::Zero;
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }
}

/// Jet polynomial interchange: the polynomial document plus an `order`
/// field; exponents run over `vars * (order + 1)` slots, slot `i*(order+1)+j`
/// being `z_i^(j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetPolyDoc {
    pub vars: usize,
    pub order: usize,
    pub terms: Vec<crate::poly::TermDoc>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::series::series_derivative;

    fn sp(n: usize, k: usize) -> JetSpace {
        JetSpace::new(n, k)
    }

    #[test]
    fn weights() {
        let s = sp(1, 2);
        let z = s.var(0, 0).unwrap();
        let z1 = s.var(0, 1).unwrap();
        let z2 = s.var(0, 2).unwrap();
        assert_eq!(z1.weighted_degree(), Weight::Homogeneous(1));
        assert_eq!((&z * &(&z2 * &z2)).weighted_degree(), Weight::Homogeneous(4));
        assert_eq!((&z1 + &z2).weighted_degree(), Weight::Inhomogeneous);
        assert_eq!(JetPoly::zero(1, 2).weighted_degree(), Weight::Zero);
    }

    #[test]
    fn derive_coordinate_and_product() {
        let s = sp(2, 0);
        let z1 = s.var(0, 0).unwrap();
        let z2 = s.var(1, 0).unwrap();
        let t = sp(2, 1);
        assert_eq!(z1.derive(), t.var(0, 1).unwrap());
        let lhs = (&z1 * &z2).derive();
        let rhs = &(&t.var(0, 1).unwrap() * &t.var(1, 0).unwrap()) + &(&t.var(0, 0).unwrap() * &t.var(1, 1).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn second_derivative_of_square() {
        let s = sp(1, 2);
        let sq = MultiPoly::from_int_terms(1, &[(&[2], 1)]);
        let got = s.d_pow(&sq, 2).unwrap();
        let z = s.var(0, 0).unwrap();
        let z1 = s.var(0, 1).unwrap();
        let z2 = s.var(0, 2).unwrap();
        let expect = &(&z1 * &z1).scale(&int(2)) + &(&z * &z2).scale(&int(2));
        assert_eq!(got, expect);
    }

    #[test]
    fn d_pow_edge_cases() {
        let s = sp(2, 2);
        assert_eq!(s.d_pow(&MultiPoly::var(2, 0), 1).unwrap(), s.var(0, 1).unwrap());
        assert!(s.d_pow(&MultiPoly::constant(2, int(7)), 1).unwrap().is_zero());
        assert_eq!(s.d_pow(&MultiPoly::var(2, 0), 3).unwrap_err(), Error::JetOrderExceeded { requested: 3, max: 2 });
    }

    #[test]
    fn eval_examples() {
        let q = sp(1, 1).var(0, 1).unwrap();
        let f = CurveGerm::from_ints(4, &[&[0, 0, 1]]);
        assert_eq!(q.eval_on_germ(&f, 2).unwrap(), TruncatedSeries::from_ints(2, &[0, 2]));

        let s = sp(2, 1);
        let q = &s.var(0, 0).unwrap() * &s.var(1, 1).unwrap();
        let f = CurveGerm::from_ints(5, &[&[0, 1], &[0, 0, 0, 1]]);
        assert_eq!(q.eval_on_germ(&f, 4).unwrap(), TruncatedSeries::from_ints(4, &[0, 0, 0, 3]));

        let one = JetPoly::constant(1, 0, int(1));
        let f = CurveGerm::from_ints(2, &[&[3, 1]]);
        assert_eq!(one.eval_on_germ(&f, 2).unwrap(), TruncatedSeries::from_ints(2, &[1]));
    }

    #[test]
    fn eval_rejects_short_germ() {
        let q = sp(1, 2).var(0, 2).unwrap();
        let f = CurveGerm::from_ints(2, &[&[0, 1]]);
        assert_eq!(q.eval_on_germ(&f, 1).unwrap_err(), Error::InsufficientOrder { have: 2, need: 3 });
    }

    #[test]
    fn derivative_matches_series_derivative_on_square() {
        // D^2(z^2) evaluated on (1 + 2t + t^3) equals d^2/dt^2 of the square
        let sq = MultiPoly::from_int_terms(1, &[(&[2], 1)]);
        let q = JetPoly::from_multipoly(&sq, 0);
        let f = CurveGerm::from_ints(6, &[&[1, 2, 0, 1]]);
        let lhs = q.derive().derive().eval_on_germ(&f, 3).unwrap();
        let base = q.eval_on_germ(&f, 5).unwrap();
        let rhs = series_derivative(&series_derivative(&base).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn variable_bounds_checked() {
        assert!(sp(2, 1).var(2, 0).is_err());
        assert!(sp(2, 1).var(0, 2).is_err());
    }

    #[test]
    fn doc_roundtrip() {
        let s = sp(2, 2);
        let q = &s.var(0, 2).unwrap() + &(&s.var(1, 0).unwrap() * &s.var(1, 1).unwrap()).scale(&int(-3));
        assert_eq!(JetPoly::from_doc(&q.to_doc()).unwrap(), q);
    }

    #[test]
    fn display_names_derivatives() {
        let s = sp(1, 2);
        let q = &s.var(0, 0).unwrap() * &s.var(0, 2).unwrap();
        assert_eq!(q.to_string(), "z1*(z1'')");
    }
}
