//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Exponent vectors are dense `Vec<u32>` of fixed length `num_vars`; terms are
//! kept in a `BTreeMap` so iteration order (and therefore every printed
//! document) is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, fmt_scalar, RationalDoc, Scalar};

pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

/// Which ring operation [`poly_arith`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

/// Checked binary arithmetic; the operator impls panic on mismatched variable counts.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: ArithOp) -> Result<MultiPoly> {
    a.check_vars(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Mul => a * b,
    })
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, scalar::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable index {i} out of range for {num_vars} variables");
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(e, scalar::one())
    }

    pub fn monomial(exp: Exponent, c: Scalar) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// Builds from `(exponent, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::BadExponent { expected: num_vars, got: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience for tests and examples: integer coefficients.
    pub fn from_int_terms(num_vars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(num_vars, terms.iter().map(|(e, c)| (e.to_vec(), scalar::int(*c))))
            .expect("exponent lengths match num_vars")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, Scalar> {
        self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(scalar::zero)
    }

    /// Adds `c * x^exp` in place, pruning a cancelled term.
    pub fn add_term(&mut self, exp: Exponent, c: Scalar) {
        debug_assert_eq!(exp.len(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn check_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VarMismatch { left: self.num_vars, right: other.num_vars });
        }
        Ok(())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Smallest total degree of a term (the order of vanishing at the origin).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// `Some(d)` when every term has total degree `d`; the zero polynomial
    /// reports `None` since it is homogeneous of every degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        MultiPoly { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = Self::one(self.num_vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c * scalar::int(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.num_vars {
            return Err(Error::VarMismatch { left: self.num_vars, right: point.len() });
        }
        let mut acc = scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= scalar::pow(x, k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes each variable `x_i` by the polynomial `images[i]`
    /// (all images share one variable count).
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.num_vars {
            return Err(Error::VarMismatch { left: self.num_vars, right: images.len() });
        }
        let target = images.first().map(|p| p.num_vars).unwrap_or(0);
        for img in images {
            if img.num_vars != target {
                return Err(Error::VarMismatch { left: target, right: img.num_vars });
            }
        }
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(target), p.clone()]).collect();
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while cache[i].len() <= k {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                if k > 0 {
                    t = &t * &cache[i][k];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Rewrites `p(x)` as a polynomial in `w = x - base`, i.e. returns `p(base + w)`.
    pub fn translate(&self, base: &[Scalar]) -> Result<MultiPoly> {
        if base.len() != self.num_vars {
            return Err(Error::VarMismatch { left: self.num_vars, right: base.len() });
        }
        let images: Vec<MultiPoly> = (0..self.num_vars)
            .map(|i| &MultiPoly::var(self.num_vars, i) + &MultiPoly::constant(self.num_vars, base[i].clone()))
            .collect();
        if self.num_vars == 0 {
            return Ok(self.clone());
        }
        self.substitute(&images)
    }

    /// Drops every term of total degree greater than `max_deg`.
    pub fn truncate_degree(&self, max_deg: u32) -> MultiPoly {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Indices of variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.num_vars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    /// Pretty form with variables named by `name(i)`.
    pub fn display_with<F: Fn(usize) -> String>(&self, name: F) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { name(i) } else { format!("{}^{}", name(i), k) })
                .collect();
            let body = if mono.is_empty() {
                fmt_scalar(c)
            } else if c.is_one() {
                mono.join("*")
            } else if *c == -scalar::one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("{}*{}", fmt_scalar(c), mono.join("*"))
            };
            parts.push(body);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|i| format!("x{i}")))
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// One term of the polynomial interchange document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub exp: Vec<u32>,
    pub num: String,
    #[serde(default = "one_string")]
    pub den: String,
}

fn one_string() -> String {
    "1".into()
}

/// Polynomial interchange document: `{"vars": n, "terms": [{"exp": [...], "num": "..", "den": ".."}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub vars: usize,
    pub terms: Vec<TermDoc>,
}

impl From<&MultiPoly> for PolyDoc {
    fn from(p: &MultiPoly) -> Self {
        PolyDoc {
            vars: p.num_vars,
            terms: p
                .terms
                .iter()
                .map(|(e, c)| {
                    let r = RationalDoc::from_scalar(c);
                    TermDoc { exp: e.clone(), num: r.num, den: r.den }
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyDoc> for MultiPoly {
    type Error = Error;
    fn try_from(doc: &PolyDoc) -> Result<MultiPoly> {
        let terms = doc
            .terms
            .iter()
            .map(|t| {
                let c = RationalDoc { num: t.num.clone(), den: t.den.clone() }.to_scalar()?;
                Ok((t.exp.clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiPoly::from_terms(doc.vars, terms)
    }
}

/// All exponent vectors of length `n` with entries summing to `d`, in
/// descending lexicographic order (`x0^d` first).
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponent> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All exponent vectors of length `n` with total degree `<= d`, graded ascending.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Exponent> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn add_cancels() {
        let a = &x(2, 0) + &x(2, 1);
        let b = &x(2, 0) - &x(2, 1);
        let s = poly_arith(&a, &b, ArithOp::Add).unwrap();
        assert_eq!(s, x(2, 0).scale(&int(2)));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn square_of_variable() {
        let p = poly_arith(&x(2, 0), &x(2, 0), ArithOp::Mul).unwrap();
        assert_eq!(p, MultiPoly::from_int_terms(2, &[(&[2, 0], 1)]));
    }

    #[test]
    fn binomial_square_matches_hand_expansion() {
        let a = &x(2, 0) + &x(2, 1);
        let p = poly_arith(&a, &a, ArithOp::Mul).unwrap();
        let expect = MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]);
        assert_eq!(p, expect);
    }

    #[test]
    fn mismatched_vars_rejected() {
        let err = poly_arith(&x(2, 0), &x(3, 0), ArithOp::Add).unwrap_err();
        assert_eq!(err, Error::VarMismatch { left: 2, right: 3 });
    }

    #[test]
    fn zero_coefficients_never_stored() {
        let p = MultiPoly::from_terms(1, vec![(vec![1], int(3)), (vec![1], int(-3)), (vec![0], int(0))]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn translate_square() {
        // x^2 at base 1 is 1 + 2w + w^2
        let p = MultiPoly::from_int_terms(1, &[(&[2], 1)]);
        let t = p.translate(&[int(1)]).unwrap();
        assert_eq!(t, MultiPoly::from_int_terms(1, &[(&[0], 1), (&[1], 2), (&[2], 1)]));
    }

    #[test]
    fn partials_and_eval() {
        let p = MultiPoly::from_int_terms(2, &[(&[2, 1], 3), (&[0, 1], 1)]);
        assert_eq!(p.partial(0), MultiPoly::from_int_terms(2, &[(&[1, 1], 6)]));
        assert_eq!(p.eval(&[int(2), int(-1)]).unwrap(), int(-13));
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(3, 2)[0], vec![2, 0, 0]);
        assert_eq!(monomials_up_to(2, 3).len(), 10);
    }

    #[test]
    fn doc_roundtrip() {
        let p =
            MultiPoly::from_terms(2, vec![(vec![1, 0], crate::scalar::ratio(1, 3)), (vec![0, 4], int(-2))]).unwrap();
        let doc = PolyDoc::from(&p);
        let back = MultiPoly::try_from(&doc).unwrap();
        assert_eq!(p, back);
    }
}
