//! Small finite fields: `F_p` for word-size primes and its quadratic extension.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::scalar::Scalar;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The field `F_q` with `q = p` or `q = p^2`. Elements are pairs `(a, b)`
/// meaning `a + b*alpha`, where `alpha^2 = c1*alpha + c0` is irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf {
    p: u64,
    ext: Option<(u64, u64)>,
}

pub type Elem = (u64, u64);

impl Gf {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(Gf { p, ext: None })
    }

    pub fn quadratic(p: u64) -> Result<Self> {
        let base = Self::prime(p)?;
        let ext = if p == 2 {
            (1, 1)
        } else {
            let nr = (2..p).find(|&a| base.pow_base(a, (p - 1) / 2) == p - 1).expect("odd primes have non-residues");
            (0, nr)
        };
        Ok(Gf { p, ext: Some(ext) })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn size(&self) -> u64 {
        if self.ext.is_some() {
            self.p * self.p
        } else {
            self.p
        }
    }

    pub fn zero(&self) -> Elem {
        (0, 0)
    }

    pub fn one(&self) -> Elem {
        (1, 0)
    }

    /// The `i`-th element in a fixed enumeration of the field, `0 <= i < size`.
    pub fn element(&self, i: u64) -> Elem {
        (i % self.p, i / self.p)
    }

    pub fn from_base(&self, a: u64) -> Elem {
        (a % self.p, 0)
    }

    fn pow_base(&self, a: u64, mut e: u64) -> u64 {
        let p = self.p as u128;
        let mut acc = 1u128;
        let mut base = a as u128 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u64
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        ((x.0 + self.p - y.0) % self.p, (x.1 + self.p - y.1) % self.p)
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let p = self.p as u128;
        let (a, b, c, d) = (x.0 as u128, x.1 as u128, y.0 as u128, y.1 as u128);
        match self.ext {
            None => ((a * c % p) as u64, 0),
            Some((c1, c0)) => {
                // (a + b al)(c + d al) = ac + (ad + bc) al + bd al^2
                let bd = b * d % p;
                let lo = (a * c + bd * c0 as u128) % p;
                let hi = (a * d + b * c + bd * c1 as u128) % p;
                (lo as u64, hi as u64)
            }
        }
    }

    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, x: Elem) -> bool {
        x == (0, 0)
    }

    pub fn inv(&self, x: Elem) -> Option<Elem> {
        if self.is_zero(x) {
            return None;
        }
        Some(self.pow(x, self.size() - 2))
    }

    /// Reduces an exact rational into the prime subfield.
    pub fn reduce(&self, s: &Scalar) -> Result<Elem> {
        let p = BigInt::from(self.p);
        let den = s.denom().mod_floor(&p);
        if den.is_zero() {
            return Err(Error::BadPrime { p: self.p });
        }
        let num = s.numer().mod_floor(&p).to_u64().expect("reduced below p");
        let den = den.to_u64().expect("reduced below p");
        let inv = self.pow_base(den, self.p - 2);
        Ok(self.from_base((num as u128 * inv as u128 % self.p as u128) as u64))
    }

    /// Rank of a matrix over this field (rows are consumed).
    pub fn rank(&self, mut rows: Vec<Vec<Elem>>) -> usize {
        let cols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&r| !self.is_zero(rows[r][c])) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][c]).expect("nonzero pivot");
            let pivot_row: Vec<Elem> = rows[rank].iter().map(|&v| self.mul(v, inv)).collect();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || self.is_zero(row[c]) {
                    continue;
                }
                let f = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = self.sub(*v, self.mul(f, pv));
                }
            }
            rows[rank] = pivot_row;
            rank += 1;
        }
        rank
    }
}

/// A polynomial with coefficients reduced into a finite field.
#[derive(Debug, Clone)]
pub struct FfPoly {
    terms: Vec<(Vec<u32>, Elem)>,
    num_vars: usize,
}

impl FfPoly {
    pub fn reduce(field: &Gf, p: &MultiPoly) -> Result<Self> {
        let mut terms = Vec::with_capacity(p.len());
        for (e, c) in p.terms() {
            let v = field.reduce(c)?;
            if !field.is_zero(v) {
                terms.push((e.clone(), v));
            }
        }
        Ok(FfPoly { terms, num_vars: p.num_vars() })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, field: &Gf, point: &[Elem]) -> Elem {
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut t = *c;
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = field.mul(t, field.pow(*x, k as u64));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, field: &Gf, i: usize) -> FfPoly {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let v = field.mul(*c, field.from_base(e[i] as u64));
            if field.is_zero(v) {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            terms.push((ne, v));
        }
        FfPoly { terms, num_vars: self.num_vars }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(7) && is_prime(101));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }

    #[test]
    fn quadratic_extension_is_a_field() {
        for p in [2u64, 3, 5, 7] {
            let f = Gf::quadratic(p).unwrap();
            assert_eq!(f.size(), p * p);
            for i in 1..f.size() {
                let x = f.element(i);
                let inv = f.inv(x).unwrap();
                assert_eq!(f.mul(x, inv), f.one(), "p = {p}, x = {x:?}");
            }
        }
    }

    #[test]
    fn reduce_rationals() {
        let f = Gf::prime(7).unwrap();
        assert_eq!(f.reduce(&ratio(1, 2)).unwrap(), (4, 0));
        assert_eq!(f.reduce(&ratio(-3, 1)).unwrap(), (4, 0));
        assert_eq!(f.reduce(&ratio(1, 14)).unwrap_err(), Error::BadPrime { p: 7 });
    }

    #[test]
    fn rank_mod_p() {
        let f = Gf::prime(5).unwrap();
        let m = vec![vec![(1, 0), (2, 0)], vec![(2, 0), (4, 0)]];
        assert_eq!(f.rank(m), 1);
        let m = vec![vec![(1, 0), (2, 0)], vec![(3, 0), (1, 0)]];
        assert_eq!(f.rank(m), 1, "det = -5");
        let m = vec![vec![(1, 0), (2, 0)], vec![(3, 0), (2, 0)]];
        assert_eq!(f.rank(m), 2);
    }
}
