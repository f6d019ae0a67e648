//! Determinants over commutative rings and exact rank computations.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::jet::JetPoly;
use crate::poly::MultiPoly;
use crate::scalar::{self, Scalar};
use crate::series::TruncatedSeries;

/// The commutative-ring operations the determinant routines need.
pub trait CommRing: Clone {
    /// Additive identity with the same shape (variable count, order) as `self`.
    fn zero_like(&self) -> Self;
    /// Multiplicative identity with the same shape as `self`.
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
}

macro_rules! ring_by_ops {
    ($t:ty, $zero:expr, $one:expr) => {
        impl CommRing for $t {
            fn zero_like(&self) -> Self {
                ($zero)(self)
            }
            fn one_like(&self) -> Self {
                ($one)(self)
            }
            fn is_zero_elem(&self) -> bool {
                self.is_zero()
            }
            fn add_ref(&self, o: &Self) -> Self {
                self + o
            }
            fn sub_ref(&self, o: &Self) -> Self {
                self - o
            }
            fn mul_ref(&self, o: &Self) -> Self {
                self * o
            }
        }
    };
}

ring_by_ops!(Scalar, |_: &Scalar| scalar::zero(), |_: &Scalar| scalar::one());
ring_by_ops!(MultiPoly, |p: &MultiPoly| MultiPoly::zero(p.num_vars()), |p: &MultiPoly| MultiPoly::one(p.num_vars()));
ring_by_ops!(JetPoly, |q: &JetPoly| JetPoly::zero(q.n(), q.order()), |q: &JetPoly| JetPoly::constant(
    q.n(),
    q.order(),
    scalar::one()
));
ring_by_ops!(TruncatedSeries, |s: &TruncatedSeries| TruncatedSeries::zero(s.order()), |s: &TruncatedSeries| {
    TruncatedSeries::constant(s.order(), scalar::one())
});

/// Determinant by Laplace expansion along successive rows, memoizing the
/// minor of each remaining column set. `m` must be square and nonempty.
pub fn det_cofactor<T: CommRing>(m: &[Vec<T>]) -> T {
    let size = m.len();
    assert!(size > 0 && size < 32, "matrix size {size} unsupported");
    assert!(m.iter().all(|r| r.len() == size), "matrix must be square");
    let mut memo: HashMap<u32, T> = HashMap::new();
    minor(m, 0, (1u32 << size) - 1, &mut memo)
}

fn minor<T: CommRing>(m: &[Vec<T>], row: usize, cols: u32, memo: &mut HashMap<u32, T>) -> T {
    if row == m.len() {
        return m[0][0].one_like();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = m[0][0].zero_like();
    for (position, c) in (0..m.len()).filter(|c| cols & (1 << c) != 0).enumerate() {
        let entry = &m[row][c];
        if entry.is_zero_elem() {
            continue;
        }
        let sub = minor(m, row + 1, cols & !(1 << c), memo);
        if sub.is_zero_elem() {
            continue;
        }
        let prod = entry.mul_ref(&sub);
        acc = if position % 2 == 0 { acc.add_ref(&prod) } else { acc.sub_ref(&prod) };
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Determinant as the signed sum over all permutations. Exponential, meant
/// as an independent cross-check for small matrices.
pub fn det_leibniz<T: CommRing>(m: &[Vec<T>]) -> T {
    let size = m.len();
    assert!(size > 0 && m.iter().all(|r| r.len() == size), "matrix must be square and nonempty");
    let mut acc = m[0][0].zero_like();
    for perm in (0..size).permutations(size) {
        let mut prod = m[0][0].one_like();
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul_ref(&m[i][j]);
            if prod.is_zero_elem() {
                break;
            }
        }
        if prod.is_zero_elem() {
            continue;
        }
        acc = if permutation_sign(&perm) > 0 { acc.add_ref(&prod) } else { acc.sub_ref(&prod) };
    }
    acc
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sparse row over the rationals: column index to nonzero value.
pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incremental row echelon basis over Q. Each stored row has its pivot at
/// its smallest column index with a normalized leading 1.
#[derive(Debug, Default, Clone)]
pub struct EchelonBasis {
    pivots: BTreeMap<usize, SparseRow>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the basis; inserts it if independent.
    /// Returns `true` when the rank grew.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(prow) => {
                    let factor = lead_val.clone();
                    for (c, v) in prow {
                        let e = row.entry(*c).or_insert_with(scalar::zero);
                        *e -= &factor * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
                None => {
                    let inv = lead_val.recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    debug_assert!(row[&lead].is_one());
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }
}

/// Rank over Q of dense rows.
pub fn rank_q(rows: &[Vec<Scalar>]) -> usize {
    let mut basis = EchelonBasis::new();
    for r in rows {
        basis.insert(r.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect());
    }
    basis.rank()
}
