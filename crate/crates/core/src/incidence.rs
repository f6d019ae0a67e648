//! Intersection multiplicities, Plücker degrees and fiber probes on the
//! universal family of linear systems of degree-`delta` forms.
//!
//! Local lengths are computed as dimensions of truncated local algebras:
//! after translating the base point to the origin,
//! `dim Q[x] / (I + m^d)` is a rank computation on the monomial basis of
//! degree `< d`, and the sequence stabilizes at the length of the local ring
//! once two consecutive values agree (Nakayama).

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bounds::b_coeffs;
use crate::error::{Error, Result};
use crate::ffield::{Elem, Gf};
use crate::linalg::{det_cofactor, EchelonBasis, SparseRow};
use crate::poly::{monomials_of_degree, monomials_up_to, Exponent, MultiPoly, PolyDoc};
use crate::scalar::{self, RationalDoc, Scalar};

/// Generators of an ideal in an affine chart together with the point at
/// which the local length is taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartIdeal {
    pub vars: Vec<String>,
    pub gens: Vec<MultiPoly>,
    pub base_point: Vec<Scalar>,
}

impl ChartIdeal {
    pub fn new(vars: Vec<String>, gens: Vec<MultiPoly>, base_point: Vec<Scalar>) -> Result<Self> {
        let n = vars.len();
        if base_point.len() != n {
            return Err(Error::VarMismatch { left: n, right: base_point.len() });
        }
        for g in &gens {
            if g.num_vars() != n {
                return Err(Error::VarMismatch { left: n, right: g.num_vars() });
            }
            if !g.eval(&base_point)?.is_zero() {
                return Err(Error::Invalid(format!("generator {g} does not vanish at the base point")));
            }
        }
        Ok(ChartIdeal { vars, gens, base_point })
    }

    /// `2 + sum of generator degrees`.
    pub fn default_cap(&self) -> u32 {
        2 + self.gens.iter().filter_map(MultiPoly::total_degree).sum::<u32>()
    }

    /// Generators translated so the base point is the origin.
    pub fn translated(&self) -> Vec<MultiPoly> {
        self.gens
            .iter()
            .map(|g| g.translate(&self.base_point).expect("checked variable count"))
            .filter(|g| !g.is_zero())
            .collect()
    }

    pub fn display_gens(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.display_with(|i| self.vars[i].clone())).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthOptions {
    /// Largest truncation degree tried; `None` means [`ChartIdeal::default_cap`].
    pub cap: Option<u32>,
    /// Split into blocks of generators with disjoint variable support and
    /// multiply the block lengths.
    pub split: bool,
}

impl Default for LengthOptions {
    fn default() -> Self {
        LengthOptions { cap: None, split: true }
    }
}

/// Length of the local ring of `Q[x]/I` at the base point.
pub fn local_length(ideal: &ChartIdeal, opts: LengthOptions) -> Result<u64> {
    let cap = opts.cap.unwrap_or_else(|| ideal.default_cap());
    let gens = ideal.translated();
    let n = ideal.vars.len();
    let blocks = if opts.split { support_blocks(n, &gens) } else { vec![((0..n).collect(), gens)] };
    let mut total = 1u64;
    for (vars, block) in blocks {
        let len = block_length(&vars, &block, cap)?;
        total = total.checked_mul(len).ok_or_else(|| Error::OutOfRange("length overflows u64".into()))?;
    }
    Ok(total)
}

/// Connected components of the "shares a variable" relation. Variables that
/// no generator touches form their own (generator-free) blocks.
fn support_blocks(n: usize, gens: &[MultiPoly]) -> Vec<(Vec<usize>, Vec<MultiPoly>)> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for g in gens {
        let sup = g.support_vars();
        for w in sup.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut blocks: BTreeMap<usize, (Vec<usize>, Vec<MultiPoly>)> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        blocks.entry(r).or_default().0.push(v);
    }
    for g in gens {
        let sup = g.support_vars();
        let Some(&v) = sup.first() else { continue };
        let r = find(&mut parent, v);
        blocks.get_mut(&r).expect("root present").1.push(g.clone());
    }
    blocks.into_values().collect()
}

fn block_length(vars: &[usize], gens: &[MultiPoly], cap: u32) -> Result<u64> {
    let m = vars.len();
    let pos: HashMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let local: Vec<MultiPoly> = gens
        .iter()
        .map(|g| {
            let mut out = MultiPoly::zero(m);
            for (e, c) in g.terms() {
                let mut ne = vec![0; m];
                for (v, &x) in e.iter().enumerate() {
                    if x > 0 {
                        ne[pos[&v]] = x;
                    }
                }
                out.add_term(ne, c.clone());
            }
            out
        })
        .collect();
    let mut prev: Option<u64> = None;
    for d in 1..=cap {
        let dim = truncated_dim(m, &local, d);
        if let Some(p) = prev {
            debug_assert!(dim >= p, "truncated dimensions must be non-decreasing");
            if dim == p {
                return Ok(dim);
            }
        }
        prev = Some(dim);
    }
    Err(Error::CapExceeded { cap })
}

/// `dim Q[x] / (I + m^d)` with `m` the maximal ideal at the origin.
fn truncated_dim(m: usize, gens: &[MultiPoly], d: u32) -> u64 {
    let monos = monomials_up_to(m, d - 1);
    let index: HashMap<&Exponent, usize> = monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut basis = EchelonBasis::new();
    for g in gens {
        let Some(low) = g.min_degree() else { continue };
        for u in &monos {
            let du: u32 = u.iter().sum();
            if du + low >= d {
                continue;
            }
            let mut row = SparseRow::new();
            for (e, c) in g.terms() {
                let prod: Exponent = e.iter().zip(u).map(|(a, b)| a + b).collect();
                if let Some(&col) = index.get(&prod) {
                    row.insert(col, c.clone());
                }
            }
            basis.insert(row);
            if basis.rank() == monos.len() {
                return 0;
            }
        }
    }
    (monos.len() - basis.rank()) as u64
}

fn check_at_least(name: &str, v: usize, min: usize) -> Result<()> {
    if v < min {
        return Err(Error::OutOfRange(format!("{name} must be >= {min}, got {v}")));
    }
    Ok(())
}

/// `t = -(-1)^delta`, the parameter at which `z^delta + t` vanishes at `z = -1`.
fn moving_parameter(delta: u32) -> Scalar {
    if delta.is_multiple_of(2) {
        scalar::int(-1)
    } else {
        scalar::one()
    }
}

/// Chart `z_0 = 1, t_0 = 1` of the incidence between the degree-one curve of
/// linear systems `Span(z_1^d, ..., z_{N-1}^d, t0 z_N^d + t1 z_0^d)` and the
/// hyperplane `z_0 + z_N = 0`.
///
/// Variables `z_1, ..., z_N, t`; generators `z_1^d, ..., z_{N-1}^d,
/// z_N^d + t, 1 + z_N`; base point `z = (0, ..., 0, -1)`, `t = -(-1)^d`.
pub fn build_single_instance(big_n: usize, delta: u32) -> Result<ChartIdeal> {
    check_at_least("N", big_n, 2)?;
    check_at_least("delta", delta as usize, 1)?;
    let nv = big_n + 1;
    let mut vars: Vec<String> = (1..=big_n).map(|j| format!("z{j}")).collect();
    vars.push("t".into());
    let zn = big_n - 1;
    let t = big_n;
    let mut gens: Vec<MultiPoly> = (0..zn).map(|j| MultiPoly::var(nv, j).pow(delta)).collect();
    gens.push(&MultiPoly::var(nv, zn).pow(delta) + &MultiPoly::var(nv, t));
    gens.push(&MultiPoly::one(nv) + &MultiPoly::var(nv, zn));
    let mut base = vec![scalar::zero(); nv];
    base[zn] = scalar::int(-1);
    base[t] = moving_parameter(delta);
    ChartIdeal::new(vars, gens, base)
}

/// Multiplicity report for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultReport {
    pub instance: String,
    pub note: Option<String>,
    pub vars: Vec<String>,
    pub gens: Vec<PolyDoc>,
    pub base_point: Vec<RationalDoc>,
    pub computed: u64,
    pub expected: u64,
    pub passed: bool,
}

impl MultReport {
    fn new(instance: String, note: Option<String>, ideal: &ChartIdeal, computed: u64, expected: u64) -> Self {
        MultReport {
            instance,
            note,
            vars: ideal.vars.clone(),
            gens: ideal.gens.iter().map(PolyDoc::from).collect(),
            base_point: ideal.base_point.iter().map(RationalDoc::from_scalar).collect(),
            computed,
            expected,
            passed: computed == expected,
        }
    }
}

/// Computes the local length of [`build_single_instance`] and compares it with `delta^(N-1)`.
pub fn verify_single_mult(big_n: usize, delta: u32) -> Result<MultReport> {
    let ideal = build_single_instance(big_n, delta)?;
    let computed = local_length(&ideal, LengthOptions::default())?;
    let expected = (delta as u64).pow(big_n as u32 - 1);
    Ok(MultReport::new(format!("single N={big_n} delta={delta}"), None, &ideal, computed, expected))
}

const PRODUCT_NOTE: &str = "ambient coordinates n = (k+1)c, matching the coordinates used by the spans; \
the alternative reading n = k(c+1) is not used";

fn check_product(c: usize, deltas: &[u32], i: usize) -> Result<()> {
    check_at_least("c", c, 1)?;
    if deltas.len() != c {
        return Err(Error::Invalid(format!("expected {c} degrees, got {}", deltas.len())));
    }
    if deltas.contains(&0) {
        return Err(Error::OutOfRange("all degrees must be >= 1".into()));
    }
    if i < 1 || i > c {
        return Err(Error::OutOfRange(format!("moving index must lie in 1..={c}, got {i}")));
    }
    Ok(())
}

/// Chart of the incidence between the curve `C_i` in a product of
/// Grassmannians and the divisor `z_i + z_0 = 0`.
///
/// There are `n = (k+1)c` coordinates; section `l` of factor `m` is
/// `z_{lc+m}^{delta_m}`. The section `l = 0` of factor `i` moves as
/// `z_i^{delta_i} + t`.
pub fn build_product_instance(c: usize, k: usize, deltas: &[u32], i: usize) -> Result<ChartIdeal> {
    check_product(c, deltas, i)?;
    let n = (k + 1) * c;
    let nv = n + 1;
    let t = n;
    let mut vars: Vec<String> = (1..=n).map(|j| format!("z{j}")).collect();
    vars.push("t".into());
    let mut gens = Vec::with_capacity(n + 1);
    for l in 0..=k {
        for m in 1..=c {
            let v = l * c + m - 1;
            let g = MultiPoly::var(nv, v).pow(deltas[m - 1]);
            gens.push(if l == 0 && m == i { &g + &MultiPoly::var(nv, t) } else { g });
        }
    }
    gens.push(&MultiPoly::one(nv) + &MultiPoly::var(nv, i - 1));
    let mut base = vec![scalar::zero(); nv];
    base[i - 1] = scalar::int(-1);
    base[t] = moving_parameter(deltas[i - 1]);
    ChartIdeal::new(vars, gens, base)
}

/// Compares the local length of [`build_product_instance`] with `b_i`.
pub fn verify_product_mult(c: usize, k: usize, deltas: &[u32], i: usize) -> Result<MultReport> {
    let ideal = build_product_instance(c, k, deltas, i)?;
    let computed = local_length(&ideal, LengthOptions::default())?;
    let ds: Vec<usize> = deltas.iter().map(|&d| d as usize).collect();
    let b = &b_coeffs(&ds, k)?[i - 1];
    let expected = u64::try_from(b).map_err(|_| Error::OutOfRange("b_i overflows u64".into()))?;
    Ok(MultReport::new(
        format!("product c={c} k={k} deltas={deltas:?} i={i}"),
        Some(PRODUCT_NOTE.into()),
        &ideal,
        computed,
        expected,
    ))
}

/// A curve in a Grassmannian (or a product of Grassmannians) of linear
/// systems, parametrized linearly by `[t0, t1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum GrassCurveSpec {
    /// `Span(z_1^d, ..., z_{N-1}^d, t0 z_N^d + t1 z_0^d)` in `Gr_N(V_d)`.
    Single {
        #[serde(rename = "N")]
        big_n: usize,
        delta: u32,
    },
    /// The curve `C_i` in `prod_m Gr_{k+1}(V_{delta_m})`.
    Product { c: usize, k: usize, deltas: Vec<u32>, i: usize },
}

/// Rows of polynomials in `(t0, t1)`, one column per degree-`delta` monomial.
pub type ParamMatrix = Vec<Vec<MultiPoly>>;

fn moving_row(vars: usize, delta: u32, moving: usize) -> Vec<MultiPoly> {
    let monos = monomials_of_degree(vars, delta);
    let col = |v: usize| {
        let mut e = vec![0; vars];
        e[v] = delta;
        monos.iter().position(|m| *m == e).expect("pure power is a monomial")
    };
    let mut row = vec![MultiPoly::zero(2); monos.len()];
    row[col(moving)] = MultiPoly::var(2, 0);
    row[col(0)] = MultiPoly::var(2, 1);
    row
}

fn constant_row(vars: usize, delta: u32, v: usize) -> Vec<MultiPoly> {
    let monos = monomials_of_degree(vars, delta);
    let mut e = vec![0; vars];
    e[v] = delta;
    monos.iter().map(|m| if *m == e { MultiPoly::one(2) } else { MultiPoly::zero(2) }).collect()
}

impl GrassCurveSpec {
    /// One parametrized matrix per Grassmannian factor.
    pub fn matrices(&self) -> Result<Vec<ParamMatrix>> {
        match self {
            GrassCurveSpec::Single { big_n, delta } => {
                check_at_least("N", *big_n, 2)?;
                check_at_least("delta", *delta as usize, 1)?;
                let vars = big_n + 1;
                let mut rows: ParamMatrix = (1..*big_n).map(|j| constant_row(vars, *delta, j)).collect();
                rows.push(moving_row(vars, *delta, *big_n));
                Ok(vec![rows])
            }
            GrassCurveSpec::Product { c, k, deltas, i } => {
                check_product(*c, deltas, *i)?;
                let vars = (k + 1) * c + 1;
                Ok((1..=*c)
                    .map(|m| {
                        (0..=*k)
                            .map(|l| {
                                let v = l * c + m;
                                if l == 0 && m == *i {
                                    moving_row(vars, deltas[m - 1], v)
                                } else {
                                    constant_row(vars, deltas[m - 1], v)
                                }
                            })
                            .collect()
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PluckerReport {
    pub spec: GrassCurveSpec,
    /// Degree of the curve under each factor's Plücker embedding.
    pub degrees: Vec<u32>,
}

pub fn plucker_degree(spec: &GrassCurveSpec) -> Result<PluckerReport> {
    let degrees = spec.matrices()?.iter().map(|m| matrix_plucker_degree(m)).collect::<Result<_>>()?;
    Ok(PluckerReport { spec: spec.clone(), degrees })
}

const MINOR_BUDGET: u64 = 200_000;

/// Degree of the curve `[t0, t1] -> [maximal minors]` after removing the
/// common factor of the minors.
///
/// Every row must be homogeneous in `(t0, t1)` (all nonzero entries of one
/// common degree), so each maximal minor is a binary form of the same degree.
pub fn matrix_plucker_degree(rows: &[Vec<MultiPoly>]) -> Result<u32> {
    let r = rows.len();
    let Some(width) = rows.first().map(Vec::len) else {
        return Err(Error::RankDeficient);
    };
    let mut total = 0u32;
    for row in rows {
        if row.len() != width {
            return Err(Error::Invalid("rows have different lengths".into()));
        }
        if let Some(bad) = row.iter().find(|p| p.num_vars() != 2) {
            return Err(Error::VarMismatch { left: 2, right: bad.num_vars() });
        }
        let degs: Vec<u32> = row.iter().filter_map(MultiPoly::homogeneous_degree).unique().collect();
        let nonzero_inhomogeneous = row.iter().any(|p| !p.is_zero() && p.homogeneous_degree().is_none());
        match degs.as_slice() {
            [d] if !nonzero_inhomogeneous => total += d,
            [] => return Err(Error::RankDeficient),
            _ => return Err(Error::Invalid("each row must be homogeneous of one degree in (t0, t1)".into())),
        }
    }
    let cols: Vec<usize> = (0..width).filter(|&j| rows.iter().any(|row| !row[j].is_zero())).collect();
    if cols.len() < r {
        return Err(Error::RankDeficient);
    }
    let minors = binomial(cols.len(), r) as u64;
    if minors > MINOR_BUDGET {
        return Err(Error::BudgetExceeded { points: minors, budget: MINOR_BUDGET });
    }
    let mut content: Option<Vec<Scalar>> = None;
    let mut t0_power = u32::MAX;
    for pick in cols.iter().copied().combinations(r) {
        let sub: Vec<Vec<MultiPoly>> = rows.iter().map(|row| pick.iter().map(|&j| row[j].clone()).collect()).collect();
        let minor = det_cofactor(&sub);
        if minor.is_zero() {
            continue;
        }
        let g = dehomogenize(&minor);
        t0_power = t0_power.min(total - degree(&g) as u32);
        content = Some(match content {
            None => g,
            Some(acc) => univariate_gcd(&acc, &g),
        });
    }
    let g = content.ok_or(Error::RankDeficient)?;
    Ok(total - t0_power - degree(&g) as u32)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// `f(1, t1)` as dense coefficients, lowest degree first.
fn dehomogenize(f: &MultiPoly) -> Vec<Scalar> {
    let top = f.terms().keys().map(|e| e[1]).max().unwrap_or(0) as usize;
    let mut out = vec![scalar::zero(); top + 1];
    for (e, c) in f.terms() {
        out[e[1] as usize] += c;
    }
    trim(out)
}

fn trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn degree(v: &[Scalar]) -> usize {
    v.len().saturating_sub(1)
}

/// Monic gcd over Q.
fn univariate_gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = remainder(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(scalar::one);
    if lead.is_zero() {
        return a;
    }
    a.iter().map(|c| c / &lead).collect()
}

fn remainder(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let f = r.last().expect("nonempty") / &lead;
        for (j, c) in b.iter().enumerate() {
            r[shift + j] -= &f * c;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(scalar::zero());
        }
    }
    trim(r)
}

/// A point of the Grassmannian of `(k+1)`-dimensional linear systems of
/// degree-`delta` forms in `z_0, ..., z_N`, over the field with `p` elements.
///
/// Columns follow the degree-`delta` monomials in descending lexicographic
/// order (`z_0^delta` first). The matrix is kept in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrassPointFq {
    pub p: u64,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub delta: u32,
    pub rows: Vec<Vec<u64>>,
}

/// Input document: integer matrix reduced mod `p` on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassMatrixDoc {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub delta: u32,
    pub rows: Vec<Vec<i64>>,
}

impl GrassPointFq {
    pub fn new(p: u64, big_n: usize, delta: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let field = Gf::prime(p)?;
        check_at_least("delta", delta as usize, 1)?;
        let width = monomials_of_degree(big_n + 1, delta).len();
        if rows.is_empty() {
            return Err(Error::RankDeficient);
        }
        let mut m: Vec<Vec<Elem>> = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != width {
                return Err(Error::Invalid(format!("rows must have {width} entries, got {}", row.len())));
            }
            m.push(row.iter().map(|&v| field.from_base(v.rem_euclid(p as i64) as u64)).collect());
        }
        let reduced = rref(&field, m);
        if reduced.len() < rows.len() {
            return Err(Error::RankDeficient);
        }
        Ok(GrassPointFq {
            p,
            big_n,
            delta,
            rows: reduced.into_iter().map(|r| r.into_iter().map(|e| e.0).collect()).collect(),
        })
    }

    pub fn from_doc(p: u64, doc: &GrassMatrixDoc) -> Result<Self> {
        Self::new(p, doc.big_n, doc.delta, &doc.rows)
    }

    /// From forms with integer coefficients, all homogeneous of degree `delta` in `N + 1` variables.
    pub fn from_forms(p: u64, forms: &[MultiPoly]) -> Result<Self> {
        let Some(first) = forms.first() else {
            return Err(Error::RankDeficient);
        };
        let vars = first.num_vars();
        let delta =
            first.homogeneous_degree().ok_or_else(|| Error::Invalid("forms must be nonzero and homogeneous".into()))?;
        let monos = monomials_of_degree(vars, delta);
        let field = Gf::prime(p)?;
        let mut rows = Vec::new();
        for f in forms {
            if f.num_vars() != vars {
                return Err(Error::VarMismatch { left: vars, right: f.num_vars() });
            }
            if !f.is_homogeneous_of(delta) {
                return Err(Error::Invalid(format!("{f} is not homogeneous of degree {delta}")));
            }
            rows.push(monos.iter().map(|e| field.reduce(&f.coeff(e)).map(|x| x.0 as i64)).collect::<Result<Vec<_>>>()?);
        }
        Self::new(p, vars - 1, delta, &rows)
    }

    pub fn k_plus_one(&self) -> usize {
        self.rows.len()
    }
}

fn rref(field: &Gf, mut rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !field.is_zero(rows[r][c])) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(rows[rank][c]).expect("nonzero pivot");
        let pivot_row: Vec<Elem> = rows[rank].iter().map(|&v| field.mul(v, inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !field.is_zero(row[c]) {
                let f = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = field.sub(*v, field.mul(f, pv));
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiberVerdict {
    Finite { count: u64 },
    PositiveDim,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub p: u64,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub delta: u32,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    /// Projective dimension of the coordinate subspace `{z_j = 0, j in J}`.
    pub ambient_dim: usize,
    pub verdict: FiberVerdict,
    /// `true` when the verdict rests on point counts rather than a proof.
    pub heuristic: bool,
    /// `(field size, number of zeros)` for each field enumerated.
    pub counts: Vec<(u64, u64)>,
    pub method: String,
}

pub const ENUMERATION_BUDGET: u64 = 1_000_000;

/// Decides whether the common zero set of the forms of `delta_pt` inside
/// `P_J = {z_j = 0 : j in J}` is finite.
///
/// For `delta = 1` the zero set is a linear space and the answer is exact.
/// For `delta >= 2`:
/// * more forms-dimension slack than equations (`dim P_J > k + 1`) forces a
///   positive-dimensional zero set;
/// * a finite zero set of forms of degree `delta` in `P^D` has at most
///   `delta^D` points over any extension, so exceeding that count proves
///   positive dimension (over the algebraic closure of `F_p`);
/// * otherwise equal counts over `F_p` and `F_{p^2}` are reported as a
///   heuristic `Finite`, and anything else as `Unknown`.
pub fn fiber_finite(delta_pt: &GrassPointFq, j: &[usize]) -> Result<FiberReport> {
    let n = delta_pt.big_n;
    let mut jset: Vec<usize> = j.to_vec();
    jset.sort_unstable();
    jset.dedup();
    if let Some(&bad) = jset.iter().find(|&&x| x > n) {
        return Err(Error::OutOfRange(format!("index {bad} outside 0..={n}")));
    }
    let free: Vec<usize> = (0..=n).filter(|v| jset.binary_search(v).is_err()).collect();
    let mut report = FiberReport {
        p: delta_pt.p,
        big_n: n,
        delta: delta_pt.delta,
        j: jset.clone(),
        ambient_dim: free.len().saturating_sub(1),
        verdict: FiberVerdict::Unknown,
        heuristic: false,
        counts: Vec::new(),
        method: String::new(),
    };
    if free.is_empty() {
        report.verdict = FiberVerdict::Finite { count: 0 };
        report.method = "empty coordinate subspace".into();
        return Ok(report);
    }
    let field = Gf::prime(delta_pt.p)?;
    let monos = monomials_of_degree(n + 1, delta_pt.delta);
    let dim = free.len() - 1;
    let equations = delta_pt.k_plus_one();

    if delta_pt.delta == 1 {
        let rows: Vec<Vec<Elem>> =
            delta_pt.rows.iter().map(|row| free.iter().map(|&v| field.from_base(row[v])).collect()).collect();
        let kernel = free.len() - field.rank(rows);
        report.verdict = match kernel {
            0 | 1 => FiberVerdict::Finite { count: kernel as u64 },
            _ => FiberVerdict::PositiveDim,
        };
        report.method = format!("linear algebra: kernel dimension {kernel}");
        return Ok(report);
    }
    if dim > equations {
        report.verdict = FiberVerdict::PositiveDim;
        report.method = format!("dimension count: {equations} equations in P^{dim}");
        return Ok(report);
    }
    // Forms restricted to P_J: drop monomials touching J.
    let forms: Vec<Vec<(Exponent, u64)>> = delta_pt
        .rows
        .iter()
        .map(|row| {
            monos
                .iter()
                .zip(row)
                .filter(|(e, &c)| c != 0 && jset.iter().all(|&v| e[v] == 0))
                .map(|(e, &c)| (free.iter().map(|&v| e[v]).collect(), c))
                .collect()
        })
        .collect();
    let bezout = (delta_pt.delta as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
    let points = projective_size(field.size(), dim).unwrap_or(u64::MAX);
    if points > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded { points, budget: ENUMERATION_BUDGET });
    }
    let c1 = count_zeros(&field, &forms, dim);
    report.counts.push((field.size(), c1));
    if c1 > bezout {
        report.verdict = FiberVerdict::PositiveDim;
        report.method = format!("{c1} points over F_{} exceed the bound {bezout} for finite sets", field.size());
        return Ok(report);
    }
    let ext = Gf::quadratic(delta_pt.p)?;
    let Some(_) = projective_size(ext.size(), dim).filter(|&s| s <= ENUMERATION_BUDGET) else {
        report.method = format!("F_{} enumeration over budget", ext.size());
        return Ok(report);
    };
    let c2 = count_zeros(&ext, &forms, dim);
    report.counts.push((ext.size(), c2));
    if c2 > bezout {
        report.verdict = FiberVerdict::PositiveDim;
        report.method = format!("{c2} points over F_{} exceed the bound {bezout} for finite sets", ext.size());
    } else if c2 == c1 {
        report.verdict = FiberVerdict::Finite { count: c1 };
        report.heuristic = true;
        report.method = "stable point count over F_p and F_{p^2}".into();
    } else {
        report.method = "point counts inconclusive".into();
    }
    Ok(report)
}

/// `(q^(d+1) - 1) / (q - 1)`, or `None` on overflow.
fn projective_size(q: u64, d: usize) -> Option<u64> {
    let mut acc = 1u64;
    let mut pw = 1u64;
    for _ in 0..d {
        pw = pw.checked_mul(q)?;
        acc = acc.checked_add(pw)?;
    }
    Some(acc)
}

fn count_zeros(field: &Gf, forms: &[Vec<(Exponent, u64)>], dim: usize) -> u64 {
    let q = field.size();
    let forms: Vec<Vec<(&Exponent, Elem)>> =
        forms.iter().map(|f| f.iter().map(|(e, c)| (e, field.from_base(*c))).collect()).collect();
    let mut count = 0;
    let mut point = vec![field.zero(); dim + 1];
    // Normalized representatives: first nonzero coordinate equal to 1.
    for lead in 0..=dim {
        let tail = dim - lead;
        let total = q.pow(tail as u32);
        for idx in 0..total {
            point.iter_mut().for_each(|x| *x = field.zero());
            point[lead] = field.one();
            let mut rest = idx;
            for slot in point.iter_mut().skip(lead + 1) {
                *slot = field.element(rest % q);
                rest /= q;
            }
            let zero = forms.iter().all(|f| {
                let mut acc = field.zero();
                for (e, c) in f {
                    let mut t = *c;
                    for (x, &k) in point.iter().zip(e.iter()) {
                        if k > 0 {
                            t = field.mul(t, field.pow(*x, k as u64));
                        }
                    }
                    acc = field.add(acc, t);
                }
                field.is_zero(acc)
            });
            if zero {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ideal(n: usize, gens: Vec<MultiPoly>, base: Vec<i64>) -> ChartIdeal {
        ChartIdeal::new((0..n).map(|i| format!("x{i}")).collect(), gens, base.into_iter().map(int).collect()).unwrap()
    }

    fn both(ideal: &ChartIdeal) -> u64 {
        let split = local_length(ideal, LengthOptions::default()).unwrap();
        let joint = local_length(ideal, LengthOptions { split: false, ..Default::default() }).unwrap();
        assert_eq!(split, joint);
        split
    }

    #[test]
    fn simple_zero() {
        assert_eq!(both(&ideal(1, vec![MultiPoly::var(1, 0)], vec![0])), 1);
    }

    #[test]
    fn monomial_ideal() {
        let g = vec![MultiPoly::var(2, 0).pow(2), MultiPoly::var(2, 1).pow(3)];
        assert_eq!(both(&ideal(2, g, vec![0, 0])), 6);
    }

    #[test]
    fn translated_example() {
        let x = MultiPoly::var(3, 0);
        let y = MultiPoly::var(3, 1);
        let t = MultiPoly::var(3, 2);
        let g = vec![x.pow(2), &y.pow(2) + &t, &MultiPoly::one(3) + &y];
        assert_eq!(both(&ideal(3, g, vec![0, -1, -1])), 2);
    }

    #[test]
    fn mixed_ideal() {
        // (y - x^2, y^2): length 4 at the origin.
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        assert_eq!(both(&ideal(2, vec![&y - &x.pow(2), y.pow(2)], vec![0, 0])), 4);
    }

    #[test]
    fn non_isolated_hits_cap() {
        let g = vec![MultiPoly::var(2, 0).pow(2)];
        let id = ideal(2, g, vec![0, 0]);
        assert!(matches!(local_length(&id, LengthOptions::default()), Err(Error::CapExceeded { .. })));
        let joint = LengthOptions { split: false, cap: Some(6) };
        assert_eq!(local_length(&id, joint), Err(Error::CapExceeded { cap: 6 }));
    }

    #[test]
    fn generator_must_vanish() {
        let g = vec![&MultiPoly::var(1, 0) + &MultiPoly::one(1)];
        assert!(ChartIdeal::new(vec!["x".into()], g, vec![int(0)]).is_err());
    }

    #[test]
    fn single_instances() {
        let id = build_single_instance(2, 2).unwrap();
        assert_eq!(id.display_gens(), vec!["z1^2", "z2^2 + t", "z2 + 1"]);
        assert_eq!(id.base_point, vec![int(0), int(-1), int(-1)]);
        let id = build_single_instance(2, 1).unwrap();
        assert_eq!(id.base_point[2], int(1));
        let id = build_single_instance(3, 2).unwrap();
        assert_eq!(id.display_gens(), vec!["z1^2", "z2^2", "z3^2 + t", "z3 + 1"]);
        for (n, d, e) in [(2, 2, 2), (2, 3, 3), (3, 2, 4)] {
            let r = verify_single_mult(n, d).unwrap();
            assert_eq!((r.computed, r.expected), (e, e));
            assert!(r.passed);
        }
        assert!(build_single_instance(1, 2).is_err());
    }

    #[test]
    fn product_instances() {
        let id = build_product_instance(2, 1, &[2, 3], 1).unwrap();
        assert_eq!(id.display_gens(), vec!["z1^2 + t", "z2^3", "z3^2", "z4^3", "z1 + 1"]);
        assert_eq!(verify_product_mult(2, 1, &[2, 3], 1).unwrap().computed, 18);
        assert_eq!(verify_product_mult(2, 1, &[2, 3], 2).unwrap().computed, 12);
        for (n, d) in [(2, 2), (3, 3), (4, 2)] {
            let single = verify_single_mult(n, d).unwrap().computed;
            assert_eq!(verify_product_mult(1, n - 1, &[d], 1).unwrap().computed, single);
        }
        assert!(build_product_instance(2, 1, &[2, 3], 3).is_err());
        assert!(build_product_instance(2, 1, &[2], 1).is_err());
    }

    #[test]
    fn plucker_examples() {
        for (n, d) in [(2, 2), (3, 3)] {
            let r = plucker_degree(&GrassCurveSpec::Single { big_n: n, delta: d }).unwrap();
            assert_eq!(r.degrees, vec![1]);
        }
        let spec = GrassCurveSpec::Product { c: 3, k: 1, deltas: vec![2, 1, 2], i: 2 };
        assert_eq!(plucker_degree(&spec).unwrap().degrees, vec![0, 1, 0]);
    }

    #[test]
    fn plucker_row_operations() {
        let m = GrassCurveSpec::Single { big_n: 3, delta: 2 }.matrices().unwrap().remove(0);
        let base = matrix_plucker_degree(&m).unwrap();
        let mut ops = m.clone();
        ops[0] = ops[0].iter().zip(&m[1]).map(|(a, b)| a + &b.scale(&int(3))).collect();
        ops[1] = ops[1].iter().map(|a| a.scale(&int(-2))).collect();
        assert_eq!(matrix_plucker_degree(&ops).unwrap(), base);
        // A row scaled by a linear form only adds a common factor.
        ops[2] = ops[2].iter().map(|a| a * &(&MultiPoly::var(2, 0) + &MultiPoly::var(2, 1))).collect();
        assert_eq!(matrix_plucker_degree(&ops).unwrap(), base);
    }

    #[test]
    fn plucker_conic() {
        // Span(t0^2 e0 + t0 t1 e1 + t1^2 e2) traces a conic in P^2.
        let t0 = MultiPoly::var(2, 0);
        let t1 = MultiPoly::var(2, 1);
        let row = vec![t0.pow(2), &t0 * &t1, t1.pow(2)];
        assert_eq!(matrix_plucker_degree(&[row]).unwrap(), 2);
        let dup = vec![vec![t0.clone(), t1.clone()], vec![t0.clone(), t1.clone()]];
        assert_eq!(matrix_plucker_degree(&dup), Err(Error::RankDeficient));
    }

    #[test]
    fn gcd_helpers() {
        let a = vec![int(-1), int(0), int(1)]; // t^2 - 1
        let b = vec![int(1), int(1)]; // t + 1
        assert_eq!(univariate_gcd(&a, &b), vec![int(1), int(1)]);
        assert_eq!(univariate_gcd(&a, &[int(2)]), vec![int(1)]);
    }

    fn lin(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn fiber_linear() {
        let pt = GrassPointFq::from_forms(5, &[lin(3, 0), lin(3, 1)]).unwrap();
        let r = fiber_finite(&pt, &[]).unwrap();
        assert_eq!(r.verdict, FiberVerdict::Finite { count: 1 });
        assert!(!r.heuristic);
        let pt = GrassPointFq::from_forms(5, &[lin(4, 0), lin(4, 1)]).unwrap();
        assert_eq!(fiber_finite(&pt, &[]).unwrap().verdict, FiberVerdict::PositiveDim);
        assert_eq!(fiber_finite(&pt, &[2]).unwrap().verdict, FiberVerdict::Finite { count: 1 });
    }

    #[test]
    fn fiber_quadrics() {
        let pt = GrassPointFq::from_forms(5, &[lin(3, 0).pow(2), lin(3, 1).pow(2)]).unwrap();
        let r = fiber_finite(&pt, &[]).unwrap();
        assert_eq!(r.verdict, FiberVerdict::Finite { count: 1 });
        assert!(r.heuristic);
        assert_eq!(r.counts, vec![(5, 1), (25, 1)]);
        // z0 * z1 and z0^2 share the line z0 = 0.
        let pt = GrassPointFq::from_forms(5, &[lin(3, 0).pow(2), &lin(3, 0) * &lin(3, 1)]).unwrap();
        assert_eq!(fiber_finite(&pt, &[]).unwrap().verdict, FiberVerdict::PositiveDim);
    }

    #[test]
    fn grass_point_rref() {
        let pt = GrassPointFq::new(7, 1, 1, &[vec![2, 4], vec![1, 3]]).unwrap();
        assert_eq!(pt.rows, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(GrassPointFq::new(7, 1, 1, &[vec![1, 2], vec![2, 4]]), Err(Error::RankDeficient));
        assert!(GrassPointFq::new(7, 1, 1, &[vec![1, 2, 3]]).is_err());
    }
}
