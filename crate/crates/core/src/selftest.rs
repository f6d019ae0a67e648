//! The acceptance suite as runnable checks.
//!
//! Each criterion returns a [`CriterionResult`]; a criterion passes only if
//! every check inside it holds exactly and it finishes within its time budget.
//! `quick` mode shrinks the randomized sample counts for interactive use.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::bounds::{self, b_coeffs, debarre_bound, decompose, dt_bound, kobayashi_bound, Decomposition};
use crate::fermat::{build_section, smoothness_probe, FermatCoeffs, FermatSpec};
use crate::incidence::{
    local_length, plucker_degree, verify_product_mult, verify_single_mult, ChartIdeal, GrassCurveSpec, LengthOptions,
};
use crate::jet::Weight;
use crate::poly::MultiPoly;
use crate::random;
use crate::scalar::{self, Scalar};
use crate::wronskian::{
    check_jet_dependence, check_oracle, check_reparam_invariance, check_unit_scaling, wronskian, wronskian_weight,
    WronskianInput,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelftestOptions {
    pub seed: u64,
    pub quick: bool,
}

impl SelftestOptions {
    fn samples(&self, full: usize) -> usize {
        if self.quick {
            (full / 10).max(5)
        } else {
            full
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    /// The statement being checked, in words.
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub budget_ms: u64,
}

type Outcome = std::result::Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    claim: &'static str,
    budget: Duration,
    run: fn(&SelftestOptions) -> Outcome,
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        id: 1,
        name: "bound formulas",
        claim: "exact degree bounds reproduce the displayed formulas and stay below their simplified forms",
        budget: Duration::from_secs(1),
        run: bound_formulas,
    },
    Criterion {
        id: 2,
        name: "degree decomposition",
        claim: "every d >= d0 splits as delta0 (r + k) + eps with k <= eps < k + delta0 and r above its threshold",
        budget: Duration::from_secs(1),
        run: degree_decomposition,
    },
    Criterion {
        id: 3,
        name: "derivation oracle",
        claim: "evaluating D Q on a germ equals differentiating the evaluation of Q",
        budget: Duration::from_secs(10),
        run: derivation_oracle,
    },
    Criterion {
        id: 4,
        name: "wronskian identities",
        claim: "Wronskians match the classical series Wronskian and obey covariance, alternation, scaling and jet dependence",
        budget: Duration::from_secs(30),
        run: wronskian_identities,
    },
    Criterion {
        id: 5,
        name: "intersection multiplicities",
        claim: "local lengths equal delta^(N-1) on the degree-one curve and b_i on the product curves",
        budget: Duration::from_secs(60),
        run: intersection_multiplicities,
    },
    Criterion {
        id: 6,
        name: "plucker degrees",
        claim: "the moving curves have degree one under the Plücker minors of the moving factor and zero elsewhere",
        budget: Duration::from_secs(5),
        run: plucker_degrees,
    },
    Criterion {
        id: 7,
        name: "fermat sections",
        claim: "Fermat-type sections have degree eps + (r + k) delta; the diagonal form is smooth mod 7 and z0^m is not",
        budget: Duration::from_secs(30),
        run: fermat_sections,
    },
    Criterion {
        id: 8,
        name: "local length oracle",
        claim: "the local length of (x_1^a_1, ..., x_m^a_m) is the product of the a_j",
        budget: Duration::from_secs(10),
        run: local_length_oracle,
    },
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize, opts: &SelftestOptions) -> Option<CriterionResult> {
    let c = CRITERIA.iter().find(|c| c.id == id)?;
    let start = Instant::now();
    let outcome = (c.run)(opts);
    let elapsed = start.elapsed();
    let in_time = elapsed <= c.budget;
    let (passed, mut detail) = match outcome {
        Ok(d) => (in_time, d),
        Err(d) => (false, d),
    };
    if !in_time {
        detail.push_str(&format!("; exceeded time budget of {} ms", c.budget.as_millis()));
    }
    Some(CriterionResult {
        id: c.id,
        name: c.name,
        claim: c.claim,
        passed,
        detail,
        elapsed_ms: elapsed.as_millis() as u64,
        budget_ms: c.budget.as_millis() as u64,
    })
}

pub fn run_all(opts: &SelftestOptions) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.id, opts)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn bound_formulas(_: &SelftestOptions) -> Outcome {
    let expect = |label: &str, r: &bounds::BoundReport, exact: u64, simplified: Option<u64>| {
        ensure(r.exact == BigUint::from(exact), || format!("{label}: exact {} != {exact}", r.exact))?;
        if let Some(s) = simplified {
            let got = r.simplified.as_ref();
            ensure(got == Some(&BigUint::from(s)), || format!("{label}: simplified {got:?} != {s}"))?;
        }
        ensure(r.passes(), || format!("{label}: report fails its own consistency checks"))
    };
    expect("kobayashi n=2", &kobayashi_bound(2).map_err(err)?, 269, Some(384))?;
    expect("kobayashi n=3", &kobayashi_bound(3).map_err(err)?, 61274, Some(78732))?;
    let deb = debarre_bound(3).map_err(err)?;
    expect("debarre n=3", &deb, 25011, Some(46656))?;
    ensure(deb.routes_agree, || "debarre n=3: formula routes disagree".into())?;
    expect("dt (3,1)", &dt_bound(3, 1).map_err(err)?, 61265, Some(118098))?;
    expect("dt (2,1)", &dt_bound(2, 1).map_err(err)?, 265, None)?;
    Ok("kobayashi 269<=384, 61274<=78732; debarre 25011<=46656; dt(3,1) 61265<=118098; dt(2,1) 265".into())
}

fn degree_decomposition(opts: &SelftestOptions) -> Outcome {
    let big = |v: u64| BigUint::from(v);
    match decompose(&big(265), 2, 1).map_err(err)? {
        Decomposition::Feasible { eps, r, delta0, k, .. } => {
            ensure(eps == big(1) && r == big(65) && delta0 == 4 && k == 1, || {
                format!("decompose(265,2,1) = eps {eps}, r {r}, delta0 {delta0}, k {k}")
            })?
        }
        Decomposition::Infeasible { .. } => return Err("decompose(265,2,1) reported infeasible".into()),
    }
    let mut rng = random::seeded(opts.seed ^ 0x0d_ec);
    let samples = opts.samples(500);
    for _ in 0..samples {
        let n = rng.gen_range(2..=6);
        let c = rng.gen_range(1..n);
        let d0 = dt_bound(n, c).map_err(err)?.exact;
        let d = &d0 + big(rng.gen_range(0..1_000_000u64));
        match decompose(&d, n, c).map_err(err)? {
            Decomposition::Feasible { eps, r, delta0, k, r_bound, r_condition, .. } => {
                let (dd, kk) = (big(delta0 as u64), big(k as u64));
                ensure(&dd * (&r + &kk) + &eps == d, || format!("d = {d} (n={n}, c={c}) not reconstructed"))?;
                ensure(kk <= eps && eps < &kk + &dd, || format!("eps = {eps} outside window for d = {d}"))?;
                ensure(r_condition && r > r_bound, || format!("r = {r} not above threshold for d = {d}"))?;
            }
            Decomposition::Infeasible { .. } => return Err(format!("d = {d} >= d0 reported infeasible")),
        }
    }
    Ok(format!("decompose(265,2,1) = (1,65,4,1); {samples} random d >= d0 reconstructed"))
}

fn derivation_oracle(opts: &SelftestOptions) -> Outcome {
    let mut rng = random::seeded(opts.seed ^ 0xde_71);
    let samples = opts.samples(200);
    let trunc = 2;
    for s in 0..samples {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(0..=3);
        let q = random::jet_poly(&mut rng, n, k, 4);
        let f = random::germ(&mut rng, n, k + 1 + trunc);
        let lhs = q.derive().eval_on_germ(&f, trunc).map_err(err)?;
        let rhs = q.eval_on_germ(&f, trunc + 1).and_then(|v| v.derivative()).map_err(err)?;
        ensure(lhs == rhs, || format!("sample {s}: eval(DQ, f) = {lhs} but d/dt eval(Q, f) = {rhs}"))?;
    }
    Ok(format!("{samples} random (Q, f) with n <= 3, k <= 3 agree through order {trunc}"))
}

fn wronskian_identities(opts: &SelftestOptions) -> Outcome {
    let mut rng = random::seeded(opts.seed ^ 0x3a_0b);
    let n_oracle = opts.samples(200);
    let n_cov = opts.samples(100);
    let n_axioms = opts.samples(50);

    for s in 0..n_oracle {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(0..=3);
        let inp = random::wronskian_input(&mut rng, n, k, 2);
        let f = random::germ(&mut rng, n, k + 1);
        let cmp = check_oracle(&inp, &f, 1).map_err(err)?;
        ensure(cmp.equal, || format!("(a) oracle mismatch on sample {s}"))?;
    }

    for s in 0..n_cov {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(0..=3);
        let inp = random::wronskian_input(&mut rng, n, k, 2);
        let f = random::germ(&mut rng, n, k + 1);
        let phi = random::reparam(&mut rng, k + 1);
        let cmp = check_reparam_invariance(&inp, &f, &phi).map_err(err)?;
        ensure(cmp.equal, || format!("(b) covariance fails on sample {s}: {} vs {}", cmp.lhs, cmp.rhs))?;
    }

    for s in 0..n_axioms {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let inp = random::wronskian_input(&mut rng, n, k, 2);
        let w = wronskian(&inp);
        let g = inp.functions().to_vec();
        let expected_weight = wronskian_weight(k) as u32;
        ensure(w.is_zero() || w.weighted_degree() == Weight::Homogeneous(expected_weight), || {
            format!("(c) sample {s}: weight {:?} != {expected_weight}", w.weighted_degree())
        })?;

        let mut swapped = g.clone();
        swapped.swap(0, k);
        let ws = wronskian(&WronskianInput::new(swapped).map_err(err)?);
        ensure(ws == w.scale(&scalar::int(-1)), || format!("(c) sample {s}: swap does not negate"))?;

        let mut repeated = g.clone();
        repeated[k] = repeated[0].clone();
        let wr = wronskian(&WronskianInput::new(repeated).map_err(err)?);
        ensure(wr.is_zero(), || format!("(c) sample {s}: repeated entry gives nonzero"))?;

        let other = random::poly(&mut rng, n, 2, 3);
        let (a, b) = (random::nonzero_coeff(&mut rng), random::nonzero_coeff(&mut rng));
        let mut combo = g.clone();
        combo[0] = &g[0].scale(&a) + &other.scale(&b);
        let mut alt = g.clone();
        alt[0] = other;
        let lhs = wronskian(&WronskianInput::new(combo).map_err(err)?);
        let rhs = &w.scale(&a) + &wronskian(&WronskianInput::new(alt).map_err(err)?).scale(&b);
        ensure(lhs == rhs, || format!("(c) sample {s}: not linear in the first slot"))?;

        let f = random::germ(&mut rng, n, k);
        let h = loop {
            let h = &MultiPoly::one(n) + &random::poly(&mut rng, n, 2, 3);
            if !h.eval(&f.base_point()).map_err(err)?.eq(&scalar::zero()) {
                break h;
            }
        };
        let cmp = check_unit_scaling(&inp, &h, &f).map_err(err)?;
        ensure(cmp.equal, || format!("(d) sample {s}: h^(k+1) scaling fails"))?;

        let x = random::point(&mut rng, n);
        let h = vanishing_to_order(&mut rng, &x, k + 1);
        let germs: Vec<_> = (0..3).map(|_| random::germ_at(&mut rng, &x, k)).collect();
        let rep = check_jet_dependence(&inp, &h, &x, &germs).map_err(err)?;
        ensure(rep.equal, || format!("(e) sample {s}: perturbation in m_x^(k+1) changes the value"))?;
    }
    Ok(format!(
        "(a) {n_oracle} oracle matches; (b) {n_cov} covariance checks; (c)-(e) {n_axioms} axiom, scaling and jet-dependence checks"
    ))
}

/// A random element of `m_x^order`: a product of `order` linear forms vanishing at `x`, times a unit.
fn vanishing_to_order<R: Rng>(rng: &mut R, x: &[Scalar], order: usize) -> MultiPoly {
    let n = x.len();
    let mut h = &MultiPoly::one(n) + &random::poly(rng, n, 1, 2);
    for _ in 0..order {
        let mut lin = MultiPoly::zero(n);
        while lin.is_zero() {
            for (i, xi) in x.iter().enumerate() {
                let c = random::coeff(rng);
                let shifted = &MultiPoly::var(n, i) - &MultiPoly::constant(n, xi.clone());
                lin = &lin + &shifted.scale(&c);
            }
        }
        h = &h * &lin;
    }
    h
}

fn intersection_multiplicities(_: &SelftestOptions) -> Outcome {
    let mut singles = 0;
    for big_n in 2..=4 {
        for delta in 1..=4u32 {
            let r = verify_single_mult(big_n, delta).map_err(err)?;
            ensure(r.passed && r.computed == (delta as u64).pow(big_n as u32 - 1), || {
                format!("single N={big_n} delta={delta}: computed {} expected {}", r.computed, r.expected)
            })?;
            singles += 1;
        }
    }
    let mut products = 0;
    for c in 1..=3usize {
        for k in 0..=2usize {
            for deltas in delta_tuples(c, 3) {
                let ds: Vec<usize> = deltas.iter().map(|&d| d as usize).collect();
                let b = b_coeffs(&ds, k).map_err(err)?;
                for i in 1..=c {
                    let r = verify_product_mult(c, k, &deltas, i).map_err(err)?;
                    ensure(r.passed && BigUint::from(r.computed) == b[i - 1], || {
                        format!(
                            "product c={c} k={k} deltas={deltas:?} i={i}: computed {} expected {}",
                            r.computed,
                            b[i - 1]
                        )
                    })?;
                    products += 1;
                }
            }
        }
    }
    let r1 = verify_product_mult(2, 1, &[2, 3], 1).map_err(err)?.computed;
    let r2 = verify_product_mult(2, 1, &[2, 3], 2).map_err(err)?.computed;
    ensure((r1, r2) == (18, 12), || format!("(c=2,k=1,deltas=(2,3)) gave b = ({r1}, {r2})"))?;
    Ok(format!("{singles} single instances equal delta^(N-1); {products} product instances equal b_i (e.g. 18, 12)"))
}

/// All tuples in `{1..=max}^c`.
fn delta_tuples(c: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..c {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=max).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

fn plucker_degrees(_: &SelftestOptions) -> Outcome {
    for big_n in 2..=3 {
        for delta in 2..=3 {
            let r = plucker_degree(&GrassCurveSpec::Single { big_n, delta }).map_err(err)?;
            ensure(r.degrees == [1], || format!("single N={big_n} delta={delta}: degrees {:?}", r.degrees))?;
        }
    }
    let mut count = 0;
    for c in 1..=3usize {
        for k in 0..=2usize {
            for deltas in delta_tuples(c, 3) {
                for i in 1..=c {
                    let spec = GrassCurveSpec::Product { c, k, deltas: deltas.clone(), i };
                    let r = plucker_degree(&spec).map_err(err)?;
                    let expected: Vec<u32> = (1..=c).map(|m| u32::from(m == i)).collect();
                    ensure(r.degrees == expected, || format!("{spec:?}: degrees {:?}", r.degrees))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("4 single curves of degree 1; {count} product curves with factor-wise degrees (1 at i, 0 elsewhere)"))
}

fn diagonal_coeffs(spec: &FermatSpec) -> FermatCoeffs {
    let mut a = FermatCoeffs::zeros(spec);
    for j in 0..=spec.n {
        let mut idx = vec![0; spec.n + 1];
        idx[j] = spec.delta;
        a.set(idx, MultiPoly::one(spec.n + 1));
    }
    a
}

fn fermat_sections(opts: &SelftestOptions) -> Outcome {
    let mut rng = random::seeded(opts.seed ^ 0xfe_a7);
    let samples = opts.samples(100);
    for s in 0..samples {
        let spec = FermatSpec::new(
            rng.gen_range(1..=4),
            rng.gen_range(0..=2),
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(0..=2),
        )
        .map_err(err)?;
        let a = FermatCoeffs::random(&spec, &mut rng);
        let sigma = build_section(&spec, &a).map_err(err)?;
        ensure(sigma.homogeneous_degree() == Some(spec.degree()), || {
            format!("spec {s} ({spec:?}): degree {:?} != {}", sigma.homogeneous_degree(), spec.degree())
        })?;
    }

    // Diagonal forms sum_j z_j^m with 7 not dividing m.
    let diagonal = [(2, 1, 1, 1), (3, 1, 2, 1), (2, 2, 1, 1)];
    let trials = opts.samples(200);
    let mut tested = 0;
    for &(n, delta, r, k) in &diagonal {
        let spec = FermatSpec::new(n, 0, delta, r, k).map_err(err)?;
        let m = spec.degree();
        let sigma = build_section(&spec, &diagonal_coeffs(&spec)).map_err(err)?;
        let expected: MultiPoly = (0..=n).fold(MultiPoly::zero(n + 1), |acc, j| {
            let mut e = vec![0; n + 1];
            e[j] = m;
            &acc + &MultiPoly::monomial(e, scalar::one())
        });
        ensure(sigma == expected, || format!("diagonal spec {spec:?} did not give sum z_j^{m}"))?;
        let degenerate = MultiPoly::var(n + 1, 0).pow(m);
        for seed in opts.seed..opts.seed + 5 {
            let rep = smoothness_probe(std::slice::from_ref(&sigma), trials, 7, seed).map_err(err)?;
            ensure(rep.tested > 0 && rep.failures.is_empty(), || {
                format!("diagonal m={m} n={n} seed {seed}: {} rank drops in {} points", rep.failures.len(), rep.tested)
            })?;
            tested += rep.tested;
            let bad = smoothness_probe(std::slice::from_ref(&degenerate), trials, 7, seed).map_err(err)?;
            ensure(!bad.failures.is_empty(), || format!("z0^{m} seed {seed}: no rank drop found"))?;
        }
    }
    Ok(format!(
        "{samples} specs have degree eps + (r+k) delta; {tested} points on diagonal forms smooth over F_7, z0^m flagged for every seed"
    ))
}

fn local_length_oracle(opts: &SelftestOptions) -> Outcome {
    let mut rng = random::seeded(opts.seed ^ 0x10_ca);
    let samples = opts.samples(50);
    for s in 0..samples {
        let m = rng.gen_range(1..=4);
        let a: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=4)).collect();
        let gens = a.iter().enumerate().map(|(j, &aj)| MultiPoly::var(m, j).pow(aj)).collect();
        let ideal =
            ChartIdeal::new((1..=m).map(|j| format!("x{j}")).collect(), gens, vec![scalar::zero(); m]).map_err(err)?;
        let got = local_length(&ideal, LengthOptions { cap: None, split: false }).map_err(err)?;
        let want: u64 = a.iter().map(|&x| x as u64).product();
        ensure(got == want, || format!("sample {s}: exponents {a:?} gave {got}, expected {want}"))?;
    }
    Ok(format!("{samples} monomial ideals in <= 4 variables match the product of exponents"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let opts = SelftestOptions { seed: 1, quick: true };
        for r in run_all(&opts) {
            assert!(r.passed, "criterion {} failed: {}", r.id, r.detail);
        }
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(9, &SelftestOptions::default()).is_none());
        assert_eq!(criterion_count(), 8);
    }

    #[test]
    fn tuples() {
        assert_eq!(delta_tuples(2, 2), vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }
}
