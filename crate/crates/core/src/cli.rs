//! Command-line front end.
//!
//! Every subcommand produces one report, printed either as indented
//! `key: value` text or as a JSON document. Exit codes: 0 when every verdict
//! passes, 1 on a failed verdict, 2 on malformed input.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{debarre_bound, decompose, dt_bound, kjet_check, kobayashi_bound, Decomposition};
use crate::error::{Error, Result};
use crate::fermat::{build_family, smoothness_probe, FermatDoc};
use crate::incidence::{
    fiber_finite, plucker_degree, verify_product_mult, verify_single_mult, FiberVerdict, GrassCurveSpec,
    GrassMatrixDoc, GrassPointFq,
};
use crate::poly::PolyDoc;
use crate::random;
use crate::selftest::{run_all, SelftestOptions};
use crate::series::{CurveGerm, GermDoc, ReparamGerm, SeriesDoc, TruncatedSeries};
use crate::wronskian::{check_oracle, check_reparam_invariance, wronskian, WronskianDoc, WronskianInput};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hyperjet",
    version,
    about = "Exact checks for jet differentials, Wronskians, degree bounds and intersection multiplicities"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Effective degree bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Split a degree as delta0 (r + k) + eps.
    Decompose {
        #[arg(long)]
        d: BigUint,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: usize,
    },
    /// Check the jet-ampleness hypotheses for explicit (eps_i, delta_i, r).
    KjetCheck {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Wronskian computations.
    #[command(subcommand)]
    Wronskian(WronskianCmd),
    /// Fermat-type sections.
    #[command(subcommand)]
    Fermat(FermatCmd),
    /// Intersection multiplicities, Plücker degrees and fiber probes.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run the acceptance suite.
    Selftest {
        /// Smaller random sample counts.
        #[arg(long)]
        quick: bool,
        /// Include wall-clock timings (makes the output non-reproducible).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Debug, Subcommand)]
enum BoundsCmd {
    Kobayashi {
        #[arg(long)]
        n: usize,
    },
    Debarre {
        #[arg(long)]
        n: usize,
    },
    Dt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: usize,
    },
}

#[derive(Debug, Subcommand)]
enum WronskianCmd {
    /// Expand W(g_0, ..., g_k) as a jet polynomial; evaluate on a germ if one is given.
    Eval {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check covariance under a reparametrization (random germ and reparametrization unless given).
    Invariance {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare against the classical Wronskian of the composed series.
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum FermatCmd {
    /// Build the sections of a spec or family.
    Build {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Monte Carlo smoothness probe over F_p.
    Probe {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        p: u64,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Local length on the degree-one curve against delta^(N-1).
    SingleMult {
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        delta: u32,
    },
    /// Local length on a product curve against b_i.
    ProductMult {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<u32>,
        #[arg(long)]
        i: usize,
    },
    /// Plücker degree of a parametrized curve of linear systems.
    Plucker {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Finiteness of the zero set of a linear system over F_p inside {z_j = 0, j in J}.
    Fiber {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long = "J", value_delimiter = ',')]
        j: Vec<usize>,
    },
}

/// One emitted report.
#[derive(Debug, Clone, Serialize)]
struct Report {
    command: String,
    seed: u64,
    claim: &'static str,
    passed: bool,
    result: Value,
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out`; diagnostics go to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_PASS;
                }
                _ => EXIT_MALFORMED,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_MALFORMED;
        }
    };
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Text => render_text(&report),
    };
    if out.write_all(rendered.as_bytes()).is_err() {
        return EXIT_FAIL;
    }
    if report.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("malformed document {}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<Report> {
    let seed = cli.seed;
    let report = |command: &str, claim: &'static str, passed: bool, result: Value| Report {
        command: command.to_string(),
        seed,
        claim,
        passed,
        result,
    };
    Ok(match &cli.command {
        Command::Bounds(b) => {
            let (name, r) = match b {
                BoundsCmd::Kobayashi { n } => ("bounds kobayashi", kobayashi_bound(*n)?),
                BoundsCmd::Debarre { n } => ("bounds debarre", debarre_bound(*n)?),
                BoundsCmd::Dt { n, c } => ("bounds dt", dt_bound(*n, *c)?),
            };
            report(
                name,
                "the exact bound agrees across formula routes and does not exceed its simplified form",
                r.passes(),
                to_value(&r),
            )
        }
        Command::Decompose { d, n, c } => {
            let dec = decompose(d, *n, *c)?;
            let ok = matches!(dec, Decomposition::Feasible { r_condition: true, .. });
            report(
                "decompose",
                "a degree at or above the threshold decomposes with r above its bound",
                ok,
                to_value(&dec),
            )
        }
        Command::KjetCheck { spec } => {
            let doc: KjetDoc = read_doc(spec)?;
            let eps = doc.eps.iter().map(BigDoc::value).collect::<Result<Vec<_>>>()?;
            let deltas = doc.deltas.iter().map(BigDoc::value).collect::<Result<Vec<_>>>()?;
            let v = kjet_check(doc.n, doc.c, &eps, &deltas, &doc.r.value()?)?;
            report(
                "kjet-check",
                "the parameters satisfy the hypotheses for almost jet ampleness",
                v.verdict,
                to_value(&v),
            )
        }
        Command::Wronskian(w) => wronskian_cmd(w, seed, &report)?,
        Command::Fermat(f) => fermat_cmd(f, seed, &report)?,
        Command::Verify(v) => verify_cmd(v, &report)?,
        Command::Selftest { quick, timings } => {
            let results = run_all(&SelftestOptions { seed, quick: *quick });
            let passed = results.iter().all(|r| r.passed);
            let mut value = to_value(&results);
            if !timings {
                for r in value.as_array_mut().expect("array") {
                    let obj = r.as_object_mut().expect("object");
                    obj.remove("elapsed_ms");
                    obj.remove("budget_ms");
                }
            }
            report("selftest", "every acceptance criterion holds", passed, value)
        }
    })
}

/// Non-negative integer given as a JSON number or a decimal string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum BigDoc {
    Num(u64),
    Str(String),
}

impl BigDoc {
    fn value(&self) -> Result<BigUint> {
        match self {
            BigDoc::Num(v) => Ok(BigUint::from(*v)),
            BigDoc::Str(s) => s.trim().parse().map_err(|_| Error::Invalid(format!("bad integer {s:?}"))),
        }
    }
}

/// `{"n": .., "c": .., "eps": [..], "deltas": [..], "r": ..}`.
#[derive(Debug, Clone, Deserialize)]
struct KjetDoc {
    n: usize,
    c: usize,
    eps: Vec<BigDoc>,
    deltas: Vec<BigDoc>,
    r: BigDoc,
}

/// Wronskian functions plus optional germ, reparametrization and truncation order.
#[derive(Debug, Clone, Deserialize)]
struct WronskianTask {
    #[serde(flatten)]
    functions: WronskianDoc,
    #[serde(default)]
    germ: Option<GermDoc>,
    #[serde(default)]
    phi: Option<SeriesDoc>,
    #[serde(default)]
    trunc: Option<usize>,
}

type MakeReport<'a> = &'a dyn Fn(&str, &'static str, bool, Value) -> Report;

fn wronskian_cmd(cmd: &WronskianCmd, seed: u64, report: MakeReport) -> Result<Report> {
    let path = match cmd {
        WronskianCmd::Eval { input } | WronskianCmd::Invariance { input } | WronskianCmd::Oracle { input } => input,
    };
    let task: WronskianTask = read_doc(path)?;
    let inp = WronskianInput::from_doc(&task.functions)?;
    let mut rng = random::seeded(seed);
    let trunc = task.trunc.unwrap_or(1);
    let germ = |order: usize, rng: &mut rand_chacha::ChaCha8Rng| -> Result<CurveGerm> {
        match &task.germ {
            Some(g) => CurveGerm::from_doc(g),
            None => Ok(random::germ(rng, inp.n(), order)),
        }
    };
    Ok(match cmd {
        WronskianCmd::Eval { .. } => {
            let w = wronskian(&inp);
            let mut result = json!({
                "k": inp.k(),
                "wronskian": w.to_string(),
                "document": to_value(&w.to_doc()),
                "weight": to_value(&w.weighted_degree()),
            });
            if let Some(g) = &task.germ {
                let f = CurveGerm::from_doc(g)?;
                result["on_germ"] = to_value(&w.eval_on_germ(&f, trunc)?.to_doc());
            }
            report("wronskian eval", "the Wronskian is an invariant jet differential of weight k(k+1)/2", true, result)
        }
        WronskianCmd::Invariance { .. } => {
            let f = germ(inp.k() + 1, &mut rng)?;
            let phi = match &task.phi {
                Some(p) => ReparamGerm::new(TruncatedSeries::from_doc(p)?)?,
                None => random::reparam(&mut rng, f.order()),
            };
            let cmp = check_reparam_invariance(&inp, &f, &phi)?;
            let result = json!({
                "germ": to_value(&f.to_doc()),
                "phi": to_value(&phi.series().to_doc()),
                "comparison": to_value(&cmp),
            });
            report("wronskian invariance", "W(f o phi)(0) = phi'(0)^(k(k+1)/2) W(f)(0)", cmp.equal, result)
        }
        WronskianCmd::Oracle { .. } => {
            let f = germ(inp.k() + trunc, &mut rng)?;
            let cmp = check_oracle(&inp, &f, trunc)?;
            let result = json!({ "germ": to_value(&f.to_doc()), "trunc": trunc, "comparison": to_value(&cmp) });
            report(
                "wronskian oracle",
                "the jet Wronskian evaluated on a germ equals the Wronskian of the composed series",
                cmp.equal,
                result,
            )
        }
    })
}

/// A single section or a family `{"sections": [...]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum FermatInput {
    Family { sections: Vec<FermatDoc> },
    Single(FermatDoc),
}

impl FermatInput {
    fn docs(&self) -> Vec<FermatDoc> {
        match self {
            FermatInput::Family { sections } => sections.clone(),
            FermatInput::Single(d) => vec![d.clone()],
        }
    }
}

fn fermat_cmd(cmd: &FermatCmd, seed: u64, report: MakeReport) -> Result<Report> {
    let path = match cmd {
        FermatCmd::Build { spec } | FermatCmd::Probe { spec, .. } => spec,
    };
    let input: FermatInput = read_doc(path)?;
    let docs = input.docs();
    let mut rng = random::seeded(seed);
    let specs = docs.iter().map(FermatDoc::spec).collect::<Result<Vec<_>>>()?;
    let coeffs = docs.iter().zip(&specs).map(|(d, s)| d.coeffs(s, &mut rng)).collect::<Result<Vec<_>>>()?;
    let family = build_family(&specs, &coeffs)?;
    let sections: Vec<Value> = family
        .sections
        .iter()
        .zip(&family.degrees)
        .map(|(s, d)| json!({ "degree": d, "section": s.to_string(), "document": to_value(&PolyDoc::from(s)) }))
        .collect();
    Ok(match cmd {
        FermatCmd::Build { .. } => {
            let result = json!({ "sections": sections, "hypotheses": to_value(&family.hypotheses) });
            report("fermat build", "each section is homogeneous of degree eps + (r + k) delta", true, result)
        }
        FermatCmd::Probe { trials, p, .. } => {
            let probe = smoothness_probe(&family.sections, *trials, *p, seed)?;
            let result = json!({ "sections": sections, "probe": to_value(&probe) });
            report(
                "fermat probe",
                "no sampled point of the zero locus has a rank-deficient Jacobian",
                probe.failures.is_empty(),
                result,
            )
        }
    })
}

fn verify_cmd(cmd: &VerifyCmd, report: MakeReport) -> Result<Report> {
    Ok(match cmd {
        VerifyCmd::SingleMult { big_n, delta } => {
            let r = verify_single_mult(*big_n, *delta)?;
            report(
                "verify single-mult",
                "the degree-one curve meets the hyperplane with multiplicity delta^(N-1)",
                r.passed,
                to_value(&r),
            )
        }
        VerifyCmd::ProductMult { c, k, deltas, i } => {
            let r = verify_product_mult(*c, *k, deltas, *i)?;
            report(
                "verify product-mult",
                "the product curve C_i meets D_i with multiplicity b_i",
                r.passed,
                to_value(&r),
            )
        }
        VerifyCmd::Plucker { spec } => {
            let spec: GrassCurveSpec = read_doc(spec)?;
            let r = plucker_degree(&spec)?;
            let expected: Vec<u32> = match &spec {
                GrassCurveSpec::Single { .. } => vec![1],
                GrassCurveSpec::Product { c, i, .. } => (1..=*c).map(|m| u32::from(m == *i)).collect(),
            };
            let passed = r.degrees == expected;
            let mut value = to_value(&r);
            value["expected"] = to_value(&expected);
            report("verify plucker", "the curve has degree one in the moving factor and zero elsewhere", passed, value)
        }
        VerifyCmd::Fiber { matrix, p, j } => {
            let doc: GrassMatrixDoc = read_doc(matrix)?;
            let point = GrassPointFq::from_doc(*p, &doc)?;
            let r = fiber_finite(&point, j)?;
            let passed = r.verdict != FiberVerdict::Unknown;
            let mut value = to_value(&r);
            value["rref"] = to_value(&point.rows);
            report(
                "verify fiber",
                "the fiber over the linear system is classified as finite or positive-dimensional",
                passed,
                value,
            )
        }
    })
}

fn render_text(report: &Report) -> String {
    let mut s = format!(
        "{}: {}\nclaim: {}\nseed: {}\n",
        report.command,
        if report.passed { "PASS" } else { "FAIL" },
        report.claim,
        report.seed
    );
    render_value(&report.result, 0, &mut s);
    s
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_) | Value::String(_) | Value::Bool(_))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar_text(x).expect("scalar")).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(o) if o.len() == 2 && o.contains_key("num") && o.contains_key("den") => {
            let (num, den) = (scalar_text(&o["num"])?, scalar_text(&o["den"])?);
            Some(if den == "1" { num } else { format!("{num}/{den}") })
        }
        _ => None,
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            let sorted: BTreeMap<&String, &Value> = map.iter().collect();
            for (k, val) in sorted {
                match scalar_text(val) {
                    Some(t) => out.push_str(&format!("{pad}{k}: {t}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(val, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                match scalar_text(val) {
                    Some(t) => out.push_str(&format!("{pad}- {t}\n")),
                    None => {
                        out.push_str(&format!("{pad}- [{i}]\n"));
                        render_value(val, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("hyperjet").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bounds_kobayashi_text() {
        let (code, out, _) = run_args(&["bounds", "kobayashi", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("exact: 269"), "{out}");
        assert!(out.contains("simplified: 384"), "{out}");
    }

    #[test]
    fn single_mult_json() {
        let (code, out, _) = run_args(&["--format", "json", "verify", "single-mult", "--N", "2", "--delta", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["computed"], 2);
        assert_eq!(v["result"]["expected"], 2);
        assert_eq!(v["passed"], true);
    }

    #[test]
    fn decompose_infeasible() {
        let (code, out, _) = run_args(&["decompose", "--d", "100", "--n", "2", "--c", "1"]);
        assert_eq!(code, 1);
        assert!(out.contains("status: infeasible") && out.contains("d0: 265"), "{out}");
    }

    #[test]
    fn malformed_input() {
        assert_eq!(run_args(&["bounds", "kobayashi"]).0, 2);
        assert_eq!(run_args(&["bounds", "kobayashi", "--n", "2", "--bogus"]).0, 2);
        assert_eq!(run_args(&["verify", "plucker", "--spec", "/nonexistent.json"]).0, 2);
        assert_eq!(run_args(&["verify", "single-mult", "--N", "1", "--delta", "2"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("selftest"));
    }
}
