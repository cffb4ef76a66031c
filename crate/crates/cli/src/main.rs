use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cq_core::{k_subsets, Matrix, Rat};
use cq_geometry::chambers::{self, ChamberReport};
use cq_geometry::chowform;
use cq_geometry::pencils;
use cq_geometry::picard::{self, Basis, CanonicalMethod, Cone, CurveClass, DivisorClass, TestCurve};
use cq_geometry::quadrics::SymmetricForm;
use cq_geometry::schubert;
use cq_geometry::verify::{self, Suite};
use serde::Deserialize;
use serde_json::{json, Value};

/// Complete quadrics: Chow forms, Picard lattice, chambers and Schubert
/// calculus, in exact arithmetic.
#[derive(Parser)]
#[command(name = "cq", version)]
struct Cli {
    /// Aligned text instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    /// JSON output (the default).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The k-th compound of a form, optionally with the limit along a pencil.
    Chow {
        /// Form as {"n": 3, "matrix": [["1","0",...],...]}.
        #[arg(long)]
        form: String,
        #[arg(long)]
        k: usize,
        /// Direction Q1 of the family Q + t·Q1; prints the limit at t = 0.
        #[arg(long)]
        toward: Option<String>,
    },
    /// Degenerations of random pencils.
    Pencil {
        #[arg(long, required_unless_present = "verify_table")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "verify_table")]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Count the directly computable entries of the intersection table.
        #[arg(long)]
        verify_table: bool,
    },
    /// Membership in the nef, effective and movable cones of X3.
    Cone {
        #[arg(long)]
        divisor: String,
        /// One of nef, eff, mov; all three when omitted.
        #[arg(long)]
        cone: Option<Cone>,
    },
    /// The canonical class of X_n.
    Canonical {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "H")]
        basis: Basis,
        #[arg(long, default_value = "blowup")]
        method: CanonicalMethod,
    },
    /// Intersection number of a curve with a divisor.
    Pair {
        /// A test curve name such as G or C1*, or {"n": 3, "coeffs": [...]}
        /// in the flag-curve basis.
        #[arg(long)]
        curve: String,
        #[arg(long)]
        divisor: String,
    },
    /// The intersection table of the test curves on X3.
    Table,
    /// Chamber, stable base locus and model of a divisor on X3.
    Chamber {
        #[arg(long, conflicts_with_all = ["segment", "census"], required_unless_present_any = ["segment", "census"])]
        divisor: Option<String>,
        /// Classify t·H1 + (1-t)·H3.
        #[arg(long, conflicts_with = "census")]
        segment: Option<Rat>,
        /// Classify this many random divisors and check consistency.
        #[arg(long)]
        census: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Schubert calculus on G(k,n).
    Schubert {
        /// `k,n` for k-planes in P^n.
        #[arg(long, default_value = "1,3")]
        grassmannian: String,
        #[arg(long)]
        expr: String,
    },
    /// Run every acceptance check.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smaller samples for a fast run.
        #[arg(long)]
        quick: bool,
    },
}

enum Failure {
    Usage(String),
    Verification(Output),
}

struct Output {
    json: Value,
    text: String,
}

type Outcome = Result<Output, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Text(String),
    Int(i64),
}

impl Number {
    fn to_rat(&self) -> Result<Rat, Failure> {
        match self {
            Number::Text(s) => s.parse().map_err(|e| usage(format!("bad coefficient {s:?}: {e}"))),
            Number::Int(i) => Ok(Rat::from_int(*i)),
        }
    }
}

fn default_n() -> usize {
    3
}

fn default_basis() -> Basis {
    Basis::H
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorArg {
    #[serde(default = "default_n")]
    n: usize,
    #[serde(default = "default_basis")]
    basis: Basis,
    coeffs: Vec<Number>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveArg {
    #[serde(default = "default_n")]
    n: usize,
    coeffs: Vec<Number>,
}

fn parse_divisor(s: &str) -> Result<DivisorClass, Failure> {
    let d: DivisorArg = serde_json::from_str(s).map_err(|e| usage(format!("--divisor: {e}")))?;
    let coeffs = d.coeffs.iter().map(Number::to_rat).collect::<Result<_, _>>()?;
    DivisorClass::new(d.n, d.basis, coeffs).map_err(usage)
}

fn parse_curve(s: &str) -> Result<CurveClass, Failure> {
    if let Ok(c) = s.parse::<TestCurve>() {
        return Ok(c.class());
    }
    let c: CurveArg = serde_json::from_str(s).map_err(|e| usage(format!("--curve: {e}")))?;
    let coeffs = c.coeffs.iter().map(Number::to_rat).collect::<Result<_, _>>()?;
    CurveClass::new(c.n, coeffs).map_err(usage)
}

fn parse_form(flag: &str, s: &str) -> Result<SymmetricForm, Failure> {
    serde_json::from_str(s).map_err(|e| usage(format!("{flag}: {e}")))
}

fn with_schema(name: &str, mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(format!("cq.{name}/1")));
    }
    v
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Rows of cells, left aligned in columns.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn matrix_text(m: &Matrix<Rat>) -> String {
    aligned(&m.to_rows().iter().map(|r| r.iter().map(Rat::to_string).collect()).collect::<Vec<_>>())
}

fn chow(form: &str, k: usize, toward: Option<&str>) -> Outcome {
    let q = parse_form("--form", form)?;
    let compound = q.compound(k).map_err(usage)?;
    let subsets: Vec<Vec<usize>> = k_subsets(q.ambient() + 1, k);
    let mut v = json!({ "n": q.ambient(), "k": k, "subsets": subsets, "compound": compound.matrix() });
    let mut text = format!("compound {k} of a form on P^{}\n{}", q.ambient(), matrix_text(compound.matrix()));
    if let Some(t) = toward {
        let q1 = parse_form("--toward", t)?;
        let lim = chowform::chow_limit(&q, &q1, k).map_err(usage)?;
        let terms: serde_json::Map<String, Value> = lim
            .quadratic_form_terms()
            .into_iter()
            .map(|((i, j), c)| (format!("p{i}*p{j}"), json!(c)))
            .collect();
        let _ = write!(text, "limit at t = 0 (t^{} divided out)\n{}", lim.valuation, matrix_text(&lim.matrix));
        v["limit"] = json!({ "valuation": lim.valuation, "matrix": lim.matrix, "terms": terms });
    }
    Ok(Output { json: with_schema("chow", v), text })
}

fn pencil(n: Option<usize>, k: Option<usize>, seed: u64, verify_table: bool) -> Outcome {
    if verify_table {
        let rows = pencils::verify_table(seed).map_err(usage)?;
        let ok = rows.iter().all(|r| r.agrees);
        let mut cells = vec![["entry", "total", "distinct", "lattice", "agrees"].map(String::from).to_vec()];
        for r in &rows {
            cells.push(vec![
                r.entry.to_string(),
                r.total.to_string(),
                r.distinct.to_string(),
                r.lattice.to_string(),
                r.agrees.to_string(),
            ]);
        }
        let out = Output {
            json: with_schema("pencil-table", json!({ "seed": seed, "passed": ok, "entries": rows })),
            text: aligned(&cells),
        };
        return if ok { Ok(out) } else { Err(Failure::Verification(out)) };
    }
    let (n, k) = (n.expect("required by clap"), k.expect("required by clap"));
    let count = pencils::bk_count(n, k, seed).map_err(usage)?;
    let expected = n - k + 1;
    let ok = count.distinct == expected && count.is_reduced();
    let out = Output {
        json: with_schema(
            "pencil",
            json!({ "n": n, "k": k, "seed": seed, "total": count.total, "distinct": count.distinct, "expected": expected, "passed": ok }),
        ),
        text: format!("n = {n}, k = {k}, seed {seed}: {} tangent members (expected {expected})\n", count.distinct),
    };
    if ok { Ok(out) } else { Err(Failure::Verification(out)) }
}

fn cone(divisor: &str, which: Option<Cone>) -> Outcome {
    let d = parse_divisor(divisor)?;
    let cones = which.map_or_else(|| vec![Cone::Nef, Cone::Eff, Cone::Mov], |c| vec![c]);
    let mut results = serde_json::Map::new();
    let mut cells = Vec::new();
    for c in cones {
        let m = picard::cone_membership(&d, c).map_err(usage)?;
        let name = to_json(&c).as_str().unwrap_or_default().to_string();
        cells.push(vec![name.clone(), m.member.to_string(), if m.interior { "interior" } else { "" }.to_string()]);
        results.insert(name, to_json(&m));
    }
    Ok(Output {
        json: with_schema("cone", json!({ "divisor": d, "display": d.to_string(), "cones": results })),
        text: format!("{d}\n{}", aligned(&cells)),
    })
}

fn canonical(n: usize, basis: Basis, method: CanonicalMethod) -> Outcome {
    let k = picard::canonical(n, method).map_err(usage)?;
    let k = picard::convert(&k, basis).map_err(usage)?;
    let fano = picard::is_fano(n).map_err(usage)?;
    let labels = basis.labels(n);
    Ok(Output {
        json: with_schema(
            "canonical",
            json!({ "n": n, "basis": basis, "method": method, "coeffs": k.coeffs, "labels": labels, "display": k.to_string(), "fano": fano }),
        ),
        text: format!("K = {k}\nFano: {fano}\n"),
    })
}

fn pair(curve: &str, divisor: &str) -> Outcome {
    let c = parse_curve(curve)?;
    let d = parse_divisor(divisor)?;
    let v = picard::pair(&c, &d).map_err(usage)?;
    Ok(Output {
        json: with_schema("pair", json!({ "curve": c, "divisor": d, "value": v })),
        text: format!("{v}\n"),
    })
}

fn table() -> Outcome {
    let rows = picard::table_x3();
    let mut cells = vec![["curve", "H1", "H2", "H3", "E1", "E2", "E3", "cover"].map(String::from).to_vec()];
    for r in &rows {
        let mut line = vec![r.curve.clone()];
        line.extend(r.values.iter().map(i64::to_string));
        line.push(r.cover.clone());
        cells.push(line);
    }
    Ok(Output {
        json: with_schema("table", json!({ "columns": ["H1", "H2", "H3", "E1", "E2", "E3"], "rows": rows })),
        text: aligned(&cells),
    })
}

fn report_text(r: &ChamberReport) -> String {
    aligned(&[
        vec!["chamber".into(), r.chamber.to_string()],
        vec!["face".into(), to_json(&r.face).as_str().unwrap_or_default().to_string()],
        vec!["base locus".into(), r.base_locus.to_string()],
        vec!["model".into(), r.model.clone()],
    ])
}

fn chamber(divisor: Option<&str>, segment: Option<&Rat>, census: Option<usize>, seed: u64) -> Outcome {
    if let Some(samples) = census {
        let c = chambers::chamber_census(samples, seed).map_err(usage)?;
        let ok = c.passed() && c.all_chambers_hit();
        let mut cells: Vec<Vec<String>> = c.counts.iter().map(|(k, v)| vec![format!("chamber {k}"), v.to_string()]).collect();
        cells.push(vec!["passed".into(), ok.to_string()]);
        let out = Output { json: with_schema("census", json!({ "census": c, "passed": ok })), text: aligned(&cells) };
        return if ok { Ok(out) } else { Err(Failure::Verification(out)) };
    }
    let (report, forced) = if let Some(t) = segment {
        (chambers::classify_segment(t).map_err(usage)?, None)
    } else {
        let d = parse_divisor(divisor.expect("required by clap"))?;
        let r = chambers::classify(&d).map_err(usage)?;
        (r, Some(chambers::forced_base_loci(&d).map_err(usage)?))
    };
    let mut v = to_json(&report);
    v["forced_base_loci"] = to_json(&forced);
    v["dual_model"] = json!(chambers::dual_model(&report));
    Ok(Output { json: with_schema("chamber", v), text: report_text(&report) })
}

fn schubert_cmd(grassmannian: &str, expr: &str) -> Outcome {
    let parts: Vec<usize> = grassmannian
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("--grassmannian expects k,n, got {grassmannian:?}")))?;
    let [k, n] = parts[..] else {
        return Err(usage(format!("--grassmannian expects k,n, got {grassmannian:?}")));
    };
    let e = schubert::evaluate(k, n, expr).map_err(usage)?;
    let text = match e.degree {
        Some(d) => format!("{d}\n"),
        None => format!("{}\n", e.class),
    };
    Ok(Output {
        json: with_schema(
            "schubert",
            json!({ "k": k, "n": n, "expr": expr, "class": e.class, "display": e.class.to_string(), "degree": e.degree }),
        ),
        text,
    })
}

fn verify_all(seed: u64, quick: bool) -> Outcome {
    let suite = if quick {
        Suite { seed, plucker_pairs: 12, count_seeds: 2, limit_samples: 4, census_samples: 500 }
    } else {
        Suite { seed, ..Suite::default() }
    };
    let results = verify::run_all(&suite);
    let ok = results.iter().all(|r| r.passed);
    let mut cells: Vec<Vec<String>> = results
        .iter()
        .map(|r| vec![if r.passed { "PASS" } else { "FAIL" }.into(), r.name.into(), r.detail.clone()])
        .collect();
    cells.push(vec!["NOTE".into(), "not-reproduced".into(), verify::UNREPRODUCED.into()]);
    let out = Output {
        json: with_schema(
            "verify-all",
            json!({ "suite": suite, "passed": ok, "checks": results, "not_reproduced": [verify::UNREPRODUCED] }),
        ),
        text: aligned(&cells),
    };
    if ok { Ok(out) } else { Err(Failure::Verification(out)) }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Chow { form, k, toward } => chow(form, *k, toward.as_deref()),
        Command::Pencil { n, k, seed, verify_table } => pencil(*n, *k, *seed, *verify_table),
        Command::Cone { divisor, cone: c } => cone(divisor, *c),
        Command::Canonical { n, basis, method } => canonical(*n, *basis, *method),
        Command::Pair { curve, divisor } => pair(curve, divisor),
        Command::Table => table(),
        Command::Chamber { divisor, segment, census, seed } => {
            chamber(divisor.as_deref(), segment.as_ref(), *census, *seed)
        }
        Command::Schubert { grassmannian, expr } => schubert_cmd(grassmannian, expr),
        Command::VerifyAll { seed, quick } => verify_all(*seed, *quick),
    }
}

fn print(out: &Output, text: bool) {
    if text {
        print!("{}", out.text);
    } else {
        println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print(&out, cli.text);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(out)) => {
            print(&out, cli.text);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
