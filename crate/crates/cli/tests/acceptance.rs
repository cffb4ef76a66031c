//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cq_geometry::verify::{self, CheckResult, REFERENCE_TABLE};
use serde_json::Value;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Result<String, String>,
}

fn check(r: CheckResult) -> Result<String, String> {
    if r.passed { Ok(r.detail) } else { Err(r.detail) }
}

fn cq(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cq")).args(args).output().expect("cq runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn table_from_cli() -> Result<String, String> {
    let (code, stdout) = cq(&["table"]);
    if code != 0 {
        return Err(format!("exit code {code}"));
    }
    let v: Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
    let rows = v["rows"].as_array().ok_or("no rows")?;
    let mut entries = 0;
    for (name, expected) in REFERENCE_TABLE {
        let row = rows.iter().find(|r| r["curve"] == name).ok_or(format!("missing {name}"))?;
        let got: Vec<i64> = row["values"].as_array().ok_or("no values")?.iter().filter_map(Value::as_i64).collect();
        if got != expected {
            return Err(format!("{name}: {got:?}"));
        }
        // E_i pairs as 2H_i - H_(i-1) - H_(i+1)
        let h = |i: usize| if (1..=3).contains(&i) { got[i - 1] } else { 0 };
        for i in 1..=3 {
            if got[2 + i] != 2 * h(i) - h(i - 1) - h(i + 1) {
                return Err(format!("{name}: E{i} not the lattice image of the H columns"));
            }
        }
        entries += got.len();
    }
    Ok(format!("{entries} entries from `cq table` agree"))
}

fn disclosure() -> Result<String, String> {
    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md"))
        .map_err(|e| format!("README: {e}"))?;
    if !(readme.contains("92") && readme.contains("not reproduced")) {
        return Err("README does not document the missing degree 92".into());
    }
    if !verify::UNREPRODUCED.contains("92") {
        return Err("verify-all does not report the gap".into());
    }
    Ok("degree 92 not reproduced; gap documented in README and verify-all".into())
}

const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        title: "compound form on Plücker vectors equals restricted determinant",
        budget: Duration::from_secs(10),
        run: || check(verify::plucker_restriction_identity(100, 1)),
    },
    Criterion {
        id: 2,
        title: "intersection table of X3",
        budget: Duration::from_secs(1),
        run: table_from_cli,
    },
    Criterion {
        id: 3,
        title: "direct degeneration counts",
        budget: Duration::from_secs(30),
        run: || check(verify::direct_counts(20, 1)),
    },
    Criterion {
        id: 4,
        title: "tangent members of a pencil: n-k+1",
        budget: Duration::from_secs(30),
        run: || check(verify::tangent_plane_counts(6, 20, 1)),
    },
    Criterion {
        id: 5,
        title: "canonical class two ways, Fano for n <= 8",
        budget: Duration::from_secs(1),
        run: || check(verify::canonical_and_fano()),
    },
    Criterion {
        id: 6,
        title: "H2 and H3 from test-curve pairings",
        budget: Duration::from_secs(1),
        run: || check(verify::class_derivation()),
    },
    Criterion {
        id: 7,
        title: "P·R2 = 4 via Schubert calculus",
        budget: Duration::from_secs(1),
        run: || check(verify::schubert_pairing()),
    },
    Criterion {
        id: 8,
        title: "flag curves contracted exactly when j != k",
        budget: Duration::from_secs(10),
        run: || check(verify::flag_contraction()),
    },
    Criterion {
        id: 9,
        title: "limits of Chow forms along degenerating families",
        budget: Duration::from_secs(5),
        run: || check(verify::chow_limits(20, 1)),
    },
    Criterion {
        id: 10,
        title: "chamber classifier and census of 10^4 divisors",
        budget: Duration::from_secs(60),
        run: || check(verify::chamber_classifier(10_000, 1)),
    },
    Criterion {
        id: 11,
        title: "disclosure: degree 92 not reproduced",
        budget: Duration::from_secs(1),
        run: disclosure,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} budget", c.budget)),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}  {} ({:.2?})  {}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            elapsed,
            detail
        );
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
