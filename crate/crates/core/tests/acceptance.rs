use std::io::Write;
use std::time::{Duration, Instant};

use chowmod::suite::{run_one, run_suite, SuiteResult, SuiteSizes};

const SEED: u64 = 42;
/// Exact arithmetic throughout: every identity is checked for equality.
const TOLERANCE: u32 = 0;
const RHO_BUDGET: Duration = Duration::from_secs(10);
const K2_BUDGET: Duration = Duration::from_secs(5);

struct Criterion {
    id: u32,
    title: &'static str,
    suites: &'static [&'static str],
    budget: Option<Duration>,
    /// Minimum instance count per suite.
    min_total: usize,
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, title: "rho vanishes on boundaries of admissible level-2 cycles", suites: &["rho_reciprocity"], budget: Some(RHO_BUDGET), min_total: 300 },
    Criterion { id: 2, title: "rho(Z_a) = a and generator certificates valid", suites: &["rho_generators"], budget: None, min_total: 2 * (5 + 7 + 11 + 50) },
    Criterion { id: 3, title: "bounding surfaces for level-0 cycles", suites: &["bounding_surface"], budget: None, min_total: 200 },
    Criterion { id: 4, title: "y-degree above 1 violates the modulus", suites: &["degree_bound"], budget: None, min_total: 100 },
    Criterion { id: 5, title: "0-cycle vanishing at level 0 via hyperbola curves", suites: &["zero_cycle_vanishing"], budget: None, min_total: 200 },
    Criterion { id: 6, title: "K_2(F_q) trivial for q <= 16", suites: &["k2_oracle"], budget: Some(K2_BUDGET), min_total: 10 },
    Criterion { id: 7, title: "tame symbol formula and Weil reciprocity", suites: &["tame_symbol", "weil_reciprocity"], budget: None, min_total: 100 },
    Criterion { id: 8, title: "Totaro and xi witness curves", suites: &["totaro_steinberg", "totaro_mult", "xi_curve"], budget: None, min_total: 50 },
    Criterion { id: 9, title: "boundary squared vanishes and faces stay admissible", suites: &["boundary_squared"], budget: None, min_total: 200 },
];

/// Writes past the test harness's output capture, so the criterion lines
/// show up in a plain `cargo test` log.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").expect("stdout");
}

fn summary(r: &SuiteResult) -> String {
    format!("{} {}/{}", r.name, r.passed, r.total)
}

#[test]
fn acceptance() {
    assert_eq!(TOLERANCE, 0);
    let sizes = SuiteSizes::default();
    let mut all = true;
    for c in &CRITERIA {
        let start = Instant::now();
        let results: Vec<SuiteResult> = c.suites.iter().map(|s| run_one(s, SEED, &sizes).expect("suite")).collect();
        let elapsed = start.elapsed();
        let counts_ok = results.iter().all(|r| r.ok() && r.total >= c.min_total);
        let time_ok = c.budget.is_none_or(|b| elapsed < b);
        let ok = counts_ok && time_ok;
        all &= ok;
        let parts: Vec<String> = results.iter().map(summary).collect();
        let budget = c.budget.map(|b| format!(" budget {b:?}")).unwrap_or_default();
        report(format!(
            "criterion {:>2}: {} - {} [{}] in {:.2?}{}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            parts.join(", "),
            elapsed,
            budget
        ));
        for r in &results {
            for f in &r.failures {
                report(format!("    {}: {f}", r.name));
            }
        }
    }
    let first = run_suite(SEED, &sizes).to_json();
    let second = run_suite(SEED, &sizes).to_json();
    let same = first == second;
    all &= same;
    report(format!(
        "criterion 10: {} - seed {SEED} reports byte-identical across two runs ({} bytes)",
        if same { "PASS" } else { "FAIL" },
        first.len()
    ));
    assert!(all, "some acceptance criteria failed");
}
