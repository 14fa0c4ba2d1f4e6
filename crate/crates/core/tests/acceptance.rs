//! Acceptance run: one line per criterion, exit status 1 if any fails.

use std::time::{Duration, Instant};

use powerop::isogeny::build_power_section;
use powerop::oracle::{run_suite, verify_bijection, SuiteOptions, VerificationReport};
use powerop::padic::Context;

struct Outcome {
    pass: bool,
    detail: String,
}

fn all_pass(reports: &[VerificationReport]) -> Outcome {
    let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| format!("{} {:?}", r.summary(), r.witness)).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() { format!("{} instances", reports.len()) } else { failed.join("; ") },
    }
}

fn suite(name: &str, o: &SuiteOptions) -> Vec<VerificationReport> {
    match run_suite(name, o) {
        Ok(r) => r,
        Err(e) => panic!("suite {name} could not run: {e}"),
    }
}

fn criterion_1() -> Outcome {
    let reports = suite("bijection", &SuiteOptions::default());
    let mut out = all_pass(&reports);
    for (g, p, n, m, expected) in [("e", 2, 2, 2, 4), ("C2", 2, 1, 2, 5)] {
        let r = verify_bijection(g, p, n, m, 10_000).expect("small census");
        if r.counts["brute_classes"] != expected || r.counts["sum_data"] != expected {
            out.pass = false;
            out.detail.push_str(&format!("; {g} p={p} n={n} m={m}: counts {:?}, expected {expected}", r.counts));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let built = suite("global-power", &SuiteOptions::default());
    let mutated = suite("global-power", &SuiteOptions { mutated: true, ..SuiteOptions::default() });
    let mut out = all_pass(&built);
    let missed: Vec<String> = mutated.iter().filter(|r| r.pass || r.witness.is_none()).map(|r| r.summary()).collect();
    if !missed.is_empty() {
        out.pass = false;
        out.detail.push_str(&format!("; mutations without witness: {}", missed.join(", ")));
    }
    out.detail.push_str(&format!("; {} mutated sections refuted", mutated.len() - missed.len()));
    out
}

fn criterion_8() -> Outcome {
    let mut reports = suite("injection", &SuiteOptions::default());
    reports.extend(suite("embedding", &SuiteOptions::default()));
    reports.extend(suite("assembly", &SuiteOptions::default()));
    all_pass(&reports)
}

fn criterion_9() -> Outcome {
    let o = SuiteOptions { seed: 11, functions: 5, group: Some("C2".into()), p: Some(2), ..SuiteOptions::default() };
    let render = || -> String {
        let census = serde_json::to_string(&suite("bijection", &o)).unwrap();
        let relations = serde_json::to_string(&suite("relations", &o)).unwrap();
        let section = build_power_section(&Context::new(2, 2, 3).unwrap(), 3).unwrap().to_json().unwrap();
        format!("{census}\n{relations}\n{section}")
    };
    let first = render();
    let second = render();
    Outcome {
        pass: first == second,
        detail: format!("{} bytes compared", first.len()),
    }
}

fn main() {
    let criteria: Vec<(u32, &str, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "bijection census", Duration::from_secs(120), Box::new(criterion_1)),
        (2, "subgroup counts", Duration::from_secs(5), Box::new(|| all_pass(&suite("subgroups", &SuiteOptions::default())))),
        (3, "height-2 power section", Duration::from_secs(60), Box::new(|| all_pass(&suite("section", &SuiteOptions::default())))),
        (4, "global power identity", Duration::from_secs(120), Box::new(criterion_4)),
        (5, "power relations", Duration::from_secs(120), Box::new(|| {
            all_pass(&suite("relations", &SuiteOptions { seed: 2024, functions: 20, ..SuiteOptions::default() }))
        })),
        (6, "descent", Duration::from_secs(60), Box::new(|| all_pass(&suite("descent", &SuiteOptions { seed: 7, ..SuiteOptions::default() })))),
        (7, "Adams operations", Duration::from_secs(30), Box::new(|| all_pass(&suite("adams", &SuiteOptions { seed: 3, ..SuiteOptions::default() })))),
        (8, "structural checks", Duration::from_secs(60), Box::new(criterion_8)),
        (9, "determinism", Duration::from_secs(60), Box::new(criterion_9)),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failures = 0;
    for (id, name, budget, run) in &criteria {
        if only.is_some_and(|o| o != *id) {
            continue;
        }
        let t0 = Instant::now();
        let out = run();
        let elapsed = t0.elapsed();
        let in_time = elapsed <= *budget;
        let pass = out.pass && in_time;
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {id} ({name}): {} in {:.2}s (budget {}s) - {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
