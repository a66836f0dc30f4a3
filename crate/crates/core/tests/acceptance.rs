//! Acceptance criteria, one PASS/FAIL line each. Each criterion runs its
//! verification checks and must finish inside its time limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use semicount::verify::{checks, Check, Suite};

struct Criterion {
    number: u32,
    title: &'static str,
    checks: &'static [&'static str],
    limit: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, title: "N(1,f) closed form, 2 ≤ f ≤ 500", checks: &["n1-closed-form"], limit: secs(1) },
    Criterion { number: 2, title: "N(2,f) closed form, 3 ≤ f ≤ 200, both methods", checks: &["n2-closed-form"], limit: secs(10) },
    Criterion { number: 3, title: "table census 1, 2, 4 and the n = 3 rows", checks: &["table-census"], limit: secs(5) },
    Criterion { number: 4, title: "n = 3 polytopes vs oracle, 4 ≤ f ≤ 80; N(3,7) = 3", checks: &["n3-oracle"], limit: secs(60) },
    Criterion {
        number: 5,
        title: "quasi-polynomial degree n, leading 1/(2^n n!), periods 2 and 6",
        checks: &["qp-structure-n1", "qp-structure-n2", "qp-structure-n3", "qp-structure-n4"],
        limit: secs(600),
    },
    Criterion { number: 6, title: "reciprocity for every table with n ≤ 3, dmax = 30", checks: &["reciprocity"], limit: secs(120) },
    Criterion {
        number: 7,
        title: "quadrant/simplex counts 2, 3, 7; union = oracle; degrees 2 and 4",
        checks: &["affine-counts", "affine-oracle", "affine-degree"],
        limit: secs(300),
    },
    Criterion {
        number: 8,
        title: "encode/decode round trips, numerical and affine",
        checks: &["numerical-round-trip", "affine-round-trip"],
        limit: Duration::MAX,
    },
    Criterion {
        number: 9,
        title: "disjointness, lex partition, cone compatibility, relative interior",
        checks: &["piece-disjointness", "lex-partition", "cone-compatibility", "relative-interior"],
        limit: Duration::MAX,
    },
];

fn find<'a>(all: &'a [Check], name: &str) -> &'a Check {
    all.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check named {name}"))
}

fn main() -> ExitCode {
    let all = checks(Suite::All);
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let mut problems = Vec::new();
        let mut details = Vec::new();
        for name in c.checks {
            match (find(&all, name).run)() {
                Ok(d) => details.push(format!("{name}: {d}")),
                Err(e) => problems.push(format!("{name}: {e}")),
            }
        }
        let elapsed = start.elapsed();
        if elapsed > c.limit {
            problems.push(format!("took {:.1}s, limit {}s", elapsed.as_secs_f64(), c.limit.as_secs()));
        }
        let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {} ({:.2}s): {}", c.number, elapsed.as_secs_f64(), c.title);
        for line in if problems.is_empty() { &details } else { &problems } {
            println!("    {line}");
        }
        failed += !problems.is_empty() as u32;
    }
    println!("{} of {} criteria passed", CRITERIA.len() as u32 - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
