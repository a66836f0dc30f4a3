use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use semicount::affine::{parse_cone, parse_window, AffineCounter, AffineError, Cone, WindowPolytope};
use semicount::ehrhart::{expected_leading_coefficient, AssembleOptions, FitError, FitOptions, QuasiPolynomial, Sampler};
use semicount::numsemi::{build_sr_polytope, count_semigroups, enumerate_realizable_tables, CountMethod, SrCounter};
use semicount::rational::format_rational;
use semicount::verify::{self, Status, Suite};

use crate::cache::{self, Cache};
use crate::output::{field, Output};
use crate::{AffineArgs, Cli, Command, Exit, Failure, Method, SuiteArg};

pub fn run(cli: &Cli) -> Result<(Output, Exit), Failure> {
    let cache = Cache::new(cache::directory(cli.cache_dir.as_deref(), cli.no_cache));
    match &cli.command {
        Command::Count { n, f, method } => count(*n, *f, *method),
        Command::Tables { n } => tables(*n).map(|o| (o, Exit::Ok)),
        Command::Fit { n, max_f, period, validation } => {
            fit(*n, *max_f, *period, *validation, cli.max_period, &cache)
        }
        Command::Affine(args) => affine(args, cli.max_period, &cache),
        Command::Verify { suite, budget } => Ok(run_verify(*suite, *budget)),
    }
}

fn fit_failure(e: FitError) -> Failure {
    Failure { exit: Exit::FitFailure, message: e.to_string() }
}

fn affine_failure(e: AffineError) -> Failure {
    let exit = if matches!(e, AffineError::PieceCapExceeded { .. }) { Exit::Cap } else { Exit::Usage };
    Failure { exit, message: e.to_string() }
}

fn count(n: usize, f: u64, method: Method) -> Result<(Output, Exit), Failure> {
    if n == 0 || f < 2 {
        return Err(Failure::usage("count needs n ≥ 1 and f ≥ 2"));
    }
    let by = |m| count_semigroups(n, f, m).map_err(|e| Failure::usage(e.to_string()));
    let oracle = if method != Method::Polytopes { Some(by(CountMethod::Oracle)?) } else { None };
    let polytopes = if method != Method::Oracle { Some(by(CountMethod::Polytopes)?) } else { None };
    let verdict = match (oracle, polytopes) {
        (Some(a), Some(b)) => Some(if a == b { "MATCH" } else { "MISMATCH" }),
        _ => None,
    };
    let method_name = match method {
        Method::Oracle => "oracle",
        Method::Polytopes => "polytopes",
        Method::Both => "both",
    };
    let json = json!({"n": n, "f": f, "method": method_name, "oracle": oracle, "polytopes": polytopes, "verdict": verdict});
    let text = match (oracle, polytopes, verdict) {
        (Some(a), Some(b), Some(v)) => format!("N({n},{f}): oracle {a}, polytopes {b}, {v}\n"),
        _ => format!("N({n},{f}) = {}\n", oracle.or(polytopes).unwrap_or_default()),
    };
    let header = vec!["n", "f", "method", "oracle", "polytopes", "verdict"];
    let row = header.iter().map(|k| field(&json[*k])).collect();
    let exit = if verdict == Some("MISMATCH") { Exit::Mismatch } else { Exit::Ok };
    Ok((Output { json, header, rows: vec![row], text }, exit))
}

fn tables(n: usize) -> Result<Output, Failure> {
    if !(1..=5).contains(&n) {
        return Err(Failure::usage("tables needs 1 ≤ n ≤ 5"));
    }
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    for (i, t) in enumerate_realizable_tables(n).iter().enumerate() {
        let q = build_sr_polytope(t).map_err(|e| Failure::usage(e.to_string()))?;
        let constraints: Vec<String> = q.to_string().lines().map(str::to_string).collect();
        let finite: Vec<[usize; 3]> = t.finite_entries().into_iter().map(|(a, b, c)| [a, b, c]).collect();
        let _ = writeln!(text, "table {}: {t} (dimension {})", i + 1, q.dimension());
        for c in &constraints {
            let _ = writeln!(text, "  {c}");
        }
        rows.push(vec![(i + 1).to_string(), t.to_string(), q.dimension().to_string(), constraints.join("; ")]);
        entries.push(json!({
            "index": i + 1,
            "table": t.to_string(),
            "finite": finite,
            "dimension": q.dimension(),
            "constraints": constraints,
        }));
    }
    Ok(Output { json: json!({"n": n, "tables": entries}), header: vec!["index", "table", "dimension", "constraints"], rows, text })
}

/// A fitted quasi-polynomial with the checks made on it, as stored in the cache.
#[derive(Serialize, Deserialize)]
struct FitReport {
    /// What was counted, e.g. `N(2,f)`.
    subject: String,
    n: usize,
    max_sample: u64,
    period: usize,
    degree: i64,
    expected_degree: i64,
    leading: String,
    expected_leading: Option<String>,
    verdict: bool,
    quasi_polynomial: QuasiPolynomial,
}

impl FitReport {
    fn new(subject: String, n: usize, max_sample: u64, q: QuasiPolynomial, expected_degree: usize, expected_leading: Option<String>) -> Self {
        let degree = q.degree().map_or(-1, |d| d as i64);
        let leading = q.leading_coefficient().to_string();
        let verdict = degree == expected_degree as i64 && expected_leading.as_ref().is_none_or(|e| *e == leading);
        FitReport {
            subject,
            n,
            max_sample,
            period: q.period(),
            degree,
            expected_degree: expected_degree as i64,
            leading,
            expected_leading,
            verdict,
            quasi_polynomial: q,
        }
    }

    fn output(&self) -> (Output, Exit) {
        let json = serde_json::to_value(self).expect("fit reports serialize");
        let header =
            vec!["subject", "n", "max_sample", "period", "degree", "expected_degree", "leading", "expected_leading", "verdict", "residue", "coefficients"];
        let rows = self
            .quasi_polynomial
            .polys()
            .iter()
            .enumerate()
            .map(|(r, p)| {
                let mut row: Vec<String> = header[..9].iter().map(|k| field(&json[*k])).collect();
                row.push(r.to_string());
                row.push(p.iter().map(format_rational).collect::<Vec<_>>().join(" "));
                row
            })
            .collect();
        let mut text = format!("{}: period {}, degree {}\n", self.subject, self.period, self.degree);
        let _ = match &self.expected_leading {
            Some(e) => writeln!(text, "leading coefficient {} (expected {e})", self.leading),
            None => writeln!(text, "leading coefficient {} (expected degree {})", self.leading, self.expected_degree),
        };
        let _ = writeln!(text, "{}", if self.verdict { "OK" } else { "MISMATCH" });
        let _ = writeln!(text, "{}", self.quasi_polynomial);
        let exit = if self.verdict { Exit::Ok } else { Exit::Mismatch };
        (Output { json, header, rows, text }, exit)
    }
}

/// Returns the cached report for `parts`, or computes and stores it.
fn cached_fit(cache: &Cache, parts: &[String], compute: impl FnOnce() -> Result<FitReport, Failure>) -> Result<FitReport, Failure> {
    let key = cache::key(parts);
    if let Some(report) = cache.load(&key).and_then(|s| serde_json::from_str(&s).ok()) {
        return Ok(report);
    }
    let report = compute()?;
    cache.store(&key, &serde_json::to_string(&report).expect("fit reports serialize"));
    Ok(report)
}

fn fit_with(
    counter: impl Fn(u64) -> u64 + Sync,
    degree: usize,
    period: Option<usize>,
    max_period: usize,
    opts: &FitOptions,
) -> Result<QuasiPolynomial, Failure> {
    let mut sampler = Sampler::new(counter);
    match period {
        Some(k) => sampler.fit(k, degree, opts),
        None => sampler.detect_period(degree, max_period, opts),
    }
    .map_err(fit_failure)
}

fn fit(n: usize, max_f: u64, period: Option<usize>, validation: usize, max_period: usize, cache: &Cache) -> Result<(Output, Exit), Failure> {
    if n == 0 || period == Some(0) {
        return Err(Failure::usage("fit needs n ≥ 1 and a positive period"));
    }
    let mut opts = AssembleOptions::for_n(n).fit;
    opts.validation = validation;
    opts.max_sample = Some(max_f);
    let parts = ["fit", &n.to_string(), &max_f.to_string(), &format!("{period:?}"), &validation.to_string(), &max_period.to_string(), &opts.base.to_string()]
        .map(str::to_string);
    let report = cached_fit(cache, &parts, || {
        let counter = SrCounter::new(n).map_err(|e| Failure::usage(e.to_string()))?;
        let q = fit_with(|f| counter.count(f), n, period, max_period, &opts)?;
        let expected = format_rational(&expected_leading_coefficient(n));
        Ok(FitReport::new(format!("N({n},f)"), n, max_f, q, n, Some(expected)))
    })?;
    Ok(report.output())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_geometry(args: &AffineArgs) -> Result<(Cone, WindowPolytope), Failure> {
    let cone = parse_cone(&read(&args.cone)?).map_err(|e| Failure::usage(format!("{}: {e}", args.cone.display())))?;
    let window = parse_window(&read(&args.window)?, &cone, args.allow_raw_window)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.window.display())))?;
    Ok((cone, window))
}

fn affine(args: &AffineArgs, max_period: usize, cache: &Cache) -> Result<(Output, Exit), Failure> {
    if args.n == 0 {
        return Err(Failure::usage("affine needs n ≥ 1"));
    }
    let (cone, window) = load_geometry(args)?;
    let n = args.n;
    let build = || AffineCounter::new(&cone, &window, n, args.piece_cap).map_err(affine_failure);
    if let Some(alpha) = args.alpha {
        if alpha == 0 {
            return Err(Failure::usage("alpha must be positive"));
        }
        let counter = build()?;
        let by_table: Vec<Value> =
            counter.tables().iter().map(|p| json!({"table": p.table.to_string(), "count": p.count(alpha)})).collect();
        let total = counter.count(alpha);
        let mut text = format!("{total}\n");
        for p in counter.tables() {
            let _ = writeln!(text, "  {}: {}", p.table, p.count(alpha));
        }
        let rows = counter
            .tables()
            .iter()
            .map(|p| vec![n.to_string(), alpha.to_string(), p.table.to_string(), p.count(alpha).to_string()])
            .chain(std::iter::once(vec![n.to_string(), alpha.to_string(), "total".into(), total.to_string()]))
            .collect();
        let json = json!({"n": n, "alpha": alpha, "count": total, "by_table": by_table});
        return Ok((Output { json, header: vec!["n", "alpha", "table", "count"], rows, text }, Exit::Ok));
    }
    let opts = FitOptions { validation: args.validation, max_sample: Some(args.max_alpha), ..FitOptions::default() };
    let parts = [
        "affine-fit".to_string(),
        cone.to_string(),
        window.base().to_string(),
        n.to_string(),
        args.max_alpha.to_string(),
        args.validation.to_string(),
        max_period.to_string(),
    ];
    let report = cached_fit(cache, &parts, || {
        let counter = build()?;
        let q = fit_with(|a| counter.count(a), n * cone.dim(), None, max_period, &opts)?;
        Ok(FitReport::new(format!("affine n={n} d={}", cone.dim()), n, args.max_alpha, q, n * cone.dim(), None))
    })?;
    Ok(report.output())
}

fn run_verify(suite: SuiteArg, budget: u64) -> (Output, Exit) {
    let (suite, name) = match suite {
        SuiteArg::Numsemi => (Suite::Numsemi, "numsemi"),
        SuiteArg::Ehrhart => (Suite::Ehrhart, "ehrhart"),
        SuiteArg::Affine => (Suite::Affine, "affine"),
        SuiteArg::All => (Suite::All, "all"),
    };
    let report = verify::run(&verify::checks(suite), Duration::from_secs(budget));
    let status = |s: &Status| match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    };
    let checks: Vec<Value> = report
        .outcomes
        .iter()
        .map(|o| json!({"name": o.name, "status": status(&o.status), "seconds": o.elapsed.as_secs_f64(), "detail": o.detail}))
        .collect();
    let header = vec!["name", "status", "seconds", "detail"];
    let rows = checks.iter().map(|c| header.iter().map(|k| field(&c[*k])).collect()).collect();
    let exit = if report.any_failed() {
        Exit::Mismatch
    } else if !report.all_passed() {
        Exit::Cap
    } else {
        Exit::Ok
    };
    let json = json!({"suite": name, "budget": budget, "checks": checks});
    (Output { json, header, rows, text: report.to_string() }, exit)
}
