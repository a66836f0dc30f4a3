//! End-to-end checks of the library against closed forms and brute-force
//! oracles, grouped into suites with a time budget.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::affine::{
    affine_addition_table, compatibility_violation, decode_affine, enumerate_affine_oracle,
    lex_decompose, AffineCounter, Cone, WindowPolytope, DEFAULT_PIECE_CAP,
};
use crate::ehrhart::{
    assemble_count_with, detect_period, expected_leading_coefficient, reciprocity_report, AssembleOptions, FitOptions,
    LeadingCoefficient, QuasiPolynomial, DEFAULT_MAX_PERIOD,
};
use crate::numsemi::{
    build_sr_polytope, count_semigroups, enumerate_realizable_tables, enumerate_semigroups, AdditionTable, CountMethod,
    SrCounter,
};
use crate::polyhedra::LatticeEnumerator;
use crate::rational::{int, rat};

type CheckResult = Result<String, String>;

/// A named check: `Ok` carries a short summary, `Err` the first failure.
pub struct Check {
    pub name: &'static str,
    pub run: fn() -> CheckResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Numsemi,
    Ehrhart,
    Affine,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "numsemi" => Ok(Suite::Numsemi),
            "ehrhart" => Ok(Suite::Ehrhart),
            "affine" => Ok(Suite::Affine),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

pub fn numsemi_checks() -> Vec<Check> {
    vec![
        Check { name: "n1-closed-form", run: n1_closed_form },
        Check { name: "n2-closed-form", run: n2_closed_form },
        Check { name: "table-census", run: table_census_matches },
        Check { name: "n3-oracle", run: n3_oracle },
        Check { name: "numerical-round-trip", run: numerical_round_trip },
        Check { name: "relative-interior", run: relative_interior },
    ]
}

pub fn ehrhart_checks() -> Vec<Check> {
    vec![
        Check { name: "qp-structure-n1", run: || qp_structure(1) },
        Check { name: "qp-structure-n2", run: || qp_structure(2) },
        Check { name: "qp-structure-n3", run: || qp_structure(3) },
        Check { name: "qp-structure-n4", run: || qp_structure(4) },
        Check { name: "reciprocity", run: reciprocity_all },
    ]
}

pub fn affine_checks() -> Vec<Check> {
    vec![
        Check { name: "affine-counts", run: affine_counts },
        Check { name: "affine-oracle", run: affine_oracle },
        Check { name: "affine-degree", run: affine_degree },
        Check { name: "affine-round-trip", run: affine_round_trip },
        Check { name: "piece-disjointness", run: piece_disjointness },
        Check { name: "lex-partition", run: lex_partition },
        Check { name: "cone-compatibility", run: cone_compatibility },
    ]
}

pub fn checks(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Numsemi => numsemi_checks(),
        Suite::Ehrhart => ehrhart_checks(),
        Suite::Affine => affine_checks(),
        Suite::All => [numsemi_checks(), ehrhart_checks(), affine_checks()].into_iter().flatten().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not started because the budget ran out.
    Skipped,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status == Status::Pass)
    }

    pub fn any_failed(&self) -> bool {
        self.outcomes.iter().any(|o| o.status == Status::Fail)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let tag = match o.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            writeln!(f, "{tag}  {:<22} {:>8.2}s  {}", o.name, o.elapsed.as_secs_f64(), o.detail)?;
        }
        Ok(())
    }
}

/// Runs checks in order; once `budget` is spent the rest are skipped.
pub fn run(checks: &[Check], budget: Duration) -> Report {
    let start = Instant::now();
    let mut report = Report::default();
    for c in checks {
        if start.elapsed() >= budget {
            report.outcomes.push(Outcome {
                name: c.name,
                status: Status::Skipped,
                detail: "budget exhausted".into(),
                elapsed: Duration::ZERO,
            });
            continue;
        }
        let t = Instant::now();
        let (status, detail) = match (c.run)() {
            Ok(d) => (Status::Pass, d),
            Err(d) => (Status::Fail, d),
        };
        report.outcomes.push(Outcome { name: c.name, status, detail, elapsed: t.elapsed() });
    }
    report
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `N(1, f)`: `(f-1)/2` for odd `f`, `f/2 - 1` for even `f`.
pub fn n1_formula(f: u64) -> u64 {
    if f % 2 == 1 {
        (f - 1) / 2
    } else {
        f / 2 - 1
    }
}

/// `N(2, f) = f²/8 + (b f + c)/24` with `(b, c)` depending on `f mod 6`.
pub fn n2_formula() -> QuasiPolynomial {
    let lin = [(-14, 0), (-8, 5), (-14, 16), (-8, -3), (-14, 8), (-8, 13)];
    QuasiPolynomial::new(lin.iter().map(|&(b, c)| vec![rat(c, 24), rat(b, 24), rat(1, 8)]).collect())
}

fn n1_closed_form() -> CheckResult {
    for f in 2..=500 {
        for method in [CountMethod::Polytopes, CountMethod::Oracle] {
            let got = count_semigroups(1, f, method).map_err(err)?;
            ensure(got == n1_formula(f), || format!("N(1,{f}) = {got} by {method:?}, formula {}", n1_formula(f)))?;
        }
    }
    Ok("2 ≤ f ≤ 500, both methods".into())
}

fn n2_closed_form() -> CheckResult {
    let formula = n2_formula();
    let counter = SrCounter::new(2).map_err(err)?;
    for f in 3..=200u64 {
        let expected = formula.evaluate(f as i64);
        for (name, got) in [("polytopes", counter.count(f)), ("oracle", count_semigroups(2, f, CountMethod::Oracle).map_err(err)?)] {
            ensure(int(got as i64) == expected, || format!("N(2,{f}) = {got} by {name}, formula {expected}"))?;
        }
    }
    Ok("3 ≤ f ≤ 200, both methods".into())
}

/// The four realizable tables on three elements, in census order.
pub fn three_element_tables() -> Vec<AdditionTable> {
    [&[][..], &[(1, 1, 2)], &[(1, 1, 3)], &[(1, 1, 2), (1, 2, 3)]]
        .iter()
        .map(|f| AdditionTable::from_finite(3, f).expect("valid indices"))
        .collect()
}

fn table_census_matches() -> CheckResult {
    let sizes: Vec<usize> = (1..=3).map(|n| enumerate_realizable_tables(n).len()).collect();
    ensure(sizes == [1, 2, 4], || format!("realizable table counts {sizes:?}, expected [1, 2, 4]"))?;
    let three = enumerate_realizable_tables(3);
    ensure(three == three_element_tables(), || {
        let got: Vec<String> = three.iter().map(ToString::to_string).collect();
        format!("n = 3 tables {got:?}")
    })?;
    let dims: Vec<isize> = three.iter().map(|t| build_sr_polytope(t).map(|q| q.dimension())).collect::<Result<_, _>>().map_err(err)?;
    ensure(dims == [3, 2, 2, 1], || format!("n = 3 dimensions {dims:?}"))?;
    Ok("1, 2, 4 tables; n = 3 rows match, dimensions 3, 2, 2, 1".into())
}

fn n3_oracle() -> CheckResult {
    let counter = SrCounter::new(3).map_err(err)?;
    for f in 4..=80 {
        let (p, o) = (counter.count(f), count_semigroups(3, f, CountMethod::Oracle).map_err(err)?);
        ensure(p == o, || format!("N(3,{f}): polytopes {p}, oracle {o}"))?;
    }
    let n37 = counter.count(7);
    ensure(n37 == 3, || format!("N(3,7) = {n37}"))?;
    Ok("4 ≤ f ≤ 80 agree; N(3,7) = 3".into())
}

fn numerical_round_trip() -> CheckResult {
    let mut total = 0;
    for n in 1..=4 {
        let counter = SrCounter::new(n).map_err(err)?;
        for f in 1..=60 {
            let mut from_points = Vec::new();
            for piece in counter.pieces() {
                let e = LatticeEnumerator::new(&build_sr_polytope(&piece.table).map_err(err)?).map_err(err)?;
                let points = e.points(f);
                let decoded = piece.semigroups(f).map_err(err)?;
                for (p, s) in points.iter().zip(&decoded) {
                    ensure(s.encode() == p.0, || format!("n={n} f={f}: {p:?} decodes to {s:?}"))?;
                }
                from_points.extend(decoded);
            }
            from_points.sort();
            let mut oracle = enumerate_semigroups(n, f);
            oracle.sort();
            ensure(from_points == oracle, || format!("n={n} f={f}: {} from polytopes, {} by search", from_points.len(), oracle.len()))?;
            total += oracle.len();
        }
    }
    Ok(format!("{total} semigroups, n ≤ 4, f ≤ 60"))
}

fn relative_interior() -> CheckResult {
    let mut checked = 0;
    for n in 1..=4 {
        for t in enumerate_realizable_tables(n) {
            let open = build_sr_polytope(&t).map_err(err)?;
            let relint = open.closure().relative_interior();
            let (a, b) = (LatticeEnumerator::new(&open).map_err(err)?, LatticeEnumerator::new(&relint).map_err(err)?);
            for m in 1..=24 {
                ensure(a.points(m) == b.points(m), || format!("table {t} at m = {m}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (table, dilation) pairs, n ≤ 4, m ≤ 24"))
}

/// The direct fit of `N(n, ·)` has degree `n`, leading coefficient
/// `1/(2^n n!)` on every residue, matches the reciprocity assembly, and
/// reproduces every count from the sampling base to the largest sample.
///
/// `n = 4` has period 60; with samples capped at 400 that leaves room for one
/// held-out sample per residue, and the full-range comparison supplies the rest.
pub fn qp_structure(n: usize) -> CheckResult {
    let counter = SrCounter::new(n).map_err(err)?;
    let mut opts = AssembleOptions::for_n(n);
    let limit = if n >= 4 {
        opts.fit.validation = 1;
        opts.fit.max_sample = Some(400);
        400
    } else {
        200
    };
    let a = assemble_count_with(&counter, &opts).map_err(err)?;
    let q = &a.direct;
    ensure(q.degree() == Some(n), || format!("degree {:?}", q.degree()))?;
    let expected = expected_leading_coefficient(n);
    ensure(q.leading_coefficient() == LeadingCoefficient::Constant(expected.clone()), || {
        format!("leading coefficient {}", q.leading_coefficient())
    })?;
    let want_period = match n {
        1 => Some(2),
        2 => Some(6),
        _ => None,
    };
    if let Some(k) = want_period {
        ensure(q.period() == k, || format!("period {}, expected {k}", q.period()))?;
    }
    ensure(a.agrees(), || "direct fit differs from the reciprocity assembly".into())?;
    for f in opts.fit.base..=limit {
        let c = counter.count(f);
        ensure(q.evaluate(f as i64) == int(c as i64), || format!("QP({f}) = {}, N({n},{f}) = {c}", q.evaluate(f as i64)))?;
    }
    let note = if a.small_f_mismatches.is_empty() {
        String::new()
    } else {
        format!("; differs below base at f = {:?}", a.small_f_mismatches)
    };
    Ok(format!("period {}, degree {n}, leading {expected}, checked f ≤ {limit}{note}", q.period()))
}

fn reciprocity_all() -> CheckResult {
    let mut tables = 0;
    for n in 1..=3 {
        for t in enumerate_realizable_tables(n) {
            let open = build_sr_polytope(&t).map_err(err)?;
            let r = reciprocity_report(&open.closure(), &open, 30, DEFAULT_MAX_PERIOD).map_err(err)?;
            ensure(r.holds(), || format!("table {t} (n = {n}) fails at m = {:?}", r.failures))?;
            tables += 1;
        }
    }
    Ok(format!("{tables} tables, n ≤ 3, dmax = 30"))
}

pub fn quadrant_simplex() -> (Cone, WindowPolytope) {
    let q = Cone::orthant(2);
    let w = WindowPolytope::halfspace(&q, &[int(1), int(1)]).expect("unit simplex is a valid window");
    (q, w)
}

fn affine_counts() -> CheckResult {
    let (q, w) = quadrant_simplex();
    let c = AffineCounter::new(&q, &w, 1, DEFAULT_PIECE_CAP).map_err(err)?;
    let got: Vec<u64> = (1..=3).map(|a| c.count(a)).collect();
    ensure(got == [2, 3, 7], || format!("counts at α = 1, 2, 3: {got:?}"))?;
    Ok("α = 1, 2, 3 give 2, 3, 7".into())
}

fn affine_oracle() -> CheckResult {
    let (q, w) = quadrant_simplex();
    for n in 1..=2 {
        let c = AffineCounter::new(&q, &w, n, DEFAULT_PIECE_CAP).map_err(err)?;
        for alpha in 1..=10 {
            let (u, o) = (c.count(alpha), enumerate_affine_oracle(&q, &w, n, alpha).map_err(err)?.len() as u64);
            ensure(u == o, || format!("n={n} α={alpha}: union {u}, oracle {o}"))?;
        }
    }
    Ok("n ≤ 2, α ≤ 10".into())
}

fn affine_degree() -> CheckResult {
    let (q, w) = quadrant_simplex();
    let mut summary = Vec::new();
    for n in 1..=2 {
        let c = AffineCounter::new(&q, &w, n, DEFAULT_PIECE_CAP).map_err(err)?;
        let qp = detect_period(|a| c.count(a), 2 * n, DEFAULT_MAX_PERIOD, &FitOptions::default()).map_err(err)?;
        ensure(qp.degree() == Some(2 * n), || format!("n={n}: degree {:?}", qp.degree()))?;
        for alpha in 1..=40 {
            let v = c.count(alpha);
            ensure(qp.evaluate(alpha as i64) == int(v as i64), || format!("n={n}: QP({alpha}) ≠ {v}"))?;
        }
        summary.push(format!("n={n}: degree {}, period {}", 2 * n, qp.period()));
    }
    Ok(summary.join("; "))
}

fn affine_round_trip() -> CheckResult {
    let (q, w) = quadrant_simplex();
    let mut total = 0;
    for n in 1..=2 {
        let c = AffineCounter::new(&q, &w, n, DEFAULT_PIECE_CAP).map_err(err)?;
        for alpha in 1..=6 {
            let mut decoded = BTreeSet::new();
            for piece in c.tables() {
                for p in piece.points(alpha) {
                    let s = decode_affine(&p, &q, &w, alpha).map_err(err)?;
                    ensure(s.encode() == p, || format!("{p:?} re-encodes as {:?}", s.encode()))?;
                    let t = affine_addition_table(&s, &w).map_err(err)?;
                    ensure(t == piece.table, || format!("{p:?} has table {t}, piece table {}", piece.table))?;
                    decoded.insert(s);
                }
            }
            let oracle: BTreeSet<_> = enumerate_affine_oracle(&q, &w, n, alpha).map_err(err)?.into_iter().collect();
            ensure(decoded == oracle, || format!("n={n} α={alpha}: decoded set differs from oracle"))?;
            total += oracle.len();
        }
    }
    Ok(format!("{total} semigroups, n ≤ 2, α ≤ 6"))
}

fn piece_disjointness() -> CheckResult {
    let (q, w) = quadrant_simplex();
    let square = WindowPolytope::shifted_cone(&q, &q, &[int(1), int(1)]).map_err(err)?;
    let mut points = 0;
    for window in [&w, &square] {
        for n in 1..=2 {
            let c = AffineCounter::new(&q, window, n, DEFAULT_PIECE_CAP).map_err(err)?;
            for alpha in 1..=6 {
                let mut seen = BTreeSet::new();
                for piece in c.tables() {
                    for pts in piece.points_by_piece(alpha) {
                        for p in pts {
                            ensure(seen.insert(p.clone()), || format!("{p:?} lies in two pieces (n={n}, α={alpha})"))?;
                        }
                    }
                }
                points += seen.len();
            }
        }
    }
    Ok(format!("{points} lattice points, each in one piece"))
}

fn lex_partition() -> CheckResult {
    let grid: Vec<Vec<i64>> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| vec![a, b])).collect();
    let regions = lex_decompose(3, 2);
    ensure(regions.len() == 4, || format!("{} regions for n = 3, d = 2", regions.len()))?;
    let mut tested = 0;
    for u in &grid {
        for v in &grid {
            for x in &grid {
                let p = [u.clone(), v.clone(), x.clone()].concat();
                let hits = regions.iter().filter(|r| r.contains_lattice_point(&p)).count();
                let expected = (u < v && v < x) as usize;
                ensure(hits == expected, || format!("{u:?} {v:?} {x:?} lies in {hits} regions"))?;
                tested += 1;
            }
        }
    }
    Ok(format!("{tested} triples on a 5×5 grid"))
}

fn cone_compatibility() -> CheckResult {
    let (q, simplex) = quadrant_simplex();
    let square = WindowPolytope::shifted_cone(&q, &q, &[int(1), int(1)]).map_err(err)?;
    let wedge = Cone::new(vec![vec![int(1), int(0)], vec![int(-1), int(1)]], vec![vec![0, 1], vec![1, 1]]).map_err(err)?;
    let quad = WindowPolytope::shifted_cone(&wedge, &wedge, &[int(1), int(2)]).map_err(err)?;
    let tri = WindowPolytope::halfspace(&wedge, &[int(0), int(1)]).map_err(err)?;
    for (cone, window) in [(&q, &simplex), (&q, &square), (&wedge, &quad), (&wedge, &tri)] {
        for alpha in 1..=4 {
            if let Some((x, g)) = compatibility_violation(cone, window, alpha) {
                return Err(format!("{x:?} + {g:?} re-enters the window at α = {alpha}"));
            }
        }
    }
    Ok("4 windows, α ≤ 4".into())
}

