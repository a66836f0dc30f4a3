//! Quasi-polynomials, exact fitting of counting functions, and Ehrhart
//! reciprocity checks.
//!
//! Every fit is exact rational interpolation per residue class, validated on
//! held-out samples. Periods are found by trying `K = 1, 2, …` in turn.

mod fit;
mod poly;
mod qp;

use num_traits::One;

pub use fit::{detect_period, fit, FitError, FitOptions, Sampler};
pub use qp::{LeadingCoefficient, QuasiPolynomial};

use crate::numsemi::{NumSemiError, SrCounter};
use crate::polyhedra::{LatticeEnumerator, MixedPolyhedron, PolyError};
use crate::rational::{int, Rational};

/// Default bound for period searches.
pub const DEFAULT_MAX_PERIOD: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EhrhartError {
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    NumSemi(#[from] NumSemiError),
    #[error("polyhedron is empty")]
    Empty,
}

/// `1 / (2^n n!)`.
pub fn expected_leading_coefficient(n: usize) -> Rational {
    let mut den = Rational::one();
    for i in 1..=n {
        den *= int(2 * i as i64);
    }
    den.recip()
}

/// Outcome of comparing `L_closed(-m)` with `(-1)^dim L_open(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReciprocityReport {
    pub dimension: usize,
    pub closed: QuasiPolynomial,
    /// Values of `m` where the identity fails.
    pub failures: Vec<u64>,
}

impl ReciprocityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Fits the Ehrhart quasi-polynomial of `closed` and checks it against the
/// open counts at `-1, …, -dmax`.
pub fn reciprocity_report(
    closed: &MixedPolyhedron,
    open: &MixedPolyhedron,
    dmax: u64,
    max_period: usize,
) -> Result<ReciprocityReport, EhrhartError> {
    let dim = closed.dimension();
    if dim < 0 {
        return Err(EhrhartError::Empty);
    }
    let dim = dim as usize;
    let ce = LatticeEnumerator::new(closed)?;
    let oe = LatticeEnumerator::new(open)?;
    let qp = detect_period(|m| ce.count(m), dim, max_period, &FitOptions::default())?;
    let sign = if dim.is_multiple_of(2) { 1 } else { -1 };
    let failures = (1..=dmax).filter(|&m| qp.evaluate(-(m as i64)) != int(sign * oe.count(m) as i64)).collect();
    Ok(ReciprocityReport { dimension: dim, closed: qp, failures })
}

pub fn reciprocity_check(closed: &MixedPolyhedron, open: &MixedPolyhedron, dmax: u64) -> Result<bool, EhrhartError> {
    Ok(reciprocity_report(closed, open, dmax, DEFAULT_MAX_PERIOD)?.holds())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssembleOptions {
    pub max_period: usize,
    /// Options for the direct fit of `N(n, ·)`; the closed per-table fits
    /// always sample from 1 with two held-out points.
    pub fit: FitOptions,
}

impl AssembleOptions {
    /// Base `2n + 2`, two held-out samples, periods up to [`DEFAULT_MAX_PERIOD`].
    pub fn for_n(n: usize) -> Self {
        AssembleOptions { max_period: DEFAULT_MAX_PERIOD, fit: FitOptions::with_base(2 * n as u64 + 2) }
    }
}

/// `N(n, ·)` fitted two ways.
#[derive(Debug, Clone)]
pub struct AssembledCount {
    pub n: usize,
    /// Fit of the open-polytope counts summed over realizable tables.
    pub direct: QuasiPolynomial,
    /// `Σ_τ (-1)^{d_τ} q_τ(-f)` with `q_τ` fitted from closed counts.
    pub via_reciprocity: QuasiPolynomial,
    /// Arguments below the sampling base where `direct` misses the count.
    pub small_f_mismatches: Vec<u64>,
}

impl AssembledCount {
    pub fn agrees(&self) -> bool {
        self.direct.same_function(&self.via_reciprocity)
    }
}

pub fn assemble_count(n: usize) -> Result<AssembledCount, EhrhartError> {
    assemble_count_with(&SrCounter::new(n)?, &AssembleOptions::for_n(n))
}

pub fn assemble_count_with(counter: &SrCounter, opts: &AssembleOptions) -> Result<AssembledCount, EhrhartError> {
    let n = counter.n();
    let direct = detect_period(|f| counter.count(f), n, opts.max_period, &opts.fit)?;

    let mut via = QuasiPolynomial::zero();
    for piece in counter.pieces() {
        let closed = crate::numsemi::build_sr_polytope(&piece.table)?.closure();
        let e = LatticeEnumerator::new(&closed)?;
        let d = piece.dimension.max(0) as usize;
        let q = detect_period(|m| e.count(m), d, opts.max_period, &FitOptions::default())?;
        let sign = if d.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        via = via.add(&q.reflect().scale(&sign));
    }

    let small_f_mismatches = (1..opts.fit.base)
        .filter(|&f| direct.evaluate(f as i64) != int(counter.count(f) as i64))
        .collect();
    Ok(AssembledCount { n, direct: direct.reduced(), via_reciprocity: via.reduced(), small_f_mismatches })
}
