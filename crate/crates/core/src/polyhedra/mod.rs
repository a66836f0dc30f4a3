//! Mixed open/closed rational polyhedra in H-representation.
//!
//! A [`MixedPolyhedron`] is a finite conjunction of linear constraints, each of
//! which may be an equality, a closed inequality or a strict inequality. All
//! computations are exact: feasibility and projection go through
//! Fourier–Motzkin elimination on integer rows, and lattice points are
//! enumerated with per-coordinate interval bounds read off the projections.

mod constraint;
mod fm;
mod lattice;
mod text;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use constraint::{Comparison, LinearConstraint, Relation};
pub(crate) use constraint::Normalized;
pub use lattice::{count_lattice_points, enumerate_lattice_points, LatticeEnumerator, LatticePoint};

use crate::rational::{rank, RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("constraint has all-zero coefficients")]
    ZeroCoefficients,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dilation factor must be positive")]
    NonPositiveDilation,
    #[error("coordinate {coord} out of range for dimension {dim}")]
    CoordinateOutOfRange { coord: usize, dim: usize },
    #[error("polyhedron is unbounded along coordinate {coord}")]
    UnboundedPolyhedron { coord: usize },
    #[error("integer overflow while preparing lattice enumeration")]
    Overflow,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A finite intersection of equalities, closed and strict half-spaces.
///
/// Constraints whose coefficients are all zero never get stored: a true one is
/// dropped and a false one marks the polyhedron as empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedPolyhedron {
    dim: usize,
    constraints: Vec<LinearConstraint>,
    empty: bool,
}

impl MixedPolyhedron {
    /// The whole space of the given dimension.
    pub fn new(dim: usize) -> Self {
        MixedPolyhedron { dim, constraints: Vec::new(), empty: false }
    }

    pub fn from_constraints(
        dim: usize,
        constraints: impl IntoIterator<Item = LinearConstraint>,
    ) -> Result<Self, PolyError> {
        let mut q = Self::new(dim);
        for c in constraints {
            q.push(c)?;
        }
        Ok(q)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    /// True when a constant-false constraint was recorded.
    pub fn is_trivially_empty(&self) -> bool {
        self.empty
    }

    pub fn push(&mut self, c: LinearConstraint) -> Result<(), PolyError> {
        if c.dim() != self.dim {
            return Err(PolyError::DimensionMismatch { expected: self.dim, found: c.dim() });
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Adds a rational row, evaluating it immediately if all coefficients vanish.
    pub fn add(&mut self, coefficients: &[Rational], cmp: Comparison, rhs: &Rational) -> Result<(), PolyError> {
        if coefficients.len() != self.dim {
            return Err(PolyError::DimensionMismatch { expected: self.dim, found: coefficients.len() });
        }
        match LinearConstraint::new(coefficients, cmp, rhs) {
            Ok(c) => self.constraints.push(c),
            Err(PolyError::ZeroCoefficients) => {
                let zero = Rational::zero();
                let (rel, lhs, rhs) = match cmp {
                    Comparison::Ge => (Relation::Le, rhs.clone(), zero),
                    Comparison::Gt => (Relation::Lt, rhs.clone(), zero),
                    Comparison::Eq => (Relation::Eq, zero, rhs.clone()),
                    Comparison::Le => (Relation::Le, zero, rhs.clone()),
                    Comparison::Lt => (Relation::Lt, zero, rhs.clone()),
                };
                if !rel.holds(lhs.cmp(&rhs)) {
                    self.empty = true;
                }
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }

    /// Integer shorthand for [`MixedPolyhedron::add`].
    pub fn add_int(&mut self, coefficients: &[i64], cmp: Comparison, rhs: i64) -> Result<(), PolyError> {
        let coeffs: Vec<BigInt> = coefficients.iter().map(|&c| BigInt::from(c)).collect();
        self.add_row(coeffs, cmp, BigInt::from(rhs))
    }

    pub(crate) fn add_row(&mut self, coeffs: Vec<BigInt>, cmp: Comparison, rhs: BigInt) -> Result<(), PolyError> {
        if coeffs.len() != self.dim {
            return Err(PolyError::DimensionMismatch { expected: self.dim, found: coeffs.len() });
        }
        match LinearConstraint::normalize(coeffs, cmp, rhs) {
            Normalized::Constraint(c) => self.constraints.push(c),
            Normalized::Trivial(true) => {}
            Normalized::Trivial(false) => self.empty = true,
        }
        Ok(())
    }

    /// Intersection with another polyhedron of the same dimension.
    pub fn intersect(&self, other: &MixedPolyhedron) -> Result<MixedPolyhedron, PolyError> {
        if other.dim != self.dim {
            return Err(PolyError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut q = self.clone();
        q.constraints.extend(other.constraints.iter().cloned());
        q.empty |= other.empty;
        Ok(q)
    }

    /// Sorted, deduplicated copy; two polyhedra with equal canonical forms have
    /// identical constraint sets.
    pub fn canonical(&self) -> MixedPolyhedron {
        let mut constraints = self.constraints.clone();
        constraints.sort();
        constraints.dedup();
        MixedPolyhedron { dim: self.dim, constraints, empty: self.empty }
    }

    /// Drops duplicates and, among inequalities with identical left-hand sides,
    /// keeps only the tightest one.
    pub(crate) fn simplify(&mut self) {
        if self.empty {
            self.constraints.clear();
            return;
        }
        let mut best: BTreeMap<Vec<BigInt>, (Rational, Relation)> = BTreeMap::new();
        let mut equalities: Vec<LinearConstraint> = Vec::new();
        for c in self.constraints.drain(..) {
            if c.relation() == Relation::Eq {
                equalities.push(c);
                continue;
            }
            // key on the primitive direction so that 2x <= 5 and x < 3 compare
            let g = c.coefficients().iter().fold(BigInt::zero(), |g, a| g.gcd(a));
            let key: Vec<BigInt> = c.coefficients().iter().map(|a| a / &g).collect();
            let candidate = (Rational::new(c.rhs().clone(), g), c.relation());
            best.entry(key)
                .and_modify(|cur| {
                    if candidate.0 < cur.0 || (candidate.0 == cur.0 && candidate.1 == Relation::Lt) {
                        *cur = candidate.clone();
                    }
                })
                .or_insert(candidate);
        }
        equalities.sort();
        equalities.dedup();
        self.constraints = equalities;
        for (key, (bound, rel)) in best {
            let coeffs = key.iter().map(|a| a * bound.denom()).collect();
            if let Normalized::Constraint(c) = LinearConstraint::normalize(coeffs, rel.into(), bound.numer().clone()) {
                self.constraints.push(c);
            }
        }
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        !self.empty && point.len() == self.dim && self.constraints.iter().all(|c| c.satisfied_by(point))
    }

    pub fn contains_lattice_point(&self, point: &[i64]) -> bool {
        !self.empty && point.len() == self.dim && self.constraints.iter().all(|c| c.satisfied_by_int(point))
    }

    /// Replaces every strict inequality with its non-strict counterpart.
    pub fn closure(&self) -> MixedPolyhedron {
        let constraints = self
            .constraints
            .iter()
            .map(|c| if c.relation() == Relation::Lt { c.with_relation(Relation::Le) } else { c.clone() })
            .collect();
        MixedPolyhedron { dim: self.dim, constraints, empty: self.empty }
    }

    /// Scales the polyhedron by `alpha > 0`; homogeneous constraints are unchanged.
    pub fn dilate(&self, alpha: &Rational) -> Result<MixedPolyhedron, PolyError> {
        if !alpha.is_positive() {
            return Err(PolyError::NonPositiveDilation);
        }
        let constraints = self.constraints.iter().map(|c| c.scaled(alpha.numer(), alpha.denom())).collect();
        Ok(MixedPolyhedron { dim: self.dim, constraints, empty: self.empty })
    }

    pub fn dilate_int(&self, m: u64) -> Result<MixedPolyhedron, PolyError> {
        self.dilate(&Rational::from_integer(BigInt::from(m)))
    }

    /// Exact Fourier–Motzkin elimination of one coordinate. The result lives in
    /// dimension `dim - 1` with the remaining coordinates in their original order.
    pub fn fm_project(&self, coord: usize) -> Result<MixedPolyhedron, PolyError> {
        if coord >= self.dim {
            return Err(PolyError::CoordinateOutOfRange { coord, dim: self.dim });
        }
        Ok(fm::eliminate(self, coord))
    }

    /// Decides whether some real point satisfies every constraint.
    ///
    /// Strict rows are relaxed to `a·x + t <= b` with a shared slack `t <= 1`;
    /// the polyhedron is nonempty iff the maximal slack is positive.
    pub fn is_feasible(&self) -> bool {
        if self.empty {
            return false;
        }
        if self.constraints.is_empty() {
            return true;
        }
        let n = self.dim;
        let mut lifted = MixedPolyhedron::new(n + 1);
        for c in &self.constraints {
            let mut coeffs = c.coefficients().to_vec();
            let (slack, rel) = match c.relation() {
                Relation::Lt => (BigInt::from(1), Comparison::Le),
                r => (BigInt::zero(), r.into()),
            };
            coeffs.push(slack);
            lifted.add_row(coeffs, rel, c.rhs().clone()).expect("dimension checked");
        }
        let mut bound = vec![BigInt::zero(); n + 1];
        bound[n] = BigInt::from(1);
        lifted.add_row(bound, Comparison::Le, BigInt::from(1)).expect("dimension checked");

        let mut reduced = lifted;
        for _ in 0..n {
            reduced = fm::eliminate(&reduced, 0);
            if reduced.empty {
                return false;
            }
        }
        max_slack_positive(&reduced)
    }

    /// Per constraint: whether it holds with equality on the whole polyhedron.
    /// Closed inequalities qualify when they cannot hold strictly anywhere.
    fn implicit_equalities(&self) -> Vec<bool> {
        self.constraints
            .iter()
            .enumerate()
            .map(|(i, c)| match c.relation() {
                Relation::Eq => true,
                Relation::Lt => false,
                Relation::Le => {
                    let mut tightened = self.clone();
                    tightened.constraints[i] = c.with_relation(Relation::Lt);
                    !tightened.is_feasible()
                }
            })
            .collect()
    }

    /// Dimension of the affine hull, or -1 when empty.
    ///
    /// Implicit equalities count toward the rank together with the explicit
    /// ones.
    pub fn dimension(&self) -> isize {
        if !self.is_feasible() {
            return -1;
        }
        let rows: Vec<RatVector> = self
            .constraints
            .iter()
            .zip(self.implicit_equalities())
            .filter(|(_, implicit)| *implicit)
            .map(|(c, _)| c.coefficients().iter().map(|v| Rational::from_integer(v.clone())).collect())
            .collect();
        self.dim as isize - rank(&rows) as isize
    }

    /// The relative interior: implicit equalities become equalities and every
    /// other inequality becomes strict. An empty polyhedron is returned as is.
    pub fn relative_interior(&self) -> MixedPolyhedron {
        if !self.is_feasible() {
            return self.clone();
        }
        let constraints = self
            .constraints
            .iter()
            .zip(self.implicit_equalities())
            .map(|(c, implicit)| match (implicit, c.relation()) {
                (false, _) => c.with_relation(Relation::Lt),
                (true, Relation::Eq) => c.clone(),
                (true, _) => match LinearConstraint::normalize(c.coefficients().to_vec(), Comparison::Eq, c.rhs().clone()) {
                    Normalized::Constraint(eq) => eq,
                    Normalized::Trivial(_) => unreachable!("stored rows have a nonzero coefficient"),
                },
            })
            .collect();
        MixedPolyhedron { dim: self.dim, constraints, empty: false }
    }

    /// Whether every coordinate is bounded (an empty polyhedron is bounded).
    pub fn is_bounded(&self) -> bool {
        !matches!(LatticeEnumerator::new(self), Err(PolyError::UnboundedPolyhedron { .. }))
    }
}

/// Given a system in the single variable `t`, checks whether it admits `t > 0`.
fn max_slack_positive(q: &MixedPolyhedron) -> bool {
    debug_assert_eq!(q.dim, 1);
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut fixed: Option<Rational> = None;
    for c in &q.constraints {
        let a = &c.coefficients()[0];
        let v = Rational::new(c.rhs().clone(), a.clone());
        match c.relation() {
            Relation::Eq => {
                if fixed.as_ref().is_some_and(|f| *f != v) {
                    return false;
                }
                fixed = Some(v);
            }
            _ if a.is_positive() => {
                if hi.as_ref().is_none_or(|h| v < *h) {
                    hi = Some(v);
                }
            }
            _ => {
                if lo.as_ref().is_none_or(|l| v > *l) {
                    lo = Some(v);
                }
            }
        }
    }
    let within = |t: &Rational| lo.as_ref().is_none_or(|l| l <= t) && hi.as_ref().is_none_or(|h| t <= h);
    match (fixed, hi.clone()) {
        (Some(t), _) => t.is_positive() && within(&t),
        (None, Some(h)) => h.is_positive() && within(&h),
        // the slack is always capped by t <= 1
        (None, None) => unreachable!("slack upper bound missing"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use Comparison::*;

    fn poly(dim: usize, rows: &[(&[i64], Comparison, i64)]) -> MixedPolyhedron {
        let mut q = MixedPolyhedron::new(dim);
        for (c, cmp, r) in rows {
            q.add_int(c, *cmp, *r).unwrap();
        }
        q
    }

    /// 0 < x1 < x2 < 1, 2x1 = x2, x1 + x2 > 1
    fn p2_segment() -> MixedPolyhedron {
        poly(2, &[(&[1, 0], Gt, 0), (&[1, -1], Lt, 0), (&[0, 1], Lt, 1), (&[2, -1], Eq, 0), (&[1, 1], Gt, 1)])
    }

    /// 0 < x1 < x2 < 1, 2x1 > 1 (plus the implied sums)
    fn p1_triangle() -> MixedPolyhedron {
        poly(
            2,
            &[(&[1, 0], Gt, 0), (&[1, -1], Lt, 0), (&[0, 1], Lt, 1), (&[2, 0], Gt, 1), (&[1, 1], Gt, 1), (&[0, 2], Gt, 1)],
        )
    }

    #[test]
    fn feasibility_examples() {
        assert!(p2_segment().is_feasible());
        assert!(!poly(1, &[(&[1], Lt, 0), (&[1], Gt, 0)]).is_feasible());
        let chain_table = poly(
            3,
            &[
                (&[1, 0, 0], Gt, 0),
                (&[1, -1, 0], Lt, 0),
                (&[0, 1, -1], Lt, 0),
                (&[0, 0, 1], Lt, 1),
                (&[2, 0, -1], Eq, 0),
                (&[1, 1, 0], Gt, 1),
            ],
        );
        assert!(chain_table.is_feasible());
        assert!(MixedPolyhedron::new(3).is_feasible());
        // closed pair touching at a point is feasible, strict pair is not
        assert!(poly(1, &[(&[1], Le, 0), (&[1], Ge, 0)]).is_feasible());
        assert!(!poly(1, &[(&[1], Le, 0), (&[1], Gt, 0)]).is_feasible());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(p1_triangle().dimension(), 2);
        assert_eq!(p2_segment().dimension(), 1);
        assert_eq!(poly(1, &[(&[1], Eq, 0), (&[1], Eq, 1)]).dimension(), -1);
        // implicit equality from a pair of closed inequalities
        assert_eq!(poly(2, &[(&[1, 0], Le, 0), (&[1, 0], Ge, 0), (&[0, 1], Le, 3)]).dimension(), 1);
    }

    #[test]
    fn relative_interior_of_closures() {
        assert_eq!(p2_segment().closure().relative_interior().canonical(), p2_segment().canonical());
        assert_eq!(p1_triangle().closure().relative_interior().canonical(), p1_triangle().canonical());
        // x <= 0 and x >= 0 pin x = 0; y stays open
        let q = poly(2, &[(&[1, 0], Le, 0), (&[-1, 0], Le, 0), (&[0, 1], Le, 3), (&[0, 1], Ge, 0)]);
        let expected = poly(2, &[(&[1, 0], Eq, 0), (&[1, 0], Eq, 0), (&[0, 1], Lt, 3), (&[0, 1], Gt, 0)]);
        assert_eq!(q.relative_interior(), expected);
    }

    #[test]
    fn dilation_examples() {
        let q = poly(1, &[(&[1], Gt, 0), (&[1], Lt, 1), (&[2], Gt, 1)]);
        let expected = poly(1, &[(&[1], Gt, 0), (&[1], Lt, 7), (&[2], Gt, 7)]);
        assert_eq!(q.dilate(&int(7)).unwrap().canonical(), expected.canonical());
        assert_eq!(q.dilate(&int(1)).unwrap(), q);
        assert_eq!(q.dilate(&int(0)), Err(PolyError::NonPositiveDilation));
        assert_eq!(q.dilate(&int(-2)), Err(PolyError::NonPositiveDilation));

        // the closed P2 segment scaled by 6 has endpoints (2,4) and (3,6)
        let seg = p2_segment().closure().dilate(&int(6)).unwrap();
        assert!(seg.contains(&[int(2), int(4)]));
        assert!(seg.contains(&[int(3), int(6)]));
        assert!(!seg.contains(&[rat(19, 10), rat(38, 10)]));
        assert!(!seg.contains(&[rat(31, 10), rat(62, 10)]));
    }

    #[test]
    fn closure_examples() {
        let q = poly(1, &[(&[2], Gt, 1), (&[1], Lt, 1)]);
        let c = q.closure();
        assert_eq!(c.canonical(), poly(1, &[(&[2], Ge, 1), (&[1], Le, 1)]).canonical());
        assert_eq!(c.closure(), c);

        let tri = p1_triangle().closure();
        for v in [[rat(1, 2), rat(1, 2)], [rat(1, 2), int(1)], [int(1), int(1)]] {
            assert!(tri.contains(&v));
            assert!(!p1_triangle().contains(&v));
        }
        assert!(!tri.contains(&[rat(1, 2) - rat(1, 100), rat(1, 2)]));
    }

    #[test]
    fn trivial_rows_are_evaluated() {
        let mut q = MixedPolyhedron::new(2);
        q.add_int(&[0, 0], Le, 3).unwrap();
        assert!(q.constraints().is_empty() && q.is_feasible());
        q.add_int(&[0, 0], Gt, 0).unwrap();
        assert!(q.is_trivially_empty());
        assert!(!q.is_feasible());
        assert_eq!(q.dimension(), -1);
        assert_eq!(
            q.add_int(&[1], Le, 0),
            Err(PolyError::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn simplify_keeps_tightest_parallel_bound() {
        let mut q = poly(1, &[(&[1], Le, 3), (&[1], Lt, 3), (&[2], Le, 5), (&[1], Eq, 1), (&[1], Eq, 1)]);
        q.simplify();
        assert_eq!(q.constraints().len(), 2);
        assert!(q.contains(&[int(1)]));
        assert!(!q.contains(&[rat(5, 2)]));
    }
}
