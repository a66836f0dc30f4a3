use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::PolyError;
use crate::rational::{common_denominator, Rational};

/// Relation stored on a normalized constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        self == Relation::Lt
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Lt => "<",
        }
    }

    /// Whether `lhs REL rhs` holds for an ordering of `lhs` against `rhs`.
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Eq => ord == Ordering::Equal,
            Relation::Le => ord != Ordering::Greater,
            Relation::Lt => ord == Ordering::Less,
        }
    }
}

/// Any comparison accepted on input; `Ge`/`Gt` are flipped to `Le`/`Lt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
}

impl Comparison {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "=" | "==" => Comparison::Eq,
            "<=" => Comparison::Le,
            "<" => Comparison::Lt,
            ">=" => Comparison::Ge,
            ">" => Comparison::Gt,
            _ => return None,
        })
    }

    fn normalize(self) -> (Relation, bool) {
        match self {
            Comparison::Eq => (Relation::Eq, false),
            Comparison::Le => (Relation::Le, false),
            Comparison::Lt => (Relation::Lt, false),
            Comparison::Ge => (Relation::Le, true),
            Comparison::Gt => (Relation::Lt, true),
        }
    }
}

impl From<Relation> for Comparison {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Eq => Comparison::Eq,
            Relation::Le => Comparison::Le,
            Relation::Lt => Comparison::Lt,
        }
    }
}

/// `coefficients · x REL rhs`, stored with coprime integer entries.
///
/// Equalities are additionally scaled so that the first nonzero coefficient is
/// positive, which makes the stored form canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraint {
    coefficients: Vec<BigInt>,
    relation: Relation,
    rhs: BigInt,
}

/// Outcome of normalizing a row that may have all-zero coefficients.
pub(crate) enum Normalized {
    Constraint(LinearConstraint),
    /// `0 REL rhs` evaluated to a constant.
    Trivial(bool),
}

impl LinearConstraint {
    pub fn new(coefficients: &[Rational], cmp: Comparison, rhs: &Rational) -> Result<Self, PolyError> {
        let den = common_denominator(coefficients.iter().chain(std::iter::once(rhs)));
        let scale = |r: &Rational| -> BigInt { (r * Rational::from_integer(den.clone())).to_integer() };
        let coeffs: Vec<BigInt> = coefficients.iter().map(scale).collect();
        match Self::normalize(coeffs, cmp, scale(rhs)) {
            Normalized::Constraint(c) => Ok(c),
            Normalized::Trivial(_) => Err(PolyError::ZeroCoefficients),
        }
    }

    /// Integer shorthand, mostly for tests and fixed constructions.
    pub fn int(coefficients: &[i64], cmp: Comparison, rhs: i64) -> Result<Self, PolyError> {
        let coeffs = coefficients.iter().map(|&c| BigInt::from(c)).collect();
        match Self::normalize(coeffs, cmp, BigInt::from(rhs)) {
            Normalized::Constraint(c) => Ok(c),
            Normalized::Trivial(_) => Err(PolyError::ZeroCoefficients),
        }
    }

    pub(crate) fn normalize(mut coeffs: Vec<BigInt>, cmp: Comparison, mut rhs: BigInt) -> Normalized {
        let (relation, flip) = cmp.normalize();
        if flip {
            coeffs.iter_mut().for_each(|c| *c = -&*c);
            rhs = -rhs;
        }
        if coeffs.iter().all(Zero::is_zero) {
            let zero = BigInt::zero();
            return Normalized::Trivial(relation.holds(zero.cmp(&rhs)));
        }
        let g = coeffs.iter().chain(std::iter::once(&rhs)).fold(BigInt::zero(), |g, c| g.gcd(c));
        if !g.is_zero() && g != BigInt::from(1) {
            coeffs.iter_mut().for_each(|c| *c = &*c / &g);
            rhs /= &g;
        }
        if relation == Relation::Eq && coeffs.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative) {
            coeffs.iter_mut().for_each(|c| *c = -&*c);
            rhs = -rhs;
        }
        Normalized::Constraint(LinearConstraint { coefficients: coeffs, relation, rhs })
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn rhs(&self) -> &BigInt {
        &self.rhs
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.is_zero()
    }

    pub(crate) fn with_relation(&self, relation: Relation) -> LinearConstraint {
        LinearConstraint { coefficients: self.coefficients.clone(), relation, rhs: self.rhs.clone() }
    }

    /// Multiplies the right-hand side by `num/den` (with `num, den > 0`).
    pub(crate) fn scaled(&self, num: &BigInt, den: &BigInt) -> LinearConstraint {
        let coeffs = self.coefficients.iter().map(|c| c * den).collect();
        match Self::normalize(coeffs, self.relation.into(), &self.rhs * num) {
            Normalized::Constraint(c) => c,
            Normalized::Trivial(_) => unreachable!("scaling keeps a nonzero coefficient"),
        }
    }

    pub fn lhs_at(&self, point: &[Rational]) -> Rational {
        self.coefficients
            .iter()
            .zip(point)
            .map(|(c, x)| Rational::from_integer(c.clone()) * x)
            .sum()
    }

    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs_at(point);
        self.relation.holds(lhs.cmp(&Rational::from_integer(self.rhs.clone())))
    }

    pub fn satisfied_by_int(&self, point: &[i64]) -> bool {
        let lhs: BigInt = self.coefficients.iter().zip(point).map(|(c, &x)| c * x).sum();
        self.relation.holds(lhs.cmp(&self.rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn ge_and_gt_are_flipped() {
        let c = LinearConstraint::int(&[2, 0], Comparison::Gt, 1).unwrap();
        assert_eq!(c.relation(), Relation::Lt);
        assert_eq!(c.coefficients(), &[BigInt::from(-2), BigInt::from(0)]);
        assert_eq!(c.rhs(), &BigInt::from(-1));
    }

    #[test]
    fn denominators_are_cleared_and_reduced() {
        let c = LinearConstraint::new(&[rat(1, 2), rat(1, 3)], Comparison::Le, &rat(5, 6)).unwrap();
        assert_eq!(c.coefficients(), &[BigInt::from(3), BigInt::from(2)]);
        assert_eq!(c.rhs(), &BigInt::from(5));
        let d = LinearConstraint::int(&[4, 2], Comparison::Lt, 6).unwrap();
        assert_eq!(d.coefficients(), &[BigInt::from(2), BigInt::from(1)]);
    }

    #[test]
    fn equalities_have_positive_leading_coefficient() {
        let a = LinearConstraint::int(&[-1, 2], Comparison::Eq, 0).unwrap();
        let b = LinearConstraint::int(&[1, -2], Comparison::Eq, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn all_zero_coefficients_rejected() {
        assert_eq!(
            LinearConstraint::new(&[int(0)], Comparison::Le, &int(1)),
            Err(PolyError::ZeroCoefficients)
        );
    }

    #[test]
    fn strictness_respected_on_membership() {
        let c = LinearConstraint::int(&[1], Comparison::Lt, 1).unwrap();
        assert!(!c.satisfied_by_int(&[1]));
        assert!(c.satisfied_by(&[rat(1, 2)]));
        let e = LinearConstraint::int(&[2, -1], Comparison::Eq, 0).unwrap();
        assert!(e.satisfied_by_int(&[3, 6]));
    }
}
