use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{self, Coefficients};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// A function `ℤ → ℚ` that agrees with a polynomial on each residue class
/// modulo `period`. Polynomials are in the argument `m` itself, not in
/// `(m - r) / K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiPolynomial {
    polys: Vec<Coefficients>,
}

/// Leading coefficient of a quasi-polynomial: either shared by all residue
/// classes, or the per-residue list when it is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeadingCoefficient {
    Constant(Rational),
    NonConstant(Vec<Rational>),
}

impl LeadingCoefficient {
    pub fn constant(&self) -> Option<&Rational> {
        match self {
            LeadingCoefficient::Constant(c) => Some(c),
            LeadingCoefficient::NonConstant(_) => None,
        }
    }
}

impl fmt::Display for LeadingCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeadingCoefficient::Constant(c) => write!(f, "{}", format_rational(c)),
            LeadingCoefficient::NonConstant(v) => {
                let parts: Vec<String> = v.iter().map(format_rational).collect();
                write!(f, "non-constant [{}]", parts.join(", "))
            }
        }
    }
}

impl QuasiPolynomial {
    /// Panics on an empty list; every quasi-polynomial has period at least 1.
    pub fn new(polys: Vec<Vec<Rational>>) -> Self {
        assert!(!polys.is_empty(), "a quasi-polynomial needs at least one residue class");
        QuasiPolynomial { polys: polys.into_iter().map(poly::trim).collect() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![vec![c]])
    }

    pub fn zero() -> Self {
        Self::new(vec![Vec::new()])
    }

    pub fn period(&self) -> usize {
        self.polys.len()
    }

    /// Residue polynomials, constant term first, index = residue class.
    pub fn polys(&self) -> &[Coefficients] {
        &self.polys
    }

    pub fn residue(&self, m: i64) -> usize {
        m.rem_euclid(self.period() as i64) as usize
    }

    pub fn evaluate(&self, m: i64) -> Rational {
        poly::evaluate(&self.polys[self.residue(m)], &int(m))
    }

    /// `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.polys.iter().filter_map(|p| p.len().checked_sub(1)).max()
    }

    pub fn is_zero(&self) -> bool {
        self.polys.iter().all(Vec::is_empty)
    }

    pub fn leading_coefficient(&self) -> LeadingCoefficient {
        let Some(d) = self.degree() else {
            return LeadingCoefficient::Constant(Rational::zero());
        };
        let values: Vec<Rational> = self.polys.iter().map(|p| p.get(d).cloned().unwrap_or_else(Rational::zero)).collect();
        if values.iter().all(|v| *v == values[0]) {
            LeadingCoefficient::Constant(values[0].clone())
        } else {
            LeadingCoefficient::NonConstant(values)
        }
    }

    /// The same function written with period `period * factor`.
    pub fn lift(&self, factor: usize) -> Self {
        assert!(factor >= 1);
        let k = self.period();
        QuasiPolynomial { polys: (0..k * factor).map(|r| self.polys[r % k].clone()).collect() }
    }

    /// The same function with the smallest period that represents it.
    pub fn reduced(&self) -> Self {
        let k = self.period();
        for d in (1..=k).filter(|d| k.is_multiple_of(*d)) {
            if (0..k).all(|r| self.polys[r] == self.polys[r % d]) {
                return QuasiPolynomial { polys: self.polys[..d].to_vec() };
            }
        }
        unreachable!("d = k always qualifies")
    }

    /// `m ↦ q(-m)`.
    pub fn reflect(&self) -> Self {
        let k = self.period();
        QuasiPolynomial { polys: (0..k).map(|r| poly::reflect(&self.polys[(k - r) % k])).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuasiPolynomial {
            polys: self.polys.iter().map(|p| poly::trim(p.iter().map(|a| a * c).collect())).collect(),
        }
    }

    /// Pointwise sum; the result has period lcm of the two periods.
    pub fn add(&self, other: &Self) -> Self {
        let k = self.period().lcm(&other.period());
        let (a, b) = (self.lift(k / self.period()), other.lift(k / other.period()));
        QuasiPolynomial { polys: a.polys.iter().zip(&b.polys).map(|(p, q)| poly::add(p, q)).collect() }
    }

    /// Equality as functions on ℤ, regardless of the chosen period.
    pub fn same_function(&self, other: &Self) -> bool {
        self.reduced() == other.reduced()
    }
}

impl fmt::Display for QuasiPolynomial {
    /// One line per residue class, e.g. `m ≡ 1 (mod 2): 1/2 m - 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.period();
        for (r, p) in self.polys.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            write!(f, "m ≡ {r} (mod {k}): {}", PolyDisplay(p))?;
        }
        Ok(())
    }
}

struct PolyDisplay<'a>(&'a [Rational]);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let coef = format_rational(&abs);
            match e {
                0 => write!(f, "{coef}")?,
                _ if abs.is_one() => write!(f, "m")?,
                _ => write!(f, "{coef} m")?,
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QpJson {
    period: usize,
    degree: i64,
    polys: Vec<Vec<String>>,
}

impl Serialize for QuasiPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QpJson {
            period: self.period(),
            degree: self.degree().map_or(-1, |d| d as i64),
            polys: self.polys.iter().map(|p| p.iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuasiPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = QpJson::deserialize(d)?;
        if raw.polys.len() != raw.period || raw.period == 0 {
            return Err(D::Error::custom("period does not match the number of residue polynomials"));
        }
        let polys = raw
            .polys
            .iter()
            .map(|p| p.iter().map(|c| parse_rational(c).map_err(D::Error::custom)).collect())
            .collect::<Result<Vec<Vec<Rational>>, _>>()?;
        let qp = QuasiPolynomial::new(polys);
        if qp.degree().map_or(-1, |x| x as i64) != raw.degree {
            return Err(D::Error::custom("stated degree does not match the coefficients"));
        }
        Ok(qp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// N(2, f) written out per residue mod 6.
    pub(crate) fn n2() -> QuasiPolynomial {
        let lin = [(-14, 0), (-8, 5), (-14, 16), (-8, -3), (-14, 8), (-8, 13)];
        QuasiPolynomial::new(lin.iter().map(|&(b, c)| vec![rat(c, 24), rat(b, 24), rat(1, 8)]).collect())
    }

    #[test]
    fn evaluation_including_negative_arguments() {
        let q = n2();
        assert_eq!(q.evaluate(7), int(4));
        assert_eq!(q.evaluate(8), int(4));
        assert_eq!(q.evaluate(9), int(7));
        // residue of -1 is 5
        assert_eq!(q.evaluate(-1), rat(1, 8) + rat(8 + 13, 24));
        assert_eq!(q.degree(), Some(2));
        assert_eq!(q.leading_coefficient(), LeadingCoefficient::Constant(rat(1, 8)));
    }

    #[test]
    fn lift_reduce_reflect() {
        let q = n2();
        let lifted = q.lift(2);
        assert_eq!(lifted.period(), 12);
        assert!(lifted.same_function(&q));
        assert_eq!(lifted.reduced(), q);
        let r = q.reflect();
        for m in -20..20 {
            assert_eq!(r.evaluate(m), q.evaluate(-m));
        }
        assert_eq!(r.reflect(), q);
    }

    #[test]
    fn add_and_scale() {
        let odd_even = QuasiPolynomial::new(vec![vec![int(0)], vec![int(1)]]);
        let thirds = QuasiPolynomial::new(vec![vec![int(0)], vec![int(0)], vec![int(3)]]);
        let s = odd_even.add(&thirds);
        assert_eq!(s.period(), 6);
        for m in -12..12 {
            assert_eq!(s.evaluate(m), odd_even.evaluate(m) + thirds.evaluate(m));
        }
        assert!(s.add(&s.scale(&int(-1))).is_zero());
        assert_eq!(QuasiPolynomial::zero().degree(), None);
    }

    #[test]
    fn non_constant_leading_coefficient() {
        let q = QuasiPolynomial::new(vec![vec![int(0), int(1)], vec![int(0), int(2)]]);
        assert_eq!(q.leading_coefficient(), LeadingCoefficient::NonConstant(vec![int(1), int(2)]));
        let q = QuasiPolynomial::new(vec![vec![int(0), int(1)], vec![int(3)]]);
        assert_eq!(q.leading_coefficient(), LeadingCoefficient::NonConstant(vec![int(1), int(0)]));
    }

    #[test]
    fn json_round_trip() {
        let q = QuasiPolynomial::new(vec![vec![rat(-1, 2), rat(1, 2)], vec![int(-1), rat(1, 2)]]);
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(js, r#"{"period":2,"degree":1,"polys":[["-1/2","1/2"],["-1","1/2"]]}"#);
        assert_eq!(serde_json::from_str::<QuasiPolynomial>(&js).unwrap(), q);
        assert!(serde_json::from_str::<QuasiPolynomial>(r#"{"period":2,"degree":1,"polys":[["1"]]}"#).is_err());
    }

    #[test]
    fn display() {
        let q = QuasiPolynomial::new(vec![vec![rat(-1, 2), rat(1, 2)], vec![int(-1), int(1), int(-3)]]);
        assert_eq!(q.to_string(), "m ≡ 0 (mod 2): 1/2 m - 1/2\nm ≡ 1 (mod 2): -3 m^2 + m - 1");
    }
}
