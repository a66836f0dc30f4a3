//! Line-oriented text format: `c1 c2 ... cn REL rhs`, one constraint per line.
//!
//! `REL` is one of `=`, `<=`, `<` (`>=` and `>` are accepted and flipped).
//! Numbers are integers or `p/q`. Blank lines and `#` comments are ignored.

use std::fmt;
use std::str::FromStr;

use super::{Comparison, MixedPolyhedron, PolyError};
use crate::rational::{parse_rational, Rational};

impl fmt::Display for MixedPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            // a constant-false row keeps the emptiness when parsed back
            let zeros = vec!["0"; self.dim.max(1)].join(" ");
            return writeln!(f, "{zeros} < 0");
        }
        for c in &self.constraints {
            for a in c.coefficients() {
                write!(f, "{a} ")?;
            }
            writeln!(f, "{} {}", c.relation().symbol(), c.rhs())?;
        }
        Ok(())
    }
}

impl FromStr for MixedPolyhedron {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut q: Option<MixedPolyhedron> = None;
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| PolyError::Parse { line: idx + 1, message };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let rel_pos = tokens
                .iter()
                .position(|t| Comparison::parse(t).is_some())
                .ok_or_else(|| err("missing relation".into()))?;
            if rel_pos + 2 != tokens.len() {
                return Err(err("expected exactly one right-hand side after the relation".into()));
            }
            if rel_pos == 0 {
                return Err(err("no coefficients".into()));
            }
            let coeffs: Vec<Rational> = tokens[..rel_pos]
                .iter()
                .map(|t| parse_rational(t).map_err(|e| err(e.to_string())))
                .collect::<Result<_, _>>()?;
            let cmp = Comparison::parse(tokens[rel_pos]).expect("position found by parse");
            let rhs = parse_rational(tokens[rel_pos + 1]).map_err(|e| err(e.to_string()))?;
            let poly = q.get_or_insert_with(|| MixedPolyhedron::new(coeffs.len()));
            poly.add(&coeffs, cmp, &rhs).map_err(|e| err(e.to_string()))?;
        }
        q.ok_or(PolyError::Parse { line: 0, message: "no constraints".into() })
    }
}
