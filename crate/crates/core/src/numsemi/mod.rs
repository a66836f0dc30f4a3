//! Numerical semigroups with `n` positive sporadic elements and Frobenius
//! number `f`, and their encoding as lattice points of SR-polytopes.
//!
//! A semigroup `{0, x_1, …, x_n, f+1, →}` corresponds to the integer point
//! `(x_1, …, x_n)` of the `f`-dilate of the SR-polytope of its sporadic
//! addition table. Summing lattice counts over all realizable tables gives the
//! number `N(n, f)`, which [`enumerate_semigroups`] recomputes independently
//! by subset search.

mod oracle;
mod table;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use oracle::{count_semigroups_oracle, enumerate_semigroups};
pub use table::{build_sr_polytope, enumerate_realizable_tables, table_census, AdditionTable, TableCensus};

use crate::polyhedra::{LatticeEnumerator, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumSemiError {
    #[error("sporadic elements must be strictly increasing and lie in 1..f")]
    BadSporadicSet,
    #[error("closure violated: {a} + {b} = {sum} is at most f but not a sporadic element")]
    ClosureViolation { a: u64, b: u64, sum: u64 },
    #[error("invalid addition table: {0}")]
    InvalidTable(String),
    #[error("table index {index} outside 1..={n}")]
    TableIndex { index: usize, n: usize },
    #[error("decoded semigroup has a different addition table than the polytope it came from")]
    TableMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `{0} ∪ {x_1 < … < x_n} ∪ {f+1, f+2, …}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NumericalSemigroup {
    #[serde(rename = "f")]
    pub frobenius: u64,
    pub sporadic: Vec<u64>,
}

impl NumericalSemigroup {
    /// Validates ordering, range and closure under addition.
    pub fn new(frobenius: u64, sporadic: Vec<u64>) -> Result<Self, NumSemiError> {
        let s = NumericalSemigroup { frobenius, sporadic };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), NumSemiError> {
        let f = self.frobenius;
        let increasing = self.sporadic.windows(2).all(|w| w[0] < w[1]);
        if !increasing || self.sporadic.iter().any(|&x| x == 0 || x >= f) {
            return Err(NumSemiError::BadSporadicSet);
        }
        for (i, &a) in self.sporadic.iter().enumerate() {
            for &b in &self.sporadic[i..] {
                let sum = a + b;
                if sum <= f && self.sporadic.binary_search(&sum).is_err() {
                    return Err(NumSemiError::ClosureViolation { a, b, sum });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.sporadic.len()
    }

    pub fn contains(&self, x: u64) -> bool {
        x == 0 || x > self.frobenius || self.sporadic.binary_search(&x).is_ok()
    }

    /// The lattice point `(x_1, …, x_n)`.
    pub fn encode(&self) -> Vec<i64> {
        self.sporadic.iter().map(|&x| x as i64).collect()
    }

    pub fn decode(frobenius: u64, point: &[i64]) -> Result<Self, NumSemiError> {
        if point.iter().any(|&x| x <= 0) {
            return Err(NumSemiError::BadSporadicSet);
        }
        Self::new(frobenius, point.iter().map(|&x| x as u64).collect())
    }
}

/// The table recording which sums `x_i + x_j` are sporadic and which exceed `f`.
pub fn sporadic_addition_table(s: &NumericalSemigroup) -> Result<AdditionTable, NumSemiError> {
    s.validate()?;
    let n = s.n();
    let mut finite = Vec::new();
    for i in 0..n {
        for j in i..n {
            let sum = s.sporadic[i] + s.sporadic[j];
            if sum <= s.frobenius {
                let k = s.sporadic.binary_search(&sum).map_err(|_| NumSemiError::ClosureViolation {
                    a: s.sporadic[i],
                    b: s.sporadic[j],
                    sum,
                })?;
                finite.push((i + 1, j + 1, k + 1));
            }
        }
    }
    AdditionTable::from_finite(n, &finite)
}

/// Decodes the lattice points of `f · P_τ`; each result is checked to have
/// table `τ`.
pub fn semigroups_from_polytope(table: &AdditionTable, f: u64) -> Result<Vec<NumericalSemigroup>, NumSemiError> {
    let enumerator = LatticeEnumerator::new(&build_sr_polytope(table)?)?;
    decode_points(&enumerator, table, f)
}

fn decode_points(
    enumerator: &LatticeEnumerator,
    table: &AdditionTable,
    f: u64,
) -> Result<Vec<NumericalSemigroup>, NumSemiError> {
    enumerator
        .points(f)
        .into_iter()
        .map(|p| {
            let s = NumericalSemigroup::decode(f, p.coords())?;
            if sporadic_addition_table(&s)? != *table {
                return Err(NumSemiError::TableMismatch);
            }
            Ok(s)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Oracle,
    Polytopes,
}

/// `N(n, f)` by the chosen method.
pub fn count_semigroups(n: usize, f: u64, method: CountMethod) -> Result<u64, NumSemiError> {
    match method {
        CountMethod::Oracle => Ok(count_semigroups_oracle(n, f)),
        CountMethod::Polytopes => Ok(SrCounter::new(n)?.count(f)),
    }
}

/// Prepared lattice enumerators for every realizable table over `n` elements,
/// reusable across Frobenius numbers.
#[derive(Debug, Clone)]
pub struct SrCounter {
    n: usize,
    pieces: Vec<SrPiece>,
}

#[derive(Debug, Clone)]
pub struct SrPiece {
    pub table: AdditionTable,
    pub dimension: isize,
    enumerator: LatticeEnumerator,
}

impl SrPiece {
    pub fn count(&self, f: u64) -> u64 {
        self.enumerator.count(f)
    }

    pub fn semigroups(&self, f: u64) -> Result<Vec<NumericalSemigroup>, NumSemiError> {
        decode_points(&self.enumerator, &self.table, f)
    }
}

impl SrCounter {
    pub fn new(n: usize) -> Result<Self, NumSemiError> {
        Self::from_tables(n, enumerate_realizable_tables(n))
    }

    pub fn from_tables(n: usize, tables: Vec<AdditionTable>) -> Result<Self, NumSemiError> {
        let pieces = tables
            .into_par_iter()
            .map(|table| {
                let q = build_sr_polytope(&table)?;
                Ok(SrPiece { dimension: q.dimension(), enumerator: LatticeEnumerator::new(&q)?, table })
            })
            .collect::<Result<Vec<_>, NumSemiError>>()?;
        Ok(SrCounter { n, pieces })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[SrPiece] {
        &self.pieces
    }

    /// `N(n, f)` as the sum of open SR-polytope lattice counts.
    pub fn count(&self, f: u64) -> u64 {
        self.pieces.iter().map(|p| p.count(f)).sum()
    }

    pub fn semigroups(&self, f: u64) -> Result<Vec<NumericalSemigroup>, NumSemiError> {
        let mut all = Vec::new();
        for p in &self.pieces {
            all.extend(p.semigroups(f)?);
        }
        all.sort();
        Ok(all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(f: u64, xs: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::new(f, xs.to_vec()).unwrap()
    }

    #[test]
    fn addition_tables_of_examples() {
        let t = sporadic_addition_table(&sg(7, &[3, 6])).unwrap();
        assert_eq!((t.get(1, 1), t.get(1, 2), t.get(2, 2)), (Some(2), None, None));
        assert_eq!(sporadic_addition_table(&sg(7, &[4, 5])).unwrap(), AdditionTable::all_infinite(2));
        let t = sporadic_addition_table(&sg(7, &[2, 4, 6])).unwrap();
        assert_eq!(t.finite_entries(), vec![(1, 1, 2), (1, 2, 3)]);
    }

    #[test]
    fn corrupted_semigroup_reports_closure_violation() {
        let bad = NumericalSemigroup { frobenius: 7, sporadic: vec![3, 5] };
        assert_eq!(
            sporadic_addition_table(&bad),
            Err(NumSemiError::ClosureViolation { a: 3, b: 3, sum: 6 })
        );
        assert_eq!(NumericalSemigroup::new(7, vec![5, 4]), Err(NumSemiError::BadSporadicSet));
        assert_eq!(NumericalSemigroup::new(7, vec![7]), Err(NumSemiError::BadSporadicSet));
    }

    #[test]
    fn decoding_polytope_points() {
        let all_inf = AdditionTable::all_infinite(2);
        assert_eq!(semigroups_from_polytope(&all_inf, 7).unwrap(), vec![sg(7, &[4, 5]), sg(7, &[4, 6]), sg(7, &[5, 6])]);
        let doubling = AdditionTable::from_finite(2, &[(1, 1, 2)]).unwrap();
        assert_eq!(semigroups_from_polytope(&doubling, 7).unwrap(), vec![sg(7, &[3, 6])]);
        assert!(semigroups_from_polytope(&doubling, 4).unwrap().is_empty());
    }

    #[test]
    fn counts_by_both_methods() {
        for method in [CountMethod::Oracle, CountMethod::Polytopes] {
            assert_eq!(count_semigroups(2, 8, method).unwrap(), 4);
            assert_eq!(count_semigroups(3, 7, method).unwrap(), 3);
            assert_eq!(count_semigroups(1, 100, method).unwrap(), 49);
            assert_eq!(count_semigroups(1, 2, method).unwrap(), 0);
        }
    }

    #[test]
    fn json_encoding() {
        let s = sg(7, &[3, 6]);
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"f":7,"sporadic":[3,6]}"#);
        assert_eq!(serde_json::from_str::<NumericalSemigroup>(&js).unwrap(), s);
    }
}
