use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NumSemiError;
use crate::polyhedra::{Comparison, MixedPolyhedron};

/// A truncated addition table `τ : [n]² → [n] ∪ {∞}`.
///
/// Indices are 1-based throughout the public API, matching `[n] = {1, …, n}`;
/// `None` stands for `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdditionTable {
    n: usize,
    entries: Vec<Option<usize>>,
}

impl AdditionTable {
    pub fn all_infinite(n: usize) -> Self {
        AdditionTable { n, entries: vec![None; n * n] }
    }

    /// Builds a table from its finite values `(i, j, k)` meaning `τ(i,j) = k`,
    /// filled in symmetrically; every other entry is `∞`.
    pub fn from_finite(n: usize, finite: &[(usize, usize, usize)]) -> Result<Self, NumSemiError> {
        let mut t = Self::all_infinite(n);
        for &(i, j, k) in finite {
            for v in [i, j, k] {
                if v == 0 || v > n {
                    return Err(NumSemiError::TableIndex { index: v, n });
                }
            }
            t.entries[(i - 1) * n + (j - 1)] = Some(k);
            t.entries[(j - 1) * n + (i - 1)] = Some(k);
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `τ(i, j)` with 1-based indices; `None` is `∞`.
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    fn set(&mut self, i: usize, j: usize, v: Option<usize>) {
        self.entries[(i - 1) * self.n + (j - 1)] = v;
        self.entries[(j - 1) * self.n + (i - 1)] = v;
    }

    /// Finite values `(i, j, k)` with `i <= j`, in row-major order.
    pub fn finite_entries(&self) -> Vec<(usize, usize, usize)> {
        self.upper_pairs().filter_map(|(i, j)| self.get(i, j).map(|k| (i, j, k))).collect()
    }

    /// Pairs `(i, j)` with `i <= j` mapped to `∞`.
    pub fn infinite_pairs(&self) -> Vec<(usize, usize)> {
        self.upper_pairs().filter(|&(i, j)| self.get(i, j).is_none()).collect()
    }

    pub fn upper_pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (1..=n).flat_map(move |i| (i..=n).map(move |j| (i, j)))
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.n).all(|i| (1..=self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Checks the necessary conditions for the table of a numerical semigroup:
    /// symmetry, strict increase along rows and columns (with `∞ < ∞` allowed)
    /// and finite values exceeding both arguments.
    pub fn check_numerical(&self) -> Result<(), NumSemiError> {
        let bad = |reason: String| Err(NumSemiError::InvalidTable(reason));
        if !self.is_symmetric() {
            return bad("table is not symmetric".into());
        }
        for i in 1..=self.n {
            for j in 1..=self.n {
                if let Some(k) = self.get(i, j) {
                    if k <= i.max(j) {
                        return bad(format!("τ({i},{j}) = {k} does not exceed max({i},{j})"));
                    }
                }
                if j > 1 && !increases(self.get(i, j - 1), self.get(i, j)) {
                    return bad(format!("τ({i},·) is not strictly increasing at {j}"));
                }
            }
        }
        Ok(())
    }

    /// Associativity consistency: `(x_i + x_j) + x_l` and `x_i + (x_j + x_l)`
    /// must agree as elements of `[n] ∪ {∞}`.
    pub fn is_associative(&self) -> bool {
        let n = self.n;
        let triple_left = |i, j, l| self.get(i, j).and_then(|k| self.get(k, l));
        let triple_right = |i, j, l| self.get(j, l).and_then(|p| self.get(i, p));
        (1..=n).all(|i| (1..=n).all(|j| (1..=n).all(|l| triple_left(i, j, l) == triple_right(i, j, l))))
    }
}

fn increases(prev: Option<usize>, next: Option<usize>) -> bool {
    match (prev, next) {
        (Some(a), Some(b)) => a < b,
        (_, None) => true,
        (None, Some(_)) => false,
    }
}

impl fmt::Display for AdditionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let finite = self.finite_entries();
        if finite.is_empty() {
            return write!(f, "---");
        }
        let parts: Vec<String> = finite.iter().map(|(i, j, k)| format!("τ({i},{j})={k}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The SR-polytope: order inequalities `0 < x_1 < … < x_n < 1`, a sporadic
/// relation `x_i + x_j = x_k` per finite entry and a truncation inequality
/// `x_i + x_j > 1` per infinite entry (symmetric pairs emitted once).
pub fn build_sr_polytope(table: &AdditionTable) -> Result<MixedPolyhedron, NumSemiError> {
    table.check_numerical()?;
    Ok(sr_polytope_unchecked(table))
}

pub(crate) fn sr_polytope_unchecked(table: &AdditionTable) -> MixedPolyhedron {
    let n = table.n;
    let mut q = MixedPolyhedron::new(n);
    let unit = |i: usize| {
        let mut v = vec![0i64; n];
        v[i - 1] = 1;
        v
    };
    let mut add = |row: &[i64], cmp, rhs| q.add_int(row, cmp, rhs).expect("rows have length n");
    add(&unit(1), Comparison::Gt, 0);
    for i in 1..n {
        let mut row = unit(i);
        row[i] = -1;
        add(&row, Comparison::Lt, 0);
    }
    add(&unit(n), Comparison::Lt, 1);
    for (i, j) in table.upper_pairs() {
        let mut row = unit(i);
        row[j - 1] += 1;
        match table.get(i, j) {
            Some(k) => {
                row[k - 1] -= 1;
                add(&row, Comparison::Eq, 0);
            }
            None => add(&row, Comparison::Gt, 1),
        }
    }
    q
}

/// How the candidate tables over `n` elements thin out under each filter.
#[derive(Debug, Clone)]
pub struct TableCensus {
    pub n: usize,
    /// Symmetric, doubly increasing, finite values above both arguments.
    pub monotone: usize,
    /// Of those, the associativity-consistent ones.
    pub associative: usize,
    pub realizable: Vec<AdditionTable>,
    /// Passed every necessary condition but has an empty SR-polytope.
    pub infeasible: Vec<AdditionTable>,
}

pub fn table_census(n: usize) -> TableCensus {
    let monotone = monotone_candidates(n);
    let associative: Vec<AdditionTable> = monotone.iter().filter(|t| t.is_associative()).cloned().collect();
    let (mut realizable, mut infeasible): (Vec<_>, Vec<_>) =
        associative.par_iter().cloned().partition(|t| sr_polytope_unchecked(t).is_feasible());
    let key = |t: &AdditionTable| {
        let finite = t.finite_entries();
        (finite.len(), finite)
    };
    realizable.sort_by_key(key);
    infeasible.sort_by_key(key);
    TableCensus { n, monotone: monotone.len(), associative: associative.len(), realizable, infeasible }
}

/// All tables over `n` elements whose SR-polytope is nonempty.
///
/// Candidates are generated by backtracking over the upper triangle with the
/// monotonicity and `k > max(i, j)` conditions enforced entrywise, then
/// filtered by associativity; polytope feasibility decides the rest. The
/// result is sorted by number of finite entries, then by the entries.
pub fn enumerate_realizable_tables(n: usize) -> Vec<AdditionTable> {
    table_census(n).realizable
}

/// Symmetric, doubly strictly increasing tables with finite values above the
/// diagonal index bound.
fn monotone_candidates(n: usize) -> Vec<AdditionTable> {
    let pairs: Vec<(usize, usize)> = AdditionTable::all_infinite(n).upper_pairs().collect();
    let mut out = Vec::new();
    let mut table = AdditionTable::all_infinite(n);
    fill(&pairs, 0, &mut table, &mut out);
    out
}

fn fill(pairs: &[(usize, usize)], idx: usize, table: &mut AdditionTable, out: &mut Vec<AdditionTable>) {
    let Some(&(i, j)) = pairs.get(idx) else {
        out.push(table.clone());
        return;
    };
    let n = table.n;
    let options = std::iter::once(None).chain(((j + 1)..=n).map(Some));
    for v in options {
        // predecessors τ(i, j-1) and τ(i-1, j) are already assigned
        if j > 1 && !increases(table.get(i, j - 1), v) {
            continue;
        }
        if i > 1 && !increases(table.get(i - 1, j), v) {
            continue;
        }
        table.set(i, j, v);
        fill(pairs, idx + 1, table, out);
    }
    table.set(i, j, None);
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryJson {
    Finite(usize),
    Infinite(String),
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    entries: Vec<(usize, usize, EntryJson)>,
}

impl Serialize for AdditionTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = self
            .upper_pairs()
            .map(|(i, j)| {
                let e = match self.get(i, j) {
                    Some(k) => EntryJson::Finite(k),
                    None => EntryJson::Infinite("inf".into()),
                };
                (i, j, e)
            })
            .collect();
        TableJson { n: self.n, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdditionTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = TableJson::deserialize(d)?;
        let mut finite = Vec::new();
        for (i, j, e) in raw.entries {
            match e {
                EntryJson::Finite(k) => finite.push((i, j, k)),
                EntryJson::Infinite(s) if s == "inf" => {
                    if i == 0 || j == 0 || i > raw.n || j > raw.n {
                        return Err(D::Error::custom(format!("index out of range in ({i},{j})")));
                    }
                }
                EntryJson::Infinite(s) => return Err(D::Error::custom(format!("bad table entry {s:?}"))),
            }
        }
        AdditionTable::from_finite(raw.n, &finite).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn sr_polytope_constraint_systems() {
        let one = build_sr_polytope(&AdditionTable::all_infinite(1)).unwrap();
        let expected: MixedPolyhedron = "1 > 0\n1 < 1\n2 > 1\n".parse().unwrap();
        assert_eq!(one.canonical(), expected.canonical());

        let t = AdditionTable::from_finite(2, &[(1, 1, 2)]).unwrap();
        let q = build_sr_polytope(&t).unwrap();
        let expected: MixedPolyhedron = "1 0 > 0\n1 -1 < 0\n0 1 < 1\n2 -1 = 0\n1 1 > 1\n0 2 > 1\n".parse().unwrap();
        assert_eq!(q.canonical(), expected.canonical());

        let t3 = AdditionTable::from_finite(3, &[(1, 1, 3)]).unwrap();
        let q3 = build_sr_polytope(&t3).unwrap();
        assert!(q3.contains(&[rat(2, 5), rat(7, 10), rat(4, 5)]));
        assert!(!q3.contains(&[rat(2, 5), rat(1, 2), rat(4, 5)]));
        assert!(q3.is_feasible());
    }

    #[test]
    fn invalid_tables_rejected() {
        let not_above = AdditionTable::from_finite(2, &[(1, 2, 2)]).unwrap();
        assert!(build_sr_polytope(&not_above).is_err());
        // τ(1,1) = ∞ but τ(1,2) finite breaks monotonicity
        let t = AdditionTable::from_finite(3, &[(1, 2, 3)]).unwrap();
        assert!(matches!(t.check_numerical(), Err(NumSemiError::InvalidTable(_))));
        assert!(AdditionTable::from_finite(2, &[(1, 1, 3)]).is_err());
    }

    #[test]
    fn census_for_small_n() {
        assert_eq!(enumerate_realizable_tables(1), vec![AdditionTable::all_infinite(1)]);
        let two = enumerate_realizable_tables(2);
        assert_eq!(two, vec![AdditionTable::all_infinite(2), AdditionTable::from_finite(2, &[(1, 1, 2)]).unwrap()]);
        let three: Vec<Vec<(usize, usize, usize)>> =
            enumerate_realizable_tables(3).iter().map(AdditionTable::finite_entries).collect();
        assert_eq!(three, vec![vec![], vec![(1, 1, 2)], vec![(1, 1, 3)], vec![(1, 1, 2), (1, 2, 3)]]);
    }

    /// Symmetric tables that are strictly increasing in both coordinates,
    /// with no other condition imposed.
    fn symmetric_increasing(n: usize) -> Vec<AdditionTable> {
        let pairs: Vec<(usize, usize)> = AdditionTable::all_infinite(n).upper_pairs().collect();
        let values: Vec<Option<usize>> = std::iter::once(None).chain((1..=n).map(Some)).collect();
        let mut out = Vec::new();
        let total = values.len().pow(pairs.len() as u32);
        for code in 0..total {
            let mut t = AdditionTable::all_infinite(n);
            let mut c = code;
            for &(i, j) in &pairs {
                t.set(i, j, values[c % values.len()]);
                c /= values.len();
            }
            let increasing = (1..=n).all(|i| (2..=n).all(|j| increases(t.get(i, j - 1), t.get(i, j))));
            if increasing {
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn symmetry_and_monotonicity_are_not_sufficient() {
        let candidates = symmetric_increasing(3);
        let infeasible: Vec<_> = candidates.iter().filter(|t| !sr_polytope_unchecked(t).is_feasible()).collect();
        assert!(!infeasible.is_empty());
        let realizable: Vec<_> = candidates.iter().filter(|t| sr_polytope_unchecked(t).is_feasible()).cloned().collect();
        let mut sorted = realizable.clone();
        sorted.sort_by_key(|t| (t.finite_entries().len(), t.finite_entries()));
        assert_eq!(sorted, enumerate_realizable_tables(3));
        assert!(infeasible.iter().any(|t| t.get(1, 1) == Some(1)));
    }

    #[test]
    fn census_filters_are_consistent() {
        for n in 1..=4 {
            let c = table_census(n);
            assert!(c.realizable.len() + c.infeasible.len() == c.associative);
            assert!(c.associative <= c.monotone);
            for t in &c.realizable {
                t.check_numerical().unwrap();
            }
        }
    }

    #[test]
    fn json_lists_upper_triangle() {
        let t = AdditionTable::from_finite(2, &[(1, 1, 2)]).unwrap();
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(js, r#"{"n":2,"entries":[[1,1,2],[1,2,"inf"],[2,2,"inf"]]}"#);
        let back: AdditionTable = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<AdditionTable>(r#"{"n":1,"entries":[[1,1,"oops"]]}"#).is_err());
    }

    #[test]
    fn dilated_polytope_uses_frobenius_bound() {
        let q = build_sr_polytope(&AdditionTable::all_infinite(1)).unwrap().dilate(&int(7)).unwrap();
        assert!(q.contains(&[int(4)]));
        assert!(!q.contains(&[int(7)]));
    }
}
