use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::{AffineError, Cone, WindowPolytope};
use crate::numsemi::AdditionTable;
use crate::polyhedra::{Comparison, LatticeEnumerator, LinearConstraint, MixedPolyhedron, Relation};

/// Default bound on `ℓ^k · d^{n-1}` for a single table.
pub const DEFAULT_PIECE_CAP: u64 = 20_000;

/// A constraint on one point of `ℝ^d` copied onto block `i` (0-based) of
/// `ℝ^{dn}`; with `j` given, onto the sum `x_i + x_j`.
fn lift(c: &LinearConstraint, d: usize, n: usize, i: usize, j: Option<usize>) -> (Vec<BigInt>, BigInt) {
    let mut row = vec![BigInt::zero(); d * n];
    for (s, a) in c.coefficients().iter().enumerate() {
        row[i * d + s] += a;
        if let Some(j) = j {
            row[j * d + s] += a;
        }
    }
    (row, c.rhs().clone())
}

fn unit_row(dn: usize, entries: &[(usize, i64)]) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); dn];
    for &(k, v) in entries {
        row[k] += v;
    }
    row
}

/// The failure of a single constraint, as a relation on the same row.
fn negated(rel: Relation) -> Comparison {
    match rel {
        Relation::Le => Comparison::Gt,
        Relation::Lt => Comparison::Ge,
        Relation::Eq => unreachable!("equalities are split before negation"),
    }
}

/// The `≤`/`<` rows of `q`, with each equality split into two `≤` rows.
fn inequality_rows(q: &MixedPolyhedron) -> Vec<(Vec<BigInt>, Relation, BigInt)> {
    let mut rows = Vec::new();
    for c in q.constraints() {
        let a = c.coefficients().to_vec();
        match c.relation() {
            Relation::Eq => {
                rows.push((a.clone(), Relation::Le, c.rhs().clone()));
                rows.push((a.iter().map(|x| -x).collect(), Relation::Le, -c.rhs()));
            }
            rel => rows.push((a, rel, c.rhs().clone())),
        }
    }
    rows
}

/// `d^{n-1}` disjoint polyhedra in `ℝ^{dn}` whose union is
/// `{x_1 <_lex x_2 <_lex … <_lex x_n}`. Region `(t_1, …, t_{n-1})` says that
/// `x_i` and `x_{i+1}` first differ in coordinate `t_i`.
pub fn lex_decompose(n: usize, d: usize) -> Vec<MixedPolyhedron> {
    let dn = d * n;
    let comparisons = n.saturating_sub(1);
    let mut regions = vec![MixedPolyhedron::new(dn)];
    for i in 0..comparisons {
        let mut next = Vec::with_capacity(regions.len() * d);
        for q in &regions {
            for t in 0..d {
                let mut r = q.clone();
                for s in 0..=t {
                    let row = unit_row(dn, &[(i * d + s, 1), ((i + 1) * d + s, -1)]);
                    let cmp = if s < t { Comparison::Eq } else { Comparison::Lt };
                    r.add_row(row, cmp, BigInt::zero()).expect("row has the ambient dimension");
                }
                next.push(r);
            }
        }
        regions = next;
    }
    regions
}

/// Disjoint polyhedra whose union is the complement of `q`: region `t` keeps
/// rows `0..t` and violates row `t`. Equalities count as two rows.
pub fn complement_decompose(q: &MixedPolyhedron) -> Vec<MixedPolyhedron> {
    let rows = inequality_rows(q);
    (0..rows.len())
        .map(|t| {
            let mut r = MixedPolyhedron::new(q.dim());
            for (a, rel, b) in &rows[..t] {
                r.add_row(a.clone(), (*rel).into(), b.clone()).expect("same dimension");
            }
            let (a, rel, b) = &rows[t];
            r.add_row(a.clone(), negated(*rel), b.clone()).expect("same dimension");
            r
        })
        .collect()
}

/// The origin of `ℝ^d` as the closed polytope `{x_s ≥ 0, -x_s ≥ 0}`; its
/// complement regions are "first nonzero coordinate is `s`, with either sign".
fn origin(d: usize) -> MixedPolyhedron {
    let mut q = MixedPolyhedron::new(d);
    for s in 0..d {
        let e: Vec<i64> = (0..d).map(|j| (j == s) as i64).collect();
        q.add_int(&e, Comparison::Ge, 0).expect("dimension d");
        q.add_int(&e, Comparison::Le, 0).expect("dimension d");
    }
    q
}

/// A list of alternatives, each a set of rows in `ℝ^{dn}`.
type Factor = Vec<Vec<(Vec<BigInt>, Comparison, BigInt)>>;

fn lifted_alternatives(regions: &[MixedPolyhedron], d: usize, n: usize, i: usize, j: Option<usize>) -> Factor {
    regions
        .iter()
        .map(|r| {
            r.constraints()
                .iter()
                .map(|c| {
                    let (row, rhs) = lift(c, d, n, i, j);
                    (row, c.relation().into(), rhs)
                })
                .collect()
        })
        .collect()
}

/// Number of pieces before pruning, `ℓ^k · d^{n-1}`, saturating.
pub fn piece_count(table: &AdditionTable, window: &WindowPolytope) -> u64 {
    let l = window.num_constraints() as u64;
    let k = table.infinite_pairs().len() as u32;
    let d = window.dim() as u64;
    l.saturating_pow(k).saturating_mul(d.saturating_pow(table.n().saturating_sub(1) as u32))
}

/// The set `P_τ^{(C,P)}` as a union of pairwise disjoint mixed polyhedra in
/// `ℝ^{dn}`, with empty pieces dropped.
///
/// Each piece combines one lex region, one nonzero cell and one complement
/// region of `P` per infinite entry of `τ`. If the cone is lexicographically
/// positive, `x_1 ≠ 0` suffices since the others are lex-larger; otherwise
/// every `x_i` gets its own nonzero cell.
pub fn build_affine_union(
    table: &AdditionTable,
    cone: &Cone,
    window: &WindowPolytope,
    cap: u64,
) -> Result<Vec<MixedPolyhedron>, AffineError> {
    if !table.is_symmetric() {
        return Err(AffineError::InvalidTable("table is not symmetric".into()));
    }
    if cone.dim() != window.dim() {
        return Err(AffineError::DimensionMismatch { expected: cone.dim(), found: window.dim() });
    }
    let pieces = piece_count(table, window);
    if pieces > cap {
        return Err(AffineError::PieceCapExceeded { pieces, cap });
    }
    let (n, d) = (table.n(), cone.dim());
    let dn = n * d;

    let mut base = MixedPolyhedron::new(dn);
    for i in 0..n {
        for c in cone.facet_rows().iter().chain(window.base().constraints()) {
            let (row, rhs) = lift(c, d, n, i, None);
            base.add_row(row, c.relation().into(), rhs)?;
        }
    }
    for (i, j, k) in table.finite_entries() {
        for s in 0..d {
            let row = unit_row(dn, &[((i - 1) * d + s, 1), ((j - 1) * d + s, 1), ((k - 1) * d + s, -1)]);
            base.add_row(row, Comparison::Eq, BigInt::zero())?;
        }
    }

    let mut factors: Vec<Factor> = Vec::new();
    let lex: Factor = lex_decompose(n, d)
        .iter()
        .map(|r| r.constraints().iter().map(|c| (c.coefficients().to_vec(), c.relation().into(), c.rhs().clone())).collect())
        .collect();
    factors.push(lex);
    let guards = complement_decompose(&origin(d));
    let guarded = if cone.is_lex_positive() { 1 } else { n };
    for i in 0..guarded {
        factors.push(lifted_alternatives(&guards, d, n, i, None));
    }
    let outside = complement_decompose(window.base());
    for (i, j) in table.infinite_pairs() {
        factors.push(lifted_alternatives(&outside, d, n, i - 1, Some(j - 1)));
    }

    let mut out = Vec::new();
    if base.is_feasible() {
        expand(&base, &factors, &mut out)?;
    }
    Ok(out)
}

fn expand(q: &MixedPolyhedron, factors: &[Factor], out: &mut Vec<MixedPolyhedron>) -> Result<(), AffineError> {
    let Some((first, rest)) = factors.split_first() else {
        out.push(q.clone());
        return Ok(());
    };
    for alternative in first {
        let mut r = q.clone();
        for (row, cmp, rhs) in alternative {
            r.add_row(row.clone(), *cmp, rhs.clone())?;
        }
        if r.is_feasible() {
            expand(&r, rest, out)?;
        }
    }
    Ok(())
}

/// Every symmetric table `[n]² → [n] ∪ {∞}`, with no further conditions.
pub fn all_symmetric_tables(n: usize) -> Vec<AdditionTable> {
    let pairs: Vec<(usize, usize)> = AdditionTable::all_infinite(n).upper_pairs().collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; pairs.len()];
    loop {
        let finite: Vec<(usize, usize, usize)> =
            pairs.iter().zip(&choice).filter(|(_, &c)| c > 0).map(|(&(i, j), &c)| (i, j, c)).collect();
        out.push(AdditionTable::from_finite(n, &finite).expect("values lie in 1..=n"));
        let mut p = 0;
        while p < choice.len() && choice[p] == n {
            choice[p] = 0;
            p += 1;
        }
        if p == choice.len() {
            return out;
        }
        choice[p] += 1;
    }
}

/// One table's union, ready for counting at every dilation.
#[derive(Debug, Clone)]
pub struct AffinePiece {
    pub table: AdditionTable,
    pub pieces: Vec<MixedPolyhedron>,
    enumerators: Vec<LatticeEnumerator>,
}

impl AffinePiece {
    pub fn count(&self, alpha: u64) -> u64 {
        self.enumerators.iter().map(|e| e.count(alpha)).sum()
    }

    /// Lattice points of `α · P_τ^{(C,P)}`, piece by piece.
    pub fn points(&self, alpha: u64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for e in &self.enumerators {
            e.for_each_point(alpha, |p| out.push(p.to_vec()));
        }
        out
    }

    /// Lattice points grouped by piece, for disjointness checks.
    pub fn points_by_piece(&self, alpha: u64) -> Vec<Vec<Vec<i64>>> {
        self.enumerators.iter().map(|e| e.points(alpha).into_iter().map(|p| p.0).collect()).collect()
    }
}

/// The unions for every symmetric table over `n` elements whose union is
/// nonempty. Tables with empty unions contribute nothing, so the sum over the
/// kept tables counts every semigroup.
#[derive(Debug, Clone)]
pub struct AffineCounter {
    cone: Cone,
    window: WindowPolytope,
    n: usize,
    tables: Vec<AffinePiece>,
}

impl AffineCounter {
    pub fn new(cone: &Cone, window: &WindowPolytope, n: usize, cap: u64) -> Result<Self, AffineError> {
        let built = all_symmetric_tables(n)
            .into_par_iter()
            .map(|table| {
                let pieces = build_affine_union(&table, cone, window, cap)?;
                let enumerators = pieces.iter().map(LatticeEnumerator::new).collect::<Result<Vec<_>, _>>()?;
                Ok(AffinePiece { table, pieces, enumerators })
            })
            .collect::<Result<Vec<_>, AffineError>>()?;
        let tables = built.into_iter().filter(|t| !t.pieces.is_empty()).collect();
        Ok(AffineCounter { cone: cone.clone(), window: window.clone(), n, tables })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn window(&self) -> &WindowPolytope {
        &self.window
    }

    pub fn tables(&self) -> &[AffinePiece] {
        &self.tables
    }

    pub fn count(&self, alpha: u64) -> u64 {
        self.tables.iter().map(|t| t.count(alpha)).sum()
    }
}

/// Lattice points of `α · P_τ^{(C,P)}` summed over its pieces.
pub fn count_affine(
    table: &AdditionTable,
    cone: &Cone,
    window: &WindowPolytope,
    alpha: u64,
    cap: u64,
) -> Result<u64, AffineError> {
    let mut total = 0;
    for piece in build_affine_union(table, cone, window, cap)? {
        total += LatticeEnumerator::new(&piece)?.count(alpha);
    }
    Ok(total)
}
