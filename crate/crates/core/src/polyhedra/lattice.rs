use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{fm, MixedPolyhedron, PolyError, Relation};

/// An integer point; the length equals the ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

#[derive(Debug, Clone)]
struct Row {
    prefix: Vec<i128>,
    coef: i128,
    rhs: i128,
    relation: Relation,
}

/// Constraints of the projection onto the first `k + 1` coordinates that
/// actually involve coordinate `k`.
#[derive(Debug, Clone)]
struct Level {
    rows: Vec<Row>,
}

/// Lattice-point enumeration for all integer dilates of a bounded polyhedron.
///
/// The projection chain is computed once. Dilating by `m` only scales the
/// right-hand sides, and Fourier–Motzkin projection commutes with that, so the
/// same chain serves every `m >= 1`.
#[derive(Debug, Clone)]
pub struct LatticeEnumerator {
    dim: usize,
    levels: Vec<Level>,
    empty: bool,
}

fn to_i128(v: &BigInt) -> Result<i128, PolyError> {
    v.to_i128().ok_or(PolyError::Overflow)
}

impl LatticeEnumerator {
    /// Fails with [`PolyError::UnboundedPolyhedron`] if some coordinate has no
    /// finite interval. An infeasible polyhedron is accepted and yields nothing.
    pub fn new(q: &MixedPolyhedron) -> Result<Self, PolyError> {
        let dim = q.dim();
        let mut top = q.clone();
        top.simplify();
        let mut stages = vec![top];
        for k in (1..=dim).rev() {
            let next = fm::eliminate(stages.last().expect("chain is nonempty"), k - 1);
            stages.push(next);
        }
        stages.reverse();
        if stages.iter().any(|s| s.empty) {
            return Ok(LatticeEnumerator { dim, levels: Vec::new(), empty: true });
        }

        let mut levels = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut rows = Vec::new();
            let (mut has_upper, mut has_lower) = (false, false);
            for c in stages[k + 1].constraints() {
                let coef = to_i128(&c.coefficients()[k])?;
                if coef == 0 {
                    continue;
                }
                match c.relation() {
                    Relation::Eq => (has_upper, has_lower) = (true, true),
                    _ if coef > 0 => has_upper = true,
                    _ => has_lower = true,
                }
                let prefix = c.coefficients()[..k].iter().map(to_i128).collect::<Result<_, _>>()?;
                rows.push(Row { prefix, coef, rhs: to_i128(c.rhs())?, relation: c.relation() });
            }
            if !(has_upper && has_lower) {
                return Err(PolyError::UnboundedPolyhedron { coord: k });
            }
            levels.push(Level { rows });
        }
        Ok(LatticeEnumerator { dim, levels, empty: false })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn bounds(&self, k: usize, point: &[i64], m: i128) -> Option<(i128, i128)> {
        let mut lo = i128::MIN;
        let mut hi = i128::MAX;
        for row in &self.levels[k].rows {
            let mut r = row.rhs * m;
            for (a, &x) in row.prefix.iter().zip(point) {
                r -= a * x as i128;
            }
            let c = row.coef;
            match row.relation {
                Relation::Eq => {
                    if r % c != 0 {
                        return None;
                    }
                    let v = r / c;
                    lo = lo.max(v);
                    hi = hi.min(v);
                }
                Relation::Le if c > 0 => hi = hi.min(Integer::div_floor(&r, &c)),
                Relation::Le => lo = lo.max(Integer::div_ceil(&r, &c)),
                Relation::Lt if c > 0 => hi = hi.min(Integer::div_ceil(&r, &c) - 1),
                Relation::Lt => lo = lo.max(Integer::div_floor(&r, &c) + 1),
            }
            if lo > hi {
                return None;
            }
        }
        Some((lo, hi))
    }

    fn walk(&self, k: usize, m: i128, point: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
        if k == self.dim {
            visit(point);
            return;
        }
        let Some((lo, hi)) = self.bounds(k, point, m) else {
            return;
        };
        for x in lo..=hi {
            point.push(x as i64);
            self.walk(k + 1, m, point, visit);
            point.pop();
        }
    }

    fn count_from(&self, k: usize, m: i128, point: &mut Vec<i64>) -> u64 {
        let Some((lo, hi)) = self.bounds(k, point, m) else {
            return 0;
        };
        if k + 1 == self.dim {
            return (hi - lo + 1) as u64;
        }
        let mut total = 0;
        for x in lo..=hi {
            point.push(x as i64);
            total += self.count_from(k + 1, m, point);
            point.pop();
        }
        total
    }

    /// Calls `visit` on every lattice point of the `m`-th dilate, in
    /// lexicographic order.
    pub fn for_each_point(&self, m: u64, mut visit: impl FnMut(&[i64])) {
        if self.empty {
            return;
        }
        let mut point = Vec::with_capacity(self.dim);
        self.walk(0, m as i128, &mut point, &mut visit);
    }

    pub fn points(&self, m: u64) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        self.for_each_point(m, |p| out.push(LatticePoint(p.to_vec())));
        out
    }

    /// Number of lattice points in the `m`-th dilate. The last coordinate is
    /// counted by interval length rather than visited.
    pub fn count(&self, m: u64) -> u64 {
        if self.empty {
            return 0;
        }
        if self.dim == 0 {
            return 1;
        }
        self.count_from(0, m as i128, &mut Vec::with_capacity(self.dim))
    }
}

/// All integer points of a bounded polyhedron, in lexicographic order.
pub fn enumerate_lattice_points(q: &MixedPolyhedron) -> Result<Vec<LatticePoint>, PolyError> {
    Ok(LatticeEnumerator::new(q)?.points(1))
}

pub fn count_lattice_points(q: &MixedPolyhedron) -> Result<u64, PolyError> {
    Ok(LatticeEnumerator::new(q)?.count(1))
}
