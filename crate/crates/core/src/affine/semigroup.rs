use serde::{Deserialize, Serialize};

use super::{AffineError, Cone, WindowPolytope};
use crate::numsemi::AdditionTable;
use crate::polyhedra::MixedPolyhedron;

/// The nonzero elements of a cone semigroup inside `α · P`, in strictly
/// increasing lexicographic order. Every lattice point of the cone outside
/// `α · P` is implicitly a member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineSemigroup {
    pub alpha: u64,
    pub elements: Vec<Vec<i64>>,
}

impl AffineSemigroup {
    /// The lattice point `(x_1, …, x_n)` in `ℝ^{dn}`.
    pub fn encode(&self) -> Vec<i64> {
        self.elements.concat()
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Splits a point of `ℝ^{dn}` into its elements and checks that they are the
/// nonzero window elements of a semigroup: in the cone, in `α · P`, strictly
/// lex-increasing, and closed under sums that stay in `α · P`.
pub fn decode_affine(
    point: &[i64],
    cone: &Cone,
    window: &WindowPolytope,
    alpha: u64,
) -> Result<AffineSemigroup, AffineError> {
    let d = cone.dim();
    if d == 0 || !point.len().is_multiple_of(d) {
        return Err(AffineError::DimensionMismatch { expected: d, found: point.len() });
    }
    let dilated = window.base().dilate_int(alpha)?;
    let elements: Vec<Vec<i64>> = point.chunks(d).map(<[i64]>::to_vec).collect();
    for x in &elements {
        if x.iter().all(|&c| c == 0) || !cone.contains_lattice_point(x) || !dilated.contains_lattice_point(x) {
            return Err(AffineError::BadElement(x.clone()));
        }
    }
    if elements.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AffineError::NotLexSorted);
    }
    check_closure(&elements, &dilated)?;
    Ok(AffineSemigroup { alpha, elements })
}

fn check_closure(elements: &[Vec<i64>], dilated: &MixedPolyhedron) -> Result<(), AffineError> {
    for (i, a) in elements.iter().enumerate() {
        for b in &elements[i..] {
            let s = add(a, b);
            if dilated.contains_lattice_point(&s) && elements.binary_search(&s).is_err() {
                return Err(AffineError::ClosureViolation { a: a.clone(), b: b.clone() });
            }
        }
    }
    Ok(())
}

/// The table of `s` in `α · P`: `τ(i, j) = k` when `x_i + x_j = x_k`, and `∞`
/// when the sum leaves the window.
pub fn affine_addition_table(s: &AffineSemigroup, window: &WindowPolytope) -> Result<AdditionTable, AffineError> {
    let dilated = window.base().dilate_int(s.alpha)?;
    check_closure(&s.elements, &dilated)?;
    let mut finite = Vec::new();
    for (i, a) in s.elements.iter().enumerate() {
        for (j, b) in s.elements.iter().enumerate().skip(i) {
            if let Ok(k) = s.elements.binary_search(&add(a, b)) {
                finite.push((i + 1, j + 1, k + 1));
            }
        }
    }
    AdditionTable::from_finite(s.n(), &finite).map_err(|e| AffineError::InvalidTable(e.to_string()))
}

/// Every semigroup with exactly `n` nonzero elements in `α · P`, by search
/// over lex-increasing subsets of the window's lattice points.
pub fn enumerate_affine_oracle(
    cone: &Cone,
    window: &WindowPolytope,
    n: usize,
    alpha: u64,
) -> Result<Vec<AffineSemigroup>, AffineError> {
    let dilated = window.base().dilate_int(alpha)?;
    let points: Vec<Vec<i64>> = window
        .lattice_points(alpha)?
        .into_iter()
        .filter(|x| x.iter().any(|&c| c != 0) && cone.contains_lattice_point(x))
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    search(&points, &dilated, n, 0, &mut chosen, &mut |idx| {
        let elements: Vec<Vec<i64>> = idx.iter().map(|&i| points[i].clone()).collect();
        if check_closure(&elements, &dilated).is_ok() {
            out.push(AffineSemigroup { alpha, elements });
        }
    });
    out.sort();
    Ok(out)
}

fn search(
    points: &[Vec<i64>],
    dilated: &MixedPolyhedron,
    n: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if chosen.len() == n {
        emit(chosen);
        return;
    }
    for i in from..points.len() {
        // a sum that stays in the window and is lex-smaller than x can no
        // longer be added, so it must already be chosen
        let x = &points[i];
        let doubles_back = chosen.iter().map(|&c| &points[c]).chain(std::iter::once(x)).any(|y| {
            let s = add(x, y);
            s < *x && dilated.contains_lattice_point(&s) && !chosen.iter().any(|&c| points[c] == s)
        });
        if doubles_back {
            continue;
        }
        chosen.push(i);
        search(points, dilated, n, i + 1, chosen, emit);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn simplex() -> (Cone, WindowPolytope) {
        let q = Cone::orthant(2);
        let w = WindowPolytope::halfspace(&q, &[int(1), int(1)]).unwrap();
        (q, w)
    }

    #[test]
    fn decoding() {
        let (q, w) = simplex();
        let s = decode_affine(&[1, 1], &q, &w, 2).unwrap();
        assert_eq!(s.elements, vec![vec![1, 1]]);
        assert_eq!(s.encode(), vec![1, 1]);
        let s = decode_affine(&[0, 2, 2, 0], &q, &w, 2).unwrap();
        assert_eq!(affine_addition_table(&s, &w).unwrap(), AdditionTable::all_infinite(2));
        assert_eq!(
            decode_affine(&[1, 0], &q, &w, 2),
            Err(AffineError::ClosureViolation { a: vec![1, 0], b: vec![1, 0] })
        );
        assert_eq!(decode_affine(&[2, 0, 0, 2], &q, &w, 2), Err(AffineError::NotLexSorted));
        assert_eq!(decode_affine(&[0, 0], &q, &w, 2), Err(AffineError::BadElement(vec![0, 0])));
    }

    #[test]
    fn oracle_small_cases() {
        let (q, w) = simplex();
        let one = enumerate_affine_oracle(&q, &w, 1, 1).unwrap();
        assert_eq!(one.iter().map(|s| s.elements.clone()).collect::<Vec<_>>(), vec![vec![vec![0, 1]], vec![vec![1, 0]]]);
        assert_eq!(enumerate_affine_oracle(&q, &w, 1, 2).unwrap().len(), 3);
        assert_eq!(enumerate_affine_oracle(&q, &w, 1, 3).unwrap().len(), 7);
    }

    #[test]
    fn oracle_pruning_matches_plain_filter() {
        let (q, w) = simplex();
        for alpha in 1..=5 {
            let dilated = w.base().dilate_int(alpha).unwrap();
            let pts: Vec<Vec<i64>> =
                w.lattice_points(alpha).unwrap().into_iter().filter(|x| x.iter().any(|&c| c != 0)).collect();
            let mut plain = 0;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    plain += check_closure(&[pts[i].clone(), pts[j].clone()], &dilated).is_ok() as usize;
                }
            }
            assert_eq!(enumerate_affine_oracle(&q, &w, 2, alpha).unwrap().len(), plain);
        }
    }

    #[test]
    fn json() {
        let s = AffineSemigroup { alpha: 2, elements: vec![vec![0, 2], vec![2, 0]] };
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"alpha":2,"elements":[[0,2],[2,0]]}"#);
        assert_eq!(serde_json::from_str::<AffineSemigroup>(&js).unwrap(), s);
    }
}
