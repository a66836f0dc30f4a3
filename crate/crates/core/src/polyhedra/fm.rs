use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{LinearConstraint, MixedPolyhedron, Relation};

/// Eliminates `coord`, returning a polyhedron over the remaining coordinates.
///
/// An equality involving `coord` is used as a substitution. Otherwise every
/// upper bound is paired with every lower bound; the combination is strict if
/// either parent is strict.
pub(super) fn eliminate(q: &MixedPolyhedron, coord: usize) -> MixedPolyhedron {
    let mut out = MixedPolyhedron::new(q.dim - 1);
    if q.empty {
        out.empty = true;
        return out;
    }
    let drop_coord = |coeffs: Vec<BigInt>| -> Vec<BigInt> {
        coeffs.into_iter().enumerate().filter(|&(i, _)| i != coord).map(|(_, c)| c).collect()
    };
    let push = |out: &mut MixedPolyhedron, coeffs: Vec<BigInt>, rel: Relation, rhs: BigInt| {
        out.add_row(drop_coord(coeffs), rel.into(), rhs).expect("projected row has matching dimension");
    };

    let pivot = q
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.relation() == Relation::Eq && !c.coefficients()[coord].is_zero())
        .min_by_key(|(_, c)| c.coefficients()[coord].abs())
        .map(|(i, _)| i);

    if let Some(p) = pivot {
        let eq = &q.constraints[p];
        let e = &eq.coefficients()[coord];
        let e_abs = e.abs();
        let e_sign = BigInt::from(if e.is_positive() { 1 } else { -1 });
        for (i, c) in q.constraints.iter().enumerate() {
            if i == p {
                continue;
            }
            let a = &c.coefficients()[coord];
            if a.is_zero() {
                push(&mut out, c.coefficients().to_vec(), c.relation(), c.rhs().clone());
                continue;
            }
            // row * |e| - (a * sign(e)) * eq cancels the coordinate
            let factor = a * &e_sign;
            let coeffs = c
                .coefficients()
                .iter()
                .zip(eq.coefficients())
                .map(|(x, y)| x * &e_abs - &factor * y)
                .collect();
            let rhs = c.rhs() * &e_abs - &factor * eq.rhs();
            push(&mut out, coeffs, c.relation(), rhs);
        }
        out.simplify();
        return out;
    }

    let mut upper: Vec<&LinearConstraint> = Vec::new();
    let mut lower: Vec<&LinearConstraint> = Vec::new();
    for c in &q.constraints {
        let a = &c.coefficients()[coord];
        if a.is_zero() {
            push(&mut out, c.coefficients().to_vec(), c.relation(), c.rhs().clone());
        } else if a.is_positive() {
            upper.push(c);
        } else {
            lower.push(c);
        }
    }
    for u in &upper {
        let a = &u.coefficients()[coord];
        for l in &lower {
            let b = -&l.coefficients()[coord];
            let coeffs = u
                .coefficients()
                .iter()
                .zip(l.coefficients())
                .map(|(x, y)| x * &b + y * a)
                .collect();
            let rhs = u.rhs() * &b + l.rhs() * a;
            let rel = if u.relation().is_strict() || l.relation().is_strict() { Relation::Lt } else { Relation::Le };
            push(&mut out, coeffs, rel, rhs);
        }
    }
    out.simplify();
    out
}

#[cfg(test)]
mod tests {
    use crate::polyhedra::{Comparison::*, MixedPolyhedron};
    use crate::rational::{int, rat};

    fn poly(dim: usize, rows: &[(&[i64], crate::polyhedra::Comparison, i64)]) -> MixedPolyhedron {
        let mut q = MixedPolyhedron::new(dim);
        for (c, cmp, r) in rows {
            q.add_int(c, *cmp, *r).unwrap();
        }
        q
    }

    #[test]
    fn project_order_chain() {
        let q = poly(2, &[(&[1, 0], Gt, 0), (&[1, -1], Lt, 0), (&[0, 1], Lt, 1)]);
        let p = q.fm_project(1).unwrap();
        assert_eq!(p.canonical(), poly(1, &[(&[1], Gt, 0), (&[1], Lt, 1)]).canonical());
    }

    #[test]
    fn project_through_equality() {
        let q = poly(2, &[(&[2, -1], Eq, 0), (&[3, 0], Gt, 1), (&[2, 0], Lt, 1)]);
        let p = q.fm_project(1).unwrap();
        assert!(p.contains(&[rat(2, 5)]));
        assert!(!p.contains(&[rat(1, 3)]));
        assert!(!p.contains(&[rat(1, 2)]));
        assert_eq!(p.canonical(), poly(1, &[(&[3], Gt, 1), (&[2], Lt, 1)]).canonical());
    }

    #[test]
    fn project_to_infeasible_zero_ary_system() {
        let q = poly(1, &[(&[1], Ge, 0), (&[1], Le, -1)]);
        let p = q.fm_project(0).unwrap();
        assert_eq!(p.dim(), 0);
        assert!(p.is_trivially_empty());
        assert!(!p.is_feasible());
    }

    #[test]
    fn strict_and_closed_combine_to_strict() {
        let touching = poly(1, &[(&[1], Ge, 1), (&[1], Lt, 1)]);
        assert!(touching.fm_project(0).unwrap().is_trivially_empty());
        let closed = poly(1, &[(&[1], Ge, 1), (&[1], Le, 1)]);
        assert!(!closed.fm_project(0).unwrap().is_trivially_empty());
        assert!(closed.contains(&[int(1)]));
    }

    #[test]
    fn out_of_range_coordinate() {
        assert!(MixedPolyhedron::new(2).fm_project(2).is_err());
    }
}
