use num_traits::Zero;

use crate::rational::Rational;

/// Dense polynomial coefficients, constant term first, trailing zeros trimmed.
pub type Coefficients = Vec<Rational>;

pub fn trim(mut c: Coefficients) -> Coefficients {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

pub fn evaluate(c: &[Rational], x: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
}

/// The unique polynomial of degree `< xs.len()` through the given points,
/// via Newton divided differences.
pub fn interpolate(xs: &[i64], ys: &[Rational]) -> Coefficients {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let denom = Rational::from_integer((xs[i] - xs[i - j]).into());
            dd[i] = (&dd[i] - &dd[i - 1]) / denom;
        }
    }
    let mut poly: Coefficients = Vec::new();
    for k in (0..n).rev() {
        // poly = poly * (x - xs[k]) + dd[k]
        let a = Rational::from_integer(xs[k].into());
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &a;
        }
        next[0] += &dd[k];
        poly = next;
    }
    trim(poly)
}

/// `p(-x)`.
pub fn reflect(c: &[Rational]) -> Coefficients {
    c.iter().enumerate().map(|(i, a)| if i % 2 == 1 { -a.clone() } else { a.clone() }).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Coefficients {
    let len = a.len().max(b.len());
    let zero = Rational::zero();
    trim((0..len).map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn interpolates_quadratic() {
        // f^2/8 - 14f/24 through residue-0 points of N(2, f)
        let xs = [6, 12, 18];
        let target = |x: i64| rat(x * x, 8) - rat(14 * x, 24);
        let ys: Vec<Rational> = xs.iter().map(|&x| target(x)).collect();
        let p = interpolate(&xs, &ys);
        assert_eq!(p, vec![int(0), rat(-7, 12), rat(1, 8)]);
        assert_eq!(evaluate(&p, &int(24)), target(24));
    }

    #[test]
    fn constant_and_zero() {
        assert_eq!(interpolate(&[3], &[int(5)]), vec![int(5)]);
        assert!(interpolate(&[1, 2], &[int(0), int(0)]).is_empty());
    }

    #[test]
    fn reflect_and_add() {
        let p = vec![int(1), int(2), int(3)];
        assert_eq!(evaluate(&reflect(&p), &int(2)), evaluate(&p, &int(-2)));
        assert_eq!(add(&p, &[int(-1), int(-2), int(-3)]), Vec::<Rational>::new());
    }
}
