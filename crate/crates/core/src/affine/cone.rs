use std::fmt;

use super::AffineError;
use crate::polyhedra::{Comparison, LinearConstraint, MixedPolyhedron};
use crate::rational::{format_rational, int, rank, RatVector, Rational};

/// A pointed rational polyhedral cone `{x : λ_i · x ≥ 0 for all i}`.
///
/// Generators are kept for constructions and tests; they are checked to lie
/// in the cone but are not required to generate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    normals: Vec<RatVector>,
    generators: Vec<Vec<i64>>,
    polyhedron: MixedPolyhedron,
}

impl Cone {
    pub fn new(normals: Vec<RatVector>, generators: Vec<Vec<i64>>) -> Result<Self, AffineError> {
        let dim = normals.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(AffineError::Invalid("a cone needs at least one facet normal".into()));
        }
        for v in normals.iter().map(Vec::len).chain(generators.iter().map(Vec::len)) {
            if v != dim {
                return Err(AffineError::DimensionMismatch { expected: dim, found: v });
            }
        }
        if rank(&normals) < dim {
            return Err(AffineError::NotPointed);
        }
        let mut polyhedron = MixedPolyhedron::new(dim);
        for n in &normals {
            polyhedron.add(n, Comparison::Ge, &int(0))?;
        }
        for (index, g) in generators.iter().enumerate() {
            if g.iter().all(|&x| x == 0) || !polyhedron.contains_lattice_point(g) {
                return Err(AffineError::GeneratorOutsideCone { index });
            }
        }
        Ok(Cone { dim, normals, generators, polyhedron })
    }

    /// `{x ∈ ℝ^d : x ≥ 0}` with the unit vectors as generators.
    pub fn orthant(dim: usize) -> Self {
        let unit = |i: usize| (0..dim).map(|j| (i == j) as i64).collect::<Vec<i64>>();
        let normals = (0..dim).map(|i| unit(i).into_iter().map(int).collect()).collect();
        Cone::new(normals, (0..dim).map(unit).collect()).expect("the orthant is a pointed cone")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[RatVector] {
        &self.normals
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// The facet inequalities as a polyhedron in `ℝ^d`.
    pub fn polyhedron(&self) -> &MixedPolyhedron {
        &self.polyhedron
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.polyhedron.contains(x)
    }

    pub fn contains_lattice_point(&self, x: &[i64]) -> bool {
        self.polyhedron.contains_lattice_point(x)
    }

    /// Whether every nonzero point of the cone is lexicographically positive,
    /// decided by ruling out `x_1 = … = x_{t-1} = 0, x_t < 0` for each `t`.
    pub fn is_lex_positive(&self) -> bool {
        (0..self.dim).all(|t| {
            let mut q = self.polyhedron.clone();
            for s in 0..=t {
                let row: Vec<i64> = (0..self.dim).map(|j| (j == s) as i64).collect();
                let cmp = if s < t { Comparison::Eq } else { Comparison::Lt };
                q.add_int(&row, cmp, 0).expect("row has the cone's dimension");
            }
            !q.is_feasible()
        })
    }

    /// The facet inequalities, normalized as `≤` rows.
    pub(crate) fn facet_rows(&self) -> &[LinearConstraint] {
        self.polyhedron.constraints()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let normals: Vec<String> = self
            .normals
            .iter()
            .map(|n| format!("[{}]", n.iter().map(format_rational).collect::<Vec<_>>().join(",")))
            .collect();
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("[{}]", g.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "normals [{}] generators [{}]", normals.join(","), gens.join(","))
    }
}
