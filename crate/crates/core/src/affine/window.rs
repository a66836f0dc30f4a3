use num_traits::{Signed, Zero};

use super::{AffineError, Cone};
use crate::polyhedra::{Comparison, LatticeEnumerator, MixedPolyhedron, Relation};
use crate::rational::{int, RatVector, Rational};

/// How a window polytope was built. The first two constructions are
/// compatible with their cone by construction; `Raw` windows are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    ShiftedCone { apex: RatVector, outer: Cone },
    Halfspace { normal: RatVector },
    Raw,
}

/// A closed bounded polytope inside a cone that contains a neighborhood of
/// the origin in the cone; the gaps of a semigroup must lie in its dilate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPolytope {
    base: MixedPolyhedron,
    provenance: Provenance,
}

impl WindowPolytope {
    pub fn base(&self) -> &MixedPolyhedron {
        &self.base
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Number of closed constraints `ℓ`.
    pub fn num_constraints(&self) -> usize {
        self.base.constraints().len()
    }

    fn checked(cone: &Cone, base: MixedPolyhedron, provenance: Provenance) -> Result<Self, AffineError> {
        if base.dim() != cone.dim() {
            return Err(AffineError::DimensionMismatch { expected: cone.dim(), found: base.dim() });
        }
        for (index, c) in base.constraints().iter().enumerate() {
            if c.relation() != Relation::Le {
                return Err(AffineError::Invalid(format!("window constraint {index} is not a closed inequality")));
            }
            let strict_at_origin = c.rhs().is_positive();
            if !strict_at_origin && !(c.rhs().is_zero() && cone.facet_rows().contains(c)) {
                return Err(AffineError::NoOriginNeighborhood { constraint: index });
            }
        }
        if base.is_trivially_empty() {
            return Err(AffineError::NoOriginNeighborhood { constraint: 0 });
        }
        if !base.is_bounded() {
            return Err(AffineError::UnboundedWindow);
        }
        Ok(WindowPolytope { base, provenance })
    }

    /// `(v - outer) ∩ cone`, where `outer` contains `cone`.
    pub fn shifted_cone(cone: &Cone, outer: &Cone, v: &[Rational]) -> Result<Self, AffineError> {
        if outer.dim() != cone.dim() || v.len() != cone.dim() {
            return Err(AffineError::DimensionMismatch { expected: cone.dim(), found: v.len().min(outer.dim()) });
        }
        if !cone.contains(v) || v.iter().all(Zero::is_zero) {
            return Err(AffineError::ApexOutsideCone);
        }
        if cone.generators().iter().any(|g| !outer.contains_lattice_point(g)) {
            return Err(AffineError::OuterDoesNotContainCone);
        }
        let mut base = cone.polyhedron().clone();
        for lambda in outer.normals() {
            // λ·(v - x) ≥ 0
            let rhs: Rational = lambda.iter().zip(v).map(|(a, b)| a * b).sum();
            base.add(lambda, Comparison::Le, &rhs)?;
        }
        Self::checked(cone, base, Provenance::ShiftedCone { apex: v.to_vec(), outer: outer.clone() })
    }

    /// `cone ∩ {w · x ≤ 1}`; `w` must be positive on every generator.
    pub fn halfspace(cone: &Cone, w: &[Rational]) -> Result<Self, AffineError> {
        if w.len() != cone.dim() {
            return Err(AffineError::DimensionMismatch { expected: cone.dim(), found: w.len() });
        }
        for (index, g) in cone.generators().iter().enumerate() {
            let dot: Rational = w.iter().zip(g).map(|(a, &b)| a * int(b)).sum();
            if !dot.is_positive() {
                return Err(AffineError::NotPositiveOnGenerator { index });
            }
        }
        let mut base = cone.polyhedron().clone();
        base.add(w, Comparison::Le, &int(1))?;
        Self::checked(cone, base, Provenance::Halfspace { normal: w.to_vec() })
    }

    /// A window given by explicit constraints, intersected with the cone.
    /// Compatibility with the cone is not guaranteed; see
    /// [`compatibility_violation`].
    pub fn raw(cone: &Cone, constraints: &MixedPolyhedron) -> Result<Self, AffineError> {
        let base = cone.polyhedron().intersect(constraints)?;
        Self::checked(cone, base, Provenance::Raw)
    }

    /// Whether `x` lies in the `alpha`-dilate.
    pub fn contains_dilated(&self, alpha: u64, x: &[i64]) -> bool {
        self.base.dilate_int(alpha).is_ok_and(|q| q.contains_lattice_point(x))
    }

    /// Lattice points of `alpha · P`, lexicographically sorted.
    pub fn lattice_points(&self, alpha: u64) -> Result<Vec<Vec<i64>>, AffineError> {
        let e = LatticeEnumerator::new(&self.base)?;
        Ok(e.points(alpha).into_iter().map(|p| p.0).collect())
    }
}

/// Searches the box `[-3α, 3α]^d` for a lattice point `x ∈ cone ∖ αP` and a
/// generator `g` with `x + g ∈ αP`, which would break compatibility.
pub fn compatibility_violation(cone: &Cone, window: &WindowPolytope, alpha: u64) -> Option<(Vec<i64>, Vec<i64>)> {
    let dilated = window.base.dilate_int(alpha).ok()?;
    let r = 3 * alpha as i64;
    let d = cone.dim();
    let mut x = vec![-r; d];
    loop {
        if cone.contains_lattice_point(&x) && !dilated.contains_lattice_point(&x) {
            for g in cone.generators() {
                let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
                if dilated.contains_lattice_point(&y) {
                    return Some((x, g.clone()));
                }
            }
        }
        let mut i = 0;
        while i < d && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == d {
            return None;
        }
        x[i] += 1;
    }
}
