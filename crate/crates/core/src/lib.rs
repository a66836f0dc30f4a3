//! Exact enumeration of numerical and affine semigroups through lattice points
//! of sporadic relation polytopes, with quasi-polynomial fitting of the counts.

pub mod polyhedra;
pub mod rational;
pub mod numsemi;
pub mod ehrhart;
pub mod affine;
pub mod verify;
