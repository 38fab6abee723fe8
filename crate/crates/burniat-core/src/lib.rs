//! Exact combinatorial verification of the toric side of Burniat-surface
//! moduli compactifications: integer lattices, relabeling symmetry groups,
//! simplicial fans of the degree 3, 4a, 4b and 5 cases, and the bookkeeping
//! of degenerate surface components.

pub mod cases;
pub mod degenerations;
pub mod fans;
pub mod groups;
pub mod lattice;
pub mod verify;

pub use cases::{BoundaryReport, CaseId, CaseSpec, DivisorType, FCurve};
pub use fans::{Cone, Fan, FanError, RayOrbits, RayType};
pub use groups::{CurveLabel, GroupElement, GroupError, GroupLabel, PermGroup};
pub use lattice::{Covector, IntMat, LatticeError, LatticeMap, LatticeVector, Sublattice};
