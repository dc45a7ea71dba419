//! One-dimensional dynamics: portraits, attractor lattices, duality and continuation.

mod atoms;
pub mod attractors;
pub mod conley;
pub mod continuation;
pub mod field;
pub mod portrait;
pub mod region;
pub(crate) mod roots;

pub use attractors::{
    attractor_lattice, is_attracting_neighborhood, omega, oracle_attractor_lattice, AttractorLattice,
};
pub use conley::{conley_morse, dual_repeller, ConleyMorse};
pub use continuation::{continuation_hom, section_domain, SectionDomain};
pub use field::{EndpointMode, FieldExpr, ParamField, PhaseSpace, Poly, Slice, TrigTerm};
pub use portrait::{portrait, portrait_with, Parity, PhasePortrait, PointRole, PortraitOptions, PortraitPoint, Sign};
pub use region::{Interval, Region};
