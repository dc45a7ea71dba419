//! Sheaves over a one-dimensional parameter complex and their cohomology.

mod analysis;
pub mod build;
pub mod cohomology;
pub mod complex;
pub mod detect;
pub mod sections;
pub mod subset;

pub use analysis::Analysis;
pub use build::{abelianize, build_lattice_sheaf, build_sheaf, AbelianSheafRep, LatticeSheaf, Restriction};
pub use cohomology::{
    cohomology, mayer_vietoris, relative_cohomology, CohomologyResult, MayerVietoris, RelativeCohomology,
};
pub use complex::{Edge, Incidence, ParamComplex, Side, Topology, Vertex};
pub use detect::{detect_bifurcations, Bifurcation, Detection, SignatureRegion};
pub use sections::{global_sections_direct, lattice_global_sections, monodromy, DirectSections, Monodromy};
pub use subset::{ParamSubset, SubsetPiece};

use crate::exec::Execution;

/// Numerical settings shared by detection and sheaf assembly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SheafOptions {
    pub tol_x: f64,
    pub tol_lambda: f64,
    /// Number of grid points used for detection.
    pub grid: usize,
    pub exec: Execution,
}

impl SheafOptions {
    /// Parameter distance below which two values count as the same point.
    ///
    /// Near a double root the field is `O(δ²)` at the critical point, so
    /// roots stay merged while `δ` is below roughly the square root of
    /// rounding; the constant floor covers that.
    pub fn resolution(&self) -> f64 {
        4.0 * self.tol_lambda + 100.0 * self.tol_x + 1e-6
    }
}

impl Default for SheafOptions {
    fn default() -> Self {
        Self {
            tol_x: 1e-9,
            tol_lambda: 1e-9,
            grid: 101,
            exec: Execution::default(),
        }
    }
}
