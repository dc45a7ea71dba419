//! Detection, complex and lattice sheaf for one system, computed together.

use super::build::{abelianize, build_lattice_sheaf, AbelianSheafRep, LatticeSheaf};
use super::cohomology::{
    cohomology, mayer_vietoris, relative_cohomology, CohomologyResult, MayerVietoris, RelativeCohomology,
};
use super::complex::{ParamComplex, Topology};
use super::detect::{detect_bifurcations, Detection};
use super::subset::ParamSubset;
use super::SheafOptions;
use crate::dynamics::field::ParamField;
use crate::error::Result;
use crate::rings::Functor;

#[derive(Clone, Debug)]
pub struct Analysis {
    pub field: ParamField,
    pub options: SheafOptions,
    pub detection: Detection,
    pub complex: ParamComplex,
    pub lattices: LatticeSheaf,
}

impl Analysis {
    /// Detects bifurcations on `range` and builds the lattice sheaf on the
    /// resulting complex, with `extra` refinement vertices.
    pub fn run(
        field: &ParamField,
        topology: Topology,
        range: (f64, f64),
        pinned: &[f64],
        extra: &[f64],
        options: &SheafOptions,
    ) -> Result<Self> {
        let detection = detect_bifurcations(field, topology, range, pinned, options)?;
        let complex =
            detection
                .complex(topology, range, options.tol_lambda)?
                .refined(extra, 0.0, options.resolution())?;
        let lattices = build_lattice_sheaf(field, &complex, options)?;
        Ok(Self {
            field: field.clone(),
            options: *options,
            detection,
            complex,
            lattices,
        })
    }

    /// The same analysis on a complex with extra refinement vertices.
    pub fn refined(&self, extra: &[f64]) -> Result<Self> {
        let complex = self.complex.refined(extra, 0.0, self.options.resolution())?;
        if complex == self.complex {
            return Ok(self.clone());
        }
        let lattices = build_lattice_sheaf(&self.field, &complex, &self.options)?;
        Ok(Self {
            complex,
            lattices,
            ..self.clone()
        })
    }

    pub fn abelian(&self, functor: Functor) -> Result<AbelianSheafRep> {
        abelianize(&self.lattices, functor)
    }

    pub fn cohomology(&self, functor: Functor) -> Result<CohomologyResult> {
        cohomology(&self.abelian(functor)?)
    }

    /// Relative cohomology, refining the complex at the subset's endpoints.
    /// Endpoints within the resolution of a vertex are moved onto it.
    pub fn relative(&self, functor: Functor, sub: &ParamSubset) -> Result<RelativeCohomology> {
        let a = self.refined(&sub.endpoints())?;
        let snapped = a.snap_subset(sub);
        let mut r = relative_cohomology(&a.abelian(functor)?, &a.complex, &snapped)?;
        r.subset = sub.to_string();
        Ok(r)
    }

    pub fn mayer_vietoris(&self, functor: Functor, lo: f64, hi: f64) -> Result<MayerVietoris> {
        let a = self.refined(&[lo, hi])?;
        let snap = |x: f64| a.complex.snap(x, self.options.resolution()).unwrap_or(x);
        mayer_vietoris(&a.abelian(functor)?, &a.complex, snap(lo), snap(hi))
    }

    fn snap_subset(&self, sub: &ParamSubset) -> ParamSubset {
        let r = self.options.resolution();
        sub.map_endpoints(|x| self.complex.snap(x, r).unwrap_or(x))
    }
}
