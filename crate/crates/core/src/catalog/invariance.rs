//! Side-by-side dims of a system and a conjugate copy.

use std::collections::BTreeMap;

use serde::Serialize;

use super::transform::{conjugacy_transform, ConjugacyTransform};
use super::{classify_pattern_with, Catalog};
use crate::config::AnalysisConfig;
use crate::dynamics::field::ParamField;
use crate::error::Result;
use crate::rings::Functor;
use crate::sheaf::{Analysis, ParamSubset, SheafOptions, Topology};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeDims {
    pub subset: String,
    pub functor: Functor,
    pub dims: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimSummary {
    pub bifurcations: usize,
    pub absolute: BTreeMap<Functor, [usize; 3]>,
    pub relative: Vec<RelativeDims>,
    /// Sorted local class names.
    pub classes: Vec<String>,
}

impl DimSummary {
    /// Equal up to subset labels, which move with the reparametrization.
    fn same_dims(&self, other: &DimSummary) -> bool {
        self.bifurcations == other.bifurcations
            && self.absolute == other.absolute
            && self.classes == other.classes
            && self.relative.len() == other.relative.len()
            && self
                .relative
                .iter()
                .zip(&other.relative)
                .all(|(a, b)| a.functor == b.functor && a.dims == b.dims)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub transform: String,
    pub range: (f64, f64),
    pub original: DimSummary,
    pub transformed: DimSummary,
    pub invariant: bool,
}

pub struct System<'a> {
    pub field: &'a ParamField,
    pub topology: Topology,
    pub range: (f64, f64),
    pub pinned: &'a [f64],
    pub relative: &'a [ParamSubset],
    pub functors: &'a [Functor],
}

fn summarize(s: &System<'_>, relative: &[ParamSubset], opts: &SheafOptions, catalog: &Catalog) -> Result<DimSummary> {
    let a = Analysis::run(s.field, s.topology, s.range, s.pinned, &[], opts)?;
    let mut absolute = BTreeMap::new();
    let mut rel = Vec::new();
    for &f in s.functors {
        absolute.insert(f, a.cohomology(f)?.dims());
        for sub in relative {
            rel.push(RelativeDims {
                subset: sub.to_string(),
                functor: f,
                dims: a.relative(f, sub)?.result.dims(),
            });
        }
    }
    let classes = if s.topology == Topology::Circle || a.detection.bifurcations.is_empty() {
        Vec::new()
    } else {
        classify_pattern_with(catalog, &a, s.topology, s.range, s.pinned)?
            .pattern
            .local
    };
    Ok(DimSummary {
        bifurcations: a.detection.bifurcations.len(),
        absolute,
        relative: rel,
        classes,
    })
}

/// Computes every dim for `s` and for its image under `t`, with the
/// relative subsets carried along by the reparametrization.
pub fn invariance(s: &System<'_>, t: &ConjugacyTransform, opts: &SheafOptions) -> Result<InvarianceReport> {
    let catalog = Catalog::builtin();
    let ts = conjugacy_transform(s.field, t, s.topology, s.range, s.pinned)?;
    let pulled = s
        .relative
        .iter()
        .map(|sub| t.pull_subset(sub))
        .collect::<Result<Vec<_>>>()?;
    let original = summarize(s, s.relative, opts, &catalog)?;
    let image = System {
        field: &ts.field,
        topology: ts.topology,
        range: ts.range,
        pinned: &ts.pinned,
        relative: &pulled,
        functors: s.functors,
    };
    let transformed = summarize(&image, &pulled, opts, &catalog)?;
    Ok(InvarianceReport {
        transform: t.to_string(),
        range: ts.range,
        invariant: original.same_dims(&transformed),
        original,
        transformed,
    })
}

pub fn invariance_for_config(
    config: &AnalysisConfig,
    t: &ConjugacyTransform,
    opts: &SheafOptions,
) -> Result<InvarianceReport> {
    let p = &config.parameter;
    invariance(
        &System {
            field: &config.system,
            topology: p.topology,
            range: p.range,
            pinned: &p.pinned,
            relative: &config.relative,
            functors: &config.functors,
        },
        t,
        opts,
    )
}
