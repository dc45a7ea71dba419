//! Relative-cohomology fingerprints of one-parameter bifurcations, the
//! shipped catalog of canonical systems, and conjugacy transforms.

mod invariance;
mod transform;

use serde::{Deserialize, Serialize};

pub use invariance::{invariance, invariance_for_config, DimSummary, InvarianceReport, RelativeDims, System};
pub use transform::{conjugacy_transform, ConjugacyTransform, TransformedSystem};

use crate::dynamics::field::ParamField;
use crate::error::{Error, Result};
use crate::rings::Functor;
use crate::sheaf::{detect_bifurcations, Analysis, ParamSubset, SheafOptions, Topology};

pub const UNCLASSIFIED: &str = "unclassified";

const CATALOG_JSON: &str = include_str!("../../data/catalog.json");

/// `[H^0, H^1]` on a window around one bifurcation value, absolute and
/// relative to rays starting half a window below and above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorPrint {
    pub absolute: [usize; 2],
    pub right_ray_below: [usize; 2],
    pub right_ray_above: [usize; 2],
    pub left_ray_below: [usize; 2],
    pub left_ray_above: [usize; 2],
}

impl FunctorPrint {
    /// The print of the same system with the parameter direction reversed.
    pub fn reflected(&self) -> Self {
        Self {
            absolute: self.absolute,
            right_ray_below: self.left_ray_above,
            right_ray_above: self.left_ray_below,
            left_ray_below: self.right_ray_above,
            left_ray_above: self.right_ray_below,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fingerprint {
    pub boolean: FunctorPrint,
    pub free: FunctorPrint,
}

impl Fingerprint {
    pub fn reflected(&self) -> Self {
        Self {
            boolean: self.boolean.reflected(),
            free: self.free.reflected(),
        }
    }

    pub fn get(&self, functor: Functor) -> &FunctorPrint {
        match functor {
            Functor::Boolean => &self.boolean,
            Functor::Free => &self.free,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub system: ParamField,
    pub lambda0: f64,
    pub window: f64,
    pub fingerprint: Fingerprint,
}

/// Local classes of all bifurcations on a range plus the global dims.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pattern {
    /// Sorted class names.
    pub local: Vec<String>,
    pub boolean: [usize; 2],
    pub free: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternEntry {
    pub name: String,
    pub system: ParamField,
    pub range: (f64, f64),
    pub pattern: Pattern,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub local: Vec<CatalogEntry>,
    pub patterns: Vec<PatternEntry>,
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_json(CATALOG_JSON).expect("shipped catalog parses")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Catalog = serde_json::from_str(s).map_err(|e| Error::InvalidConfig(format!("catalog: {e}")))?;
        for e in &c.local {
            e.system.validate()?;
        }
        for p in &c.patterns {
            p.system.validate()?;
        }
        Ok(c)
    }

    /// The entry matching `fp`, trying the print as given before its
    /// reflection.
    ///
    /// Entries match on the lattice-ring ray groups and `H^1`; an extra
    /// attractor that persists through the bifurcation adds a constant
    /// summand, which shifts `H^0` and the monoid-ring print but leaves
    /// those unchanged. `exact` reports whether the whole print agrees.
    pub fn match_local(&self, fp: &Fingerprint) -> Option<LocalMatch<'_>> {
        let key = |p: &Fingerprint| {
            let b = &p.boolean;
            (
                b.absolute[1],
                b.right_ray_below,
                b.right_ray_above,
                b.left_ray_below,
                b.left_ray_above,
            )
        };
        let r = fp.reflected();
        for (probe, reflected) in [(fp, false), (&r, true)] {
            if let Some(e) = self.local.iter().find(|e| key(&e.fingerprint) == key(probe)) {
                return Some(LocalMatch {
                    name: &e.name,
                    reflected,
                    exact: e.fingerprint == *probe,
                });
            }
        }
        None
    }

    pub fn match_pattern(&self, p: &Pattern) -> Option<&str> {
        self.patterns.iter().find(|e| e.pattern == *p).map(|e| e.name.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalMatch<'a> {
    pub name: &'a str,
    pub reflected: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    /// The value asked about.
    pub lambda0: f64,
    /// The detected bifurcation value the fingerprint was taken at.
    pub lambda: f64,
    pub window: f64,
    pub name: String,
    /// Whether the match needed the parameter direction reversed.
    pub reflected: bool,
    /// Whether the whole fingerprint equals the catalog entry's.
    pub exact: bool,
    pub fingerprint: Fingerprint,
}

impl Classification {
    pub fn is_classified(&self) -> bool {
        self.name != UNCLASSIFIED
    }
}

/// The bifurcation value detected within one grid cell of `lambda0` on
/// `[lambda0 - window, lambda0 + window]`, which must be the only one there.
pub fn locate_bifurcation(
    field: &ParamField,
    lambda0: f64,
    window: f64,
    pinned: &[f64],
    opts: &SheafOptions,
) -> Result<f64> {
    if !(window.is_finite() && window > 0.0 && lambda0.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "window {window} around {lambda0} is not usable"
        )));
    }
    let (lo, hi) = (lambda0 - window, lambda0 + window);
    let pinned: Vec<f64> = pinned.iter().copied().filter(|p| lo < *p && *p < hi).collect();
    let det = detect_bifurcations(field, Topology::Line, (lo, hi), &pinned, opts)?;
    let values = det.values();
    let cell = 2.0 * window / (opts.grid.max(2) - 1) as f64;
    let near = values
        .iter()
        .copied()
        .filter(|v| (v - lambda0).abs() <= cell.max(opts.resolution()))
        .min_by(|a, b| (a - lambda0).abs().total_cmp(&(b - lambda0).abs()));
    let Some(lambda) = near else {
        return Err(Error::NoBifurcation {
            lambda: lambda0,
            lo,
            hi,
        });
    };
    if let Some(&other) = values.iter().find(|&&v| v != lambda) {
        return Err(Error::WindowNotIsolated { lo, hi, other });
    }
    Ok(lambda)
}

/// Absolute and ray-relative dims of both functors around the bifurcation
/// nearest `lambda0`.
pub fn fingerprint(
    field: &ParamField,
    lambda0: f64,
    window: f64,
    pinned: &[f64],
    opts: &SheafOptions,
) -> Result<(f64, Fingerprint)> {
    let lambda = locate_bifurcation(field, lambda0, window, pinned, opts)?;
    let (lo, hi) = (lambda0 - window, lambda0 + window);
    let pinned: Vec<f64> = pinned.iter().copied().filter(|p| lo < *p && *p < hi).collect();
    let (below, above) = (lambda - 0.5 * window, lambda + 0.5 * window);
    let a = Analysis::run(field, Topology::Line, (lo, hi), &pinned, &[below, above], opts)?;
    let print = |functor: Functor| -> Result<FunctorPrint> {
        let abs = a.cohomology(functor)?;
        let rel = |s: ParamSubset| -> Result<[usize; 2]> {
            let r = a.relative(functor, &s)?;
            Ok([r.result.h0, r.result.h1])
        };
        Ok(FunctorPrint {
            absolute: [abs.h0, abs.h1],
            right_ray_below: rel(ParamSubset::right_ray(below))?,
            right_ray_above: rel(ParamSubset::right_ray(above))?,
            left_ray_below: rel(ParamSubset::left_ray(below))?,
            left_ray_above: rel(ParamSubset::left_ray(above))?,
        })
    };
    Ok((
        lambda,
        Fingerprint {
            boolean: print(Functor::Boolean)?,
            free: print(Functor::Free)?,
        },
    ))
}

/// Classifies the bifurcation near `lambda0` against `catalog`.
pub fn classify_with(
    catalog: &Catalog,
    field: &ParamField,
    lambda0: f64,
    window: f64,
    pinned: &[f64],
    opts: &SheafOptions,
) -> Result<Classification> {
    let (lambda, fp) = fingerprint(field, lambda0, window, pinned, opts)?;
    let (name, reflected, exact) = match catalog.match_local(&fp) {
        Some(m) => (m.name.to_string(), m.reflected, m.exact),
        None => (UNCLASSIFIED.to_string(), false, false),
    };
    Ok(Classification {
        lambda0,
        lambda,
        window,
        name,
        reflected,
        exact,
        fingerprint: fp,
    })
}

/// Classifies the bifurcation near `lambda0` against the shipped catalog.
pub fn classify_bifurcation(
    field: &ParamField,
    lambda0: f64,
    window: f64,
    pinned: &[f64],
    opts: &SheafOptions,
) -> Result<Classification> {
    classify_with(&Catalog::builtin(), field, lambda0, window, pinned, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternMatch {
    pub name: String,
    pub pattern: Pattern,
    pub locals: Vec<Classification>,
}

/// The largest window around each value that stays clear of its
/// neighbours and, off the circle, of the range ends.
pub fn isolating_windows(values: &[f64], topology: Topology, range: (f64, f64)) -> Vec<f64> {
    let period = (topology == Topology::Circle).then_some(range.1 - range.0);
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut gap = f64::INFINITY;
            for (j, &w) in values.iter().enumerate() {
                if i != j {
                    let d = match period {
                        Some(p) => {
                            let d = (v - w).rem_euclid(p);
                            d.min(p - d)
                        }
                        None => (v - w).abs(),
                    };
                    gap = gap.min(d);
                }
            }
            match period {
                Some(p) => gap = gap.min(0.5 * p),
                None => gap = gap.min(v - range.0).min(range.1 - v),
            }
            0.5 * gap
        })
        .collect()
}

/// Classifies every bifurcation on `range` and the global pattern.
pub fn classify_pattern_with(
    catalog: &Catalog,
    analysis: &Analysis,
    topology: Topology,
    range: (f64, f64),
    pinned: &[f64],
) -> Result<PatternMatch> {
    let values = analysis.detection.values();
    let windows = isolating_windows(&values, topology, range);
    let locals = values
        .iter()
        .zip(&windows)
        .map(|(&v, &w)| classify_with(catalog, &analysis.field, v, w, pinned, &analysis.options))
        .collect::<Result<Vec<_>>>()?;
    let mut names: Vec<String> = locals.iter().map(|c| c.name.clone()).collect();
    names.sort();
    let dims = |f: Functor| -> Result<[usize; 2]> {
        let c = analysis.cohomology(f)?;
        Ok([c.h0, c.h1])
    };
    let pattern = Pattern {
        local: names,
        boolean: dims(Functor::Boolean)?,
        free: dims(Functor::Free)?,
    };
    let name = catalog.match_pattern(&pattern).unwrap_or(UNCLASSIFIED).to_string();
    Ok(PatternMatch { name, pattern, locals })
}

pub fn classify_pattern(
    field: &ParamField,
    topology: Topology,
    range: (f64, f64),
    pinned: &[f64],
    opts: &SheafOptions,
) -> Result<PatternMatch> {
    let a = Analysis::run(field, topology, range, pinned, &[], opts)?;
    classify_pattern_with(&Catalog::builtin(), &a, topology, range, pinned)
}
