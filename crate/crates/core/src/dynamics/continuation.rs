//! Continuation of attractors between nearby parameter values.

use serde::Serialize;

use super::atoms::Atoms;
use super::attractors::{is_attracting_neighborhood, AttractorLattice};
use super::field::ParamField;
use super::portrait::portrait;
use super::region::Region;
use crate::error::{Error, Result};
use crate::lattice::LatticeHom;

const MARGINS: [f64; 2] = [0.5, 0.25];

/// `A ↦ ω_dst(U_A)` where `U_A` fattens `A` into the gaps around it.
///
/// Every fattened neighbourhood must still attract at `dst`, and two
/// different margins must give the same map.
pub fn continuation_hom(src: &AttractorLattice, dst: &AttractorLattice) -> Result<LatticeHom> {
    let fail = |reason: String| Error::Continuation {
        from: src.portrait.lambda,
        to: dst.portrait.lambda,
        reason,
    };
    let atoms = Atoms::new(&src.portrait)?;
    let dst_atoms = Atoms::new(&dst.portrait)?;
    let mut map = Vec::with_capacity(src.len());
    for (a, &set) in src.sets.iter().enumerate() {
        let mut image = None;
        for margin in MARGINS {
            let u = atoms.fatten(set, margin);
            if !is_attracting_neighborhood(&dst.portrait, &u) {
                return Err(fail(format!(
                    "neighbourhood {u} of {} does not attract",
                    src.lattice.label(a)
                )));
            }
            let w = dst_atoms.omega_spans(&dst_atoms.spans_of_region(&u));
            let e = dst
                .element_of_set(w)
                .ok_or_else(|| fail(format!("image of {} is not an attractor", src.lattice.label(a))))?;
            match image {
                None => image = Some(e),
                Some(prev) if prev != e => {
                    return Err(fail(format!("image of {} depends on the margin", src.lattice.label(a))))
                }
                _ => {}
            }
        }
        map.push(image.expect("two margins"));
    }
    LatticeHom::new(src.lattice.clone(), dst.lattice.clone(), map).map_err(|e| fail(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionDomain {
    /// Maximal parameter intervals on which `u` is an attracting neighbourhood.
    pub intervals: Vec<(f64, f64)>,
    /// Whether the number of components of `ω_λ(u)` stays fixed on each interval.
    pub constant_shape: bool,
}

/// Sampled domain `{λ : u is an attracting neighbourhood of φ^λ}`.
pub fn section_domain(
    field: &ParamField,
    u: &Region,
    range: (f64, f64),
    grid: usize,
    tol_x: f64,
    tol_lambda: f64,
) -> Result<SectionDomain> {
    let (lo, hi) = range;
    let grid = grid.max(2);
    let probe = |lambda: f64| -> Result<(bool, usize)> {
        let p = portrait(field, lambda, tol_x)?;
        let ok = is_attracting_neighborhood(&p, u);
        let atoms = Atoms::new(&p)?;
        let w = atoms.omega_spans(&atoms.spans_of_region(u));
        Ok((ok, atoms.runs(w).len()))
    };
    let lambdas: Vec<f64> = (0..grid)
        .map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64)
        .collect();
    let samples = lambdas.iter().map(|&l| probe(l)).collect::<Result<Vec<_>>>()?;

    let refine = |mut inside: f64, mut outside: f64| -> Result<f64> {
        while (outside - inside).abs() > tol_lambda {
            let mid = 0.5 * (inside + outside);
            if probe(mid)?.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(inside)
    };

    let mut intervals = Vec::new();
    let mut constant_shape = true;
    let mut i = 0;
    while i < grid {
        if !samples[i].0 {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < grid && samples[i + 1].0 {
            i += 1;
        }
        let shape = samples[start].1;
        constant_shape &= samples[start..=i].iter().all(|s| s.1 == shape);
        let a = if start == 0 {
            lo
        } else {
            refine(lambdas[start], lambdas[start - 1])?
        };
        let b = if i + 1 == grid {
            hi
        } else {
            refine(lambdas[i], lambdas[i + 1])?
        };
        intervals.push((a, b));
        i += 1;
    }
    Ok(SectionDomain {
        intervals,
        constant_shape,
    })
}
