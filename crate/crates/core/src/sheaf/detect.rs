//! Bifurcation detection by portrait-signature changes.

use serde::Serialize;

use super::complex::{ParamComplex, Topology, Vertex};
use super::SheafOptions;
use crate::dynamics::field::ParamField;
use crate::dynamics::portrait::portrait;
use crate::error::{Error, Result};

/// Slack for vertices whose value is known exactly.
pub const PINNED_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bifurcation {
    pub lambda: f64,
    pub pinned: bool,
    /// Signature of the portrait at the value itself.
    pub signature: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignatureRegion {
    pub lo: f64,
    pub hi: f64,
    pub signature: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Detection {
    pub bifurcations: Vec<Bifurcation>,
    pub regions: Vec<SignatureRegion>,
}

impl Detection {
    pub fn values(&self) -> Vec<f64> {
        self.bifurcations.iter().map(|b| b.lambda).collect()
    }

    /// Vertices for a parameter complex, with slack matched to how each
    /// value was obtained.
    pub fn vertices(&self, tol_lambda: f64) -> Vec<Vertex> {
        self.bifurcations
            .iter()
            .map(|b| Vertex {
                lambda: b.lambda,
                slack: if b.pinned { PINNED_SLACK } else { tol_lambda },
            })
            .collect()
    }

    pub fn complex(&self, topology: Topology, range: (f64, f64), tol_lambda: f64) -> Result<ParamComplex> {
        ParamComplex::new(topology, range, self.vertices(tol_lambda))
    }
}

fn signature(field: &ParamField, lambda: f64, tol_x: f64) -> Result<String> {
    Ok(portrait(field, lambda, tol_x)?.signature())
}

/// Change points between `a` and `b`, whose signatures differ.
fn changes(
    field: &ParamField,
    (a, sa): (f64, &str),
    (b, sb): (f64, &str),
    opts: &SheafOptions,
    out: &mut Vec<f64>,
) -> Result<()> {
    if b - a <= opts.tol_lambda {
        out.push(0.5 * (a + b));
        return Ok(());
    }
    let m = 0.5 * (a + b);
    let sm = match signature(field, m, opts.tol_x) {
        Ok(s) => s,
        // roots this close to the change point can sit below rounding
        Err(Error::RootResolution { .. }) if b - a <= opts.resolution() => {
            out.push(m);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    if sm != sa {
        changes(field, (a, sa), (m, &sm), opts, out)?;
    }
    if sm != sb {
        changes(field, (m, &sm), (b, sb), opts, out)?;
    }
    Ok(())
}

fn merge(sorted: &[f64], radius: f64) -> Vec<f64> {
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for &x in sorted {
        match groups.last_mut() {
            Some(g) if x - g[g.len() - 1] <= radius => g.push(x),
            _ => groups.push(vec![x]),
        }
    }
    groups.iter().map(|g| 0.5 * (g[0] + g[g.len() - 1])).collect()
}

/// Parameter values in `range` where the portrait signature changes.
///
/// Values within one grid cell of a `pinned` value are replaced by it; pinned
/// values with no detection nearby are ignored. On a circle the range is one
/// period.
pub fn detect_bifurcations(
    field: &ParamField,
    topology: Topology,
    range: (f64, f64),
    pinned: &[f64],
    opts: &SheafOptions,
) -> Result<Detection> {
    let (lo, hi) = range;
    if opts.grid < 2 {
        return Err(Error::InvalidConfig("grid needs at least two points".into()));
    }
    if !(lo < hi) {
        return Err(Error::InvalidConfig(format!("empty parameter range [{lo}, {hi}]")));
    }
    let n = opts.grid;
    let cell = (hi - lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + cell * i as f64 })
        .collect();
    let sigs = opts.exec.try_map(&grid, |&l| signature(field, l, opts.tol_x))?;

    let cells: Vec<usize> = (0..n - 1).filter(|&i| sigs[i] != sigs[i + 1]).collect();
    let per_cell = opts.exec.try_map(&cells, |&i| {
        let mut out = Vec::new();
        changes(field, (grid[i], &sigs[i]), (grid[i + 1], &sigs[i + 1]), opts, &mut out)?;
        Ok::<_, Error>(out)
    })?;

    let radius = opts.resolution();
    let mut found: Vec<f64> = Vec::new();
    for (&i, vals) in cells.iter().zip(&per_cell) {
        let merged = merge(vals, radius);
        if merged.len() > 1 {
            return Err(Error::BifurcationsTooDense {
                lo: grid[i],
                hi: grid[i + 1],
            });
        }
        found.extend(merged);
    }
    found.sort_by(f64::total_cmp);
    let mut values: Vec<f64> = merge(&found, radius)
        .into_iter()
        .map(|x| grid.iter().copied().find(|g| (g - x).abs() <= radius).unwrap_or(x))
        .collect();

    let period = (topology == Topology::Circle).then_some(hi - lo);
    if let Some(p) = period {
        for v in &mut values {
            *v = lo + (*v - lo).rem_euclid(p);
            if (*v - lo - p).abs() <= radius {
                *v = lo;
            }
        }
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| (*a - *b).abs() <= radius);
    } else if values.iter().any(|&v| v <= lo + radius || v >= hi - radius) {
        return Err(Error::InvalidConfig(format!(
            "a bifurcation lies at the edge of the range [{lo}, {hi}]; widen it"
        )));
    }

    let mut marked: Vec<(f64, bool)> = values.iter().map(|&v| (v, false)).collect();
    for &p in pinned {
        if let Some(slot) = marked.iter_mut().find(|(v, _)| (v - p).abs() <= cell) {
            *slot = (p, true);
        }
    }
    marked.sort_by(|a, b| a.0.total_cmp(&b.0));

    let bifurcations = marked
        .iter()
        .map(|&(lambda, pinned)| {
            let slack = if pinned { PINNED_SLACK } else { opts.tol_lambda };
            let p = crate::dynamics::portrait::portrait_with(
                field,
                lambda,
                crate::dynamics::portrait::PortraitOptions {
                    tol_x: opts.tol_x,
                    slack,
                },
            )?;
            Ok(Bifurcation {
                lambda,
                pinned,
                signature: p.signature(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let regions = signature_regions(field, range, period, &bifurcations, &grid, &sigs, opts)?;
    Ok(Detection { bifurcations, regions })
}

fn signature_regions(
    field: &ParamField,
    (lo, hi): (f64, f64),
    period: Option<f64>,
    bifs: &[Bifurcation],
    grid: &[f64],
    sigs: &[String],
    opts: &SheafOptions,
) -> Result<Vec<SignatureRegion>> {
    let mut bounds: Vec<(f64, f64)> = Vec::new();
    let vals: Vec<f64> = bifs.iter().map(|b| b.lambda).collect();
    match period {
        Some(p) if !vals.is_empty() => {
            for i in 0..vals.len() {
                let next = if i + 1 < vals.len() { vals[i + 1] } else { vals[0] + p };
                bounds.push((vals[i], next));
            }
        }
        _ => {
            let mut cuts = vec![lo];
            cuts.extend(&vals);
            cuts.push(hi);
            bounds.extend(cuts.windows(2).map(|w| (w[0], w[1])));
        }
    }
    let guard = 4.0 * opts.tol_lambda;
    let mut out = Vec::new();
    for (a, b) in bounds {
        let signature = signature(field, 0.5 * (a + b), opts.tol_x)?;
        let lift = |g: f64| match period {
            Some(p) if g < a => g + p,
            _ => g,
        };
        let inside = grid.iter().zip(sigs).filter(|(g, _)| {
            let g = lift(**g);
            g > a + guard && g < b - guard
        });
        for (g, s) in inside {
            if *s != signature {
                return Err(Error::BifurcationsTooDense {
                    lo: *g,
                    hi: 0.5 * (a + b),
                });
            }
        }
        out.push(SignatureRegion {
            lo: a,
            hi: b,
            signature,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SheafOptions {
        SheafOptions::default()
    }

    #[test]
    fn pitchfork_and_stable() {
        let f = ParamField::polynomial(vec![vec![0.0], vec![0.0, 1.0], vec![0.0], vec![-1.0]]);
        let d = detect_bifurcations(&f, Topology::Line, (-2.0, 2.0), &[], &opts()).unwrap();
        assert_eq!(d.values().len(), 1);
        assert!(d.values()[0].abs() <= 1e-9);
        assert_eq!(d.regions.len(), 2);

        let stable = ParamField::polynomial(vec![vec![0.0], vec![-1.0]]);
        let d = detect_bifurcations(&stable, Topology::Line, (-2.0, 2.0), &[], &opts()).unwrap();
        assert!(d.bifurcations.is_empty());
        assert_eq!(d.regions.len(), 1);
    }

    #[test]
    fn s_shaped_folds() {
        let f = ParamField::polynomial(vec![vec![0.0, 1.0], vec![1.0], vec![0.0], vec![-1.0]]);
        let d = detect_bifurcations(&f, Topology::Line, (-1.0, 1.0), &[], &opts()).unwrap();
        let fold = 2.0 / (3.0 * 3f64.sqrt());
        let v = d.values();
        assert_eq!(v.len(), 2);
        assert!((v[0] + fold).abs() < 1e-7 && (v[1] - fold).abs() < 1e-7, "{v:?}");
        let d = detect_bifurcations(&f, Topology::Line, (-1.0, 1.0), &[-fold, 0.9], &opts()).unwrap();
        assert_eq!(d.values()[0], -fold);
        assert!(d.bifurcations[0].pinned && !d.bifurcations[1].pinned);
    }

    #[test]
    fn dense_changes_are_reported() {
        // (λ − x²)(λ − 0.02 − x²) changes at λ = 0 and λ = 0.02
        let f = ParamField::polynomial(vec![
            vec![0.0, -0.02, 1.0],
            vec![0.0],
            vec![0.02, -2.0],
            vec![0.0],
            vec![1.0],
        ]);
        let o = SheafOptions { grid: 4, ..opts() };
        let r = detect_bifurcations(&f, Topology::Line, (-1.0, 1.1), &[], &o);
        assert!(matches!(r, Err(Error::BifurcationsTooDense { .. })), "{r:?}");
    }
}
