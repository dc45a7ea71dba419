#![allow(dead_code)]

pub mod suites;

use sheafdyn::config::AnalysisConfig;
use sheafdyn::dynamics::{PhasePortrait, PhaseSpace, PointRole, Region, Sign};
use sheafdyn::sheaf::Analysis;

pub const SYSTEMS: &[&str] = &[
    "pitchfork",
    "saddle-node",
    "transcritical",
    "s-shaped",
    "compact-pitchfork",
    "compact-s-shaped",
    "circle",
    "stable",
];

pub fn config(name: &str) -> AnalysisConfig {
    let path = format!("{}/../../configs/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    AnalysisConfig::from_json(&text).unwrap()
}

pub fn analysis(c: &AnalysisConfig) -> Analysis {
    let p = &c.parameter;
    Analysis::run(&c.system, p.topology, p.range, &p.pinned, &p.refine, &c.options()).unwrap()
}

/// Where the flow started at `x` ends up, in the same lift on a circle.
pub fn limit(p: &PhasePortrait, x: f64) -> f64 {
    let pos: Vec<f64> = p.points.iter().map(|q| q.position).collect();
    let n = pos.len();
    match p.phase {
        PhaseSpace::Circle { circumference: c } => {
            let k = (x / c).floor() * c;
            let r = x - k;
            if let Some(&q) = pos.iter().find(|&&q| (q - r).abs() <= 1e-9) {
                return k + q;
            }
            let up = p.gap_signs[..].iter().map(|s| *s == Sign::Positive).collect::<Vec<_>>();
            if r < pos[0] {
                return k + if up[n - 1] { pos[0] } else { pos[n - 1] - c };
            }
            if r > pos[n - 1] {
                return k + if up[n - 1] { pos[0] + c } else { pos[n - 1] };
            }
            let g = pos.iter().rposition(|&q| q < r).unwrap();
            k + if up[g] { pos[g + 1] } else { pos[g] }
        }
        _ => {
            if let Some(i) = pos.iter().position(|&q| q == x) {
                return match p.points[i].role {
                    PointRole::InwardBoundary if i == 0 => pos[1],
                    PointRole::InwardBoundary => pos[n - 2],
                    _ => x,
                };
            }
            let g = pos.iter().rposition(|&q| q < x).unwrap();
            if p.gap_signs[g] == Sign::Positive {
                pos[g + 1]
            } else {
                pos[g]
            }
        }
    }
}

/// ω of a closed region from the endpoint limits of each component.
pub fn omega_by_limits(p: &PhasePortrait, u: &Region) -> Region {
    if u.is_empty() {
        return u.clone();
    }
    if let Some(c) = p.phase.circumference() {
        if p.points.is_empty() {
            return Region::full_circle(c);
        }
    }
    u.like(
        u.components()
            .iter()
            .map(|iv| sheafdyn::dynamics::Interval::new(limit(p, iv.lo), limit(p, iv.hi))),
    )
}

/// Number of join-irreducibles, by definition.
pub fn count_join_irreducibles(l: &sheafdyn::lattice::FiniteDistLattice) -> usize {
    let n = l.len();
    (0..n)
        .filter(|&a| {
            a != l.bottom()
                && !(0..n).any(|b| (0..n).any(|c| b != a && c != a && l.leq(b, a) && l.leq(c, a) && l.join(b, c) == a))
        })
        .count()
}
