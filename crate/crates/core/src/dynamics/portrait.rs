//! Phase portraits: ordered equilibria with per-side stability.

use serde::{Serialize, Serializer};

use super::field::{EndpointMode, ParamField, PhaseSpace, Slice};
use super::roots::{cluster, isolate_roots, zero_tol, RootOptions};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointRole {
    Equilibrium,
    FixedBoundary,
    /// An endpoint through which the semiflow enters; not invariant.
    InwardBoundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PortraitPoint {
    pub label: String,
    #[serde(serialize_with = "serialize_position")]
    pub position: f64,
    pub role: PointRole,
    pub attracts_from_left: bool,
    pub attracts_from_right: bool,
    pub parity: Parity,
}

impl PortraitPoint {
    /// Equilibria and fixed endpoints; everything except inward endpoints.
    pub fn is_invariant(&self) -> bool {
        self.role != PointRole::InwardBoundary
    }
}

pub(crate) fn serialize_position<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if *x > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// The combinatorial data of the flow at one parameter value.
///
/// On a line the points are ordered left to right and include both ends of
/// the phase space; `gap_signs[i]` is the sign of `f` between points `i` and
/// `i + 1`. On a circle the points are ordered by position in `[0, C)` and
/// gap `n - 1` wraps from the last point to the first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhasePortrait {
    pub lambda: f64,
    pub phase: PhaseSpace,
    pub points: Vec<PortraitPoint>,
    pub gap_signs: Vec<Sign>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PortraitOptions {
    pub tol_x: f64,
    /// Uncertainty in `λ`; tangencies within it are treated as roots.
    pub slack: f64,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        Self {
            tol_x: 1e-9,
            slack: 0.0,
        }
    }
}

pub fn portrait(field: &ParamField, lambda: f64, tol_x: f64) -> Result<PhasePortrait> {
    portrait_with(field, lambda, PortraitOptions { tol_x, slack: 0.0 })
}

pub fn portrait_with(field: &ParamField, lambda: f64, opts: PortraitOptions) -> Result<PhasePortrait> {
    let slice = field.at(lambda);
    if slice.is_identically_zero() {
        return Err(Error::ZeroField { lambda });
    }
    let radius = 10.0 * (opts.slack.sqrt() + opts.tol_x);
    let touch = |c: f64| 10.0 * opts.slack * field.d_lambda(c, lambda).abs();
    let (depth, samples) = search_depth(&slice);
    let ropts = RootOptions {
        tol_x: opts.tol_x,
        samples,
    };
    let resolution = |reason: String| Error::RootResolution { lambda, reason };

    let roots: Vec<f64> = match &field.phase {
        PhaseSpace::CompactifiedLine => {
            let Slice::Poly(p) = &slice else {
                return Err(resolution("compactified line needs a polynomial field".into()));
            };
            let p = p.trimmed(1e-13);
            let trimmed = Slice::Poly(p.clone());
            let bound = cauchy_bound(p.coeffs()) + 1.0;
            let raw = isolate_roots(&trimmed, -bound, bound, p.degree().unwrap_or(0), ropts, &touch);
            cluster(&raw, radius)
        }
        PhaseSpace::Interval { lo, hi, left, right } => {
            let raw = isolate_roots(&slice, *lo, *hi, depth, ropts, &touch);
            let mut inner = Vec::new();
            for r in cluster(&raw, radius) {
                let at_end = [(*lo, *left), (*hi, *right)]
                    .into_iter()
                    .find(|(e, _)| (r - e).abs() <= radius);
                match at_end {
                    Some((_, EndpointMode::Fixed)) => {}
                    Some((e, EndpointMode::Inward)) => {
                        return Err(resolution(format!("equilibrium on the inward endpoint {e}")))
                    }
                    None => inner.push(r),
                }
            }
            inner
        }
        PhaseSpace::Circle { circumference } => {
            let c = *circumference;
            let raw = isolate_roots(&slice, 0.0, c, depth, ropts, &touch);
            let mut folded: Vec<f64> = raw.into_iter().map(|r| r.rem_euclid(c)).collect();
            folded.sort_by(f64::total_cmp);
            let mut rs = cluster(&folded, radius);
            if rs.len() >= 2 && rs[0] + c - rs[rs.len() - 1] <= radius {
                let last = rs.pop().expect("len >= 2");
                rs[0] = (0.5 * (rs[0] + c + last)).rem_euclid(c);
                rs.sort_by(f64::total_cmp);
            }
            rs
        }
    };

    let signs = gap_signs(&slice, &field.phase, &roots).map_err(resolution)?;
    PhasePortrait::from_signs(lambda, field.phase.clone(), roots, signs).map_err(|e| match e {
        Error::InvalidConfig(m) => resolution(m),
        other => other,
    })
}

fn search_depth(slice: &Slice) -> (usize, usize) {
    match slice {
        Slice::Poly(p) => (p.degree().unwrap_or(0), 64),
        Slice::Trig(t) => {
            let max_rate = t.iter().map(|s| s.rate.abs()).fold(0.0, f64::max);
            // the period normalisation puts max_rate at 2π · frequency / C
            (2, 64 + (32.0 * max_rate).ceil() as usize)
        }
    }
}

fn cauchy_bound(c: &[f64]) -> f64 {
    let Some((&lead, rest)) = c.split_last() else {
        return 0.0;
    };
    if rest.is_empty() {
        return 0.0;
    }
    1.0 + rest.iter().map(|x| (x / lead).abs()).fold(0.0, f64::max)
}

fn gap_signs(slice: &Slice, phase: &PhaseSpace, roots: &[f64]) -> std::result::Result<Vec<Sign>, String> {
    let samples: Vec<f64> = match phase {
        PhaseSpace::Circle { circumference } => {
            let n = roots.len();
            (0..n)
                .map(|i| {
                    let next = if i + 1 < n {
                        roots[i + 1]
                    } else {
                        roots[0] + circumference
                    };
                    0.5 * (roots[i] + next)
                })
                .collect()
        }
        PhaseSpace::CompactifiedLine => {
            let mut pts = vec![f64::NEG_INFINITY];
            pts.extend_from_slice(roots);
            pts.push(f64::INFINITY);
            pts.windows(2)
                .map(|w| match (w[0].is_finite(), w[1].is_finite()) {
                    (true, true) => 0.5 * (w[0] + w[1]),
                    (false, true) => w[1] - 1.0 - w[1].abs(),
                    (true, false) => w[0] + 1.0 + w[0].abs(),
                    (false, false) => 0.0,
                })
                .collect()
        }
        PhaseSpace::Interval { lo, hi, .. } => {
            let mut pts = vec![*lo];
            pts.extend_from_slice(roots);
            pts.push(*hi);
            pts.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
        }
    };
    samples
        .into_iter()
        .map(|x| {
            let v = slice.eval(x);
            if v.abs() <= zero_tol(slice, x) {
                Err(format!(
                    "field vanishes at the gap sample {x} away from every isolated root"
                ))
            } else {
                Ok(Sign::of(v))
            }
        })
        .collect()
}

impl PhasePortrait {
    /// Assembles a portrait from interior equilibrium positions and gap signs.
    ///
    /// For a line `gap_signs` has one entry more than `equilibria`; for a
    /// circle the same number.
    pub fn from_signs(lambda: f64, phase: PhaseSpace, equilibria: Vec<f64>, gap_signs: Vec<Sign>) -> Result<Self> {
        let mut raw: Vec<(String, f64, PointRole)> = Vec::new();
        let interior = |k: usize, x: f64| (format!("e{k}"), x, PointRole::Equilibrium);
        let role = |m: EndpointMode| match m {
            EndpointMode::Fixed => PointRole::FixedBoundary,
            EndpointMode::Inward => PointRole::InwardBoundary,
        };
        match &phase {
            PhaseSpace::CompactifiedLine => {
                raw.push(("-inf".into(), f64::NEG_INFINITY, PointRole::FixedBoundary));
                raw.extend(equilibria.iter().enumerate().map(|(k, &x)| interior(k, x)));
                raw.push(("+inf".into(), f64::INFINITY, PointRole::FixedBoundary));
            }
            PhaseSpace::Interval { lo, hi, left, right } => {
                raw.push(("lo".into(), *lo, role(*left)));
                raw.extend(equilibria.iter().enumerate().map(|(k, &x)| interior(k, x)));
                raw.push(("hi".into(), *hi, role(*right)));
            }
            PhaseSpace::Circle { .. } => {
                raw.extend(equilibria.iter().enumerate().map(|(k, &x)| interior(k, x)));
            }
        }
        let n = raw.len();
        let circle = phase.is_circle();
        let expected_gaps = if circle { n } else { n - 1 };
        if gap_signs.len() != expected_gaps {
            return Err(Error::InvalidConfig(format!(
                "{} gap signs for {} points",
                gap_signs.len(),
                n
            )));
        }
        if raw.windows(2).any(|w| !(w[0].1 < w[1].1)) {
            return Err(Error::InvalidConfig("points are not strictly increasing".into()));
        }
        if let PhaseSpace::Interval { left, right, .. } = &phase {
            if *left == EndpointMode::Inward && gap_signs[0] != Sign::Positive {
                return Err(Error::InvalidConfig("field points out of the interval at lo".into()));
            }
            if *right == EndpointMode::Inward && gap_signs[n - 2] != Sign::Negative {
                return Err(Error::InvalidConfig("field points out of the interval at hi".into()));
            }
        }

        let points = raw
            .into_iter()
            .enumerate()
            .map(|(i, (label, position, role))| {
                let left = if circle {
                    Some(gap_signs[(i + n - 1) % n])
                } else {
                    i.checked_sub(1).map(|g| gap_signs[g])
                };
                let right = if circle || i + 1 < n { Some(gap_signs[i]) } else { None };
                let invariant = role != PointRole::InwardBoundary;
                let parity = match (role, left, right) {
                    (PointRole::Equilibrium, Some(l), Some(r)) if l != r => Parity::Odd,
                    (PointRole::Equilibrium, Some(_), Some(_)) => Parity::Even,
                    _ => Parity::Boundary,
                };
                PortraitPoint {
                    label,
                    position,
                    role,
                    attracts_from_left: invariant && left == Some(Sign::Positive),
                    attracts_from_right: invariant && right == Some(Sign::Negative),
                    parity,
                }
            })
            .collect();
        Ok(Self {
            lambda,
            phase,
            points,
            gap_signs,
        })
    }

    pub fn is_circle(&self) -> bool {
        self.phase.is_circle()
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_atoms(&self) -> usize {
        if self.is_circle() {
            2 * self.points.len()
        } else {
            2 * self.points.len() - 1
        }
    }

    /// Interior equilibria, left to right.
    pub fn equilibria(&self) -> impl Iterator<Item = &PortraitPoint> {
        self.points.iter().filter(|p| p.role == PointRole::Equilibrium)
    }

    pub fn is_flow(&self) -> bool {
        self.phase.is_flow()
    }

    /// Point reached by following the flow from point `i`.
    pub(crate) fn point_limit(&self, i: usize) -> usize {
        if self.points[i].is_invariant() {
            return i;
        }
        // inward endpoints flow into their only gap, whose far end is invariant
        if i == 0 {
            1
        } else {
            i - 1
        }
    }

    /// Point reached by following the flow inside gap `g`, as an offset in
    /// `{0, 1}` from the gap's left point.
    pub(crate) fn gap_limit_offset(&self, g: usize) -> usize {
        match self.gap_signs[g] {
            Sign::Positive => 1,
            Sign::Negative => 0,
        }
    }

    /// Canonical string determining the attractor lattice up to relabelling.
    ///
    /// Circle signatures are minimised over rotations.
    pub fn signature(&self) -> String {
        let tok = |i: usize| -> String {
            let role = match self.points[i].role {
                PointRole::Equilibrium => 'E',
                PointRole::FixedBoundary => 'F',
                PointRole::InwardBoundary => 'I',
            };
            match self.gap_signs.get(i) {
                Some(s) => format!("{role}{}", s.symbol()),
                None => role.to_string(),
            }
        };
        let n = self.n_points();
        if !self.is_circle() {
            return (0..n).map(tok).collect();
        }
        if n == 0 {
            return "O".into();
        }
        (0..n)
            .map(|r| (0..n).map(|k| tok((r + k) % n)).collect::<String>())
            .min()
            .expect("n > 0")
    }

    /// The time-reversed portrait; only defined for flows.
    pub fn reversed(&self) -> Result<PhasePortrait> {
        if !self.is_flow() {
            return Err(Error::ReversedSemiflow);
        }
        let eq: Vec<f64> = self.equilibria().map(|p| p.position).collect();
        let signs = self.gap_signs.iter().map(|s| s.flip()).collect();
        PhasePortrait::from_signs(self.lambda, self.phase.clone(), eq, signs)
    }

    pub(crate) fn uses_chart(&self) -> bool {
        matches!(self.phase, PhaseSpace::CompactifiedLine)
    }
}

pub(crate) fn to_chart(x: f64) -> f64 {
    if x.is_infinite() {
        x.signum()
    } else {
        x / (1.0 + x.abs())
    }
}

pub(crate) fn from_chart(y: f64) -> f64 {
    if y >= 1.0 {
        f64::INFINITY
    } else if y <= -1.0 {
        f64::NEG_INFINITY
    } else {
        y / (1.0 - y.abs())
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::dynamics::field::{FieldExpr, Poly, TrigTerm};

    fn pitchfork() -> ParamField {
        ParamField::polynomial(vec![vec![0.0], vec![0.0, 1.0], vec![0.0], vec![-1.0]])
    }

    #[test]
    fn pitchfork_portraits() {
        let p = portrait(&pitchfork(), -1.0, 1e-9).unwrap();
        assert_eq!(p.signature(), "F+E-F");
        let e = &p.points[1];
        assert!(e.attracts_from_left && e.attracts_from_right && e.position.abs() < 1e-9);
        assert!(!p.points[0].attracts_from_right && !p.points[2].attracts_from_left);

        let p = portrait(&pitchfork(), 1.0, 1e-9).unwrap();
        assert_eq!(p.signature(), "F+E-E+E-F");
        let xs: Vec<f64> = p.equilibria().map(|e| e.position).collect();
        assert!((xs[0] + 1.0).abs() < 1e-8 && xs[1].abs() < 1e-8 && (xs[2] - 1.0).abs() < 1e-8);
        assert_eq!(p.points[2].parity, Parity::Odd);

        let p = portrait(&pitchfork(), 0.0, 1e-9).unwrap();
        assert_eq!(p.signature(), "F+E-F");
    }

    #[test]
    fn saddle_node_at_the_fold() {
        let f = ParamField::polynomial(vec![vec![0.0, 1.0], vec![0.0], vec![-1.0]]);
        let p = portrait(&f, 0.0, 1e-9).unwrap();
        assert_eq!(p.signature(), "F-E-F");
        let e = &p.points[1];
        assert!(!e.attracts_from_left && e.attracts_from_right);
        assert_eq!(e.parity, Parity::Even);
        assert!(p.points[0].attracts_from_right);
        assert!(!p.points[2].attracts_from_left);
        // a detected vertex is only known to within the slack
        let near = PortraitOptions {
            tol_x: 1e-9,
            slack: 1e-10,
        };
        assert_eq!(portrait_with(&f, -5e-11, near).unwrap().signature(), "F-E-F");
        assert_eq!(portrait_with(&f, 5e-11, near).unwrap().signature(), "F-E-F");
        assert_eq!(portrait(&f, -5e-11, 1e-9).unwrap().signature(), "F-F");
    }

    #[test]
    fn inward_interval() {
        let f = pitchfork().with_phase(PhaseSpace::Interval {
            lo: -2.0,
            hi: 2.0,
            left: EndpointMode::Inward,
            right: EndpointMode::Inward,
        });
        assert_eq!(portrait(&f, -1.0, 1e-9).unwrap().signature(), "I+E-I");
        let out = ParamField::polynomial(vec![vec![0.0], vec![1.0]]).with_phase(PhaseSpace::Interval {
            lo: -1.0,
            hi: 1.0,
            left: EndpointMode::Inward,
            right: EndpointMode::Inward,
        });
        assert!(matches!(portrait(&out, 0.0, 1e-9), Err(Error::RootResolution { .. })));
    }

    #[test]
    fn circle_portrait_and_rotation() {
        let f = ParamField::new(
            FieldExpr::Trigonometric(vec![TrigTerm {
                amplitude: Poly::constant(1.0),
                frequency: 2,
                phase: Poly::linear(0.0, -2.0),
            }]),
            PhaseSpace::Circle {
                circumference: 2.0 * PI,
            },
        )
        .unwrap();
        let a = portrait(&f, 0.1, 1e-9).unwrap();
        assert_eq!(a.n_points(), 4);
        let b = portrait(&f, 0.1 + PI / 2.0, 1e-9).unwrap();
        assert_eq!(a.signature(), b.signature());
        assert_eq!(a.signature(), "E+E-E+E-");
        let r = a.reversed().unwrap();
        assert_eq!(r.signature(), a.signature());
    }

    #[test]
    fn chart_round_trip() {
        for x in [-5.0, -0.5, 0.0, 2.0] {
            assert!((from_chart(to_chart(x)) - x).abs() < 1e-12);
        }
        assert_eq!(from_chart(to_chart(f64::INFINITY)), f64::INFINITY);
    }
}
