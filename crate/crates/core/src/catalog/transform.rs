//! Fibrewise translations `x ↦ x + g(λ)` combined with monotone
//! reparametrizations `λ = r(μ)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::field::{FieldExpr, ParamField, PhaseSpace, Poly, Slice, TrigTerm};
use crate::dynamics::roots::{isolate_roots, RootOptions};
use crate::error::{Error, Result};
use crate::sheaf::{ParamSubset, SubsetPiece, Topology};

/// `h(λ, x) = x + shift(λ)`, applied after the substitution `λ = reparam(μ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugacyTransform {
    #[serde(default)]
    pub shift: Poly,
    #[serde(default)]
    pub reparam: Option<Poly>,
}

/// A transformed system together with its parameter range and pinned values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformedSystem {
    pub field: ParamField,
    pub topology: Topology,
    pub range: (f64, f64),
    pub pinned: Vec<f64>,
    /// Whether the reparametrization reverses the parameter direction.
    pub reversing: bool,
}

fn parse_coeffs(s: &str) -> Result<Poly> {
    if s.trim().is_empty() {
        return Ok(Poly::zero());
    }
    let coeffs = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::InvalidTransform(format!("bad coefficient {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly(coeffs))
}

fn fmt_coeffs(p: &Poly) -> String {
    if p.0.is_empty() {
        return "0".into();
    }
    p.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl ConjugacyTransform {
    pub fn identity() -> Self {
        Self {
            shift: Poly::zero(),
            reparam: None,
        }
    }

    pub fn shift(g: Poly) -> Self {
        Self {
            shift: g,
            reparam: None,
        }
    }

    pub fn with_reparam(mut self, r: Poly) -> Self {
        self.reparam = Some(r);
        self
    }

    /// Parses `shift=c0,c1,... reparam=c0,c1,...` (either part optional,
    /// ascending coefficients).
    pub fn parse(s: &str) -> Result<Self> {
        let mut t = Self::identity();
        for part in s.split_whitespace() {
            match part.split_once('=') {
                Some(("shift", v)) => t.shift = parse_coeffs(v)?,
                Some(("reparam", v)) => t.reparam = Some(parse_coeffs(v)?),
                _ => return Err(Error::InvalidTransform(format!("unrecognised part {part:?}"))),
            }
        }
        Ok(t)
    }

    fn r(&self) -> Poly {
        self.reparam.clone().unwrap_or_else(Poly::identity)
    }

    /// `λ = r(μ)`.
    pub fn parameter_forward(&self, mu: f64) -> f64 {
        self.r().eval(mu)
    }

    /// The `μ` with `r(μ) = λ`.
    pub fn parameter_inverse(&self, lambda: f64) -> Result<f64> {
        invert(&self.r(), lambda)
    }

    /// The image of a phase point: `y = x + g(λ)`.
    pub fn phase_forward(&self, lambda: f64, x: f64) -> f64 {
        x + self.shift.eval(lambda)
    }

    /// The subset of `μ` values whose image under `r` is `sub`.
    pub fn pull_subset(&self, sub: &ParamSubset) -> Result<ParamSubset> {
        let increasing = self.is_increasing()?;
        let inv = |x: f64| self.parameter_inverse(x);
        let pieces = sub
            .pieces
            .iter()
            .map(|p| {
                Ok(match (*p, increasing) {
                    (SubsetPiece::RightRay(a), true) => SubsetPiece::RightRay(inv(a)?),
                    (SubsetPiece::RightRay(a), false) => SubsetPiece::LeftRay(inv(a)?),
                    (SubsetPiece::LeftRay(a), true) => SubsetPiece::LeftRay(inv(a)?),
                    (SubsetPiece::LeftRay(a), false) => SubsetPiece::RightRay(inv(a)?),
                    (SubsetPiece::Segment(a, b), true) => SubsetPiece::Segment(inv(a)?, inv(b)?),
                    (SubsetPiece::Segment(a, b), false) => SubsetPiece::Segment(inv(b)?, inv(a)?),
                    (SubsetPiece::Point(a), _) => SubsetPiece::Point(inv(a)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ParamSubset::new(pieces))
    }

    fn is_increasing(&self) -> Result<bool> {
        monotone_direction(&self.r())
    }
}

impl std::fmt::Display for ConjugacyTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "shift={}", fmt_coeffs(&self.shift))?;
        if let Some(r) = &self.reparam {
            write!(f, " reparam={}", fmt_coeffs(r))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for ConjugacyTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// `true` if `r` is strictly increasing on the line, `false` if strictly
/// decreasing.
fn monotone_direction(r: &Poly) -> Result<bool> {
    let not_monotone = || Error::InvalidTransform("reparametrization is not strictly monotone".into());
    let d = r.derivative();
    let deg = r.degree().ok_or_else(not_monotone)?;
    if deg % 2 == 0 {
        return Err(not_monotone());
    }
    let lead = d.0[d.degree().unwrap_or(0)];
    let bound = 1.0
        + d.0[..d.degree().unwrap_or(0)]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let crit = isolate_roots(
        &Slice::Poly(d.clone()),
        -bound,
        bound,
        d.degree().unwrap_or(0),
        RootOptions {
            tol_x: 1e-12,
            samples: 64,
        },
        &|_| 0.0,
    );
    let mut probes = vec![-bound - 1.0, bound + 1.0];
    probes.extend(crit.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let signs: Vec<f64> = probes.iter().map(|&t| d.eval(t)).filter(|v| *v != 0.0).collect();
    if signs.iter().all(|v| *v > 0.0) {
        Ok(true)
    } else if signs.iter().all(|v| *v < 0.0) {
        Ok(false)
    } else {
        Err(not_monotone())
    }
}

fn invert(r: &Poly, lambda: f64) -> Result<f64> {
    let increasing = monotone_direction(r)?;
    let below = |t: f64| (r.eval(t) < lambda) == increasing;
    let mut lo = -1.0;
    let mut hi = 1.0;
    while below(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::InvalidTransform(format!(
                "cannot invert reparametrization at {lambda}"
            )));
        }
    }
    while !below(lo) {
        lo *= 2.0;
        if lo < -1e12 {
            return Err(Error::InvalidTransform(format!(
                "cannot invert reparametrization at {lambda}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if (r.eval(lo) - lambda).abs() <= (r.eval(hi) - lambda).abs() {
        lo
    } else {
        hi
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `ψ(y, μ) = f(y − G(μ), r(μ))` with `G = g ∘ r`.
pub fn conjugacy_transform(
    field: &ParamField,
    t: &ConjugacyTransform,
    topology: Topology,
    range: (f64, f64),
    pinned: &[f64],
) -> Result<TransformedSystem> {
    let r = t.r();
    let increasing = monotone_direction(&r)?;
    let big_g = t.shift.compose(&r);
    let shift_degree = big_g.degree().unwrap_or(0);

    if topology == Topology::Circle {
        let unit = r.degree() == Some(1) && (r.0[1].abs() - 1.0).abs() < 1e-12;
        if !unit {
            return Err(Error::InvalidTransform(
                "a circle parameter admits only reparametrizations μ ↦ ±μ + c".into(),
            ));
        }
        let period = range.1 - range.0;
        let slope = big_g.0.get(1).copied().unwrap_or(0.0);
        let ok = match (&field.phase, shift_degree) {
            (_, 0) => true,
            (PhaseSpace::Circle { circumference }, 1) => {
                let turns = slope * period / circumference;
                (turns - turns.round()).abs() < 1e-9
            }
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidTransform(
                "the shift must wind a whole number of times around the phase circle per parameter period".into(),
            ));
        }
    }

    let phase = match &field.phase {
        PhaseSpace::Interval { lo, hi, left, right } => {
            if shift_degree > 0 {
                return Err(Error::InvalidTransform(
                    "an interval phase space admits only constant shifts".into(),
                ));
            }
            let c = big_g.eval(0.0);
            PhaseSpace::Interval {
                lo: lo + c,
                hi: hi + c,
                left: *left,
                right: *right,
            }
        }
        other => other.clone(),
    };

    let expr = match &field.field {
        FieldExpr::Polynomial(coeffs) => {
            let minus_g = big_g.scale(-1.0);
            let mut out = vec![Poly::zero(); coeffs.len()];
            for (k, c) in coeffs.iter().enumerate() {
                let c = c.compose(&r);
                for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                    let term = c.mul(&minus_g.pow(k - j)).scale(binomial(k, j));
                    *slot = slot.add(&term);
                }
            }
            FieldExpr::Polynomial(out)
        }
        FieldExpr::Trigonometric(terms) => {
            let period = match &field.phase {
                PhaseSpace::Circle { circumference } => *circumference,
                PhaseSpace::Interval { lo, hi, .. } => hi - lo,
                PhaseSpace::CompactifiedLine => 2.0 * PI,
            };
            let omega = 2.0 * PI / period;
            FieldExpr::Trigonometric(
                terms
                    .iter()
                    .map(|term| TrigTerm {
                        amplitude: term.amplitude.compose(&r),
                        frequency: term.frequency,
                        phase: term
                            .phase
                            .compose(&r)
                            .add(&big_g.scale(-(term.frequency as f64) * omega)),
                    })
                    .collect(),
            )
        }
    };
    let field = ParamField::new(expr, phase)?;

    let (a, b) = (invert(&r, range.0)?, invert(&r, range.1)?);
    let range = if increasing { (a, b) } else { (b, a) };
    let pinned = pinned.iter().map(|&p| invert(&r, p)).collect::<Result<Vec<_>>>()?;
    Ok(TransformedSystem {
        field,
        topology,
        range,
        pinned,
        reversing: !increasing,
    })
}
