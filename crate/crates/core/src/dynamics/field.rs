//! Scalar vector fields `ẋ = f(x, λ)` and their phase spaces.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real polynomial with ascending coefficients.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Poly(coeffs)
    }

    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// `c0 + c1 t`
    pub fn linear(c0: f64, c1: f64) -> Self {
        Poly(vec![c0, c1])
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn identity() -> Self {
        Poly(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// `Σ |c_k| |t|^k`, the scale against which rounding error is measured.
    pub fn magnitude(&self, t: f64) -> f64 {
        let at = t.abs();
        self.0.iter().rev().fold(0.0, |acc, &c| acc * at + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// Degree after dropping exactly-zero leading coefficients; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|&c| c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Drops leading coefficients that are negligible relative to the largest.
    pub fn trimmed(&self, rel: f64) -> Poly {
        let scale = self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let keep = self.0.iter().rposition(|&c| c.abs() > rel * scale).map_or(0, |d| d + 1);
        Poly(self.0[..keep].to_vec())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|k| self.0.get(k).copied().unwrap_or(0.0) + other.0.get(k).copied().unwrap_or(0.0))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::constant(1.0), |acc, _| acc.mul(self))
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.0
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| acc.mul(inner).add(&Poly::constant(c)))
    }
}

/// One term `amplitude(λ) · sin(frequency · 2π x / C + phase(λ))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub amplitude: Poly,
    pub frequency: u32,
    pub phase: Poly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldExpr {
    /// Entry `k` is the coefficient of `x^k`, itself a polynomial in `λ`.
    Polynomial(Vec<Poly>),
    Trigonometric(Vec<TrigTerm>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointMode {
    /// The endpoint is an equilibrium.
    Fixed,
    /// The field points into the interval; the endpoint belongs to a semiflow.
    Inward,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseSpace {
    /// `[-∞, +∞]` with both ends fixed.
    CompactifiedLine,
    Interval {
        lo: f64,
        hi: f64,
        left: EndpointMode,
        right: EndpointMode,
    },
    Circle {
        circumference: f64,
    },
}

impl PhaseSpace {
    pub fn is_circle(&self) -> bool {
        matches!(self, PhaseSpace::Circle { .. })
    }

    pub fn circumference(&self) -> Option<f64> {
        match self {
            PhaseSpace::Circle { circumference } => Some(*circumference),
            _ => None,
        }
    }

    /// Whether every point of the phase space lies on a complete orbit.
    pub fn is_flow(&self) -> bool {
        match self {
            PhaseSpace::Interval { left, right, .. } => *left == EndpointMode::Fixed && *right == EndpointMode::Fixed,
            _ => true,
        }
    }
}

/// A one-parameter family of scalar fields on a one-dimensional phase space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamField {
    pub field: FieldExpr,
    pub phase: PhaseSpace,
}

impl ParamField {
    pub fn new(field: FieldExpr, phase: PhaseSpace) -> Result<Self> {
        let f = Self { field, phase };
        f.validate()?;
        Ok(f)
    }

    /// `Σ_k coeffs[k](λ) x^k` on the compactified line.
    pub fn polynomial(coeffs: Vec<Vec<f64>>) -> Self {
        Self {
            field: FieldExpr::Polynomial(coeffs.into_iter().map(Poly).collect()),
            phase: PhaseSpace::CompactifiedLine,
        }
    }

    pub fn with_phase(mut self, phase: PhaseSpace) -> Self {
        self.phase = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        match (&self.field, &self.phase) {
            (FieldExpr::Polynomial(c), _) if c.iter().all(Poly::is_zero) => return bad("field is identically zero"),
            (FieldExpr::Trigonometric(t), _) if t.is_empty() => return bad("no trigonometric terms"),
            (FieldExpr::Polynomial(c), PhaseSpace::Circle { .. }) if c.iter().skip(1).any(|p| !p.is_zero()) => {
                return bad("a polynomial in x is not periodic; use trigonometric terms on a circle")
            }
            (FieldExpr::Trigonometric(_), PhaseSpace::CompactifiedLine) => {
                return bad("trigonometric fields have infinitely many zeros on the line")
            }
            _ => {}
        }
        let all_finite = match &self.field {
            FieldExpr::Polynomial(c) => c.iter().flat_map(|p| &p.0).all(|x| x.is_finite()),
            FieldExpr::Trigonometric(t) => t
                .iter()
                .flat_map(|t| t.amplitude.0.iter().chain(&t.phase.0))
                .all(|x| x.is_finite()),
        };
        if !all_finite {
            return bad("coefficients must be finite");
        }
        match self.phase {
            PhaseSpace::Interval { lo, hi, .. } if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                bad("interval phase space needs finite lo < hi")
            }
            PhaseSpace::Circle { circumference } if !(circumference.is_finite() && circumference > 0.0) => {
                bad("circumference must be positive")
            }
            _ => Ok(()),
        }
    }

    /// `f(·, λ)`.
    pub fn at(&self, lambda: f64) -> Slice {
        match &self.field {
            FieldExpr::Polynomial(c) => Slice::Poly(Poly(c.iter().map(|p| p.eval(lambda)).collect())),
            FieldExpr::Trigonometric(terms) => {
                let omega = 2.0 * PI / self.trig_period();
                Slice::Trig(
                    terms
                        .iter()
                        .map(|t| TrigSlice {
                            amp: t.amplitude.eval(lambda),
                            rate: t.frequency as f64 * omega,
                            phase: t.phase.eval(lambda),
                        })
                        .collect(),
                )
            }
        }
    }

    fn trig_period(&self) -> f64 {
        match &self.phase {
            PhaseSpace::Circle { circumference } => *circumference,
            PhaseSpace::Interval { lo, hi, .. } => hi - lo,
            PhaseSpace::CompactifiedLine => 2.0 * PI,
        }
    }

    pub fn eval(&self, x: f64, lambda: f64) -> f64 {
        self.at(lambda).eval(x)
    }

    /// `∂f/∂λ (x, λ)`.
    pub fn d_lambda(&self, x: f64, lambda: f64) -> f64 {
        match &self.field {
            FieldExpr::Polynomial(c) => {
                let d = Poly(c.iter().map(|p| p.derivative().eval(lambda)).collect());
                d.eval(x)
            }
            FieldExpr::Trigonometric(terms) => {
                let omega = 2.0 * PI / self.trig_period();
                terms
                    .iter()
                    .map(|t| {
                        let arg = t.frequency as f64 * omega * x + t.phase.eval(lambda);
                        t.amplitude.derivative().eval(lambda) * arg.sin()
                            + t.amplitude.eval(lambda) * t.phase.derivative().eval(lambda) * arg.cos()
                    })
                    .sum()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigSlice {
    pub amp: f64,
    pub rate: f64,
    pub phase: f64,
}

/// The field at a fixed parameter value.
#[derive(Clone, Debug, PartialEq)]
pub enum Slice {
    Poly(Poly),
    Trig(Vec<TrigSlice>),
}

impl Slice {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Slice::Poly(p) => p.eval(x),
            Slice::Trig(t) => t.iter().map(|s| s.amp * (s.rate * x + s.phase).sin()).sum(),
        }
    }

    pub fn magnitude(&self, x: f64) -> f64 {
        match self {
            Slice::Poly(p) => p.magnitude(x),
            Slice::Trig(t) => t.iter().map(|s| s.amp.abs() * (1.0 + (s.rate * x).abs())).sum(),
        }
    }

    pub fn derivative(&self) -> Slice {
        match self {
            Slice::Poly(p) => Slice::Poly(p.derivative()),
            Slice::Trig(t) => Slice::Trig(
                t.iter()
                    .map(|s| TrigSlice {
                        amp: s.amp * s.rate,
                        rate: s.rate,
                        phase: s.phase + PI / 2.0,
                    })
                    .collect(),
            ),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Slice::Poly(p) => p.degree().is_none_or(|d| d == 0),
            Slice::Trig(t) => t.iter().all(|s| s.amp == 0.0 || s.rate == 0.0),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            Slice::Poly(p) => p.is_zero(),
            Slice::Trig(t) => t
                .iter()
                .all(|s| s.amp == 0.0 || (s.rate == 0.0 && s.phase.sin() == 0.0)),
        }
    }
}
