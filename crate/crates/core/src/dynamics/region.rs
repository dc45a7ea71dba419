//! Finite unions of closed intervals in a one-dimensional phase space.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

const EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// A closed region in canonical form: sorted, disjoint components.
///
/// On a circle of circumference `C` each component is an arc `[lo, hi]` with
/// `lo ∈ [0, C)` and `hi ∈ [lo, lo + C]`; the whole circle is `[0, C]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    components: Vec<Interval>,
    circle: Option<f64>,
}

impl Region {
    pub fn empty() -> Self {
        Self {
            components: Vec::new(),
            circle: None,
        }
    }

    pub fn empty_on_circle(circumference: f64) -> Self {
        Self {
            components: Vec::new(),
            circle: Some(circumference),
        }
    }

    pub fn line(components: impl IntoIterator<Item = Interval>) -> Self {
        let mut r = Self {
            components: components.into_iter().filter(|c| c.lo <= c.hi).collect(),
            circle: None,
        };
        r.canonicalize();
        r
    }

    /// Arcs with `lo > hi` wrap through zero.
    pub fn circle(circumference: f64, arcs: impl IntoIterator<Item = Interval>) -> Self {
        let mut r = Self {
            components: arcs
                .into_iter()
                .map(|a| {
                    if a.lo > a.hi {
                        Interval::new(a.lo, a.hi + circumference)
                    } else {
                        a
                    }
                })
                .collect(),
            circle: Some(circumference),
        };
        r.canonicalize();
        r
    }

    pub fn full_circle(circumference: f64) -> Self {
        Self {
            components: vec![Interval::new(0.0, circumference)],
            circle: Some(circumference),
        }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::line([Interval::new(lo, hi)])
    }

    pub fn point(x: f64) -> Self {
        Self::line([Interval::point(x)])
    }

    /// A region in the same ambient space as `self`.
    pub fn like(&self, components: impl IntoIterator<Item = Interval>) -> Self {
        match self.circle {
            Some(c) => Self::circle(c, components),
            None => Self::line(components),
        }
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn circumference(&self) -> Option<f64> {
        self.circle
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_full_circle(&self) -> bool {
        match self.circle {
            Some(c) => self.components.len() == 1 && self.components[0].hi - self.components[0].lo >= c,
            None => false,
        }
    }

    fn canonicalize(&mut self) {
        let Some(c) = self.circle else {
            self.components.sort_by(|a, b| a.lo.total_cmp(&b.lo));
            self.components = merge_sorted(&self.components);
            return;
        };
        if self.components.iter().any(|a| a.hi - a.lo >= c * (1.0 - EPS)) {
            *self = Self::full_circle(c);
            return;
        }
        for a in &mut self.components {
            let shift = (a.lo / c).floor() * c;
            a.lo -= shift;
            a.hi -= shift;
            if a.lo >= c {
                a.lo -= c;
                a.hi -= c;
            }
        }
        self.components.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged = merge_sorted(&self.components);
        while merged.len() >= 2 {
            let first = merged[0];
            let last = *merged.last().expect("len >= 2");
            if last.hi < first.lo + c {
                break;
            }
            let n = merged.len();
            merged[n - 1].hi = last.hi.max(first.hi + c);
            merged.remove(0);
        }
        if merged.iter().any(|a| a.hi - a.lo >= c * (1.0 - EPS)) {
            *self = Self::full_circle(c);
            return;
        }
        self.components = merged;
    }

    pub fn union(&self, other: &Region) -> Region {
        self.like(self.components.iter().chain(&other.components).copied())
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        let shifts: &[f64] = match self.circle {
            Some(c) => &[-c, 0.0, c][..],
            None => &[0.0][..],
        };
        let full_self = self.is_full_circle();
        let full_other = other.is_full_circle();
        if full_self {
            return other.clone();
        }
        if full_other {
            return self.clone();
        }
        for a in &self.components {
            for b in &other.components {
                for s in shifts {
                    let lo = a.lo.max(b.lo + s);
                    let hi = a.hi.min(b.hi + s);
                    if lo <= hi {
                        out.push(Interval::new(lo, hi));
                    }
                }
            }
        }
        self.like(out)
    }

    pub fn contains_point(&self, x: f64) -> bool {
        match self.circle {
            None => self.components.iter().any(|a| a.lo <= x && x <= a.hi),
            Some(c) => {
                let x = x.rem_euclid(c);
                self.components
                    .iter()
                    .any(|a| (a.lo <= x && x <= a.hi) || (a.lo <= x + c && x + c <= a.hi))
            }
        }
    }

    /// Containment up to a relative tolerance on endpoints.
    pub fn is_subset(&self, other: &Region) -> bool {
        let tol = |x: f64| if x.is_finite() { EPS * (1.0 + x.abs()) } else { 0.0 };
        let inside = |a: &Interval, b: &Interval, s: f64| {
            let (blo, bhi) = (b.lo + s, b.hi + s);
            (blo <= a.lo || blo - a.lo <= tol(a.lo)) && (a.hi <= bhi || a.hi - bhi <= tol(a.hi))
        };
        if other.is_full_circle() {
            return true;
        }
        let shifts: &[f64] = match self.circle {
            Some(c) => &[-c, 0.0, c][..],
            None => &[0.0][..],
        };
        self.components
            .iter()
            .all(|a| other.components.iter().any(|b| shifts.iter().any(|&s| inside(a, b, s))))
    }

    pub fn approx_eq(&self, other: &Region) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }
}

fn merge_sorted(sorted: &[Interval]) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::new();
    for &a in sorted {
        match out.last_mut() {
            Some(last) if a.lo <= last.hi => last.hi = last.hi.max(a.hi),
            _ => out.push(a),
        }
    }
    out
}

fn fmt_endpoint(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.6}")
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                if c.is_point() {
                    format!("{{{}}}", fmt_endpoint(c.lo))
                } else {
                    format!("[{},{}]", fmt_endpoint(c.lo), fmt_endpoint(c.hi))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.components.len()))?;
        for c in &self.components {
            seq.serialize_element(&[fmt_endpoint(c.lo), fmt_endpoint(c.hi)])?;
        }
        seq.end()
    }
}
