//! Index-space model of a portrait.
//!
//! Points sit at even atom indices and the open gaps between them at odd
//! indices, so a line with `n` points has `2n - 1` atoms and a circle `2n`
//! cyclic atoms. A circle without equilibria is modelled by one atom standing
//! for the whole circle. Closed invariant regions are bitmasks of atoms.

use super::portrait::{from_chart, to_chart, PhasePortrait};
use super::region::{Interval, Region};
use crate::error::{Error, Result};

pub type AtomSet = u64;

/// A connected piece of a region: its left end lies in atom `lo`, its right
/// end in atom `hi` (lifted past the atom count on a circle).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Span {
    pub lo: usize,
    pub hi: usize,
    pub full: bool,
}

impl Span {
    pub fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi, full: false }
    }

    pub fn full() -> Self {
        Self {
            lo: 0,
            hi: 0,
            full: true,
        }
    }
}

pub(crate) struct Atoms<'a> {
    pub p: &'a PhasePortrait,
    /// Number of points.
    pub n: usize,
    /// Number of atoms.
    pub m: usize,
    pub circle: bool,
}

impl<'a> Atoms<'a> {
    pub fn new(p: &'a PhasePortrait) -> Result<Self> {
        let circle = p.is_circle();
        let n = p.n_points();
        let m = if circle && n == 0 { 1 } else { p.n_atoms() };
        if m > 64 {
            return Err(Error::RootResolution {
                lambda: p.lambda,
                reason: format!("{n} points exceed the supported 32"),
            });
        }
        Ok(Self { p, n, m, circle })
    }

    pub fn full(&self) -> AtomSet {
        if self.m == 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    fn degenerate(&self) -> bool {
        self.circle && self.n == 0
    }

    /// Atoms `a..=b`, wrapping on a circle.
    pub fn range(&self, a: usize, b: usize) -> AtomSet {
        if b + 1 - a >= self.m {
            return self.full();
        }
        let mut s = 0;
        for k in a..=b {
            s |= 1u64 << (k % self.m);
        }
        s
    }

    /// Lifted point index reached from lifted atom `t`.
    fn limit(&self, t: usize) -> usize {
        if !self.circle {
            return if t.is_multiple_of(2) {
                self.p.point_limit(t / 2)
            } else {
                t / 2 + self.p.gap_limit_offset(t / 2)
            };
        }
        let lap = t / self.m;
        let local = t % self.m;
        let within = if local.is_multiple_of(2) {
            local / 2
        } else {
            local / 2 + self.p.gap_limit_offset(local / 2)
        };
        lap * self.n + within
    }

    /// Omega-limit set of one connected piece.
    pub fn omega_span(&self, s: Span) -> AtomSet {
        if s.full || self.degenerate() {
            return self.full();
        }
        let (la, lb) = (self.limit(s.lo), self.limit(s.hi));
        if self.circle && lb - la >= self.n {
            return self.full();
        }
        self.range(2 * la, 2 * lb)
    }

    pub fn omega_spans(&self, spans: &[Span]) -> AtomSet {
        spans.iter().fold(0, |acc, &s| acc | self.omega_span(s))
    }

    /// Atoms lying entirely in the interior of the union of `spans`.
    ///
    /// A piece that reaches an end of a line phase space from inside contains
    /// a one-sided neighbourhood of that end, which is open in the phase space.
    pub fn interior(&self, spans: &[Span]) -> AtomSet {
        let mut s = 0;
        for sp in spans {
            if sp.full {
                return self.full();
            }
            for k in sp.lo + 1..sp.hi {
                s |= 1u64 << (k % self.m);
            }
            if !self.circle && sp.lo < sp.hi {
                if sp.lo == 0 {
                    s |= 1;
                }
                if sp.hi == self.m - 1 {
                    s |= 1u64 << (self.m - 1);
                }
            }
        }
        s
    }

    pub fn is_closed(&self, set: AtomSet) -> bool {
        if self.degenerate() {
            return true;
        }
        (0..self.m).filter(|k| k % 2 == 1).all(|g| {
            if set >> g & 1 == 0 {
                return true;
            }
            let left = g - 1;
            let right = (g + 1) % self.m;
            set >> left & 1 == 1 && set >> right & 1 == 1
        })
    }

    /// Maximal runs of a closed set, as spans from point to point.
    pub fn runs(&self, set: AtomSet) -> Vec<Span> {
        if set == 0 {
            return Vec::new();
        }
        if self.circle && set == self.full() {
            return vec![Span::full()];
        }
        let start = if self.circle {
            (0..self.m).find(|&k| set >> k & 1 == 0).expect("not full") + 1
        } else {
            0
        };
        let mut out = Vec::new();
        let mut cur: Option<usize> = None;
        for t in start..start + self.m {
            let on = set >> (t % self.m) & 1 == 1;
            match (on, cur) {
                (true, None) => cur = Some(t),
                (false, Some(s)) => {
                    out.push((s, t - 1));
                    cur = None;
                }
                _ => {}
            }
        }
        if let Some(s) = cur {
            out.push((s, start + self.m - 1));
        }
        out.into_iter()
            .map(|(a, b)| {
                let shift = (a / self.m) * self.m;
                Span::new(a - shift, b - shift)
            })
            .collect()
    }

    pub fn omega_set(&self, set: AtomSet) -> AtomSet {
        self.omega_spans(&self.runs(set))
    }

    fn match_tol(x: f64) -> f64 {
        1e-9 * (1.0 + x.abs())
    }

    /// Atom containing `x`.
    pub fn locate(&self, x: f64) -> usize {
        if self.degenerate() {
            return 0;
        }
        let pts = &self.p.points;
        let x = match self.p.phase.circumference() {
            Some(c) => x.rem_euclid(c),
            None => x,
        };
        let on = |pos: f64| {
            if pos.is_infinite() || x.is_infinite() {
                pos == x
            } else {
                (x - pos).abs() <= Self::match_tol(pos)
            }
        };
        if let Some(i) = pts.iter().position(|q| on(q.position)) {
            return 2 * i;
        }
        if self.circle {
            if let Some(c) = self.p.phase.circumference() {
                if on(pts[0].position + c) {
                    return 0;
                }
            }
        }
        let below = pts.iter().filter(|q| q.position < x).count();
        match (below, self.circle) {
            (0, true) => self.m - 1,
            (0, false) => 0,
            (b, false) if b == self.n => self.m - 1,
            (b, _) => 2 * b - 1,
        }
    }

    pub fn spans_of_region(&self, r: &Region) -> Vec<Span> {
        if r.is_full_circle() {
            return vec![Span::full()];
        }
        let c = self.p.phase.circumference();
        let m = self.m as isize;
        // the wrap gap seen from before the first point belongs to the previous lap
        let lifted = |x: f64| -> isize {
            let k = self.locate(x) as isize;
            let before_first = match c {
                Some(c) if self.circle && !self.degenerate() => {
                    k == m - 1 && x.rem_euclid(c) < self.p.points[0].position
                }
                _ => false,
            };
            if before_first {
                -1
            } else {
                k
            }
        };
        r.components()
            .iter()
            .map(|iv| {
                let mut a = lifted(iv.lo);
                let mut b = match c {
                    Some(c) if iv.hi >= c => lifted(iv.hi - c) + m,
                    _ => lifted(iv.hi),
                };
                if a < 0 {
                    a += m;
                    b += m;
                }
                if self.circle && b < a {
                    b += m;
                }
                Span::new(a as usize, b.max(a) as usize)
            })
            .collect()
    }

    fn point_pos(&self, lifted: usize) -> f64 {
        let i = lifted % self.n;
        let laps = (lifted / self.n) as f64;
        self.p.points[i].position + laps * self.p.phase.circumference().unwrap_or(0.0)
    }

    pub fn to_region(&self, set: AtomSet) -> Region {
        let c = self.p.phase.circumference();
        if set == 0 {
            return match c {
                Some(c) => Region::empty_on_circle(c),
                None => Region::empty(),
            };
        }
        if let (Some(c), true) = (c, set == self.full()) {
            return Region::full_circle(c);
        }
        let ivs = self
            .runs(set)
            .into_iter()
            .map(|s| Interval::new(self.point_pos(s.lo / 2), self.point_pos(s.hi / 2)));
        match c {
            Some(c) => Region::circle(c, ivs),
            None => Region::line(ivs),
        }
    }

    /// Lifted point position, allowing indices below zero on a circle.
    fn lifted_pos(&self, i: isize) -> f64 {
        let n = self.n as isize;
        let laps = i.div_euclid(n) as f64;
        self.p.points[i.rem_euclid(n) as usize].position + laps * self.p.phase.circumference().unwrap_or(0.0)
    }

    /// Extends every run of `set` into its neighbouring gaps by `margin`
    /// times the gap length, measured in the bounded chart on the
    /// compactified line. Phase-space ends are not extended past.
    pub fn fatten(&self, set: AtomSet, margin: f64) -> Region {
        let c = self.p.phase.circumference();
        if set == 0 {
            return self.to_region(0);
        }
        if self.degenerate() || (self.circle && set == self.full()) {
            return Region::full_circle(c.expect("circle"));
        }
        let chart = self.p.uses_chart();
        let fwd = |x: f64| if chart { to_chart(x) } else { x };
        let back = |y: f64| if chart { from_chart(y) } else { y };
        let step = |from: isize, to: isize| {
            let (a, b) = (fwd(self.lifted_pos(from)), fwd(self.lifted_pos(to)));
            back(a + margin * (b - a))
        };
        let ivs = self.runs(set).into_iter().map(|s| {
            let (u, v) = ((s.lo / 2) as isize, (s.hi / 2) as isize);
            let lo = if !self.circle && u == 0 {
                self.lifted_pos(0)
            } else {
                step(u, u - 1)
            };
            let last = self.n as isize - 1;
            let hi = if !self.circle && v == last {
                self.lifted_pos(last)
            } else {
                step(v, v + 1)
            };
            Interval::new(lo, hi)
        });
        match c {
            Some(c) => Region::circle(c, ivs),
            None => Region::line(ivs),
        }
    }

    /// Atoms lying wholly inside `r`: gaps must be covered entirely.
    pub fn covered(&self, r: &Region) -> AtomSet {
        let mut s = 0;
        for sp in self.spans_of_region(r) {
            if sp.full {
                return self.full();
            }
            for k in sp.lo..=sp.hi {
                let inner = k > sp.lo && k < sp.hi;
                if inner || k % 2 == 0 {
                    s |= 1u64 << (k % self.m);
                }
            }
        }
        s
    }

    /// Atoms whose forward limit point avoids `set`.
    pub fn dual(&self, set: AtomSet) -> AtomSet {
        if self.degenerate() {
            return if set == 0 { self.full() } else { 0 };
        }
        (0..self.m)
            .filter(|&t| set >> ((2 * self.limit(t)) % self.m) & 1 == 0)
            .fold(0, |acc, t| acc | 1u64 << t)
    }

    /// Invariant points of `set` together with its gaps.
    pub fn invariant_part(&self, set: AtomSet) -> AtomSet {
        (0..self.m)
            .filter(|&t| set >> t & 1 == 1)
            .filter(|&t| t % 2 == 1 || self.degenerate() || self.p.points[t / 2].is_invariant())
            .fold(0, |acc, t| acc | 1u64 << t)
    }

    /// Atom set of a region whose every endpoint is a point of the portrait.
    pub fn exact_set(&self, r: &Region) -> Option<AtomSet> {
        let mut set = 0;
        for s in self.spans_of_region(r) {
            if s.full {
                set = self.full();
            } else if s.lo % 2 == 1 || s.hi % 2 == 1 {
                return None;
            } else {
                set |= self.range(s.lo, s.hi);
            }
        }
        Some(set)
    }

    pub fn label(&self, set: AtomSet) -> String {
        if set == 0 {
            return "∅".into();
        }
        if self.circle && set == self.full() {
            return "X".into();
        }
        let name = |lifted: usize| self.p.points[lifted % self.n].label.as_str();
        self.runs(set)
            .into_iter()
            .map(|s| {
                let (a, b) = (s.lo / 2, s.hi / 2);
                if a == b {
                    format!("{{{}}}", name(a))
                } else {
                    format!("[{},{}]", name(a), name(b))
                }
            })
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }
}
