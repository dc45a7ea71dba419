//! Omega-limits, attracting neighbourhoods and attractor lattices.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::atoms::{AtomSet, Atoms, Span};
use super::portrait::PhasePortrait;
use super::region::Region;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::FiniteDistLattice;

/// `ω(U)`, or `α(U)` when `reversed` (flows only).
pub fn omega(p: &PhasePortrait, u: &Region, reversed: bool) -> Result<Region> {
    let rev;
    let p = if reversed {
        rev = p.reversed()?;
        &rev
    } else {
        p
    };
    let atoms = Atoms::new(p)?;
    let spans = atoms.spans_of_region(u);
    Ok(atoms.to_region(atoms.omega_spans(&spans)))
}

/// Whether `ω(U) ⊂ int U`.
pub fn is_attracting_neighborhood(p: &PhasePortrait, u: &Region) -> bool {
    let Ok(atoms) = Atoms::new(p) else {
        return false;
    };
    let spans = atoms.spans_of_region(u);
    let w = atoms.omega_spans(&spans);
    w & !atoms.interior(&spans) == 0
}

/// The attractors of a portrait with their lattice structure.
#[derive(Clone, Debug, PartialEq)]
pub struct AttractorLattice {
    pub portrait: PhasePortrait,
    pub lattice: Arc<FiniteDistLattice>,
    /// Atom set of each element, in element order.
    pub sets: Vec<AtomSet>,
    pub regions: Vec<Region>,
}

impl AttractorLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn element_of_set(&self, set: AtomSet) -> Option<usize> {
        self.sets.binary_search_by(|s| order_key(*s).cmp(&order_key(set))).ok()
    }

    /// Element whose region coincides with `r` (endpoints matched to points).
    pub fn element_of_region(&self, r: &Region) -> Option<usize> {
        let atoms = Atoms::new(&self.portrait).ok()?;
        self.element_of_set(atoms.exact_set(r)?)
    }

    pub fn signature(&self) -> String {
        self.portrait.signature()
    }
}

impl Serialize for AttractorLattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("AttractorLattice", 4)?;
        st.serialize_field("lambda", &self.portrait.lambda)?;
        st.serialize_field("signature", &self.portrait.signature())?;
        st.serialize_field("lattice", &*self.lattice)?;
        st.serialize_field("regions", &self.regions)?;
        st.end()
    }
}

fn order_key(s: AtomSet) -> (u32, AtomSet) {
    (s.count_ones(), s)
}

/// Components an attractor may have.
///
/// A single invariant point qualifies when it attracts on every side facing
/// into the phase space; a longer run from `u` to `v` qualifies when `u`
/// attracts from the left (or is the left end) and `v` attracts from the
/// right (or is the right end). Inward endpoints never qualify.
fn allowed_components(atoms: &Atoms) -> Vec<AtomSet> {
    let p = atoms.p;
    let n = atoms.n;
    if atoms.circle {
        if n == 0 {
            return vec![atoms.full()];
        }
        let mut out = vec![atoms.full()];
        for u in 0..n {
            for len in 0..n {
                let v = (u + len) % n;
                if p.points[u].attracts_from_left && p.points[v].attracts_from_right {
                    out.push(atoms.range(2 * u, 2 * (u + len)));
                }
            }
        }
        return out;
    }
    let left_ok = |u: usize| u == 0 || p.points[u].attracts_from_left;
    let right_ok = |v: usize| v == n - 1 || p.points[v].attracts_from_right;
    let mut out = Vec::new();
    for u in (0..n).filter(|&u| p.points[u].is_invariant() && left_ok(u)) {
        for v in (u..n).filter(|&v| p.points[v].is_invariant() && right_ok(v)) {
            out.push(atoms.range(2 * u, 2 * v));
        }
    }
    out
}

pub fn attractor_lattice(p: &PhasePortrait) -> Result<AttractorLattice> {
    let atoms = Atoms::new(p)?;
    let mut sets: BTreeSet<AtomSet> = BTreeSet::new();
    sets.insert(0);
    for c in allowed_components(&atoms) {
        let current: Vec<AtomSet> = sets.iter().copied().collect();
        sets.extend(current.into_iter().map(|s| s | c));
    }
    assemble(p, &atoms, sets)
}

/// Brute-force enumeration straight from the definition `A = ω(U)`.
///
/// Candidate neighbourhoods are unions of disjoint closed intervals whose
/// endpoints are gap midpoints or ends of the phase space.
pub fn oracle_attractor_lattice(p: &PhasePortrait, exec: Execution) -> Result<AttractorLattice> {
    let atoms = Atoms::new(p)?;
    let candidates = candidate_neighbourhoods(&atoms);
    let images = exec.map(&candidates, |spans| {
        let w = atoms.omega_spans(spans);
        (w & !atoms.interior(spans) == 0).then_some(w)
    });
    let sets: BTreeSet<AtomSet> = images.into_iter().flatten().collect();
    assemble(p, &atoms, sets)
}

fn candidate_neighbourhoods(atoms: &Atoms) -> Vec<Vec<Span>> {
    let mut out = vec![Vec::new()];
    if atoms.circle {
        out.push(vec![Span::full()]);
        if atoms.n == 0 {
            return out;
        }
        // midpoints of gaps 0..n, arcs between them going forward
        let k = atoms.n;
        let ends: Vec<usize> = (0..k).map(|g| 2 * g + 1).collect();
        let mut stack = Vec::new();
        circle_arcs(atoms, &ends, 0, 0u64, &mut stack, &mut out);
        return out;
    }
    let mut ends = vec![0];
    ends.extend((0..atoms.n - 1).map(|g| 2 * g + 1));
    ends.push(atoms.m - 1);
    let mut stack = Vec::new();
    line_intervals(&ends, 0, &mut stack, &mut out);
    out
}

fn line_intervals(ends: &[usize], from: usize, stack: &mut Vec<Span>, out: &mut Vec<Vec<Span>>) {
    for i in from..ends.len() {
        for j in i + 1..ends.len() {
            stack.push(Span::new(ends[i], ends[j]));
            out.push(stack.clone());
            line_intervals(ends, j + 1, stack, out);
            stack.pop();
        }
    }
}

/// Disjoint forward arcs `[ends[i], ends[i + len]]`, started in increasing `i`.
fn circle_arcs(atoms: &Atoms, ends: &[usize], from: usize, used: u64, stack: &mut Vec<Span>, out: &mut Vec<Vec<Span>>) {
    let k = ends.len();
    for i in from..k {
        for len in 1..k {
            let idx: Vec<usize> = (i..=i + len).map(|t| t % k).collect();
            let mask = idx.iter().fold(0u64, |m, &t| m | 1 << t);
            if mask & used != 0 {
                continue;
            }
            let lo = ends[i];
            let hi = ends[(i + len) % k] + if i + len >= k { atoms.m } else { 0 };
            stack.push(Span::new(lo, hi));
            out.push(stack.clone());
            circle_arcs(atoms, ends, i + 1, used | mask, stack, out);
            stack.pop();
        }
    }
}

fn assemble(p: &PhasePortrait, atoms: &Atoms, sets: BTreeSet<AtomSet>) -> Result<AttractorLattice> {
    let mut sets: Vec<AtomSet> = sets.into_iter().collect();
    sets.sort_by_key(|&s| order_key(s));
    let n = sets.len();
    let index = |s: AtomSet| sets.binary_search_by(|x| order_key(*x).cmp(&order_key(s))).ok();

    let top_set = atoms.omega_set(atoms.full());
    if sets.last() != Some(&top_set) {
        return Err(Error::InvalidLattice(format!(
            "largest attractor differs from ω(X) at λ = {}",
            p.lambda
        )));
    }
    for &s in &sets {
        if !atoms.is_closed(s) || atoms.omega_set(s) != s {
            return Err(Error::InvalidLattice(format!(
                "{} is not a closed invariant set",
                atoms.label(s)
            )));
        }
    }

    let mut leq = vec![vec![false; n]; n];
    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            leq[a][b] = sets[a] & !sets[b] == 0;
            join[a][b] =
                index(sets[a] | sets[b]).ok_or_else(|| Error::InvalidLattice("union of attractors missing".into()))?;
            meet[a][b] = index(atoms.omega_set(sets[a] & sets[b]))
                .ok_or_else(|| Error::InvalidLattice("meet of attractors missing".into()))?;
        }
    }
    let labels: Vec<String> = sets.iter().map(|&s| atoms.label(s)).collect();
    let regions = sets.iter().map(|&s| atoms.to_region(s)).collect();
    let lattice = FiniteDistLattice::from_tables(labels, leq, meet, join, 0, n - 1)?;
    Ok(AttractorLattice {
        portrait: p.clone(),
        lattice: Arc::new(lattice),
        sets,
        regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::field::{EndpointMode, ParamField, PhaseSpace};
    use crate::dynamics::portrait::{portrait, Sign};
    use crate::lattice::{join_irreducibles, validate_lattice};

    fn pitchfork() -> ParamField {
        ParamField::polynomial(vec![vec![0.0], vec![0.0, 1.0], vec![0.0], vec![-1.0]])
    }

    fn labels(a: &AttractorLattice) -> Vec<&str> {
        a.lattice.labels().iter().map(String::as_str).collect()
    }

    #[test]
    fn pitchfork_left_lattice() {
        let p = portrait(&pitchfork(), -1.0, 1e-9).unwrap();
        let a = attractor_lattice(&p).unwrap();
        assert_eq!(labels(&a), vec!["∅", "{e0}", "[-inf,e0]", "[e0,+inf]", "[-inf,+inf]"]);
        assert!(validate_lattice(&a.lattice).valid);
        assert_eq!(join_irreducibles(&a.lattice).len(), 3);
    }

    #[test]
    fn pitchfork_right_lattice() {
        let p = portrait(&pitchfork(), 1.0, 1e-9).unwrap();
        let a = attractor_lattice(&p).unwrap();
        assert_eq!(a.len(), 13);
        assert!(validate_lattice(&a.lattice).valid);
        let j = join_irreducibles(&a.lattice);
        let names: Vec<&str> = j.members.iter().map(|&e| a.lattice.label(e)).collect();
        assert_eq!(names, vec!["{e0}", "{e2}", "[-inf,e0]", "[e2,+inf]", "[e0,e2]"]);
        let o = oracle_attractor_lattice(&p, Execution::Sequential).unwrap();
        assert_eq!(o.sets, a.sets);
    }

    #[test]
    fn interval_semiflow_top_is_not_the_space() {
        let f = pitchfork().with_phase(PhaseSpace::Interval {
            lo: -2.0,
            hi: 2.0,
            left: EndpointMode::Inward,
            right: EndpointMode::Inward,
        });
        let p = portrait(&f, -1.0, 1e-9).unwrap();
        let a = attractor_lattice(&p).unwrap();
        assert_eq!(labels(&a), vec!["∅", "{e0}"]);
        let o = oracle_attractor_lattice(&p, Execution::Parallel).unwrap();
        assert_eq!(o.sets, a.sets);
    }

    #[test]
    fn omega_examples() {
        let sn = ParamField::polynomial(vec![vec![0.0, 1.0], vec![0.0], vec![-1.0]]);
        let p = portrait(&sn, -1.0, 1e-9).unwrap();
        let w = omega(&p, &Region::interval(f64::NEG_INFINITY, 0.5), false).unwrap();
        assert_eq!(w, Region::point(f64::NEG_INFINITY));

        let p = portrait(&pitchfork(), 0.01, 1e-9).unwrap();
        let u = Region::interval(-0.5, 0.5);
        assert!(is_attracting_neighborhood(&p, &u));
        let w = omega(&p, &u, false).unwrap();
        let c = w.components();
        assert_eq!(c.len(), 1);
        assert!((c[0].lo + 0.1).abs() < 1e-8 && (c[0].hi - 0.1).abs() < 1e-8);
        let x = Region::interval(f64::NEG_INFINITY, f64::INFINITY);
        assert_eq!(omega(&p, &x, false).unwrap(), x);
        assert!(is_attracting_neighborhood(&p, &x));
    }

    #[test]
    fn circle_without_equilibria() {
        let p = PhasePortrait::from_signs(0.0, PhaseSpace::Circle { circumference: 1.0 }, vec![], vec![]).unwrap();
        let a = attractor_lattice(&p).unwrap();
        assert_eq!(labels(&a), vec!["∅", "X"]);
        let o = oracle_attractor_lattice(&p, Execution::Sequential).unwrap();
        assert_eq!(o.sets, a.sets);
    }

    #[test]
    fn circle_two_sinks() {
        let s = vec![Sign::Negative, Sign::Positive, Sign::Negative, Sign::Positive];
        let p = PhasePortrait::from_signs(
            0.0,
            PhaseSpace::Circle { circumference: 4.0 },
            vec![0.5, 1.5, 2.5, 3.5],
            s,
        )
        .unwrap();
        let a = attractor_lattice(&p).unwrap();
        assert_eq!(a.len(), 7);
        assert_eq!(join_irreducibles(&a.lattice).len(), 4);
        assert!(validate_lattice(&a.lattice).valid);
        let o = oracle_attractor_lattice(&p, Execution::Sequential).unwrap();
        assert_eq!(o.sets, a.sets);
    }

    #[test]
    fn arc_through_zero_keeps_its_sink() {
        let s = vec![Sign::Positive, Sign::Negative, Sign::Positive, Sign::Negative];
        let p = PhasePortrait::from_signs(
            0.0,
            PhaseSpace::Circle { circumference: 4.0 },
            vec![0.5, 1.5, 2.5, 3.5],
            s,
        )
        .unwrap();
        // the sink at 3.5 with a neighbourhood reaching past the origin
        let u = Region::circle(4.0, [crate::dynamics::Interval::new(3.0, 4.2)]);
        assert_eq!(
            omega(&p, &u, false).unwrap(),
            Region::circle(4.0, [crate::dynamics::Interval::point(3.5)])
        );
        assert!(is_attracting_neighborhood(&p, &u));
    }
}
