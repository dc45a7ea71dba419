//! Finite bounded distributive lattices stored extensionally.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::Gf2Vector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDistLattice {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl FiniteDistLattice {
    /// Builds a lattice from a partial order, deriving meets and joins as
    /// greatest lower and least upper bounds.
    pub fn from_order(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        check_square(&leq, n, "leq")?;
        if n == 0 {
            return Err(Error::InvalidLattice("no elements".into()));
        }
        let bound = |a: usize, b: usize, upper: bool| -> Result<usize> {
            let cands: Vec<usize> = (0..n)
                .filter(|&c| {
                    if upper {
                        leq[a][c] && leq[b][c]
                    } else {
                        leq[c][a] && leq[c][b]
                    }
                })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&d| if upper { leq[c][d] } else { leq[d][c] }))
                .ok_or_else(|| {
                    Error::InvalidLattice(format!(
                        "no {} for {} and {}",
                        if upper {
                            "least upper bound"
                        } else {
                            "greatest lower bound"
                        },
                        labels[a],
                        labels[b]
                    ))
                })
        };
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                meet[a][b] = bound(a, b, false)?;
                join[a][b] = bound(a, b, true)?;
            }
        }
        let bottom = (0..n)
            .find(|&c| (0..n).all(|d| leq[c][d]))
            .ok_or_else(|| Error::InvalidLattice("no bottom".into()))?;
        let top = (0..n)
            .find(|&c| (0..n).all(|d| leq[d][c]))
            .ok_or_else(|| Error::InvalidLattice("no top".into()))?;
        Ok(Self {
            labels,
            leq,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// Builds a lattice from explicit tables. Only shapes are checked here;
    /// use [`validate_lattice`] for the algebraic laws.
    pub fn from_tables(
        labels: Vec<String>,
        leq: Vec<Vec<bool>>,
        meet: Vec<Vec<usize>>,
        join: Vec<Vec<usize>>,
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let n = labels.len();
        check_square(&leq, n, "leq")?;
        check_square(&meet, n, "meet")?;
        check_square(&join, n, "join")?;
        let in_range = meet.iter().chain(&join).flatten().all(|&x| x < n);
        if !in_range || bottom >= n || top >= n {
            return Err(Error::InvalidLattice("element index out of range".into()));
        }
        Ok(Self {
            labels,
            leq,
            meet,
            join,
            bottom,
            top,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Elements covered by `a`.
    pub fn lower_covers(&self, a: usize) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&b| b != a && self.leq(b, a))
            .filter(|&b| !(0..n).any(|c| c != a && c != b && self.leq(b, c) && self.leq(c, a)))
            .collect()
    }

    /// Covering pairs `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.lower_covers(a) {
                out.push((b, a));
            }
        }
        out.sort_unstable();
        out
    }

    /// Hasse diagram in DOT format.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(s, "  rankdir=BT;");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", escape(l));
        }
        for (lo, hi) in self.covers() {
            let _ = writeln!(s, "  n{lo} -> n{hi} [arrowhead=none];");
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn check_square<T>(m: &[Vec<T>], n: usize, what: &str) -> Result<()> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidLattice(format!("{what} table is not {n}x{n}")));
    }
    Ok(())
}

impl Serialize for FiniteDistLattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("FiniteDistLattice", 4)?;
        st.serialize_field("elements", &self.labels)?;
        st.serialize_field("covers", &self.covers())?;
        st.serialize_field("bottom", &self.bottom)?;
        st.serialize_field("top", &self.top)?;
        st.end()
    }
}

/// Outcome of checking the lattice laws.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// First violated identity of each kind, with witnesses.
    pub failures: Vec<String>,
}

pub fn validate_lattice(l: &FiniteDistLattice) -> ValidationReport {
    let n = l.len();
    let name = |a: usize| l.label(a).to_string();
    let mut failures = Vec::new();
    let mut first = |kind: &str, found: Option<String>| {
        if let Some(w) = found {
            failures.push(format!("{kind}: {w}"));
        }
    };

    first("reflexivity", (0..n).find(|&a| !l.leq(a, a)).map(&name));
    first(
        "antisymmetry",
        pairs(n)
            .find(|&(a, b)| a != b && l.leq(a, b) && l.leq(b, a))
            .map(|(a, b)| format!("{} and {}", name(a), name(b))),
    );
    first(
        "transitivity",
        triples(n)
            .find(|&(a, b, c)| l.leq(a, b) && l.leq(b, c) && !l.leq(a, c))
            .map(|(a, b, c)| format!("{} <= {} <= {}", name(a), name(b), name(c))),
    );
    first(
        "meet is the greatest lower bound",
        pairs(n)
            .find(|&(a, b)| {
                let m = l.meet(a, b);
                !(l.leq(m, a) && l.leq(m, b)) || (0..n).any(|c| l.leq(c, a) && l.leq(c, b) && !l.leq(c, m))
            })
            .map(|(a, b)| format!("{} ∧ {} = {}", name(a), name(b), name(l.meet(a, b)))),
    );
    first(
        "join is the least upper bound",
        pairs(n)
            .find(|&(a, b)| {
                let j = l.join(a, b);
                !(l.leq(a, j) && l.leq(b, j)) || (0..n).any(|c| l.leq(a, c) && l.leq(b, c) && !l.leq(j, c))
            })
            .map(|(a, b)| format!("{} ∨ {} = {}", name(a), name(b), name(l.join(a, b)))),
    );
    first(
        "bounds",
        (0..n).find(|&a| !l.leq(l.bottom(), a) || !l.leq(a, l.top())).map(&name),
    );
    first(
        "absorption",
        pairs(n)
            .find(|&(a, b)| l.meet(a, l.join(a, b)) != a || l.join(a, l.meet(a, b)) != a)
            .map(|(a, b)| format!("{} and {}", name(a), name(b))),
    );
    first(
        "distributivity",
        triples(n)
            .find(|&(a, b, c)| l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)))
            .map(|(a, b, c)| {
                format!(
                    "{} ∧ ({} ∨ {}) = {} but ({} ∧ {}) ∨ ({} ∧ {}) = {}",
                    name(a),
                    name(b),
                    name(c),
                    name(l.meet(a, l.join(b, c))),
                    name(a),
                    name(b),
                    name(a),
                    name(c),
                    name(l.join(l.meet(a, b), l.meet(a, c)))
                )
            }),
    );

    ValidationReport {
        valid: failures.is_empty(),
        failures,
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
}

/// The poset of join-irreducible elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinIrreduciblePoset {
    /// Lattice element ids, ascending.
    pub members: Vec<usize>,
    /// `order[i][j]` iff `members[i] <= members[j]`.
    pub order: Vec<Vec<bool>>,
}

impl JoinIrreduciblePoset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, element: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == element)
    }
}

pub fn join_irreducibles(l: &FiniteDistLattice) -> JoinIrreduciblePoset {
    let members: Vec<usize> = (0..l.len())
        .filter(|&a| a != l.bottom() && l.lower_covers(a).len() == 1)
        .collect();
    let order = members
        .iter()
        .map(|&p| members.iter().map(|&q| l.leq(p, q)).collect())
        .collect();
    JoinIrreduciblePoset { members, order }
}

/// The Birkhoff map `a ↦ D(a) = {p ∈ J : p ≤ a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirkhoffMap {
    pub irreducibles: JoinIrreduciblePoset,
    /// Indicator of `D(a)` over `irreducibles.members`, one per element.
    pub downsets: Vec<Gf2Vector>,
}

/// Computes `D` and verifies it is a bounded lattice isomorphism onto the
/// downsets of `J(L)`.
///
/// Injectivity together with `D(a ∨ b) = D(a) ∪ D(b)` and principal images of
/// irreducibles shows the image is every downset, since each downset is a
/// union of principal ones.
pub fn birkhoff_downsets(l: &FiniteDistLattice) -> Result<BirkhoffMap> {
    let jp = join_irreducibles(l);
    let k = jp.len();
    let downsets: Vec<Gf2Vector> = (0..l.len())
        .map(|a| Gf2Vector::from_bits(&jp.members.iter().map(|&p| l.leq(p, a)).collect::<Vec<_>>()))
        .collect();
    let fail = |msg: String| Err(Error::InvalidLattice(format!("Birkhoff map: {msg}")));

    if !downsets[l.bottom()].is_zero() {
        return fail("bottom has nonempty downset".into());
    }
    if downsets[l.top()] != Gf2Vector::ones(k) {
        return fail("top does not contain every irreducible".into());
    }
    let mut seen: HashMap<&Gf2Vector, usize> = HashMap::new();
    for (a, d) in downsets.iter().enumerate() {
        if let Some(b) = seen.insert(d, a) {
            return fail(format!("{} and {} share a downset", l.label(a), l.label(b)));
        }
        for i in d.support() {
            for j in 0..k {
                if jp.order[j][i] && !d.get(j) {
                    return fail(format!("image of {} is not a downset", l.label(a)));
                }
            }
        }
    }
    for (pi, &p) in jp.members.iter().enumerate() {
        let principal = Gf2Vector::from_bits(&(0..k).map(|j| jp.order[j][pi]).collect::<Vec<_>>());
        if downsets[p] != principal {
            return fail(format!("image of {} is not principal", l.label(p)));
        }
    }
    for (a, b) in pairs(l.len()) {
        let (da, db) = (&downsets[a], &downsets[b]);
        let union = Gf2Vector::from_bits(&(0..k).map(|i| da.get(i) || db.get(i)).collect::<Vec<_>>());
        if downsets[l.join(a, b)] != union {
            return fail(format!("join of {} and {} is not a union", l.label(a), l.label(b)));
        }
        if downsets[l.meet(a, b)] != da.and(db) {
            return fail(format!(
                "meet of {} and {} is not an intersection",
                l.label(a),
                l.label(b)
            ));
        }
    }
    Ok(BirkhoffMap {
        irreducibles: jp,
        downsets,
    })
}

/// A bounded lattice homomorphism, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeHom {
    pub source: Arc<FiniteDistLattice>,
    pub target: Arc<FiniteDistLattice>,
    pub map: Vec<usize>,
}

impl LatticeHom {
    pub fn new(source: Arc<FiniteDistLattice>, target: Arc<FiniteDistLattice>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&x| x >= target.len()) {
            return Err(Error::InvalidHom("element table has the wrong shape".into()));
        }
        let h = |a: usize| map[a];
        if h(source.bottom()) != target.bottom() {
            return Err(Error::InvalidHom("bottom not preserved".into()));
        }
        if h(source.top()) != target.top() {
            return Err(Error::InvalidHom("top not preserved".into()));
        }
        for (a, b) in pairs(source.len()) {
            if h(source.meet(a, b)) != target.meet(h(a), h(b)) {
                return Err(Error::InvalidHom(format!(
                    "meet of {} and {} not preserved",
                    source.label(a),
                    source.label(b)
                )));
            }
            if h(source.join(a, b)) != target.join(h(a), h(b)) {
                return Err(Error::InvalidHom(format!(
                    "join of {} and {} not preserved",
                    source.label(a),
                    source.label(b)
                )));
            }
        }
        Ok(Self { source, target, map })
    }

    pub fn identity(l: Arc<FiniteDistLattice>) -> Self {
        let map = (0..l.len()).collect();
        Self {
            source: l.clone(),
            target: l,
            map,
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LatticeHom) -> Result<LatticeHom> {
        if *self.target != *next.source {
            return Err(Error::InvalidHom("composition of non-composable homs".into()));
        }
        LatticeHom::new(
            self.source.clone(),
            next.target.clone(),
            self.map.iter().map(|&a| next.map[a]).collect(),
        )
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &b in &self.map {
            if seen[b] {
                return false;
            }
            seen[b] = true;
        }
        self.source.len() == self.target.len()
    }

    /// Inverse of a bijective hom.
    pub fn inverse(&self) -> Option<LatticeHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.target.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        LatticeHom::new(self.target.clone(), self.source.clone(), inv).ok()
    }

    /// Labelled element table.
    pub fn table(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(a, &b)| (self.source.label(a).to_string(), self.target.label(b).to_string()))
            .collect()
    }
}

/// The dual map `J(target) → J(source)`, `q ↦ ⋀{a : q ≤ h(a)}`.
///
/// Entry `i` is the position in `J(source)` of the image of the `i`-th member
/// of `J(target)`. Verifies `q ≤ h(a) ⇔ p(q) ≤ a` for every `a`.
pub fn hom_dual_map(h: &LatticeHom) -> Result<Vec<usize>> {
    let (src, tgt) = (&*h.source, &*h.target);
    let js = join_irreducibles(src);
    let jt = join_irreducibles(tgt);
    let mut out = Vec::with_capacity(jt.len());
    for &q in &jt.members {
        let p = src.meet_all((0..src.len()).filter(|&a| tgt.leq(q, h.apply(a))));
        let Some(pi) = js.position(p) else {
            return Err(Error::InvalidHom(format!(
                "dual image of {} is {}, which is not join-irreducible",
                tgt.label(q),
                src.label(p)
            )));
        };
        for a in 0..src.len() {
            if tgt.leq(q, h.apply(a)) != src.leq(p, a) {
                return Err(Error::InvalidHom(format!(
                    "dual map adjunction fails at {} and {}",
                    tgt.label(q),
                    src.label(a)
                )));
            }
        }
        out.push(pi);
    }
    Ok(out)
}
