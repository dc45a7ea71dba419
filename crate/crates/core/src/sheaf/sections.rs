//! Global sections computed directly from the restriction maps, and
//! monodromy around a parameter circle.

use serde::Serialize;

use super::build::{AbelianSheafRep, LatticeSheaf};
use super::complex::Side;
use crate::error::{Error, Result};
use crate::lattice::{join_irreducibles, LatticeHom};
use crate::rings::Functor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSections {
    pub functor: Functor,
    pub dim: usize,
    /// A basis, when the propagation yields one explicitly.
    pub generators: Option<Vec<Vec<String>>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The single set bit in row `r` (Boolean maps) or column `c` (free maps).
fn unique_in_row(m: &crate::gf2::Gf2Matrix, r: usize) -> Result<usize> {
    let cols: Vec<usize> = (0..m.cols()).filter(|&c| m.get(r, c)).collect();
    match cols[..] {
        [c] => Ok(c),
        _ => Err(Error::InvalidHom(format!(
            "row {r} of a lattice-ring map is not a point evaluation"
        ))),
    }
}

fn unique_in_col(m: &crate::gf2::Gf2Matrix, c: usize) -> Result<usize> {
    let rows: Vec<usize> = (0..m.rows()).filter(|&r| m.get(r, c)).collect();
    match rows[..] {
        [r] => Ok(r),
        _ => Err(Error::InvalidHom(format!(
            "column {c} of a monoid-ring map is not a basis vector"
        ))),
    }
}

/// Global sections by propagation, independent of the Čech complex.
///
/// Lattice-ring sections are functions on the vertex irreducibles that agree
/// wherever two restrictions evaluate at the same edge irreducible, so they
/// are counted by a union-find. Monoid-ring sections solve one parity
/// condition per edge element; the variables are the edges of a graph on
/// those conditions, and the solution count follows from its components.
pub fn global_sections_direct(sheaf: &AbelianSheafRep) -> Result<DirectSections> {
    let nv = sheaf.n_vertices();
    if nv == 0 {
        return Ok(DirectSections {
            functor: sheaf.functor,
            dim: sheaf.edge_bases[0].len(),
            generators: None,
        });
    }
    let interior: Vec<usize> = (0..sheaf.incidences.len())
        .filter(|&k| sheaf.interior_edges.contains(&sheaf.incidences[k].edge))
        .collect();
    let mut v_off = vec![0; nv + 1];
    for v in 0..nv {
        v_off[v + 1] = v_off[v] + sheaf.vertex_bases[v].len();
    }

    match sheaf.functor {
        Functor::Boolean => {
            let mut uf = UnionFind::new(v_off[nv]);
            for &e in &sheaf.interior_edges {
                let lower = sheaf
                    .incidences
                    .iter()
                    .position(|i| i.edge == e && i.side == Side::Lower);
                let upper = sheaf
                    .incidences
                    .iter()
                    .position(|i| i.edge == e && i.side == Side::Upper);
                let (Some(l), Some(u)) = (lower, upper) else {
                    continue;
                };
                let (vl, vu) = (sheaf.incidences[l].vertex, sheaf.incidences[u].vertex);
                for q in 0..sheaf.edge_bases[e].len() {
                    let a = unique_in_row(&sheaf.maps[l].matrix, q)?;
                    let b = unique_in_row(&sheaf.maps[u].matrix, q)?;
                    uf.union(v_off[vl] + a, v_off[vu] + b);
                }
            }
            let mut classes: std::collections::BTreeMap<usize, Vec<String>> = Default::default();
            for (v, (basis, off)) in sheaf.vertex_bases.iter().zip(&v_off).enumerate().take(nv) {
                for (k, label) in basis.iter().enumerate() {
                    let root = uf.find(off + k);
                    classes.entry(root).or_default().push(format!("v{v}:{label}"));
                }
            }
            Ok(DirectSections {
                functor: sheaf.functor,
                dim: classes.len(),
                generators: Some(classes.into_values().collect()),
            })
        }
        Functor::Free => {
            // constraint nodes (edge, element), then one ground node
            let mut e_off = std::collections::BTreeMap::new();
            let mut n_constraints = 0;
            for &e in &sheaf.interior_edges {
                e_off.insert(e, n_constraints);
                n_constraints += sheaf.edge_bases[e].len();
            }
            let ground = n_constraints;
            let mut uf = UnionFind::new(n_constraints + 1);
            let n_vars = v_off[nv];
            for v in 0..nv {
                for a in 0..sheaf.vertex_bases[v].len() {
                    let mut ends = Vec::new();
                    for &k in &interior {
                        let inc = sheaf.incidences[k];
                        if inc.vertex == v {
                            let b = unique_in_col(&sheaf.maps[k].matrix, a)?;
                            ends.push(e_off[&inc.edge] + b);
                        }
                    }
                    match ends[..] {
                        [] => {}
                        [x] => uf.union(x, ground),
                        [x, y] => uf.union(x, y),
                        _ => return Err(Error::InvalidHom("vertex with more than two edges".into())),
                    }
                }
            }
            let ground_root = uf.find(ground);
            let mut roots = std::collections::BTreeSet::new();
            for x in 0..n_constraints {
                let r = uf.find(x);
                if r != ground_root {
                    roots.insert(r);
                }
            }
            Ok(DirectSections {
                functor: sheaf.functor,
                dim: n_vars + roots.len() - n_constraints,
                generators: None,
            })
        }
    }
}

/// All global sections of the lattice sheaf, one element label per vertex
/// (per edge when there are no vertices).
pub fn lattice_global_sections(sheaf: &LatticeSheaf) -> Vec<Vec<String>> {
    let nv = sheaf.vertex_stalks.len();
    if nv == 0 {
        return sheaf.edge_stalks[0]
            .lattice
            .labels()
            .iter()
            .map(|l| vec![l.clone()])
            .collect();
    }
    let interior = sheaf.complex.interior_edges();
    // pairs of restrictions to compare, keyed by the later vertex
    let mut checks: Vec<Vec<(&LatticeHom, usize, &LatticeHom)>> = vec![Vec::new(); nv];
    for &e in &interior {
        let lower = sheaf
            .restrictions
            .iter()
            .find(|r| r.incidence.edge == e && r.incidence.side == Side::Lower);
        let upper = sheaf
            .restrictions
            .iter()
            .find(|r| r.incidence.edge == e && r.incidence.side == Side::Upper);
        if let (Some(l), Some(u)) = (lower, upper) {
            let (vl, vu) = (l.incidence.vertex, u.incidence.vertex);
            let (later, earlier, h_late, h_early) = if vl >= vu {
                (vl, vu, &l.hom, &u.hom)
            } else {
                (vu, vl, &u.hom, &l.hom)
            };
            checks[later].push((h_late, earlier, h_early));
        }
    }
    let mut out = Vec::new();
    let mut choice = Vec::with_capacity(nv);
    dfs(sheaf, &checks, &mut choice, &mut out);
    out
}

fn dfs(
    sheaf: &LatticeSheaf,
    checks: &[Vec<(&LatticeHom, usize, &LatticeHom)>],
    choice: &mut Vec<usize>,
    out: &mut Vec<Vec<String>>,
) {
    let v = choice.len();
    if v == checks.len() {
        out.push(
            choice
                .iter()
                .enumerate()
                .map(|(w, &x)| sheaf.vertex_stalks[w].lattice.label(x).to_string())
                .collect(),
        );
        return;
    }
    for x in 0..sheaf.vertex_stalks[v].len() {
        let ok = checks[v].iter().all(|(h_here, w, h_there)| {
            let there = if *w == v { x } else { choice[*w] };
            h_here.apply(x) == h_there.apply(there)
        });
        if ok {
            choice.push(x);
            dfs(sheaf, checks, choice, out);
            choice.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Monodromy {
    /// Join-irreducibles of the stalk at the base vertex.
    pub basis: Vec<String>,
    /// Image position of each basis element after one loop.
    pub permutation: Vec<usize>,
    pub trivial: bool,
    /// Orbits of the permutation: the invariant dimension of the lattice ring.
    pub boolean_invariant_dim: usize,
    /// Orbits on all lattice elements: the invariant dimension of the monoid ring.
    pub free_invariant_dim: usize,
}

fn orbits(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut count = 0;
    for s in 0..perm.len() {
        if !seen[s] {
            count += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
    }
    count
}

/// Transport once around a parameter circle, starting at vertex 0.
pub fn monodromy(sheaf: &LatticeSheaf) -> Result<Monodromy> {
    if !sheaf.complex.is_circle() {
        return Err(Error::InvalidConfig("monodromy needs a circle parameter space".into()));
    }
    let base = sheaf.vertex_stalks[0].lattice.clone();
    let mut total = LatticeHom::identity(base.clone());
    for (e, edge) in sheaf.complex.edges.iter().enumerate() {
        let find = |side| {
            sheaf
                .restrictions
                .iter()
                .find(|r| r.incidence.edge == e && r.incidence.side == side)
                .ok_or_else(|| Error::NonInvertibleMonodromy(format!("e{e}")))
        };
        let out = &find(Side::Lower)?.hom;
        let back = find(Side::Upper)?
            .hom
            .inverse()
            .ok_or_else(|| Error::NonInvertibleMonodromy(format!("v{} → e{e}", edge.right.unwrap_or(0))))?;
        if !out.is_bijective() {
            return Err(Error::NonInvertibleMonodromy(format!(
                "v{} → e{e}",
                edge.left.unwrap_or(0)
            )));
        }
        total = total.then(out)?.then(&back)?;
    }
    let j = join_irreducibles(&base);
    let permutation = j
        .members
        .iter()
        .map(|&p| {
            j.position(total.apply(p))
                .ok_or_else(|| Error::NonInvertibleMonodromy("irreducible not preserved".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let trivial = permutation.iter().enumerate().all(|(i, &p)| i == p);
    Ok(Monodromy {
        basis: j.members.iter().map(|&p| base.label(p).to_string()).collect(),
        boolean_invariant_dim: orbits(&permutation),
        free_invariant_dim: orbits(&total.map),
        permutation,
        trivial,
    })
}
