//! Assembly of the attractor-lattice sheaf and its abelianizations.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::complex::{Incidence, ParamComplex, Side};
use super::SheafOptions;
use crate::dynamics::attractors::{attractor_lattice, AttractorLattice};
use crate::dynamics::continuation::continuation_hom;
use crate::dynamics::field::ParamField;
use crate::dynamics::portrait::{portrait_with, PortraitOptions};
use crate::error::{Error, Result};
use crate::lattice::LatticeHom;
use crate::rings::{boolean_ring, induced_hom, Functor, RingHomMatrix};

#[derive(Clone, Debug)]
pub struct Restriction {
    pub incidence: Incidence,
    pub hom: LatticeHom,
}

/// Attractor lattices on the cells of a parameter complex with the
/// continuation maps from each vertex into its incident edges.
#[derive(Clone, Debug)]
pub struct LatticeSheaf {
    pub complex: ParamComplex,
    pub vertex_stalks: Vec<AttractorLattice>,
    pub edge_stalks: Vec<AttractorLattice>,
    /// One per incidence, in the order of `ParamComplex::incidences`.
    pub restrictions: Vec<Restriction>,
}

/// A sheaf of GF(2) vector spaces over a parameter complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianSheafRep {
    pub functor: Functor,
    pub vertex_bases: Vec<Vec<String>>,
    pub edge_bases: Vec<Vec<String>>,
    pub incidences: Vec<Incidence>,
    pub maps: Vec<RingHomMatrix>,
    pub interior_edges: Vec<usize>,
    pub circle: bool,
}

impl AbelianSheafRep {
    pub fn vertex_dims(&self) -> Vec<usize> {
        self.vertex_bases.iter().map(Vec::len).collect()
    }

    pub fn edge_dims(&self) -> Vec<usize> {
        self.edge_bases.iter().map(Vec::len).collect()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_bases.len()
    }

    pub fn restriction(&self, vertex: usize, edge: usize, side: Side) -> Option<&RingHomMatrix> {
        self.incidences
            .iter()
            .position(|i| i.vertex == vertex && i.edge == edge && i.side == side)
            .map(|k| &self.maps[k])
    }
}

impl Serialize for AbelianSheafRep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let maps: Vec<serde_json::Value> = self
            .incidences
            .iter()
            .zip(&self.maps)
            .map(|(inc, m)| {
                serde_json::json!({
                    "vertex": inc.vertex,
                    "edge": inc.edge,
                    "side": inc.side,
                    "matrix": m.matrix,
                })
            })
            .collect();
        let mut st = serializer.serialize_struct("AbelianSheafRep", 4)?;
        st.serialize_field("functor", &self.functor)?;
        st.serialize_field("vertex_bases", &self.vertex_bases)?;
        st.serialize_field("edge_bases", &self.edge_bases)?;
        st.serialize_field("restrictions", &maps)?;
        st.end()
    }
}

fn lattice_at(field: &ParamField, lambda: f64, tol_x: f64, slack: f64) -> Result<AttractorLattice> {
    attractor_lattice(&portrait_with(field, lambda, PortraitOptions { tol_x, slack })?)
}

/// Continues the vertex stalk along the straight path to the edge sample.
///
/// The first step shrinks until it leaves the vertex into the edge's
/// signature region; later steps are bisected whenever continuation fails.
fn restrict(
    field: &ParamField,
    from: (f64, &AttractorLattice),
    to: (f64, &AttractorLattice),
    opts: &SheafOptions,
) -> Result<LatticeHom> {
    let (v, src) = from;
    let (s, target) = to;
    let sig = target.signature();
    let min_step = 1e-6 * opts.tol_lambda.max(1e-15);
    let fail = |reason: &str| Error::Continuation {
        from: v,
        to: s,
        reason: reason.to_string(),
    };

    let mut h = 0.5 * (s - v);
    let (mut cur, mut lat, mut hom) = loop {
        if h.abs() < min_step {
            return Err(fail("no admissible first step out of the vertex"));
        }
        let l1 = v + h;
        let lat1 = lattice_at(field, l1, opts.tol_x, 0.0)?;
        if lat1.signature() == sig {
            if let Ok(hom) = continuation_hom(src, &lat1) {
                break (l1, lat1, hom);
            }
        }
        h *= 0.5;
    };

    while cur != s {
        let mut next = s;
        loop {
            if (next - cur).abs() < min_step {
                return Err(fail("continuation step collapsed"));
            }
            let step_lat = if next == s {
                target.clone()
            } else {
                lattice_at(field, next, opts.tol_x, 0.0)?
            };
            if step_lat.signature() == sig {
                if let Ok(step) = continuation_hom(&lat, &step_lat) {
                    hom = hom.then(&step)?;
                    cur = next;
                    lat = step_lat;
                    break;
                }
            }
            next = 0.5 * (cur + next);
        }
    }
    Ok(hom)
}

pub fn build_lattice_sheaf(field: &ParamField, complex: &ParamComplex, opts: &SheafOptions) -> Result<LatticeSheaf> {
    let vertex_stalks = opts
        .exec
        .try_map(&complex.vertices, |v| lattice_at(field, v.lambda, opts.tol_x, v.slack))?;
    let edge_stalks = opts.exec.try_map(&complex.edges, |e| {
        let mid = lattice_at(field, e.midpoint(), opts.tol_x, 0.0)?;
        for t in [1.0 / 3.0, 2.0 / 3.0] {
            if lattice_at(field, e.at(t), opts.tol_x, 0.0)?.signature() != mid.signature() {
                return Err(Error::NonConstantEdge { lo: e.lo, hi: e.hi });
            }
        }
        Ok(mid)
    })?;
    let incidences = complex.incidences();
    let restrictions = opts.exec.try_map(&incidences, |inc| {
        let e = &complex.edges[inc.edge];
        let v_lambda = match inc.side {
            Side::Lower => e.lo,
            Side::Upper => e.hi,
        };
        let hom = restrict(
            field,
            (v_lambda, &vertex_stalks[inc.vertex]),
            (e.midpoint(), &edge_stalks[inc.edge]),
            opts,
        )?;
        Ok::<_, Error>(Restriction { incidence: *inc, hom })
    })?;
    Ok(LatticeSheaf {
        complex: complex.clone(),
        vertex_stalks,
        edge_stalks,
        restrictions,
    })
}

fn basis(l: &AttractorLattice, functor: Functor) -> Result<Vec<String>> {
    Ok(match functor {
        Functor::Boolean => boolean_ring(&l.lattice)?.labels,
        Functor::Free => l.lattice.labels().to_vec(),
    })
}

pub fn abelianize(sheaf: &LatticeSheaf, functor: Functor) -> Result<AbelianSheafRep> {
    Ok(AbelianSheafRep {
        functor,
        vertex_bases: sheaf
            .vertex_stalks
            .iter()
            .map(|l| basis(l, functor))
            .collect::<Result<_>>()?,
        edge_bases: sheaf
            .edge_stalks
            .iter()
            .map(|l| basis(l, functor))
            .collect::<Result<_>>()?,
        incidences: sheaf.restrictions.iter().map(|r| r.incidence).collect(),
        maps: sheaf
            .restrictions
            .iter()
            .map(|r| induced_hom(&r.hom, functor))
            .collect::<Result<_>>()?,
        interior_edges: sheaf.complex.interior_edges(),
        circle: sheaf.complex.is_circle(),
    })
}

pub fn build_sheaf(
    field: &ParamField,
    complex: &ParamComplex,
    functor: Functor,
    opts: &SheafOptions,
) -> Result<(LatticeSheaf, AbelianSheafRep)> {
    let lattices = build_lattice_sheaf(field, complex, opts)?;
    let abelian = abelianize(&lattices, functor)?;
    Ok((lattices, abelian))
}

impl LatticeSheaf {
    /// DOT rendering: cells as nodes, restrictions as labelled arrows.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph sheaf {\n  rankdir=LR;\n");
        for (i, (v, l)) in self.complex.vertices.iter().zip(&self.vertex_stalks).enumerate() {
            out.push_str(&format!(
                "  v{i} [shape=box, label=\"v{i}\\nλ = {:.6}\\n|L| = {}\"];\n",
                v.lambda,
                l.len()
            ));
        }
        for (i, (e, l)) in self.complex.edges.iter().zip(&self.edge_stalks).enumerate() {
            out.push_str(&format!(
                "  e{i} [shape=ellipse, label=\"e{i}\\n({:.6}, {:.6})\\n|L| = {}\"];\n",
                e.lo,
                e.hi,
                l.len()
            ));
        }
        for r in &self.restrictions {
            let inc = r.incidence;
            let image: Vec<String> = r.hom.table().iter().map(|(a, b)| format!("{a}↦{b}")).collect();
            out.push_str(&format!(
                "  v{} -> e{} [label=\"{}\"];\n",
                inc.vertex,
                inc.edge,
                image.join(", ").replace('"', "'")
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::complex::{Topology, Vertex};

    fn complex(vs: &[f64], range: (f64, f64)) -> ParamComplex {
        let v = vs
            .iter()
            .map(|&l| Vertex {
                lambda: l,
                slack: 1e-12,
            })
            .collect();
        ParamComplex::new(Topology::Line, range, v).unwrap()
    }

    #[test]
    fn pitchfork_stalks() {
        let f = ParamField::polynomial(vec![vec![0.0], vec![0.0, 1.0], vec![0.0], vec![-1.0]]);
        let (_, a) = build_sheaf(
            &f,
            &complex(&[0.0], (-1.0, 1.0)),
            Functor::Boolean,
            &SheafOptions::default(),
        )
        .unwrap();
        assert_eq!(a.vertex_dims(), vec![3]);
        assert_eq!(a.edge_dims(), vec![3, 5]);
        let up = a.restriction(0, 1, Side::Lower).unwrap();
        assert_eq!(up.matrix.rank(), 3);
    }

    #[test]
    fn saddle_node_free_stalks() {
        let f = ParamField::polynomial(vec![vec![0.0, 1.0], vec![0.0], vec![-1.0]]);
        let (l, a) = build_sheaf(
            &f,
            &complex(&[0.0], (-1.0, 1.0)),
            Functor::Free,
            &SheafOptions::default(),
        )
        .unwrap();
        assert_eq!(a.vertex_dims(), vec![4]);
        assert_eq!(a.edge_dims(), vec![3, 8]);
        assert!(l.to_dot().contains("v0 -> e1"));
    }
}
