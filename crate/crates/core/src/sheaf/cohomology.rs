//! Čech cohomology over the open-star cover: absolute, relative and
//! Mayer–Vietoris.

use serde::Serialize;

use super::build::AbelianSheafRep;
use super::complex::ParamComplex;
use super::subset::ParamSubset;
use crate::error::{Error, Result};
use crate::gf2::{cone_cohomology, CochainComplex, Gf2Matrix, Gf2Vector};
use crate::rings::Functor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyResult {
    pub functor: Functor,
    #[serde(rename = "H0")]
    pub h0: usize,
    #[serde(rename = "H1")]
    pub h1: usize,
    #[serde(rename = "H2")]
    pub h2: usize,
    /// Each generator as its nonzero terms `cell:basis-label`.
    pub generators_h0: Vec<Vec<String>>,
    pub generators_h1: Vec<Vec<String>>,
    pub cover: String,
}

impl CohomologyResult {
    pub fn dims(&self) -> [usize; 3] {
        [self.h0, self.h1, self.h2]
    }
}

/// Cells spanning a cochain complex, with coordinate offsets.
#[derive(Clone, Debug)]
struct Layout {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    v_off: Vec<usize>,
    e_off: Vec<usize>,
    dim0: usize,
    dim1: usize,
}

impl Layout {
    fn new(sheaf: &AbelianSheafRep, vertices: Vec<usize>, edges: Vec<usize>) -> Self {
        let mut v_off = Vec::with_capacity(vertices.len());
        let mut dim0 = 0;
        for &v in &vertices {
            v_off.push(dim0);
            dim0 += sheaf.vertex_bases[v].len();
        }
        let mut e_off = Vec::with_capacity(edges.len());
        let mut dim1 = 0;
        for &e in &edges {
            e_off.push(dim1);
            dim1 += sheaf.edge_bases[e].len();
        }
        Self {
            vertices,
            edges,
            v_off,
            e_off,
            dim0,
            dim1,
        }
    }

    fn v_pos(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v).map(|i| self.v_off[i])
    }

    fn e_pos(&self, e: usize) -> Option<usize> {
        self.edges.iter().position(|&x| x == e).map(|i| self.e_off[i])
    }

    fn v_labels(&self, sheaf: &AbelianSheafRep) -> Vec<String> {
        self.vertices
            .iter()
            .flat_map(|&v| sheaf.vertex_bases[v].iter().map(move |b| format!("v{v}:{b}")))
            .collect()
    }

    fn e_labels(&self, sheaf: &AbelianSheafRep) -> Vec<String> {
        self.edges
            .iter()
            .flat_map(|&e| sheaf.edge_bases[e].iter().map(move |b| format!("e{e}:{b}")))
            .collect()
    }

    /// Coordinate projection from `self` onto the cells of `sub`.
    fn projection(&self, sub: &Layout, sheaf: &AbelianSheafRep) -> (Gf2Matrix, Gf2Matrix) {
        let mut p0 = Gf2Matrix::zeros(sub.dim0, self.dim0);
        for &v in &sub.vertices {
            let (s, t) = (
                sub.v_pos(v).expect("sub vertex"),
                self.v_pos(v).expect("vertex in total"),
            );
            for k in 0..sheaf.vertex_bases[v].len() {
                p0.set(s + k, t + k, true);
            }
        }
        let mut p1 = Gf2Matrix::zeros(sub.dim1, self.dim1);
        for &e in &sub.edges {
            let (s, t) = (sub.e_pos(e).expect("sub edge"), self.e_pos(e).expect("edge in total"));
            for k in 0..sheaf.edge_bases[e].len() {
                p1.set(s + k, t + k, true);
            }
        }
        (p0, p1)
    }
}

/// Coboundary on the cells of `layout`. With `closed` unset, vertices missing
/// from the layout carry zero cochains (the relative complex); otherwise a
/// missing vertex is an error.
fn coboundary_with(sheaf: &AbelianSheafRep, layout: &Layout, closed: bool) -> Result<Gf2Matrix> {
    let mut d = Gf2Matrix::zeros(layout.dim1, layout.dim0);
    for (inc, m) in sheaf.incidences.iter().zip(&sheaf.maps) {
        let Some(row) = layout.e_pos(inc.edge) else {
            continue;
        };
        let Some(col) = layout.v_pos(inc.vertex) else {
            if !closed {
                continue;
            }
            return Err(Error::InvalidSubset(format!(
                "edge e{} is included without its vertex v{}",
                inc.edge, inc.vertex
            )));
        };
        let m = &m.matrix;
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if m.get(r, c) {
                    d.flip(row + r, col + c);
                }
            }
        }
    }
    Ok(d)
}

fn coboundary(sheaf: &AbelianSheafRep, layout: &Layout) -> Result<Gf2Matrix> {
    coboundary_with(sheaf, layout, true)
}

fn terms(labels: &[String], v: &Gf2Vector) -> Vec<String> {
    v.support().into_iter().map(|i| labels[i].clone()).collect()
}

fn result_from(sheaf: &AbelianSheafRep, layout: &Layout, delta: &Gf2Matrix, cover: String) -> CohomologyResult {
    let vl = layout.v_labels(sheaf);
    let el = layout.e_labels(sheaf);
    let ker = delta.kernel_basis();
    let coker = delta.cokernel_representatives();
    CohomologyResult {
        functor: sheaf.functor,
        h0: ker.len(),
        h1: coker.len(),
        h2: 0,
        generators_h0: ker.iter().map(|v| terms(&vl, v)).collect(),
        generators_h1: coker.iter().map(|v| terms(&el, v)).collect(),
        cover,
    }
}

fn full_layout(sheaf: &AbelianSheafRep) -> Layout {
    Layout::new(sheaf, (0..sheaf.n_vertices()).collect(), sheaf.interior_edges.clone())
}

pub fn cohomology(sheaf: &AbelianSheafRep) -> Result<CohomologyResult> {
    if sheaf.n_vertices() == 0 {
        // a single edge covers the whole line
        let basis = &sheaf.edge_bases[0];
        return Ok(CohomologyResult {
            functor: sheaf.functor,
            h0: basis.len(),
            h1: 0,
            h2: 0,
            generators_h0: basis.iter().map(|b| vec![format!("e0:{b}")]).collect(),
            generators_h1: Vec::new(),
            cover: "single edge".into(),
        });
    }
    let layout = full_layout(sheaf);
    let delta = coboundary(sheaf, &layout)?;
    let cover = format!(
        "open stars of {} vertices, {} double overlaps",
        layout.vertices.len(),
        layout.edges.len()
    );
    Ok(result_from(sheaf, &layout, &delta, cover))
}

/// Cells of the complex lying in `sub`.
fn sub_layout(sheaf: &AbelianSheafRep, complex: &ParamComplex, sub: &ParamSubset, inside: bool) -> Layout {
    let period = complex.period();
    let verts = (0..complex.vertices.len())
        .filter(|&v| sub.contains_mod(complex.vertices[v].lambda, period) == inside)
        .collect();
    let edges = sheaf
        .interior_edges
        .iter()
        .copied()
        .filter(|&e| sub.contains_mod(complex.edges[e].midpoint(), period) == inside)
        .collect();
    Layout::new(sheaf, verts, edges)
}

fn check_representable(complex: &ParamComplex, sub: &ParamSubset) -> Result<()> {
    if complex.is_circle() && sub.has_rays() {
        return Err(Error::InvalidSubset(
            "rays are not subsets of a parameter circle".into(),
        ));
    }
    for a in sub.endpoints() {
        if complex.vertex_index(a).is_none() {
            return Err(Error::InvalidSubset(format!(
                "endpoint {a} is not a vertex of the parameter complex; refine first"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeCohomology {
    pub subset: String,
    #[serde(flatten)]
    pub result: CohomologyResult,
    /// `[H^0, H^1, H^2]` of the mapping cone.
    pub cone: [usize; 3],
    /// The same from the complex of cochains vanishing on the subset.
    pub subcomplex: [usize; 3],
    pub absolute: [usize; 2],
    pub on_subset: [usize; 2],
    /// Alternating sum along the long exact sequence of the pair.
    pub les_alternating_sum: i64,
    /// When `H^1(Λ) = 0` the relative groups are the kernel and cokernel of
    /// restriction `H^0(Λ) → H^0(Λ')`; `None` if that does not apply.
    pub closed_form_agrees: Option<bool>,
}

/// `H^k(Λ, Λ'; F)`. Endpoints of `sub` must be vertices of `complex`.
pub fn relative_cohomology(
    sheaf: &AbelianSheafRep,
    complex: &ParamComplex,
    sub: &ParamSubset,
) -> Result<RelativeCohomology> {
    check_representable(complex, sub)?;
    if sheaf.n_vertices() == 0 {
        return Err(Error::InvalidSubset("complex without vertices".into()));
    }
    let total = full_layout(sheaf);
    let delta = coboundary(sheaf, &total)?;
    let on = sub_layout(sheaf, complex, sub, true);
    let off = sub_layout(sheaf, complex, sub, false);
    let delta_sub = coboundary(sheaf, &on)?;
    let delta_rel = coboundary_with(sheaf, &off, false)?;

    let (i0, i1) = total.projection(&on, sheaf);
    let cone = cone_cohomology(
        &i0,
        &i1,
        &CochainComplex::new(delta.clone()),
        &CochainComplex::new(delta_sub.clone()),
    )?;
    let rel = result_from(sheaf, &off, &delta_rel, format!("relative to {sub}"));
    let subcomplex = [rel.h0, rel.h1, 0];
    if cone != subcomplex {
        return Err(Error::NotExact(format!(
            "cone {cone:?} and subcomplex {subcomplex:?} disagree for {sub}"
        )));
    }

    let (h0, h1) = CochainComplex::new(delta.clone()).cohomology_dims();
    let (s0, s1) = CochainComplex::new(delta_sub).cohomology_dims();
    let les = cone[0] as i64 - h0 as i64 + s0 as i64 - cone[1] as i64 + h1 as i64 - s1 as i64 + cone[2] as i64;

    let closed_form_agrees = (h1 == 0).then(|| {
        let ker = delta.kernel_basis();
        let images: Vec<Gf2Vector> = ker.iter().map(|k| i0.mul_vec(k)).collect();
        let r = Gf2Matrix::from_columns(on.dim0, &images).rank();
        cone[0] == h0 - r && cone[1] == s0 - r
    });

    Ok(RelativeCohomology {
        subset: sub.to_string(),
        result: rel,
        cone,
        subcomplex,
        absolute: [h0, h1],
        on_subset: [s0, s1],
        les_alternating_sum: les,
        closed_form_agrees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MayerVietoris {
    /// `[Λ, Λ1, Λ2, Λ1 ∩ Λ2]` with `Λ1 = (−∞, b]`, `Λ2 = [a, ∞)`.
    pub h0: [usize; 4],
    pub h1: [usize; 4],
    pub rank_alpha0: usize,
    pub rank_beta0: usize,
    pub rank_alpha1: usize,
    pub rank_beta1: usize,
    pub exact: bool,
    /// `H^*(Λ)` from the sequence matches `cohomology()`.
    pub consistent: bool,
}

/// Rank of the map induced on `H^1` by a chain map with degree-1 part `q`,
/// from a complex with coboundary `d_src` to one with coboundary `d_tgt`.
fn h1_rank(q: &Gf2Matrix, d_src: &Gf2Matrix, d_tgt: &Gf2Matrix) -> Result<usize> {
    let reps = d_src.cokernel_representatives();
    let images: Vec<Gf2Vector> = reps.iter().map(|r| q.mul_vec(r)).collect();
    let qm = Gf2Matrix::from_columns(d_tgt.rows(), &images);
    Ok(qm.hstack(d_tgt)?.rank() - d_tgt.rank())
}

/// Verifies the Mayer–Vietoris sequence of the closed cover
/// `Λ = (−∞, b] ∪ [a, ∞)`; `a < b` must be vertices.
pub fn mayer_vietoris(sheaf: &AbelianSheafRep, complex: &ParamComplex, a: f64, b: f64) -> Result<MayerVietoris> {
    if complex.is_circle() || !(a < b) {
        return Err(Error::InvalidSubset("Mayer-Vietoris needs a < b on a line".into()));
    }
    let l1 = ParamSubset::left_ray(b);
    let l2 = ParamSubset::right_ray(a);
    let l12 = ParamSubset::segment(a, b);
    for s in [&l1, &l2] {
        check_representable(complex, s)?;
    }
    let total = full_layout(sheaf);
    let lay = [
        total.clone(),
        sub_layout(sheaf, complex, &l1, true),
        sub_layout(sheaf, complex, &l2, true),
        sub_layout(sheaf, complex, &l12, true),
    ];
    let d: Vec<Gf2Matrix> = lay.iter().map(|l| coboundary(sheaf, l)).collect::<Result<_>>()?;
    let dims: Vec<(usize, usize)> = d
        .iter()
        .map(|m| CochainComplex::new(m.clone()).cohomology_dims())
        .collect();

    // α: C(Λ) → C(Λ1) ⊕ C(Λ2), β: C(Λ1) ⊕ C(Λ2) → C(Λ12)
    let (p10, p11) = lay[0].projection(&lay[1], sheaf);
    let (p20, p21) = lay[0].projection(&lay[2], sheaf);
    let (q10, q11) = lay[1].projection(&lay[3], sheaf);
    let (q20, q21) = lay[2].projection(&lay[3], sheaf);
    let alpha0 = p10.vstack(&p20)?;
    let alpha1 = p11.vstack(&p21)?;
    let beta0 = q10.hstack(&q20)?;
    let beta1 = q11.hstack(&q21)?;
    let d12 = d[1].block_diag(&d[2]);

    let on_h0 = |m: &Gf2Matrix, dsrc: &Gf2Matrix| {
        let ker = dsrc.kernel_basis();
        let images: Vec<Gf2Vector> = ker.iter().map(|k| m.mul_vec(k)).collect();
        Gf2Matrix::from_columns(m.rows(), &images).rank()
    };
    let ra0 = on_h0(&alpha0, &d[0]);
    let rb0 = on_h0(&beta0, &d12);
    let ra1 = h1_rank(&alpha1, &d[0], &d12)?;
    let rb1 = h1_rank(&beta1, &d12, &d[3])?;

    let h0 = [dims[0].0, dims[1].0, dims[2].0, dims[3].0];
    let h1 = [dims[0].1, dims[1].1, dims[2].1, dims[3].1];
    let (g, k) = (h0.map(|x| x as i64), h1.map(|x| x as i64));
    let (a0, b0, a1, b1) = (ra0 as i64, rb0 as i64, ra1 as i64, rb1 as i64);
    let exact = a0 == g[0] && g[1] + g[2] - b0 == a0 && k[0] - a1 == g[3] - b0 && k[1] + k[2] - b1 == a1 && b1 == k[3];
    let absolute = cohomology(sheaf)?;
    let consistent = absolute.h0 == h0[0] && absolute.h1 == h1[0];
    if !exact {
        return Err(Error::NotExact(format!(
            "H0 {h0:?}, H1 {h1:?}, ranks α0 {ra0} β0 {rb0} α1 {ra1} β1 {rb1}"
        )));
    }
    Ok(MayerVietoris {
        h0,
        h1,
        rank_alpha0: ra0,
        rank_beta0: rb0,
        rank_alpha1: ra1,
        rank_beta1: rb1,
        exact,
        consistent,
    })
}
