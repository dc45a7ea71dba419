//! The lattice-ring (Booleanization) and free monoid-ring functors over GF(2).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::lattice::{birkhoff_downsets, hom_dual_map, FiniteDistLattice, LatticeHom};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functor {
    Boolean,
    Free,
}

impl Functor {
    pub const ALL: [Functor; 2] = [Functor::Boolean, Functor::Free];

    pub fn name(self) -> &'static str {
        match self {
            Functor::Boolean => "boolean",
            Functor::Free => "free",
        }
    }
}

impl std::str::FromStr for Functor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boolean" => Ok(Functor::Boolean),
            "free" => Ok(Functor::Free),
            other => Err(Error::InvalidConfig(format!("unknown functor {other:?}"))),
        }
    }
}

/// The lattice ring as the coordinate space on join-irreducibles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BooleanRingRep {
    /// Lattice element ids of the join-irreducibles.
    pub basis: Vec<usize>,
    pub labels: Vec<String>,
    /// `j(a)`, the indicator of `D(a)`, one per lattice element.
    pub j_table: Vec<Gf2Vector>,
}

impl BooleanRingRep {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn boolean_ring(l: &FiniteDistLattice) -> Result<BooleanRingRep> {
    let b = birkhoff_downsets(l)?;
    let k = b.irreducibles.len();
    let j = &b.downsets;
    let fail = |msg: String| Err(Error::InvalidLattice(format!("lattice ring: {msg}")));
    if !j[l.bottom()].is_zero() || j[l.top()] != Gf2Vector::ones(k) {
        return fail("bounds are not 0 and 1".into());
    }
    for x in 0..l.len() {
        for y in 0..l.len() {
            let prod = j[x].and(&j[y]);
            if j[l.meet(x, y)] != prod {
                return fail(format!("j is not multiplicative at {}, {}", l.label(x), l.label(y)));
            }
            // a ∨ b = a + b + ab in a Boolean ring
            if j[l.join(x, y)] != j[x].sum(&j[y]).sum(&prod) {
                return fail(format!("join identity fails at {}, {}", l.label(x), l.label(y)));
            }
        }
    }
    Ok(BooleanRingRep {
        labels: b.irreducibles.members.iter().map(|&p| l.label(p).to_string()).collect(),
        basis: b.irreducibles.members,
        j_table: b.downsets,
    })
}

/// The monoid ring: formal GF(2) sums of lattice elements, multiplied by meet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidRingRep {
    pub labels: Vec<String>,
    pub mult_table: Vec<Vec<usize>>,
}

impl MonoidRingRep {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn multiply(&self, x: &Gf2Vector, y: &Gf2Vector) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(self.dim());
        for a in x.support() {
            for b in y.support() {
                out.flip(self.mult_table[a][b]);
            }
        }
        out
    }
}

pub fn monoid_ring(l: &FiniteDistLattice) -> MonoidRingRep {
    let n = l.len();
    MonoidRingRep {
        labels: l.labels().to_vec(),
        mult_table: (0..n).map(|a| (0..n).map(|b| l.meet(a, b)).collect()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingHomMatrix {
    pub functor: Functor,
    pub matrix: Gf2Matrix,
}

pub fn induced_hom(h: &LatticeHom, functor: Functor) -> Result<RingHomMatrix> {
    let matrix = match functor {
        Functor::Free => {
            let mut m = Gf2Matrix::zeros(h.target.len(), h.source.len());
            for a in 0..h.source.len() {
                m.set(h.apply(a), a, true);
            }
            m
        }
        Functor::Boolean => {
            let dual = hom_dual_map(h)?;
            let src = boolean_ring(&h.source)?;
            let tgt = boolean_ring(&h.target)?;
            let mut m = Gf2Matrix::zeros(tgt.dim(), src.dim());
            for (q, &p) in dual.iter().enumerate() {
                m.set(q, p, true);
            }
            for a in 0..h.source.len() {
                if m.mul_vec(&src.j_table[a]) != tgt.j_table[h.apply(a)] {
                    return Err(Error::InvalidHom(format!(
                        "induced ring map disagrees with the lattice map at {}",
                        h.source.label(a)
                    )));
                }
            }
            m
        }
    };
    Ok(RingHomMatrix { functor, matrix })
}

/// Results of checking the fundamental sequence `0 → ker j → Z₂L → RL → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub surjective: bool,
    pub dims_add_up: bool,
    pub generators_in_kernel: bool,
    pub kernel_in_generator_span: bool,
}

impl GeneratorCheck {
    pub fn passed(&self) -> bool {
        self.surjective && self.dims_add_up && self.generators_in_kernel && self.kernel_in_generator_span
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JKernel {
    /// `j` as a matrix from the monoid ring basis to the lattice ring basis.
    pub j: Gf2Matrix,
    pub kernel: Vec<Gf2Vector>,
    /// Distinct nonzero vectors `[a∨b]+[a]+[b]+[a∧b]`, together with `[⊥]`.
    pub generators: Vec<Gf2Vector>,
    pub check: GeneratorCheck,
}

pub fn j_map_and_kernel(l: &FiniteDistLattice) -> Result<JKernel> {
    let ring = boolean_ring(l)?;
    let n = l.len();
    let j = Gf2Matrix::from_columns(ring.dim(), &ring.j_table);
    let kernel = j.kernel_basis();

    let mut gens: BTreeSet<Gf2Vector> = BTreeSet::new();
    gens.insert(Gf2Vector::unit(n, l.bottom()));
    for a in 0..n {
        for b in a + 1..n {
            let g = Gf2Vector::from_support(n, [l.join(a, b), a, b, l.meet(a, b)]);
            if !g.is_zero() {
                gens.insert(g);
            }
        }
    }
    let generators: Vec<Gf2Vector> = gens.into_iter().collect();

    let gen_matrix = Gf2Matrix::from_columns(n, &generators);
    let check = GeneratorCheck {
        surjective: j.rank() == ring.dim(),
        dims_add_up: kernel.len() + ring.dim() == n,
        generators_in_kernel: generators.iter().all(|g| j.mul_vec(g).is_zero()),
        kernel_in_generator_span: kernel.iter().all(|k| gen_matrix.column_space_contains(k)),
    };
    Ok(JKernel {
        j,
        kernel,
        generators,
        check,
    })
}
