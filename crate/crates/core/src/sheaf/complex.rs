//! One-dimensional parameter complexes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Line,
    Ray,
    Segment,
    Circle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Vertex {
    pub lambda: f64,
    /// Parameter slack granted to tangential roots in the vertex portrait.
    pub slack: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Edge {
    /// Vertex at the lower end, if any.
    pub left: Option<usize>,
    /// Vertex at the upper end, if any.
    pub right: Option<usize>,
    pub lo: f64,
    /// Upper end, lifted by one period for the wrapping edge of a circle.
    pub hi: f64,
}

impl Edge {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn at(&self, t: f64) -> f64 {
        self.lo + t * (self.hi - self.lo)
    }

    /// Whether the edge meets two vertices and so indexes a Čech 1-cochain.
    pub fn is_interior(&self) -> bool {
        self.left.is_some() && self.right.is_some()
    }
}

/// Which end of an edge a vertex sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The vertex is the lower end; the edge lies above it.
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Incidence {
    pub vertex: usize,
    pub edge: usize,
    pub side: Side,
}

/// Vertices and open edges decomposing a parameter range.
///
/// Line, ray and segment ranges are finite windows whose outer edges stand
/// for everything beyond the last vertex. A circle of period `hi - lo`
/// always carries at least one vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamComplex {
    pub topology: Topology,
    pub range: (f64, f64),
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl ParamComplex {
    pub fn new(topology: Topology, range: (f64, f64), vertices: Vec<Vertex>) -> Result<Self> {
        let (lo, hi) = range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidConfig(format!(
                "parameter range [{lo}, {hi}] is not a finite interval"
            )));
        }
        let mut vertices = vertices;
        if topology == Topology::Circle {
            let period = hi - lo;
            for v in &mut vertices {
                v.lambda = lo + (v.lambda - lo).rem_euclid(period);
            }
            if vertices.is_empty() {
                vertices.push(Vertex { lambda: lo, slack: 0.0 });
            }
        }
        vertices.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        for w in vertices.windows(2) {
            if w[0].lambda >= w[1].lambda {
                return Err(Error::InvalidConfig(format!("repeated vertex at λ = {}", w[0].lambda)));
            }
        }
        if let Some(v) = vertices.iter().find(|v| !(lo < v.lambda && v.lambda < hi)) {
            if topology != Topology::Circle {
                return Err(Error::InvalidConfig(format!(
                    "vertex λ = {} lies outside the open range ({lo}, {hi})",
                    v.lambda
                )));
            }
        }
        let n = vertices.len();
        let edges = if topology == Topology::Circle {
            let period = hi - lo;
            (0..n)
                .map(|i| Edge {
                    left: Some(i),
                    right: Some((i + 1) % n),
                    lo: vertices[i].lambda,
                    hi: if i + 1 < n {
                        vertices[i + 1].lambda
                    } else {
                        vertices[0].lambda + period
                    },
                })
                .collect()
        } else {
            (0..=n)
                .map(|i| Edge {
                    left: i.checked_sub(1),
                    right: (i < n).then_some(i),
                    lo: if i == 0 { lo } else { vertices[i - 1].lambda },
                    hi: if i == n { hi } else { vertices[i].lambda },
                })
                .collect()
        };
        Ok(Self {
            topology,
            range,
            vertices,
            edges,
        })
    }

    pub fn is_circle(&self) -> bool {
        self.topology == Topology::Circle
    }

    pub fn period(&self) -> Option<f64> {
        self.is_circle().then_some(self.range.1 - self.range.0)
    }

    pub fn incidences(&self) -> Vec<Incidence> {
        let mut out = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if let Some(v) = edge.left {
                out.push(Incidence {
                    vertex: v,
                    edge: e,
                    side: Side::Lower,
                });
            }
            if let Some(v) = edge.right {
                out.push(Incidence {
                    vertex: v,
                    edge: e,
                    side: Side::Upper,
                });
            }
        }
        out
    }

    /// Indices of edges carrying 1-cochains.
    pub fn interior_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_interior()).collect()
    }

    fn wrap(&self, x: f64) -> f64 {
        match self.period() {
            Some(p) => self.range.0 + (x - self.range.0).rem_euclid(p),
            None => x,
        }
    }

    /// A copy with extra vertices at the given values. Values within
    /// `snap` of an existing vertex are absorbed by it.
    pub fn refined(&self, extra: &[f64], slack: f64, snap: f64) -> Result<Self> {
        let mut vs = self.vertices.clone();
        for &x in extra {
            let x = self.wrap(x);
            let dup = vs
                .iter()
                .any(|v| (v.lambda - x).abs() <= snap.max(1e-12 * (1.0 + x.abs())));
            if !dup {
                vs.push(Vertex { lambda: x, slack });
            }
        }
        Self::new(self.topology, self.range, vs)
    }

    /// The vertex value within `snap` of `lambda`, if any.
    pub fn snap(&self, lambda: f64, snap: f64) -> Option<f64> {
        let x = self.wrap(lambda);
        self.vertices
            .iter()
            .map(|v| v.lambda)
            .filter(|v| (v - x).abs() <= snap.max(1e-12 * (1.0 + x.abs())))
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
    }

    pub fn vertex_index(&self, lambda: f64) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| (v.lambda - lambda).abs() <= 1e-12 * (1.0 + lambda.abs()))
    }
}
