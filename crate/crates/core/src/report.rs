//! Bundled JSON report with DOT and CSV side files.

use serde_json::{json, Map, Value};

use crate::catalog::{classify_pattern_with, Catalog};
use crate::config::AnalysisConfig;
use crate::error::Result;
use crate::exec::Execution;
use crate::lattice::join_irreducibles;
use crate::sheaf::{global_sections_direct, lattice_global_sections, monodromy, Analysis, Topology};

/// Lattice sections beyond this many are counted but not listed.
const MAX_LISTED_SECTIONS: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub json: String,
    pub sheaf_dot: String,
    pub hasse_dot: String,
    pub csv: String,
}

/// Rebuilds every object with keys in sorted order, independent of how
/// `serde_json` stores maps.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k, canonical(v)))
                    .collect::<Map<_, _>>(),
            )
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: serde::Serialize>(v: &T) -> String {
    let v = canonical(serde_json::to_value(v).expect("value serializes"));
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn bifurcation_csv(a: &Analysis) -> String {
    let mut out = String::from("index,lambda,pinned,signature\n");
    for (i, b) in a.detection.bifurcations.iter().enumerate() {
        out.push_str(&format!("{i},{},{},{}\n", b.lambda, b.pinned, csv_field(&b.signature)));
    }
    out
}

pub fn hasse_dot(a: &Analysis) -> String {
    let s = &a.lattices;
    let mut out = String::new();
    for (i, (v, l)) in s.complex.vertices.iter().zip(&s.vertex_stalks).enumerate() {
        out.push_str(&l.lattice.to_dot(&format!("v{i} λ={}", v.lambda)));
    }
    for (i, (e, l)) in s.complex.edges.iter().zip(&s.edge_stalks).enumerate() {
        out.push_str(&l.lattice.to_dot(&format!("e{i} λ={}", e.midpoint())));
    }
    out
}

fn cell_summary(kind: &str, index: usize, l: &crate::dynamics::AttractorLattice) -> Value {
    let j = join_irreducibles(&l.lattice);
    json!({
        "cell": format!("{kind}{index}"),
        "stalk": l,
        "size": l.len(),
        "join_irreducibles": j.members.iter().map(|&m| l.lattice.label(m)).collect::<Vec<_>>(),
    })
}

fn error_value(e: &crate::Error) -> Value {
    json!({ "error": e.to_string() })
}

impl Report {
    pub fn build(config: &AnalysisConfig, exec: Execution) -> Result<Report> {
        config.validate()?;
        let mut opts = config.options();
        opts.exec = exec;
        let p = &config.parameter;
        let a = Analysis::run(&config.system, p.topology, p.range, &p.pinned, &p.refine, &opts)?;

        let cells = json!({
            "vertices": a.lattices.vertex_stalks.iter().enumerate().map(|(i, l)| cell_summary("v", i, l)).collect::<Vec<_>>(),
            "edges": a.lattices.edge_stalks.iter().enumerate().map(|(i, l)| cell_summary("e", i, l)).collect::<Vec<_>>(),
        });
        let restrictions: Vec<Value> = a
            .lattices
            .restrictions
            .iter()
            .map(|r| {
                json!({
                    "vertex": r.incidence.vertex,
                    "edge": r.incidence.edge,
                    "side": r.incidence.side,
                    "map": r.hom.table(),
                })
            })
            .collect();

        let mut functors = Map::new();
        let mut computed = Vec::new();
        for &f in &config.functors {
            let sheaf = a.abelian(f)?;
            let coh = a.cohomology(f)?;
            let direct = global_sections_direct(&sheaf)?;
            let relative = config
                .relative
                .iter()
                .map(|s| a.relative(f, s))
                .collect::<Result<Vec<_>>>()?;
            for r in &relative {
                computed.push((f, Some(r.subset.clone()), r.result.dims()));
            }
            computed.push((f, None, coh.dims()));
            let mv = if p.topology != Topology::Circle && a.detection.bifurcations.len() >= 2 {
                let v = a.detection.values();
                let (lo, hi) = (v[0], v[1]);
                let (s, t) = (lo + (hi - lo) / 3.0, lo + 2.0 * (hi - lo) / 3.0);
                serde_json::to_value(a.mayer_vietoris(f, s, t)?).expect("serializes")
            } else {
                Value::Null
            };
            functors.insert(
                f.name().to_string(),
                json!({
                    "sheaf": sheaf,
                    "stalk_dims": { "vertices": sheaf.vertex_dims(), "edges": sheaf.edge_dims() },
                    "cohomology": coh,
                    "direct_sections": direct,
                    "sections_agree": direct.dim == coh.h0,
                    "relative": relative,
                    "mayer_vietoris": mv,
                }),
            );
        }

        let sections = lattice_global_sections(&a.lattices);
        let lattice_sections = json!({
            "count": sections.len(),
            "listed": sections.iter().take(MAX_LISTED_SECTIONS).collect::<Vec<_>>(),
        });

        let classification = match classify_pattern_with(&Catalog::builtin(), &a, p.topology, p.range, &p.pinned) {
            Ok(m) => serde_json::to_value(m).expect("serializes"),
            Err(e) => error_value(&e),
        };

        let monodromy_value = if a.complex.is_circle() {
            match monodromy(&a.lattices) {
                Ok(m) => serde_json::to_value(m).expect("serializes"),
                Err(e) => error_value(&e),
            }
        } else {
            Value::Null
        };

        let comparisons: Vec<Value> = config
            .expected
            .iter()
            .map(|e| {
                let sub = e.relative.as_ref().map(|s| s.to_string());
                let got = computed
                    .iter()
                    .find(|(f, s, _)| *f == e.functor && *s == sub)
                    .and_then(|(_, _, d)| d.get(e.degree).copied());
                json!({
                    "functor": e.functor,
                    "degree": e.degree,
                    "relative": sub,
                    "expected": e.dim,
                    "computed": got,
                    "agrees": got == Some(e.dim),
                })
            })
            .collect();

        let value = canonical(json!({
            "config": config,
            "bifurcations": a.detection.bifurcations,
            "regions": a.detection.regions,
            "complex": a.complex,
            "cells": cells,
            "restrictions": restrictions,
            "functors": functors,
            "lattice_sections": lattice_sections,
            "classification": classification,
            "monodromy": monodromy_value,
            "comparisons": comparisons,
        }));
        let json = to_canonical_json(&value);
        Ok(Report {
            value,
            json,
            sheaf_dot: a.lattices.to_dot(),
            hasse_dot: hasse_dot(&a),
            csv: bifurcation_csv(&a),
        })
    }

    /// Writes the report and side files into `dir`; returns the paths written.
    pub fn write(&self, dir: &std::path::Path, config: &AnalysisConfig) -> std::io::Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let stem = &config.output.stem;
        let mut files = vec![(format!("{stem}.report.json"), &self.json)];
        if config.output.dot {
            files.push((format!("{stem}.sheaf.dot"), &self.sheaf_dot));
            files.push((format!("{stem}.hasse.dot"), &self.hasse_dot));
        }
        if config.output.csv {
            files.push((format!("{stem}.bifurcations.csv"), &self.csv));
        }
        let mut written = Vec::new();
        for (name, body) in files {
            let path = dir.join(name);
            std::fs::write(&path, body)?;
            written.push(path);
        }
        Ok(written)
    }
}
