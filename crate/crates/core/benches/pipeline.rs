use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sheafdyn::config::AnalysisConfig;
use sheafdyn::dynamics::{oracle_attractor_lattice, PhasePortrait, PhaseSpace, Sign};
use sheafdyn::sheaf::{detect_bifurcations, Analysis, SheafOptions};
use sheafdyn::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn s_shaped() -> AnalysisConfig {
    AnalysisConfig::from_json(include_str!("../../../configs/s-shaped.json")).unwrap()
}

fn options(c: &AnalysisConfig, exec: Execution, grid: usize) -> SheafOptions {
    SheafOptions {
        exec,
        grid,
        ..c.options()
    }
}

fn detection(cr: &mut Criterion) {
    let c = s_shaped();
    let p = &c.parameter;
    let mut g = cr.benchmark_group("detect_bifurcations");
    for grid in [101, 1001] {
        for (name, exec) in MODES {
            let opts = options(&c, exec, grid);
            g.bench_with_input(BenchmarkId::new(name, grid), &opts, |b, o| {
                b.iter(|| detect_bifurcations(&c.system, p.topology, p.range, &p.pinned, o).unwrap())
            });
        }
    }
    g.finish();
}

fn sheaf(cr: &mut Criterion) {
    let c = s_shaped();
    let p = &c.parameter;
    let refine: Vec<f64> = (0..38)
        .map(|i| -0.925 + 0.05 * i as f64)
        .filter(|x: &f64| (x.abs() - 0.3849).abs() > 0.01)
        .collect();
    let mut g = cr.benchmark_group("analysis");
    for (name, exec) in MODES {
        let opts = options(&c, exec, p.grid);
        g.bench_function(name, |b| {
            b.iter(|| Analysis::run(&c.system, p.topology, p.range, &p.pinned, &refine, &opts).unwrap())
        });
    }
    g.finish();
}

fn oracle(cr: &mut Criterion) {
    // eight equilibria alternating sink/source with two semistable points
    let signs = [1, -1, 1, 1, -1, 1, -1, -1, 1].map(|s| if s > 0 { Sign::Positive } else { Sign::Negative });
    let eq: Vec<f64> = (0..8).map(|i| i as f64).collect();
    let p = PhasePortrait::from_signs(0.0, PhaseSpace::CompactifiedLine, eq, signs.to_vec()).unwrap();
    let mut g = cr.benchmark_group("oracle_attractor_lattice");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| oracle_attractor_lattice(&p, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, detection, sheaf, oracle);
criterion_main!(benches);
