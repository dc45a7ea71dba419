//! The property suites, callable from both the property and acceptance targets.
//! Each one panics on the first violation.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{analysis, config, count_join_irreducibles, omega_by_limits, SYSTEMS};
use sheafdyn::catalog::{conjugacy_transform, invariance_for_config, ConjugacyTransform};
use sheafdyn::dynamics::{
    attractor_lattice, omega, oracle_attractor_lattice, portrait, EndpointMode, Interval, ParamField, PhasePortrait,
    PhaseSpace, PointRole, Poly, Region, Sign,
};
use sheafdyn::lattice::{birkhoff_downsets, validate_lattice, FiniteDistLattice};
use sheafdyn::rings::{boolean_ring, j_map_and_kernel, Functor};
use sheafdyn::sheaf::{global_sections_direct, monodromy, Analysis, ParamSubset, SheafOptions, Topology};
use sheafdyn::Execution;

fn run<S: Strategy>(cases: u32, seed: u64, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>)
where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    };
    if let Err(e) = TestRunner::new(config).run(&strategy, test) {
        panic!("{e}");
    }
}

/// Portraits of every shipped system on a parameter grid and on each cell of its complex.
pub fn corpus() -> Vec<PhasePortrait> {
    let mut out = Vec::new();
    for name in SYSTEMS {
        let c = config(name);
        let (lo, hi) = c.parameter.range;
        for i in 0..=40 {
            let l = lo + (hi - lo) * i as f64 / 40.0;
            out.push(portrait(&c.system, l, c.parameter.tol_x).unwrap());
        }
        let a = analysis(&c);
        out.extend(a.lattices.vertex_stalks.iter().map(|s| s.portrait.clone()));
        out.extend(a.lattices.edge_stalks.iter().map(|s| s.portrait.clone()));
    }
    out
}

fn signs(bits: &[bool]) -> Vec<Sign> {
    bits.iter()
        .map(|&b| if b { Sign::Positive } else { Sign::Negative })
        .collect()
}

fn ascending(start: f64, steps: &[f64]) -> Vec<f64> {
    steps
        .iter()
        .scan(start, |x, s| {
            *x += s;
            Some(*x)
        })
        .collect()
}

/// A random portrait with at most eight interior equilibria.
pub fn arb_portrait() -> impl Strategy<Value = PhasePortrait> {
    (
        0usize..3,
        prop::collection::vec(0.05f64..1.0, 0..=8),
        prop::collection::vec(any::<bool>(), 9),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(kind, steps, bits, left_in, right_in)| {
            let m = steps.len();
            match kind {
                0 => PhasePortrait::from_signs(
                    0.0,
                    PhaseSpace::CompactifiedLine,
                    ascending(-4.0, &steps),
                    signs(&bits[..=m]),
                )
                .unwrap(),
                1 => {
                    let mut b = bits[..=m].to_vec();
                    let mut mode = |inward: bool, slot: usize, value: bool| {
                        if inward {
                            b[slot] = value;
                            EndpointMode::Inward
                        } else {
                            EndpointMode::Fixed
                        }
                    };
                    let left = mode(left_in, 0, true);
                    let right = mode(right_in && !(left_in && m == 0), m, false);
                    let phase = PhaseSpace::Interval {
                        lo: -5.0,
                        hi: 5.0,
                        left,
                        right,
                    };
                    PhasePortrait::from_signs(0.0, phase, ascending(-5.0, &steps), signs(&b)).unwrap()
                }
                _ => {
                    let total: f64 = steps.iter().sum::<f64>() + 0.05;
                    let mut eq = ascending(0.0, &steps);
                    eq.insert(0, 0.0);
                    eq.pop();
                    let eq = eq.into_iter().map(|x| 4.0 * x / total).collect();
                    PhasePortrait::from_signs(0.0, PhaseSpace::Circle { circumference: 4.0 }, eq, signs(&bits[..m]))
                        .unwrap()
                }
            }
        })
}

fn check_lattice_laws(l: &FiniteDistLattice) {
    let v = validate_lattice(l);
    assert!(v.valid, "{:?}", v.failures);

    let k = j_map_and_kernel(l).unwrap();
    assert!(k.check.passed(), "{:?}", k.check);
    let irreducibles = count_join_irreducibles(l);
    assert_eq!(boolean_ring(l).unwrap().dim(), irreducibles);
    assert_eq!(k.kernel.len(), l.len() - irreducibles);
}

fn check_birkhoff(l: &FiniteDistLattice) {
    let b = birkhoff_downsets(l).unwrap();
    for a in 0..l.len() {
        let members = b.downsets[a].support().into_iter().map(|i| b.irreducibles.members[i]);
        assert_eq!(l.join_all(members), a);
    }
}

fn check_oracle(p: &PhasePortrait) {
    let fast = attractor_lattice(p).unwrap();
    for exec in [Execution::Sequential, Execution::Parallel] {
        let slow = oracle_attractor_lattice(p, exec).unwrap();
        assert_eq!(fast.sets, slow.sets, "signature {}", p.signature());
        assert_eq!(fast.lattice, slow.lattice);
    }
}

/// (a) The component rule agrees with the brute-force attractor search.
pub fn oracle_equivalence() {
    for p in corpus() {
        assert!(p.points.iter().filter(|q| q.role == PointRole::Equilibrium).count() <= 8);
        check_oracle(&p);
    }
    run(256, 11, arb_portrait(), |p| {
        check_oracle(&p);
        Ok(())
    });
}

/// (b) `0 → ker j → Z₂L → RL → 0` with `dim RL = |J(L)|`.
pub fn fundamental_sequence() {
    for p in corpus() {
        check_lattice_laws(&attractor_lattice(&p).unwrap().lattice);
    }
    run(256, 13, arb_portrait(), |p| {
        check_lattice_laws(&attractor_lattice(&p).unwrap().lattice);
        Ok(())
    });
}

fn arb_poset() -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1usize..=5).prop_flat_map(|k| {
        prop::collection::vec(any::<bool>(), k * k).prop_map(move |bits| {
            let mut le = vec![vec![false; k]; k];
            for i in 0..k {
                le[i][i] = true;
                for j in i + 1..k {
                    le[i][j] = bits[i * k + j];
                }
            }
            for m in 0..k {
                for i in 0..k {
                    for j in 0..k {
                        if le[i][m] && le[m][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
            le
        })
    })
}

/// The downset lattice of a poset, ordered by inclusion, with each element's bitmask.
fn downset_lattice(le: &[Vec<bool>]) -> (FiniteDistLattice, Vec<u32>) {
    let k = le.len();
    let masks: Vec<u32> = (0u32..1 << k)
        .filter(|&m| (0..k).all(|j| m & (1 << j) == 0 || (0..k).all(|i| !le[i][j] || m & (1 << i) != 0)))
        .collect();
    let labels = masks.iter().map(|m| format!("{m:b}")).collect();
    let leq = masks
        .iter()
        .map(|a| masks.iter().map(|b| a & b == *a).collect())
        .collect();
    (FiniteDistLattice::from_order(labels, leq).unwrap(), masks)
}

/// (c) `a = ⋁ D(a)` on every lattice, and `J(O(P)) ≅ P` for random posets.
pub fn birkhoff_roundtrip() {
    for p in corpus() {
        check_birkhoff(&attractor_lattice(&p).unwrap().lattice);
    }
    run(256, 17, arb_poset(), |le| {
        let (l, masks) = downset_lattice(&le);
        check_lattice_laws(&l);
        check_birkhoff(&l);
        let b = birkhoff_downsets(&l).unwrap();
        prop_assert_eq!(b.irreducibles.len(), le.len());
        // an irreducible is the principal downset of its top element
        let top = |e: usize| {
            let m = masks[e];
            (0..le.len())
                .find(|&p| (0..le.len()).all(|i| (m & (1 << i) != 0) == le[i][p]))
                .unwrap()
        };
        let ps: Vec<usize> = b.irreducibles.members.iter().map(|&e| top(e)).collect();
        for (i, &pi) in ps.iter().enumerate() {
            for (j, &pj) in ps.iter().enumerate() {
                prop_assert_eq!(b.irreducibles.order[i][j], le[pi][pj]);
            }
        }
        Ok(())
    });
}

fn generic_cubic(c: &[f64; 4]) -> ParamField {
    ParamField::polynomial(vec![vec![c[0], c[1]], vec![c[2], 1.0], vec![c[3]], vec![-1.0]])
}

/// (d) Čech `H^0` equals the propagated section count.
pub fn cech_matches_direct() {
    for name in SYSTEMS {
        let a = analysis(&config(name));
        for f in Functor::ALL {
            let h = a.cohomology(f).unwrap();
            assert_eq!(
                global_sections_direct(&a.abelian(f).unwrap()).unwrap().dim,
                h.h0,
                "{name} {f:?}"
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut analysed = 0;
    for _ in 0..40 {
        let c = [
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-0.8..0.8),
        ];
        // folds too close to each other or to the range ends are rejected
        let Ok(a) = Analysis::run(
            &generic_cubic(&c),
            Topology::Line,
            (-2.0, 2.0),
            &[],
            &[],
            &SheafOptions::default(),
        ) else {
            continue;
        };
        analysed += 1;
        for f in Functor::ALL {
            let h = a.cohomology(f).unwrap();
            assert_eq!(
                global_sections_direct(&a.abelian(f).unwrap()).unwrap().dim,
                h.h0,
                "{c:?} {f:?}"
            );
            assert_eq!(h.h2, 0);
        }
    }
    assert!(analysed >= 20, "only {analysed} random families analysed");
}

/// (e) Extra vertices change no absolute or relative group.
pub fn refinement_invariance() {
    let strategy = (
        prop::sample::select(SYSTEMS),
        prop::collection::vec(0.01f64..0.99, 1..=4),
    );
    run(32, 19, strategy, |(name, ts)| {
        let c = config(name);
        let a = analysis(&c);
        let (lo, hi) = c.parameter.range;
        let extra: Vec<f64> = ts.iter().map(|t| lo + t * (hi - lo)).collect();
        let r = a.refined(&extra).unwrap();
        for f in Functor::ALL {
            prop_assert_eq!(a.cohomology(f).unwrap().dims(), r.cohomology(f).unwrap().dims());
            prop_assert_eq!(
                global_sections_direct(&a.abelian(f).unwrap()).unwrap().dim,
                global_sections_direct(&r.abelian(f).unwrap()).unwrap().dim
            );
            for sub in &c.relative {
                prop_assert_eq!(
                    a.relative(f, sub).unwrap().result.dims(),
                    r.relative(f, sub).unwrap().result.dims()
                );
            }
        }
        Ok(())
    });
}

/// (f) Mapping cone and vanishing-cochain complex agree; the long exact
/// sequence of the pair has alternating sum zero.
pub fn cone_vs_subcomplex() {
    let lines: Vec<&str> = SYSTEMS.iter().copied().filter(|n| *n != "circle").collect();
    let strategy = (prop::sample::select(lines), 0usize..4, 0.02f64..0.98, 0.02f64..0.98);
    run(48, 29, strategy, |(name, kind, s, t)| {
        let c = config(name);
        let a = analysis(&c);
        let (lo, hi) = c.parameter.range;
        let (x, y) = (lo + s.min(t) * (hi - lo), lo + s.max(t) * (hi - lo));
        let sub = match kind {
            0 => ParamSubset::right_ray(x),
            1 => ParamSubset::left_ray(x),
            2 => ParamSubset::segment(x, y),
            _ => ParamSubset::point(x).union(&ParamSubset::right_ray(y)),
        };
        for f in Functor::ALL {
            let r = a.relative(f, &sub).unwrap();
            prop_assert_eq!(r.cone, r.subcomplex);
            prop_assert_eq!(r.les_alternating_sum, 0);
            prop_assert_ne!(r.closed_form_agrees, Some(false));
        }
        Ok(())
    });
}

/// Five conjugacies per system. Interval phase spaces only admit constant
/// phase shifts, and a circle parameter only unit-speed reparametrizations.
pub fn battery(name: &str) -> [&'static str; 5] {
    match name {
        "circle" => [
            "shift=0,2",
            "shift=0,-2",
            "shift=0.5,2",
            "reparam=0.3,1",
            "reparam=0,-1",
        ],
        "compact-pitchfork" | "compact-s-shaped" => [
            "shift=0.5",
            "reparam=0,1,0,1",
            "reparam=0.2,2",
            "shift=-0.3 reparam=0,-1",
            "shift=0.1 reparam=0,-1,0,-0.5",
        ],
        _ => [
            "shift=0.5",
            "shift=0.3,-0.2,0.1",
            "reparam=0,1,0,1",
            "shift=0,1 reparam=0,-1",
            "reparam=0.2,-1",
        ],
    }
}

/// (g) Every dim and local class survives each conjugacy in the battery,
/// and random shifts with affine reparametrizations.
pub fn conjugacy_invariance() {
    for name in SYSTEMS {
        let c = config(name);
        for t in battery(name) {
            let t = ConjugacyTransform::parse(t).unwrap();
            let r = invariance_for_config(&c, &t, &c.options()).unwrap();
            assert!(r.invariant, "{name} under {t}: {:?} vs {:?}", r.original, r.transformed);
        }
    }
    let strategy = (
        prop::sample::select(&["pitchfork", "saddle-node", "transcritical", "stable"][..]),
        [-1.0f64..1.0, -1.0f64..1.0, -0.3f64..0.3],
        -0.5f64..0.5,
        prop::sample::select(&[-2.0, -1.0, 0.5, 1.0, 1.5][..]),
    );
    run(16, 41, strategy, |(name, g, r0, r1)| {
        let c = config(name);
        let t = ConjugacyTransform::shift(Poly(g.to_vec())).with_reparam(Poly(vec![r0, r1]));
        let r = invariance_for_config(&c, &t, &c.options()).unwrap();
        prop_assert!(r.invariant, "{} under {}", name, t);
        Ok(())
    });
}

fn region_from(p: &PhasePortrait, picks: &[(bool, f64, f64)]) -> Region {
    let eq: Vec<f64> = p.points.iter().map(|q| q.position).collect();
    let (lo, hi) = match p.phase {
        PhaseSpace::CompactifiedLine => (-6.0, 6.0),
        PhaseSpace::Interval { lo, hi, .. } => (lo, hi),
        PhaseSpace::Circle { circumference } => (0.0, circumference),
    };
    let at = |snap: bool, t: f64| {
        if snap && !eq.is_empty() {
            eq[((t * eq.len() as f64) as usize).min(eq.len() - 1)]
        } else {
            lo + t * (hi - lo)
        }
    };
    let ivs: Vec<Interval> = picks
        .iter()
        .map(|&(snap, s, t)| {
            let (a, b) = (at(snap, s), at(false, t));
            if p.phase.is_circle() {
                Interval::new(a, b)
            } else {
                Interval::new(a.min(b), a.max(b))
            }
        })
        .collect();
    match p.phase.circumference() {
        Some(c) => Region::circle(c, ivs),
        None => Region::line(ivs),
    }
}

/// (h) ω matches the endpoint-limit oracle, is idempotent and is additive.
pub fn omega_laws() {
    let picks = || prop::collection::vec((any::<bool>(), 0.0f64..1.0, 0.0f64..1.0), 1..=3);
    run(1000, 23, (arb_portrait(), picks(), picks()), |(p, u, v)| {
        let (u, v) = (region_from(&p, &u), region_from(&p, &v));
        let wu = omega(&p, &u, false).unwrap();
        let wv = omega(&p, &v, false).unwrap();
        let expected = omega_by_limits(&p, &u);
        prop_assert!(wu.approx_eq(&expected), "ω({}) = {} vs {}", u, wu, expected);
        prop_assert!(omega(&p, &wu, false).unwrap().approx_eq(&wu));
        let joint = omega(&p, &u.union(&v), false).unwrap();
        prop_assert!(joint.approx_eq(&wu.union(&wv)), "ω({} ∪ {}) = {}", u, v, joint);
        Ok(())
    });
}

pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort();
    out
}

/// (i) The rotating two-sink circle family: Boolean `H^0 = 2`, a nontrivial
/// monodromy whose orbit counts give `H^0`, and the same data for its
/// λ-shift conjugates.
pub fn circle_monodromy() {
    let c = config("circle");
    let a = analysis(&c);
    let m = monodromy(&a.lattices).unwrap();
    let boolean = a.cohomology(Functor::Boolean).unwrap();
    assert_eq!(boolean.h0, 2);
    assert!(!m.trivial);
    assert_eq!(m.boolean_invariant_dim, boolean.h0);
    assert_eq!(m.free_invariant_dim, a.cohomology(Functor::Free).unwrap().h0);

    let p = &c.parameter;
    for g in [vec![0.0, 2.0], vec![0.0, -2.0], vec![0.5, 2.0]] {
        let t = ConjugacyTransform::shift(Poly(g));
        let ts = conjugacy_transform(&c.system, &t, p.topology, p.range, &p.pinned).unwrap();
        let b = Analysis::run(&ts.field, ts.topology, ts.range, &ts.pinned, &[], &c.options()).unwrap();
        let mb = monodromy(&b.lattices).unwrap();
        assert_eq!(cycle_type(&mb.permutation), cycle_type(&m.permutation), "{t}");
        assert_eq!(mb.trivial, m.trivial);
        for f in Functor::ALL {
            assert_eq!(
                b.cohomology(f).unwrap().dims(),
                a.cohomology(f).unwrap().dims(),
                "{t} {f:?}"
            );
        }
    }
}

pub const ALL: [(&str, fn()); 9] = [
    ("a", oracle_equivalence),
    ("b", fundamental_sequence),
    ("c", birkhoff_roundtrip),
    ("d", cech_matches_direct),
    ("e", refinement_invariance),
    ("f", cone_vs_subcomplex),
    ("g", conjugacy_invariance),
    ("h", omega_laws),
    ("i", circle_monodromy),
];
