//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{analysis, config, suites};
use sheafdyn::report::Report;
use sheafdyn::rings::Functor;
use sheafdyn::sheaf::{global_sections_direct, Analysis, ParamSubset};
use sheafdyn::Execution;

const BUDGET: Duration = Duration::from_secs(2);

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: &Analysis, f: Functor, sub: &str) -> [usize; 3] {
    a.relative(f, &ParamSubset::parse(sub).unwrap()).unwrap().result.dims()
}

fn absolute(a: &Analysis, f: Functor, want: [usize; 3]) -> std::result::Result<(), String> {
    let got = a.cohomology(f).unwrap().dims();
    ensure(got == want, || format!("{f:?} H^* = {got:?}, want {want:?}"))
}

/// Relative dims for each `(subset, expected)` pair.
fn relatives(a: &Analysis, f: Functor, cases: &[(String, [usize; 3])]) -> std::result::Result<(), String> {
    for (sub, want) in cases {
        let got = rel(a, f, sub);
        ensure(got == *want, || format!("{f:?} H^*(Λ, {sub}) = {got:?}, want {want:?}"))?;
    }
    Ok(())
}

fn rays(
    values: &[f64],
    right: impl Fn(f64) -> [usize; 3],
    left: impl Fn(f64) -> [usize; 3],
) -> Vec<(String, [usize; 3])> {
    let mut out = Vec::new();
    for &a in values {
        out.push((format!("right-ray {a}"), right(a)));
        out.push((format!("left-ray {a}"), left(a)));
    }
    out
}

fn pitchfork_rays(values: &[f64]) -> Vec<(String, [usize; 3])> {
    rays(values, |a| if a > 0.0 { [0, 2, 0] } else { [0; 3] }, |_| [0; 3])
}

fn criterion_1() -> Check {
    let a = analysis(&config("pitchfork"));
    absolute(&a, Functor::Boolean, [3, 0, 0])?;
    relatives(&a, Functor::Boolean, &pitchfork_rays(&[-1.0, 0.0, 1.0]))?;
    Ok("H^0 = 3, H^1 = 0; right-ray H^1 = 2 exactly for a > 0".into())
}

fn criterion_2() -> Check {
    let a = analysis(&config("saddle-node"));
    absolute(&a, Functor::Boolean, [3, 0, 0])?;
    let cases = vec![
        ("right-ray 1".to_string(), [0, 1, 0]),
        ("left-ray -1".to_string(), [1, 0, 0]),
        ("right-ray 0".to_string(), [0, 0, 0]),
        ("left-ray 0".to_string(), [0, 0, 0]),
    ];
    relatives(&a, Functor::Boolean, &cases)?;
    Ok("H^0 = 3; right-ray 1: H^1 = 1; left-ray -1: H^0 = 1; a = 0: 0".into())
}

fn criterion_3() -> Check {
    let a = analysis(&config("transcritical"));
    absolute(&a, Functor::Boolean, [3, 0, 0])?;
    let cases = rays(
        &[-1.0, 0.0, 1.0],
        |a| if a > 0.0 { [0, 1, 0] } else { [0; 3] },
        |a| if a < 0.0 { [0, 1, 0] } else { [0; 3] },
    );
    relatives(&a, Functor::Boolean, &cases)?;
    Ok("H^0 = 3; H^1 = 1 for right-ray a > 0 and left-ray a < 0, else 0".into())
}

fn criterion_4() -> Check {
    let c = config("s-shaped");
    let a = analysis(&c);
    absolute(&a, Functor::Boolean, [3, 0, 0])?;
    let folds = a.detection.values();
    ensure(folds.len() == 2, || format!("folds {folds:?}"))?;
    let (l1, l2) = (folds[0], folds[1]);
    let mut values = vec![-0.9, l1, 0.5 * (l1 + l2), l2, 0.9];
    values.extend([l1 - 0.05, l1 + 0.05, l2 - 0.05, l2 + 0.05]);
    let cases = rays(
        &values,
        |a| if a > l1 && a <= l2 { [0, 1, 0] } else { [0; 3] },
        |a| if a >= l1 && a < l2 { [0, 1, 0] } else { [0; 3] },
    );
    relatives(&a, Functor::Boolean, &cases)?;

    let (lo, hi) = (l1 + (l2 - l1) / 3.0, l1 + 2.0 * (l2 - l1) / 3.0);
    let mv = a.mayer_vietoris(Functor::Boolean, lo, hi).unwrap();
    ensure(mv.exact && mv.consistent, || {
        format!("Mayer–Vietoris not exact: {mv:?}")
    })?;
    ensure(mv.h0 == [3, 4, 4, 5], || {
        format!("Γ over (Λ, Λ1, Λ2, Λ1∩Λ2) = {:?}", mv.h0)
    })?;
    Ok(format!(
        "folds at {l1:.6}, {l2:.6}; ray groups on (λ1, λ2] and [λ1, λ2); Γ = 4, 4, 5"
    ))
}

fn criterion_5() -> Check {
    let a = analysis(&config("saddle-node"));
    absolute(&a, Functor::Free, [4, 0, 0])?;
    let cases = vec![
        ("right-ray 1".to_string(), [0, 4, 0]),
        ("right-ray 0.5".to_string(), [0, 4, 0]),
        ("left-ray -1".to_string(), [1, 0, 0]),
        ("left-ray -0.5".to_string(), [1, 0, 0]),
    ];
    relatives(&a, Functor::Free, &cases)?;
    let r = a.relative(Functor::Free, &ParamSubset::left_ray(-1.0)).unwrap();
    let mut generator = r.result.generators_h0[0].clone();
    generator.sort();
    let want = ["v1:[-inf,e0]", "v1:{-inf}"];
    ensure(generator == want, || format!("generator {generator:?}"))?;
    Ok("H^0 = 4; right-ray H^1 = 4; left-ray H^0 = 1 generated by [{-inf}] + [[-inf,e0]]".into())
}

fn criterion_6() -> Check {
    let a = analysis(&config("compact-pitchfork"));
    absolute(&a, Functor::Boolean, [1, 0, 0])?;
    relatives(&a, Functor::Boolean, &pitchfork_rays(&[-0.5, 0.0, 0.5]))?;
    Ok("H^0 = 1, H^1 = 0; relative groups as for the compactified pitchfork".into())
}

fn criterion_7() -> Check {
    let a = analysis(&config("compact-s-shaped"));
    absolute(&a, Functor::Boolean, [1, 0, 0])?;
    absolute(&a, Functor::Free, [2, 1, 0])?;
    Ok("Boolean H^0 = 1, H^1 = 0; free H^0 = 2, H^1 = 1".into())
}

fn criterion_8() -> Check {
    let c = config("s-shaped");
    let a = analysis(&c);
    let h = a.cohomology(Functor::Free).unwrap();
    ensure(h.h1 == 4, || format!("free H^1 = {}", h.h1))?;
    let direct = global_sections_direct(&a.abelian(Functor::Free).unwrap()).unwrap().dim;
    ensure(direct == h.h0, || {
        format!("Čech H^0 = {} but direct count = {direct}", h.h0)
    })?;

    let report = Report::build(&c, Execution::default()).unwrap();
    let flag = report.value["comparisons"]
        .as_array()
        .into_iter()
        .flatten()
        .find(|x| x["functor"] == "free" && x["degree"] == 0 && x["relative"].is_null())
        .cloned()
        .ok_or("the report has no free H^0 comparison")?;
    ensure(flag["expected"] == 5 && flag["computed"] == h.h0, || {
        format!("comparison {flag}")
    })?;
    ensure(report.value["functors"]["free"]["sections_agree"] == true, || {
        "report sections disagree".into()
    })?;
    Ok(format!(
        "H^1 = 4; H^0 = {} by Čech and by direct count; report flags 5 vs {} (agrees: {})",
        h.h0, flag["computed"], flag["agrees"]
    ))
}

fn timed(f: fn() -> Check) -> Check {
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| Err(panic_message(&e)))?;
    let t = start.elapsed();
    ensure(t < BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{out} [{:.0} ms]", t.as_secs_f64() * 1e3))
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panicked".into())
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [fn() -> Check; 8] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    let mut failed = 0;
    for (i, f) in criteria.into_iter().enumerate() {
        match timed(f) {
            Ok(detail) => println!("criterion {}: PASS  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {why}", i + 1)
            }
        }
    }

    let mut sub_failures = Vec::new();
    for (label, suite) in suites::ALL {
        let start = Instant::now();
        let outcome = catch_unwind(suite);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(()) => println!("  9({label}): pass [{ms:.0} ms]"),
            Err(e) => {
                println!("  9({label}): fail  {}", panic_message(&e));
                sub_failures.push(label);
            }
        }
    }
    if sub_failures.is_empty() {
        println!("criterion 9: PASS  all nine property suites");
    } else {
        failed += 1;
        println!("criterion 9: FAIL  suites {sub_failures:?}");
    }

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
