//! Real root isolation for field slices.
//!
//! Critical points are found recursively and split the search interval into
//! monotone pieces; each piece with a sign change is bisected. A critical point
//! where the field is within rounding (plus an optional parameter slack) of
//! zero is reported as a root, which is how tangential roots are caught.

use super::field::Slice;

#[derive(Clone, Copy, Debug)]
pub(crate) struct RootOptions {
    pub tol_x: f64,
    /// Samples per interval once the derivative recursion bottoms out.
    pub samples: usize,
}

pub(crate) fn zero_tol(f: &Slice, x: f64) -> f64 {
    64.0 * f64::EPSILON * f.magnitude(x)
}

/// Roots of `f` in `[lo, hi]`, ascending, possibly with near-duplicates.
///
/// `touch(c)` is extra tolerance granted at critical points.
pub(crate) fn isolate_roots(
    f: &Slice,
    lo: f64,
    hi: f64,
    depth: usize,
    opts: RootOptions,
    touch: &dyn Fn(f64) -> f64,
) -> Vec<f64> {
    if f.is_constant() || lo >= hi {
        return Vec::new();
    }
    let mut breaks = vec![lo];
    let mut flagged = vec![f.eval(lo).abs() <= zero_tol(f, lo)];
    if depth == 0 {
        let n = opts.samples.max(2);
        for i in 1..n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            breaks.push(x);
            flagged.push(f.eval(x).abs() <= zero_tol(f, x));
        }
    } else {
        let df = f.derivative();
        let crit = isolate_roots(&df, lo, hi, depth - 1, opts, &|_| 0.0);
        for c in crit {
            if c <= lo || c >= hi || c <= *breaks.last().expect("nonempty") {
                continue;
            }
            // c is only known to within tol_x of the true extremum
            let located = opts.tol_x * df.eval(c - opts.tol_x).abs().max(df.eval(c + opts.tol_x).abs());
            breaks.push(c);
            flagged.push(f.eval(c).abs() <= zero_tol(f, c) + located + touch(c));
        }
    }
    breaks.push(hi);
    flagged.push(f.eval(hi).abs() <= zero_tol(f, hi));

    let mut roots = Vec::new();
    for i in 0..breaks.len() {
        if flagged[i] {
            roots.push(breaks[i]);
        }
        if i + 1 < breaks.len() && !flagged[i] && !flagged[i + 1] {
            let (a, b) = (breaks[i], breaks[i + 1]);
            let (fa, fb) = (f.eval(a), f.eval(b));
            if (fa < 0.0) != (fb < 0.0) {
                roots.push(bisect(f, a, b, fa, opts.tol_x));
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn bisect(f: &Slice, mut a: f64, mut b: f64, fa: f64, tol: f64) -> f64 {
    let neg_a = fa < 0.0;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f.eval(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == neg_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Groups sorted values closer than `radius`, returning group centres.
pub(crate) fn cluster(sorted: &[f64], radius: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > radius {
            if start < i {
                out.push(0.5 * (sorted[start] + sorted[i - 1]));
            }
            start = i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::field::Poly;

    const OPTS: RootOptions = RootOptions {
        tol_x: 1e-12,
        samples: 64,
    };

    fn roots_of(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
        let p = Poly(c.to_vec());
        let d = p.degree().unwrap();
        cluster(&isolate_roots(&Slice::Poly(p), lo, hi, d, OPTS, &|_| 0.0), 1e-9)
    }

    #[test]
    fn simple_and_multiple_roots() {
        let r = roots_of(&[0.0, 1.0, 0.0, -1.0], -3.0, 3.0);
        assert_eq!(r.len(), 3);
        assert!((r[0] + 1.0).abs() < 1e-9 && r[1].abs() < 1e-9 && (r[2] - 1.0).abs() < 1e-9);
        for c in [
            &[0.0, 0.0, 0.0, -1.0][..],
            &[0.0, 0.0, -1.0],
            &[0.0, 0.0, 0.0, 0.0, 1.0],
        ] {
            let r = roots_of(c, -3.0, 2.5);
            assert_eq!(r.len(), 1, "{c:?}");
            assert!(r[0].abs() < 1e-9);
        }
        assert!(roots_of(&[1.0, 0.0, 1.0], -3.0, 3.0).is_empty());
    }

    #[test]
    fn touch_tolerance_catches_near_tangency() {
        let p = Slice::Poly(Poly(vec![-1e-11, 0.0, -1.0]));
        assert!(isolate_roots(&p, -2.0, 2.0, 2, OPTS, &|_| 0.0).is_empty());
        let r = isolate_roots(&p, -2.0, 1.7, 2, OPTS, &|_| 1e-9);
        assert_eq!(r.len(), 1);
        assert!(r[0].abs() < 1e-9);
    }

    #[test]
    fn cluster_merges_neighbours() {
        assert_eq!(cluster(&[0.0, 1e-6, 1.0], 1e-4), vec![5e-7, 1.0]);
        assert!(cluster(&[], 1.0).is_empty());
    }
}
