//! Grid scans used as independent oracles.
//!
//! Nothing here consults the closed-form regime tables: the scans only call
//! the map itself, so they can be used to check those tables.

use crate::interval::{Component, IntervalSet};
use crate::map::Params;

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_WIDTH: f64 = 1e-13;
/// A refined root whose residual exceeds this is a jump, not a zero.
pub const ROOT_RESIDUAL: f64 = 1e-10;

/// Refines a sign change of `g` on `[lo, hi]` and returns the midpoint of
/// the final bracket. Requires `g(lo)` and `g(hi)` of opposite signs.
pub fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    let mut g_lo = g(lo);
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A connected piece of the scanned fixed-point set: an isolated root when
/// `lo == hi`, otherwise a run of consecutive fixed grid nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScannedComponent {
    pub lo: f64,
    pub hi: f64,
}

/// Brute-force fixed-point scan of `f_{a,b,c}` on `grid` equally spaced
/// nodes of `[0,1]`.
///
/// Nodes with `f(x) == x` are grouped into runs; sign changes of
/// `f(x) - x` between non-fixed neighbours are refined by bisection and kept
/// when the residual is genuinely small (jumps at 1/3 and 2/3 are dropped).
pub fn brute_force_fixed_points(p: &Params, grid: usize) -> Vec<ScannedComponent> {
    assert!(grid >= 2, "grid needs at least two nodes");
    let h = 1.0 / (grid - 1) as f64;
    let node = |i: usize| if i + 1 == grid { 1.0 } else { i as f64 * h };
    let g = |x: f64| p.apply(x) - x;

    let mut out = Vec::new();
    let mut run_start: Option<f64> = None;
    let mut prev = (0.0, g(0.0));
    if prev.1 == 0.0 {
        run_start = Some(0.0);
    }
    for i in 1..grid {
        let x = node(i);
        let gx = g(x);
        match (run_start, gx == 0.0) {
            (Some(start), false) => {
                out.push(ScannedComponent {
                    lo: start,
                    hi: prev.0,
                });
                run_start = None;
            }
            (None, true) => run_start = Some(x),
            _ => {}
        }
        if prev.1 != 0.0 && gx != 0.0 && (prev.1 < 0.0) != (gx < 0.0) {
            let root = bisect(g, prev.0, x);
            if g(root).abs() <= ROOT_RESIDUAL {
                out.push(ScannedComponent { lo: root, hi: root });
            }
        }
        prev = (x, gx);
    }
    if let Some(start) = run_start {
        out.push(ScannedComponent { lo: start, hi: 1.0 });
    }
    out
}

/// Compares a closed-form set with a scan at node spacing `spacing`.
///
/// Every component must be matched one-to-one, endpoints agreeing to within
/// two grid spacings. Returns a description of the first disagreement.
pub fn compare_with_scan(
    expected: &IntervalSet,
    scanned: &[ScannedComponent],
    spacing: f64,
) -> Result<(), String> {
    let slack = 2.0 * spacing;
    let mut used = vec![false; scanned.len()];
    for comp in expected.components() {
        let (lo, hi, is_point) = match *comp {
            Component::Point { point } => (point, point, true),
            Component::Interval { lo, hi, .. } => (lo, hi, false),
        };
        let hit = scanned.iter().enumerate().position(|(j, s)| {
            !used[j] && (s.lo - lo).abs() <= slack && (s.hi - hi).abs() <= slack && (is_point || s.hi > s.lo)
        });
        match hit {
            Some(j) => used[j] = true,
            None => return Err(format!("missing component {comp}")),
        }
    }
    if let Some(j) = used.iter().position(|u| !u) {
        let s = scanned[j];
        return Err(format!("spurious component [{}, {}]", s.lo, s.hi));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 1.0, 2.0);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn identity_scan_is_one_run() {
        let s = brute_force_fixed_points(&Params::identity(), 1001);
        assert_eq!(s, vec![ScannedComponent { lo: 0.0, hi: 1.0 }]);
    }

    #[test]
    fn jump_is_not_a_root() {
        // left branch pushes right, middle pushes left: f(x) - x changes
        // sign across 1/3 without vanishing
        let p = Params::new(0.9, 0.2, 0.3).unwrap();
        let s = brute_force_fixed_points(&p, 10_001);
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].lo, s[0].hi), (0.0, 0.0));
        assert_eq!((s[1].lo, s[1].hi), (1.0, 1.0));
    }

    #[test]
    fn comparison_flags_missing_and_spurious() {
        let expected = IntervalSet::new(vec![Component::point(0.0), Component::point(1.0)]).unwrap();
        let ok = [
            ScannedComponent { lo: 0.0, hi: 0.0 },
            ScannedComponent { lo: 1.0, hi: 1.0 },
        ];
        assert!(compare_with_scan(&expected, &ok, 1e-3).is_ok());
        assert!(compare_with_scan(&expected, &ok[..1], 1e-3)
            .unwrap_err()
            .contains("missing"));
        let extra = [ok[0], ScannedComponent { lo: 0.4, hi: 0.6 }, ok[1]];
        assert!(compare_with_scan(&expected, &extra, 1e-3)
            .unwrap_err()
            .contains("spurious"));
    }
}
