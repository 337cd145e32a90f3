//! Two-periodic orbits straddling a discontinuity.
//!
//! A 2-cycle `x1 -> x2 -> x1` with `x1` on one piece and `x2` on the next
//! solves
//!
//! ```text
//! (1-2k1) x1^2 + 2 k1 x1 = x2,    (1-2k2) x2^2 + 2 k2 x2 = x1
//! ```
//!
//! where `(k1, k2) = (a, b)` around 1/3 and `(b, c)` around 2/3. Eliminating
//! `x1` gives a quartic in `x2` with the trivial roots 0 and 1; the
//! remaining quadratic has discriminant `(2k2-1)^2 · t(t-4)` with
//! `t = (2k1-1)(2k2-1)`, so real cycles need `t <= 0`.
//!
//! Every closed-form result here can be cross-checked against
//! [`brute_force_two_cycles`], which only iterates the map.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QsoError, Result};
use crate::map::{self, Params, PieceId, ONE_THIRD, TWO_THIRDS};
use crate::regimes::{classify_multiplier, StabilityClass};
use crate::scan::{bisect, ROOT_RESIDUAL};

/// Residual allowed in each of the two cycle equations.
pub const EPS_CYCLE: f64 = 1e-10;
/// Componentwise tolerance of the `(k1, k2)` round trip that marks a
/// closed-form cycle as valid.
pub const ROUND_TRIP_TOL: f64 = 1e-9;
/// Roots closer than this are the same point.
const SAME_ROOT: f64 = 1e-9;

/// Which discontinuity a 2-cycle straddles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleSide {
    /// `x1` on `[0,1/3]`, `x2` on `(1/3,2/3)`; coefficients `(a, b)`.
    Near13,
    /// `x1` on `(1/3,2/3)`, `x2` on `[2/3,1]`; coefficients `(b, c)`.
    Near23,
}

impl CycleSide {
    fn pieces(self) -> (PieceId, PieceId) {
        match self {
            CycleSide::Near13 => (PieceId::Left, PieceId::Middle),
            CycleSide::Near23 => (PieceId::Middle, PieceId::Right),
        }
    }

    /// Map whose outer pieces are the identity, as in the two-coefficient
    /// regimes.
    fn params(self, k1: f64, k2: f64) -> Result<Params> {
        match self {
            CycleSide::Near13 => Params::new(k1, k2, 0.5),
            CycleSide::Near23 => Params::new(0.5, k1, k2),
        }
    }
}

/// A 2-periodic orbit. `a` and `b` are the coefficients on the pieces of
/// `x1` and `x2` respectively (`(b, c)` of the full map for `Near23`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoCycle {
    pub x1: f64,
    pub x2: f64,
    pub a: f64,
    pub b: f64,
    /// `f'(x1) · f'(x2)` with the branch derivatives at each point.
    pub multiplier: f64,
    pub valid: bool,
    pub side: CycleSide,
}

impl TwoCycle {
    /// Classification of the multiplier by the fixed-point taxonomy. This
    /// is an extension; no stability claim for these cycles is made
    /// elsewhere.
    pub fn stability(&self) -> StabilityClass {
        classify_multiplier(self.multiplier)
    }

    /// Residuals of the two cycle equations.
    pub fn residuals(&self) -> (f64, f64) {
        (
            (branch(self.a, self.x1) - self.x2).abs(),
            (branch(self.b, self.x2) - self.x1).abs(),
        )
    }
}

fn branch(k: f64, x: f64) -> f64 {
    (1.0 - 2.0 * k) * x * x + 2.0 * k * x
}

fn branch_slope(k: f64, x: f64) -> f64 {
    2.0 * (1.0 - 2.0 * k) * x + 2.0 * k
}

/// The coefficients that make `x1 -> x2 -> x1` a cycle:
/// `k1 = (x2 - x1^2) / (2 x1 (1 - x1))`, `k2 = (x1 - x2^2) / (2 x2 (1 - x2))`.
///
/// No range check is made on the result.
pub fn params_from_orbit(x1: f64, x2: f64) -> Result<(f64, f64)> {
    let interior = |x: f64| x > 0.0 && x < 1.0;
    if !interior(x1) || !interior(x2) || x1 == x2 {
        return Err(QsoError::DegenerateOrbit { x1, x2 });
    }
    let k1 = (x2 - x1 * x1) / (2.0 * x1 * (1.0 - x1));
    let k2 = (x1 - x2 * x2) / (2.0 * x2 * (1.0 - x2));
    Ok((k1, k2))
}

/// `1 - sqrt(6)/3 < x1 < 1/3` and `1/3 < x2 < x1 (2 - x1)`.
pub fn validate_condition_pc(x1: f64, x2: f64) -> bool {
    let lower = 1.0 - 6f64.sqrt() / 3.0;
    x1 > lower && x1 < ONE_THIRD && x2 > ONE_THIRD && x2 < x1 * (2.0 - x1)
}

/// `t = (2k1-1)(2k2-1)`.
pub fn t_value(k1: f64, k2: f64) -> f64 {
    (2.0 * k1 - 1.0) * (2.0 * k2 - 1.0)
}

/// `D = t(t-4)`.
pub fn discriminant(k1: f64, k2: f64) -> f64 {
    let t = t_value(k1, k2);
    t * (t - 4.0)
}

/// Candidate `x2` of a cycle for coefficients `(k1, k2)`:
/// `x2 = (t - sqrt(D)) / (2t) + 1/(2k2 - 1)`, or `None` when `t >= 0`.
///
/// The other root of the quadratic is negative whenever `k2 < 1/2`, and
/// exceeds 1 minus the shift otherwise, so this is the only candidate.
pub fn cycle_root(k1: f64, k2: f64) -> Option<f64> {
    let t = t_value(k1, k2);
    if t.is_nan() || t >= 0.0 {
        return None;
    }
    let beta = 2.0 * k2 - 1.0;
    let sqrt_d = (t * (t - 4.0)).sqrt();
    // quadratic A x^2 + B x + C in x2
    let a = -(2.0 * k1 - 1.0) * beta * beta;
    let b = t * (2.0 * k2 + 1.0);
    let c = 1.0 - 4.0 * k1 * k2;
    // -B > 0 here; pick the cancellation-free form
    let root = if beta > 0.0 {
        (-b + beta * sqrt_d) / (2.0 * a)
    } else {
        2.0 * c / (-b - beta * sqrt_d)
    };
    Some(root)
}

fn closed_form(side: CycleSide, k1: f64, k2: f64) -> Option<TwoCycle> {
    let p = side.params(k1, k2).ok()?;
    let x2 = cycle_root(k1, k2)?;
    if !(0.0..=1.0).contains(&x2) {
        return None;
    }
    let x1 = map::eval(&p, x2).ok()?;
    let (first, second) = side.pieces();
    if map::piece_of(x1).ok()? != first || map::piece_of(x2).ok()? != second || x1 == x2 {
        return None;
    }
    let valid = match params_from_orbit(x1, x2) {
        Ok((r1, r2)) => (r1 - k1).abs() <= ROUND_TRIP_TOL && (r2 - k2).abs() <= ROUND_TRIP_TOL,
        Err(_) => false,
    };
    Some(TwoCycle {
        x1,
        x2,
        a: k1,
        b: k2,
        multiplier: branch_slope(k1, x1) * branch_slope(k2, x2),
        valid,
        side,
    })
}

/// Closed-form 2-cycle of `f_{a,b}` around 1/3 (`c` plays no part).
pub fn orbit_from_params(a: f64, b: f64) -> Option<TwoCycle> {
    closed_form(CycleSide::Near13, a, b)
}

/// Closed-form 2-cycle around 2/3 with `x1` on the middle piece and `x2` on
/// the right piece.
pub fn orbit_from_params_mirror(b: f64, c: f64) -> Option<TwoCycle> {
    closed_form(CycleSide::Near23, b, c)
}

/// Brute-force 2-cycle search: sign changes of `f(f(x)) - x` on `grid`
/// nodes of the first piece of `side`, refined by bisection. Fixed points,
/// jumps of the composition, and roots whose image is not on the adjacent
/// piece are dropped. Grid evaluation is split across worker threads.
pub fn brute_force_two_cycles(p: &Params, side: CycleSide, grid: usize) -> Vec<TwoCycle> {
    let grid = grid.max(2);
    let (first, second) = side.pieces();
    let (lo, hi) = match side {
        CycleSide::Near13 => (0.0, ONE_THIRD),
        CycleSide::Near23 => (ONE_THIRD.next_up(), TWO_THIRDS.next_down()),
    };
    let h = (hi - lo) / (grid - 1) as f64;
    let node = |i: usize| if i + 1 == grid { hi } else { lo + i as f64 * h };
    let g = |x: f64| p.apply(p.apply(x)) - x;

    let values: Vec<f64> = (0..grid).into_par_iter().map(|i| g(node(i))).collect();

    let mut roots: Vec<f64> = Vec::new();
    for i in 0..grid {
        if values[i] == 0.0 {
            roots.push(node(i));
        } else if i + 1 < grid && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
            let r = bisect(g, node(i), node(i + 1));
            if g(r).abs() <= ROOT_RESIDUAL {
                roots.push(r);
            }
        }
    }

    let (k1, k2) = (p.coefficient(first), p.coefficient(second));
    let mut cycles: Vec<TwoCycle> = Vec::new();
    for x1 in roots {
        let x2 = p.apply(x1);
        if (x2 - x1).abs() <= ROOT_RESIDUAL {
            continue;
        }
        if map::piece_of(x1).ok() != Some(first) || map::piece_of(x2).ok() != Some(second) {
            continue;
        }
        if cycles.iter().any(|c| (c.x1 - x1).abs() <= SAME_ROOT) {
            continue;
        }
        let mut cycle = TwoCycle {
            x1,
            x2,
            a: k1,
            b: k2,
            multiplier: branch_slope(k1, x1) * branch_slope(k2, x2),
            valid: false,
            side,
        };
        let (r1, r2) = cycle.residuals();
        cycle.valid = r1 <= EPS_CYCLE && r2 <= EPS_CYCLE;
        cycles.push(cycle);
    }
    cycles
}

/// One cell of the empirical admissibility scan around 2/3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorScanRow {
    pub b: f64,
    pub c: f64,
    pub found: bool,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
}

/// Runs [`brute_force_two_cycles`] around 2/3 on a `resolution`² grid of
/// `(b, c) ∈ [0,1]^2` with `a = 1/2`. Cells are processed in parallel and
/// returned in row-major order (`b` outer).
pub fn mirror_admissibility_scan(resolution: usize, grid: usize) -> Vec<MirrorScanRow> {
    let n = resolution.max(2);
    let coord = |i: usize| i as f64 / (n - 1) as f64;
    (0..n * n)
        .into_par_iter()
        .map(|cell| {
            let (b, c) = (coord(cell / n), coord(cell % n));
            let p = Params::new(0.5, b, c).expect("grid stays in [0,1]");
            let found = brute_force_two_cycles(&p, CycleSide::Near23, grid);
            let first = found.first();
            MirrorScanRow {
                b,
                c,
                found: first.is_some(),
                x1: first.map(|t| t.x1),
                x2: first.map(|t| t.x2),
            }
        })
        .collect()
}

/// `b,c,found,x1,x2` with empty cells where no cycle was found.
pub fn mirror_scan_csv(rows: &[MirrorScanRow]) -> String {
    let mut out = String::from("b,c,found,x1,x2\n");
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.b,
            r.c,
            r.found,
            opt(r.x1),
            opt(r.x2)
        ));
    }
    out
}
