//! Trajectories, terminal-behavior detection and trapping sets.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QsoError, Result};
use crate::interval::{short_decimal, Component, IntervalSet};
use crate::map::{self, Params, PieceId, ONE_THIRD, TWO_THIRDS};
use crate::regimes::{classify, RegimeCase, Side};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: usize = 1_000_000;
/// Consecutive confirming iterates required before declaring convergence,
/// a cycle, or capture by a trapping set.
pub const CONFIRM_WINDOW: usize = 32;
/// Longest period the cycle detector looks for.
pub const MAX_PERIOD: usize = 64;
/// Every iterate is stored up to this step; later ones are thinned.
pub const SAMPLE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub step: usize,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Behavior {
    ConvergedTo {
        limit: f64,
    },
    /// `x_n = fixed_point` and `f(fixed_point) = fixed_point` exactly.
    AbsorbedAt {
        fixed_point: f64,
        n: usize,
    },
    Trapped {
        label: String,
        set: IntervalSet,
        entry_step: usize,
    },
    CycleDetected {
        period: usize,
        orbit: Vec<f64>,
    },
    BudgetExhausted,
}

impl Behavior {
    pub fn tag(&self) -> &'static str {
        match self {
            Behavior::ConvergedTo { .. } => "ConvergedTo",
            Behavior::AbsorbedAt { .. } => "AbsorbedAt",
            Behavior::Trapped { .. } => "Trapped",
            Behavior::CycleDetected { .. } => "CycleDetected",
            Behavior::BudgetExhausted => "BudgetExhausted",
        }
    }
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Behavior::ConvergedTo { limit } => write!(f, "ConvergedTo {}", short_decimal(*limit)),
            Behavior::AbsorbedAt { fixed_point, n } => write!(f, "AbsorbedAt {fixed_point} after {n} steps"),
            Behavior::Trapped {
                label,
                set,
                entry_step,
            } => {
                write!(f, "Trapped in {label} = {set} from step {entry_step}")
            }
            Behavior::CycleDetected { period, orbit } => {
                let pts: Vec<String> = orbit.iter().map(|x| format!("{x:.9}")).collect();
                write!(f, "CycleDetected period {period} {{{}}}", pts.join(", "))
            }
            Behavior::BudgetExhausted => f.write_str("BudgetExhausted"),
        }
    }
}

/// A computed trajectory and its terminal behavior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub x0: f64,
    pub params: Params,
    pub samples: Vec<Sample>,
    pub behavior: Behavior,
    pub steps_used: usize,
}

impl OrbitRecord {
    /// `step,x` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,x\n");
        for s in &self.samples {
            out.push_str(&format!("{},{}\n", s.step, s.x));
        }
        out
    }
}

/// The first `n + 1` iterates of `x0`, with no behavior detection.
pub fn iterate(p: &Params, x0: f64, n: usize) -> Result<OrbitRecord> {
    let mut x = map::eval(p, x0)?;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(Sample { step: 0, x: x0 });
    if n > 0 {
        samples.push(Sample { step: 1, x });
    }
    for step in 2..=n {
        x = p.apply(x);
        samples.push(Sample { step, x });
    }
    Ok(OrbitRecord {
        x0,
        params: *p,
        samples,
        behavior: Behavior::BudgetExhausted,
        steps_used: n,
    })
}

/// Whether an orbit-level claim is about invariance alone or also about
/// attracting a companion region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrappingRole {
    /// Invariant and reached from every point of `basin`.
    Absorbing,
    /// Invariant only.
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrappingSet {
    pub label: String,
    pub set: IntervalSet,
    pub role: TrappingRole,
    /// Companion region whose orbits enter `set` (absorbing sets only).
    pub basin: Option<IntervalSet>,
}

impl fmt::Display for TrappingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let role = match self.role {
            TrappingRole::Absorbing => "invariant, absorbing",
            TrappingRole::Invariant => "invariant",
        };
        write!(f, "{} = {} {role}", self.label, self.set)?;
        if let Some(basin) = &self.basin {
            write!(f, " (attracts {basin})")?;
        }
        Ok(())
    }
}

fn image_of(p: &Params, piece: PieceId, x: f64) -> f64 {
    map::eval_branch(p, piece, x).expect("breakpoints lie in [0,1]")
}

fn set(components: Vec<Component>) -> IntervalSet {
    IntervalSet::new(components).expect("trapping set components are ordered")
}

/// Band `[(1+4b)/9, (1+4a)/9]` around 1/3 with companion
/// `[0, lo) ∪ (hi, top)` (or `top]` when `closed_top`).
fn band_at_one_third(p: &Params, label: &str, top: f64, closed_top: bool) -> TrappingSet {
    // Endpoints are the images of the stored breakpoint under the adjacent
    // branches, so the floating-point map sends the band into itself.
    let lo = image_of(p, PieceId::Middle, ONE_THIRD);
    let hi = image_of(p, PieceId::Left, ONE_THIRD);
    TrappingSet {
        label: label.to_string(),
        set: set(vec![Component::closed(lo, hi)]),
        role: TrappingRole::Absorbing,
        basin: Some(set(vec![
            Component::right_open(0.0, lo),
            Component::interval(hi, false, top, closed_top),
        ])),
    }
}

/// Band `[4(1+c)/9, 4(1+b)/9]` around 2/3 with companion
/// `(1/3, lo) ∪ (hi, 1]` (or `1)` when `closed_top` is false).
fn band_at_two_thirds(p: &Params, label: &str, closed_top: bool) -> TrappingSet {
    let lo = image_of(p, PieceId::Right, TWO_THIRDS);
    let hi = image_of(p, PieceId::Middle, TWO_THIRDS);
    TrappingSet {
        label: label.to_string(),
        set: set(vec![Component::closed(lo, hi)]),
        role: TrappingRole::Absorbing,
        basin: Some(set(vec![
            Component::open(ONE_THIRD, lo),
            Component::interval(hi, false, 1.0, closed_top),
        ])),
    }
}

/// Trapping sets for the sign combinations where they exist.
///
/// | regime            | set                        | companion                        |
/// |-------------------|----------------------------|----------------------------------|
/// | ABnotC a>, b<     | A2 = [(1+4b)/9, (1+4a)/9]  | [0,·) ∪ (·,2/3)                  |
/// | BCnotA b>, c<     | A2 = [4(1+c)/9, 4(1+b)/9]  | (1/3,·) ∪ (·,1]                  |
/// | AllThree a<,b>,c< | A3 = [4(1+c)/9, 4(1+b)/9]  | (1/3,·) ∪ (·,1); A1 = [0,1/3]    |
/// | AllThree a>,b<,c< | B2 = [(1+4b)/9, (1+4a)/9]  | [0,·) ∪ (·,1]                    |
/// | AllThree a>,b<,c> | C2 = [(1+4b)/9, (1+4a)/9]  | [0,·) ∪ (·,2/3); C3 = [2/3,1]    |
pub fn trapping_sets(p: &Params) -> Vec<TrappingSet> {
    use Side::{Above, Below};
    match classify(p) {
        RegimeCase::ABnotC { a: Above, b: Below } => {
            vec![band_at_one_third(p, "A2", TWO_THIRDS, false)]
        }
        RegimeCase::BCnotA { b: Above, c: Below } => vec![band_at_two_thirds(p, "A2", true)],
        RegimeCase::AllThree {
            a: Below,
            b: Above,
            c: Below,
        } => vec![
            TrappingSet {
                label: "A1".into(),
                set: set(vec![Component::closed(0.0, ONE_THIRD)]),
                role: TrappingRole::Invariant,
                basin: None,
            },
            band_at_two_thirds(p, "A3", false),
        ],
        RegimeCase::AllThree {
            a: Above,
            b: Below,
            c: Below,
        } => {
            vec![band_at_one_third(p, "B2", 1.0, true)]
        }
        RegimeCase::AllThree {
            a: Above,
            b: Below,
            c: Above,
        } => vec![
            band_at_one_third(p, "C2", TWO_THIRDS, false),
            TrappingSet {
                label: "C3".into(),
                set: set(vec![Component::closed(TWO_THIRDS, 1.0)]),
                role: TrappingRole::Invariant,
                basin: None,
            },
        ],
        _ => Vec::new(),
    }
}

/// Streaming period detector: Brent's power-of-two tortoise, with the power
/// capped at [`MAX_PERIOD`], followed by a replay confirmation over
/// [`CONFIRM_WINDOW`] iterates.
#[derive(Debug, Clone)]
pub struct CycleWatch {
    tol: f64,
    history: VecDeque<f64>,
    tortoise: f64,
    power: usize,
    lam: usize,
    candidate: Option<(usize, usize)>,
}

impl CycleWatch {
    const HISTORY: usize = MAX_PERIOD + CONFIRM_WINDOW + 1;

    pub fn new(x0: f64, tol: f64) -> Self {
        let mut history = VecDeque::with_capacity(Self::HISTORY + 1);
        history.push_back(x0);
        Self {
            tol,
            history,
            tortoise: x0,
            power: 1,
            lam: 0,
            candidate: None,
        }
    }

    fn back(&self, lag: usize) -> f64 {
        self.history[self.history.len() - 1 - lag]
    }

    fn restart(&mut self, x: f64) {
        self.tortoise = x;
        self.power = 1;
        self.lam = 0;
        self.candidate = None;
    }

    /// Smallest lag `d` dividing `period` that repeats across the window.
    fn minimal_period(&self, period: usize) -> usize {
        (1..=period)
            .filter(|&d| period.is_multiple_of(d))
            .find(|&d| (0..CONFIRM_WINDOW).all(|j| (self.back(j) - self.back(j + d)).abs() <= self.tol))
            .unwrap_or(period)
    }

    /// Feeds the next iterate; returns the cycle (in orbit order) once one
    /// of period at least 2 has been confirmed.
    pub fn push(&mut self, x: f64) -> Option<Vec<f64>> {
        self.history.push_back(x);
        if self.history.len() > Self::HISTORY {
            self.history.pop_front();
        }
        if let Some((period, seen)) = self.candidate {
            if (x - self.back(period)).abs() > self.tol {
                self.restart(x);
                return None;
            }
            if seen + 1 < CONFIRM_WINDOW {
                self.candidate = Some((period, seen + 1));
                return None;
            }
            let period = self.minimal_period(period);
            let mut orbit: Vec<f64> = (0..period).rev().map(|j| self.back(j)).collect();
            let (lo, hi) = orbit
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                });
            if period < 2 || hi - lo <= self.tol {
                // a fixed point or a slow drift, not a cycle
                self.restart(x);
                return None;
            }
            // rotate so the orbit starts at its smallest point
            let start = orbit.iter().position(|&v| v == lo).unwrap_or(0);
            orbit.rotate_left(start);
            return Some(orbit);
        }
        self.lam += 1;
        if (x - self.tortoise).abs() <= self.tol {
            self.candidate = Some((self.lam, 0));
        } else if self.lam == self.power {
            self.tortoise = x;
            self.power = (self.power * 2).min(MAX_PERIOD);
            self.lam = 0;
        }
        None
    }
}

/// Keeps every iterate up to [`SAMPLE_CAP`], then every `ceil(k / SAMPLE_CAP)`-th.
fn keep_sample(step: usize) -> bool {
    step <= SAMPLE_CAP || step.is_multiple_of(step.div_ceil(SAMPLE_CAP))
}

/// Iterates `x0` until a terminal behavior is recognised or `budget` steps
/// have been spent.
///
/// Checks, in order, at every step:
/// 1. exact stall `x_{k+1} == x_k`: on an identity branch this is
///    absorption; at (or within `tol` of) 0 or 1 it is convergence;
/// 2. `CONFIRM_WINDOW` consecutive iterates within `tol` of 0 or 1 with
///    non-increasing distance;
/// 3. a confirmed cycle of period 2..=64;
/// 4. `CONFIRM_WINDOW` consecutive iterates inside an absorbing trapping set.
pub fn detect_behavior(p: &Params, x0: f64, budget: usize, tol: f64) -> Result<OrbitRecord> {
    map::eval(p, x0)?;
    if budget == 0 {
        return Err(QsoError::InvalidArgument("budget must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(QsoError::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let traps: Vec<TrappingSet> = trapping_sets(p)
        .into_iter()
        .filter(|t| t.role == TrappingRole::Absorbing)
        .collect();

    let mut samples = vec![Sample { step: 0, x: x0 }];
    let mut watch = CycleWatch::new(x0, tol);
    let mut near = [0usize; 2];
    let mut trap_run: Option<(usize, usize, usize)> = None; // (trap index, entry step, length)
    if let Some(i) = traps.iter().position(|t| t.set.contains(x0)) {
        trap_run = Some((i, 0, 1));
    }

    let mut x = x0;
    let mut latest = x0;
    let mut behavior = Behavior::BudgetExhausted;
    let mut steps = 0;
    while steps < budget {
        let next = p.apply(x);
        latest = next;
        let k = steps;
        steps += 1;
        if keep_sample(steps) {
            samples.push(Sample { step: steps, x: next });
        }

        if next == x {
            let piece = map::piece_of(x)?;
            behavior = if p.is_identity_on(piece) {
                Behavior::AbsorbedAt { fixed_point: x, n: k }
            } else if x <= tol {
                Behavior::ConvergedTo { limit: 0.0 }
            } else if 1.0 - x <= tol {
                Behavior::ConvergedTo { limit: 1.0 }
            } else {
                // rounding stall away from every fixed point
                Behavior::BudgetExhausted
            };
            break;
        }

        for (slot, v) in [0.0, 1.0].into_iter().enumerate() {
            let d_next = (next - v).abs();
            if d_next <= tol && d_next <= (x - v).abs() {
                near[slot] += 1;
            } else {
                near[slot] = 0;
            }
        }
        if let Some(slot) = near.iter().position(|&n| n >= CONFIRM_WINDOW) {
            behavior = Behavior::ConvergedTo { limit: slot as f64 };
            break;
        }

        if let Some(orbit) = watch.push(next) {
            behavior = Behavior::CycleDetected {
                period: orbit.len(),
                orbit,
            };
            break;
        }

        trap_run = match trap_run {
            Some((i, entry, len)) if traps[i].set.contains(next) => Some((i, entry, len + 1)),
            _ => traps
                .iter()
                .position(|t| t.set.contains(next))
                .map(|i| (i, steps, 1)),
        };
        if let Some((i, entry, len)) = trap_run {
            if len >= CONFIRM_WINDOW {
                let t = &traps[i];
                behavior = Behavior::Trapped {
                    label: t.label.clone(),
                    set: t.set.clone(),
                    entry_step: entry,
                };
                break;
            }
        }
        x = next;
    }
    if samples.last().map(|s| s.step) != Some(steps) {
        samples.push(Sample {
            step: steps,
            x: latest,
        });
    }
    Ok(OrbitRecord {
        x0,
        params: *p,
        samples,
        behavior,
        steps_used: steps,
    })
}

/// Outcome of [`verify_invariance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub checked: usize,
    pub violations: usize,
    /// Largest distance from an escaping image back to the set.
    pub worst_violation: f64,
    pub worst_point: Option<f64>,
}

impl InvarianceReport {
    pub fn all_inside(&self) -> bool {
        self.violations == 0
    }
}

fn distance_to(set: &IntervalSet, y: f64) -> f64 {
    set.components()
        .iter()
        .map(|c| {
            if y < c.lo() {
                c.lo() - y
            } else if y > c.hi() {
                y - c.hi()
            } else {
                0.0
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Checks `f(s) ⊆ s` on the probe points of `s` (stratified interior points,
/// extreme members, and the doubles next to 1/3 and 2/3 that lie in `s`).
pub fn verify_invariance(p: &Params, s: &IntervalSet, samples: usize) -> InvarianceReport {
    let points = s.probe_points(samples);
    let mut report = InvarianceReport {
        checked: points.len(),
        violations: 0,
        worst_violation: 0.0,
        worst_point: None,
    };
    for x in points {
        let y = p.apply(x);
        if !s.contains(y) {
            report.violations += 1;
            let d = distance_to(s, y);
            if report.worst_point.is_none() || d > report.worst_violation {
                report.worst_violation = d;
                report.worst_point = Some(x);
            }
        }
    }
    report
}

/// Outcome of [`verify_attraction`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractionReport {
    pub starts: Vec<f64>,
    /// First step at which each start's orbit lies in the inner set.
    pub entry_steps: Vec<Option<usize>>,
}

impl AttractionReport {
    pub fn entered(&self) -> usize {
        self.entry_steps.iter().filter(|e| e.is_some()).count()
    }

    pub fn failures(&self) -> Vec<f64> {
        self.starts
            .iter()
            .zip(&self.entry_steps)
            .filter(|(_, e)| e.is_none())
            .map(|(x, _)| *x)
            .collect()
    }

    pub fn all_entered(&self) -> bool {
        self.entered() == self.starts.len()
    }

    pub fn max_entry(&self) -> Option<usize> {
        self.entry_steps.iter().flatten().copied().max()
    }
}

/// Iterates stratified starts from `outer` and records when each first
/// lands in `inner`.
pub fn verify_attraction(
    p: &Params,
    outer: &IntervalSet,
    inner: &IntervalSet,
    starts: usize,
    budget: usize,
) -> AttractionReport {
    let starts = outer.stratified_interior(starts);
    let entry_steps = starts
        .iter()
        .map(|&x0| {
            let mut x = x0;
            for step in 0..=budget {
                if inner.contains(x) {
                    return Some(step);
                }
                x = p.apply(x);
            }
            None
        })
        .collect();
    AttractionReport { starts, entry_steps }
}
