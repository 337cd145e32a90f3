//! Numerical check suites, one clause per claim about the map.
//!
//! Each clause draws random parameters in its sign regime from a ChaCha
//! stream derived from `(seed, clause position)`, so a clause's outcome does
//! not depend on which other clauses are selected. Free coefficients are
//! drawn from `[0, 0.49]` or `[0.51, 1]`; coefficients within 0.01 of 1/2
//! make convergence arbitrarily slow and are left to the degenerate-case
//! unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{self, Behavior, TrappingRole, DEFAULT_BUDGET, DEFAULT_TOL};
use crate::interval::{Component, IntervalSet};
use crate::map::{self, Params, PieceId, ONE_THIRD, TWO_THIRDS};
use crate::periodic::{self, CycleSide, EPS_CYCLE};
use crate::regimes::{self, StabilityClass};
use crate::scan;

/// Distance kept between a free coefficient and 1/2.
pub const COEFFICIENT_MARGIN: f64 = 0.01;

/// Every clause id the suite must contain.
#[rustfmt::skip]
pub const MANIFEST: &[&str] = &[
    "uniform(1)", "uniform(2)", "uniform(3)",
    "2.1(1)", "2.1(2)", "2.1(3)",
    "2.2(1)", "2.2(2)", "2.2(3)",
    "2.3(1)", "2.3(2)", "2.3(3)",
    "2.4(1)", "2.4(2)", "2.4(3)", "2.4(4)", "2.4(5)", "2.4(6.1)", "2.4(6.2)",
    "2.5(1)", "2.5(2)", "2.5(3)", "2.5(4)", "2.5(5)", "2.5(6)",
    "2.6(1)", "2.6(2)", "2.6(3)", "2.6(4)", "2.6(5)", "2.6(6.1)", "2.6(6.2)",
    "2.7(1)", "2.7(2)", "2.7(3)", "2.7(4)", "2.7(5.1)", "2.7(5.2)", "2.7(5.3)", "2.7(6)",
    "2.7(7.1)", "2.7(7.2)", "2.7(8.1)", "2.7(8.2)", "2.7(8.3)", "2.7(9)",
    "pt(ab)", "pt(pc)", "pt(round-trip)", "pt(D)", "pt(pe)", "pt(oracle)", "pt(mirror)",
];

/// Sizes used by the suite. [`SuiteConfig::default`] keeps a full run to a
/// few seconds.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub draws: usize,
    pub starts: usize,
    pub fix_grid: usize,
    pub invariance_samples: usize,
    pub budget: usize,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            draws: 20,
            starts: 50,
            fix_grid: 10_001,
            invariance_samples: 2_000,
            budget: DEFAULT_BUDGET,
            tol: DEFAULT_TOL,
        }
    }
}

/// Where a coefficient is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coef {
    Half,
    Below,
    Above,
    /// Below or Above with equal odds.
    Either,
}

fn draw_coef(rng: &mut ChaCha8Rng, coef: Coef) -> f64 {
    let below = 0.5 - COEFFICIENT_MARGIN;
    let above = 0.5 + COEFFICIENT_MARGIN;
    match coef {
        Coef::Half => 0.5,
        Coef::Below => rng.gen_range(0.0..=below),
        Coef::Above => rng.gen_range(above..=1.0),
        Coef::Either => {
            if rng.gen_bool(0.5) {
                rng.gen_range(0.0..=below)
            } else {
                rng.gen_range(above..=1.0)
            }
        }
    }
}

/// Draws `(a, b, c)` from the given coefficient ranges.
pub fn draw_params(rng: &mut ChaCha8Rng, coefs: [Coef; 3]) -> Params {
    let [a, b, c] = coefs.map(|k| draw_coef(rng, k));
    Params::new(a, b, c).expect("drawn coefficients lie in [0,1]")
}

/// Draws `a = b = c` on the given side of 1/2.
pub fn draw_uniform(rng: &mut ChaCha8Rng, coef: Coef) -> Params {
    let k = draw_coef(rng, coef);
    Params::new(k, k, k).expect("drawn coefficient lies in [0,1]")
}

/// Names of the nine regimes, in [`crate::RegimeCase`] order.
pub const REGIME_NAMES: [&str; 9] = [
    "Trivial",
    "UniformNontrivial",
    "OnlyA",
    "OnlyB",
    "OnlyC",
    "ABnotC",
    "ACnotB",
    "BCnotA",
    "AllThree",
];

/// Draws parameters in the named regime, with random sides for the free
/// coefficients.
pub fn draw_in_regime(rng: &mut ChaCha8Rng, name: &str) -> Params {
    use Coef::{Either as E, Half as H};
    let coefs = match name {
        "Trivial" => [H, H, H],
        "UniformNontrivial" => return draw_uniform(rng, E),
        "OnlyA" => [E, H, H],
        "OnlyB" => [H, E, H],
        "OnlyC" => [H, H, E],
        "ABnotC" => [E, E, H],
        "ACnotB" => [E, H, E],
        "BCnotA" => [H, E, E],
        "AllThree" => [E, E, E],
        other => panic!("unknown regime {other}"),
    };
    draw_params(rng, coefs)
}

/// Tally of one clause.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl Outcome {
    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

type Check = Box<dyn Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome + Send + Sync>;

pub struct Clause {
    pub group: &'static str,
    pub id: &'static str,
    pub statement: &'static str,
    check: Check,
}

impl Clause {
    fn new(
        group: &'static str,
        id: &'static str,
        statement: &'static str,
        check: impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome + Send + Sync + 'static,
    ) -> Self {
        Self {
            group,
            id,
            statement,
            check: Box::new(check),
        }
    }

    pub fn run(&self, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Outcome {
        (self.check)(rng, config)
    }
}

fn interval(c: Component) -> IntervalSet {
    IntervalSet::new(vec![c]).expect("single component")
}

fn image(p: &Params, piece: PieceId, x: f64) -> f64 {
    map::eval_branch(p, piece, x).expect("breakpoint in domain")
}

type Region = fn(&Params) -> IntervalSet;
type Range = fn(&Params) -> Component;

/// Fixed-point set against the brute-force scan.
fn check_fix(
    sampler: impl Fn(&mut ChaCha8Rng) -> Params,
) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome {
    move |rng, cfg| {
        let mut out = Outcome::default();
        let spacing = 1.0 / (cfg.fix_grid - 1) as f64;
        for _ in 0..cfg.draws {
            let p = sampler(rng);
            let expected = regimes::fixed_point_set(&p);
            let scanned = scan::brute_force_fixed_points(&p, cfg.fix_grid);
            let cmp = scan::compare_with_scan(&expected, &scanned, spacing);
            out.record(cmp.is_ok(), || format!("{p:?}: {}", cmp.unwrap_err()));
        }
        out
    }
}

/// Every start in `region` converges to `limit`.
fn check_limit(
    coefs: [Coef; 3],
    region: Region,
    limit: f64,
) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome {
    move |rng, cfg| {
        let mut out = Outcome::default();
        for _ in 0..cfg.draws {
            let p = draw_params(rng, coefs);
            for x0 in region(&p).stratified_interior(cfg.starts) {
                let r = dynamics::detect_behavior(&p, x0, cfg.budget, cfg.tol).expect("valid start");
                let ok = r.behavior == Behavior::ConvergedTo { limit };
                out.record(ok, || format!("{p:?} x0={x0}: {}", r.behavior));
            }
        }
        out
    }
}

/// Every start in `region` lands exactly on a fixed point inside `range`.
fn check_absorb(
    coefs: [Coef; 3],
    region: Region,
    range: Range,
) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome {
    move |rng, cfg| {
        let mut out = Outcome::default();
        for _ in 0..cfg.draws {
            let p = draw_params(rng, coefs);
            let target = range(&p);
            for x0 in region(&p).stratified_interior(cfg.starts) {
                let r = dynamics::detect_behavior(&p, x0, cfg.budget, cfg.tol).expect("valid start");
                let ok = match r.behavior {
                    Behavior::AbsorbedAt { fixed_point, .. } => {
                        target.contains(fixed_point) && p.apply(fixed_point) == fixed_point
                    }
                    _ => false,
                };
                out.record(ok, || {
                    format!("{p:?} x0={x0}: {} (expected in {target})", r.behavior)
                });
            }
        }
        out
    }
}

fn find_trap(p: &Params, label: &str) -> Option<dynamics::TrappingSet> {
    dynamics::trapping_sets(p).into_iter().find(|t| t.label == label)
}

fn check_invariance(
    coefs: [Coef; 3],
    label: &'static str,
) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome {
    move |rng, cfg| {
        let mut out = Outcome::default();
        for _ in 0..cfg.draws {
            let p = draw_params(rng, coefs);
            match find_trap(&p, label) {
                Some(t) => {
                    let r = dynamics::verify_invariance(&p, &t.set, cfg.invariance_samples);
                    out.record(r.all_inside(), || {
                        format!(
                            "{p:?}: {} escapes from {}, worst {:e}",
                            r.violations, t.set, r.worst_violation
                        )
                    });
                }
                None => out.record(false, || format!("{p:?}: no set {label}")),
            }
        }
        out
    }
}

fn check_attraction(
    coefs: [Coef; 3],
    label: &'static str,
) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome {
    move |rng, cfg| {
        let mut out = Outcome::default();
        for _ in 0..cfg.draws {
            let p = draw_params(rng, coefs);
            let Some(t) = find_trap(&p, label).filter(|t| t.role == TrappingRole::Absorbing) else {
                out.record(false, || format!("{p:?}: no absorbing set {label}"));
                continue;
            };
            let basin = t.basin.as_ref().expect("absorbing sets carry a basin");
            let r = dynamics::verify_attraction(&p, basin, &t.set, cfg.starts, cfg.budget);
            for (x0, entry) in r.starts.iter().zip(&r.entry_steps) {
                out.record(entry.is_some(), || {
                    format!("{p:?}: start {x0} never enters {}", t.set)
                });
            }
        }
        out
    }
}

fn check_combined(checks: Vec<Check>) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome {
    move |rng, cfg| {
        let mut total = Outcome::default();
        for check in &checks {
            let o = check(rng, cfg);
            total.checked += o.checked;
            total.failed += o.failed;
            if total.first_failure.is_none() {
                total.first_failure = o.first_failure;
            }
        }
        total
    }
}

/// Starts at `threshold ± 1e-3` go to `below_limit` / `above_limit`.
fn check_basin_split(
    coefs: [Coef; 3],
    threshold: f64,
    below_limit: f64,
    above_limit: f64,
) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome {
    move |rng, cfg| {
        let mut out = Outcome::default();
        for _ in 0..cfg.draws {
            let p = draw_params(rng, coefs);
            for (x0, limit) in [(threshold - 1e-3, below_limit), (threshold + 1e-3, above_limit)] {
                let r = dynamics::detect_behavior(&p, x0, cfg.budget, cfg.tol).expect("valid start");
                out.record(r.behavior == Behavior::ConvergedTo { limit }, || {
                    format!("{p:?} x0={x0}: {} (expected {limit})", r.behavior)
                });
            }
        }
        out
    }
}

fn boxed(f: impl Fn(&mut ChaCha8Rng, &SuiteConfig) -> Outcome + Send + Sync + 'static) -> Check {
    Box::new(f)
}

/// Samples a pair strictly inside the straddling rectangle
/// `(0,1/3) × (1/3,2/3)`, kept `1e-9` away from the edges.
pub fn draw_straddling_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let m = 1e-9;
    (
        rng.gen_range(m..ONE_THIRD - m),
        rng.gen_range(ONE_THIRD + m..TWO_THIRDS - m),
    )
}

/// Samples `(x1, x2)` uniformly from the region where the closed form
/// applies, `1e-9` inside its boundary.
pub fn draw_pc_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let m = 1e-9;
    let lower = 1.0 - 6f64.sqrt() / 3.0;
    loop {
        let x1 = rng.gen_range(lower + m..ONE_THIRD - m);
        let x2 = rng.gen_range(ONE_THIRD + m..5.0 / 9.0);
        if x2 < x1 * (2.0 - x1) - m {
            return (x1, x2);
        }
    }
}

/// The registered clauses, in report order.
pub fn clauses() -> Vec<Clause> {
    use Coef::{Above as U, Below as L, Either as E, Half as H};

    let left: Region = |_| interval(Component::closed(0.0, ONE_THIRD));
    let left_open0: Region = |_| interval(Component::left_open(0.0, ONE_THIRD));
    let middle: Region = |_| interval(Component::open(ONE_THIRD, TWO_THIRDS));
    let right: Region = |_| interval(Component::closed(TWO_THIRDS, 1.0));
    let right_open1: Region = |_| interval(Component::right_open(TWO_THIRDS, 1.0));
    let below_two_thirds: Region = |_| interval(Component::right_open(0.0, TWO_THIRDS));
    let inner_below_two_thirds: Region = |_| interval(Component::open(0.0, TWO_THIRDS));
    let above_one_third: Region = |_| interval(Component::left_open(ONE_THIRD, 1.0));
    let open_above_one_third: Region = |_| interval(Component::open(ONE_THIRD, 1.0));
    let unit: Region = |_| interval(Component::closed(0.0, 1.0));
    let unit_open0: Region = |_| interval(Component::left_open(0.0, 1.0));
    let below_one_third: Region = |_| interval(Component::right_open(0.0, ONE_THIRD));
    let from_one_third: Region = |_| interval(Component::closed(ONE_THIRD, 1.0));

    // landing ranges; upper and lower ends are the images of the stored
    // breakpoints under the branch that produces them
    let left_image: Range = |p| Component::left_open(ONE_THIRD, image(p, PieceId::Left, ONE_THIRD));
    let middle_down: Range = |p| Component::closed(image(p, PieceId::Middle, ONE_THIRD), ONE_THIRD);
    let middle_up: Range = |p| Component::closed(TWO_THIRDS, image(p, PieceId::Middle, TWO_THIRDS));
    let right_down: Range = |p| Component::right_open(image(p, PieceId::Right, TWO_THIRDS), TWO_THIRDS);

    let fix = |coefs: [Coef; 3]| check_fix(move |rng| draw_params(rng, coefs));

    vec![
        Clause::new(
            "uniform",
            "uniform(1)",
            "a=b=c≠1/2: Fix = {0, 1}",
            check_fix(|rng| draw_uniform(rng, E)),
        ),
        Clause::new(
            "uniform",
            "uniform(2)",
            "a=b=c<1/2: 0 attracting, 1 repelling; reversed above 1/2",
            |rng, cfg| {
                let mut out = Outcome::default();
                for _ in 0..cfg.draws {
                    for (coef, at0, at1) in [
                        (L, StabilityClass::Attracting, StabilityClass::Repelling),
                        (U, StabilityClass::Repelling, StabilityClass::Attracting),
                    ] {
                        let p = draw_uniform(rng, coef);
                        let s0 = regimes::stability_of(&p, 0.0, None).expect("0 is fixed");
                        let s1 = regimes::stability_of(&p, 1.0, None).expect("1 is fixed");
                        out.record(s0 == at0 && s1 == at1, || format!("{p:?}: 0 {s0}, 1 {s1}"));
                    }
                }
                out
            },
        ),
        Clause::new(
            "uniform",
            "uniform(3)",
            "a=b=c: orbits from (0,1) tend to 0 if a<1/2, to 1 if a>1/2",
            |rng, cfg| {
                let mut out = Outcome::default();
                let starts = interval(Component::open(0.0, 1.0)).stratified_interior(cfg.starts);
                for _ in 0..cfg.draws {
                    for (coef, limit) in [(L, 0.0), (U, 1.0)] {
                        let p = draw_uniform(rng, coef);
                        for &x0 in &starts {
                            let r =
                                dynamics::detect_behavior(&p, x0, cfg.budget, cfg.tol).expect("valid start");
                            out.record(r.behavior == Behavior::ConvergedTo { limit }, || {
                                format!("{p:?} x0={x0}: {}", r.behavior)
                            });
                        }
                    }
                }
                out
            },
        ),
        // a ≠ 1/2, b = c = 1/2
        Clause::new("2.1", "2.1(1)", "Fix = {0} ∪ (1/3,1]", fix([E, H, H])),
        Clause::new(
            "2.1",
            "2.1(2)",
            "a<1/2: orbits from [0,1/3] tend to 0",
            check_limit([L, H, H], left, 0.0),
        ),
        Clause::new(
            "2.1",
            "2.1(3)",
            "a>1/2: orbits from (0,1/3] land on a fixed p ∈ (1/3,(4a+1)/9]",
            check_absorb([U, H, H], left_open0, left_image),
        ),
        // b ≠ 1/2
        Clause::new("2.2", "2.2(1)", "Fix = [0,1/3] ∪ [2/3,1]", fix([H, E, H])),
        Clause::new(
            "2.2",
            "2.2(2)",
            "b<1/2: orbits from (1/3,2/3) land on a fixed p ∈ [(1+4b)/9,1/3]",
            check_absorb([H, L, H], middle, middle_down),
        ),
        Clause::new(
            "2.2",
            "2.2(3)",
            "b>1/2: orbits from (1/3,2/3) land on a fixed p ∈ [2/3,4(1+b)/9]",
            check_absorb([H, U, H], middle, middle_up),
        ),
        // c ≠ 1/2
        Clause::new("2.3", "2.3(1)", "Fix = [0,2/3) ∪ {1}", fix([H, H, E])),
        Clause::new(
            "2.3",
            "2.3(2)",
            "c<1/2: orbits from [2/3,1) land on a fixed p ∈ [4(1+c)/9,2/3)",
            check_absorb([H, H, L], right_open1, right_down),
        ),
        Clause::new(
            "2.3",
            "2.3(3)",
            "c>1/2: orbits from [2/3,1] tend to 1",
            check_limit([H, H, U], right, 1.0),
        ),
        // a, b ≠ 1/2, c = 1/2
        Clause::new("2.4", "2.4(1)", "Fix = {0} ∪ [2/3,1]", fix([E, E, H])),
        Clause::new(
            "2.4",
            "2.4(2)",
            "a,b<1/2: orbits from [0,2/3) tend to 0",
            check_limit([L, L, H], below_two_thirds, 0.0),
        ),
        Clause::new(
            "2.4",
            "2.4(3)",
            "a<1/2<b: orbits from [0,1/3] tend to 0",
            check_limit([L, U, H], left, 0.0),
        ),
        Clause::new(
            "2.4",
            "2.4(4)",
            "a<1/2<b: orbits from (1/3,2/3) land on a fixed p ∈ [2/3,4(1+b)/9]",
            check_absorb([L, U, H], middle, middle_up),
        ),
        Clause::new(
            "2.4",
            "2.4(5)",
            "a,b>1/2: orbits from (0,2/3) land on a fixed p ∈ [2/3,4(1+b)/9]",
            check_absorb([U, U, H], inner_below_two_thirds, middle_up),
        ),
        Clause::new(
            "2.4",
            "2.4(6.1)",
            "a>1/2>b: orbits from A1 enter A2",
            check_attraction([U, L, H], "A2"),
        ),
        Clause::new(
            "2.4",
            "2.4(6.2)",
            "a>1/2>b: f(A2) ⊂ A2",
            check_invariance([U, L, H], "A2"),
        ),
        // a, c ≠ 1/2, b = 1/2
        Clause::new("2.5", "2.5(1)", "Fix = {0} ∪ (1/3,2/3) ∪ {1}", fix([E, H, E])),
        Clause::new(
            "2.5",
            "2.5(2)",
            "a,c<1/2: orbits from [2/3,1) land on a fixed p ∈ [4(1+c)/9,2/3)",
            check_absorb([L, H, L], right_open1, right_down),
        ),
        Clause::new(
            "2.5",
            "2.5(3)",
            "a<1/2: orbits from [0,1/3] tend to 0",
            check_limit([L, H, E], left, 0.0),
        ),
        Clause::new(
            "2.5",
            "2.5(4)",
            "c>1/2: orbits from [2/3,1] tend to 1",
            check_limit([E, H, U], right, 1.0),
        ),
        Clause::new(
            "2.5",
            "2.5(5)",
            "a>1/2>c: (0,1/3] lands in (1/3,(4a+1)/9], [2/3,1) lands in [4(1+c)/9,2/3)",
            check_combined(vec![
                boxed(check_absorb([U, H, L], left_open0, left_image)),
                boxed(check_absorb([U, H, L], right_open1, right_down)),
            ]),
        ),
        Clause::new(
            "2.5",
            "2.5(6)",
            "a,c>1/2: orbits from (0,1/3] land on a fixed p ∈ (1/3,(4a+1)/9]",
            check_absorb([U, H, U], left_open0, left_image),
        ),
        // b, c ≠ 1/2, a = 1/2
        Clause::new("2.6", "2.6(1)", "Fix = [0,1/3] ∪ {1}", fix([H, E, E])),
        Clause::new(
            "2.6",
            "2.6(2)",
            "b,c<1/2: orbits from (1/3,1) land on a fixed p ∈ [(4b+1)/9,1/3]",
            check_absorb([H, L, L], open_above_one_third, middle_down),
        ),
        Clause::new(
            "2.6",
            "2.6(3)",
            "b<1/2<c: orbits from (1/3,2/3) land on a fixed p ∈ [(4b+1)/9,1/3]",
            check_absorb([H, L, U], middle, middle_down),
        ),
        Clause::new(
            "2.6",
            "2.6(4)",
            "b<1/2<c: orbits from [2/3,1] tend to 1",
            check_limit([H, L, U], right, 1.0),
        ),
        Clause::new(
            "2.6",
            "2.6(5)",
            "b,c>1/2: orbits from (1/3,1] tend to 1",
            check_limit([H, U, U], above_one_third, 1.0),
        ),
        Clause::new(
            "2.6",
            "2.6(6.1)",
            "b>1/2>c: orbits from A1 enter A2",
            check_attraction([H, U, L], "A2"),
        ),
        Clause::new(
            "2.6",
            "2.6(6.2)",
            "b>1/2>c: f(A2) ⊂ A2",
            check_invariance([H, U, L], "A2"),
        ),
        // a, b, c ≠ 1/2
        Clause::new("2.7", "2.7(1)", "Fix = {0, 1}", fix([E, E, E])),
        Clause::new(
            "2.7",
            "2.7(2)",
            "a,b,c<1/2: orbits from [0,1] tend to 0",
            check_limit([L, L, L], unit, 0.0),
        ),
        Clause::new(
            "2.7",
            "2.7(3)",
            "a,b<1/2<c: [0,2/3) tends to 0, [2/3,1] tends to 1",
            check_combined(vec![
                boxed(check_limit([L, L, U], below_two_thirds, 0.0)),
                boxed(check_limit([L, L, U], right, 1.0)),
                boxed(check_basin_split([L, L, U], TWO_THIRDS, 0.0, 1.0)),
            ]),
        ),
        Clause::new(
            "2.7",
            "2.7(4)",
            "a<1/2<b, c<1/2: orbits from [0,1/3] tend to 0",
            check_limit([L, U, L], left, 0.0),
        ),
        Clause::new(
            "2.7",
            "2.7(5.1)",
            "a<1/2<b, c<1/2: orbits from A1 = [0,1/3] tend to 0",
            check_combined(vec![
                boxed(check_limit([L, U, L], left, 0.0)),
                boxed(check_invariance([L, U, L], "A1")),
            ]),
        ),
        Clause::new(
            "2.7",
            "2.7(5.2)",
            "a<1/2<b, c<1/2: orbits from A2 enter A3",
            check_attraction([L, U, L], "A3"),
        ),
        Clause::new(
            "2.7",
            "2.7(5.3)",
            "a<1/2<b, c<1/2: f(A3) ⊂ A3",
            check_invariance([L, U, L], "A3"),
        ),
        Clause::new(
            "2.7",
            "2.7(6)",
            "a<1/2<b,c: [0,1/3) tends to 0, (1/3,1] tends to 1",
            check_combined(vec![
                boxed(check_limit([L, U, U], below_one_third, 0.0)),
                boxed(check_limit([L, U, U], from_one_third, 1.0)),
                boxed(check_basin_split([L, U, U], ONE_THIRD, 0.0, 1.0)),
            ]),
        ),
        Clause::new(
            "2.7",
            "2.7(7.1)",
            "a>1/2>b,c: orbits from B1 enter B2",
            check_attraction([U, L, L], "B2"),
        ),
        Clause::new(
            "2.7",
            "2.7(7.2)",
            "a>1/2>b,c: f(B2) ⊂ B2",
            check_invariance([U, L, L], "B2"),
        ),
        Clause::new(
            "2.7",
            "2.7(8.1)",
            "a,c>1/2>b: orbits from C1 enter C2",
            check_attraction([U, L, U], "C2"),
        ),
        Clause::new(
            "2.7",
            "2.7(8.2)",
            "a,c>1/2>b: f(C2) ⊂ C2",
            check_invariance([U, L, U], "C2"),
        ),
        Clause::new(
            "2.7",
            "2.7(8.3)",
            "a,c>1/2>b: orbits from C3 = [2/3,1] tend to 1",
            check_combined(vec![
                boxed(check_limit([U, L, U], right, 1.0)),
                boxed(check_invariance([U, L, U], "C3")),
            ]),
        ),
        Clause::new(
            "2.7",
            "2.7(9)",
            "a,b,c>1/2: orbits from (0,1] tend to 1",
            check_limit([U, U, U], unit_open0, 1.0),
        ),
        // 2-cycles around 1/3
        Clause::new(
            "pt",
            "pt(ab)",
            "(x1,x2) = (0.2,0.34) gives a = 0.9375, b = 0.188057041",
            |_, _| {
                let mut out = Outcome::default();
                let (a, b) = periodic::params_from_orbit(0.2, 0.34).expect("distinct interior points");
                out.record(a == 0.9375, || format!("a = {a}"));
                out.record((b - 0.188057041).abs() <= 1e-9, || format!("b = {b}"));
                out
            },
        ),
        Clause::new(
            "pt",
            "pt(pc)",
            "for straddling pairs, the cycle condition holds ⇔ 1/2<a<1 and 0<b<1/2",
            |rng, cfg| {
                let mut out = Outcome::default();
                for _ in 0..cfg.draws * cfg.starts {
                    let (x1, x2) = draw_straddling_pair(rng);
                    let (a, b) = periodic::params_from_orbit(x1, x2).expect("distinct interior points");
                    let band = a > 0.5 && a < 1.0 && b > 0.0 && b < 0.5;
                    let pc = periodic::validate_condition_pc(x1, x2);
                    out.record(pc == band, || format!("({x1},{x2}): pc={pc}, (a,b)=({a},{b})"));
                }
                out
            },
        ),
        Clause::new(
            "pt",
            "pt(round-trip)",
            "admissible (x1,x2) → (a,b) → closed form recovers (x1,x2)",
            |rng, cfg| {
                let mut out = Outcome::default();
                for _ in 0..cfg.draws * cfg.starts {
                    let (x1, x2) = draw_pc_pair(rng);
                    let (a, b) = periodic::params_from_orbit(x1, x2).expect("distinct interior points");
                    let back = periodic::orbit_from_params(a, b);
                    let ok = back.is_some_and(|c| (c.x1 - x1).abs() <= 1e-9 && (c.x2 - x2).abs() <= 1e-9);
                    out.record(ok, || format!("({x1},{x2}) → ({a},{b}) → {back:?}"));
                }
                out
            },
        ),
        Clause::new("pt", "pt(D)", "D = t(t-4) ≥ 0 ⇔ t ≤ 0", |_, _| {
            let mut out = Outcome::default();
            let n = 200;
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
                    let t = periodic::t_value(a, b);
                    let d = periodic::discriminant(a, b);
                    out.record((d >= 0.0) == (t <= 0.0), || {
                        format!("(a,b)=({a},{b}): t={t}, D={d}")
                    });
                }
            }
            out
        }),
        Clause::new(
            "pt",
            "pt(pe)",
            "closed-form cycles satisfy both cycle equations to 1e-10",
            |rng, cfg| {
                let mut out = Outcome::default();
                for _ in 0..cfg.draws * cfg.starts {
                    let (x1, x2) = draw_pc_pair(rng);
                    let (a, b) = periodic::params_from_orbit(x1, x2).expect("distinct interior points");
                    match periodic::orbit_from_params(a, b) {
                        Some(c) => {
                            let (r1, r2) = c.residuals();
                            out.record(r1 <= EPS_CYCLE && r2 <= EPS_CYCLE && c.valid, || {
                                format!("({a},{b}): residuals {r1:e}, {r2:e}")
                            });
                        }
                        None => out.record(false, || format!("({a},{b}): no closed-form cycle")),
                    }
                }
                out
            },
        ),
        Clause::new(
            "pt",
            "pt(oracle)",
            "closed form and brute-force search agree on 2-cycles around 1/3",
            |rng, cfg| {
                let mut out = Outcome::default();
                for _ in 0..cfg.draws {
                    let p = draw_params(rng, [E, E, H]);
                    let closed = periodic::orbit_from_params(p.a(), p.b());
                    let found = periodic::brute_force_two_cycles(&p, CycleSide::Near13, 20_000);
                    let ok = match (closed, found.as_slice()) {
                        (None, []) => true,
                        (Some(c), [f]) => (c.x1 - f.x1).abs() <= 1e-7 && (c.x2 - f.x2).abs() <= 1e-7,
                        _ => false,
                    };
                    out.record(ok, || format!("{p:?}: closed {closed:?}, oracle {found:?}"));
                }
                out
            },
        ),
        Clause::new(
            "pt",
            "pt(mirror)",
            "mirrored pairs around 2/3 are recovered and confirmed by search",
            |rng, cfg| {
                let mut out = Outcome::default();
                for _ in 0..cfg.draws {
                    let (y1, y2) = draw_pc_pair(rng);
                    let (x1, x2) = (1.0 - y2, 1.0 - y1);
                    let (b, c) = periodic::params_from_orbit(x1, x2).expect("distinct interior points");
                    let closed = periodic::orbit_from_params_mirror(b, c);
                    let p = Params::new(0.5, b, c).expect("mirrored coefficients lie in [0,1]");
                    let found = periodic::brute_force_two_cycles(&p, CycleSide::Near23, 20_000);
                    let ok = closed.is_some_and(|k| (k.x1 - x1).abs() <= 1e-7 && (k.x2 - x2).abs() <= 1e-7)
                        && found.len() == 1
                        && (found[0].x1 - x1).abs() <= 1e-7;
                    out.record(ok, || {
                        format!("({x1},{x2}) → ({b},{c}): closed {closed:?}, oracle {found:?}")
                    });
                }
                out
            },
        ),
    ]
}

/// Result of one clause in a suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseReport {
    pub group: &'static str,
    pub id: &'static str,
    pub statement: &'static str,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub clauses: Vec<ClauseReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.outcome.passed())
    }

    /// Plain-text report, one line per clause plus a summary. Contains no
    /// timings, so equal seeds give identical text.
    pub fn render(&self) -> String {
        let mut out = format!("seed {}\n", self.seed);
        for c in &self.clauses {
            let mark = if c.outcome.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{mark}] {:<14} {}  (checked {}, failed {})\n",
                c.id, c.statement, c.outcome.checked, c.outcome.failed
            ));
            if let Some(detail) = &c.outcome.first_failure {
                out.push_str(&format!("       first failure: {detail}\n"));
            }
        }
        let failed = self.clauses.iter().filter(|c| !c.outcome.passed()).count();
        out.push_str(&format!(
            "{} clauses, {} passed, {} failed\n",
            self.clauses.len(),
            self.clauses.len() - failed,
            failed
        ));
        out
    }
}

/// Group labels accepted by [`run_suite`]'s filter.
pub fn group_labels() -> Vec<&'static str> {
    let mut labels: Vec<&'static str> = clauses().iter().map(|c| c.group).collect();
    labels.dedup();
    labels
}

/// Runs every clause (or those of one group) with the given seed.
pub fn run_suite(group: Option<&str>, seed: u64, config: &SuiteConfig) -> SuiteReport {
    let reports = clauses()
        .iter()
        .enumerate()
        .filter(|(_, c)| group.is_none_or(|t| c.group == t))
        .map(|(i, c)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            ClauseReport {
                group: c.group,
                id: c.id,
                statement: c.statement,
                outcome: c.run(&mut rng, config),
            }
        })
        .collect();
    SuiteReport {
        seed,
        clauses: reports,
    }
}
