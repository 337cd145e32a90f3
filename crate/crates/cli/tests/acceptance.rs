//! Acceptance gate: ten criteria, each with its tolerance and time limit.
//! Prints one line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qso_core::dynamics::{TrappingRole, DEFAULT_TOL};
use qso_core::map::eval_branch;
use qso_core::periodic::{discriminant, t_value};
use qso_core::scan::{brute_force_fixed_points, compare_with_scan};
use qso_core::suites::{draw_in_regime, draw_params, draw_straddling_pair, Coef, REGIME_NAMES};
use qso_core::{
    brute_force_two_cycles, detect_behavior, eval, fixed_point_set, orbit_from_params, params_from_orbit,
    qso_step, trapping_sets, validate_condition_pc, verify_attraction, verify_invariance, Behavior,
    Component, CycleSide, IntervalSet, Params, PieceId, SimplexPoint, ONE_THIRD, TWO_THIRDS,
};

const SEED: u64 = 20_241_015;
const BUDGET: usize = 1_000_000;

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// Counts checks and keeps the first failure.
#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(detail());
            }
        }
    }
}

fn interval(c: Component) -> IntervalSet {
    IntervalSet::new(vec![c]).unwrap()
}

fn run(p: &Params, x0: f64) -> Behavior {
    detect_behavior(p, x0, BUDGET, DEFAULT_TOL).unwrap().behavior
}

fn identity_regime() -> Tally {
    let mut t = Tally::default();
    let p = Params::new(0.5, 0.5, 0.5).unwrap();
    let mut r = rng(1);
    for _ in 0..1_000 {
        let x: f64 = r.gen_range(0.0..=1.0);
        let y = eval(&p, x).unwrap();
        t.check(y.to_bits() == x.to_bits(), || format!("f({x}) = {y}"));
    }
    t
}

fn forward_example() -> Tally {
    let mut t = Tally::default();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qso_cli::run(
        ["qso", "cycle", "--x1", "0.2", "--x2", "0.34", "--format", "json"],
        &mut out,
        &mut err,
    );
    t.check(code == 0, || String::from_utf8_lossy(&err).into_owned());
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap_or_default();
    let (a, b) = (
        v["a"].as_f64().unwrap_or(f64::NAN),
        v["b"].as_f64().unwrap_or(f64::NAN),
    );
    t.check(a == 0.9375, || format!("a = {a}"));
    t.check((b - 0.188057041).abs() <= 1e-9, || format!("b = {b}"));
    t
}

fn closed_form_and_oracle() -> Tally {
    let mut t = Tally::default();
    let (a, b) = (0.9375, 0.188057041);
    let closed = orbit_from_params(a, b);
    t.check(
        closed.is_some_and(|c| (c.x1 - 0.2).abs() <= 1e-7 && (c.x2 - 0.34).abs() <= 1e-7),
        || format!("closed form {closed:?}"),
    );
    let found = brute_force_two_cycles(&Params::new(a, b, 0.5).unwrap(), CycleSide::Near13, 100_000);
    t.check(found.len() == 1, || {
        format!("oracle found {} cycles", found.len())
    });
    if let (Some(c), Some(o)) = (closed, found.first()) {
        t.check((c.x1 - o.x1).abs() <= 1e-7 && (c.x2 - o.x2).abs() <= 1e-7, || {
            format!("{c:?} vs {o:?}")
        });
    }
    t
}

fn fixed_point_sets() -> Tally {
    let mut t = Tally::default();
    let grid = 100_001;
    let mut r = rng(4);
    for name in REGIME_NAMES {
        for _ in 0..100 {
            let p = draw_in_regime(&mut r, name);
            let scanned = brute_force_fixed_points(&p, grid);
            let cmp = compare_with_scan(&fixed_point_set(&p), &scanned, 1.0 / (grid - 1) as f64);
            t.check(cmp.is_ok(), || format!("{name} {p:?}: {}", cmp.unwrap_err()));
        }
    }
    t
}

fn convergence_suites() -> Tally {
    use Coef::{Above as U, Below as L};
    let mut t = Tally::default();
    let mut r = rng(5);
    let open = interval(Component::open(0.0, 1.0));
    for _ in 0..10 {
        let p = draw_params(&mut r, [L, L, L]);
        for x0 in open.stratified_interior(200) {
            let b = run(&p, x0);
            t.check(b == Behavior::ConvergedTo { limit: 0.0 }, || {
                format!("{p:?} x0={x0}: {b}")
            });
        }
        let p = draw_params(&mut r, [U, U, U]);
        for x0 in open.stratified_interior(200).into_iter().chain([1.0]) {
            let b = run(&p, x0);
            t.check(b == Behavior::ConvergedTo { limit: 1.0 }, || {
                format!("{p:?} x0={x0}: {b}")
            });
        }
        for (coefs, threshold) in [([L, L, U], TWO_THIRDS), ([L, U, U], ONE_THIRD)] {
            let p = draw_params(&mut r, coefs);
            for (x0, limit) in [(threshold - 1e-3, 0.0), (threshold + 1e-3, 1.0)] {
                let b = run(&p, x0);
                t.check(b == Behavior::ConvergedTo { limit }, || {
                    format!("{p:?} x0={x0}: {b}")
                });
            }
        }
    }
    t
}

/// Every start of `region` is absorbed at an exact fixed point in
/// `[lo, hi]` (open ends as flagged), `hi` allowed a few ulps of rounding.
fn absorption_case(
    t: &mut Tally,
    r: &mut ChaCha8Rng,
    coefs: [Coef; 3],
    region: Component,
    bounds: fn(&Params) -> (f64, bool, f64, bool),
) {
    for _ in 0..10 {
        let p = draw_params(r, coefs);
        let (lo, closed_lo, hi, closed_hi) = bounds(&p);
        let slack = 4.0 * f64::EPSILON;
        for x0 in interval(region).stratified_interior(200) {
            let b = run(&p, x0);
            let ok = match b {
                Behavior::AbsorbedAt { fixed_point: q, .. } => {
                    let above = if closed_lo { q >= lo - slack } else { q > lo };
                    let below = if closed_hi { q <= hi + slack } else { q < hi };
                    above && below && eval(&p, q).unwrap().to_bits() == q.to_bits()
                }
                _ => false,
            };
            t.check(ok, || format!("{p:?} x0={x0}: {b}, expected in [{lo}, {hi}]"));
        }
    }
}

fn absorption_suites() -> Tally {
    use Coef::{Above as U, Below as L, Half as H};
    let mut t = Tally::default();
    let mut r = rng(6);
    let left = Component::left_open(0.0, ONE_THIRD);
    let middle = Component::open(ONE_THIRD, TWO_THIRDS);
    let right = Component::right_open(TWO_THIRDS, 1.0);
    let up_from_left = |p: &Params| (ONE_THIRD, false, (4.0 * p.a() + 1.0) / 9.0, true);
    let down_from_middle = |p: &Params| ((1.0 + 4.0 * p.b()) / 9.0, true, ONE_THIRD, true);
    let up_from_middle = |p: &Params| (TWO_THIRDS, true, 4.0 * (1.0 + p.b()) / 9.0, true);
    let down_from_right = |p: &Params| (4.0 * (1.0 + p.c()) / 9.0, true, TWO_THIRDS, false);

    absorption_case(&mut t, &mut r, [U, H, H], left, up_from_left);
    absorption_case(&mut t, &mut r, [H, L, H], middle, down_from_middle);
    absorption_case(&mut t, &mut r, [H, U, H], middle, up_from_middle);
    absorption_case(&mut t, &mut r, [H, H, L], right, down_from_right);
    absorption_case(&mut t, &mut r, [L, U, H], middle, up_from_middle);
    absorption_case(
        &mut t,
        &mut r,
        [U, U, H],
        Component::open(0.0, TWO_THIRDS),
        up_from_middle,
    );
    absorption_case(&mut t, &mut r, [L, H, L], right, down_from_right);
    absorption_case(&mut t, &mut r, [U, H, L], left, up_from_left);
    absorption_case(&mut t, &mut r, [U, H, L], right, down_from_right);
    absorption_case(&mut t, &mut r, [U, H, U], left, up_from_left);
    absorption_case(
        &mut t,
        &mut r,
        [H, L, L],
        Component::open(ONE_THIRD, 1.0),
        down_from_middle,
    );
    absorption_case(&mut t, &mut r, [H, L, U], middle, down_from_middle);
    t
}

fn trapping_sets_hold() -> Tally {
    use Coef::{Above as U, Below as L, Half as H};
    let mut t = Tally::default();
    let mut r = rng(7);
    for coefs in [[U, L, H], [H, U, L], [L, U, L], [U, L, L], [U, L, U]] {
        for _ in 0..50 {
            let p = draw_params(&mut r, coefs);
            let sets = trapping_sets(&p);
            t.check(!sets.is_empty(), || format!("{p:?}: no trapping set"));
            for s in sets {
                let inv = verify_invariance(&p, &s.set, 10_000);
                t.check(inv.all_inside(), || format!("{p:?} {s}: {inv:?}"));
                if s.role == TrappingRole::Absorbing {
                    let basin = s.basin.as_ref().expect("absorbing sets carry a basin");
                    let att = verify_attraction(&p, basin, &s.set, 1_000, 100_000);
                    t.check(att.starts.len() == 1_000, || {
                        format!("{p:?} {s}: {} starts", att.starts.len())
                    });
                    t.check(att.all_entered(), || {
                        format!("{p:?} {s}: {:?} never enter", att.failures())
                    });
                }
            }
            // the set endpoints are the breakpoint images of the adjacent branches
            if let Some(s) = trapping_sets(&p)
                .iter()
                .find(|s| s.label != "A1" && s.label != "C3")
            {
                let (lo, hi) = s.set.hull().unwrap();
                let expected = if s.label == "A2" && p.a() == 0.5 || s.label == "A3" {
                    (
                        eval_branch(&p, PieceId::Right, TWO_THIRDS).unwrap(),
                        eval_branch(&p, PieceId::Middle, TWO_THIRDS).unwrap(),
                    )
                } else {
                    (
                        eval_branch(&p, PieceId::Middle, ONE_THIRD).unwrap(),
                        eval_branch(&p, PieceId::Left, ONE_THIRD).unwrap(),
                    )
                };
                t.check((lo, hi) == expected, || {
                    format!("{p:?} {s}: hull ({lo}, {hi}) vs {expected:?}")
                });
            }
        }
    }
    t
}

fn discriminant_law() -> Tally {
    let mut t = Tally::default();
    let n = 200;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
            let (tv, d) = (t_value(a, b), discriminant(a, b));
            t.check((d >= 0.0) == (tv <= 0.0), || {
                format!("(a,b)=({a},{b}): t={tv}, D={d}")
            });
        }
    }
    t
}

fn condition_equivalence() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(9);
    for _ in 0..10_000 {
        let (x1, x2) = draw_straddling_pair(&mut r);
        let (a, b) = params_from_orbit(x1, x2).unwrap();
        let band = a > 0.5 && a < 1.0 && b > 0.0 && b < 0.5;
        let pc = validate_condition_pc(x1, x2);
        t.check(pc == band, || format!("({x1},{x2}) → ({a},{b}): condition {pc}"));
    }
    t
}

fn simplex_conservation() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(10);
    for _ in 0..100_000 {
        let p = Params::new(r.gen(), r.gen(), r.gen()).unwrap();
        let x: f64 = r.gen();
        let z = qso_step(&p, SimplexPoint::new(x).unwrap());
        let fx = eval(&p, x).unwrap();
        t.check(z.x() + z.y() == 1.0 && z.x().to_bits() == fx.to_bits(), || {
            format!("{p:?} x={x}: ({}, {})", z.x(), z.y())
        });
    }
    t
}

type Criterion = (&'static str, u64, fn() -> Tally);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "identity regime fixes 10^3 points bit-exactly",
            1,
            identity_regime,
        ),
        (
            "forward map of (0.2, 0.34) gives a = 0.9375, b = 0.188057041",
            1,
            forward_example,
        ),
        (
            "closed form and grid-10^5 oracle agree on the reference cycle",
            5,
            closed_form_and_oracle,
        ),
        (
            "fixed-point sets match the 10^5-grid scan, 100 draws x 9 regimes",
            60,
            fixed_point_sets,
        ),
        ("convergence limits and basin splits", 30, convergence_suites),
        (
            "finite-time absorption onto exact fixed points",
            30,
            absorption_suites,
        ),
        (
            "trapping sets invariant (10^4 samples) and attracting (10^3 starts)",
            120,
            trapping_sets_hold,
        ),
        ("D >= 0 iff t <= 0 on a 200x200 grid", 1, discriminant_law),
        (
            "cycle condition iff coefficient band, 10^4 pairs",
            5,
            condition_equivalence,
        ),
        (
            "simplex conservation and reduction, 10^5 pairs",
            1,
            simplex_conservation,
        ),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let tally = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let pass = tally.failed == 0 && tally.checked > 0 && in_time;
        failures += usize::from(!pass);
        println!(
            "[{}] {:>2}. {name}: {} checks, {} failed, {:.2} s (limit {limit} s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            tally.checked,
            tally.failed,
            elapsed.as_secs_f64(),
        );
        if let Some(detail) = tally.first {
            println!("       first failure: {detail}");
        }
        if !in_time {
            println!("       over the time limit");
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
