use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qso_core::periodic::{discriminant, t_value, EPS_CYCLE};
use qso_core::suites::{draw_pc_pair, draw_straddling_pair};
use qso_core::{
    brute_force_two_cycles, eval, orbit_from_params, orbit_from_params_mirror, params_from_orbit,
    validate_condition_pc, CycleSide, Params, StabilityClass, TwoCycle,
};

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(5150);
    r.set_stream(stream);
    r
}

fn close(c: &TwoCycle, x1: f64, x2: f64, tol: f64) -> bool {
    (c.x1 - x1).abs() <= tol && (c.x2 - x2).abs() <= tol
}

#[test]
fn round_trip_recovers_the_orbit() {
    let mut r = rng(1);
    for _ in 0..500 {
        let (x1, x2) = draw_pc_pair(&mut r);
        assert!(validate_condition_pc(x1, x2));
        let (a, b) = params_from_orbit(x1, x2).unwrap();
        let c = orbit_from_params(a, b).unwrap_or_else(|| panic!("({x1},{x2}) → ({a},{b}) lost"));
        assert!(close(&c, x1, x2, 1e-9), "({x1},{x2}) → {c:?}");
        assert!(c.valid);
    }
}

#[test]
fn discriminant_is_nonnegative_exactly_when_t_is_not_positive() {
    let n = 401;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
            let t = t_value(a, b);
            assert!(t <= 1.0);
            assert_eq!(discriminant(a, b) >= 0.0, t <= 0.0, "(a,b)=({a},{b}) t={t}");
        }
    }
}

#[test]
fn condition_matches_coefficient_band_on_straddling_pairs() {
    let mut r = rng(2);
    let mut inside = 0;
    for _ in 0..10_000 {
        let (x1, x2) = draw_straddling_pair(&mut r);
        let (a, b) = params_from_orbit(x1, x2).unwrap();
        let band = a > 0.5 && a < 1.0 && b > 0.0 && b < 0.5;
        let pc = validate_condition_pc(x1, x2);
        assert_eq!(pc, band, "({x1},{x2}) → ({a},{b})");
        inside += pc as usize;
    }
    assert!(inside > 500 && inside < 9_500);
}

#[test]
fn equivalence_needs_the_pair_to_straddle_one_third() {
    // both points on the middle piece: coefficients in the band, condition false
    let (a, b) = params_from_orbit(0.5, 0.6).unwrap();
    assert!(a > 0.5 && a < 1.0 && b > 0.0 && b < 0.5, "({a},{b})");
    assert!(!validate_condition_pc(0.5, 0.6));
}

#[test]
fn equivalence_over_the_unit_square_fails_only_off_the_pieces() {
    let mut r = rng(3);
    for _ in 0..10_000 {
        let (x1, x2): (f64, f64) = (r.gen_range(1e-9..1.0 - 1e-9), r.gen_range(1e-9..1.0 - 1e-9));
        let Ok((a, b)) = params_from_orbit(x1, x2) else {
            continue;
        };
        let band = a > 0.5 && a < 1.0 && b > 0.0 && b < 0.5;
        if band != validate_condition_pc(x1, x2) {
            let straddles = x1 < 1.0 / 3.0 && x2 > 1.0 / 3.0 && x2 < 2.0 / 3.0;
            assert!(!straddles, "({x1},{x2})");
        }
    }
}

#[test]
fn closed_form_agrees_with_the_oracle() {
    let mut r = rng(4);
    let mut found = 0;
    for i in 0..400 {
        let (a, b) = if i % 4 == 0 {
            // the quadrant with no cycles claimed either way
            (r.gen_range(0.0..0.5), r.gen_range(0.5..=1.0))
        } else if i % 4 == 1 {
            let (x1, x2) = draw_pc_pair(&mut r);
            params_from_orbit(x1, x2).unwrap()
        } else {
            (r.gen_range(0.0..=1.0), r.gen_range(0.0..=1.0))
        };
        let p = Params::new(a, b, 0.5).unwrap();
        let closed = orbit_from_params(a, b);
        let oracle = brute_force_two_cycles(&p, CycleSide::Near13, 100_000);
        match (closed, oracle.as_slice()) {
            (None, []) => {}
            (Some(c), [o]) => {
                found += 1;
                assert!(close(&c, o.x1, o.x2, 1e-7), "({a},{b}): {c:?} vs {o:?}");
            }
            (c, o) => panic!("({a},{b}): closed {c:?}, oracle {o:?}"),
        }
        if a < 0.5 && b > 0.5 {
            assert!(closed.is_none(), "({a},{b})");
        }
    }
    assert!(found >= 100, "found {found}");
}

#[test]
fn returned_cycles_satisfy_both_equations() {
    let mut r = rng(5);
    for _ in 0..2_000 {
        let (a, b) = (r.gen_range(0.5..1.0), r.gen_range(0.0..0.5));
        if let Some(c) = orbit_from_params(a, b) {
            let (r1, r2) = c.residuals();
            assert!(r1 <= EPS_CYCLE && r2 <= EPS_CYCLE, "({a},{b}): {r1:e} {r2:e}");
            let p = Params::new(a, b, 0.5).unwrap();
            assert!((eval(&p, eval(&p, c.x1).unwrap()).unwrap() - c.x1).abs() <= EPS_CYCLE);
        }
    }
}

#[test]
fn straddling_cycles_are_repelling() {
    let mut r = rng(6);
    for _ in 0..2_000 {
        let (x1, x2) = draw_pc_pair(&mut r);
        let (a, b) = params_from_orbit(x1, x2).unwrap();
        let c = orbit_from_params(a, b).unwrap();
        assert!(c.multiplier > 1.0, "({x1},{x2}): {}", c.multiplier);
        assert_eq!(c.stability(), StabilityClass::Repelling);
    }
}

#[test]
fn mirror_cycles_are_conjugate_to_cycles_near_one_third() {
    // y = 1 - x turns f_{a,b,c} into f_{1-c,1-b,1-a}
    let mut r = rng(7);
    for _ in 0..200 {
        let (y1, y2) = draw_pc_pair(&mut r);
        let (a, b) = params_from_orbit(y1, y2).unwrap();
        let near = orbit_from_params(a, b).unwrap();
        let mirror = orbit_from_params_mirror(1.0 - b, 1.0 - a).unwrap();
        assert!(
            close(&mirror, 1.0 - near.x2, 1.0 - near.x1, 1e-9),
            "{near:?} vs {mirror:?}"
        );
        assert!((mirror.multiplier - near.multiplier).abs() <= 1e-9 * near.multiplier);
    }
}

#[test]
fn mirror_closed_form_agrees_with_the_oracle() {
    let mut r = rng(8);
    for _ in 0..100 {
        let (b, c) = (r.gen_range(0.0..=1.0), r.gen_range(0.0..=1.0));
        let p = Params::new(0.5, b, c).unwrap();
        let closed = orbit_from_params_mirror(b, c);
        let oracle = brute_force_two_cycles(&p, CycleSide::Near23, 100_000);
        match (closed, oracle.as_slice()) {
            (None, []) => {}
            (Some(k), [o]) => assert!(close(&k, o.x1, o.x2, 1e-7), "({b},{c}): {k:?} vs {o:?}"),
            (k, o) => panic!("({b},{c}): closed {k:?}, oracle {o:?}"),
        }
        if closed.is_some() {
            assert!(b > 0.5 && c < 0.5, "({b},{c})");
        }
    }
}

#[test]
fn reference_pair_and_its_mirror() {
    let (a, b) = params_from_orbit(0.2, 0.34).unwrap();
    assert_eq!(a, 0.9375);
    assert!((b - 0.188057041).abs() < 1e-9);
    let m = orbit_from_params_mirror(1.0 - b, 0.0625).unwrap();
    assert!(close(&m, 0.66, 0.8, 1e-9), "{m:?}");
}
