use proptest::prelude::*;
use qso_core::map::{eval_branch, eval_branch_derivative};
use qso_core::{
    eval, eval_derivative, piece_of, qso_step, Params, PieceId, SimplexPoint, ONE_THIRD, TWO_THIRDS,
};

fn coef() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(0.5), Just(1.0), 0.0..=1.0f64]
}

fn params() -> impl Strategy<Value = Params> {
    (coef(), coef(), coef()).prop_map(|(a, b, c)| Params::new(a, b, c).unwrap())
}

// textbook form of one branch
fn branch_oracle(k: f64, x: f64) -> f64 {
    (1.0 - 2.0 * k) * x * x + 2.0 * k * x
}

fn coefficient_for(p: &Params, x: f64) -> f64 {
    if x <= ONE_THIRD {
        p.a()
    } else if x < TWO_THIRDS {
        p.b()
    } else {
        p.c()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn simplex_is_preserved(p in params(), x in 0.0..=1.0f64) {
        let z = qso_step(&p, SimplexPoint::new(x).unwrap());
        prop_assert!((0.0..=1.0).contains(&z.x()));
        prop_assert!((0.0..=1.0).contains(&z.y()));
        prop_assert_eq!(z.x() + z.y(), 1.0);
    }

    #[test]
    fn step_reduces_to_eval(p in params(), x in 0.0..=1.0f64) {
        let z = qso_step(&p, SimplexPoint::new(x).unwrap());
        prop_assert_eq!(z.x().to_bits(), eval(&p, x).unwrap().to_bits());
    }

    #[test]
    fn endpoints_are_fixed(p in params()) {
        prop_assert_eq!(eval(&p, 0.0).unwrap(), 0.0);
        prop_assert_eq!(eval(&p, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn eval_matches_textbook_form(p in params(), x in 0.0..=1.0f64) {
        let expected = branch_oracle(coefficient_for(&p, x), x);
        prop_assert!((eval(&p, x).unwrap() - expected).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn derivative_matches_central_difference(p in params(), x in 0.001..0.999f64) {
        prop_assume!((x - ONE_THIRD).abs() > 1e-3 && (x - TWO_THIRDS).abs() > 1e-3);
        let h = 1e-6;
        let fd = (eval(&p, x + h).unwrap() - eval(&p, x - h).unwrap()) / (2.0 * h);
        let d = eval_derivative(&p, x).unwrap();
        prop_assert!((d - fd).abs() <= 1e-6 * d.abs().max(1e-3), "{} vs {}", d, fd);
    }

    #[test]
    fn identity_pieces_are_exact(x in 0.0..=1.0f64) {
        prop_assert_eq!(eval(&Params::identity(), x).unwrap(), x);
    }
}

#[test]
fn branches_increase_on_dense_grid() {
    let n = 2001;
    for ik in 0..=20 {
        let k = ik as f64 / 20.0;
        let p = Params::new(k, k, k).unwrap();
        for piece in PieceId::ALL {
            let mut prev = eval_branch(&p, piece, 0.0).unwrap();
            for i in 1..n {
                let x = i as f64 / (n - 1) as f64;
                let y = eval_branch(&p, piece, x).unwrap();
                assert!(y > prev || (k == 1.0 && x == 1.0 && y == prev), "k={k} x={x}");
                assert!(eval_branch_derivative(&p, piece, x).unwrap() >= 0.0);
                if x < 1.0 {
                    assert!(eval_branch_derivative(&p, piece, x).unwrap() > 0.0, "k={k} x={x}");
                }
                prev = y;
            }
        }
    }
}

#[test]
fn left_branch_range() {
    for ia in 0..=100 {
        let a = ia as f64 / 100.0;
        let p = Params::new(a, 0.5, 0.5).unwrap();
        let bound = (1.0 + 4.0 * a) / 9.0;
        for i in 0..=3000 {
            let x = ONE_THIRD * i as f64 / 3000.0;
            let y = eval_branch(&p, PieceId::Left, x).unwrap();
            assert!((0.0..=bound + 2.0 * f64::EPSILON).contains(&y), "a={a} x={x}");
        }
        let top = eval_branch(&p, PieceId::Left, ONE_THIRD).unwrap();
        assert!(
            (top - bound).abs() <= 2.0 * f64::EPSILON,
            "a={a}: {top} vs {bound}"
        );
    }
}

#[test]
fn breakpoints_belong_to_outer_pieces() {
    assert_eq!(piece_of(ONE_THIRD).unwrap(), PieceId::Left);
    assert_eq!(piece_of(TWO_THIRDS).unwrap(), PieceId::Right);
    assert_eq!(piece_of(ONE_THIRD.next_up()).unwrap(), PieceId::Middle);
    assert_eq!(piece_of(TWO_THIRDS.next_down()).unwrap(), PieceId::Middle);
}

#[test]
fn out_of_domain_is_rejected() {
    let p = Params::identity();
    for x in [-1e-12, 1.0 + 1e-12, f64::NAN, f64::INFINITY] {
        assert!(eval(&p, x).is_err());
        assert!(piece_of(x).is_err());
    }
    assert!(Params::new(1.5, 0.5, 0.5).is_err());
    assert!(Params::new(0.5, f64::NAN, 0.5).is_err());
}
