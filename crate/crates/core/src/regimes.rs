//! Parameter regimes, exact fixed-point sets and stability of fixed points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QsoError, Result};
use crate::interval::{Component, IntervalSet};
use crate::map::{self, Params, PieceId, ONE_THIRD, TWO_THIRDS};

/// Tolerance on `|f(x) - x|` for a point to count as fixed.
pub const EPS_FIX: f64 = 1e-12;
/// Half-width of the band around `|multiplier| = 1` classed as indifferent.
pub const EPS_IND: f64 = 1e-9;

/// Position of a free coefficient relative to 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Below,
    Above,
}

impl Side {
    fn of(k: f64) -> Self {
        if k < 0.5 {
            Side::Below
        } else {
            Side::Above
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Below => "<1/2",
            Side::Above => ">1/2",
        })
    }
}

/// Which coefficients differ from 1/2, and on which side they sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeCase {
    /// `a = b = c = 1/2`
    Trivial,
    /// `a = b = c != 1/2`
    UniformNontrivial(Side),
    OnlyA(Side),
    OnlyB(Side),
    OnlyC(Side),
    ABnotC {
        a: Side,
        b: Side,
    },
    ACnotB {
        a: Side,
        c: Side,
    },
    BCnotA {
        b: Side,
        c: Side,
    },
    AllThree {
        a: Side,
        b: Side,
        c: Side,
    },
}

impl RegimeCase {
    /// Variant name without the side flags.
    pub fn name(&self) -> &'static str {
        match self {
            RegimeCase::Trivial => "Trivial",
            RegimeCase::UniformNontrivial(_) => "UniformNontrivial",
            RegimeCase::OnlyA(_) => "OnlyA",
            RegimeCase::OnlyB(_) => "OnlyB",
            RegimeCase::OnlyC(_) => "OnlyC",
            RegimeCase::ABnotC { .. } => "ABnotC",
            RegimeCase::ACnotB { .. } => "ACnotB",
            RegimeCase::BCnotA { .. } => "BCnotA",
            RegimeCase::AllThree { .. } => "AllThree",
        }
    }

    /// Side flags rendered as e.g. `a>1/2 b<1/2`.
    pub fn sides(&self) -> String {
        let parts: Vec<String> = match *self {
            RegimeCase::Trivial => vec![],
            RegimeCase::UniformNontrivial(s) => vec![format!("a=b=c{s}")],
            RegimeCase::OnlyA(s) => vec![format!("a{s}")],
            RegimeCase::OnlyB(s) => vec![format!("b{s}")],
            RegimeCase::OnlyC(s) => vec![format!("c{s}")],
            RegimeCase::ABnotC { a, b } => vec![format!("a{a}"), format!("b{b}")],
            RegimeCase::ACnotB { a, c } => vec![format!("a{a}"), format!("c{c}")],
            RegimeCase::BCnotA { b, c } => vec![format!("b{b}"), format!("c{c}")],
            RegimeCase::AllThree { a, b, c } => vec![format!("a{a}"), format!("b{b}"), format!("c{c}")],
        };
        parts.join(" ")
    }
}

impl fmt::Display for RegimeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classifies `p` by exact comparison of each coefficient with 1/2.
pub fn classify(p: &Params) -> RegimeCase {
    let (a, b, c) = (p.a(), p.b(), p.c());
    if a == b && b == c {
        return if a == 0.5 {
            RegimeCase::Trivial
        } else {
            RegimeCase::UniformNontrivial(Side::of(a))
        };
    }
    match (a != 0.5, b != 0.5, c != 0.5) {
        (true, false, false) => RegimeCase::OnlyA(Side::of(a)),
        (false, true, false) => RegimeCase::OnlyB(Side::of(b)),
        (false, false, true) => RegimeCase::OnlyC(Side::of(c)),
        (true, true, false) => RegimeCase::ABnotC {
            a: Side::of(a),
            b: Side::of(b),
        },
        (true, false, true) => RegimeCase::ACnotB {
            a: Side::of(a),
            c: Side::of(c),
        },
        (false, true, true) => RegimeCase::BCnotA {
            b: Side::of(b),
            c: Side::of(c),
        },
        (true, true, true) => RegimeCase::AllThree {
            a: Side::of(a),
            b: Side::of(b),
            c: Side::of(c),
        },
        (false, false, false) => unreachable!("a = b = c handled above"),
    }
}

/// Closed-form fixed-point set of `f_{a,b,c}`.
pub fn fixed_point_set(p: &Params) -> IntervalSet {
    use Component as C;
    let components = match classify(p) {
        RegimeCase::Trivial => vec![C::closed(0.0, 1.0)],
        RegimeCase::UniformNontrivial(_) | RegimeCase::AllThree { .. } => {
            vec![C::point(0.0), C::point(1.0)]
        }
        RegimeCase::OnlyA(_) => vec![C::point(0.0), C::left_open(ONE_THIRD, 1.0)],
        RegimeCase::OnlyB(_) => vec![C::closed(0.0, ONE_THIRD), C::closed(TWO_THIRDS, 1.0)],
        RegimeCase::OnlyC(_) => vec![C::right_open(0.0, TWO_THIRDS), C::point(1.0)],
        RegimeCase::ABnotC { .. } => vec![C::point(0.0), C::closed(TWO_THIRDS, 1.0)],
        RegimeCase::ACnotB { .. } => vec![C::point(0.0), C::open(ONE_THIRD, TWO_THIRDS), C::point(1.0)],
        RegimeCase::BCnotA { .. } => vec![C::closed(0.0, ONE_THIRD), C::point(1.0)],
    };
    IntervalSet::new(components).expect("regime fixed-point sets are well formed")
}

/// Stability class of a fixed or periodic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilityClass {
    Attracting,
    Repelling,
    Indifferent,
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityClass::Attracting => "attracting",
            StabilityClass::Repelling => "repelling",
            StabilityClass::Indifferent => "indifferent",
        })
    }
}

/// Classifies a multiplier against 1 with the [`EPS_IND`] band.
pub fn classify_multiplier(multiplier: f64) -> StabilityClass {
    let m = multiplier.abs();
    if (m - 1.0).abs() <= EPS_IND {
        StabilityClass::Indifferent
    } else if m < 1.0 {
        StabilityClass::Attracting
    } else {
        StabilityClass::Repelling
    }
}

/// Stability of the fixed point `x_star`, using the branch of `side` when
/// given (for one-sided questions at 1/3 or 2/3) and the piece of `x_star`
/// otherwise.
pub fn stability_of(p: &Params, x_star: f64, side: Option<PieceId>) -> Result<StabilityClass> {
    let image = map::eval(p, x_star)?;
    let residual = (image - x_star).abs();
    if residual > EPS_FIX {
        return Err(QsoError::NotAFixedPoint { x: x_star, residual });
    }
    let piece = match side {
        Some(piece) => piece,
        None => map::piece_of(x_star)?,
    };
    if p.is_identity_on(piece) {
        return Ok(StabilityClass::Indifferent);
    }
    let slope = map::eval_branch_derivative(p, piece, x_star)?;
    Ok(classify_multiplier(slope))
}
