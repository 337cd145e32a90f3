//! The piecewise quadratic map on `[0,1]` and its lift to the one-simplex.
//!
//! The coefficient `p(x)` of the operator takes the value `a` on `[0,1/3]`,
//! `b` on `(1/3,2/3)` and `c` on `[2/3,1]`. On each piece the reduced map is
//! the quadratic `(1-2k)x^2 + 2kx`, which we evaluate as
//! `x + (2k-1)·x(1-x)` with fused operations. That form is exact on the
//! identity branches (`k = 1/2`) and at both endpoints, which is what the
//! absorption detector relies on.

use serde::{Deserialize, Serialize};

use crate::error::{QsoError, Result};

/// Nearest double to 1/3. Every piece decision uses this constant.
pub const ONE_THIRD: f64 = 1.0 / 3.0;
/// Nearest double to 2/3.
pub const TWO_THIRDS: f64 = 2.0 / 3.0;

/// Coefficient triple `(a, b, c)` in `[0,1]^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    c: f64,
}

impl TryFrom<RawParams> for Params {
    type Error = QsoError;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.a, raw.b, raw.c)
    }
}

fn check_coefficient(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(QsoError::CoefficientOutOfRange { name, value })
    }
}

impl Params {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        Ok(Self {
            a: check_coefficient("a", a)?,
            b: check_coefficient("b", b)?,
            c: check_coefficient("c", c)?,
        })
    }

    /// `a = b = c = 1/2`, the identity map.
    pub fn identity() -> Self {
        Self {
            a: 0.5,
            b: 0.5,
            c: 0.5,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Coefficient in force on `piece`.
    pub fn coefficient(&self, piece: PieceId) -> f64 {
        match piece {
            PieceId::Left => self.a,
            PieceId::Middle => self.b,
            PieceId::Right => self.c,
        }
    }

    /// True when the branch on `piece` is the identity.
    pub fn is_identity_on(&self, piece: PieceId) -> bool {
        self.coefficient(piece) == 0.5
    }

    /// Evaluates the map without checking the domain.
    ///
    /// `x` must already lie in `[0,1]`; iteration loops use this after the
    /// start point has been validated, since the map never leaves `[0,1]`.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        branch_value(self.coefficient(piece_unchecked(x)), x)
    }
}

/// One of the three pieces of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceId {
    /// `[0, 1/3]`
    Left,
    /// `(1/3, 2/3)`
    Middle,
    /// `[2/3, 1]`
    Right,
}

impl PieceId {
    pub const ALL: [PieceId; 3] = [PieceId::Left, PieceId::Middle, PieceId::Right];
}

impl std::fmt::Display for PieceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PieceId::Left => "left",
            PieceId::Middle => "middle",
            PieceId::Right => "right",
        };
        f.write_str(name)
    }
}

/// A state `(x, 1 - x)` of the two-species population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    x: f64,
    y: f64,
}

impl SimplexPoint {
    /// Builds the state from the frequency of the first species.
    pub fn new(x: f64) -> Result<Self> {
        check_domain(x)?;
        Ok(Self { x, y: 1.0 - x })
    }

    /// Builds the state from both coordinates. The pair must be
    /// non-negative and sum to one up to a few ulps; `y` is then re-derived
    /// as `1 - x`.
    pub fn from_coords(x: f64, y: f64) -> Result<Self> {
        let on_simplex = x >= 0.0 && y >= 0.0 && (x + y - 1.0).abs() <= 4.0 * f64::EPSILON;
        if !on_simplex {
            return Err(QsoError::NotOnSimplex { x, y });
        }
        Self::new(x)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

#[inline]
fn check_domain(x: f64) -> Result<f64> {
    // NaN fails `contains`.
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(QsoError::OutOfDomain(x))
    }
}

#[inline]
fn piece_unchecked(x: f64) -> PieceId {
    if x <= ONE_THIRD {
        PieceId::Left
    } else if x < TWO_THIRDS {
        PieceId::Middle
    } else {
        PieceId::Right
    }
}

/// `(1-2k)x^2 + 2kx`, computed as `x + (2k-1)·(x - x^2)` and clamped to `[0,1]`.
#[inline]
fn branch_value(k: f64, x: f64) -> f64 {
    let spread = (-x).mul_add(x, x);
    (2.0 * k - 1.0).mul_add(spread, x).clamp(0.0, 1.0)
}

#[inline]
fn branch_slope(k: f64, x: f64) -> f64 {
    2.0 * (1.0 - 2.0 * k) * x + 2.0 * k
}

/// Piece containing `x`: `Left` iff `x <= 1/3`, `Right` iff `x >= 2/3`.
pub fn piece_of(x: f64) -> Result<PieceId> {
    check_domain(x).map(piece_unchecked)
}

/// `f_{a,b,c}(x)`.
pub fn eval(p: &Params, x: f64) -> Result<f64> {
    check_domain(x).map(|x| p.apply(x))
}

/// Evaluates the polynomial of `piece` at `x`, whatever piece `x` is in.
/// Used for one-sided values at the breakpoints.
pub fn eval_branch(p: &Params, piece: PieceId, x: f64) -> Result<f64> {
    check_domain(x).map(|x| branch_value(p.coefficient(piece), x))
}

/// Derivative `2(1-2k)x + 2k` of the branch selected by `piece_of(x)`.
pub fn eval_derivative(p: &Params, x: f64) -> Result<f64> {
    let piece = piece_of(x)?;
    Ok(branch_slope(p.coefficient(piece), x))
}

/// Derivative of an explicitly chosen branch at `x`.
pub fn eval_branch_derivative(p: &Params, piece: PieceId, x: f64) -> Result<f64> {
    check_domain(x).map(|x| branch_slope(p.coefficient(piece), x))
}

/// One step of the evolution operator on the simplex.
///
/// The first coordinate is `eval(p, x)` and the second is `1 - x'`, so the
/// simplex view and the reduced view agree bit for bit.
pub fn qso_step(p: &Params, z: SimplexPoint) -> SimplexPoint {
    let x = p.apply(z.x);
    SimplexPoint { x, y: 1.0 - x }
}
