//! Equal-edge-length Regge action.
//!
//! With every edge of length `ℓ`, the Regge action of a closed triangulation
//! only depends on its edge degrees:
//!
//! ```text
//! A_CR(T, ℓ)  = V_{n-2}(ℓ) / (16π) · Σ_bones (2π − θ_n · deg)
//! A^VN_CR     = A_CR / (N_n · V_n(ℓ))
//! ```
//!
//! In dimension 3 the normalized action only depends on the mean bone-degree
//! `μ = 6 N3 / N1`:
//!
//! ```text
//! A_μ = (9√2 / 2) · (1/μ − 1/μ*₃) / ℓ²,    μ*₃ = 2π / arccos(1/3)
//! ```
//!
//! `μ*₃` is irrational, so no rational `μ` gives zero action. Near the flat
//! value the difference `1/μ − 1/μ*₃` cancels badly in double precision, so for
//! rational `μ = 6K/N1` it is evaluated as `(2π N1 − 6K θ₃) / (12π K)` with the
//! numerator in double-double arithmetic.

use std::cmp::Ordering;
use std::f64::consts::{PI, SQRT_2};

use thiserror::Error;

use crate::complex::{GluedTriangulation, RationalMu};

/// arccos(1/3) split as `hi + lo`.
pub const THETA3: f64 = 1.2309594173407747;
const THETA3_LO: f64 = -5.980971312270238e-17;
/// 2π split as `hi + lo`.
const TWO_PI_LO: f64 = 2.4492935982947064e-16;
/// 2π / arccos(1/3).
pub const MU_STAR3: f64 = 5.10429931211954;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActionError {
    #[error("edge length must be positive and finite, got {0}")]
    Length(f64),
    #[error("dimension must be at least 2, got {0}")]
    Dimension(u32),
    #[error("dimension mismatch: triangulations are 3-dimensional, parameters say {0}")]
    DimensionMismatch(u32),
}

/// Edge length in Planck units and dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionParams {
    ell: f64,
    dimension: u32,
}

impl ActionParams {
    pub fn new(ell: f64) -> Result<Self, ActionError> {
        Self::with_dimension(ell, 3)
    }

    pub fn with_dimension(ell: f64, dimension: u32) -> Result<Self, ActionError> {
        if !(ell.is_finite() && ell > 0.0) {
            return Err(ActionError::Length(ell));
        }
        if dimension < 2 {
            return Err(ActionError::Dimension(dimension));
        }
        Ok(ActionParams { ell, dimension })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }
}

impl Default for ActionParams {
    fn default() -> Self {
        ActionParams { ell: 1.0, dimension: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionKind {
    Raw,
    VolumeNormalized,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionValue {
    pub value: f64,
    pub kind: ActionKind,
}

/// arccos(1/n), the dihedral angle of the regular n-simplex.
pub fn dihedral_angle(n: u32) -> f64 {
    assert!(n >= 2, "dimension must be at least 2");
    match n {
        2 => PI / 3.0,
        3 => THETA3,
        _ => (1.0 / n as f64).acos(),
    }
}

/// 2π / arccos(1/n): the bone degree with zero deficit angle.
pub fn flat_degree(n: u32) -> f64 {
    match n {
        2 => 6.0,
        3 => MU_STAR3,
        _ => 2.0 * PI / dihedral_angle(n),
    }
}

/// Volume of the regular k-simplex with edge length `ell`.
pub fn simplex_volume(k: u32, ell: f64) -> f64 {
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    ((k + 1) as f64).sqrt() / (factorial * SQRT_2.powi(k as i32)) * ell.powi(k as i32)
}

fn check_dim(p: &ActionParams) -> Result<(), ActionError> {
    if p.dimension != 3 {
        return Err(ActionError::DimensionMismatch(p.dimension));
    }
    Ok(())
}

/// Raw action by summing deficits over the edge orbits.
pub fn regge_action_equal_lengths(t: &GluedTriangulation, p: &ActionParams) -> Result<ActionValue, ActionError> {
    check_dim(p)?;
    let sk = t.skeleton();
    let deficit: f64 = sk.edge_degree.iter().map(|&d| 2.0 * PI - THETA3 * d as f64).sum();
    Ok(ActionValue { value: simplex_volume(1, p.ell) / (16.0 * PI) * deficit, kind: ActionKind::Raw })
}

/// Raw action divided by the total volume `N3 · V3(ℓ)`.
///
/// Computed from `μ(T)` via [`action_at_rational_mu`], which agrees with the
/// edge sum divided by the volume but keeps full relative precision near the
/// flat degree.
pub fn normalized_action(t: &GluedTriangulation, p: &ActionParams) -> Result<ActionValue, ActionError> {
    check_dim(p)?;
    Ok(ActionValue { value: action_at_rational_mu(t.mean_bone_degree(), p), kind: ActionKind::VolumeNormalized })
}

const PREFACTOR: f64 = 9.0 * SQRT_2 / 2.0;

/// `A_μ` for a real mean bone-degree.
pub fn action_at_mu(mu: f64, p: &ActionParams) -> f64 {
    assert!(mu > 0.0, "mean bone-degree must be positive");
    PREFACTOR * (1.0 / mu - 1.0 / MU_STAR3) / (p.ell * p.ell)
}

/// `A_μ` for a rational `μ` (normally `6K/N1`), accurate to a few ulps even
/// when `μ` is very close to `μ*₃`.
pub fn action_at_rational_mu(mu: RationalMu, p: &ActionParams) -> f64 {
    let (num, den) = (mu.numerator(), mu.denominator());
    let d = deficit_numerator(num, den);
    // (9√2/2) · (2π N1 − 6K θ₃) / (12π K)
    PREFACTOR * d.to_f64() / (2.0 * PI * num as f64) / (p.ell * p.ell)
}

/// Sign of `A_μ` for `μ = 6K/N1`: the sign of `2π N1 − 6K θ₃`, which is
/// never zero.
pub fn action_sign(mu: RationalMu) -> Ordering {
    let (num, den) = (mu.numerator() as f64, mu.denominator() as f64);
    // Double-precision estimate with a conservative rounding bound.
    let (a, b) = (2.0 * PI * den, num * THETA3);
    let est = a - b;
    if est.abs() > 8.0 * f64::EPSILON * (a.abs() + b.abs()) {
        return if est > 0.0 { Ordering::Greater } else { Ordering::Less };
    }
    let d = deficit_numerator(mu.numerator(), mu.denominator());
    if d.hi > 0.0 || (d.hi == 0.0 && d.lo > 0.0) {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// `μ` compared to `μ*₃`: `Less` iff the action is positive.
pub fn compare_to_flat(mu: RationalMu) -> Ordering {
    action_sign(mu).reverse()
}

/// `2π · den − num · θ₃` in double-double (`2π N1 − 6K θ₃` for `μ = 6K/N1`).
fn deficit_numerator(num: u64, den: u64) -> Dd {
    let a = Dd::mul_int(2.0 * PI, TWO_PI_LO, den);
    let b = Dd::mul_int(THETA3, THETA3_LO, num);
    a.sub(b)
}

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    /// `(hi + lo) · n` for an integer `n < 2^53`.
    fn mul_int(hi: f64, lo: f64, n: u64) -> Dd {
        debug_assert!(n < 1 << 53);
        let n = n as f64;
        let p = hi * n;
        let e = hi.mul_add(n, -p);
        let (s, t) = two_sum(p, e + lo * n);
        Dd { hi: s, lo: t }
    }

    fn sub(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, -o.hi);
        let (hi, lo) = two_sum(s, e + self.lo - o.lo);
        Dd { hi, lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
