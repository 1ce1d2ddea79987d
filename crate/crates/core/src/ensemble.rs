//! Partition functions, the two-level model and the cosmological-constant
//! estimate.
//!
//! Near the flat degree the two almost-flat levels at volume `K` are
//! `N1⁻ = ⌊6K/μ*₃⌋` (negative action) and `N1⁺ = N1⁻ + 1` (positive action).
//! Their action gap is
//!
//! ```text
//! ΔA = A⁺ − A⁻ = (3√2/4) / (ℓ² K) = ℓ / (8 · Vol)
//! ```
//!
//! and the expected action of the two-level model is
//!
//! ```text
//! ⟨A⟩ = (A⁺ + A⁻ · N∓ · w) / (1 + N∓ · w)
//! ```
//!
//! with `w = e^{−iΔA}` for quantum weights `e^{iA}` and `w = e^{ΔA}` for
//! euclidean weights `e^{−A}`. The emergent cosmological constant is
//! `Λ = −Re⟨A⟩ / 2`.

use std::cmp::Ordering;
use std::f64::consts::SQRT_2;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::action::{action_at_rational_mu, action_sign, simplex_volume, ActionParams, MU_STAR3};
use crate::census::DegeneracyHistogram;
use crate::complex::RationalMu;
use crate::report::{fmt_num, KeyValueReport};

/// Lower bound on `γ*(M)` valid for every closed 3-manifold.
pub const GAMMA_STAR_BOUND: i64 = -10;
/// Degeneracy ratio assumed when none is supplied.
pub const DEFAULT_RATIO: f64 = 2.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnsembleError {
    #[error("no negative-action level at this volume (K = {k})")]
    SmallVolume { k: u64 },
    #[error("tetrahedron count must be at least 1")]
    NoTets,
    #[error("histogram has no entries at K = {k}")]
    EmptySlice { k: u32 },
    #[error("both level counts are zero")]
    ZeroCounts,
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnsembleMode {
    /// Weights `e^{−A}`.
    Euclidean,
    /// Weights `e^{iA}`.
    Quantum,
}

impl EnsembleMode {
    pub fn weight(self, a: f64) -> Complex64 {
        match self {
            EnsembleMode::Euclidean => Complex64::new((-a).exp(), 0.0),
            EnsembleMode::Quantum => Complex64::from_polar(1.0, a),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleMode::Euclidean => "euclidean",
            EnsembleMode::Quantum => "quantum",
        }
    }
}

impl fmt::Display for EnsembleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EnsembleMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euclidean" => Ok(EnsembleMode::Euclidean),
            "quantum" => Ok(EnsembleMode::Quantum),
            _ => Err(format!("unknown mode {s:?} (expected euclidean or quantum)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionValue {
    pub value: Complex64,
    pub mode: EnsembleMode,
    /// The `(K, N1, count)` levels summed.
    pub levels: Vec<(u64, u64, u64)>,
}

/// The two levels adjacent to the flat degree at volume `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostFlatBracket {
    pub k: u64,
    pub n1_minus: u64,
    pub n1_plus: u64,
    pub mu_minus: RationalMu,
    pub mu_plus: RationalMu,
    pub a_minus: f64,
    pub a_plus: f64,
    pub delta_a: f64,
    pub guaranteed: bool,
    pub params: ActionParams,
}

pub fn almost_flat_bracket(k: u64, p: &ActionParams, gamma_star: i64) -> Result<AlmostFlatBracket, EnsembleError> {
    if k == 0 {
        return Err(EnsembleError::NoTets);
    }
    // Estimate, then correct with the exact sign test.
    let mut n1 = (6.0 * k as f64 / MU_STAR3).floor() as u64;
    while n1 > 0 && action_sign(RationalMu::from_counts(k, n1)) == Ordering::Greater {
        n1 -= 1;
    }
    while action_sign(RationalMu::from_counts(k, n1 + 1)) == Ordering::Less {
        n1 += 1;
    }
    if n1 <= k {
        return Err(EnsembleError::SmallVolume { k });
    }
    let (mu_minus, mu_plus) = (RationalMu::from_counts(k, n1), RationalMu::from_counts(k, n1 + 1));
    let (a_minus, a_plus) = (action_at_rational_mu(mu_minus, p), action_at_rational_mu(mu_plus, p));
    let lo = k as f64 + (3.0 + (9.0 + 8.0 * k as f64).sqrt()) / 2.0;
    let hi = (4 * k as i64 - gamma_star) as f64 / 3.0;
    let inside = |n: u64| (lo..=hi).contains(&(n as f64));
    Ok(AlmostFlatBracket {
        k,
        n1_minus: n1,
        n1_plus: n1 + 1,
        mu_minus,
        mu_plus,
        a_minus,
        a_plus,
        delta_a: a_plus - a_minus,
        guaranteed: inside(n1) && inside(n1 + 1),
        params: *p,
    })
}

impl AlmostFlatBracket {
    pub fn report(&self) -> KeyValueReport {
        let mut r = KeyValueReport::new();
        r.num("K", self.k as f64)
            .num("ell", self.params.ell())
            .num("N1_minus", self.n1_minus as f64)
            .num("N1_plus", self.n1_plus as f64)
            .text("mu_minus", mu_text(self.mu_minus))
            .text("mu_plus", mu_text(self.mu_plus))
            .num("A_minus", self.a_minus)
            .num("A_plus", self.a_plus)
            .num("delta_A", self.delta_a)
            .text("guaranteed", self.guaranteed.to_string());
        r
    }
}

fn mu_text(mu: RationalMu) -> String {
    let (n, d) = mu.reduced();
    format!("{n}/{d} ({})", mu.display3())
}

/// `(3√2/4) / (ℓ² K)`.
pub fn delta_action(k: u64, p: &ActionParams) -> f64 {
    3.0 * SQRT_2 / 4.0 / (p.ell() * p.ell() * k as f64)
}

/// `ℓ / (8 · Vol)`.
pub fn delta_action_from_volume(ell: f64, vol: f64) -> f64 {
    ell / (8.0 * vol)
}

pub fn partition_fixed_volume(
    hist: &DegeneracyHistogram,
    k: u32,
    p: &ActionParams,
    mode: EnsembleMode,
) -> Result<PartitionValue, EnsembleError> {
    let levels = hist.levels(k);
    if levels.is_empty() {
        return Err(EnsembleError::EmptySlice { k });
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut used = Vec::new();
    for (&n1, &count) in &levels {
        let a = action_at_rational_mu(RationalMu::from_counts(k as u64, n1 as u64), p);
        value += mode.weight(a) * count as f64;
        used.push((k as u64, n1 as u64, count));
    }
    Ok(PartitionValue { value, mode, levels: used })
}

pub fn two_level_partition(
    b: &AlmostFlatBracket,
    n_plus: u64,
    n_minus: u64,
    mode: EnsembleMode,
) -> Result<PartitionValue, EnsembleError> {
    if n_plus == 0 && n_minus == 0 {
        return Err(EnsembleError::ZeroCounts);
    }
    let value = mode.weight(b.a_plus) * n_plus as f64 + mode.weight(b.a_minus) * n_minus as f64;
    let levels = vec![(b.k, b.n1_plus, n_plus), (b.k, b.n1_minus, n_minus)];
    Ok(PartitionValue { value, mode, levels })
}

/// `⟨A⟩` of the two-level model from `A⁺`, `A⁻` and `N∓ = N⁻/N⁺`.
pub fn expected_action_from(a_plus: f64, a_minus: f64, ratio: f64, mode: EnsembleMode) -> Complex64 {
    let gap = a_plus - a_minus;
    let w = match mode {
        EnsembleMode::Quantum => Complex64::from_polar(1.0, -gap),
        EnsembleMode::Euclidean => Complex64::new(gap.exp(), 0.0),
    };
    let nw = w * ratio;
    (nw * a_minus + a_plus) / (nw + 1.0)
}

pub fn expected_action(b: &AlmostFlatBracket, ratio: f64, mode: EnsembleMode) -> Complex64 {
    expected_action_from(b.a_plus, b.a_minus, ratio, mode)
}

/// `⟨A⟩` with `A⁺ = ΔA/2` and `A⁻ = −ΔA/2`.
pub fn expected_action_symmetric(delta_a: f64, ratio: f64, mode: EnsembleMode) -> Complex64 {
    expected_action_from(delta_a / 2.0, -delta_a / 2.0, ratio, mode)
}

/// Physical inputs of the cosmological-constant estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosmologyInputs {
    /// Planck length in metres.
    pub ell_m: f64,
    /// Volume in cubic metres.
    pub vol_m3: f64,
    /// `N∓`; `None` uses [`DEFAULT_RATIO`].
    pub ratio: Option<f64>,
    pub mode: EnsembleMode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaReport {
    pub planck_volume: f64,
    pub k_equiv: f64,
    pub delta_a: f64,
    pub expected_action: Complex64,
    pub lambda: f64,
    pub beta_g: f64,
    pub assumptions: Vec<String>,
}

impl LambdaReport {
    pub fn report(&self) -> KeyValueReport {
        let mut r = KeyValueReport::new();
        r.num("planck_volume", self.planck_volume)
            .num("K_equiv", self.k_equiv)
            .num("delta_A", self.delta_a)
            .num("expected_action_re", self.expected_action.re)
            .num("expected_action_im", self.expected_action.im)
            .num("expected_action_abs", self.expected_action.norm())
            .num("expected_action_arg", self.expected_action.arg())
            .num("lambda", self.lambda)
            .num("beta_g", self.beta_g);
        if self.assumptions.is_empty() {
            r.text("assumptions", "none");
        }
        for a in &self.assumptions {
            r.text("assumption", a.clone());
        }
        r
    }
}

/// `Λ` and `β_G = ℓ / (Vol · Λ)` in Planck units.
pub fn lambda_estimate(inputs: &CosmologyInputs) -> Result<LambdaReport, EnsembleError> {
    let positive = |name, value: f64| {
        if value.is_finite() && value > 0.0 {
            Ok(value)
        } else {
            Err(EnsembleError::NonPositive { name, value })
        }
    };
    let ell_m = positive("ell_m", inputs.ell_m)?;
    let vol_m3 = positive("vol_m3", inputs.vol_m3)?;
    let mut assumptions = vec![format!("symmetric levels A+ = -A- = delta_A/2; {} weights", inputs.mode)];
    let ratio = match inputs.ratio {
        Some(r) => positive("ratio", r)?,
        None => {
            assumptions.push(format!("N-/N+ = {} (default, not measured)", fmt_num(DEFAULT_RATIO)));
            DEFAULT_RATIO
        }
    };
    if ratio < 1.0 {
        assumptions.push("N-/N+ < 1: negative-action level is the less degenerate one".into());
    }
    let planck_volume = vol_m3 / ell_m.powi(3);
    let k_equiv = planck_volume / simplex_volume(3, 1.0);
    let delta_a = delta_action_from_volume(1.0, planck_volume);
    let expected = expected_action_symmetric(delta_a, ratio, inputs.mode);
    let lambda = -expected.re / 2.0;
    Ok(LambdaReport {
        planck_volume,
        k_equiv,
        delta_a,
        expected_action: expected,
        lambda,
        beta_g: 1.0 / (planck_volume * lambda),
        assumptions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// `|Z|` strictly increases and a negative-action level is present.
    StrictlyIncreasing,
    /// Only positive-action levels: `Z` stays below the total count.
    Bounded,
    NotMonotone,
    Empty,
}

impl fmt::Display for ProbeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeVerdict::StrictlyIncreasing => "strictly-increasing",
            ProbeVerdict::Bounded => "bounded",
            ProbeVerdict::NotMonotone => "not-monotone",
            ProbeVerdict::Empty => "empty",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeTable {
    pub rows: Vec<(f64, Complex64)>,
    pub has_negative_level: bool,
    pub verdict: ProbeVerdict,
}

impl ProbeTable {
    pub fn render(&self) -> String {
        let mut s = String::from("ell,Z_re,Z_im\n");
        for (ell, z) in &self.rows {
            s += &format!("{},{},{}\n", fmt_num(*ell), fmt_num(z.re), fmt_num(z.im));
        }
        s += &format!("# verdict: {}\n", self.verdict);
        s
    }
}

/// `Z_K` along a decreasing sequence of edge lengths.
pub fn divergence_probe(
    hist: &DegeneracyHistogram,
    k: u32,
    mode: EnsembleMode,
    ells: &[f64],
) -> Result<ProbeTable, EnsembleError> {
    for &ell in ells {
        if !(ell.is_finite() && ell > 0.0) {
            return Err(EnsembleError::NonPositive { name: "ell", value: ell });
        }
    }
    let has_negative_level =
        hist.levels(k).keys().any(|&n1| action_sign(RationalMu::from_counts(k as u64, n1 as u64)) == Ordering::Less);
    if ells.is_empty() || hist.levels(k).is_empty() {
        return Ok(ProbeTable { rows: Vec::new(), has_negative_level, verdict: ProbeVerdict::Empty });
    }
    let mut rows = Vec::with_capacity(ells.len());
    for &ell in ells {
        let p = ActionParams::new(ell).expect("checked above");
        rows.push((ell, partition_fixed_volume(hist, k, &p, mode)?.value));
    }
    let increasing = rows.windows(2).all(|w| w[1].1.norm() > w[0].1.norm());
    let verdict = match (increasing, has_negative_level) {
        (true, true) => ProbeVerdict::StrictlyIncreasing,
        (_, false) => ProbeVerdict::Bounded,
        (false, true) => ProbeVerdict::NotMonotone,
    };
    Ok(ProbeTable { rows, has_negative_level, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_k6_and_small_volume() {
        let p = ActionParams::default();
        let b = almost_flat_bracket(6, &p, GAMMA_STAR_BOUND).unwrap();
        assert_eq!((b.n1_minus, b.n1_plus), (7, 8));
        assert!(b.a_plus > 0.0 && b.a_minus < 0.0);
        assert_eq!(almost_flat_bracket(5, &p, GAMMA_STAR_BOUND), Err(EnsembleError::SmallVolume { k: 5 }));
        assert_eq!(almost_flat_bracket(0, &p, GAMMA_STAR_BOUND), Err(EnsembleError::NoTets));
    }

    #[test]
    fn quantum_weight_unit() {
        for a in [-3.0, 0.1, 7.5] {
            assert!((EnsembleMode::Quantum.weight(a).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_ratio_gives_zero_lambda() {
        let r = lambda_estimate(&CosmologyInputs {
            ell_m: 1.6e-35,
            vol_m3: 3.5e80,
            ratio: Some(1.0),
            mode: EnsembleMode::Quantum,
        })
        .unwrap();
        assert!(r.lambda.abs() < 1e-200);
    }
}
