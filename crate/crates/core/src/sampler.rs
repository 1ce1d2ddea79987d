//! Metropolis–Hastings walks over triangulations of a fixed manifold.
//!
//! A proposal picks one of the enabled moves of the current triangulation
//! uniformly. It is rejected outright if it leaves the band
//! `|N3 − K| ≤ δ`, and otherwise accepted with probability
//!
//! ```text
//! min(1, w(T′)·n(T) / (w(T)·n(T′)))
//! ```
//!
//! where `n` is the number of enabled moves and
//! `w(T) = |Aut(T)| · base(T) · exp(−λ (N3 − K)²)`. The base weight is 1 in
//! uniform mode and `exp(−A^VN(T, ℓ))` in euclidean mode. The `|Aut(T)|`
//! factor makes the chain uniform over isomorphism classes: the class
//! `[T′]` is reached from `T` by `m(T→T′)` moves, and
//! `m(T→T′)/|Aut T| = m(T′→T)/|Aut T′|`, so without it classes would be
//! visited in proportion to `1/|Aut|`.
//!
//! Moves preserve the PL type, so every visited triangulation is a
//! triangulation of the starting manifold. Whether the enabled moves connect
//! all triangulations inside the band is assumed, not checked. For S³ started
//! from the boundary of the 4-simplex, exhaustive search shows that the
//! `N3 = K` slice is fully connected only when the band reaches `K + 2`
//! (checked for `K = 5, 6`); a slice at the top of the band is not.
//!
//! # Summary format
//!
//! [`ChainStats::summary_json`] writes an object with the keys `chains`,
//! `steps`, `samples`, `proposals`, `accepted`, `acceptance` (each keyed by
//! move name), `band_rejections`, `mu_autocorr_time`, `halted` (list of
//! messages) and, when requested, `ratio` with `K`, `N1_minus`, `N1_plus`,
//! `visits_minus`, `visits_plus`, `estimate` and `std_error`. Visit counts
//! are written in the census histogram CSV with `K` standing for `N3` and
//! class `visits`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::action::{normalized_action, ActionParams};
use crate::census::{derived_seed, DegeneracyHistogram, HistogramKey, HistogramSource};
use crate::complex::GluedTriangulation;
use crate::ensemble::{almost_flat_bracket, EnsembleError, GAMMA_STAR_BOUND};
use crate::moves::{apply_move, enumerate_moves_with, MoveKind, PachnerMove};

/// Number of batches each chain's samples are split into.
pub const BATCHES_PER_CHAIN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightMode {
    Uniform,
    Euclidean(ActionParams),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Target volume `K`.
    pub target: u64,
    /// Band half-width `δ`.
    pub band: u64,
    /// Pinning strength `λ`.
    pub pin: f64,
    pub mode: WeightMode,
    pub kinds: Vec<MoveKind>,
    /// Steps per chain, burn-in included.
    pub steps: u64,
    pub burn_in: u64,
    pub thinning: u64,
    pub chains: u32,
    /// Weight states by their automorphism count (uniform over classes).
    pub class_uniform: bool,
    /// Full manifold validation every 10⁴ steps.
    pub debug_validate: bool,
}

impl SamplerConfig {
    /// Defaults: `λ = 0.5`, `δ = 3`, 10% burn-in, thinning 10, one chain,
    /// all four move kinds.
    pub fn new(target: u64, steps: u64) -> Self {
        SamplerConfig {
            seed: 0,
            target,
            band: 3,
            pin: 0.5,
            mode: WeightMode::Uniform,
            kinds: MoveKind::ALL.to_vec(),
            steps,
            burn_in: steps / 10,
            thinning: 10,
            chains: 1,
            class_uniform: true,
            debug_validate: false,
        }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        let bad = |m: &str| Err(SamplerError::Config(m.to_string()));
        if self.band < 1 {
            return bad("band half-width must be at least 1");
        }
        if self.steps <= self.burn_in {
            return bad("steps must exceed burn-in");
        }
        if !(self.pin.is_finite() && self.pin >= 0.0) {
            return bad("pinning strength must be finite and nonnegative");
        }
        if self.thinning == 0 {
            return bad("thinning must be at least 1");
        }
        if self.chains == 0 {
            return bad("at least one chain is required");
        }
        if self.kinds.is_empty() {
            return bad("no move kinds enabled");
        }
        Ok(())
    }

    fn in_band(&self, n3: u64) -> bool {
        n3.abs_diff(self.target) <= self.band
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("invalid sampler configuration: {0}")]
    Config(String),
    #[error("starting triangulation is not a valid closed 3-manifold")]
    InvalidStart,
    #[error("starting volume {n3} is outside the band {target} ± {band}")]
    OutOfBand { n3: u64, target: u64, band: u64 },
    #[error("insufficient samples at N3 = {k}: {minus} at N1 = {n1_minus}, {plus} at N1 = {n1_plus}")]
    Insufficient { k: u64, n1_minus: u64, n1_plus: u64, minus: u64, plus: u64 },
    #[error(transparent)]
    Bracket(#[from] EnsembleError),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChainStats {
    /// Samples keyed by `(N3, N1)`.
    pub visits: BTreeMap<(u64, u64), u64>,
    /// The same samples split into consecutive batches, per chain.
    pub batches: Vec<BTreeMap<(u64, u64), u64>>,
    pub proposals: [u64; 4],
    pub accepted: [u64; 4],
    pub band_rejections: u64,
    pub steps: u64,
    pub samples: u64,
    /// Integrated autocorrelation time of `μ`, in samples, averaged over
    /// chains.
    pub mu_autocorr_time: f64,
    pub chains: u32,
    /// Set when a chain stopped early.
    pub halted: Vec<String>,
}

fn kind_index(k: MoveKind) -> usize {
    MoveKind::ALL.iter().position(|&x| x == k).expect("known kind")
}

struct State {
    tri: GluedTriangulation,
    moves: Vec<PachnerMove>,
    n1: u64,
    log_w: f64,
}

impl State {
    fn new(tri: GluedTriangulation, cfg: &SamplerConfig) -> State {
        let sk = tri.skeleton();
        let moves = enumerate_moves_with(&tri, &sk, &cfg.kinds);
        let n3 = tri.tet_count() as u64;
        let d = n3 as f64 - cfg.target as f64;
        let mut log_w = -cfg.pin * d * d;
        if cfg.class_uniform {
            log_w += (tri.automorphism_count() as f64).ln();
        }
        if let WeightMode::Euclidean(p) = cfg.mode {
            log_w -= normalized_action(&tri, &p).expect("3-dimensional parameters").value;
        }
        State { n1: sk.n1() as u64, tri, moves, log_w }
    }
}

/// Runs `cfg.chains` independent chains and pools them. Chain `i` is seeded
/// with `derived_seed(cfg.seed, i)`; with one chain the seed is used as is.
pub fn run_chain(t0: &GluedTriangulation, cfg: &SamplerConfig) -> Result<ChainStats, SamplerError> {
    run_chains(t0, cfg, 1)
}

/// A single chain (`cfg.chains` is ignored) that also hands every recorded
/// sample to `observe`.
pub fn run_chain_observed(
    t0: &GluedTriangulation,
    cfg: &SamplerConfig,
    mut observe: impl FnMut(&GluedTriangulation),
) -> Result<ChainStats, SamplerError> {
    check_start(t0, cfg)?;
    Ok(single_chain(t0, cfg, cfg.seed, &mut observe))
}

fn check_start(t0: &GluedTriangulation, cfg: &SamplerConfig) -> Result<(), SamplerError> {
    cfg.validate()?;
    if !t0.validate_manifold().is_valid() {
        return Err(SamplerError::InvalidStart);
    }
    let n3 = t0.tet_count() as u64;
    if !cfg.in_band(n3) {
        return Err(SamplerError::OutOfBand { n3, target: cfg.target, band: cfg.band });
    }
    Ok(())
}

/// As [`run_chain`] with up to `threads` chains in flight. The result does
/// not depend on `threads`.
pub fn run_chains(t0: &GluedTriangulation, cfg: &SamplerConfig, threads: usize) -> Result<ChainStats, SamplerError> {
    check_start(t0, cfg)?;
    let seeds: Vec<u64> =
        if cfg.chains == 1 { vec![cfg.seed] } else { (0..cfg.chains as u64).map(|i| derived_seed(cfg.seed, i)).collect() };
    let threads = threads.clamp(1, seeds.len());
    let mut results: Vec<Option<ChainStats>> = vec![None; seeds.len()];
    std::thread::scope(|s| {
        for (w, slots) in results.chunks_mut(seeds.len().div_ceil(threads)).enumerate() {
            let base = w * seeds.len().div_ceil(threads);
            let seeds = &seeds;
            s.spawn(move || {
                for (j, slot) in slots.iter_mut().enumerate() {
                    *slot = Some(single_chain(t0, cfg, seeds[base + j], &mut |_| {}));
                }
            });
        }
    });
    let mut pooled = ChainStats::default();
    for r in results {
        pooled.merge(r.expect("chain ran"));
    }
    Ok(pooled)
}

fn single_chain(
    t0: &GluedTriangulation,
    cfg: &SamplerConfig,
    seed: u64,
    observe: &mut dyn FnMut(&GluedTriangulation),
) -> ChainStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = ChainStats { chains: 1, steps: cfg.steps, ..Default::default() };
    let mut state = State::new(t0.clone(), cfg);
    let samples_expected = (cfg.steps - cfg.burn_in).div_ceil(cfg.thinning);
    let batch_len = samples_expected.div_ceil(BATCHES_PER_CHAIN as u64).max(1);
    let mut batches = vec![BTreeMap::new(); BATCHES_PER_CHAIN];
    let mut mu_series = Vec::with_capacity(samples_expected as usize);

    for step in 0..cfg.steps {
        if state.moves.is_empty() {
            stats.halted.push(format!("no valid moves at step {step} (seed {seed})"));
            stats.steps = step;
            break;
        }
        let m = state.moves[rng.gen_range(0..state.moves.len())];
        let ki = kind_index(m.kind);
        stats.proposals[ki] += 1;
        let n3_new = (state.tri.tet_count() as i64 + m.kind.tet_delta()) as u64;
        if !cfg.in_band(n3_new) {
            stats.band_rejections += 1;
        } else {
            let next = apply_move(&state.tri, &m).expect("enumerated move applies");
            let cand = State::new(next, cfg);
            let log_a = cand.log_w - state.log_w + (state.moves.len() as f64).ln() - (cand.moves.len() as f64).ln();
            if log_a >= 0.0 || rng.gen::<f64>().ln() < log_a {
                stats.accepted[ki] += 1;
                state = cand;
            }
        }
        if cfg.debug_validate && step % 10_000 == 0 {
            assert!(state.tri.validate_manifold().is_valid(), "chain left the manifold at step {step}");
        }
        if step >= cfg.burn_in && (step - cfg.burn_in) % cfg.thinning == 0 {
            let key = (state.tri.tet_count() as u64, state.n1);
            *stats.visits.entry(key).or_default() += 1;
            *batches[(stats.samples / batch_len) as usize].entry(key).or_default() += 1;
            mu_series.push(6.0 * key.0 as f64 / key.1 as f64);
            stats.samples += 1;
            observe(&state.tri);
        }
    }
    stats.batches = batches;
    stats.mu_autocorr_time = integrated_autocorr(&mu_series);
    stats
}

/// Integrated autocorrelation time with Sokal's automatic window (`c = 5`).
pub fn integrated_autocorr(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 1.0;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return 1.0;
    }
    let mut tau = 1.0;
    for lag in 1..n {
        let c: f64 = (0..n - lag).map(|i| (xs[i] - mean) * (xs[i + lag] - mean)).sum::<f64>() / (n as f64 * var);
        tau += 2.0 * c;
        if lag as f64 >= 5.0 * tau {
            break;
        }
    }
    tau.max(1.0)
}

impl ChainStats {
    /// Pools another chain's statistics. Order does not matter except for
    /// the order of `batches` and `halted`.
    pub fn merge(&mut self, other: ChainStats) {
        for (k, v) in other.visits {
            *self.visits.entry(k).or_default() += v;
        }
        let (a, b) = (self.chains as f64, other.chains as f64);
        self.mu_autocorr_time = if a + b > 0.0 { (self.mu_autocorr_time * a + other.mu_autocorr_time * b) / (a + b) } else { 0.0 };
        self.batches.extend(other.batches);
        for i in 0..4 {
            self.proposals[i] += other.proposals[i];
            self.accepted[i] += other.accepted[i];
        }
        self.band_rejections += other.band_rejections;
        self.steps += other.steps;
        self.samples += other.samples;
        self.chains += other.chains;
        self.halted.extend(other.halted);
    }

    pub fn acceptance_rate(&self, kind: MoveKind) -> f64 {
        let i = kind_index(kind);
        if self.proposals[i] == 0 {
            0.0
        } else {
            self.accepted[i] as f64 / self.proposals[i] as f64
        }
    }

    pub fn visits_at(&self, n3: u64, n1: u64) -> u64 {
        self.visits.get(&(n3, n1)).copied().unwrap_or(0)
    }

    /// Mean `|N3 − K|` over the samples.
    pub fn mean_volume_offset(&self, target: u64) -> f64 {
        let total: u64 = self.visits.values().sum();
        if total == 0 {
            return 0.0;
        }
        self.visits.iter().map(|(&(n3, _), &c)| n3.abs_diff(target) as f64 * c as f64).sum::<f64>() / total as f64
    }

    /// Visit counts as a census histogram with `K = N3`.
    pub fn to_histogram(&self) -> DegeneracyHistogram {
        let mut h = DegeneracyHistogram::new(HistogramSource::Enumerated);
        for (&(n3, n1), &c) in &self.visits {
            let key = HistogramKey { k: n3 as u32, n1: n1 as u32, class: "visits".into(), orientable: None, simplicial: None };
            h.add(key, c);
        }
        h.filters.push("sampler visits".into());
        h
    }

    pub fn summary_json(&self, ratio: Option<&RatioEstimate>) -> String {
        let per_kind = |f: &dyn Fn(usize) -> Value| {
            Value::Object(MoveKind::ALL.iter().enumerate().map(|(i, k)| (k.as_str().to_string(), f(i))).collect::<Map<_, _>>())
        };
        let mut v = json!({
            "chains": self.chains,
            "steps": self.steps,
            "samples": self.samples,
            "proposals": per_kind(&|i| json!(self.proposals[i])),
            "accepted": per_kind(&|i| json!(self.accepted[i])),
            "acceptance": per_kind(&|i| json!(self.acceptance_rate(MoveKind::ALL[i]))),
            "band_rejections": self.band_rejections,
            "mu_autocorr_time": self.mu_autocorr_time,
            "halted": self.halted,
        });
        if let Some(r) = ratio {
            v["ratio"] = json!({
                "K": r.k,
                "N1_minus": r.n1_minus,
                "N1_plus": r.n1_plus,
                "visits_minus": r.visits_minus,
                "visits_plus": r.visits_plus,
                "estimate": r.estimate,
                "std_error": r.std_error,
            });
        }
        serde_json::to_string_pretty(&v).expect("summary serializes")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioEstimate {
    pub k: u64,
    pub n1_minus: u64,
    pub n1_plus: u64,
    pub visits_minus: u64,
    pub visits_plus: u64,
    pub estimate: f64,
    /// Batch-means standard error.
    pub std_error: f64,
    pub batches: usize,
}

/// `N∓` at volume `K` from the almost-flat levels of the bracket.
pub fn estimate_ratio(stats: &ChainStats, k: u64) -> Result<RatioEstimate, SamplerError> {
    let b = almost_flat_bracket(k, &ActionParams::default(), GAMMA_STAR_BOUND)?;
    estimate_level_ratio(stats, k, b.n1_minus, b.n1_plus)
}

/// `visits(K, n1_minus) / visits(K, n1_plus)` with a batch-means standard
/// error for the ratio estimator.
pub fn estimate_level_ratio(
    stats: &ChainStats,
    k: u64,
    n1_minus: u64,
    n1_plus: u64,
) -> Result<RatioEstimate, SamplerError> {
    let (minus, plus) = (stats.visits_at(k, n1_minus), stats.visits_at(k, n1_plus));
    let nb = stats.batches.len();
    if minus == 0 || plus == 0 || nb < 16 {
        return Err(SamplerError::Insufficient { k, n1_minus, n1_plus, minus, plus });
    }
    let r = minus as f64 / plus as f64;
    let mean_plus = plus as f64 / nb as f64;
    let ss: f64 = stats
        .batches
        .iter()
        .map(|b| {
            let m = b.get(&(k, n1_minus)).copied().unwrap_or(0) as f64;
            let p = b.get(&(k, n1_plus)).copied().unwrap_or(0) as f64;
            ((m - r * p) / mean_plus).powi(2)
        })
        .sum();
    let std_error = (ss / (nb as f64 * (nb as f64 - 1.0))).sqrt();
    Ok(RatioEstimate { k, n1_minus, n1_plus, visits_minus: minus, visits_plus: plus, estimate: r, std_error, batches: nb })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_checks() {
        let mut c = SamplerConfig::new(5, 100);
        assert!(c.validate().is_ok());
        c.band = 0;
        assert!(c.validate().is_err());
        let c = SamplerConfig { burn_in: 100, ..SamplerConfig::new(5, 100) };
        assert!(c.validate().is_err());
    }

    #[test]
    fn equal_visits_give_unit_ratio() {
        let mut s = ChainStats::default();
        for _ in 0..16 {
            let mut b = BTreeMap::new();
            b.insert((6, 7), 3);
            b.insert((6, 8), 3);
            s.batches.push(b);
        }
        s.visits.insert((6, 7), 48);
        s.visits.insert((6, 8), 48);
        let r = estimate_ratio(&s, 6).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.std_error, 0.0);
    }

    #[test]
    fn out_of_band_start() {
        let t = GluedTriangulation::boundary_4_simplex();
        let cfg = SamplerConfig::new(20, 100);
        assert!(matches!(run_chain(&t, &cfg), Err(SamplerError::OutOfBand { .. })));
    }
}
