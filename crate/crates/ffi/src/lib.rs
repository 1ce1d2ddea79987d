//! C interface to `regge-core`.
//!
//! Every function returns a [`RgStatus`]. Objects are opaque handles created
//! by `*_new`/`*_parse` functions and released with the matching `*_free`.
//! After a failure, [`rg_last_error`] copies a message describing it; the
//! message is per thread.
//!
//! Strings passed in must be NUL-terminated UTF-8. String outputs use
//! caller buffers: the required size (including the NUL) is stored in
//! `*needed`, and `RG_STATUS_BUFFER_TOO_SMALL` is returned if `len` is less.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use regge_core::action::{action_at_rational_mu, normalized_action, ActionParams};
use regge_core::census::DegeneracyHistogram;
use regge_core::complex::{parse_gluing_text, GluedTriangulation};
use regge_core::ensemble::{
    almost_flat_bracket, delta_action, lambda_estimate, partition_fixed_volume, CosmologyInputs, EnsembleError,
    EnsembleMode,
};
use regge_core::moves::{apply_move, enumerate_moves, MoveKind};
use regge_core::sampler::{estimate_level_ratio, run_chain, SamplerConfig};
use regge_core::RationalMu;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgStatus {
    Ok = 0,
    NullArgument = 1,
    Parse = 2,
    InvalidArgument = 3,
    Domain = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgMode {
    Euclidean = 0,
    Quantum = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgMove {
    OneFour = 0,
    FourOne = 1,
    TwoThree = 2,
    ThreeTwo = 3,
}

/// Opaque triangulation handle.
pub struct RgTriangulation(GluedTriangulation);

/// Opaque degeneracy histogram handle.
pub struct RgHistogram(DegeneracyHistogram);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RgBracket {
    pub k: u64,
    pub n1_minus: u64,
    pub n1_plus: u64,
    pub a_minus: f64,
    pub a_plus: f64,
    pub delta_a: f64,
    pub guaranteed: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RgLambda {
    pub planck_volume: f64,
    pub k_equiv: f64,
    pub delta_a: f64,
    pub expected_action_re: f64,
    pub expected_action_im: f64,
    pub lambda: f64,
    pub beta_g: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RgSamplerOptions {
    pub seed: u64,
    pub target: u64,
    pub band: u64,
    pub pin: f64,
    pub steps: u64,
    pub burn_in: u64,
    pub thinning: u64,
    pub chains: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RgRatio {
    pub visits_minus: u64,
    pub visits_plus: u64,
    pub estimate: f64,
    pub std_error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: RgStatus, message: impl Into<String>) -> RgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn guard(f: impl FnOnce() -> RgStatus) -> RgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(RgStatus::Internal, "internal error (panic)"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, RgStatus> {
    if s.is_null() {
        return Err(fail(RgStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(RgStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn write_str(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> RgStatus {
    let need = text.len() + 1;
    if !needed.is_null() {
        *needed = need;
    }
    if len < need || buf.is_null() {
        return fail(RgStatus::BufferTooSmall, format!("buffer of {len} bytes, {need} needed"));
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    RgStatus::Ok
}

fn params(ell: f64) -> Result<ActionParams, RgStatus> {
    ActionParams::new(ell).map_err(|e| fail(RgStatus::InvalidArgument, e.to_string()))
}

fn ensemble_status(e: EnsembleError) -> RgStatus {
    let status = match e {
        EnsembleError::SmallVolume { .. } | EnsembleError::EmptySlice { .. } => RgStatus::Domain,
        _ => RgStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(RgStatus::NullArgument, concat!("null argument `", stringify!($p), "`"));
        })+
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the calling thread's last error message.
///
/// # Safety
/// `buf` must point to `len` writable bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn rg_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> RgStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    write_str(&msg, buf, len, needed)
}

/// Parses a gluing file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_parse(text: *const c_char, out: *mut *mut RgTriangulation) -> RgStatus {
    guard(|| {
        non_null!(out);
        let s = try_status!(read_str(text));
        match parse_gluing_text(s) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(RgTriangulation(t)));
                RgStatus::Ok
            }
            Err(e) => fail(RgStatus::Parse, e.to_string()),
        }
    })
}

/// The boundary of the 4-simplex (5 tetrahedra).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_boundary_4_simplex(out: *mut *mut RgTriangulation) -> RgStatus {
    non_null!(out);
    *out = Box::into_raw(Box::new(RgTriangulation(GluedTriangulation::boundary_4_simplex())));
    RgStatus::Ok
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_free(t: *mut RgTriangulation) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// `(N0, N1, N2, N3)`.
///
/// # Safety
/// `t` must be a live handle and `out` point to 4 writable `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_f_vector(t: *const RgTriangulation, out: *mut u64) -> RgStatus {
    guard(|| {
        non_null!(t, out);
        let f = (*t).0.skeleton().f_vector();
        for (i, v) in f.iter().enumerate() {
            *out.add(i) = *v as u64;
        }
        RgStatus::Ok
    })
}

/// Mean bone-degree `6·N3 / N1`, unreduced.
///
/// # Safety
/// `t` must be a live handle; `num` and `den` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_mean_bone_degree(
    t: *const RgTriangulation,
    num: *mut u64,
    den: *mut u64,
) -> RgStatus {
    guard(|| {
        non_null!(t, num, den);
        let mu = (*t).0.mean_bone_degree();
        *num = mu.numerator();
        *den = mu.denominator();
        RgStatus::Ok
    })
}

/// Volume-normalized action at edge length `ell`.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_normalized_action(
    t: *const RgTriangulation,
    ell: f64,
    out: *mut f64,
) -> RgStatus {
    guard(|| {
        non_null!(t, out);
        let p = try_status!(params(ell));
        match normalized_action(&(*t).0, &p) {
            Ok(v) => {
                *out = v.value;
                RgStatus::Ok
            }
            Err(e) => fail(RgStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Writes `valid`, `orientable` and `simplicial` flags.
///
/// # Safety
/// `t` must be a live handle; each output pointer must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_flags(
    t: *const RgTriangulation,
    valid: *mut bool,
    orientable: *mut bool,
    simplicial: *mut bool,
) -> RgStatus {
    guard(|| {
        non_null!(t, valid, orientable, simplicial);
        let r = (*t).0.validate_manifold();
        *valid = r.is_valid();
        *orientable = r.orientable;
        *simplicial = (*t).0.is_simplicial();
        RgStatus::Ok
    })
}

/// Isomorphism signature.
///
/// # Safety
/// `t` must be a live handle, `buf` point to `len` writable bytes; `needed`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_signature(
    t: *const RgTriangulation,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> RgStatus {
    guard(|| {
        non_null!(t);
        write_str((*t).0.iso_signature().as_str(), buf, len, needed)
    })
}

fn move_kind(m: RgMove) -> MoveKind {
    match m {
        RgMove::OneFour => MoveKind::OneFour,
        RgMove::FourOne => MoveKind::FourOne,
        RgMove::TwoThree => MoveKind::TwoThree,
        RgMove::ThreeTwo => MoveKind::ThreeTwo,
    }
}

/// Number of valid moves of kind `kind`.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_move_count(
    t: *const RgTriangulation,
    kind: RgMove,
    out: *mut usize,
) -> RgStatus {
    guard(|| {
        non_null!(t, out);
        *out = enumerate_moves(&(*t).0, &[move_kind(kind)]).len();
        RgStatus::Ok
    })
}

/// Applies move `index` (in enumeration order) of kind `kind` and returns a
/// new handle; `t` is unchanged.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_triangulation_apply_move(
    t: *const RgTriangulation,
    kind: RgMove,
    index: usize,
    out: *mut *mut RgTriangulation,
) -> RgStatus {
    guard(|| {
        non_null!(t, out);
        let moves = enumerate_moves(&(*t).0, &[move_kind(kind)]);
        let Some(m) = moves.get(index) else {
            return fail(RgStatus::InvalidArgument, format!("move index {index} out of range ({} moves)", moves.len()));
        };
        match apply_move(&(*t).0, m) {
            Ok(next) => {
                *out = Box::into_raw(Box::new(RgTriangulation(next)));
                RgStatus::Ok
            }
            Err(e) => fail(RgStatus::Internal, e.to_string()),
        }
    })
}

/// Volume-normalized action at `μ = num/den`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_action_at_mu(num: u64, den: u64, ell: f64, out: *mut f64) -> RgStatus {
    non_null!(out);
    if num == 0 || den == 0 {
        return fail(RgStatus::InvalidArgument, "mean bone-degree must be positive");
    }
    let p = try_status!(params(ell));
    *out = action_at_rational_mu(RationalMu::new(num, den), &p);
    RgStatus::Ok
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_delta_action(k: u64, ell: f64, out: *mut f64) -> RgStatus {
    non_null!(out);
    if k == 0 {
        return fail(RgStatus::InvalidArgument, "tetrahedron count must be at least 1");
    }
    let p = try_status!(params(ell));
    *out = delta_action(k, &p);
    RgStatus::Ok
}

/// Almost-flat bracket at volume `k`. Returns `RG_STATUS_DOMAIN` when no
/// negative-action level exists.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_bracket(k: u64, ell: f64, gamma_star: i64, out: *mut RgBracket) -> RgStatus {
    non_null!(out);
    let p = try_status!(params(ell));
    match almost_flat_bracket(k, &p, gamma_star) {
        Ok(b) => {
            *out = RgBracket {
                k: b.k,
                n1_minus: b.n1_minus,
                n1_plus: b.n1_plus,
                a_minus: b.a_minus,
                a_plus: b.a_plus,
                delta_a: b.delta_a,
                guaranteed: b.guaranteed,
            };
            RgStatus::Ok
        }
        Err(e) => ensemble_status(e),
    }
}

fn mode(m: RgMode) -> EnsembleMode {
    match m {
        RgMode::Euclidean => EnsembleMode::Euclidean,
        RgMode::Quantum => EnsembleMode::Quantum,
    }
}

/// Cosmological-constant estimate. A `ratio` of zero or less selects the
/// default `N∓ = 2.5`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_lambda_estimate(
    ell_m: f64,
    vol_m3: f64,
    ratio: f64,
    ensemble: RgMode,
    out: *mut RgLambda,
) -> RgStatus {
    non_null!(out);
    let inputs = CosmologyInputs { ell_m, vol_m3, ratio: (ratio > 0.0).then_some(ratio), mode: mode(ensemble) };
    match lambda_estimate(&inputs) {
        Ok(r) => {
            *out = RgLambda {
                planck_volume: r.planck_volume,
                k_equiv: r.k_equiv,
                delta_a: r.delta_a,
                expected_action_re: r.expected_action.re,
                expected_action_im: r.expected_action.im,
                lambda: r.lambda,
                beta_g: r.beta_g,
            };
            RgStatus::Ok
        }
        Err(e) => ensemble_status(e),
    }
}

/// Parses a histogram CSV.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_histogram_parse(text: *const c_char, out: *mut *mut RgHistogram) -> RgStatus {
    guard(|| {
        non_null!(out);
        let s = try_status!(read_str(text));
        match DegeneracyHistogram::parse_csv(s) {
            Ok(h) => {
                *out = Box::into_raw(Box::new(RgHistogram(h)));
                RgStatus::Ok
            }
            Err(e) => fail(RgStatus::Parse, e.to_string()),
        }
    })
}

/// The shipped table of 3-sphere degeneracies for `5 ≤ K ≤ 9`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_histogram_table1(out: *mut *mut RgHistogram) -> RgStatus {
    non_null!(out);
    *out = Box::into_raw(Box::new(RgHistogram(DegeneracyHistogram::table1_fixture())));
    RgStatus::Ok
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rg_histogram_free(h: *mut RgHistogram) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `count(k, n1_minus) / count(k, n1_plus)`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rg_histogram_ratio(
    h: *const RgHistogram,
    k: u32,
    n1_minus: u32,
    n1_plus: u32,
    out: *mut f64,
) -> RgStatus {
    non_null!(h, out);
    match (*h).0.ratio(k, n1_minus, n1_plus) {
        Some(r) => {
            *out = r;
            RgStatus::Ok
        }
        None => fail(RgStatus::Domain, format!("no nonzero counts at K = {k}, N1 = {n1_minus}/{n1_plus}")),
    }
}

/// Fixed-volume partition function `Z_K` as a complex number.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rg_partition_fixed_volume(
    h: *const RgHistogram,
    k: u32,
    ell: f64,
    ensemble: RgMode,
    re: *mut f64,
    im: *mut f64,
) -> RgStatus {
    guard(|| {
        non_null!(h, re, im);
        let p = try_status!(params(ell));
        match partition_fixed_volume(&(*h).0, k, &p, mode(ensemble)) {
            Ok(z) => {
                *re = z.value.re;
                *im = z.value.im;
                RgStatus::Ok
            }
            Err(e) => ensemble_status(e),
        }
    })
}

/// Default sampler options for target volume `target` and `steps` steps.
#[no_mangle]
pub extern "C" fn rg_sampler_defaults(target: u64, steps: u64) -> RgSamplerOptions {
    let c = SamplerConfig::new(target, steps);
    RgSamplerOptions {
        seed: c.seed,
        target,
        band: c.band,
        pin: c.pin,
        steps,
        burn_in: c.burn_in,
        thinning: c.thinning,
        chains: c.chains,
    }
}

/// Runs a uniform-mode chain from `start` and estimates
/// `visits(k, n1_minus) / visits(k, n1_plus)`.
///
/// # Safety
/// `start` must be a live handle; `opts` and `out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rg_sample_ratio(
    start: *const RgTriangulation,
    opts: *const RgSamplerOptions,
    k: u64,
    n1_minus: u64,
    n1_plus: u64,
    out: *mut RgRatio,
) -> RgStatus {
    guard(|| {
        non_null!(start, opts, out);
        let o = *opts;
        let mut cfg = SamplerConfig::new(o.target, o.steps);
        cfg.seed = o.seed;
        cfg.band = o.band;
        cfg.pin = o.pin;
        cfg.burn_in = o.burn_in;
        cfg.thinning = o.thinning;
        cfg.chains = o.chains;
        let stats = match run_chain(&(*start).0, &cfg) {
            Ok(s) => s,
            Err(e) => return fail(RgStatus::InvalidArgument, e.to_string()),
        };
        match estimate_level_ratio(&stats, k, n1_minus, n1_plus) {
            Ok(r) => {
                *out = RgRatio {
                    visits_minus: r.visits_minus,
                    visits_plus: r.visits_plus,
                    estimate: r.estimate,
                    std_error: r.std_error,
                };
                RgStatus::Ok
            }
            Err(e) => fail(RgStatus::Domain, e.to_string()),
        }
    })
}
