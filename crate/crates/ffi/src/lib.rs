//! C ABI over `irsdof`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_sample`
//! style functions and released with the matching `*_free`. Every fallible call
//! returns an [`IrsdofStatus`]; on failure a message is kept per thread and can
//! be read with [`irsdof_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use irsdof::channel_model::{sample, ChannelRealization, SystemConfig};
use irsdof::dof_bounds::{
    active_lower_sum, active_upper_sum, eps_relaxed_lower_sum_mc, lambda_probability_mc, passive_lower_sum_mc,
    passive_upper_sum_mc, sinr_outage_mc, BoundCurvePoint, EstimatorOptions,
};
use irsdof::ia_verifier::{run_check, IaConfig};
use irsdof::irs_solvers::{effective_channel, solve_active};
use irsdof::mc_engine::{EstimatorResult, McEngine, RandomStream};
use irsdof::network_topology::NetworkMatrix;
use irsdof::{Complex64, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrsdofStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularMatrix = 3,
    RankDeficient = 4,
    NonConvergent = 5,
    TooManyTargets = 6,
    TooFewElements = 7,
    WeightSum = 8,
    SizeOverflow = 9,
    NotDecodable = 10,
    ZeroSamples = 11,
    Dimension = 12,
    Config = 13,
    Io = 14,
    BufferTooSmall = 15,
    Panic = 16,
}

impl From<&Error> for IrsdofStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::SingularMatrix { .. } => IrsdofStatus::SingularMatrix,
            Error::RankDeficient { .. } => IrsdofStatus::RankDeficient,
            Error::NonConvergent(_) => IrsdofStatus::NonConvergent,
            Error::TooManyTargets { .. } => IrsdofStatus::TooManyTargets,
            Error::TooFewElements { .. } => IrsdofStatus::TooFewElements,
            Error::WeightSum { .. } => IrsdofStatus::WeightSum,
            Error::SizeOverflow { .. } => IrsdofStatus::SizeOverflow,
            Error::NotDecodable { .. } => IrsdofStatus::NotDecodable,
            Error::ZeroSamples => IrsdofStatus::ZeroSamples,
            Error::Dimension(_) => IrsdofStatus::Dimension,
            Error::Config(_) => IrsdofStatus::Config,
            Error::Io(_) => IrsdofStatus::Io,
        }
    }
}

/// System parameters (K, Q, geometry, blockage, SNR).
pub struct IrsdofConfig(SystemConfig);

/// One channel draw.
pub struct IrsdofChannel(ChannelRealization);

/// A K×K network matrix.
pub struct IrsdofNetwork(NetworkMatrix);

/// Monte Carlo estimate with its 95% interval.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IrsdofEstimate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Per-receiver outcome of an alignment check.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IrsdofReceiverReport {
    pub dim_message: u64,
    pub dim_interference: u64,
    pub joint_rank: u64,
    pub decodable: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: IrsdofStatus, msg: impl Into<String>) -> IrsdofStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> IrsdofStatus {
    fail(IrsdofStatus::from(&e), e.to_string())
}

/// Runs `f` and turns panics into [`IrsdofStatus::Panic`].
fn guard(f: impl FnOnce() -> IrsdofStatus) -> IrsdofStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(IrsdofStatus::Panic, msg)
        }
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn irsdof_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn irsdof_status_name(status: IrsdofStatus) -> *const c_char {
    let s: &'static CStr = match status {
        IrsdofStatus::Ok => c"ok",
        IrsdofStatus::NullPointer => c"null pointer",
        IrsdofStatus::InvalidArgument => c"invalid argument",
        IrsdofStatus::SingularMatrix => c"singular matrix",
        IrsdofStatus::RankDeficient => c"rank deficient",
        IrsdofStatus::NonConvergent => c"not convergent",
        IrsdofStatus::TooManyTargets => c"too many targets",
        IrsdofStatus::TooFewElements => c"too few elements",
        IrsdofStatus::WeightSum => c"weight sum",
        IrsdofStatus::SizeOverflow => c"size overflow",
        IrsdofStatus::NotDecodable => c"not decodable",
        IrsdofStatus::ZeroSamples => c"zero samples",
        IrsdofStatus::Dimension => c"dimension mismatch",
        IrsdofStatus::Config => c"config error",
        IrsdofStatus::Io => c"io error",
        IrsdofStatus::BufferTooSmall => c"buffer too small",
        IrsdofStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Closed-form active lower bound on the sum DoF.
#[no_mangle]
pub extern "C" fn irsdof_active_lower_sum(k: usize, q: usize) -> f64 {
    if k == 0 {
        return f64::NAN;
    }
    active_lower_sum(k, q)
}

/// Closed-form active upper bound on the sum DoF (NaN for K < 2).
#[no_mangle]
pub extern "C" fn irsdof_active_upper_sum(k: usize, q: usize) -> f64 {
    if k < 2 {
        return f64::NAN;
    }
    active_upper_sum(k, q)
}

fn new_config(cfg: SystemConfig, out: *mut *mut IrsdofConfig) -> IrsdofStatus {
    if out.is_null() {
        return fail(IrsdofStatus::NullPointer, "out is NULL");
    }
    if let Err(e) = cfg.validate() {
        return from_error(e);
    }
    // SAFETY: `out` is non-null and the caller guarantees it is writable.
    unsafe { *out = Box::into_raw(Box::new(IrsdofConfig(cfg))) };
    IrsdofStatus::Ok
}

/// Reference outdoor geometry with blockage `hhat`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn irsdof_config_reference(
    k: usize,
    q: usize,
    hhat: f64,
    out: *mut *mut IrsdofConfig,
) -> IrsdofStatus {
    guard(|| new_config(SystemConfig::reference(k, q, hhat), out))
}

/// Geometry scaled to unit-variance channel entries.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn irsdof_config_unit_variance(k: usize, q: usize, out: *mut *mut IrsdofConfig) -> IrsdofStatus {
    guard(|| new_config(SystemConfig::unit_variance(k, q), out))
}

/// Sets transmit SNR ρ and noise power N₀.
///
/// # Safety
/// `cfg` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn irsdof_config_set_snr(cfg: *mut IrsdofConfig, rho: f64, n0: f64) -> IrsdofStatus {
    guard(|| {
        // SAFETY: null checked; liveness is the caller's contract.
        let Some(c) = (unsafe { cfg.as_mut() }) else {
            return fail(IrsdofStatus::NullPointer, "cfg is NULL");
        };
        let mut next = c.0.clone();
        next.snr_rho = rho;
        next.noise_n0 = n0;
        match next.validate() {
            Ok(()) => {
                c.0 = next;
                IrsdofStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `cfg` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irsdof_config_free(cfg: *mut IrsdofConfig) {
    if !cfg.is_null() {
        // SAFETY: allocated by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(cfg) });
    }
}

fn write_estimate(r: &BoundCurvePoint, out: *mut IrsdofEstimate) {
    // SAFETY: callers check `out` for null first.
    unsafe {
        *out = IrsdofEstimate {
            mean: r.value,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            samples: r.samples as u64,
            seed: r.seed,
        }
    };
}

fn as_point(r: EstimatorResult) -> BoundCurvePoint {
    BoundCurvePoint::from_estimate(0, r)
}

fn run_estimator(
    cfg: *const IrsdofConfig,
    samples: usize,
    seed: u64,
    workers: usize,
    out: *mut IrsdofEstimate,
    f: impl FnOnce(&SystemConfig, &EstimatorOptions) -> irsdof::Result<BoundCurvePoint>,
) -> IrsdofStatus {
    guard(|| {
        // SAFETY: null checked; liveness is the caller's contract.
        let Some(c) = (unsafe { cfg.as_ref() }) else {
            return fail(IrsdofStatus::NullPointer, "cfg is NULL");
        };
        if out.is_null() {
            return fail(IrsdofStatus::NullPointer, "out is NULL");
        }
        let opts = EstimatorOptions {
            engine: McEngine::new(workers),
            ..EstimatorOptions::new(samples, seed)
        };
        match f(&c.0, &opts) {
            Ok(p) => {
                write_estimate(&p, out);
                IrsdofStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Passive lower bound on the sum DoF. `workers == 0` uses all cores.
///
/// # Safety
/// `cfg` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn irsdof_passive_lower_sum(
    cfg: *const IrsdofConfig,
    samples: usize,
    seed: u64,
    workers: usize,
    out: *mut IrsdofEstimate,
) -> IrsdofStatus {
    run_estimator(cfg, samples, seed, workers, out, passive_lower_sum_mc)
}

/// Passive upper bound on the sum DoF.
///
/// # Safety
/// `cfg` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn irsdof_passive_upper_sum(
    cfg: *const IrsdofConfig,
    samples: usize,
    seed: u64,
    workers: usize,
    out: *mut IrsdofEstimate,
) -> IrsdofStatus {
    run_estimator(cfg, samples, seed, workers, out, passive_upper_sum_mc)
}

/// ε-relaxed lossless lower bound on the sum DoF.
///
/// # Safety
/// `cfg` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn irsdof_eps_relaxed_lower_sum(
    cfg: *const IrsdofConfig,
    epsilon: f64,
    samples: usize,
    seed: u64,
    workers: usize,
    out: *mut IrsdofEstimate,
) -> IrsdofStatus {
    run_estimator(cfg, samples, seed, workers, out, |c, o| eps_relaxed_lower_sum_mc(c, epsilon, o))
}

/// Probability that an ε-relaxed lossless surface cancels every cross link.
///
/// # Safety
/// `cfg` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn irsdof_lambda_probability(
    cfg: *const IrsdofConfig,
    epsilon: f64,
    samples: usize,
    seed: u64,
    workers: usize,
    out: *mut IrsdofEstimate,
) -> IrsdofStatus {
    run_estimator(cfg, samples, seed, workers, out, |c, o| {
        lambda_probability_mc(c, epsilon, o).map(as_point)
    })
}

/// Mean fraction of users whose real-part SINR falls below `margin` under
/// phase alignment.
///
/// # Safety
/// `cfg` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn irsdof_sinr_outage(
    cfg: *const IrsdofConfig,
    margin: f64,
    samples: usize,
    seed: u64,
    workers: usize,
    out: *mut IrsdofEstimate,
) -> IrsdofStatus {
    run_estimator(cfg, samples, seed, workers, out, |c, o| sinr_outage_mc(c, margin, o).map(as_point))
}

/// Draws the channel of substream `index` under `seed`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn irsdof_channel_sample(
    cfg: *const IrsdofConfig,
    seed: u64,
    index: u64,
    out: *mut *mut IrsdofChannel,
) -> IrsdofStatus {
    guard(|| {
        // SAFETY: null checked; liveness is the caller's contract.
        let Some(c) = (unsafe { cfg.as_ref() }) else {
            return fail(IrsdofStatus::NullPointer, "cfg is NULL");
        };
        if out.is_null() {
            return fail(IrsdofStatus::NullPointer, "out is NULL");
        }
        let ch = sample(&c.0, &RandomStream::new(seed, index));
        // SAFETY: `out` checked above.
        unsafe { *out = Box::into_raw(Box::new(IrsdofChannel(ch))) };
        IrsdofStatus::Ok
    })
}

/// Writes `K` and `Q` of a channel.
///
/// # Safety
/// `ch` must be a live handle; `k` and `q` must be writable.
#[no_mangle]
pub unsafe extern "C" fn irsdof_channel_dims(ch: *const IrsdofChannel, k: *mut usize, q: *mut usize) -> IrsdofStatus {
    // SAFETY: null checked; liveness is the caller's contract.
    let Some(c) = (unsafe { ch.as_ref() }) else {
        return fail(IrsdofStatus::NullPointer, "ch is NULL");
    };
    if k.is_null() || q.is_null() {
        return fail(IrsdofStatus::NullPointer, "k or q is NULL");
    }
    // SAFETY: checked above.
    unsafe {
        *k = c.0.k();
        *q = c.0.q();
    }
    IrsdofStatus::Ok
}

/// # Safety
/// `ch` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irsdof_channel_free(ch: *mut IrsdofChannel) {
    if !ch.is_null() {
        // SAFETY: allocated by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(ch) });
    }
}

/// Parses K rows of `0`/`1` separated by newlines, `/` or `;`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn irsdof_network_parse(text: *const c_char, out: *mut *mut IrsdofNetwork) -> IrsdofStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(IrsdofStatus::NullPointer, "text or out is NULL");
        }
        // SAFETY: caller guarantees NUL termination.
        let Ok(s) = (unsafe { CStr::from_ptr(text) }).to_str() else {
            return fail(IrsdofStatus::InvalidArgument, "text is not UTF-8");
        };
        match s.parse::<NetworkMatrix>() {
            Ok(n) => {
                // SAFETY: `out` checked above.
                unsafe { *out = Box::into_raw(Box::new(IrsdofNetwork(n))) };
                IrsdofStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `net` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irsdof_network_free(net: *mut IrsdofNetwork) {
    if !net.is_null() {
        // SAFETY: allocated by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(net) });
    }
}

/// Solves for active IRS coefficients realizing `net` and writes the
/// resulting K×K effective channel, row-major with entry `(j, i)` the gain
/// from transmitter `i` to receiver `j`. `tau_re`/`tau_im` receive the `Q`
/// coefficients and may be NULL when not needed.
///
/// # Safety
/// Handles must be live. Non-null buffers must hold `tau_len` (≥ Q) and
/// `h_len` (≥ K²) doubles respectively.
#[no_mangle]
pub unsafe extern "C" fn irsdof_solve_active(
    ch: *const IrsdofChannel,
    net: *const IrsdofNetwork,
    tau_re: *mut f64,
    tau_im: *mut f64,
    tau_len: usize,
    h_re: *mut f64,
    h_im: *mut f64,
    h_len: usize,
) -> IrsdofStatus {
    guard(|| {
        // SAFETY: null checked; liveness is the caller's contract.
        let (Some(c), Some(n)) = (unsafe { ch.as_ref() }, unsafe { net.as_ref() }) else {
            return fail(IrsdofStatus::NullPointer, "ch or net is NULL");
        };
        if h_re.is_null() || h_im.is_null() {
            return fail(IrsdofStatus::NullPointer, "h_re or h_im is NULL");
        }
        let (k, q) = (c.0.k(), c.0.q());
        if h_len < k * k {
            return fail(IrsdofStatus::BufferTooSmall, format!("h buffers need {} entries", k * k));
        }
        let want_tau = !tau_re.is_null() && !tau_im.is_null();
        if want_tau && tau_len < q {
            return fail(IrsdofStatus::BufferTooSmall, format!("tau buffers need {q} entries"));
        }
        let tau = match solve_active(&c.0, &n.0) {
            Ok(t) => t.tau,
            Err(e) => return from_error(e),
        };
        let h = effective_channel(&c.0, &tau);
        // SAFETY: buffer lengths checked above.
        unsafe {
            if want_tau {
                for (u, z) in tau.iter().enumerate() {
                    *tau_re.add(u) = z.re;
                    *tau_im.add(u) = z.im;
                }
            }
            for j in 0..k {
                for i in 0..k {
                    let z: Complex64 = h[(j, i)];
                    *h_re.add(j * k + i) = z.re;
                    *h_im.add(j * k + i) = z.im;
                }
            }
        }
        IrsdofStatus::Ok
    })
}

/// Alignment check of the four-user preset at auxiliary size `n`. Writes up
/// to `len` receiver reports and the slot count T.
///
/// # Safety
/// `reports` must hold `len` (≥ 4) entries; `slots` must be writable.
#[no_mangle]
pub unsafe extern "C" fn irsdof_ia_check_example1(
    n: usize,
    seed: u64,
    reports: *mut IrsdofReceiverReport,
    len: usize,
    slots: *mut u64,
) -> IrsdofStatus {
    guard(|| {
        if reports.is_null() || slots.is_null() {
            return fail(IrsdofStatus::NullPointer, "reports or slots is NULL");
        }
        let rep = match IaConfig::example1(n).and_then(|cfg| run_check(&cfg, seed)) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        if len < rep.receivers.len() {
            return fail(
                IrsdofStatus::BufferTooSmall,
                format!("reports needs {} entries", rep.receivers.len()),
            );
        }
        // SAFETY: lengths checked above.
        unsafe {
            for (j, r) in rep.receivers.iter().enumerate() {
                *reports.add(j) = IrsdofReceiverReport {
                    dim_message: r.dim_message as u64,
                    dim_interference: r.dim_interference as u64,
                    joint_rank: r.joint_rank as u64,
                    decodable: r.decodable,
                };
            }
            *slots = rep.slots as u64;
        }
        IrsdofStatus::Ok
    })
}
