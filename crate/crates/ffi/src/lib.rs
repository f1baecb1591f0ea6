//! C ABI for the Otto engine library.
//!
//! Objects are opaque handles created by the constructor functions and
//! released with the matching `*_free`. Every fallible call returns an
//! [`OttoStatus`]; on failure, [`otto_last_error`] describes what went wrong on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use otto_engine::cycle::ClosedForm;
use otto_engine::sweep::theorem1_suite;
use otto_engine::{
    closed_form_two_bath_qutrit, is_unital, local_spin_channel, run_cycle, su3_projective_channel,
    CycleConfig, CycleRecord, Error, KrausChannel, LevelLabel, SpinDirection, Su3Angles,
    SubstanceSpec,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OttoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidField = 3,
    InvalidBeta = 4,
    InvalidCycle = 5,
    NotAnEngine = 6,
    /// Malformed operator or state (non-Hermitian, not a channel, non-finite, ...).
    InvalidOperator = 7,
    OutOfRange = 8,
    Panic = 99,
}

impl From<&Error> for OttoStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidField(_) => OttoStatus::InvalidField,
            Error::InvalidBeta(_) => OttoStatus::InvalidBeta,
            Error::InvalidCycle(_) => OttoStatus::InvalidCycle,
            Error::NotAnEngine => OttoStatus::NotAnEngine,
            Error::InvalidArgument(_)
            | Error::NonUnitVector(_)
            | Error::DimensionTooLarge { .. } => OttoStatus::InvalidArgument,
            _ => OttoStatus::InvalidOperator,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (OttoStatus, String)>) -> OttoStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OttoStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OttoStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (OttoStatus, String) {
    (OttoStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (OttoStatus, String) {
    (OttoStatus::NullPointer, format!("{what} is null"))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn otto_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn otto_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

pub struct OttoChannel(KrausChannel);
pub struct OttoCycleConfig(CycleConfig);
pub struct OttoCycleRecord(CycleRecord);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OttoSubstanceKind {
    Qubit = 0,
    Qutrit = 1,
    Xxz = 2,
}

/// Working substance. `j` is read for qutrits, `jxy` and `jz` for XXZ.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OttoSubstance {
    pub kind: OttoSubstanceKind,
    pub j: f64,
    pub jxy: f64,
    pub jz: f64,
}

impl From<OttoSubstance> for SubstanceSpec {
    fn from(s: OttoSubstance) -> Self {
        match s.kind {
            OttoSubstanceKind::Qubit => SubstanceSpec::Qubit,
            OttoSubstanceKind::Qutrit => SubstanceSpec::Qutrit { j: s.j },
            OttoSubstanceKind::Xxz => SubstanceSpec::Xxz {
                jxy: s.jxy,
                jz: s.jz,
            },
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OttoLevelLabel {
    PlusB = 0,
    MinusB = 1,
    MinusJ = 2,
    PlusTwoB = 3,
    Triplet = 4,
    Singlet = 5,
    MinusTwoB = 6,
}

impl From<LevelLabel> for OttoLevelLabel {
    fn from(l: LevelLabel) -> Self {
        match l {
            LevelLabel::PlusB => OttoLevelLabel::PlusB,
            LevelLabel::MinusB => OttoLevelLabel::MinusB,
            LevelLabel::MinusJ => OttoLevelLabel::MinusJ,
            LevelLabel::Plus2B => OttoLevelLabel::PlusTwoB,
            LevelLabel::Triplet => OttoLevelLabel::Triplet,
            LevelLabel::Singlet => OttoLevelLabel::Singlet,
            LevelLabel::Minus2B => OttoLevelLabel::MinusTwoB,
        }
    }
}

/// Cycle totals. Efficiencies are NaN when undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OttoCycleSummary {
    pub qh: f64,
    pub qc: f64,
    pub w: f64,
    /// -W/Qh, only in engine mode.
    pub eta: f64,
    /// -W/Qh whenever Qh != 0.
    pub eta_raw: f64,
    pub eta0: f64,
    pub idle_heat_hot: f64,
    pub engine_mode: bool,
    pub crossing_warning: bool,
    pub measurement_cools: bool,
    pub level_count: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OttoLevel {
    pub label: OttoLevelLabel,
    pub idle: bool,
    pub energy_cold: f64,
    pub energy_hot: f64,
    pub p_cold: f64,
    pub p_hot: f64,
    pub delta_p: f64,
    pub q_hot: f64,
    pub q_cold: f64,
}

/// Closed-form two-bath qutrit cycle. `eta` and `omega` are NaN when undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OttoClosedForm {
    pub qh: f64,
    pub qc: f64,
    pub w: f64,
    pub eta: f64,
    pub omega: f64,
}

impl From<ClosedForm> for OttoClosedForm {
    fn from(c: ClosedForm) -> Self {
        Self {
            qh: c.qh,
            qc: c.qc,
            w: c.w,
            eta: c.eta.unwrap_or(f64::NAN),
            omega: c.omega.unwrap_or(f64::NAN),
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OttoTheorem1Summary {
    pub sample_count: usize,
    pub min_unital: f64,
    pub min_control: f64,
    pub violations: usize,
}

unsafe fn store<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Projective measurement onto the four-angle qutrit basis (radians).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn otto_channel_su3(
    theta: f64,
    phi: f64,
    chi: f64,
    psi: f64,
    out: *mut *mut OttoChannel,
) -> OttoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let angles = Su3Angles::new(theta, phi, chi, psi).map_err(lib_err)?;
        let ch = su3_projective_channel(&angles).map_err(lib_err)?;
        store(out, OttoChannel(ch));
        Ok(())
    })
}

/// Product spin measurement along unit vectors `n` and `m` (three doubles each).
///
/// # Safety
/// `n` and `m` must point to three readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_channel_local_spin(
    n: *const f64,
    m: *const f64,
    out: *mut *mut OttoChannel,
) -> OttoStatus {
    guard(|| {
        if n.is_null() || m.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let dir = |p: *const f64| {
            let v = std::slice::from_raw_parts(p, 3);
            SpinDirection::new(v[0], v[1], v[2]).map_err(lib_err)
        };
        let ch = local_spin_channel(&dir(n)?, &dir(m)?).map_err(lib_err)?;
        store(out, OttoChannel(ch));
        Ok(())
    })
}

/// # Safety
/// `ch` must be a valid channel handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_channel_dim(ch: *const OttoChannel, out: *mut usize) -> OttoStatus {
    guard(|| {
        let ch = ch.as_ref().ok_or_else(|| null("channel"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ch.0.dim();
        Ok(())
    })
}

/// # Safety
/// `ch` must be a valid channel handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_channel_is_unital(
    ch: *const OttoChannel,
    out: *mut bool,
) -> OttoStatus {
    guard(|| {
        let ch = ch.as_ref().ok_or_else(|| null("channel"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = is_unital(&ch.0);
        Ok(())
    })
}

/// # Safety
/// `ch` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn otto_channel_free(ch: *mut OttoChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Two-bath cycle between inverse temperatures `beta_c` and `beta_h`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_config_two_bath(
    substance: OttoSubstance,
    bi: f64,
    bf: f64,
    beta_c: f64,
    beta_h: f64,
    out: *mut *mut OttoCycleConfig,
) -> OttoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg =
            CycleConfig::two_bath(substance.into(), bi, bf, beta_c, beta_h).map_err(lib_err)?;
        store(out, OttoCycleConfig(cfg));
        Ok(())
    })
}

/// Measurement-fuelled cycle. The channel is copied; the caller keeps ownership.
///
/// # Safety
/// `channel` must be a valid channel handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_config_measurement(
    substance: OttoSubstance,
    bi: f64,
    bf: f64,
    beta_c: f64,
    channel: *const OttoChannel,
    out: *mut *mut OttoCycleConfig,
) -> OttoStatus {
    guard(|| {
        let ch = channel.as_ref().ok_or_else(|| null("channel"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = CycleConfig::measurement(substance.into(), bi, bf, beta_c, ch.0.clone())
            .map_err(lib_err)?;
        store(out, OttoCycleConfig(cfg));
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn otto_config_free(cfg: *mut OttoCycleConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be a valid config handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_run_cycle(
    cfg: *const OttoCycleConfig,
    out: *mut *mut OttoCycleRecord,
) -> OttoStatus {
    guard(|| {
        let cfg = cfg.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let rec = run_cycle(&cfg.0).map_err(lib_err)?;
        store(out, OttoCycleRecord(rec));
        Ok(())
    })
}

/// # Safety
/// `rec` must be a valid record handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_record_summary(
    rec: *const OttoCycleRecord,
    out: *mut OttoCycleSummary,
) -> OttoStatus {
    guard(|| {
        let r = &rec.as_ref().ok_or_else(|| null("record"))?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = OttoCycleSummary {
            qh: r.qh,
            qc: r.qc,
            w: r.w,
            eta: r.eta.unwrap_or(f64::NAN),
            eta_raw: r.eta_raw.unwrap_or(f64::NAN),
            eta0: r.eta0,
            idle_heat_hot: r.idle_heat_hot(),
            engine_mode: r.engine_mode,
            crossing_warning: r.crossing_warning,
            measurement_cools: r.measurement_cools,
            level_count: r.levels.len(),
        };
        Ok(())
    })
}

/// Per-level breakdown for level `index` (0-based, below `level_count`).
///
/// # Safety
/// `rec` must be a valid record handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_record_level(
    rec: *const OttoCycleRecord,
    index: usize,
    out: *mut OttoLevel,
) -> OttoStatus {
    guard(|| {
        let r = &rec.as_ref().ok_or_else(|| null("record"))?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let l = r.levels.get(index).ok_or_else(|| {
            (
                OttoStatus::OutOfRange,
                format!("level {index} of {}", r.levels.len()),
            )
        })?;
        *out = OttoLevel {
            label: l.label.into(),
            idle: l.idle,
            energy_cold: l.energy_cold,
            energy_hot: l.energy_hot,
            p_cold: l.p_cold,
            p_hot: l.p_hot,
            delta_p: l.delta_p,
            q_hot: l.q_hot,
            q_cold: l.q_cold,
        };
        Ok(())
    })
}

/// # Safety
/// `rec` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn otto_record_free(rec: *mut OttoCycleRecord) {
    if !rec.is_null() {
        drop(Box::from_raw(rec));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_closed_form_two_bath_qutrit(
    j: f64,
    bi: f64,
    bf: f64,
    beta_c: f64,
    beta_h: f64,
    out: *mut OttoClosedForm,
) -> OttoStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = closed_form_two_bath_qutrit(j, bi, bf, beta_c, beta_h)
            .map_err(lib_err)?
            .into();
        Ok(())
    })
}

/// Random unital channels on passive states, plus a non-unital control group.
/// Returns `Ok` even when violations are found; check `violations`.
///
/// # Safety
/// `dims` must point to `dim_count` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn otto_theorem1_suite(
    dims: *const usize,
    dim_count: usize,
    samples: usize,
    seed: u64,
    out: *mut OttoTheorem1Summary,
) -> OttoStatus {
    guard(|| {
        if dims.is_null() {
            return Err(null("dims"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let dims = std::slice::from_raw_parts(dims, dim_count);
        let r = theorem1_suite(dims, samples, seed).map_err(lib_err)?;
        *out = OttoTheorem1Summary {
            sample_count: r.samples.len(),
            min_unital: r.min_unital,
            min_control: r.min_control,
            violations: r.violations,
        };
        Ok(())
    })
}
