//! C ABI over `covertower`.
//!
//! Every fallible call returns a [`CtStatus`]. On anything but `CT_STATUS_OK`
//! the message is available from [`ct_last_error`] on the same thread.
//! Big integers cross the boundary as decimal strings; strings returned by
//! the library are released with [`ct_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use covertower::point::{orbit_trace, remn, trace_to_csv};
use covertower::scramble::{common_horizon, first_meet_base, joint_meet, separation_report};
use covertower::{Error, PointAnchor, Tower, TowerConfig};
use num_bigint::BigUint;

/// Opaque tower handle.
pub struct CtTower {
    inner: Tower,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Config = 3,
    OutOfRange = 4,
    LimitExceeded = 5,
    HorizonExhausted = 6,
    /// The searched-for time does not exist within the horizon.
    NotFound = 7,
    Parse = 8,
    Invalid = 9,
    Panic = 10,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> CtStatus {
    match e {
        Error::Config { .. } | Error::InvalidSchedule(_) => CtStatus::Config,
        Error::OutOfRange(_) | Error::BaseVertex(_) => CtStatus::OutOfRange,
        Error::ExplicitLimitExceeded { .. } => CtStatus::LimitExceeded,
        Error::HorizonExhausted { .. } => CtStatus::HorizonExhausted,
        Error::NoDivergenceWithinHorizon { .. } => CtStatus::NotFound,
        Error::Parse(_) => CtStatus::Parse,
        Error::GraphMismatch(_) | Error::InvalidWalk(_) | Error::InvalidAnchor(_) => CtStatus::Invalid,
    }
}

struct Failure(CtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> CtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CtStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(CtStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CtStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn tower_arg<'a>(t: *const CtTower) -> FfiResult<&'a Tower> {
    t.as_ref()
        .map(|t| &t.inner)
        .ok_or_else(|| Failure(CtStatus::NullArgument, "tower is null".into()))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> FfiResult<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| Failure(CtStatus::NullArgument, "output pointer is null".into()))
}

unsafe fn anchor_arg(t: &Tower, p: *const c_char, name: &str) -> FfiResult<PointAnchor> {
    Ok(PointAnchor::parse(t, str_arg(p, name)?)?)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let out = out_arg(out)?;
    *out = CString::new(s)
        .map_err(|_| Failure(CtStatus::Invalid, "output contains a nul byte".into()))?
        .into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default tower of the given depth.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_tower_new(depth: usize, out: *mut *mut CtTower) -> CtStatus {
    guard(|| {
        let out = out_arg(out)?;
        let inner = Tower::build(TowerConfig::new(depth))?;
        *out = Box::into_raw(Box::new(CtTower { inner }));
        Ok(())
    })
}

/// Tower from TOML config text.
///
/// # Safety
/// `config` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_tower_from_config(config: *const c_char, out: *mut *mut CtTower) -> CtStatus {
    guard(|| {
        let out = out_arg(out)?;
        let cfg = TowerConfig::parse(str_arg(config, "config")?)?;
        *out = Box::into_raw(Box::new(CtTower {
            inner: Tower::build(cfg)?,
        }));
        Ok(())
    })
}

/// Releases a tower. Null is ignored.
///
/// # Safety
/// `t` must come from `ct_tower_new` or `ct_tower_from_config` and not have
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn ct_tower_free(t: *mut CtTower) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Caps explicit expansions (materialized levels, orbit windows).
///
/// # Safety
/// `t` must be a live tower handle.
#[no_mangle]
pub unsafe extern "C" fn ct_tower_set_limit(t: *mut CtTower, limit: u64) -> CtStatus {
    guard(|| {
        let t = t
            .as_mut()
            .ok_or_else(|| Failure(CtStatus::NullArgument, "tower is null".into()))?;
        if limit == 0 {
            return Err(Failure(CtStatus::OutOfRange, "limit must be at least 1".into()));
        }
        let inner = std::mem::replace(&mut t.inner, Tower::with_default_config(0));
        t.inner = inner.with_explicit_limit(limit);
        Ok(())
    })
}

/// # Safety
/// `t` must be a live tower handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_tower_depth(t: *const CtTower, out: *mut usize) -> CtStatus {
    guard(|| {
        *out_arg(out)? = tower_arg(t)?.depth();
        Ok(())
    })
}

/// `l(n,i)` in decimal.
///
/// # Safety
/// `t` must be a live tower handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_circuit_length(t: *const CtTower, n: usize, i: usize, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let len = tower_arg(t)?.circuit_length(n, i)?.to_string();
        write_string(out, len)
    })
}

/// Number of vertices at level `n`, in decimal.
///
/// # Safety
/// `t` must be a live tower handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_vertex_count(t: *const CtTower, n: usize, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let count = tower_arg(t)?.vertex_count(n)?.to_string();
        write_string(out, count)
    })
}

/// Image at level `m` of the anchor vertex `"D:i:j"`, as `"m:i:j"`, or
/// `"m:0:0"` for the base vertex.
///
/// # Safety
/// `t` must be a live tower handle; `anchor` a nul-terminated string; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_project_vertex(
    t: *const CtTower,
    anchor: *const c_char,
    m: usize,
    out: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let t = tower_arg(t)?;
        let a = anchor_arg(t, anchor, "anchor")?;
        let v = match a.vertex() {
            Some(v) => covertower::point::project_vertex(t, v, m)?,
            None => covertower::VertexRef::base(m),
        };
        write_string(out, format!("{m}:{}:{}", v.circuit(), v.position()))
    })
}

/// Steps from the anchor vertex to the base.
///
/// # Safety
/// `t` must be a live tower handle; `anchor` a nul-terminated string; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_remn(t: *const CtTower, anchor: *const c_char, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let t = tower_arg(t)?;
        let a = anchor_arg(t, anchor, "anchor")?;
        let v = a
            .vertex()
            .ok_or_else(|| Failure(CtStatus::OutOfRange, "the fixed point never reaches a circuit end".into()))?;
        write_string(out, remn(t, v)?.to_string())
    })
}

/// Level-`n` orbit trace as CSV. `steps` is decimal; null means the whole
/// horizon of the anchor.
///
/// # Safety
/// `t` must be a live tower handle; `anchor` a nul-terminated string;
/// `steps` null or nul-terminated; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_orbit_csv(
    t: *const CtTower,
    anchor: *const c_char,
    n: usize,
    steps: *const c_char,
    out: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let t = tower_arg(t)?;
        let a = anchor_arg(t, anchor, "anchor")?;
        let steps = if steps.is_null() {
            a.horizon(t)
                .ok_or_else(|| Failure(CtStatus::NullArgument, "the fixed point needs an explicit step count".into()))?
        } else {
            BigUint::from_str(str_arg(steps, "steps")?)
                .map_err(|e| Failure(CtStatus::Parse, format!("steps: {e}")))?
        };
        write_string(out, trace_to_csv(&orbit_trace(t, &a, n, &steps)?)?)
    })
}

/// First time the orbit's level-`n` coordinate is the base vertex.
///
/// # Safety
/// `t` must be a live tower handle; `anchor` a nul-terminated string; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_first_meet_base(
    t: *const CtTower,
    anchor: *const c_char,
    n: usize,
    out: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let t = tower_arg(t)?;
        let a = anchor_arg(t, anchor, "anchor")?;
        write_string(out, first_meet_base(t, &a, n)?.to_string())
    })
}

/// First time both level-`n` coordinates are the base vertex.
/// `CT_STATUS_NOT_FOUND` when there is none within the common horizon.
///
/// # Safety
/// `t` must be a live tower handle; `x`, `y` nul-terminated strings; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_joint_meet(
    t: *const CtTower,
    x: *const c_char,
    y: *const c_char,
    n: usize,
    out: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let t = tower_arg(t)?;
        let (x, y) = (anchor_arg(t, x, "x")?, anchor_arg(t, y, "y")?);
        match joint_meet(t, &x, &y, n)? {
            Some(s) => write_string(out, s.to_string()),
            None => Err(Failure(
                CtStatus::NotFound,
                format!("no joint base visit within horizon {}", common_horizon(t, &x, &y)),
            )),
        }
    })
}

/// One-line pair report over the common horizon.
///
/// # Safety
/// `t` must be a live tower handle; `x`, `y` nul-terminated strings; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_pair_report(
    t: *const CtTower,
    x: *const c_char,
    y: *const c_char,
    n: usize,
    out: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let t = tower_arg(t)?;
        let (x, y) = (anchor_arg(t, x, "x")?, anchor_arg(t, y, "y")?);
        let r = separation_report(t, &x, &y, n, &common_horizon(t, &x, &y))?;
        write_string(out, r.to_string())
    })
}

/// DOT rendering of level `n`.
///
/// # Safety
/// `t` must be a live tower handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ct_level_dot(t: *const CtTower, n: usize, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let t = tower_arg(t)?;
        let g = t.materialize_level(n)?;
        let dot = g.to_dot_with(&format!("level{n}"), |id| {
            t.vertex_of_id(n, id).map(|v| v.to_string()).unwrap_or_default()
        });
        write_string(out, dot)
    })
}
