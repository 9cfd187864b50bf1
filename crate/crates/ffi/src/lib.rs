//! C ABI for rmtlab.
//!
//! Every function returns an [`RmtlabStatus`]; results come back through
//! out-pointers. Tables and zero lists are opaque handles owned by the
//! caller and released with the matching `_free`. After a non-OK status,
//! `rmtlab_last_error` describes the failure on the calling thread.

use rmtlab::combinat::{patience_piles, Permutation};
use rmtlab::ensembles::{edge_statistic, sample_many, EnsembleSpec};
use rmtlab::growth::{walker_ensemble, WalkerVariant};
use rmtlab::kernels::{airy_det, gap_probability, number_variance, spacing_cdf};
use rmtlab::rng::par_draws;
use rmtlab::specfun::{tracy_widom, DistributionTable, GridSpec};
use rmtlab::stats::ks_distance;
use rmtlab::zeta::{load_zeros, unfold_zeros, ZeroTable};
use rmtlab::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmtlabStatus {
    Ok = 0,
    NullPointer = 1,
    Range = 2,
    Instability = 3,
    Accuracy = 4,
    Numerical = 5,
    InsufficientData = 6,
    Parse = 7,
    Input = 8,
    Feasibility = 9,
    Logic = 10,
    Config = 11,
    Io = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmtlabWalker {
    OneSided = 0,
    Returning = 1,
}

/// Tabulated CDF.
pub struct RmtlabTable(DistributionTable);

/// Ascending zeta zero heights.
pub struct RmtlabZeros(ZeroTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RmtlabStatus {
    match e {
        Error::Range(_) => RmtlabStatus::Range,
        Error::Instability(_) => RmtlabStatus::Instability,
        Error::Accuracy(_) => RmtlabStatus::Accuracy,
        Error::Numerical(_) => RmtlabStatus::Numerical,
        Error::InsufficientData(_) => RmtlabStatus::InsufficientData,
        Error::Parse { .. } => RmtlabStatus::Parse,
        Error::Input { .. } => RmtlabStatus::Input,
        Error::Feasibility(_) => RmtlabStatus::Feasibility,
        Error::Logic(_) => RmtlabStatus::Logic,
        Error::Config(_) => RmtlabStatus::Config,
        Error::Io(_) => RmtlabStatus::Io,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> RmtlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RmtlabStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            RmtlabStatus::Panic
        }
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument".into());
            return RmtlabStatus::NullPointer;
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rmtlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (truncated,
/// always NUL-terminated) and returns the full message length, or 0 when
/// no error has been recorded.
///
/// # Safety
/// `buf` must be valid for `cap` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Tracy–Widom table for `beta` in {1, 2, 4} on `[t_min, t_max]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_tw_table_new(
    beta: u8,
    t_min: f64,
    t_max: f64,
    step: f64,
    out: *mut *mut RmtlabTable,
) -> RmtlabStatus {
    nonnull!(out);
    guard(|| {
        let t = tracy_widom(beta, GridSpec::new(t_min, t_max, step)?)?;
        *out = Box::into_raw(Box::new(RmtlabTable(t)));
        Ok(())
    })
}

/// Sine-kernel nearest-neighbour spacing CDF on `[0, u_max]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_spacing_table_new(u_max: f64, step: f64, out: *mut *mut RmtlabTable) -> RmtlabStatus {
    nonnull!(out);
    guard(|| {
        *out = Box::into_raw(Box::new(RmtlabTable(spacing_cdf(u_max, step)?)));
        Ok(())
    })
}

/// # Safety
/// `table` must come from a `_new` function and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_table_free(table: *mut RmtlabTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_table_len(table: *const RmtlabTable, out: *mut usize) -> RmtlabStatus {
    nonnull!(table, out);
    *out = (*table).0.len();
    RmtlabStatus::Ok
}

/// CDF at `t`, clamped to the end values outside the grid.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_table_eval(table: *const RmtlabTable, t: f64, out: *mut f64) -> RmtlabStatus {
    nonnull!(table, out);
    *out = (*table).0.eval(t);
    RmtlabStatus::Ok
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_table_quantile(table: *const RmtlabTable, p: f64, out: *mut f64) -> RmtlabStatus {
    nonnull!(table, out);
    guard(|| {
        *out = (*table).0.quantile(p)?;
        Ok(())
    })
}

/// Mean and variance of the tabulated law.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_table_moments(
    table: *const RmtlabTable,
    mean: *mut f64,
    variance: *mut f64,
) -> RmtlabStatus {
    nonnull!(table, mean, variance);
    *mean = (*table).0.mean();
    *variance = (*table).0.variance();
    RmtlabStatus::Ok
}

/// Kolmogorov–Smirnov distance of `n` values against the table.
///
/// # Safety
/// `values` must hold `n` doubles; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_ks_distance(
    values: *const f64,
    n: usize,
    table: *const RmtlabTable,
    out: *mut f64,
) -> RmtlabStatus {
    nonnull!(values, table, out);
    guard(|| {
        *out = ks_distance(std::slice::from_raw_parts(values, n), &(*table).0)?;
        Ok(())
    })
}

/// Sine-kernel gap probability of `(-x, x)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_gap_probability(x: f64, out: *mut f64) -> RmtlabStatus {
    nonnull!(out);
    guard(|| {
        *out = gap_probability(x)?;
        Ok(())
    })
}

/// Airy-kernel Fredholm determinant on `(t, inf)`, i.e. F2(t).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_airy_det(t: f64, out: *mut f64) -> RmtlabStatus {
    nonnull!(out);
    guard(|| {
        *out = airy_det(t)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_number_variance(s: f64, out: *mut f64) -> RmtlabStatus {
    nonnull!(out);
    guard(|| {
        *out = number_variance(s)?;
        Ok(())
    })
}

/// Pile counts of `draws` uniform permutations of size `n`.
///
/// # Safety
/// `out` must hold `draws` values.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_patience_sample(n: usize, draws: usize, seed: u64, out: *mut u32) -> RmtlabStatus {
    nonnull!(out);
    guard(|| {
        if n == 0 {
            return Err(Error::Range("n must be at least 1".into()));
        }
        let v = par_draws(seed, draws, |rng, _| patience_piles(&Permutation::random(n, rng)));
        let dst = std::slice::from_raw_parts_mut(out, draws);
        for (d, s) in dst.iter_mut().zip(v) {
            *d = s as u32;
        }
        Ok(())
    })
}

/// Walker distance statistics.
///
/// # Safety
/// `out` must hold `draws` values.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_walkers_sample(
    variant: RmtlabWalker,
    n: usize,
    draws: usize,
    seed: u64,
    out: *mut u32,
) -> RmtlabStatus {
    nonnull!(out);
    guard(|| {
        let v = match variant {
            RmtlabWalker::OneSided => WalkerVariant::OneSided,
            RmtlabWalker::Returning => WalkerVariant::Returning,
        };
        let r = walker_ensemble(v, n, draws, seed)?;
        let dst = std::slice::from_raw_parts_mut(out, draws);
        for (d, s) in dst.iter_mut().zip(r.d) {
            *d = s as u32;
        }
        Ok(())
    })
}

/// Edge statistics `(lambda_max - z_N) / s_N` of `draws` Gaussian-ensemble
/// matrices.
///
/// # Safety
/// `out` must hold `draws` values.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_edge_sample(beta: u8, n: usize, draws: usize, seed: u64, out: *mut f64) -> RmtlabStatus {
    nonnull!(out);
    guard(|| {
        let sp = sample_many(EnsembleSpec::new(beta, n)?, seed, draws)?;
        let dst = std::slice::from_raw_parts_mut(out, draws);
        for (d, s) in dst.iter_mut().zip(&sp) {
            *d = edge_statistic(s);
        }
        Ok(())
    })
}

/// Loads a zero table (one height per line, `#` comments).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_zeros_load(path: *const c_char, out: *mut *mut RmtlabZeros) -> RmtlabStatus {
    nonnull!(path, out);
    guard(|| {
        let p = CStr::from_ptr(path).to_str().map_err(|_| Error::Config("path is not UTF-8".into()))?;
        *out = Box::into_raw(Box::new(RmtlabZeros(load_zeros(Path::new(p))?)));
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_zeros_len(zeros: *const RmtlabZeros, out: *mut usize) -> RmtlabStatus {
    nonnull!(zeros, out);
    *out = (*zeros).0.len();
    RmtlabStatus::Ok
}

/// Writes `γ log γ / 2π` for every zero into `out`.
///
/// # Safety
/// `out` must hold as many values as the table.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_zeros_unfold(zeros: *const RmtlabZeros, out: *mut f64) -> RmtlabStatus {
    nonnull!(zeros, out);
    guard(|| {
        let u = unfold_zeros(&(*zeros).0)?;
        std::slice::from_raw_parts_mut(out, u.values.len()).copy_from_slice(&u.values);
        Ok(())
    })
}

/// # Safety
/// `zeros` must come from `rmtlab_zeros_load` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rmtlab_zeros_free(zeros: *mut RmtlabZeros) {
    if !zeros.is_null() {
        drop(Box::from_raw(zeros));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn last_error() -> String {
        let mut buf = vec![0 as c_char; 256];
        let n = unsafe { rmtlab_last_error(buf.as_mut_ptr(), buf.len()) };
        assert!(n > 0);
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn table_lifecycle() {
        let mut t: *mut RmtlabTable = ptr::null_mut();
        assert_eq!(unsafe { rmtlab_tw_table_new(2, -8.0, 6.0, 0.01, &mut t) }, RmtlabStatus::Ok);
        let (mut m, mut v, mut f, mut len) = (0.0, 0.0, 0.0, 0usize);
        unsafe {
            assert_eq!(rmtlab_table_moments(t, &mut m, &mut v), RmtlabStatus::Ok);
            assert_eq!(rmtlab_table_eval(t, 0.0, &mut f), RmtlabStatus::Ok);
            assert_eq!(rmtlab_table_len(t, &mut len), RmtlabStatus::Ok);
        }
        assert!((m + 1.7711).abs() < 0.005 && (v - 0.8132).abs() < 0.005);
        assert_eq!(len, 1401);
        let mut d = 0.0;
        assert_eq!(unsafe { rmtlab_airy_det(0.0, &mut d) }, RmtlabStatus::Ok);
        assert!((f - d).abs() < 1e-6);
        unsafe { rmtlab_table_free(t) };
    }

    #[test]
    fn errors_map_to_codes() {
        let mut t: *mut RmtlabTable = ptr::null_mut();
        assert_eq!(unsafe { rmtlab_tw_table_new(3, -8.0, 6.0, 0.01, &mut t) }, RmtlabStatus::Range);
        assert!(last_error().contains("beta"));
        assert!(t.is_null());
        assert_eq!(unsafe { rmtlab_tw_table_new(2, 0.0, 1.0, 0.1, ptr::null_mut()) }, RmtlabStatus::NullPointer);
        let path = CString::new("/nonexistent/zeros.txt").unwrap();
        let mut z: *mut RmtlabZeros = ptr::null_mut();
        assert_eq!(unsafe { rmtlab_zeros_load(path.as_ptr(), &mut z) }, RmtlabStatus::Io);
    }

    #[test]
    fn samples_are_reproducible() {
        let mut a = vec![0u32; 50];
        let mut b = vec![0u32; 50];
        unsafe {
            assert_eq!(rmtlab_patience_sample(100, 50, 7, a.as_mut_ptr()), RmtlabStatus::Ok);
            assert_eq!(rmtlab_patience_sample(100, 50, 7, b.as_mut_ptr()), RmtlabStatus::Ok);
        }
        assert_eq!(a, b);
        assert!(a.iter().all(|&l| (5..=40).contains(&l)));
        let mut w = vec![0u32; 50];
        assert_eq!(unsafe { rmtlab_walkers_sample(RmtlabWalker::OneSided, 64, 50, 1, w.as_mut_ptr()) }, RmtlabStatus::Ok);
        assert!(w.iter().all(|&d| d <= 64));
    }

    #[test]
    fn ks_through_the_abi() {
        let mut t: *mut RmtlabTable = ptr::null_mut();
        assert_eq!(unsafe { rmtlab_tw_table_new(2, -8.0, 6.0, 0.01, &mut t) }, RmtlabStatus::Ok);
        let mut e = vec![0.0; 200];
        assert_eq!(unsafe { rmtlab_edge_sample(2, 60, 200, 3, e.as_mut_ptr()) }, RmtlabStatus::Ok);
        let mut ks = 0.0;
        assert_eq!(unsafe { rmtlab_ks_distance(e.as_ptr(), e.len(), t, &mut ks) }, RmtlabStatus::Ok);
        assert!(ks < 0.15, "{ks}");
        assert_eq!(unsafe { rmtlab_ks_distance(e.as_ptr(), 10, t, &mut ks) }, RmtlabStatus::InsufficientData);
        unsafe { rmtlab_table_free(t) };
    }

    #[test]
    fn zero_tables() {
        let p = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/data/zeta_zeros.txt\0");
        let mut z: *mut RmtlabZeros = ptr::null_mut();
        assert_eq!(unsafe { rmtlab_zeros_load(p.as_ptr().cast(), &mut z) }, RmtlabStatus::Ok);
        let mut n = 0;
        assert_eq!(unsafe { rmtlab_zeros_len(z, &mut n) }, RmtlabStatus::Ok);
        let mut u = vec![0.0; n];
        assert_eq!(unsafe { rmtlab_zeros_unfold(z, u.as_mut_ptr()) }, RmtlabStatus::Ok);
        assert!(u.windows(2).all(|w| w[1] > w[0]));
        unsafe { rmtlab_zeros_free(z) };
    }

    #[test]
    fn header_is_generated() {
        let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rmtlab.h")).unwrap();
        for f in ["rmtlab_tw_table_new", "rmtlab_last_error", "RmtlabStatus", "typedef struct RmtlabTable"] {
            assert!(h.contains(f), "{f}");
        }
    }
}
