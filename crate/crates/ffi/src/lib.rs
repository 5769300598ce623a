//! C ABI for the `isofield` library.
//!
//! Every fallible function returns an [`IsofieldStatus`]. On failure the message is kept in
//! thread-local storage and can be read with [`isofield_last_error`]. Objects that outlive
//! one call are opaque handles created by a `*_new`/`*_from_json` function and released by
//! the matching `*_free` function. Panics are caught at the boundary and reported as
//! [`IsofieldStatus::Panic`].

use isofield::correlation::{scalar_corr, vector_corr, Normalization, SpectralMeasure, VectorSpectralPair};
use isofield::coupling::godunov_gordienko;
use isofield::simulate::{simulate, FieldRealization, SimulationPlan};
use isofield::special_fn::{spin_harmonic, HarmonicIndex, SphericalPoint};
use isofield::sphere::{gl_grid, AlmSampler, AngularPowerSpectrum, HarmonicTables, SpectrumSpec};
use isofield::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsofieldStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments or configuration rejected before computation.
    InvalidInput = 2,
    /// A numerical guard tripped, such as a covariance that is not positive semidefinite.
    Numerical = 3,
    Io = 4,
    /// The output buffer is shorter than the result.
    BufferTooSmall = 5,
    /// An internal panic was caught.
    Panic = 6,
}

/// Normalization of a vector spectral pair.
pub const ISOFIELD_NORMALIZATION_YAGLOM: u32 = 0;
pub const ISOFIELD_NORMALIZATION_BARYCENTRIC: u32 = 1;

/// Pair of spectral measures defining an isotropic vector field.
pub struct IsofieldVectorPair {
    inner: VectorSpectralPair,
}

/// Realizations of a field at a list of points.
pub struct IsofieldRealization {
    inner: FieldRealization,
}

/// Angular power spectra of (Theta, E, B, V).
pub struct IsofieldSpectrum {
    inner: AngularPowerSpectrum,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: IsofieldStatus, msg: impl Into<String>) -> IsofieldStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> IsofieldStatus {
    let status = match e {
        Error::Invalid(_) | Error::Json(_) | Error::Csv(_) => IsofieldStatus::InvalidInput,
        Error::Numerical(_) => IsofieldStatus::Numerical,
        Error::Io(_) => IsofieldStatus::Io,
    };
    fail(status, e.to_string())
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), IsofieldStatus>) -> IsofieldStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IsofieldStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(IsofieldStatus::Panic, format!("panic: {msg}"))
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, IsofieldStatus>;
}

impl<T> OrStatus<T> for isofield::Result<T> {
    fn or_status(self) -> Result<T, IsofieldStatus> {
        self.map_err(from_error)
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), IsofieldStatus> {
    if p.is_null() {
        Err(fail(IsofieldStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null or point to `len` readable values.
unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], IsofieldStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, name)?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` must be null or a nul-terminated string.
unsafe fn string<'a>(p: *const c_char, name: &str) -> Result<&'a str, IsofieldStatus> {
    non_null(p, name)?;
    CStr::from_ptr(p).to_str().map_err(|_| fail(IsofieldStatus::InvalidInput, format!("`{name}` is not valid UTF-8")))
}

/// # Safety
/// `p` must be null or valid for writes of `len` values.
unsafe fn write_all(p: *mut f64, len: usize, values: &[f64], name: &str) -> Result<(), IsofieldStatus> {
    if len < values.len() {
        return Err(fail(
            IsofieldStatus::BufferTooSmall,
            format!("`{name}` holds {len} values, {} needed", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    non_null(p, name)?;
    std::ptr::copy_nonoverlapping(values.as_ptr(), p, values.len());
    Ok(())
}

fn measure(lambdas: &[f64], masses: &[f64]) -> Result<SpectralMeasure, IsofieldStatus> {
    SpectralMeasure::from_pairs(&lambdas.iter().copied().zip(masses.iter().copied()).collect::<Vec<_>>()).or_status()
}

fn into_handle<T>(value: T, out: *mut *mut T) {
    // SAFETY: callers check `out` for null first
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

/// Version string of the library, statically allocated.
#[no_mangle]
pub extern "C" fn isofield_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of the calling thread into `buf` (truncated and
/// nul-terminated) and returns the buffer size needed for the full message, or 0 when
/// the last call succeeded.
///
/// # Safety
/// `buf` must be null or valid for writes of `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn isofield_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match &*e.borrow() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len);
                std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
                *buf.add(n - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// Spin-weighted spherical harmonic `sY_{ell,m}(theta, phi)`.
///
/// # Safety
/// `re` and `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isofield_spin_harmonic(
    spin: i64,
    ell: usize,
    m: i64,
    theta: f64,
    phi: f64,
    re: *mut f64,
    im: *mut f64,
) -> IsofieldStatus {
    guard(|| {
        non_null(re, "re")?;
        non_null(im, "im")?;
        if !HarmonicIndex::new(ell, m, spin).is_admissible() {
            return Err(fail(
                IsofieldStatus::InvalidInput,
                format!("need |m| <= ell and |spin| <= ell, got ell={ell} m={m} spin={spin}"),
            ));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) || !phi.is_finite() {
            return Err(fail(IsofieldStatus::InvalidInput, "theta must lie in [0, pi] and phi must be finite"));
        }
        let v = spin_harmonic(spin, ell, m, SphericalPoint::new(theta, phi));
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Real-basis coupling coefficient `g^{m[m1,m2]}_{l[l1,l2]}`; zero outside the selection rules.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isofield_godunov_gordienko(
    l: usize,
    m: i64,
    l1: usize,
    m1: i64,
    l2: usize,
    m2: i64,
    out: *mut f64,
) -> IsofieldStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = godunov_gordienko(l, m, l1, m1, l2, m2);
        Ok(())
    })
}

/// Correlation at distance `r` of an isotropic scalar field in `R^dimension` whose spectral
/// measure has `n` atoms.
///
/// # Safety
/// `lambdas` and `masses` must point to `n` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isofield_scalar_corr(
    lambdas: *const f64,
    masses: *const f64,
    n: usize,
    dimension: usize,
    r: f64,
    out: *mut f64,
) -> IsofieldStatus {
    guard(|| {
        non_null(out, "out")?;
        let phi = measure(slice(lambdas, n, "lambdas")?, slice(masses, n, "masses")?)?;
        *out = scalar_corr(r, &phi, dimension).or_status()?;
        Ok(())
    })
}

/// Creates a vector spectral pair from two atomic measures.
///
/// # Safety
/// The array arguments must hold `n1` and `n2` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isofield_vector_pair_new(
    lambdas1: *const f64,
    masses1: *const f64,
    n1: usize,
    lambdas2: *const f64,
    masses2: *const f64,
    n2: usize,
    normalization: u32,
    out: *mut *mut IsofieldVectorPair,
) -> IsofieldStatus {
    guard(|| {
        non_null(out, "out")?;
        let norm = match normalization {
            ISOFIELD_NORMALIZATION_YAGLOM => Normalization::Yaglom,
            ISOFIELD_NORMALIZATION_BARYCENTRIC => Normalization::Barycentric,
            other => return Err(fail(IsofieldStatus::InvalidInput, format!("unknown normalization {other}"))),
        };
        let phi1 = measure(slice(lambdas1, n1, "lambdas1")?, slice(masses1, n1, "masses1")?)?;
        let phi2 = measure(slice(lambdas2, n2, "lambdas2")?, slice(masses2, n2, "masses2")?)?;
        let inner = VectorSpectralPair::new(phi1, phi2, norm).or_status()?;
        into_handle(IsofieldVectorPair { inner }, out);
        Ok(())
    })
}

/// # Safety
/// `pair` must be null or a handle from [`isofield_vector_pair_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isofield_vector_pair_free(pair: *mut IsofieldVectorPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Two-point correlation tensor `B_ij(sep)` written row-major into `out[9]`.
///
/// # Safety
/// `pair` must be a live handle, `sep` must hold 3 values and `out` 9.
#[no_mangle]
pub unsafe extern "C" fn isofield_vector_corr(
    pair: *const IsofieldVectorPair,
    sep: *const f64,
    out: *mut f64,
) -> IsofieldStatus {
    guard(|| {
        non_null(pair, "pair")?;
        let s = slice(sep, 3, "sep")?;
        let b = vector_corr([s[0], s[1], s[2]], &(*pair).inner).or_status()?;
        write_all(out, 9, &b.concat(), "out")
    })
}

/// Runs a simulation plan given as JSON; `seed` replaces the plan's master seed.
///
/// # Safety
/// `plan_json` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isofield_simulate_json(
    plan_json: *const c_char,
    seed: u64,
    out: *mut *mut IsofieldRealization,
) -> IsofieldStatus {
    guard(|| {
        non_null(out, "out")?;
        let text = string(plan_json, "plan_json")?;
        let mut plan: SimulationPlan = isofield::cli::io::parse_json(text, "plan").or_status()?;
        plan.master_seed = seed;
        plan.validate().or_status()?;
        let inner = simulate(&plan).or_status()?;
        into_handle(IsofieldRealization { inner }, out);
        Ok(())
    })
}

/// # Safety
/// `real` must be null or a handle from [`isofield_simulate_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isofield_realization_free(real: *mut IsofieldRealization) {
    if !real.is_null() {
        drop(Box::from_raw(real));
    }
}

/// Numbers of realizations, points and components per point.
///
/// # Safety
/// `real` must be a live handle; the output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isofield_realization_shape(
    real: *const IsofieldRealization,
    realizations: *mut usize,
    points: *mut usize,
    components: *mut usize,
) -> IsofieldStatus {
    guard(|| {
        non_null(real, "real")?;
        non_null(realizations, "realizations")?;
        non_null(points, "points")?;
        non_null(components, "components")?;
        let r = &(*real).inner;
        *realizations = r.realizations();
        *points = r.points.len();
        *components = r.components;
        Ok(())
    })
}

/// Copies all values, ordered by realization, then point, then component.
///
/// # Safety
/// `real` must be a live handle and `out` valid for writes of `len` values.
#[no_mangle]
pub unsafe extern "C" fn isofield_realization_values(
    real: *const IsofieldRealization,
    out: *mut f64,
    len: usize,
) -> IsofieldStatus {
    guard(|| {
        non_null(real, "real")?;
        write_all(out, len, &(*real).inner.values, "out")
    })
}

/// Parses an angular power spectrum file given as JSON.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isofield_spectrum_from_json(
    json: *const c_char,
    out: *mut *mut IsofieldSpectrum,
) -> IsofieldStatus {
    guard(|| {
        non_null(out, "out")?;
        let spec: SpectrumSpec = isofield::cli::io::parse_json(string(json, "json")?, "spectrum").or_status()?;
        let inner = AngularPowerSpectrum::try_from(spec).or_status()?;
        into_handle(IsofieldSpectrum { inner }, out);
        Ok(())
    })
}

/// # Safety
/// `spec` must be null or a handle from [`isofield_spectrum_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isofield_spectrum_free(spec: *mut IsofieldSpectrum) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Number of nodes of the Gauss-Legendre grid with `rings` rings and `2 rings - 1` longitudes.
#[no_mangle]
pub extern "C" fn isofield_gl_grid_size(rings: usize) -> usize {
    rings * (2 * rings).saturating_sub(1)
}

/// Writes `(theta, phi)` of every grid node into `out`, `2 * isofield_gl_grid_size(rings)` values.
///
/// # Safety
/// `out` must be valid for writes of `len` values.
#[no_mangle]
pub unsafe extern "C" fn isofield_gl_grid(rings: usize, out: *mut f64, len: usize) -> IsofieldStatus {
    guard(|| {
        let rule = gl_grid(rings).or_status()?;
        let values: Vec<f64> = rule.nodes.iter().flat_map(|p| [p.theta, p.phi]).collect();
        write_all(out, len, &values, "out")
    })
}

/// Draws one realization of the (Theta, Q, U, V) maps on the Gauss-Legendre grid with
/// `rings` rings, truncated at `ell_max`. Writes 4 values per node in grid order into `out`.
/// The result depends only on `(spectrum, ell_max, seed, realization)`.
///
/// # Safety
/// `spec` must be a live handle and `out` valid for writes of `len` values.
#[no_mangle]
pub unsafe extern "C" fn isofield_cmb_map(
    spec: *const IsofieldSpectrum,
    ell_max: usize,
    rings: usize,
    seed: u64,
    realization: u64,
    out: *mut f64,
    len: usize,
) -> IsofieldStatus {
    guard(|| {
        non_null(spec, "spec")?;
        let spectrum = (*spec).inner.with_ell_max(ell_max).or_status()?;
        let rule = gl_grid(rings).or_status()?;
        let map = HarmonicTables::new(ell_max, &rule.nodes)
            .synthesize(&AlmSampler::new(&spectrum).or_status()?.sample(seed, realization))
            .or_status()?;
        write_all(out, len, &map.values.concat(), "out")
    })
}
