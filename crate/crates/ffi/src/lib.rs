//! C ABI for `gfock`.
//!
//! Every fallible function returns a [`GfockStatus`]; on failure the message
//! is available from [`gfock_last_error`] on the same thread. Objects are
//! opaque handles released with their matching `_free` function; strings
//! returned through `char **` are released with [`gfock_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gfock::bargmann::{self, BargmannKind, L2Function, QuadratureRule};
use gfock::moments::{self, MomentSeq, PsdMode};
use gfock::operators::expr;
use gfock::{coeffspace, kernels, specfun, CoeffSeq, Complex64, Error, KernelSpec, Space};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfockStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Overflow = 4,
    Parse = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfockSpace {
    Fock = 0,
    Hp = 1,
    Fp = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfockTransformKind {
    B = 0,
    Bp = 1,
    Sbp = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfockPsdMode {
    Exact = 0,
    Float = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GfockComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for GfockComplex {
    fn from(z: Complex64) -> Self {
        GfockComplex { re: z.re, im: z.im }
    }
}

impl From<GfockComplex> for Complex64 {
    fn from(z: GfockComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GfockKernelValue {
    pub series: GfockComplex,
    pub closed: GfockComplex,
    pub gap: f64,
    pub terms_used: usize,
    pub last_term: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GfockTransformValue {
    pub value: GfockComplex,
    pub direct: GfockComplex,
    pub route_gap: f64,
    pub tail_diag: f64,
    pub tail_unresolved: bool,
}

/// Opaque truncated power series.
pub struct GfockCoeffSeq(CoeffSeq);

/// Opaque Gauss-Hermite rule.
pub struct GfockQuadrature(QuadratureRule);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GfockStatus {
    match e {
        Error::InvalidCoeffs(_) | Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => {
            GfockStatus::InvalidArgument
        }
        Error::OutOfRange(_) => GfockStatus::OutOfRange,
        Error::WeightOverflow { .. } => GfockStatus::Overflow,
        Error::Parse(_) | Error::Json(_) => GfockStatus::Parse,
        Error::Io { .. } => GfockStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status plus thread-local message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GfockStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GfockStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            GfockStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            GfockStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn write<T>(p: *mut T, v: T, what: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    p.write(v);
    Ok(())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    let s = deref(p, what)?;
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidArgument(format!("{what} is not valid UTF-8"))))
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn spec(space: GfockSpace, p: u32) -> KernelSpec {
    let space = match space {
        GfockSpace::Fock => Space::Fock,
        GfockSpace::Hp => Space::Hp,
        GfockSpace::Fp => Space::Fp,
    };
    KernelSpec::new(space, p)
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gfock_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gfock_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a series from `len` coefficients; `im` may be null for real input.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gfock_coeffseq_new(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut GfockCoeffSeq,
) -> GfockStatus {
    guard(|| {
        if re.is_null() {
            return Err(Fail::Null("re"));
        }
        let re = std::slice::from_raw_parts(re, len);
        let coeffs = if im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
        };
        let seq = CoeffSeq::new(coeffs)?;
        write(out, Box::into_raw(Box::new(GfockCoeffSeq(seq))), "out")
    })
}

/// # Safety
/// `seq` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gfock_coeffseq_free(seq: *mut GfockCoeffSeq) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Truncation degree `N`; the series holds `N + 1` coefficients. Returns 0 for null.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfock_coeffseq_truncation(seq: *const GfockCoeffSeq) -> usize {
    seq.as_ref().map_or(0, |s| s.0.truncation())
}

/// Coefficient of `z^n`; zero beyond the truncation.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_coeffseq_get(seq: *const GfockCoeffSeq, n: usize, out: *mut GfockComplex) -> GfockStatus {
    guard(|| {
        let s = deref(seq, "seq")?;
        write(out, s.0.get(n).into(), "out")
    })
}

/// Weight of `z^n` in the given space.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_weight(space: GfockSpace, p: u32, n: usize, out: *mut f64) -> GfockStatus {
    guard(|| write(out, coeffspace::weight(spec(space, p), n)?, "out"))
}

/// `<f, g>` in the given space.
///
/// # Safety
/// `f`, `g` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_inner(
    space: GfockSpace,
    p: u32,
    f: *const GfockCoeffSeq,
    g: *const GfockCoeffSeq,
    out: *mut GfockComplex,
) -> GfockStatus {
    guard(|| {
        let (f, g) = (deref(f, "f")?, deref(g, "g")?);
        write(out, coeffspace::inner(spec(space, p), &f.0, &g.0).into(), "out")
    })
}

/// `f(z)`.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_eval(f: *const GfockCoeffSeq, z: GfockComplex, out: *mut GfockComplex) -> GfockStatus {
    guard(|| {
        let f = deref(f, "f")?;
        write(out, f.0.eval(z.into()).into(), "out")
    })
}

/// `K(z, w)` by the series through `terms` and by the closed form.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_kernel(
    space: GfockSpace,
    p: u32,
    z: GfockComplex,
    w: GfockComplex,
    terms: usize,
    out: *mut GfockKernelValue,
) -> GfockStatus {
    guard(|| {
        let k = kernels::kernel(spec(space, p), z.into(), w.into(), terms)?;
        let v = GfockKernelValue {
            series: k.series_value.into(),
            closed: k.closed_value.into(),
            gap: k.abs_gap,
            terms_used: k.terms_used,
            last_term: k.last_term,
        };
        write(out, v, "out")
    })
}

/// Coefficients of `K(., w)` through degree `truncation`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_kernel_section(
    space: GfockSpace,
    p: u32,
    w: GfockComplex,
    truncation: usize,
    out: *mut *mut GfockCoeffSeq,
) -> GfockStatus {
    guard(|| {
        let s = kernels::kernel_section(spec(space, p), w.into(), truncation);
        write(out, Box::into_raw(Box::new(GfockCoeffSeq(s))), "out")
    })
}

/// Parses an operator expression and applies it to `f` resized to `truncation`.
///
/// # Safety
/// `expr` must be a nul-terminated string, `f` a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_op_apply(
    expr_src: *const c_char,
    f: *const GfockCoeffSeq,
    truncation: usize,
    out: *mut *mut GfockCoeffSeq,
) -> GfockStatus {
    guard(|| {
        let src = str_arg(expr_src, "expr")?;
        let f = deref(f, "f")?;
        let op = expr::parse(src)?;
        let g = op.apply(&f.0.resized(truncation));
        write(out, Box::into_raw(Box::new(GfockCoeffSeq(g))), "out")
    })
}

/// Gauss-Hermite rule with `nodes` points for integrals over `dx`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_quadrature_new(nodes: usize, out: *mut *mut GfockQuadrature) -> GfockStatus {
    guard(|| {
        let q = QuadratureRule::gauss_hermite(nodes)?;
        write(out, Box::into_raw(Box::new(GfockQuadrature(q))), "out")
    })
}

/// # Safety
/// `q` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfock_quadrature_free(q: *mut GfockQuadrature) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Transform at `z` of the function whose Hermite coefficients are `hermite`.
///
/// # Safety
/// `hermite` and `quad` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfock_transform(
    kind: GfockTransformKind,
    p: u32,
    hermite: *const GfockCoeffSeq,
    z: GfockComplex,
    truncation: usize,
    quad: *const GfockQuadrature,
    out: *mut GfockTransformValue,
) -> GfockStatus {
    guard(|| {
        let c = deref(hermite, "hermite")?;
        let q = deref(quad, "quad")?;
        let kind = match kind {
            GfockTransformKind::B => BargmannKind::B,
            GfockTransformKind::Bp => BargmannKind::Bp,
            GfockTransformKind::Sbp => BargmannKind::SBp,
        };
        let phi = L2Function::from_hermite(c.0.clone());
        let t = bargmann::transform(kind, p, &phi, z.into(), truncation, &q.0)?;
        let v = GfockTransformValue {
            value: t.value.into(),
            direct: t.direct.into(),
            route_gap: t.route_gap,
            tail_diag: t.tail_diag,
            tail_unresolved: t.tail_unresolved,
        };
        write(out, v, "out")
    })
}

/// `S(n, k)` as a decimal string.
///
/// # Safety
/// `out` must be writable; free the result with [`gfock_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gfock_stirling2(n: usize, k: usize, out: *mut *mut c_char) -> GfockStatus {
    guard(|| {
        let s = specfun::stirling2(n, k)?;
        write(out, out_string(s.to_string()), "out")
    })
}

/// Hankel certificate of `seq` (`hp:P`, `fp:P`, `factorial` or `hausdorff`)
/// for orders `0..=n_max`, as JSON.
///
/// # Safety
/// `seq` must be a nul-terminated string and `out` writable; free the result
/// with [`gfock_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gfock_moments_certificate(
    seq: *const c_char,
    n_max: usize,
    mode: GfockPsdMode,
    out: *mut *mut c_char,
) -> GfockStatus {
    guard(|| {
        let s = MomentSeq::builtin(str_arg(seq, "seq")?)?;
        let mode = match mode {
            GfockPsdMode::Exact => PsdMode::ExactMinors,
            GfockPsdMode::Float => PsdMode::FloatEig,
        };
        let cert = moments::stieltjes_certificate(&s, n_max, mode)?;
        let json = serde_json::to_string(&cert).map_err(Error::from)?;
        write(out, out_string(json), "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::OutOfRange("x".into())), GfockStatus::OutOfRange);
        assert_eq!(status_of(&Error::Parse("x".into())), GfockStatus::Parse);
        assert_eq!(
            status_of(&Error::WeightOverflow { n: 1, log_weight: 1.0 }),
            GfockStatus::Overflow
        );
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), GfockStatus::Panic);
        let msg = unsafe { CStr::from_ptr(gfock_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }
}
