//! C ABI for the isodirac library: opaque surface handles, status codes,
//! and flat buffers for the sector determinants. The header is generated by
//! cbindgen into `include/isodirac.h` at build time.
//!
//! Conventions: every function returns an [`IsodiracStatus`]; `Ok` is 0.
//! On failure a message is stored thread-locally and can be fetched with
//! [`isodirac_last_error_message`]. Strings returned by this library must
//! be released with [`isodirac_string_free`], surfaces with
//! [`isodirac_surface_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use isodirac::error::Error;
use isodirac::homology;
use isodirac::io::{self, NamedSurface};
use isodirac::surface::Nu;
use isodirac::{builders, dimer, dirac};

/// Opaque handle to a validated surface.
pub struct IsodiracSurface {
    inner: NamedSurface,
}

/// Status codes mirroring the library's error variants.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IsodiracStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    NonBipartite = 4,
    WhiteAngleSum = 5,
    EulerMismatch = 6,
    NonPositiveAngle = 7,
    Disconnected = 8,
    OddVertexCount = 9,
    ConditionsViolated = 10,
    TooLarge = 11,
    AngleOutOfRange = 12,
    ConstructionInvalid = 13,
    BufferTooSmall = 14,
    InternalError = 15,
}

/// Edge weight choice for matrix-valued calls.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IsodiracNu {
    Dual = 0,
    Unit = 1,
}

impl From<IsodiracNu> for Nu {
    fn from(v: IsodiracNu) -> Nu {
        match v {
            IsodiracNu::Dual => Nu::Dual,
            IsodiracNu::Unit => Nu::Unit,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> IsodiracStatus {
    match e {
        Error::NonBipartite(_) => IsodiracStatus::NonBipartite,
        Error::WhiteAngleSum { .. } => IsodiracStatus::WhiteAngleSum,
        Error::EulerMismatch { .. } => IsodiracStatus::EulerMismatch,
        Error::NonPositiveAngle { .. } => IsodiracStatus::NonPositiveAngle,
        Error::Disconnected => IsodiracStatus::Disconnected,
        Error::OddVertexCount { .. } => IsodiracStatus::OddVertexCount,
        Error::ConditionsViolated(_) => IsodiracStatus::ConditionsViolated,
        Error::TooLarge { .. } => IsodiracStatus::TooLarge,
        Error::AngleOutOfRange(_) => IsodiracStatus::AngleOutOfRange,
        Error::ConstructionInvalid(_) => IsodiracStatus::ConstructionInvalid,
        Error::InvalidSurface(_) | Error::Json(_) | Error::Io(_) => IsodiracStatus::InvalidInput,
        _ => IsodiracStatus::InternalError,
    }
}

fn fail(e: Error) -> IsodiracStatus {
    let code = status_of(&e);
    set_error(e.to_string());
    code
}

/// Message of the most recent error on this thread, or NULL. The string is
/// owned by the library and valid until the next failing call; do not free.
#[no_mangle]
pub extern "C" fn isodirac_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

fn put_surface(out: *mut *mut IsodiracSurface, named: NamedSurface) -> IsodiracStatus {
    if out.is_null() {
        return IsodiracStatus::NullPointer;
    }
    let boxed = Box::new(IsodiracSurface { inner: named });
    unsafe { *out = Box::into_raw(boxed) };
    IsodiracStatus::Ok
}

/// Parse a surface from its JSON description.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_surface_from_json(
    json: *const c_char,
    out: *mut *mut IsodiracSurface,
) -> IsodiracStatus {
    if json.is_null() {
        return IsodiracStatus::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        return IsodiracStatus::InvalidUtf8;
    };
    match io::from_json(text) {
        Ok(named) => put_surface(out, named),
        Err(e) => fail(e),
    }
}

/// rows × cols hexagons on a flat torus.
///
/// # Safety
/// `out` must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_build_honeycomb(
    rows: usize,
    cols: usize,
    out: *mut *mut IsodiracSurface,
) -> IsodiracStatus {
    match builders::honeycomb_torus(rows, cols) {
        Ok(s) => put_surface(out, NamedSurface::with_default_names(s)),
        Err(e) => fail(e),
    }
}

/// m rows of n rhombi on a torus; `shear` may be NULL or hold one angle per
/// row.
///
/// # Safety
/// `shear` must be NULL or point to `shear_len` doubles; `out` must be a
/// valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_build_rhombi_torus(
    m: usize,
    n: usize,
    shift: usize,
    shear: *const f64,
    shear_len: usize,
    out: *mut *mut IsodiracSurface,
) -> IsodiracStatus {
    let shear_slice: &[f64] =
        if shear.is_null() { &[] } else { std::slice::from_raw_parts(shear, shear_len) };
    match builders::rhombi_torus(m, n, shift, shear_slice) {
        Ok(s) => put_surface(out, NamedSurface::with_default_names(s)),
        Err(e) => fail(e),
    }
}

/// Square lattice on the genus-2 staircase octagon at refinement `n`.
///
/// # Safety
/// `out` must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_build_genus2(
    n: usize,
    out: *mut *mut IsodiracSurface,
) -> IsodiracStatus {
    match builders::genus2_octagon(n) {
        Ok(s) => put_surface(out, NamedSurface::with_default_names(s)),
        Err(e) => fail(e),
    }
}

/// Release a surface handle. NULL is ignored.
///
/// # Safety
/// `s` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isodirac_surface_free(s: *mut IsodiracSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Serialize a surface to JSON. Free the result with
/// [`isodirac_string_free`]; returns NULL on error.
///
/// # Safety
/// `s` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn isodirac_surface_to_json(s: *const IsodiracSurface) -> *mut c_char {
    if s.is_null() {
        return std::ptr::null_mut();
    }
    let text = io::to_json(&(*s).inner);
    CString::new(text).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `text` must originate from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn isodirac_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Vertex, edge, face, and genus counts.
///
/// # Safety
/// All pointers must be valid; `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_surface_counts(
    s: *const IsodiracSurface,
    vertices: *mut u64,
    edges: *mut u64,
    faces: *mut u64,
    genus: *mut u64,
) -> IsodiracStatus {
    if s.is_null() || vertices.is_null() || edges.is_null() || faces.is_null() || genus.is_null() {
        return IsodiracStatus::NullPointer;
    }
    let surface = &(*s).inner.surface;
    *vertices = surface.vertex_count() as u64;
    *edges = surface.edge_count() as u64;
    *faces = surface.face_count() as u64;
    *genus = surface.genus() as u64;
    IsodiracStatus::Ok
}

/// Kasteleyn conditions (i) and (ii).
///
/// # Safety
/// All pointers must be valid; `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_check_conditions(
    s: *const IsodiracSurface,
    condition_i: *mut bool,
    condition_ii: *mut bool,
) -> IsodiracStatus {
    if s.is_null() || condition_i.is_null() || condition_ii.is_null() {
        return IsodiracStatus::NullPointer;
    }
    let surface = &(*s).inner.surface;
    let basis = match homology::cycle_basis(surface) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    *condition_i = dirac::condition_i(surface);
    match dirac::condition_ii(surface, &basis) {
        Ok(v) => {
            *condition_ii = v;
            IsodiracStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of perfect matchings, by exhaustive enumeration. Graphs with more
/// than 60 vertices are refused.
///
/// # Safety
/// All pointers must be valid; `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_matching_count(
    s: *const IsodiracSurface,
    out: *mut u64,
) -> IsodiracStatus {
    if s.is_null() || out.is_null() {
        return IsodiracStatus::NullPointer;
    }
    let surface = &(*s).inner.surface;
    if surface.vertex_count() > 60 {
        return fail(Error::TooLarge { vertices: surface.vertex_count(), cap: 60 });
    }
    match dimer::enumerate_matchings(surface) {
        Ok(census) => {
            *out = census.len() as u64;
            IsodiracStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Partition function three ways: brute-force enumeration and the two
/// determinant sums (intersection-form and Arf-weighted signs). Graphs with
/// more than 60 vertices are refused (the brute-force side).
///
/// # Safety
/// All pointers must be valid; `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_partition_functions(
    s: *const IsodiracSurface,
    nu: IsodiracNu,
    z_brute: *mut f64,
    z_pfd: *mut f64,
    z_pfarf: *mut f64,
) -> IsodiracStatus {
    if s.is_null() || z_brute.is_null() || z_pfd.is_null() || z_pfarf.is_null() {
        return IsodiracStatus::NullPointer;
    }
    let surface = &(*s).inner.surface;
    if surface.vertex_count() > 60 {
        return fail(Error::TooLarge { vertices: surface.vertex_count(), cap: 60 });
    }
    let nu: Nu = nu.into();
    let result = (|| {
        let basis = homology::cycle_basis(surface)?;
        let census = dimer::enumerate_matchings(surface)?;
        let brute = dimer::partition_brute(surface, &census, nu);
        let pfd = dimer::partition_via_determinants(surface, &basis, nu)?;
        let pfarf = dimer::partition_via_arf(surface, &basis, nu)?;
        Ok::<_, Error>((brute, pfd, pfarf))
    })();
    match result {
        Ok((brute, pfd, pfarf)) => {
            *z_brute = brute;
            *z_pfd = pfd;
            *z_pfarf = pfarf;
            IsodiracStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of spin sectors, 2^{2g}.
///
/// # Safety
/// All pointers must be valid; `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_sector_count(
    s: *const IsodiracSurface,
    out: *mut usize,
) -> IsodiracStatus {
    if s.is_null() || out.is_null() {
        return IsodiracStatus::NullPointer;
    }
    *out = 1usize << (2 * (*s).inner.surface.genus());
    IsodiracStatus::Ok
}

/// Dirac determinants of all 2^{2g} sectors. `det_re`, `det_im`, and `arf`
/// must hold `len` entries with `len` at least the sector count; `arf[k]`
/// receives 0/1, or -1 when Arf invariants are undefined for the surface.
///
/// # Safety
/// The three buffers must be valid for `len` writes; `s` must be a live
/// handle.
#[no_mangle]
pub unsafe extern "C" fn isodirac_sector_determinants(
    s: *const IsodiracSurface,
    nu: IsodiracNu,
    det_re: *mut f64,
    det_im: *mut f64,
    arf: *mut i32,
    len: usize,
) -> IsodiracStatus {
    if s.is_null() || det_re.is_null() || det_im.is_null() || arf.is_null() {
        return IsodiracStatus::NullPointer;
    }
    let surface = &(*s).inner.surface;
    let want = 1usize << (2 * surface.genus());
    if len < want {
        set_error(format!("buffer holds {len} sectors, need {want}"));
        return IsodiracStatus::BufferTooSmall;
    }
    let result = (|| {
        let basis = homology::cycle_basis(surface)?;
        dimer::dirac_sectors(surface, &basis, nu.into())
    })();
    match result {
        Ok(sectors) => {
            for (k, r) in sectors.reports.iter().enumerate() {
                *det_re.add(k) = r.det.re;
                *det_im.add(k) = r.det.im;
                *arf.add(k) = r.arf.map_or(-1, i32::from);
            }
            IsodiracStatus::Ok
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    unsafe fn honeycomb(rows: usize, cols: usize) -> *mut IsodiracSurface {
        let mut out = std::ptr::null_mut();
        assert_eq!(isodirac_build_honeycomb(rows, cols, &mut out), IsodiracStatus::Ok);
        assert!(!out.is_null());
        out
    }

    #[test]
    fn counts_and_free() {
        unsafe {
            let s = honeycomb(3, 3);
            let (mut v, mut e, mut f, mut g) = (0u64, 0u64, 0u64, 0u64);
            assert_eq!(
                isodirac_surface_counts(s, &mut v, &mut e, &mut f, &mut g),
                IsodiracStatus::Ok
            );
            assert_eq!((v, e, f, g), (18, 27, 9, 1));
            isodirac_surface_free(s);
        }
    }

    #[test]
    fn json_round_trip() {
        unsafe {
            let s = honeycomb(2, 3);
            let text = isodirac_surface_to_json(s);
            assert!(!text.is_null());
            let mut back = std::ptr::null_mut();
            assert_eq!(isodirac_surface_from_json(text, &mut back), IsodiracStatus::Ok);
            let (mut v, mut e, mut f, mut g) = (0u64, 0u64, 0u64, 0u64);
            assert_eq!(
                isodirac_surface_counts(back, &mut v, &mut e, &mut f, &mut g),
                IsodiracStatus::Ok
            );
            assert_eq!((v, e), (12, 18));
            isodirac_string_free(text);
            isodirac_surface_free(s);
            isodirac_surface_free(back);
        }
    }

    #[test]
    fn partition_functions_match() {
        unsafe {
            let s = honeycomb(3, 3);
            let (mut zb, mut zd, mut za) = (0.0, 0.0, 0.0);
            assert_eq!(
                isodirac_partition_functions(s, IsodiracNu::Unit, &mut zb, &mut zd, &mut za),
                IsodiracStatus::Ok
            );
            assert!((zb - 42.0).abs() < 1e-9);
            assert!((zd - 42.0).abs() < 1e-9);
            assert!((za - 42.0).abs() < 1e-9);

            let mut count = 0u64;
            assert_eq!(isodirac_matching_count(s, &mut count), IsodiracStatus::Ok);
            assert_eq!(count, 42);
            isodirac_surface_free(s);
        }
    }

    #[test]
    fn sector_determinants() {
        unsafe {
            let s = honeycomb(3, 3);
            let mut n = 0usize;
            assert_eq!(isodirac_sector_count(s, &mut n), IsodiracStatus::Ok);
            assert_eq!(n, 4);
            let mut re = vec![0.0; n];
            let mut im = vec![0.0; n];
            let mut arf = vec![0i32; n];
            assert_eq!(
                isodirac_sector_determinants(
                    s,
                    IsodiracNu::Unit,
                    re.as_mut_ptr(),
                    im.as_mut_ptr(),
                    arf.as_mut_ptr(),
                    n
                ),
                IsodiracStatus::Ok
            );
            let mut mods: Vec<f64> =
                re.iter().zip(&im).map(|(a, b)| (a * a + b * b).sqrt()).collect();
            mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!(mods[0] < 1e-9);
            assert!((mods[3] - 28.0).abs() < 1e-9);
            let mut arfs = arf.clone();
            arfs.sort_unstable();
            assert_eq!(arfs, vec![0, 0, 0, 1]);

            assert_eq!(
                isodirac_sector_determinants(
                    s,
                    IsodiracNu::Unit,
                    re.as_mut_ptr(),
                    im.as_mut_ptr(),
                    arf.as_mut_ptr(),
                    2
                ),
                IsodiracStatus::BufferTooSmall
            );
            isodirac_surface_free(s);
        }
    }

    #[test]
    fn conditions_through_the_abi() {
        unsafe {
            let mut out = std::ptr::null_mut();
            assert_eq!(
                isodirac_build_rhombi_torus(6, 6, 1, std::ptr::null(), 0, &mut out),
                IsodiracStatus::Ok
            );
            let (mut ci, mut cii) = (false, true);
            assert_eq!(isodirac_check_conditions(out, &mut ci, &mut cii), IsodiracStatus::Ok);
            assert!(ci);
            assert!(!cii, "shifted torus fails condition (ii)");
            isodirac_surface_free(out);
        }
    }

    #[test]
    fn errors_carry_messages() {
        unsafe {
            let mut out = std::ptr::null_mut();
            let bad = CString::new("{\"delta\": -1}").unwrap();
            let code = isodirac_surface_from_json(bad.as_ptr(), &mut out);
            assert_ne!(code, IsodiracStatus::Ok);
            let msg = isodirac_last_error_message();
            assert!(!msg.is_null());

            assert_eq!(
                isodirac_build_rhombi_torus(2, 3, 0, std::ptr::null(), 0, &mut out),
                IsodiracStatus::ConstructionInvalid,
                "odd n is rejected"
            );

            let shear = [2.0, 0.0];
            assert_eq!(
                isodirac_build_rhombi_torus(2, 4, 0, shear.as_ptr(), 2, &mut out),
                IsodiracStatus::AngleOutOfRange
            );
        }
    }

    #[test]
    fn large_graphs_are_refused() {
        unsafe {
            let mut out = std::ptr::null_mut();
            assert_eq!(
                isodirac_build_rhombi_torus(6, 6, 0, std::ptr::null(), 0, &mut out),
                IsodiracStatus::Ok
            );
            let mut count = 0u64;
            assert_eq!(isodirac_matching_count(out, &mut count), IsodiracStatus::TooLarge);
            isodirac_surface_free(out);
        }
    }
}
