//! C ABI over the `spbvp` crate.
//!
//! Every fallible call returns an [`SpbvpStatus`]; on failure the message is
//! kept per thread and read with [`spbvp_last_error_message`]. Objects are
//! returned through out-pointers as opaque handles and released with the
//! matching `*_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spbvp::discretize::{solve_problem, DiscreteSolution, Scheme};
use spbvp::harness::{build_mesh, sweep, ConvergenceReport, MeshFamily, StudyConfig};
use spbvp::mesh::{
    bakhvalov_shishkin, bakhvalov_type, shishkin, LayerSide, LayerSpec, Mesh1D, MeshLabel,
};
use spbvp::problems::{BuiltinName, ProblemSpec, SystemProblem};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpbvpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Mesh = 3,
    Problem = 4,
    Solve = 5,
    Study = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpbvpSide {
    Left = 0,
    Right = 1,
    Both = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpbvpMeshFamily {
    Uniform = 0,
    Shishkin = 1,
    BakhvalovShishkin = 2,
    BakhvalovType = 3,
    SystemShishkin = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpbvpScheme {
    SimpleUpwind = 0,
    MidpointUpwind = 1,
    Central = 2,
    Ias = 3,
    GalerkinFem = 4,
}

/// Opaque mesh handle.
pub struct SpbvpMesh(Mesh1D);
/// Opaque problem handle.
pub struct SpbvpProblem(SystemProblem);
/// Opaque nodal solution handle.
pub struct SpbvpSolution(DiscreteSolution);
/// Opaque convergence report handle.
pub struct SpbvpReport(ConvergenceReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SpbvpStatus, String);

fn fail<E: std::fmt::Display>(status: SpbvpStatus) -> impl Fn(E) -> Failure {
    move |e| Failure(status, e.to_string())
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Clears the last error, runs `f`, records its failure and converts panics.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SpbvpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpbvpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            SpbvpStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(SpbvpStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SpbvpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn read_slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, cap: usize) -> Result<(), Failure> {
    if cap < src.len() {
        return Err(Failure(
            SpbvpStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", src.len()),
        ));
    }
    non_null(buf, "buffer")?;
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

impl From<SpbvpSide> for LayerSide {
    fn from(s: SpbvpSide) -> Self {
        match s {
            SpbvpSide::Left => LayerSide::Left,
            SpbvpSide::Right => LayerSide::Right,
            SpbvpSide::Both => LayerSide::Both,
        }
    }
}

impl From<SpbvpMeshFamily> for MeshFamily {
    fn from(f: SpbvpMeshFamily) -> Self {
        match f {
            SpbvpMeshFamily::Uniform => MeshFamily::Uniform,
            SpbvpMeshFamily::Shishkin => MeshFamily::Shishkin,
            SpbvpMeshFamily::BakhvalovShishkin => MeshFamily::BakhvalovShishkin,
            SpbvpMeshFamily::BakhvalovType => MeshFamily::BakhvalovType,
            SpbvpMeshFamily::SystemShishkin => MeshFamily::SystemShishkin,
        }
    }
}

impl From<SpbvpScheme> for Scheme {
    fn from(s: SpbvpScheme) -> Self {
        match s {
            SpbvpScheme::SimpleUpwind => Scheme::SimpleUpwind,
            SpbvpScheme::MidpointUpwind => Scheme::MidpointUpwind,
            SpbvpScheme::Central => Scheme::Central,
            SpbvpScheme::Ias => Scheme::Ias,
            SpbvpScheme::GalerkinFem => Scheme::GalerkinFem,
        }
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next `spbvp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn spbvp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn spbvp_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spbvp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Single-layer mesh of a fixed-N family. `SystemShishkin` is not accepted
/// here; use [`spbvp_mesh_for_problem`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn spbvp_mesh_layer(
    family: SpbvpMeshFamily,
    eps: f64,
    gamma: f64,
    mu: f64,
    side: SpbvpSide,
    n: usize,
    out: *mut *mut SpbvpMesh,
) -> SpbvpStatus {
    guard(|| {
        non_null(out, "out")?;
        let spec = || LayerSpec::new(eps, gamma, mu, side.into()).map_err(fail(SpbvpStatus::Mesh));
        let mesh = match family {
            SpbvpMeshFamily::Uniform => Mesh1D::uniform(n),
            SpbvpMeshFamily::Shishkin => shishkin(&spec()?, n),
            SpbvpMeshFamily::BakhvalovShishkin => bakhvalov_shishkin(&spec()?, n),
            SpbvpMeshFamily::BakhvalovType => bakhvalov_type(&spec()?, n),
            SpbvpMeshFamily::SystemShishkin => {
                return Err(Failure(
                    SpbvpStatus::InvalidArgument,
                    "system-shishkin needs a problem; use spbvp_mesh_for_problem".into(),
                ))
            }
        }
        .map_err(fail(SpbvpStatus::Mesh))?;
        put(out, SpbvpMesh(mesh));
        Ok(())
    })
}

/// Mesh of `family` adapted to the layers of `problem`.
///
/// # Safety
/// `problem` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn spbvp_mesh_for_problem(
    problem: *const SpbvpProblem,
    family: SpbvpMeshFamily,
    n: usize,
    mu: f64,
    out: *mut *mut SpbvpMesh,
) -> SpbvpStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(out, "out")?;
        let mesh =
            build_mesh(&(*problem).0, family.into(), n, mu).map_err(fail(SpbvpStatus::Mesh))?;
        put(out, SpbvpMesh(mesh));
        Ok(())
    })
}

/// Mesh from explicit nodes `0 = x_0 < … < x_N = 1`.
///
/// # Safety
/// `points` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spbvp_mesh_from_points(
    points: *const f64,
    len: usize,
    out: *mut *mut SpbvpMesh,
) -> SpbvpStatus {
    guard(|| {
        non_null(out, "out")?;
        let pts = read_slice(points, len, "points")?.to_vec();
        let mesh = Mesh1D::new(pts, MeshLabel::new("custom", LayerSide::Left))
            .map_err(fail(SpbvpStatus::Mesh))?;
        put(out, SpbvpMesh(mesh));
        Ok(())
    })
}

/// Number of nodes (N + 1); 0 for a null handle.
///
/// # Safety
/// `mesh` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spbvp_mesh_point_count(mesh: *const SpbvpMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.0.points().len())
}

/// Copies the nodes into `buf`, which must hold at least
/// [`spbvp_mesh_point_count`] values.
///
/// # Safety
/// `mesh` must be a live handle; `buf` must be writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn spbvp_mesh_copy_points(
    mesh: *const SpbvpMesh,
    buf: *mut f64,
    cap: usize,
) -> SpbvpStatus {
    guard(|| {
        non_null(mesh, "mesh")?;
        copy_out((*mesh).0.points(), buf, cap)
    })
}

/// # Safety
/// `mesh` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spbvp_mesh_free(mesh: *mut SpbvpMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// Built-in problem by name (`scalar-cd`, `strongly-coupled`,
/// `reaction-diffusion`, `weakly-coupled-cd`). `m = 0` keeps the default
/// system size.
///
/// # Safety
/// `name` must be a NUL-terminated string, `eps` readable for `n_eps`
/// doubles and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn spbvp_problem_builtin(
    name: *const c_char,
    eps: *const f64,
    n_eps: usize,
    m: usize,
    out: *mut *mut SpbvpProblem,
) -> SpbvpStatus {
    guard(|| {
        non_null(out, "out")?;
        let builtin: BuiltinName = read_str(name, "name")?
            .parse()
            .map_err(fail(SpbvpStatus::InvalidArgument))?;
        let spec = ProblemSpec::Builtin {
            builtin,
            eps: read_slice(eps, n_eps, "eps")?.to_vec(),
            m: (m > 0).then_some(m),
        };
        let p = spec.build().map_err(fail(SpbvpStatus::Problem))?;
        put(out, SpbvpProblem(p));
        Ok(())
    })
}

/// Problem from a JSON definition, built-in or custom.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn spbvp_problem_from_json(
    json: *const c_char,
    out: *mut *mut SpbvpProblem,
) -> SpbvpStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = ProblemSpec::from_json(read_str(json, "json")?)
            .and_then(|s| s.build())
            .map_err(fail(SpbvpStatus::Problem))?;
        put(out, SpbvpProblem(p));
        Ok(())
    })
}

/// Number of components M; 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spbvp_problem_components(problem: *const SpbvpProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.0.m())
}

/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spbvp_problem_free(problem: *mut SpbvpProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Assembles `scheme` for `problem` on `mesh` and solves.
///
/// # Safety
/// `problem` and `mesh` must be live handles; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn spbvp_solve(
    problem: *const SpbvpProblem,
    mesh: *const SpbvpMesh,
    scheme: SpbvpScheme,
    out: *mut *mut SpbvpSolution,
) -> SpbvpStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(mesh, "mesh")?;
        non_null(out, "out")?;
        let sol = solve_problem(&(*problem).0, &(*mesh).0, scheme.into())
            .map_err(fail(SpbvpStatus::Solve))?;
        put(out, SpbvpSolution(sol));
        Ok(())
    })
}

/// Number of mesh nodes of the solution; 0 for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spbvp_solution_node_count(solution: *const SpbvpSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.0.mesh().points().len())
}

/// Number of components per node; 0 for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spbvp_solution_components(solution: *const SpbvpSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.0.m())
}

/// Copies the node-major values `u[i*M + k]` into `buf`.
///
/// # Safety
/// `solution` must be a live handle; `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn spbvp_solution_copy_values(
    solution: *const SpbvpSolution,
    buf: *mut f64,
    cap: usize,
) -> SpbvpStatus {
    guard(|| {
        non_null(solution, "solution")?;
        copy_out((*solution).0.values(), buf, cap)
    })
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spbvp_solution_free(solution: *mut SpbvpSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Runs a convergence study from a JSON config. Cells that fail are
/// recorded in the report, see [`spbvp_report_failures`].
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn spbvp_study_run(
    config_json: *const c_char,
    out: *mut *mut SpbvpReport,
) -> SpbvpStatus {
    guard(|| {
        non_null(out, "out")?;
        let cfg = StudyConfig::from_json(read_str(config_json, "config")?)
            .map_err(fail(SpbvpStatus::Study))?;
        let report = sweep(&cfg).map_err(fail(SpbvpStatus::Study))?;
        put(out, SpbvpReport(report));
        Ok(())
    })
}

/// Number of failed (N, ε) cells; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spbvp_report_failures(report: *const SpbvpReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.failures)
}

/// Report as CSV. Free the result with [`spbvp_string_free`]. NULL for a
/// null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spbvp_report_to_csv(report: *const SpbvpReport) -> *mut c_char {
    report
        .as_ref()
        .map_or(ptr::null_mut(), |r| into_c_string(r.0.to_csv()))
}

/// Report as JSON. Free the result with [`spbvp_string_free`].
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spbvp_report_to_json(report: *const SpbvpReport) -> *mut c_char {
    report
        .as_ref()
        .map_or(ptr::null_mut(), |r| into_c_string(r.0.to_json()))
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spbvp_report_free(report: *mut SpbvpReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from `spbvp_report_to_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spbvp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
