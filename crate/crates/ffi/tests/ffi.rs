use std::ffi::{CStr, CString};
use std::ptr;

use spbvp_ffi::*;

fn last_error() -> String {
    let p = spbvp_last_error_message();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn layer_mesh_round_trip() {
    let mut mesh = ptr::null_mut();
    let s = unsafe {
        spbvp_mesh_layer(
            SpbvpMeshFamily::Shishkin,
            1e-4,
            1.0,
            2.0,
            SpbvpSide::Left,
            16,
            &mut mesh,
        )
    };
    assert_eq!(s, SpbvpStatus::Ok);
    assert!(spbvp_last_error_message().is_null());
    let n = unsafe { spbvp_mesh_point_count(mesh) };
    assert_eq!(n, 17);

    let mut small = vec![0.0; 4];
    let s = unsafe { spbvp_mesh_copy_points(mesh, small.as_mut_ptr(), small.len()) };
    assert_eq!(s, SpbvpStatus::BufferTooSmall);
    assert!(last_error().contains("17"));

    let mut pts = vec![0.0; n];
    let s = unsafe { spbvp_mesh_copy_points(mesh, pts.as_mut_ptr(), n) };
    assert_eq!(s, SpbvpStatus::Ok);
    assert_eq!((pts[0], pts[16]), (0.0, 1.0));
    assert!(pts.windows(2).all(|w| w[1] > w[0]));
    unsafe { spbvp_mesh_free(mesh) };
}

#[test]
fn solve_builtin_on_problem_mesh() {
    let name = CString::new("weakly-coupled-cd").unwrap();
    let eps = [1e-6, 1e-3];
    let mut problem = ptr::null_mut();
    let s = unsafe { spbvp_problem_builtin(name.as_ptr(), eps.as_ptr(), 2, 0, &mut problem) };
    assert_eq!(s, SpbvpStatus::Ok);
    assert_eq!(unsafe { spbvp_problem_components(problem) }, 2);

    let mut mesh = ptr::null_mut();
    let s = unsafe {
        spbvp_mesh_for_problem(problem, SpbvpMeshFamily::SystemShishkin, 48, 2.0, &mut mesh)
    };
    assert_eq!(s, SpbvpStatus::Ok);

    let mut sol = ptr::null_mut();
    let s = unsafe { spbvp_solve(problem, mesh, SpbvpScheme::SimpleUpwind, &mut sol) };
    assert_eq!(s, SpbvpStatus::Ok);
    let (nodes, m) = unsafe {
        (
            spbvp_solution_node_count(sol),
            spbvp_solution_components(sol),
        )
    };
    assert_eq!((nodes, m), (49, 2));
    let mut u = vec![f64::NAN; nodes * m];
    let s = unsafe { spbvp_solution_copy_values(sol, u.as_mut_ptr(), u.len()) };
    assert_eq!(s, SpbvpStatus::Ok);
    assert!(u.iter().all(|v| v.is_finite()));

    unsafe {
        spbvp_solution_free(sol);
        spbvp_mesh_free(mesh);
        spbvp_problem_free(problem);
    }
}

#[test]
fn json_problem_and_solver_error() {
    let json = CString::new(
        r#"{"kind": "weakly-coupled", "eps": [1e-3], "b": [[-2]], "a": [[1]], "f": [1], "g0": [0], "g1": [1]}"#,
    )
    .unwrap();
    let mut problem = ptr::null_mut();
    assert_eq!(
        unsafe { spbvp_problem_from_json(json.as_ptr(), &mut problem) },
        SpbvpStatus::Ok
    );

    let pts = [0.0, 0.1, 0.5, 1.0];
    let mut mesh = ptr::null_mut();
    assert_eq!(
        unsafe { spbvp_mesh_from_points(pts.as_ptr(), 4, &mut mesh) },
        SpbvpStatus::Ok
    );

    // IAS needs a uniform mesh
    let mut sol = ptr::null_mut();
    let s = unsafe { spbvp_solve(problem, mesh, SpbvpScheme::Ias, &mut sol) };
    assert_eq!(s, SpbvpStatus::Solve);
    assert!(sol.is_null());
    assert!(!last_error().is_empty());
    spbvp_clear_error();
    assert!(spbvp_last_error_message().is_null());

    unsafe {
        spbvp_mesh_free(mesh);
        spbvp_problem_free(problem);
    }
}

#[test]
fn invalid_inputs_report_status_and_message() {
    let mut mesh = ptr::null_mut();
    let bad = [0.0, 0.6, 0.4, 1.0];
    assert_eq!(
        unsafe { spbvp_mesh_from_points(bad.as_ptr(), 4, &mut mesh) },
        SpbvpStatus::Mesh
    );
    assert!(mesh.is_null());

    let s = unsafe {
        spbvp_mesh_layer(
            SpbvpMeshFamily::Shishkin,
            -1.0,
            1.0,
            2.0,
            SpbvpSide::Left,
            16,
            &mut mesh,
        )
    };
    assert_eq!(s, SpbvpStatus::Mesh);

    let s = unsafe {
        spbvp_mesh_layer(
            SpbvpMeshFamily::SystemShishkin,
            1e-3,
            1.0,
            2.0,
            SpbvpSide::Left,
            16,
            &mut mesh,
        )
    };
    assert_eq!(s, SpbvpStatus::InvalidArgument);
    assert!(last_error().contains("spbvp_mesh_for_problem"));

    let name = CString::new("no-such-problem").unwrap();
    let mut problem = ptr::null_mut();
    let eps = [1e-3];
    let s = unsafe { spbvp_problem_builtin(name.as_ptr(), eps.as_ptr(), 1, 0, &mut problem) };
    assert_eq!(s, SpbvpStatus::InvalidArgument);

    let json = CString::new("{not json").unwrap();
    assert_eq!(
        unsafe { spbvp_problem_from_json(json.as_ptr(), &mut problem) },
        SpbvpStatus::Problem
    );
}

#[test]
fn null_pointers_are_rejected_and_frees_accept_null() {
    let s = unsafe { spbvp_problem_from_json(ptr::null(), ptr::null_mut()) };
    assert_eq!(s, SpbvpStatus::NullPointer);
    assert!(last_error().contains("null"));
    let s = unsafe {
        spbvp_solve(
            ptr::null(),
            ptr::null(),
            SpbvpScheme::Central,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, SpbvpStatus::NullPointer);
    unsafe {
        assert_eq!(spbvp_mesh_point_count(ptr::null()), 0);
        assert_eq!(spbvp_solution_node_count(ptr::null()), 0);
        assert!(spbvp_report_to_csv(ptr::null()).is_null());
        spbvp_mesh_free(ptr::null_mut());
        spbvp_problem_free(ptr::null_mut());
        spbvp_solution_free(ptr::null_mut());
        spbvp_report_free(ptr::null_mut());
        spbvp_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_thread_local() {
    let s = unsafe { spbvp_problem_from_json(ptr::null(), ptr::null_mut()) };
    assert_eq!(s, SpbvpStatus::NullPointer);
    let other = std::thread::spawn(|| spbvp_last_error_message().is_null())
        .join()
        .unwrap();
    assert!(other);
    assert!(!spbvp_last_error_message().is_null());
}

#[test]
fn study_report_strings() {
    let cfg = CString::new(
        r#"{"problem": "scalar-cd", "scheme": "simple-upwind", "mesh": "shishkin",
            "N_list": [32, 64], "eps_list": [1e-4, 1e-8]}"#,
    )
    .unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { spbvp_study_run(cfg.as_ptr(), &mut report) },
        SpbvpStatus::Ok
    );
    assert_eq!(unsafe { spbvp_report_failures(report) }, 0);

    let csv = unsafe { spbvp_report_to_csv(report) };
    let text = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().to_owned();
    assert!(text.starts_with("family,scheme,N,eps,"));
    assert_eq!(text.lines().count(), 5);

    let json = unsafe { spbvp_report_to_json(report) };
    let v: &str = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
    assert!(v.contains("\"records\""));
    unsafe {
        spbvp_string_free(csv);
        spbvp_string_free(json);
        spbvp_report_free(report);
    }

    let bad = CString::new(r#"{"problem": "scalar-cd", "mystery": 1}"#).unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { spbvp_study_run(bad.as_ptr(), &mut report) },
        SpbvpStatus::Study
    );
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(spbvp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/spbvp.h")).unwrap();
    for f in [
        "spbvp_last_error_message",
        "spbvp_clear_error",
        "spbvp_version",
        "spbvp_mesh_layer",
        "spbvp_mesh_for_problem",
        "spbvp_mesh_from_points",
        "spbvp_mesh_copy_points",
        "spbvp_mesh_free",
        "spbvp_problem_builtin",
        "spbvp_problem_from_json",
        "spbvp_problem_free",
        "spbvp_solve",
        "spbvp_solution_copy_values",
        "spbvp_solution_free",
        "spbvp_study_run",
        "spbvp_report_to_csv",
        "spbvp_report_to_json",
        "spbvp_report_free",
        "spbvp_string_free",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct SpbvpMesh SpbvpMesh;"));
    assert!(header.contains("SPBVP_STATUS_OK = 0"));
}
