use std::path::Path;
use std::process::{Command, Output};

use sphint::geometry::{Point2, Triangle};
use sphint::mesh_io::{save_mesh, TriangleMesh};
use sphint::triangle_integrator::TriangleIntegrator;

fn sphint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphint")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows after the header, split on commas.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

fn small_triangle(dir: &Path) -> String {
    let mesh = TriangleMesh::new(
        vec![Point2::new(-0.3, -0.2), Point2::new(0.4, -0.1), Point2::new(0.0, 0.5)],
        vec![[0, 1, 2]],
    )
    .unwrap()
    .with_vertex_channel("f", vec![1.0, -0.5, 2.0])
    .unwrap();
    let path = dir.join("tri.mesh");
    save_mesh(&mesh, &path).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn eval_grid_on_a_small_triangle_is_smooth() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = small_triangle(dir.path());
    let o = sphint(&["eval-grid", "--mesh", &mesh, "--channel", "f", "--h", "0.5", "--grid", "-1,1,-1,1,64,64"]);
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header, ["x", "y", "value", "grad_x", "grad_y", "imag_residual"]);
    assert_eq!(rows.len(), 64 * 64);
    let imag = column(&header, &rows, "imag_residual");
    assert!(imag.iter().all(|&r| r < 1e-10));
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(summary.contains("max imag_residual"), "{summary}");
    // neighbouring grid values differ by at most the gradient bound times the spacing
    let v = column(&header, &rows, "value");
    let gx = column(&header, &rows, "grad_x");
    let gmax = gx.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let dx = 2.0 / 63.0;
    for j in 0..64 {
        for i in 0..63 {
            let k = j * 64 + i;
            assert!((v[k + 1] - v[k]).abs() <= 1.01 * gmax * dx);
        }
    }
}

#[test]
fn eval_grid_single_point_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = small_triangle(dir.path());
    let o = sphint(&["eval-grid", "--mesh", &mesh, "--channel", "f", "--h", "0.7", "--grid", "0.1,5,0.05,5,1,1"]);
    let (header, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 1);
    let t = Triangle::new(Point2::new(-0.3, -0.2), Point2::new(0.4, -0.1), Point2::new(0.0, 0.5)).with_values([1.0, -0.5, 2.0]);
    let r = TriangleIntegrator::<f64>::wendland4().integrate_triangle(Point2::new(0.1, 0.05), 0.7, &t).unwrap();
    assert_eq!(column(&header, &rows, "value")[0], r.value);
    assert_eq!(column(&header, &rows, "grad_x")[0], r.gradient[0]);
    assert_eq!(column(&header, &rows, "grad_y")[0], r.gradient[1]);
}

#[test]
fn eval_grid_on_empty_mesh_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.mesh");
    save_mesh(&TriangleMesh::new(vec![], vec![]).unwrap(), &path).unwrap();
    let o = sphint(&["eval-grid", "--mesh", path.to_str().unwrap(), "--h", "1", "--grid", "-1,1,-1,1,4,3"]);
    let (header, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 12);
    for name in ["value", "grad_x", "grad_y", "imag_residual"] {
        assert!(column(&header, &rows, name).iter().all(|&v| v == 0.0));
    }
}

#[test]
fn eval_grid_json_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = small_triangle(dir.path());
    let args = ["eval-grid", "--mesh", &mesh, "--channel", "f", "--h", "0.5", "--grid", "-1,1,-1,1,9,7", "--variant", "difference", "--json"];
    let a = stdout(&sphint(&args));
    let b = stdout(&sphint(&args));
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["summary"]["points"], 63);
    assert_eq!(doc["points"].as_array().unwrap().len(), 63);
    assert!(doc["points"][0]["grad_y"].is_f64());
}

#[test]
fn eval_grid_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = small_triangle(dir.path());
    let out = dir.path().join("grid.csv");
    let o = sphint(&["eval-grid", "--mesh", &mesh, "--h", "0.5", "--grid", "0,1,0,1,2,2", "-o", out.to_str().unwrap()]);
    assert!(stdout(&o).is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap().lines().count(), 5);
}

#[test]
fn exit_codes_follow_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = small_triangle(dir.path());
    let code = |args: &[&str]| sphint(args).status.code().unwrap();
    // usage
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["eval-grid", "--mesh", &mesh, "--h", "1", "--grid", "0,1,0,1"]), 1);
    assert_eq!(code(&["eval-grid", "--mesh", &mesh, "--h", "-1", "--grid", "0,1,0,1,1,1"]), 1);
    assert_eq!(code(&["convergence", "--case", "constant", "--min-order", "1"]), 1);
    assert_eq!(code(&["convergence", "--case", "constant", "--nt", "12"]), 1);
    assert_eq!(code(&["simulate", "--scene", "sideways", "--output", dir.path().to_str().unwrap()]), 1);
    // data
    assert_eq!(code(&["eval-grid", "--mesh", "/no/such/file", "--h", "1", "--grid", "0,1,0,1,1,1"]), 2);
    assert_eq!(code(&["eval-grid", "--mesh", &mesh, "--channel", "g", "--h", "1", "--grid", "0,1,0,1,1,1"]), 2);
    let bad = dir.path().join("bad.mesh");
    std::fs::write(&bad, "not a mesh\n").unwrap();
    assert_eq!(code(&["eval-grid", "--mesh", bad.to_str().unwrap(), "--h", "1", "--grid", "0,1,0,1,1,1"]), 2);
    // help is not an error
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn convergence_constant_case_reproduces_the_gap() {
    let o = sphint(&["convergence", "--case", "constant", "--nt", "8"]);
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header, ["method", "order", "points_per_triangle", "l2_error_value", "l2_error_gradient"]);
    assert_eq!(rows[0][0], "analytic");
    assert_eq!(rows.len(), 1 + 49);
    let v = column(&header, &rows, "l2_error_value");
    let g = column(&header, &rows, "l2_error_gradient");
    assert!(v[0] <= 5e-12 && g[0] <= 5e-12, "{} {}", v[0], g[0]);
    let plateau = v[1..].iter().copied().fold(f64::INFINITY, f64::min);
    assert!(plateau >= 1e-11);
    assert!(v[1] > 1e3 * plateau, "errors do not decrease with order");
}

#[test]
fn convergence_single_order_gives_one_row() {
    let o = sphint(&["convergence", "--case", "linear", "--nt", "96", "--min-order", "7", "--max-order", "7", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["order"], 7);
    assert_eq!(doc["summary"]["triangles"], 96);
}

#[test]
fn convergence_small_elements_improve_the_plateau() {
    let plateau = |nt: &str| {
        let o = sphint(&["convergence", "--case", "linear", "--nt", nt, "--json"]);
        let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        doc["summary"]["plateau_value"].as_f64().unwrap()
    };
    assert!(plateau("8") / plateau("96") >= 1e3);
}

#[test]
fn simulate_smoke_writes_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = sphint(&["simulate", "--scene", "ortho_nodrop", "--steps", "10", "--output", out.to_str().unwrap(), "--every", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["snapshot_000000.csv", "snapshot_000005.csv", "snapshot_000010.csv", "energy.csv", "summary.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let (header, rows) = table(&std::fs::read_to_string(out.join("summary.csv")).unwrap());
    assert_eq!(column(&header, &rows, "penetrations")[0], 0.0);
    assert_eq!(column(&header, &rows, "steps")[0], 10.0);
    let (header, rows) = table(&std::fs::read_to_string(out.join("snapshot_000000.csv")).unwrap());
    assert_eq!(header, ["x", "y", "vx", "vy", "density", "pressure"]);
    assert!(column(&header, &rows, "density").iter().all(|&r| r > 0.0));
    let (_, rows) = table(&std::fs::read_to_string(out.join("energy.csv")).unwrap());
    assert_eq!(rows.len(), 10);
}

#[test]
fn simulate_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = sphint(&["simulate", "--scene", "acute_drop", "--steps", "3", "--output", out.to_str().unwrap(), "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["penetrations"], 0);
    let snap: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("snapshot_000003.json")).unwrap()).unwrap();
    assert_eq!(snap["step"], 3);
    assert_eq!(snap["particles"].as_array().unwrap().len(), summary["particles"].as_u64().unwrap() as usize);
}

const CUSTOM_PARAMS: &str = r#"
[solver]
spacing = 0.04
support_radius = 0.08
rest_density = 1000.0
boundary_rest_density = 1000.0
viscosity = 0.01
gravity = [0.0, -9.81]
dt = DT
density_tolerance = 1e-4
divergence_tolerance = 1e-4
max_iterations = 200
wall_pressure = "zero"

[scenes.tray]
mesh = "tray.mesh"
fluid = [-0.2, 0.2, 0.0, 0.2]
"#;

fn custom_scene(dir: &Path, dt: &str) -> String {
    let mesh = TriangleMesh::new(
        vec![Point2::new(-1.0, -0.2), Point2::new(1.0, -0.2), Point2::new(1.0, 0.0), Point2::new(-1.0, 0.0)],
        vec![[0, 1, 2], [0, 2, 3]],
    )
    .unwrap();
    save_mesh(&mesh, dir.join("tray.mesh")).unwrap();
    let p = dir.join("params.toml");
    std::fs::write(&p, CUSTOM_PARAMS.replace("DT", dt)).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn simulate_custom_parameter_file() {
    let dir = tempfile::tempdir().unwrap();
    let params = custom_scene(dir.path(), "0.002");
    let out = dir.path().join("run");
    let o = sphint(&["simulate", "--params", &params, "--scene", "tray", "--steps", "4", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("snapshot_000004.csv").exists());

    let broken = dir.path().join("broken.toml");
    std::fs::write(&broken, "[solver]\nspacing = 'wide'\n").unwrap();
    let o = sphint(&["simulate", "--params", broken.to_str().unwrap(), "--scene", "tray", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_numerical_failure_leaves_a_diagnostic_snapshot() {
    // a 1 s step lets gravity outrun the CFL bound after the first step
    let dir = tempfile::tempdir().unwrap();
    let params = custom_scene(dir.path(), "1.0");
    let out = dir.path().join("run");
    let o = sphint(&["simulate", "--params", &params, "--scene", "tray", "--steps", "5", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("diagnostic.csv").exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("CFL"));
}
