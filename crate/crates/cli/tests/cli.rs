use std::path::PathBuf;
use std::process::{Command, Output};

use torelim_core::polyalg::LabeledScalarMatrix;
use torelim_core::{Fan, Rationals, ToricContext};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn torelim(job: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torelim"))
        .args(args)
        .arg("--job")
        .arg(fixture(job))
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .trim()
        .to_string()
}

fn h1() -> ToricContext {
    ToricContext::new(Fan::hirzebruch(1), &[0, 1]).unwrap()
}

#[test]
fn build_matrix_on_fixture_is_seven_by_seven() {
    let csv = stdout(&torelim("h1_example.toml", &["build-matrix", "(3,1)"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines.iter().all(|l| l.split(',').count() == 8));
    assert!(lines[0].ends_with("Sylv[1]"));
}

#[test]
fn run_uses_the_stored_command() {
    let stored = stdout(&torelim("h1_example.toml", &["run"]));
    let explicit = stdout(&torelim("h1_example.toml", &["build-matrix", "(3,1)"]));
    assert_eq!(stored, explicit);
}

#[test]
fn fitted_system_has_three_solutions() {
    let out = stdout(&torelim("fitted_three_points.toml", &["count-solutions", "(2,1)"]));
    assert_eq!(out, "3\n");
    let out = stdout(&torelim("h1_random.toml", &["count-solutions", "(2,1)"]));
    assert_eq!(out, "0\n");
}

#[test]
fn residue_matches_expanded_product() {
    let out = stdout(&torelim("h1_example.toml", &["residue", "(1,0)"]));
    assert_eq!(field(&out, "residue:"), field(&out, "expanded:"));

    let split = stdout(&torelim("h1_example.toml", &["residue", "(1,0)", "--p", "z1 - 3*x1", "--q", "z1^2*z2 + x1*x2"]));
    let whole = stdout(&torelim(
        "h1_example.toml",
        &["residue", "(0,0)", "--p", "1", "--q", "z1^3*z2 + x1*x2*z1 - 3*x1*z1^2*z2 - 3*x1^2*x2"],
    ));
    assert_eq!(field(&split, "residue:"), field(&whole, "residue:"));
}

#[test]
fn random_residue_is_seeded() {
    let args = ["residue", "(1,0)", "--p", "random", "--q", "random", "--seed", "7"];
    let a = stdout(&torelim("h1_random.toml", &args));
    let b = stdout(&torelim("h1_random.toml", &args));
    assert_eq!(a, b);
    assert_eq!(field(&a, "residue:"), field(&a, "expanded:"));
}

#[test]
fn output_is_deterministic() {
    for job in ["h1_example.toml", "h1_random.toml", "h1_mixed.toml"] {
        let a = torelim(job, &["build-matrix", "(3,1)", "--seed", "11"]);
        let b = torelim(job, &["build-matrix", "(3,1)", "--seed", "11"]);
        assert_eq!(stdout(&a), stdout(&b));
    }
}

#[test]
fn csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let out = torelim("h1_example.toml", &["build-matrix", "(3,1)", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let ctx = h1();
    let m = LabeledScalarMatrix::from_csv(&ctx, &Rationals, &text).unwrap();
    assert_eq!(m.shape(), (7, 7));
    assert_eq!(m.to_csv(&ctx, &Rationals).unwrap(), text);
}

#[test]
fn json_view_matches_csv() {
    let json = stdout(&torelim("h1_example.toml", &["build-matrix", "(3,1)", "--format", "json"]));
    let csv = stdout(&torelim("h1_example.toml", &["build-matrix", "(3,1)"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').skip(1).collect();
    let cols: Vec<&str> = v["cols"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(cols, header);
    assert_eq!(v["entries"].as_array().unwrap().len(), 7);
}

#[test]
fn prime_field_reduces_the_rational_resultant() {
    let q = stdout(&torelim("h1_example.toml", &["resultant", "(3,1)"]));
    let p = stdout(&torelim("h1_example.toml", &["resultant", "(3,1)", "--field", "p:2147483647"]));
    let (num, den) = q.trim().split_once('/').unwrap();
    let modulus: i128 = 2_147_483_647;
    let reduce = |s: &str| s.parse::<i128>().unwrap().rem_euclid(modulus);
    let lhs = reduce(p.trim()) * reduce(den) % modulus;
    assert_eq!(lhs, reduce(num));
}

#[test]
fn reports_and_listings() {
    let out = stdout(&torelim("h1_example.toml", &["monomials", "(2,1)"]));
    assert_eq!(out.lines().next(), Some("count: 5"));
    assert_eq!(out.lines().nth(1), Some("z1^2*z2"));

    let out = stdout(&torelim("h1_example.toml", &["degree-valid", "(3,1)"]));
    assert_eq!(field(&out, "admitted:"), "true");
    assert_eq!(field(&out, "certificate:"), "delta-minus-nef");
    let out = stdout(&torelim("h1_example.toml", &["degree-valid", "(3,2)"]));
    assert_eq!(field(&out, "admitted:"), "false");

    let out = stdout(&torelim("h1_example.toml", &["decompose", "z1", "--poly", "0"]));
    assert!(out.starts_with("F0 = z1^2*z2 * (3)"));
    let out = stdout(&torelim("h1_example.toml", &["sylvester", "1"]));
    assert!(out.starts_with("Sylv[1] = "));
}

#[test]
fn six_ray_fan_has_no_positive_cone() {
    let out = stdout(&torelim("six_rays.toml", &["check-positivity"]));
    assert_eq!(field(&out, "positivity:"), "false");
    assert_eq!(field(&out, "positive cones:"), "[]");
    let out = stdout(&torelim("h1_example.toml", &["check-positivity"]));
    assert_eq!(field(&out, "positivity:"), "true");
}

#[test]
fn errors_carry_module_exit_codes() {
    let out = torelim("h1_example.toml", &["resultant", "(3,2)"]);
    assert_eq!(out.status.code(), Some(7));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[elimination]"));

    let out = torelim("h1_example.toml", &["monomials", "(1,2,3)"]);
    assert_eq!(out.status.code(), Some(4));

    let out = torelim("h1_example.toml", &["residue", "(1,0)", "--p", "z1*z2", "--q", "random"]);
    assert_eq!(out.status.code(), Some(5));

    let out = torelim("h1_example.toml", &["build-matrix", "(3,1)", "--field", "p:91"]);
    assert_eq!(out.status.code(), Some(5));

    let out = torelim("no_such_job.toml", &["check-positivity"]);
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn bad_job_lists_every_problem() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "command = \"frobnicate\"\nfield = \"r\"\n[fan]\nrays = [[1, 0], [0, 1], [-1, -1], [0, -1]]\n\
         max_cones = [[0, 1], [1, 2], [2, 3], [3, 0]]\n[[polynomials]]\ndegree = [1, 0]\n\
         terms = [{ monomial = \"z1\", coeff = \"1\" }, { monomial = \"x2\", coeff = \"2\" }]\n",
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_torelim"))
        .args(["check-positivity", "--job"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(9));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("frobnicate"));
    assert!(err.contains("field"));
    assert!(err.contains("x2"));
}
