use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use freext_cli::verify::{self, Hooks};
use tempfile::TempDir;

const GF9: &str = "\
field gf 3 2
dim 3
H 0 0 1
H 1 -1 0
H 1 -1 1
H 1 0 0
H 1 0 1
H 1 0 2
H 1 0 t
H 0 1 0
H 0 1 1
H 0 1 2
H 0 1 t
";

fn freext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freext")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `x^2 y^4 (x-y)^4` extended by `z`, with `x` at {0,1}, `y` at {0,..,3}
/// and `x-y` at {-3,..,0}.
fn staircase() -> String {
    let mut t = String::from("dim 3\nH 0 0 1\n");
    for a in 0..2 {
        t += &format!("H 1 0 {}\n", -a);
    }
    for b in 0..4 {
        t += &format!("H 0 1 {}\n", -b);
    }
    for c in -3..=0 {
        t += &format!("H 1 -1 {}\n", -c);
    }
    t
}

#[test]
fn exponents_of_a_b2_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b2_2413.arr", "dim 2\nH 1 0 m 2\nH 0 1 m 4\nH 1 -1 m 1\nH 1 1 m 4\n");
    let o = freext(&["exponents", s(&f)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "(5, 6)");
    assert_eq!(stdout(&freext(&["exponents", "--b2", "2,4,1,4"])).trim(), "(5, 6)");
}

#[test]
fn gf9_file_is_free() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "gf9_example.arr", GF9);
    let o = freext(&["freecheck", s(&f), "--pivot", "z"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "free, exp (1,5,5), b2 = 25");
}

#[test]
fn chi_of_the_empty_arrangement() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "empty3.arr", "dim 3\n");
    assert_eq!(stdout(&freext(&["chi", s(&f)])).trim(), "t^3");
}

#[test]
fn domain_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.arr", "dim 3\nH 0 0 1\nH 1 0\n");
    let o = freext(&["chi", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(freext(&["chi", s(&dir.path().join("missing.arr"))]).status.code(), Some(1));
    assert_eq!(freext(&["exponents", "--b2", "1,2,3"]).status.code(), Some(1));
    assert_eq!(freext(&["nonsense"]).status.code(), Some(1));
    assert_eq!(freext(&["peak", "2,4,2,4"]).status.code(), Some(1));
}

#[test]
fn json_matches_text() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "gf9.arr", GF9);
    let j: serde_json::Value = serde_json::from_slice(&freext(&["freecheck", s(&f), "--json"]).stdout).unwrap();
    assert_eq!(j["b2"], 25);
    assert_eq!(j["exponents"], serde_json::json!([1, 5, 5]));
    assert_eq!(j["free"], true);

    let j: serde_json::Value = serde_json::from_slice(&freext(&["exponents", "--b2", "3,5,2,2", "--json"]).stdout).unwrap();
    assert_eq!(j["exponents"], serde_json::json!([5, 7]));
    assert_eq!(stdout(&freext(&["exponents", "--b2", "3,5,2,2"])).trim(), "(5, 7)");

    let chi = stdout(&freext(&["chi", "--b3", "1,1,1,1,1,1,1,1,1"]));
    let j: serde_json::Value = serde_json::from_slice(&freext(&["chi", "--b3", "1,1,1,1,1,1,1,1,1", "--json"]).stdout).unwrap();
    assert_eq!(j["coefficients"], serde_json::json!([-15, 23, -9, 1]));
    assert_eq!(j["text"].as_str().unwrap(), chi.trim());
}

#[test]
fn field_override_rereads_coefficients() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b2.arr", "dim 2\nH 1 0\nH 0 1\nH 1 -1\nH 1 1\n");
    let j: serde_json::Value =
        serde_json::from_slice(&freext(&["ziegler", "--b3", "1,1,1,1,1,1,1,1,1", "--json"]).stdout).unwrap();
    assert_eq!(j["dim"], 2);
    // in characteristic 2, x - y and x + y coincide
    let o = freext(&["--field", "gf:2", "lattice", s(&f), "--json"]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["hyperplanes"].as_array().unwrap().len(), 3);
}

#[test]
fn yext_round_trips_through_a_file() {
    let dir = TempDir::new().unwrap();
    let o = freext(&["yext", "--b2", "3,5,2,2", "--report"]);
    let text = stdout(&o);
    assert!(text.contains("# not free, LMP = 49, VGMP = 47, slack = 2"));
    let f = write(&dir, "yext.arr", &text);
    assert_eq!(stdout(&freext(&["freecheck", s(&f)])).trim(), "not free, LMP = 49, VGMP = 47, slack = 2");
}

#[test]
fn bounds_and_search() {
    let b = stdout(&freext(&["bounds", "--b2", "2,4,1,4"]));
    assert_eq!(b.lines().filter(|l| l.ends_with("5 <= |E^H| <= 6")).count(), 4);
    let r = stdout(&freext(&["search", "--b2", "2,3,1,3", "--limit", "1"]));
    assert!(r.contains("free extensions found: 3"), "{r}");
    assert!(r.contains("y: {0, 1/2, 1}; x - y: {0}; x: {0, 1}; x + y: {0, 1, 2}"), "{r}");
}

#[test]
fn peak_and_fwy() {
    assert_eq!(stdout(&freext(&["peak", "2,2,3,1"])).trim(), "peak point, exp (3, 5)");
    assert_eq!(stdout(&freext(&["peak", "1,3,1,3"])).trim(), "not a peak point, exp (4, 4)");
    assert!(stdout(&freext(&["fwy", "2,3,4"])).starts_with("(a, b, c) = (2, 1, 0), degrees (4, 5)"));
}

#[test]
fn vertex_reports_the_witness() {
    let t = stdout(&freext(&["vertex", "--b3", "2,4,1,4,1,1,1,1,1"]));
    assert!(t.contains("free vertex condition holds, exp [5, 5, 6]"), "{t}");
    assert!(t.contains("no free extension"), "{t}");
    let t = stdout(&freext(&["vertex", "--b3", "2,4,1,4,2,1,1,1,1"]));
    assert!(t.contains("free vertex condition fails"), "{t}");
    let t = stdout(&freext(&["vertex", "--b3", "2,5,1,5,1,1,1,1,1", "--step", "1,0,0", "--step", "0,1,0;1,-1,0;1,1,0"]));
    assert!(t.contains("exp [5, 6, 7]"), "{t}");
}

fn lines(svg: &str) -> usize {
    svg.matches("<line ").count()
}

#[test]
fn decone_yoshinaga_extension() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "yext.arr", &stdout(&freext(&["yext", "--b2", "3,5,2,2"])));
    let svg = stdout(&freext(&["decone-svg", s(&f), "--viewport", "-3,-3,3,3"]));
    assert_eq!(lines(&svg), 12);
    assert!(svg.contains("12 affine lines"));
    assert_eq!(svg, stdout(&freext(&["decone-svg", s(&f), "--viewport", "-3,-3,3,3"])));

    let out = dir.path().join("pic.svg");
    assert!(freext(&["decone-svg", s(&f), "-o", s(&out)]).status.success());
    let a = std::fs::read_to_string(&out).unwrap();
    assert!(freext(&["decone-svg", s(&f), "-o", s(&out)]).status.success());
    assert_eq!(a, std::fs::read_to_string(&out).unwrap());
    assert_eq!(lines(&a), 12);
}

#[test]
fn decone_a2_staircase() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "staircase.arr", &staircase());
    assert_eq!(stdout(&freext(&["freecheck", s(&f)])).trim(), "free, exp (1,5,5), b2 = 25");
    let svg = stdout(&freext(&["decone-svg", s(&f)]));
    assert_eq!(lines(&svg), 10);
    // every point (a, b) of the x- and y-lines lies on a third line iff a - b is an x-y offset
    let mut triple = 0;
    for a in 0..2 {
        for b in 0..4 {
            if (-3..=0).contains(&(a - b)) {
                triple += 1;
            }
        }
    }
    assert_eq!(svg.matches("<circle ").count(), triple);
    assert!(svg.matches("data-lines=\"3\"").count() == triple);
}

#[test]
fn decone_boolean() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "boolean.arr", "dim 3\nH 1 0 0\nH 0 1 0\nH 0 0 1\n");
    let svg = stdout(&freext(&["decone-svg", s(&f), "--pivot", "z"]));
    assert_eq!(lines(&svg), 2);
    assert_eq!(svg.matches("<circle ").count(), 0);
    let o = freext(&["decone-svg", s(&f), "--pivot", "1,1,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_subset_and_listing() {
    let o = freext(&["verify", "--only", "exponents", "--only", "gf9"]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert_eq!(t.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    assert!(t.contains("2/2 passed"));
    assert_eq!(stdout(&freext(&["verify", "--list"])).lines().count(), 11);
    assert_eq!(freext(&["verify", "--only", "nothing"]).status.code(), Some(1));

    let j: serde_json::Value = serde_json::from_slice(&freext(&["verify", "--only", "yoshinaga", "--json"]).stdout).unwrap();
    assert_eq!(j["results"][0]["passed"], true);
}

#[test]
fn sabotaged_solver_is_reported() {
    let hooks = Hooks {
        solver: Arc::new(|m| {
            let (d1, d2) = freext_core::classify::solver_b2(m)?;
            let target = freext_core::arrangement::b2_orbit([2, 4, 1, 4]).contains(&m);
            Ok(if target { (d1 - 1, d2 + 1) } else { (d1, d2) })
        }),
    };
    let report = verify::run(&["exponents".into(), "solver-oracle".into(), "gf9".into()], &hooks).unwrap();
    let by_name = |n: &str| report.results.iter().find(|r| r.name == n).unwrap();
    assert!(!by_name("exponents").passed);
    assert!(by_name("exponents").detail.contains("[2, 4, 1, 4]"), "{}", by_name("exponents").detail);
    assert!(by_name("exponents").internal);
    assert!(!by_name("solver-oracle").passed);
    assert!(by_name("gf9").passed);
    assert_eq!(report.exit_code(), 2);
    assert!(report.to_string().contains("FAIL  1."));
}
