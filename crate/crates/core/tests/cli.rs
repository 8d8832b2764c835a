use fusionchain::catalog::{get_system, CatalogKey};
use fusionchain::cli::{run, EXIT_OK, EXIT_RELATION, EXIT_STRUCTURAL};
use fusionchain::io::SystemFile;

fn cli(args: &[&str]) -> (i32, String) {
    run(std::iter::once("fusionchain").chain(args.iter().copied()))
}

#[test]
fn tl_check_on_fibonacci_reports_golden_ratio() {
    let (code, out) = cli(&["check-tl", "--catalog", "fibonacci", "--lambda", "τ", "--nu", "1", "--L", "6"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("d = 1.6180339887"), "{out}");
    let (code, _) = cli(&["check-tl", "--catalog", "fibonacci", "--lambda", "tau", "--nu", "1", "--L", "6"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn basis_dimension() {
    let (code, out) = cli(&["basis", "--catalog", "fibonacci", "--lambda", "τ", "--L", "4", "--seeds", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("dimension: 5\n"), "{out}");
    let (_, out) = cli(&["basis", "--catalog", "fibonacci", "--lambda", "τ", "--L", "4", "--seeds", "1", "--list"]);
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn projector_written_as_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    let (code, _) = cli(&[
        "basis", "--catalog", "ising", "--lambda", "σ", "--L", "3", "--projector", "1", "--site", "1",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&path).unwrap();
    let header: Vec<usize> = text.lines().next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(text.lines().count(), header[1] + 1);
}

#[test]
fn export_then_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut keys = vec!["fibonacci".to_string(), "ising".into(), "fib_x_fib".into()];
    keys.extend((1..=6).map(|k| format!("su2k:{k}")));
    keys.extend((1..=4).map(|n| format!("cyclic:{n}")));
    for key in keys {
        let path = dir.path().join(format!("{}.json", key.replace(':', "_")));
        let p = path.to_str().unwrap();
        let (code, _) = cli(&["export", "--catalog", &key, "--out", p]);
        assert_eq!(code, EXIT_OK, "{key}");
        let (c1, direct) = cli(&["validate", "--catalog", &key]);
        let (c2, loaded) = cli(&["validate", "--file", p]);
        assert_eq!((c1, c2), (EXIT_OK, EXIT_OK), "{key}: {loaded}");
        assert_eq!(direct, loaded, "{key}");
    }
}

#[test]
fn broken_pentagon_exits_with_location() {
    let entry = get_system::<f64>(CatalogKey::Fibonacci).unwrap();
    let mut file = SystemFile::from_entry(&entry).unwrap();
    let e = file.f.iter_mut().find(|e| [&e.a, &e.b, &e.c, &e.d, &e.e, &e.f].iter().all(|x| *x == "τ")).unwrap();
    e.re += 1e-3;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, file.to_json().unwrap()).unwrap();
    let (code, out) = cli(&["validate", "--file", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_STRUCTURAL);
    let worst = out.lines().find(|l| l.starts_with("max residual")).expect(&out);
    assert!(worst.contains(" at ("), "{worst}");
    assert!(out.contains("F.2 pentagon             FAIL"), "{out}");
    // relation checks refuse the unvalidated file
    let (code, out) = cli(&["check-tl", "--file", path.to_str().unwrap(), "--lambda", "τ", "--nu", "1", "--L", "4"]);
    assert_eq!(code, EXIT_STRUCTURAL, "{out}");
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"labels\": [\"a\"],\n  \"fusion\": [[\"a\", \"a\"]]\n}\n").unwrap();
    let (code, out) = cli(&["validate", "--file", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_STRUCTURAL);
    assert!(out.contains("line 3"), "{out}");
}

#[test]
fn unknown_catalog_key_lists_valid_keys() {
    let (code, out) = cli(&["validate", "--catalog", "lucas"]);
    assert_eq!(code, EXIT_STRUCTURAL);
    assert!(out.contains("fibonacci") && out.contains("su2k"), "{out}");
}

#[test]
fn source_is_required_and_exclusive() {
    assert_eq!(cli(&["validate"]).0, EXIT_STRUCTURAL);
    assert_eq!(cli(&["validate", "--catalog", "ising", "--file", "x.json"]).0, EXIT_STRUCTURAL);
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
}

#[test]
fn bmw_exit_codes() {
    let (code, _) = cli(&["check-bmw", "--catalog", "cyclic:2", "--lambda", "1", "--nu", "0"]);
    assert_eq!(code, EXIT_OK);
    let (code, out) = cli(&["check-bmw", "--catalog", "ising", "--lambda", "σ", "--nu", "1"]);
    assert_eq!(code, EXIT_RELATION, "{out}");
    let (code, _) = cli(&["check-bmw", "--catalog", "fib_x_fib", "--lambda", "(τ,τ)", "--nu", "(1,1)"]);
    assert_eq!(code, EXIT_STRUCTURAL);
}

#[test]
fn json_report_shape() {
    let (code, out) = cli(&["check-tl", "--catalog", "ising", "--lambda", "σ", "--nu", "1", "--L", "5", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["satisfied"], true);
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    for d in v["details"].as_array().unwrap() {
        assert!(d["relation"].is_string() && d["constant"].is_object() || d["constant"].is_null());
    }
    let d = v["d"]["re"].as_f64().unwrap();
    assert!((d - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn single_bond_certificate() {
    let args = ["check-tl", "--catalog", "fibonacci", "--lambdas", "τ,τ,τ,τ", "--nu", "1", "--nu-prime", "1", "--site", "2"];
    let (code, out) = cli(&args);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("c = 0.381966011250"), "{out}");
    // τ ⊗ τ → τ on both bonds has a two-valued condition set
    let args = ["check-tl", "--catalog", "fibonacci", "--lambdas", "τ,τ,τ,τ", "--nu", "τ", "--nu-prime", "τ", "--site", "1"];
    let (code, out) = cli(&args);
    assert_eq!(code, EXIT_RELATION, "{out}");
}

#[test]
fn gauge_test_is_deterministic() {
    let args = ["gauge-test", "--catalog", "fibonacci", "--seed", "7", "--L", "4"];
    let (c1, a) = cli(&args);
    let (c2, b) = cli(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK), "{a}");
    assert_eq!(a, b);
}

#[test]
fn invariants_list_self_braiding() {
    let (code, out) = cli(&["invariants", "--catalog", "ising"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("one-dimensional labels: 1 ψ"), "{out}");
    assert!(out.contains("a=ψ c=1: -1"), "{out}");
}
