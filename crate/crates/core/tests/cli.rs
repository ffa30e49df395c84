use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasigap"))
        .current_dir(root())
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .env_remove("QUASIGAP_THREADS")
        .output()
        .unwrap()
}

fn ok(args: &[&str], out: &Path) {
    let o = run(args, out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn spectrum_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["spectrum", "--config", "configs/fibonacci.json", "--r", "1"], dir.path());
    let text = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(text, golden("fibonacci_spectrum_r1.csv"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!((row[3], row[4]), ("3", "2"));
}

#[test]
fn scan_is_reproducible_and_bounded() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["scan", "--config", "configs/fibonacci.json", "--r-min", "1", "--r-max", "100", "--svg"];
    ok(&args, a.path());
    ok(&args, b.path());
    let text = fs::read(a.path().join("scan.csv")).unwrap();
    assert_eq!(text, fs::read(b.path().join("scan.csv")).unwrap());
    assert_eq!(String::from_utf8(text).unwrap(), golden("fibonacci_scan_1_100.csv"));
    let counts = golden("fibonacci_scan_1_100.csv");
    for line in counts.lines().skip(1) {
        let n: usize = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(n <= 3, "{line}");
    }
    let svg = fs::read_to_string(a.path().join("scan.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn steinhaus_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["steinhaus", "--n-max", "50", "--beta", "1/3", "--samples", "1000"], dir.path());
    assert_eq!(fs::read_to_string(dir.path().join("steinhaus.csv")).unwrap(), golden("steinhaus_golden.csv"));
    let ergodic: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ergodic.json")).unwrap()).unwrap();
    let total: u64 = ergodic["counts"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 1000);
}

#[test]
fn other_commands_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["gen", "--config", "configs/two-slope.json", "--radius", "5"], dir.path());
    assert!(fs::read_to_string(dir.path().join("points.csv")).unwrap().starts_with("n1,n2,n3,x1,w1,w2"));
    ok(&["patches", "--config", "configs/fibonacci.json", "--r", "2", "--ball-radius", "50", "--type", "1"], dir.path());
    let patches: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("patches.json")).unwrap()).unwrap();
    assert_eq!(patches["type"], 1);
    ok(&["dioph", "--config", "configs/dioph-golden.json"], dir.path());
    let dioph: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("dioph.json")).unwrap()).unwrap();
    assert_eq!(dioph["dirichlet"][0]["witness"][0], 3);
    assert_eq!(dioph["thm13"]["pass"], true);
    ok(&["verify", "--criteria", "8,10", "--threads", "2"], dir.path());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = run(&["spectrum", "--config", "configs/fibonacci.json", "--r", "(1+sqrt5"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("at byte"));
    assert_eq!(run(&["spectrum", "--config", "missing.json", "--r", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--config", "configs/fibonacci.json", "--r", "1", "--type", "3"], dir.path()).status.code(), Some(2));

    let singular = dir.path().join("singular.json");
    let cfg = fs::read_to_string(root().join("configs/fibonacci.json")).unwrap().replace("\"1/3\"", "\"0\"");
    fs::write(&singular, cfg).unwrap();
    let o = run(&["gen", "--config", singular.to_str().unwrap(), "--radius", "3"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
