use std::path::PathBuf;
use std::process::{Command, Output};

fn eqchow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqchow")).args(args).output().unwrap()
}

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("eqchow-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const HALF_LINE: &str = r#"
label = "broken"
lattice_rank = 1

[tail_fan]
rays = [[1], [-1]]
cones = [[0], [1]]
marked = []

[[points]]
at = "0"

[[points.cells]]
vertices = [[0]]
rays = [[1]]
"#;

#[test]
fn validate_accepts_bundles() {
    for f in ["pe.toml", "pf.toml", "trivial.toml"] {
        let o = eqchow(&["validate", "--input", &example(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", String::from_utf8_lossy(&o.stdout));
        assert!(String::from_utf8_lossy(&o.stdout).contains("result: ok"));
    }
}

#[test]
fn incomplete_slice_exits_1_and_names_the_point() {
    let o = eqchow(&["validate", "--input", &scratch("broken.toml", HALF_LINE)]);
    assert_eq!(o.status.code(), Some(1));
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("FAIL slice 0 complete"), "{s}");
}

#[test]
fn malformed_input_exits_2() {
    let o = eqchow(&["validate", "--input", &scratch("empty.toml", "")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 1"));
    let o = eqchow(&["count", "--input", &example("pe.toml"), "--k", "2..x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = eqchow(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn geometric_cap_exits_3() {
    let o = eqchow(&["downgrade", "--input", &example("pe.toml"), "--N", "4", "--mode", "geometric"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--mode counting"));
}

#[test]
fn count_csv_reproduces_rows() {
    let o = eqchow(&["count", "--input", &example("pe.toml"), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "variety,k,r_k,v_k,t_k,sum,identity_rhs,identity,k_le_Nd");
    assert_eq!(lines[1], "P(E),2,213,48,36,297,297,pass,yes");
    assert_eq!(lines[2], "P(E),1,135,45,9,189,189,pass,yes");
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["count", "--input", "pf.toml", "--format", "csv"],
        vec!["downgrade", "--input", "trivial.toml", "--N", "2", "--mode", "geometric"],
        vec!["downgrade", "--input", "pe.toml", "--N", "5"],
    ];
    for args in runs {
        let args: Vec<String> = args.iter().map(|a| if a.ends_with(".toml") { example(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = eqchow(&args);
        let b = eqchow(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stderr, b.stderr);
    }
}

#[test]
fn downgrade_with_n1_round_trips_through_validate() {
    let o = eqchow(&["downgrade", "--input", &example("trivial.toml"), "--N", "1", "--mode", "geometric"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = String::from_utf8(o.stdout).unwrap();
    assert!(doc.contains("source_cell"));
    let v = eqchow(&["validate", "--input", &scratch("n1.toml", &doc)]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stdout));
}

#[test]
fn beyond_nd_warns() {
    let o = eqchow(&["count", "--input", &example("trivial.toml"), "--N", "1", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("exceeds Nd"), "{err}");
    assert!(String::from_utf8_lossy(&o.stdout).contains("no"));
}

#[test]
fn selfcheck_passes() {
    let o = eqchow(&["selfcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}
