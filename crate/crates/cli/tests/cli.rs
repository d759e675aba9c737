use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plemu"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("plemu-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn gen(name: &str, extra: &[&str]) -> String {
    let p = tmp(name).to_string_lossy().into_owned();
    let mut args = vec!["gen", "-o", &p];
    args.extend_from_slice(extra);
    ok(&args);
    p
}

#[test]
fn gen_is_deterministic() {
    let a = gen("a.json", &["--family", "random-triangulation", "--size", "200", "--k", "8", "--seed", "4", "--weights", "uniform"]);
    let b = gen("b.json", &["--family", "random-triangulation", "--size", "200", "--k", "8", "--seed", "4", "--weights", "uniform"]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn emulate_then_verify() {
    let g = gen("g.json", &["--family", "grid", "--size", "12", "--k", "12", "--weights", "uniform", "--seed", "1"]);
    for mode in ["onehole", "multihole", "general"] {
        let e = tmp(&format!("e-{mode}.json")).to_string_lossy().into_owned();
        let r = tmp(&format!("r-{mode}.json")).to_string_lossy().into_owned();
        ok(&["emulate", "-i", &g, "--eps", "0.25", "--mode", mode, "-o", &e, "--report", &r]);
        let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&r).unwrap()).unwrap();
        assert!(rep["max_distortion"].as_f64().unwrap() <= 0.25);
        let v = tmp(&format!("v-{mode}.json")).to_string_lossy().into_owned();
        ok(&["verify", "--original", &g, "--emulator", &e, "--eps", "0.25", "--report", &v]);
        let vr: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&v).unwrap()).unwrap();
        assert_eq!(vr["pass"], true);
    }
}

#[test]
fn verify_fails_on_stretched_emulator() {
    let g = gen("s.json", &["--family", "grid", "--size", "8", "--k", "6", "--seed", "2"]);
    let mut inst: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    for e in inst["edges"].as_array_mut().unwrap() {
        e[2] = serde_json::json!(e[2].as_f64().unwrap() * 2.0);
    }
    let bad = tmp("bad.json");
    std::fs::write(&bad, inst.to_string()).unwrap();
    let out = run(&["verify", "--original", &g, "--emulator", bad.to_str().unwrap(), "--eps", "0.25"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_reads_pairs_from_stdin() {
    let g = gen("o.json", &["--family", "grid", "--size", "10", "--k", "5", "--seed", "3"]);
    let inst: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    let t: Vec<u64> = inst["terminals"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    let mut child = bin()
        .args(["oracle", "-i", &g, "--eps", "0"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    writeln!(child.stdin.as_mut().unwrap(), "{} {}\n{} {}", t[0], t[0], t[0], t[2]).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let lines: Vec<f64> = String::from_utf8(out.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], 0.0);
    // unit weights on a grid boundary: a positive integer distance
    assert!(lines[1] >= 1.0 && (lines[1] - lines[1].round()).abs() < 1e-9);
}

#[test]
fn bench_prints_csv() {
    let out = ok(&["bench", "--suite", "quick"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "family,n,k,eps,mode,size,max_distortion,time");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let cols: Vec<&str> = r.split(',').collect();
        assert_eq!(cols.len(), 8);
        let d: f64 = cols[6].parse().unwrap();
        let eps: f64 = cols[3].parse().unwrap();
        assert!(d <= eps + 1e-6, "{r}");
    }
}

#[test]
fn bad_input_exits_nonzero() {
    let out = run(&["emulate", "-i", "/nonexistent/x.json", "--eps", "0.25"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["gen", "--family", "moebius", "--size", "4", "--k", "2"]);
    assert!(!out.status.success());
}
