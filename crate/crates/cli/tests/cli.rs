use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_streamzeros"))
}

fn run_json(args: &[&str]) -> Value {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn inverse_window_matches_closed_form() {
    let v = run_json(&["inverse", "z^2-3z+1", "--window", "-3..3"]);
    let w = &v["window"];
    assert_eq!(w["lo"], 3i64.wrapping_neg());
    // central entry -1/sqrt(5) sits at index -1
    let vals = w["values"].as_array().unwrap();
    let central = vals[2].as_f64().unwrap();
    assert!((central + 1.0 / 5f64.sqrt()).abs() < 1e-10);
    assert!(w["tail_bound"].as_f64().unwrap() > 0.0);
    // the emitted stream record parses back
    let s = streamzeros::Stream::from_json(&v["stream"]).unwrap();
    assert!(matches!(s, streamzeros::Stream::Tails(_)));
}

#[test]
fn encode_decode_golden_orbit() {
    let e = run_json(&["encode", "z^2-3z+1", "--seed", "0,1/2", "--cycle"]);
    let letters: Vec<i64> = e["letters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_i64().unwrap())
        .collect();
    // cyclic rotation of (-1, -1, 1)
    assert_eq!(letters.len(), 3);
    assert_eq!(letters.iter().sum::<i64>(), -1);
    let d = run_json(&["decode", "z^2-3z+1", "--word", "-1,-1,1", "--periodic"]);
    assert_eq!(d["kind"], "exact");
    let vals: Vec<&str> = d["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let mut sorted = vals.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, ["0", "1/2", "1/2"]);
}

#[test]
fn admissible_verdicts() {
    let v = run_json(&["admissible", "z^2-3z+1", "--word", "-1,-1,1", "--periodic"]);
    assert_eq!(v["verdict"], "yes");
    let v = run_json(&["admissible", "z^2-3z+1", "--word", "1,1,1", "--periodic"]);
    assert_eq!(v["verdict"], "no");
}

#[test]
fn entropy_csv_gap_closes() {
    let out = bin()
        .args(["entropy", "z^2-3z+1", "--grid", "64", "--word-len", "5", "--output", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,count,estimate,ratio,exact,gap");
    let last = lines.last().unwrap();
    let gap: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!(gap < 0.05, "final gap {gap} too large");
}

#[test]
fn saut_golden_example() {
    let v = run_json(&["saut", "z^2-3z+1"]);
    assert_eq!(v["class"], "infinite_cyclic");
    let gen: Vec<Vec<&str>> = v["generator"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect())
        .collect();
    assert_eq!(gen, [["-1", "1"], ["-1", "2"]]);
    assert_eq!(v["pell"]["w"], "1");
    assert_eq!(v["pell"]["v"], "1");
    assert_eq!(v["cf"]["display"], "[2;(1)]");
}

#[test]
fn pell_and_cf() {
    let v = run_json(&["pell", "5"]);
    assert_eq!((v["w"].as_str().unwrap(), v["v"].as_str().unwrap()), ("1", "1"));
    assert_eq!(v["sign"], -4);
    let v = run_json(&["cf", "(3+sqrt5)/2"]);
    assert_eq!(v["display"], "[2;(1)]");
    let v = run_json(&["cf", "1/sqrt3"]);
    assert_eq!(v["display"], "[0;1,(1,2)]");
}

#[test]
fn resultant_bezout_dim() {
    let v = run_json(&["resultant", "z-2", "z-3"]);
    assert_eq!(v["delta"], "1");
    let v = run_json(&["bezout", "z-2", "z-3"]);
    assert_eq!(v["delta"], "1");
    let v = run_json(&["dim", "z^2-3z+1", "--check-k", "2"]);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["checked"], true);
}

#[test]
fn common_zeros_and_decompose() {
    let v = run_json(&["common-zeros", "z-1", "z+1", "--window", "0..3"]);
    assert_eq!(v["count"], 2);
    let v = run_json(&["decompose", "2z-1", "3z-1", "--seed", "1/5,2/5", "--steps", "6"]);
    // the 3z-1 component vanishes for a pure 1/5-denominator orbit
    assert!(v["v"]["values"].as_array().unwrap().iter().all(|x| x == "0"));
    assert_eq!(v["scale"], "-1");
}

#[test]
fn orbit_csv_and_out_file() {
    let out = bin()
        .args(["orbit", "z^2-3z+1", "--seed", "0,1/2", "--cycle", "--output", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "index,value\n0,0\n1,1/2\n2,1/2\n");

    let dir = std::env::temp_dir().join("streamzeros-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pell.json");
    let st = bin()
        .args(["pell", "12", "--out", path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(st.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["w"], "4");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["inverse", "z-1"]), 1); // root on the unit circle
    assert_eq!(code(&["orbit", "z^2-3z+1", "--seed", "bogus"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["pell", "9"]), 1); // square D
}

#[test]
fn deterministic_across_thread_counts() {
    let run = |threads: &str| {
        bin()
            .env("RAYON_NUM_THREADS", threads)
            .args(["entropy", "-3z^2+1", "--grid", "27", "--word-len", "4", "--output", "csv"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}
