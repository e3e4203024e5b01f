use std::path::Path;
use std::process::{Command, Output};

use direct_shaping_cli::ingest_corpus;

fn dshape(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dshape")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = dshape(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sample_text() -> Vec<u8> {
    let mut v = Vec::new();
    for i in 0..400 {
        v.extend_from_slice(format!("line {i}: a plain text sample with some words in it\n").as_bytes());
    }
    v
}

#[test]
fn ingest_is_msb_first() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.bin");
    std::fs::write(&f, [0xFFu8, b'A']).unwrap();
    let (bits, n) = ingest_corpus(&f).unwrap();
    assert_eq!(n, 2);
    assert_eq!(bits.to_string(), "1111111101000001");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        ok(&["--cmd", "instability", "--t-grid", "0:60:20", "--trials", "50", "--seq-len", "200", "--seed", "3", "--out", path(out)]);
    }
    let csv = |d: &Path| std::fs::read(d.join("instability.csv")).unwrap();
    assert_eq!(csv(&a), csv(&b));
    let text = String::from_utf8(csv(&a)).unwrap();
    assert!(text.starts_with("t,bound,fraction,stderr\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["--cmd", "montecarlo", "--study", "pair1d", "--n", "1:4", "--trials", "2000", "--seed", "9", "--out", path(&a)]);
    let manifest = a.join("manifest.json");
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(&manifest).unwrap()).unwrap();
    assert_eq!(m["config"]["command"], "montecarlo");
    assert_eq!(m["config"]["seed"], 9);
    assert_eq!(m["config"]["params"]["p"], "0.6,0.4");
    assert!(m["versions"]["dshape"].is_string());
    assert!(m["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    ok(&["--config", path(&manifest), "--out", path(&b)]);
    assert_eq!(std::fs::read(a.join("pair1d.csv")).unwrap(), std::fs::read(b.join("pair1d.csv")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let code = |args: &[&str]| dshape(args).status.code().unwrap();
    assert_eq!(code(&["--cmd", "theory", "--trials", "5", "--out", path(&out)]), 2);
    assert_eq!(code(&["--cmd", "bounds", "--rho", "0.7", "--out", path(&out)]), 2);
    assert_eq!(code(&["--cmd", "bounds", "--m", "x", "--out", path(&out)]), 2);
    assert_eq!(code(&["--cmd", "montecarlo", "--study", "nope", "--out", path(&out)]), 2);
    assert_eq!(code(&["--bogus"]), 2);
    assert_eq!(code(&["--cmd", "slc-encode", "--input", "/definitely/missing", "--out", path(&out)]), 1);
    // failed runs write nothing
    assert!(!out.exists());
}

#[test]
fn theory_reports_example_costs() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["--cmd", "theory", "--P", "0.1,0.2,0.3,0.4", "--out", path(dir.path())]);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("theory.json")).unwrap()).unwrap();
    assert!((v["per_word"].as_f64().unwrap() - 0.7).abs() < 1e-12);
    assert!((v["per_bit"].as_f64().unwrap() - 0.35).abs() < 1e-12);
    assert!(v["gap"].as_f64().unwrap() > 0.0);
}

#[test]
fn theory_derives_costs_from_cer_curves() {
    let dir = tempfile::tempdir().unwrap();
    let cer = dir.path().join("cer.csv");
    let mut text = String::from("level,cycles,error_rate\n");
    // level L crosses 1e-3 at 8000 / (L + 1) cycles
    for level in 0..4 {
        let cross = 8000.0 / (level as f64 + 1.0);
        for k in 1..=20 {
            let t = k as f64 * 500.0;
            text.push_str(&format!("{level},{t},{}\n", 1e-3 * t / cross));
        }
    }
    std::fs::write(&cer, text).unwrap();
    ok(&["--cmd", "theory", "--cer", path(&cer), "--t0", "4000", "--out", path(dir.path())]);
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("cost_model.json")).unwrap()).unwrap();
    let costs: Vec<f64> = serde_json::from_value(v["level_costs"].clone()).unwrap();
    for (c, want) in costs.iter().zip([0.5, 1.0, 1.5, 2.0]) {
        assert!((c - want).abs() < 1e-9, "{costs:?}");
    }
}

#[test]
fn slc_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.txt");
    std::fs::write(&data, sample_text()).unwrap();
    for m in ["2", "3", "5"] {
        let (enc, dec) = (dir.path().join(format!("e{m}")), dir.path().join(format!("d{m}")));
        ok(&["--cmd", "slc-encode", "--m", m, "--input", path(&data), "--out", path(&enc)]);
        let summary: serde_json::Value =
            serde_json::from_slice(&std::fs::read(enc.join("summary.json")).unwrap()).unwrap();
        let bits = summary["data_bits"].as_u64().unwrap().to_string();
        assert!(summary["zero_fraction_code"].as_f64() < summary["zero_fraction_data"].as_f64());
        ok(&["--cmd", "slc-decode", "--m", m, "--data-bits", &bits, "--input", path(&enc.join("code.bin")), "--out", path(&dec)]);
        assert_eq!(std::fs::read(dec.join("data.bin")).unwrap(), sample_text(), "m = {m}");
    }
}

#[test]
fn mlc_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.txt");
    std::fs::write(&data, sample_text()).unwrap();
    let (enc, dec) = (dir.path().join("e"), dir.path().join("d"));
    ok(&["--cmd", "mlc-encode", "--input", path(&data), "--out", path(&enc)]);
    let s: serde_json::Value = serde_json::from_slice(&std::fs::read(enc.join("summary.json")).unwrap()).unwrap();
    assert!(s["avg_cost_mlc"].as_f64() < s["avg_cost_uncoded"].as_f64());
    let lower = enc.join("lower.bin");
    let upper = enc.join("upper.bin");
    ok(&["--cmd", "mlc-decode", "--input", path(&lower), "--upper", path(&upper), "--out", path(&dec)]);
    let got = std::fs::read(dec.join("data.bin")).unwrap();
    let want = sample_text();
    let kept = s["page_bits"].as_u64().unwrap() as usize * 2 / 8;
    assert_eq!(got, want[..kept]);
}

#[test]
fn profile_writes_one_file_per_word_length() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.txt");
    std::fs::write(&data, sample_text()).unwrap();
    let out = dir.path().join("p");
    ok(&["--cmd", "profile", "--input", path(&data), "--m", "2,4", "--checkpoints", "10", "--mlc", "--out", path(&out)]);
    for name in [
        "zero_fraction_uncoded.csv",
        "zero_fraction_m2.csv",
        "zero_fraction_m4.csv",
        "levels_uncoded.csv",
        "levels_mlc_m4.csv",
        "levels_independent_m2.csv",
    ] {
        assert!(out.join(name).exists(), "{name}");
    }
}

#[test]
fn grid_and_pair_study() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    ok(&["--cmd", "grid", "--l", "30", "--ne", "2", "--nd", "3", "--out", path(&g)]);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(g.join("grid.json")).unwrap()).unwrap();
    let lb = v["lower_bound"].as_f64().unwrap();
    assert!(lb > 0.0 && lb < 1.0);
    let s = dir.path().join("s");
    ok(&["--cmd", "montecarlo", "--study", "pair2d", "--ne", "2", "--nd", "2:3", "--l", "30", "--trials", "500", "--out", path(&s)]);
    let text = std::fs::read_to_string(s.join("pair2d.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("Ne,Nd,lower,upper,mc"));
    assert_eq!(lines.count(), 2);
}
