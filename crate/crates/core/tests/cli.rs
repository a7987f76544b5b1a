use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn phasebench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasebench"))
        .args(args)
        .output()
        .unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.display().to_string()
}

#[test]
fn synth_then_unwrap_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    let o = phasebench(&["synth", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let trace = dir.path().join("trace_90ms.csv");
    assert!(trace.exists());
    let o = phasebench(&["unwrap", trace.to_str().unwrap(), "--methods", "PU-M,PU-K", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("unwrap.csv")).unwrap();
    assert!(text.contains("frequency_hz,wrapped_rad,unwrapped_pu_m_rad,unwrapped_pu_k_rad,mask"));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# small run\nsizes = 256\nseed = 3\nmethods = PU-F\n").unwrap();
    let out = out_arg(&dir.path().join("res"));
    let o = phasebench(&["table1", "--config", conf.to_str().unwrap(), "--seed", "11", "--reps", "3", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("res/table1.csv")).unwrap();
    assert!(text.contains("# seed=11"));
    assert!(text.contains("# methods=PU-F"));
    assert!(text.contains("n_samples,ground_truth_deg,seed,phi0_deg_pu_f,tau_ms_pu_f"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "no_such_key = 1\n").unwrap();
    for args in [
        vec!["table1", "--config", conf.to_str().unwrap()],
        vec!["table1", "--methods", "PU-Z"],
        vec!["table1", "--reps", "1"],
        vec!["sweep", "--config", "/nonexistent/conf"],
        vec!["unwrap"],
        vec!["frobnicate"],
    ] {
        let o = phasebench(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn runtime_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.csv");
    // too few bins to fit a line
    let mut text = String::from("time_s,amplitude\n");
    for i in 0..16 {
        text.push_str(&format!("{},{}\n", i as f64 * 1e-3, if i == 3 { 1.0 } else { 0.0 }));
    }
    fs::write(&short, text).unwrap();
    let out = out_arg(dir.path());
    let o = phasebench(&["unwrap", short.to_str().unwrap(), "--out", &out]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));

    let missing = dir.path().join("missing.csv");
    let o = phasebench(&["unwrap", missing.to_str().unwrap(), "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_with_zero() {
    let o = phasebench(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for cmd in ["synth", "unwrap", "table1", "estimate", "sweep"] {
        assert!(text.contains(cmd));
    }
}
