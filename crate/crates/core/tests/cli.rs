use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_tccss");

fn tccss(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("TCCSS_THREADS");
    if let Some(n) = threads {
        cmd.env("TCCSS_THREADS", n);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn no_panic(o: &Output) {
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(!err.contains("panicked"), "{err}");
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const FIG3_SMALL: &str = r#"{
  "spectrum": {"family": "type2", "zeros": [[0, 1]], "seeds": [[[1, 0], [2, 0], [3, 0]]]},
  "grid": {"x_min": -3, "x_max": 3, "nx": 13, "t_min": -0.2, "t_max": 0.2, "nt": 3}
}"#;

#[test]
fn help_and_missing_subcommand() {
    let o = tccss(&["--help"], None);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("generate"));
    assert_eq!(code(&tccss(&[], None)), 2);
    assert_eq!(code(&tccss(&["frobnicate"], None)), 2);
}

#[test]
fn generate_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", FIG3_SMALL);
    let mut outputs = Vec::new();
    for n in ["1", "0", "3"] {
        let out = dir.path().join(format!("u{n}.csv"));
        let o = tccss(&["generate", "--config", &cfg, "--out", out.to_str().unwrap()], Some(n));
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,t,re_u1,im_u1,re_u2,im_u2,re_u3,im_u3,abs_u1,abs_u2,abs_u3"
    );
    assert_eq!(lines.count(), 13 * 3);
    // t-major: the first 13 rows share t = -0.2
    assert!(text.lines().skip(1).take(13).all(|l| l.split(',').nth(1) == text.lines().nth(1).unwrap().split(',').nth(1)));
}

#[test]
fn generate_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FIG3_SMALL.trim_end().trim_end_matches('}').to_string()
        + r#", "output": {"path": "ignored.json", "format": "json"}}"#;
    let cfg = write(dir.path(), "c.json", &cfg);
    let out = dir.path().join("u.json");
    let o = tccss(&["generate", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["x"].as_array().unwrap().len(), 13);
    assert_eq!(v["u1"].as_array().unwrap().len(), 39);
    assert_eq!(v["u1"][0].as_array().unwrap().len(), 2);
}

#[test]
fn generate_without_any_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", FIG3_SMALL);
    assert_eq!(code(&tccss(&["generate", "--config", &cfg], None)), 2);
}

#[test]
fn verify_zero_seed_passes_everything() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "z.json",
        r#"{
  "spectrum": {"family": "type2", "zeros": [[0, 0.7]], "seeds": [[[0, 0], [0, 0], [0, 0]]]},
  "grid": {"x_min": -2, "x_max": 2, "nx": 5, "t_min": 0, "t_max": 0.2, "nt": 2},
  "checks": ["pde", "cnls", "zero_curvature", "rh_symmetry", "scattering"],
  "scattering": {"x_min": -10, "x_max": 10, "n_steps": 2000}
}"#,
    );
    let json = dir.path().join("r.json");
    let o = tccss(&["verify", "--config", &cfg, "--json", json.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    // scattering reports three outcomes
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 7);
    assert!(!stdout.contains("FAIL"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["outcomes"].as_array().unwrap().iter().all(|o| o["threshold"].as_f64().unwrap() > 0.0));
}

#[test]
fn verify_with_a_coarse_stencil_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FIG3_SMALL.trim_end().trim_end_matches('}').to_string()
        + r#", "stencil": {"hx": 0.1, "ht": 0.1, "order": 2}, "checks": ["pde"]}"#;
    let cfg = write(dir.path(), "c.json", &cfg);
    let o = tccss(&["verify", "--config", &cfg], None);
    no_panic(&o);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn figure_id_out_of_range() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["0", "5", "x"] {
        let o = tccss(&["figure", "--id", id, "--out-dir", dir.path().to_str().unwrap()], None);
        no_panic(&o);
        assert_eq!(code(&o), 2);
    }
}

#[test]
fn scatter_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FIG3_SMALL.trim_end().trim_end_matches('}').to_string()
        + r#", "scattering": {"x_min": -20, "x_max": 20, "n_steps": 4000}}"#;
    let cfg = write(dir.path(), "c.json", &cfg);
    let out = dir.path().join("s.csv");
    let out = out.to_str().unwrap();
    for bad in ["1:2", "a:b:3", "1:2:0", "2:1:3"] {
        let o = tccss(&["scatter", "--config", &cfg, "--lambda-re", bad, "--out", out], None);
        no_panic(&o);
        assert_eq!(code(&o), 2, "range {bad}");
    }
    let o = tccss(&["scatter", "--config", &cfg, "--lambda-re", "-1:1:5", "--out", out], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "lambda,abs_omega77,max_abs_omega_k7,det_deviation");
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn bad_environment_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", FIG3_SMALL);
    let out = dir.path().join("u.csv");
    let o = tccss(&["generate", "--config", &cfg, "--out", out.to_str().unwrap()], Some("abc"));
    no_panic(&o);
    assert_eq!(code(&o), 2);
    let missing = dir.path().join("nope.json");
    let o = tccss(&["verify", "--config", missing.to_str().unwrap()], None);
    no_panic(&o);
    assert_eq!(code(&o), 2);
    let o = tccss(&["generate", "--config", &cfg, "--out", dir.path().join("no/such/dir.csv").to_str().unwrap()], None);
    no_panic(&o);
    assert_eq!(code(&o), 2);
}
