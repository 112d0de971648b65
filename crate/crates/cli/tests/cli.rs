use std::path::Path;
use std::process::{Command, Output};

use hsrmamba::hsio::load_cube;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsrmamba"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn synth(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = p(dir, name);
    let mut args = vec!["synth", "--h", "16", "--w", "16", "--b", "4", "-o", &out];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn synth_is_reproducible_and_reports_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--profile", "mixtures", "--seed", "7"];
    let a = synth(dir.path(), "a.hsc", &args);
    let b = synth(dir.path(), "b.hsc", &args);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(load_cube(&a).unwrap().dims(), (16, 16, 4));
    let o = run(&["synth", "--h", "4", "--w", "4", "--b", "2", "--seed", "7", "-o", &p(dir.path(), "c.hsc")]);
    assert!(stdout(&o).contains("seed=7") && stdout(&o).contains("profile=smooth"));
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&["synth", "--h", "4", "--w", "4", "--b", "2", "--profile", "plaid", "-o", "x"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["sr", "-i", "a", "-o", "b"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn io_and_validation_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let lr = synth(dir.path(), "lr.hsc", &[]);
    let missing = p(dir.path(), "none.hsw");
    let o = run(&["sr", "-i", &lr, "-o", &p(dir.path(), "sr.hsc"), "--weights", &missing]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("none.hsw"));

    let o = run(&["degrade", "-i", &lr, "--scale", "3", "-o", &p(dir.path(), "x.hsc")]);
    assert_eq!(code(&o), 3);

    let garbage = p(dir.path(), "garbage.hsc");
    std::fs::write(&garbage, b"not a cube at all").unwrap();
    assert_eq!(code(&run(&["eval", "--sr", &garbage, "--hr", &lr])), 3);
}

#[test]
fn sr_with_weight_file_checks_config() {
    let dir = tempfile::tempdir().unwrap();
    let lr = synth(dir.path(), "lr.hsc", &[]);
    let w = p(dir.path(), "w.hsw");
    let small = ["--channels", "8", "--groups", "1", "--cssm", "1", "--state", "4"];
    let mut args = vec!["init-weights", "--bands", "4", "--seed", "3", "-o", &w];
    args.extend_from_slice(&small);
    assert_eq!(code(&run(&args)), 0);

    let out_file = p(dir.path(), "a.hsc");
    let mut args = vec!["sr", "-i", &lr, "-o", &out_file, "--weights", &w];
    args.extend_from_slice(&small);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("reconstruct\t"));

    let random_file = p(dir.path(), "b.hsc");
    let mut args = vec!["sr", "-i", &lr, "-o", &random_file, "--random-weights", "--seed", "3"];
    args.extend_from_slice(&small);
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(std::fs::read(&out_file).unwrap(), std::fs::read(&random_file).unwrap());

    let mut args = vec!["sr", "-i", &lr, "-o", &out_file, "--weights", &w, "--scale", "8"];
    args.extend_from_slice(&small);
    let o = run(&args);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("scale=8") && err.contains("scale=4"), "{err}");
}

#[test]
fn sr_ablation_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let lr = synth(dir.path(), "lr.hsc", &["--profile", "mixtures", "--materials", "2"]);
    let small = ["--channels", "8", "--groups", "1", "--cssm", "1", "--random-weights", "--seed", "3"];
    let outs: Vec<Vec<u8>> = ["none", "no-gsrm"]
        .iter()
        .map(|ab| {
            let out = p(dir.path(), &format!("{ab}.hsc"));
            let mut args = vec!["sr", "-i", &lr, "-o", &out, "--ablate", ab, "--precision", "f64"];
            args.extend_from_slice(&small);
            assert_eq!(code(&run(&args)), 0);
            std::fs::read(out).unwrap()
        })
        .collect();
    assert_ne!(outs[0], outs[1]);
}

#[test]
fn eval_anchors_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let a = synth(dir.path(), "a.hsc", &["--profile", "checker"]);
    let o = run(&["eval", "--sr", &a, "--hr", &a]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let value = |key: &str| -> String {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(key))
            .unwrap()
            .split_whitespace()
            .nth(1)
            .unwrap()
            .to_string()
    };
    assert_eq!(value("psnr"), "100.000000");
    assert_eq!(value("ssim"), "1.000000");
    assert_eq!(value("sam"), "0.000000");
    assert_eq!(value("cc"), "1.000000");
    assert_eq!(value("rmse"), "0.000000");
    assert_eq!(value("ergas"), "0.000000");

    let o = run(&["eval", "--sr", &a, "--hr", &a, "--json"]);
    let json = stdout(&o);
    for key in ["psnr", "ssim", "sam", "cc", "rmse", "ergas"] {
        assert!(json.contains(&format!("\"{key}\"")), "{json}");
    }

    let other = p(dir.path(), "b.hsc");
    assert_eq!(code(&run(&["synth", "--h", "8", "--w", "8", "--b", "4", "-o", &other])), 0);
    assert_eq!(code(&run(&["eval", "--sr", &a, "--hr", &other])), 3);
}

#[test]
fn bench_prints_tsv_and_warns_on_single_rep() {
    let o = run(&["bench", "--lengths", "256,512", "--reps", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("kernel\tlength\tmedian_ms\treps\n"));
    assert!(out.contains("doubling_ratio"));
    assert!(out.contains("# warning: one repetition"));
}

#[test]
fn selftest_exit_codes() {
    let o = run(&["selftest", "--quick"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&["selftest", "--quick", "--perturb-tolerance", "gradient-check"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("failed suites: gradient-check"));
}

#[test]
fn raw_import() {
    let dir = tempfile::tempdir().unwrap();
    let raw = p(dir.path(), "dump.raw");
    let bytes: Vec<u8> = (0..2 * 3 * 2).flat_map(|i| (i as f32 * 10.0).to_le_bytes()).collect();
    std::fs::write(&raw, bytes).unwrap();
    let out = p(dir.path(), "imp.hsc");
    let o = run(&["import", "-i", &raw, "--h", "2", "--w", "3", "--b", "2", "-o", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cube = load_cube(&out).unwrap();
    assert_eq!(cube.normalization(), (0.0, 110.0));
    assert_eq!(cube.band(1)[5], 1.0);
}
