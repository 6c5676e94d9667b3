use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use amplify_cli::{ConfigDocument, EXIT_CONFIG, EXIT_IO};
use amplify_core::lab::ParamConfig;

const SMALL: &str = "\
[engine]
n_agents = 40
phase_ticks = [20, 60, 20]
eval_interval = 10
eval_tasks = 5
probe_tasks = 5

[sweep]
seeds = 2

[optimize]
delta_grid = [0.002, 0.0]
seeds = 2
";

fn amplify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amplify"))
        .args(args)
        .env("AMPLIFY_LOG", "error")
        .output()
        .expect("spawn amplify")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.in.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Every file under `dir` except metadata.json, with contents, sorted.
fn bundle_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() != "metadata.json" {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn p2_keys_give_the_p2_configuration() {
    let doc = ConfigDocument::parse("[dynamics]\ndelta = 0.002\nsensitivity = 0.4\n").unwrap();
    let c = doc.sim_config().unwrap();
    let p2 = ParamConfig::standard().into_iter().find(|p| p.label == "P2").unwrap();
    assert_eq!((c.dynamics.sensitivity, c.dynamics.delta), (p2.sensitivity, p2.delta));
}

#[test]
fn assisted_learning_faster_than_self_learning_is_rejected() {
    let doc = ConfigDocument::parse("[dynamics]\nalpha_ai = 0.1\n").unwrap();
    let err = doc.sim_config().unwrap_err();
    assert!(err.to_string().contains("dynamics.alpha_ai"), "{err}");
    assert_eq!(err.exit_code(), EXIT_CONFIG);
}

#[test]
fn parse_errors_carry_a_line_number() {
    let err = ConfigDocument::parse("[dynamics]\ndelta = = 3\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}

#[test]
fn unknown_keys_are_rejected() {
    for text in ["[dynamics]\ndelt = 0.1\n", "[nonsense]\n", "[[sweep.configs]]\nlabel = \"x\"\nsigma = 1\n"] {
        assert!(ConfigDocument::parse(text).is_err(), "{text}");
    }
}

#[test]
fn run_twice_gives_identical_bundles() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = amplify(&["run", "--config", &cfg, "--seed", "7", "--out", dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let files = bundle_files(&a);
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["config.toml", "report.csv", "report.txt", "samples.csv", "summary.json"]);
    assert_eq!(files, bundle_files(&b));
    assert!(a.join("metadata.json").exists());

    let snapshot = fs::read_to_string(a.join("config.toml")).unwrap();
    assert!(snapshot.contains("seed = 7"), "flag should override the file");
    assert!(snapshot.contains("alpha_self = 0.05"), "defaults should be expanded");
}

#[test]
fn snapshot_reproduces_the_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(amplify(&["sweep", "--config", &cfg, "--seed", "3", "--fast", "--out", a.to_str().unwrap()])
        .status
        .success());
    let snapshot = a.join("config.toml");
    assert!(amplify(&["sweep", "--config", snapshot.to_str().unwrap(), "--out", b.to_str().unwrap(), "--workers", "1"])
        .status
        .success());
    assert_eq!(bundle_files(&a), bundle_files(&b));
    assert!(a.join("runs/P0_full_delegation_r00.csv").exists());
    assert!(a.join("runs.json").exists());
}

#[test]
fn report_rerenders_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let bundle = tmp.path().join("opt");
    let out = amplify(&["optimize", "--config", &cfg, "--out", bundle.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let again = tmp.path().join("again");
    let out = amplify(&["report", bundle.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["report.csv", "report.txt", "plot_delta_cai_star.csv", "plot_delta_d.csv"] {
        assert_eq!(fs::read(bundle.join(name)).unwrap(), fs::read(again.join(name)).unwrap(), "{name}");
    }
    let table = fs::read_to_string(bundle.join("report.txt")).unwrap();
    assert!(table.contains("Verdict:"));
}

#[test]
fn bad_inputs_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let out_dir = out_dir.to_str().unwrap();

    let bad = write_config(tmp.path(), "[dynamics]\nalpha_ai = 0.1\n");
    let out = amplify(&["run", "--config", &bad, "--out", out_dir]);
    assert_eq!(out.status.code(), Some(EXIT_CONFIG as i32));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dynamics.alpha_ai"));

    let typo = write_config(tmp.path(), "[engine]\nn_agent = 10\n");
    assert_eq!(amplify(&["run", "--config", &typo, "--out", out_dir]).status.code(), Some(EXIT_CONFIG as i32));

    let missing = tmp.path().join("nope.toml");
    let out = amplify(&["run", "--config", missing.to_str().unwrap(), "--out", out_dir]);
    assert_eq!(out.status.code(), Some(EXIT_IO as i32));

    assert_eq!(amplify(&["report", tmp.path().to_str().unwrap()]).status.code(), Some(EXIT_IO as i32));
    assert_eq!(amplify(&["frobnicate"]).status.code(), Some(2));
    let cfg = write_config(tmp.path(), SMALL);
    assert_eq!(
        amplify(&["sweep", "--config", &cfg, "--workers", "0", "--out", out_dir]).status.code(),
        Some(EXIT_CONFIG as i32)
    );
}

#[test]
fn shipped_schema_file_is_the_default() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/default.toml");
    assert_eq!(ConfigDocument::load(&path).unwrap(), ConfigDocument::default());
}
