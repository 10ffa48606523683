use std::path::Path;
use std::process::{Command, Output};

const SMALL_CONFIG: &str = r#"{
  "arena": { "max_steps": 40 },
  "ddpg": { "hidden": [8, 8], "batch_size": 16, "warmup_steps": 20 },
  "episodes": 4,
  "eval_every": 2,
  "eval_episodes": 3,
  "seed": 9
}"#;

fn trisumo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trisumo"))
        .args(args)
        .env("TRISUMO_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn trained(dir: &Path) -> std::path::PathBuf {
    let config = dir.join("config.json");
    std::fs::write(&config, SMALL_CONFIG).unwrap();
    let out = dir.join("run");
    let res = trisumo(&["train", "--config", arg(&config), "--out", arg(&out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    out
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(trisumo(&["--help"]).status.code(), Some(0));
    assert_eq!(trisumo(&[]).status.code(), Some(1));
    assert_eq!(trisumo(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(trisumo(&["evaluate", "--checkpoint", "x.bin", "--episodes", "0"]).status.code(), Some(1));
}

#[test]
fn train_evaluate_rollout_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = trained(dir.path());
    let metrics = out.join("metrics.csv");
    let checkpoint = out.join("checkpoint_final.bin");
    assert_eq!(std::fs::read_to_string(&metrics).unwrap().lines().count(), 5);
    assert!(out.join("checkpoint_ep000002.bin").exists());

    let res = trisumo(&["evaluate", "--checkpoint", arg(&checkpoint), "--episodes", "5", "--seed", "1"]);
    assert_eq!(res.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(report["episodes"], 5);
    let total = ["win_rate", "lose_rate", "draw_rate"]
        .iter()
        .map(|k| report[k].as_f64().unwrap())
        .sum::<f64>();
    assert_eq!(total, 1.0);
    let again = trisumo(&["evaluate", "--checkpoint", arg(&checkpoint), "--episodes", "5", "--seed", "1"]);
    assert_eq!(again.stdout, res.stdout);

    let csv = dir.path().join("rollout.csv");
    assert_eq!(trisumo(&["rollout", "--checkpoint", arg(&checkpoint), "--out", arg(&csv)]).status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("step,learner_x,"));
    assert_ne!(text.lines().last().unwrap().rsplit(',').next(), Some("ongoing"));

    let svg = dir.path().join("curves.svg");
    assert_eq!(trisumo(&["plot", "--metrics", arg(&metrics), "--out", arg(&svg)]).status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn repeated_training_gives_identical_metrics() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = std::fs::read(trained(a.path()).join("metrics.csv")).unwrap();
    let mb = std::fs::read(trained(b.path()).join("metrics.csv")).unwrap();
    assert_eq!(ma, mb);
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");

    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{ "episodez": 3 }"#).unwrap();
    let res = trisumo(&["train", "--config", arg(&unknown), "--out", arg(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("episodez"));

    let invalid = dir.path().join("invalid.json");
    std::fs::write(&invalid, r#"{ "ddpg": { "gamma": 1.5 } }"#).unwrap();
    let res = trisumo(&["train", "--config", arg(&invalid), "--out", arg(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("gamma"));

    let missing = dir.path().join("missing.bin");
    let res = trisumo(&["evaluate", "--checkpoint", arg(&missing)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("missing.bin"));

    let garbage = dir.path().join("garbage.bin");
    std::fs::write(&garbage, b"NOTACHECKPOINT").unwrap();
    assert_eq!(trisumo(&["rollout", "--checkpoint", arg(&garbage), "--out", arg(&out)]).status.code(), Some(2));
}

#[test]
fn log_level_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, SMALL_CONFIG).unwrap();
    let run = |level: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_trisumo"))
            .args(["train", "--config", arg(&config), "--out", arg(&dir.path().join(out))])
            .env("TRISUMO_LOG", level)
            .output()
            .unwrap()
    };
    let quiet = run("off", "q");
    assert!(quiet.stderr.is_empty());
    let chatty = run("info", "c");
    assert!(String::from_utf8_lossy(&chatty.stderr).contains("eval win"));
}
