use std::path::PathBuf;
use std::process::{Command, Output};

fn skeleta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skeleta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("models")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn success_prints_a_json_report() {
    let out = skeleta(&["essential", &model("i2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["command"], "essential");
    assert_eq!(report["result"]["cell_counts"], serde_json::json!([2, 2]));
}

#[test]
fn text_output() {
    let out = skeleta(&["--output", "text", "classify", "--of", "essential", &model("i0star.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classification: closed-pseudo-manifold"), "{text}");
}

#[test]
fn missing_file_and_bad_json_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let out = skeleta(&["essential", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[io]"));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ \"schema_version\": ").unwrap();
    let out = skeleta(&["essential", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[syntax]"));

    let out = skeleta(&["essential", "--corpus", "kodaira_In(n=1)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(model("pendant.json")).unwrap();
    let path = dir.path().join("bad_delta.json");
    std::fs::write(&path, text.replace("\"E\": \"0/1\"", "\"E\": \"2/1\"")).unwrap();
    let out = skeleta(&["lc-skeleton", "--delta", "circle", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dlt-violation"));

    let text = std::fs::read_to_string(model("i2.json")).unwrap();
    let path = dir.path().join("bad_parent.json");
    let broken = text.replacen("\"C0\": \"C1\"", "\"C0\": \"e1\"", 1);
    std::fs::write(&path, broken).unwrap();
    let out = skeleta(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["valid"], false);
}

#[test]
fn corpus_subcommand_writes_a_parseable_document() {
    let out = skeleta(&["corpus", "kodaira_In(n=2)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, std::fs::read(model("i2.json")).unwrap());
}

#[test]
fn jobs_preserve_input_order_and_output() {
    let specs: Vec<String> = (2..=9).map(|n| format!("kodaira_In(n={n})")).collect();
    let mut args = vec!["homology".to_owned()];
    for s in &specs {
        args.push("--corpus".into());
        args.push(s.clone());
    }
    let run = |jobs: &str| {
        let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
        a.extend(["--jobs", jobs]);
        skeleta(&a)
    };
    let serial = run("1");
    let parallel = run("4");
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
    let reports: Vec<serde_json::Value> = serde_json::Deserializer::from_slice(&serial.stdout)
        .into_iter()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(reports.len(), specs.len());
}

#[test]
fn worst_exit_code_wins_in_a_batch() {
    let out = skeleta(&["essential", &model("i2.json"), "--corpus", "nonsense", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stdout.is_empty());
}
