use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sted::corpus::read_manifest;
use sted::sweep::{run_sweep, sweep_csv, Metric, SweepOptions};
use sted_core::prelude::*;

fn sted(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sted")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::create_dir_all(p.parent().unwrap()).unwrap();
    fs::write(&p, text).unwrap();
    p
}

const A: &str = r#"{"user_name": "John", "age": 30, "tags": ["x", "y"]}"#;
const B: &str = r#"{"tags": ["y", "x"], "userName": "John", "age": 31}"#;

#[test]
fn compare_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", A);
    let o = sted(dir.path(), &["compare", "a.json", "a.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["score"], 1.0);
}

#[test]
fn compare_output_is_the_library_result() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", A);
    write(dir.path(), "b.json", B);
    let (a, b) = (parse_document(A).unwrap(), parse_document(B).unwrap());

    let o = sted(dir.path(), &["compare", "a.json", "b.json", "--metric", "ted"]);
    let want = serde_json::to_string(&ted_report(&a, &b, &TedConfig::default())).unwrap() + "\n";
    assert_eq!(stdout(&o), want);

    let o = sted(dir.path(), &["compare", "a.json", "b.json", "--mode", "semantic"]);
    let p = HashingEmbedder::default();
    let r = sted_similarity(&a, &b, &StedConfig::for_mode(Mode::Semantic), &EmbeddingContext::new(&p)).unwrap();
    assert_eq!(stdout(&o), serde_json::to_string(&r).unwrap() + "\n");

    let pretty = sted(dir.path(), &["--pretty", "compare", "a.json", "b.json", "--mode", "semantic"]);
    assert!(stdout(&pretty).lines().count() > 1);
    assert_eq!(json(&pretty), json(&o));
}

#[test]
fn compare_errors_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", A);
    write(dir.path(), "b.json", B);
    write(dir.path(), "broken.json", r#"{"a": "#);
    let o = sted(dir.path(), &["compare", "a.json", "broken.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.json"));

    let o = sted(dir.path(), &["compare", "a.json", "b.json", "--threshold", "0.999"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(json(&o)["score"].as_f64().unwrap() < 0.999);
    assert_eq!(sted(dir.path(), &["compare", "a.json", "b.json", "--threshold", "0.5"]).status.code(), Some(0));
    assert_eq!(sted(dir.path(), &["compare", "a.json", "missing.json"]).status.code(), Some(2));
    assert_eq!(sted(dir.path(), &["compare", "a.json", "b.json", "--mode", "fuzzy"]).status.code(), Some(2));
}

#[test]
fn config_file_is_validated_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", A);
    write(dir.path(), "b.json", B);
    write(dir.path(), "bad.json", r#"{"mode": "hybrid", "colour": "blue"}"#);
    let o = sted(dir.path(), &["--config", "bad.json", "compare", "a.json", "b.json"]);
    assert_eq!(o.status.code(), Some(2));

    write(dir.path(), "structural.json", r#"{"mode": "structural"}"#);
    let o = sted(dir.path(), &["--config", "structural.json", "compare", "a.json", "b.json"]);
    assert_eq!(json(&o)["mode"], "structural");
    let o = sted(dir.path(), &["--config", "structural.json", "compare", "a.json", "b.json", "--mode", "hybrid"]);
    assert_eq!(json(&o)["mode"], "hybrid");
}

#[test]
fn unreachable_provider_exits_with_provider_code() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", A);
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let config = format!(
        r#"{{"provider": {{"provider_id": "x", "kind": "remote-http", "endpoint": "http://127.0.0.1:{port}/",
             "dimension": 8, "timeout_ms": 500}}}}"#
    );
    write(dir.path(), "remote.json", &config);
    let o = sted(dir.path(), &["--config", "remote.json", "--cache", "c", "compare", "a.json", "a.json"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn consistency_of_identical_and_single_outputs() {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..10 {
        write(dir.path(), &format!("same/{i}.json"), A);
    }
    write(dir.path(), "one/only.json", B);
    let o = sted(dir.path(), &["consistency", "same"]);
    assert_eq!(json(&o)["consistency_score"], 1.0);
    assert_eq!(json(&o)["n_outputs"], 10);
    let o = sted(dir.path(), &["consistency", "one"]);
    assert_eq!(json(&o)["consistency_score"], 1.0);
    assert_eq!(json(&o)["n_outputs"], 1);
}

#[test]
fn consistency_matches_library_call() {
    let dir = tempfile::tempdir().unwrap();
    let texts = [A, B, r#"{"user_name": "Jane", "age": 30}"#, r#"{"name": "John", "age": "30", "tags": []}"#];
    for (i, t) in texts.iter().enumerate() {
        write(dir.path(), &format!("runs/out{i}.json"), t);
    }
    let docs: Vec<DocumentTree> = texts.iter().map(|t| parse_document(t).unwrap()).collect();
    let p = HashingEmbedder::default();
    let ctx = EmbeddingContext::new(&p);
    let c = StedConfig::default();

    let o = sted(dir.path(), &["consistency", "runs/*.json", "--alpha", "10"]);
    let want = evaluate_consistency(&docs, Mode::Hybrid, &c, &ctx, 10.0).unwrap();
    assert_eq!(stdout(&o), serde_json::to_string(&want).unwrap() + "\n");

    let o = sted(dir.path(), &["--jobs", "3", "consistency", "runs", "--all-modes"]);
    let report = |m| serde_json::to_string(&evaluate_consistency(&docs, m, &c, &ctx, 20.0).unwrap()).unwrap();
    let want = format!(
        "{{\"structural\":{},\"semantic\":{},\"hybrid\":{}}}\n",
        report(Mode::Structural),
        report(Mode::Semantic),
        report(Mode::Hybrid)
    );
    assert_eq!(stdout(&o), want);
}

#[test]
fn consistency_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "runs/a.json", A);
    write(dir.path(), "runs/b.json", "[1, 2");
    assert_eq!(sted(dir.path(), &["consistency", "runs"]).status.code(), Some(2));
    let o = sted(dir.path(), &["consistency", "runs", "--skip-bad"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["n_outputs"], 1);
    assert_eq!(sted(dir.path(), &["consistency", "nothing/*.json"]).status.code(), Some(2));
    assert_eq!(sted(dir.path(), &["consistency", "runs", "--skip-bad", "--alpha", "0"]).status.code(), Some(2));
}

fn tree_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| ["generate", "--kind", "field-rename", "--ratio", "0.4", "--seed", "9", "--out", out];
    assert_eq!(sted(dir.path(), &args("one")).status.code(), Some(0));
    assert_eq!(sted(dir.path(), &args("two")).status.code(), Some(0));
    let one = tree_bytes(&dir.path().join("one"));
    assert_eq!(one, tree_bytes(&dir.path().join("two")));
    assert_eq!(read_manifest(&dir.path().join("one/manifest.jsonl")).unwrap().len(), 75);
}

#[test]
fn generate_case_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = sted(dir.path(), &["generate", "--count", "75", "--kind", "all-gradual", "--out", "g"]);
    assert_eq!(json(&o)["cases"], 75 * 10 * 3);
    let records = read_manifest(&dir.path().join("g/manifest.jsonl")).unwrap();
    assert_eq!(records.len(), 2250);
    for kind in VariationKind::GRADUAL {
        assert_eq!(records.iter().filter(|r| r.kind == kind).count(), 750);
    }
    let r = &records[0];
    assert!(dir.path().join("g").join(&r.base_path).is_file());
    assert!(dir.path().join("g").join(&r.variant_path).is_file());

    let o = sted(dir.path(), &["generate", "--kind", "flatten", "--count", "75", "--out", "f"]);
    assert_eq!(json(&o)["cases"], 75);
    assert!(read_manifest(&dir.path().join("f/manifest.jsonl")).unwrap().iter().all(|r| r.ratio.is_none()));
}

#[test]
fn generate_rejects_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "spec.json", r#"{"target_depth": 7, "target_fields": 4, "seed": 1}"#);
    let o = sted(dir.path(), &["generate", "--base-spec", "spec.json", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
    write(dir.path(), "ok.json", r#"[{"target_depth": 3, "target_fields": 12, "seed": 1}]"#);
    let o = sted(dir.path(), &["generate", "--base-spec", "ok.json", "--kind", "nest", "--out", "y"]);
    assert_eq!(json(&o)["cases"], 1);
    for bad in [["--kind", "shuffle"], ["--ratio", "1.5"], ["--count", "0"]] {
        let mut args = vec!["generate", "--out", "z"];
        args.extend(bad);
        assert_eq!(sted(dir.path(), &args).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn sweep_rows_match_library_and_ted_decreases() {
    let dir = tempfile::tempdir().unwrap();
    sted(dir.path(), &["generate", "--kind", "field-rename", "--out", "c"]);
    let o = sted(dir.path(), &["sweep", "--corpus", "c", "--metrics", "ted"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("case_id,kind,ratio,metric,score\n"));

    let options = SweepOptions {
        metrics: vec![Metric::Ted],
        sted: StedConfig::default(),
        ted: TedConfig::default(),
        keep_going: false,
    };
    let p = HashingEmbedder::default();
    let rows = run_sweep(&dir.path().join("c/manifest.jsonl"), &options, &EmbeddingContext::new(&p)).unwrap();
    assert_eq!(text.as_bytes(), sweep_csv(&rows, false).unwrap());

    let mut means = Vec::new();
    for level in sted_core::variation::RATIO_LEVELS {
        let s: Vec<f64> = rows.iter().filter(|r| r.ratio == Some(level)).map(|r| r.score.unwrap()).collect();
        means.push(s.iter().sum::<f64>() / s.len() as f64);
    }
    for w in means.windows(2) {
        assert!(w[1] < w[0] + 0.02, "{means:?}");
    }
}

#[test]
fn sweep_failures() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "empty/manifest.jsonl", "");
    assert_eq!(sted(dir.path(), &["sweep", "--corpus", "empty"]).status.code(), Some(2));
    write(dir.path(), "junk/manifest.jsonl", "{\"case_id\": 1}\n");
    assert_eq!(sted(dir.path(), &["sweep", "--corpus", "junk"]).status.code(), Some(2));

    let o = sted(dir.path(), &["generate", "--kind", "nest", "--count", "3", "--out", "c"]);
    assert_eq!(o.status.code(), Some(0));
    let victim = read_manifest(&dir.path().join("c/manifest.jsonl")).unwrap()[1].variant_path.clone();
    fs::remove_file(dir.path().join("c").join(victim)).unwrap();
    assert_eq!(sted(dir.path(), &["sweep", "--corpus", "c"]).status.code(), Some(2));

    let o = sted(dir.path(), &["sweep", "--corpus", "c/manifest.jsonl", "--keep-going", "--out", "out/s.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("out/s.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "case_id,kind,ratio,metric,score,error");
    assert_eq!(lines.len(), 1 + 3 * 2);
    assert!(lines[3].contains(",sted,,") && lines[4].contains(",ted,,"));
    assert!(lines[1].ends_with(','));
}

#[test]
fn cache_commands() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", A);
    write(dir.path(), "b.json", B);
    let o = sted(dir.path(), &["--cache", "emb", "cache", "stats"]);
    assert_eq!(json(&o)["entries"], 0);
    let cold = sted(dir.path(), &["--cache", "emb", "compare", "a.json", "b.json"]);
    let o = sted(dir.path(), &["--cache", "emb", "cache", "stats"]);
    let entries = json(&o)["entries"].as_u64().unwrap();
    assert!(entries > 0);
    let warm = sted(dir.path(), &["--cache", "emb", "compare", "a.json", "b.json"]);
    assert_eq!(cold.stdout, warm.stdout);
    let o = sted(dir.path(), &["--cache", "emb", "cache", "clear"]);
    assert_eq!(json(&o)["removed"].as_u64(), Some(entries));
    assert_eq!(json(&sted(dir.path(), &["--cache", "emb", "cache", "stats"]))["entries"], 0);
}
