use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bitext_miner::synth::{gold_set_jsonl, SynthConfig, SynthLanguages};

fn bitext(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitext"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("bitext binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let mut synth = SynthLanguages::new(SynthConfig::default());
    fs::write(dir.path().join("lex.tsv"), synth.lexicon().to_tsv()).unwrap();
    let (src, tgt) = synth.parallel_lines(400);
    fs::write(dir.path().join("seed.src"), src.join("\n") + "\n").unwrap();
    fs::write(dir.path().join("seed.tgt"), tgt.join("\n") + "\n").unwrap();
    fs::write(dir.path().join("dev.jsonl"), gold_set_jsonl(&synth.comparable_corpus("dev", 15), true)).unwrap();
    fs::write(dir.path().join("docs.jsonl"), gold_set_jsonl(&synth.comparable_corpus("doc", 25), false)).unwrap();
    dir
}

fn train(dir: &Path, out: &str, reverse: bool) {
    let mut args = vec!["train", "--src", "seed.src", "--tgt", "seed.tgt", "--lexicon", "lex.tsv", "--out", out];
    if reverse {
        args.push("--reverse");
    }
    let o = bitext(dir, &args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn train_tune_mine_stats() {
    let ws = workspace();
    let dir = ws.path();
    train(dir, "fwd.json", false);
    train(dir, "bwd.json", true);
    let fwd: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("fwd.json")).unwrap()).unwrap();
    let bwd: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("bwd.json")).unwrap()).unwrap();
    assert_eq!(fwd["direction"], serde_json::json!(["xs", "xt"]));
    assert_eq!(bwd["direction"], serde_json::json!(["xt", "xs"]));
    assert_eq!(fwd["weights"].as_array().unwrap().len(), 7);

    let o = bitext(dir, &["tune", "--model", "fwd.json", "--lexicon", "lex.tsv", "--gold", "dev.jsonl", "--out", "t.json"]);
    assert_eq!(code(&o), 0);
    let tuned: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("t.json")).unwrap()).unwrap();
    assert_eq!(tuned["trace"].as_array().unwrap().len(), 19 * 6);
    let threshold = tuned["best"]["threshold"].as_f64().unwrap().to_string();
    let penalty = tuned["best"]["penalty"].as_f64().unwrap().to_string();

    let o = bitext(
        dir,
        &[
            "mine", "--docs", "docs.jsonl", "--model", "fwd.json", "--model-rev", "bwd.json", "--lexicon", "lex.tsv",
            "--out", "pairs.tsv", "--threshold", &threshold, "--penalty", &penalty, "--workers", "2", "--json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mined = fs::read_to_string(dir.join("pairs.tsv")).unwrap();
    assert_eq!(report["pairs_emitted"].as_u64().unwrap() as usize, mined.lines().count());
    assert_eq!(report["docs_processed"], 25);
    assert!(mined.lines().all(|l| l.split('\t').count() == 5));
    assert!(!dir.join("pairs.tsv.partial").exists());

    let o = bitext(dir, &["stats", "--pairs", "pairs.tsv", "--json"]);
    assert_eq!(code(&o), 0);
    let stats: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(stats["pairs"], report["pairs_emitted"]);
    assert_eq!(stats["unique_src_tokens"], report["unique_src_tokens"]);
}

#[test]
fn mine_defaults_to_model_parameters() {
    let ws = workspace();
    let dir = ws.path();
    train(dir, "fwd.json", false);
    let o = bitext(dir, &["mine", "--docs", "docs.jsonl", "--model", "fwd.json", "--lexicon", "lex.tsv", "--out", "p.tsv", "--json"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let model: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("fwd.json")).unwrap()).unwrap();
    assert_eq!(report["threshold"], model["default_threshold"]);
    assert_eq!(report["penalty"], model["default_penalty"]);
    assert_eq!(report["bidirectional"], false);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&bitext(dir.path(), &["mine"])), 1);
    assert_eq!(code(&bitext(dir.path(), &[])), 1);
    assert_eq!(code(&bitext(dir.path(), &["eval", "--metric", "ter", "--hyp", "h", "--ref", "r"])), 1);
    assert_eq!(code(&bitext(dir.path(), &["--version"])), 0);
}

#[test]
fn data_errors_exit_two() {
    let ws = workspace();
    let dir = ws.path();
    train(dir, "fwd.json", false);
    let missing_gold = bitext(dir, &["tune", "--model", "fwd.json", "--lexicon", "lex.tsv", "--gold", "nope.jsonl", "--out", "t.json"]);
    assert_eq!(code(&missing_gold), 2);
    assert!(!dir.join("t.json").exists());

    let bad_threshold = bitext(
        dir,
        &["mine", "--docs", "docs.jsonl", "--model", "fwd.json", "--lexicon", "lex.tsv", "--out", "p.tsv", "--threshold", "1.5"],
    );
    assert_eq!(code(&bad_threshold), 2);

    fs::write(dir.join("broken.jsonl"), "{\"id\": \"a\", \"src_lang\": \"xs\"\n").unwrap();
    let malformed = bitext(dir, &["mine", "--docs", "broken.jsonl", "--model", "fwd.json", "--lexicon", "lex.tsv", "--out", "p.tsv"]);
    assert_eq!(code(&malformed), 2);
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("line 1"));
    assert!(!dir.join("p.tsv").exists());

    fs::write(dir.join("short.tgt"), "only one line\n").unwrap();
    let mismatch = bitext(dir, &["train", "--src", "seed.src", "--tgt", "short.tgt", "--lexicon", "lex.tsv", "--out", "m.json"]);
    assert_eq!(code(&mismatch), 2);
}

#[test]
fn unwritable_output_exits_three() {
    let ws = workspace();
    let dir = ws.path();
    train(dir, "fwd.json", false);
    let o = bitext(
        dir,
        &["mine", "--docs", "docs.jsonl", "--model", "fwd.json", "--lexicon", "lex.tsv", "--out", "no/such/dir/p.tsv"],
    );
    assert_eq!(code(&o), 3);
}

#[test]
fn align_prints_path() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.tsv"), "0.9\t0.0\n0.0\t0.9\n").unwrap();
    for engine in ["sequential", "wavefront", "search"] {
        let o = bitext(dir.path(), &["align", "--matrix", "m.tsv", "--penalty", "0.2", "--engine", engine]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), "D 0 0 0.100000\nD 1 1 0.100000\nTOTAL 0.200000\n");
    }
    fs::write(dir.path().join("bad.tsv"), "0.9\t1.5\n").unwrap();
    assert_eq!(code(&bitext(dir.path(), &["align", "--matrix", "bad.tsv", "--penalty", "0.2"])), 2);
}

#[test]
fn eval_reports_scores() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("h.txt"), "the cat sat\n").unwrap();
    fs::write(dir.path().join("r.txt"), "the cat sat on the mat\n").unwrap();
    let o = bitext(dir.path(), &["eval", "--metric", "bleu", "--hyp", "h.txt", "--ref", "r.txt", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["score"].as_f64().unwrap() - 0.309_348_503_326_605_6).abs() < 1e-9);
    fs::write(dir.path().join("r2.txt"), "a\nb\n").unwrap();
    assert_eq!(code(&bitext(dir.path(), &["eval", "--metric", "nist", "--hyp", "h.txt", "--ref", "r2.txt"])), 2);
}

#[test]
fn sample_partitions_lines() {
    let dir = tempfile::tempdir().unwrap();
    let src: Vec<String> = (0..100).map(|k| format!("s{k}")).collect();
    let tgt: Vec<String> = (0..100).map(|k| format!("t{k}")).collect();
    fs::write(dir.path().join("c.src"), src.join("\n") + "\n").unwrap();
    fs::write(dir.path().join("c.tgt"), tgt.join("\n") + "\n").unwrap();
    let o = bitext(
        dir.path(),
        &[
            "sample", "--src", "c.src", "--tgt", "c.tgt", "--segments", "10", "--per-segment", "3", "--out-test", "test",
            "--out-rest", "rest",
        ],
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("seed 42"));
    let read = |name: &str| -> Vec<String> {
        fs::read_to_string(dir.path().join(name)).unwrap().lines().map(String::from).collect()
    };
    let (ts, tt, rs) = (read("test.src"), read("test.tgt"), read("rest.src"));
    assert_eq!(ts.len(), 30);
    assert_eq!(rs.len(), 70);
    for (s, t) in ts.iter().zip(&tt) {
        assert_eq!(s[1..], t[1..]);
    }
    let mut all: Vec<String> = ts.into_iter().chain(rs).collect();
    all.sort();
    let mut expected = src;
    expected.sort();
    assert_eq!(all, expected);
    let too_many = bitext(
        dir.path(),
        &["sample", "--src", "c.src", "--tgt", "c.tgt", "--segments", "10", "--per-segment", "11", "--out-test", "x", "--out-rest", "y"],
    );
    assert_eq!(code(&too_many), 2);
}

#[test]
fn bench_prints_one_row_per_configuration() {
    let ws = workspace();
    let dir = ws.path();
    train(dir, "fwd.json", false);
    let o = bitext(
        dir,
        &[
            "bench", "--docs", "docs.jsonl", "--model", "fwd.json", "--lexicon", "lex.tsv", "--engines",
            "search,sequential,wavefront", "--workers", "1,2", "--json",
        ],
    );
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["pairs"] == rows[0]["pairs"]));
}
