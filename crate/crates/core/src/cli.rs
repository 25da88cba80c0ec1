//! `bitext` command-line entry point.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error, 3
//! runtime failure. Files are written to a `.partial` sibling and renamed into
//! place on success, so a failed run never leaves a truncated artifact under
//! the requested name.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::aligner::{AlignError, Engine, MiningParams, SimilarityMatrix};
use crate::classifier::{train, ClassifierError, ClassifierModel, TrainConfig};
use crate::corpus::{load_document_pairs, load_seed_corpus, tokenize, CorpusError, DocumentPair};
use crate::lexicon::{load_lexicon, Lexicon, LexiconError};
use crate::metrics::{bleu, nist, sample_test_set, split_tokens, MetricsError};
use crate::miner::{MineError, Miner, MinerConfig};
use crate::tuner::{load_gold_set, tune, Grids, TuneError};

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Runtime(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Data(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

macro_rules! data_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Data(e.to_string())
            }
        }
    )*};
}

data_error!(CorpusError, LexiconError, ClassifierError, TuneError, MetricsError, AlignError);

impl From<MineError> for Failure {
    fn from(e: MineError) -> Self {
        match e {
            MineError::Sink { .. } => Failure::Runtime(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Data(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "bitext", version, about = "Mine parallel sentences from comparable document pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train a translation-pair classifier from a line-aligned seed corpus
    Train(TrainArgs),
    /// Grid-search threshold and penalty against a gold development set
    Tune(TuneArgs),
    /// Mine sentence pairs from a document-pair JSONL file
    Mine(MineArgs),
    /// Align a single similarity matrix (debugging)
    Align(AlignArgs),
    /// Score hypotheses against references with BLEU or NIST
    Eval(EvalArgs),
    /// Draw a segment-stratified test set from a parallel corpus
    Sample(SampleArgs),
    /// Pair and unique-token counts for a TSV of sentence pairs
    Stats(StatsArgs),
    /// Time mining across engines and worker counts
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[arg(long)]
    src: PathBuf,
    #[arg(long)]
    tgt: PathBuf,
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Train the target-to-source model
    #[arg(long)]
    reverse: bool,
    #[arg(long, default_value_t = 2)]
    negatives: usize,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Source language tag (defaults to the lexicon's)
    #[arg(long)]
    src_lang: Option<String>,
    /// Target language tag (defaults to the lexicon's)
    #[arg(long)]
    tgt_lang: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct TuneArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    penalties: Option<Vec<f64>>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct MiningFlags {
    #[arg(long)]
    docs: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Backward (target-to-source) model for bidirectional mining
    #[arg(long)]
    model_rev: Option<PathBuf>,
    #[arg(long)]
    lexicon: PathBuf,
    /// Defaults to the model's stored threshold
    #[arg(long)]
    threshold: Option<f64>,
    /// Defaults to the model's stored penalty
    #[arg(long)]
    penalty: Option<f64>,
    #[arg(long, default_value_t = 1)]
    wavefront_workers: usize,
}

#[derive(Args, Debug)]
struct MineArgs {
    #[command(flatten)]
    mining: MiningFlags,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value = "sequential")]
    engine: Engine,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct AlignArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    penalty: f64,
    #[arg(long, default_value = "sequential")]
    engine: Engine,
    /// Wavefront evaluators
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Metric {
    Bleu,
    Nist,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_enum)]
    metric: Metric,
    #[arg(long)]
    hyp: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Highest n-gram order (default 4 for BLEU, 5 for NIST)
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    src: PathBuf,
    #[arg(long)]
    tgt: PathBuf,
    #[arg(long, default_value_t = 200)]
    segments: usize,
    #[arg(long, default_value_t = 10)]
    per_segment: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out_test: PathBuf,
    #[arg(long)]
    out_rest: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    mining: MiningFlags,
    #[arg(long, value_delimiter = ',', default_value = "search,sequential,wavefront")]
    engines: Vec<Engine>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    workers: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long)]
    json: bool,
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Train(a) => run_train(a),
        Command::Tune(a) => run_tune(a),
        Command::Mine(a) => run_mine(a),
        Command::Align(a) => run_align(a),
        Command::Eval(a) => run_eval(a),
        Command::Sample(a) => run_sample(a),
        Command::Stats(a) => run_stats(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}

fn commit(partial: &Path, path: &Path) -> Result<(), Failure> {
    fs::rename(partial, path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

/// Writes `contents` to `path` through a `.partial` sibling.
fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let partial = partial_path(path);
    fs::write(&partial, contents).map_err(|e| Failure::Runtime(format!("{}: {e}", partial.display())))?;
    commit(&partial, path)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn check_threshold(t: f64) -> Result<(), Failure> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(invalid(format!("threshold {t} must lie in [0, 1]")))
    }
}

fn check_penalty(p: f64) -> Result<(), Failure> {
    if p >= 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("penalty {p} must be finite and >= 0")))
    }
}

fn check_count(name: &str, n: usize) -> Result<(), Failure> {
    if n >= 1 {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be >= 1")))
    }
}

/// The lexicon read in the model's direction. A lexicon whose direction
/// matches neither orientation is used as-is.
fn orient_lexicon(lex: Lexicon, model: &ClassifierModel) -> Lexicon {
    let (src, tgt) = (&model.direction.0, &model.direction.1);
    if (&lex.direction.0, &lex.direction.1) == (tgt, src) {
        lex.reversed()
    } else {
        lex.with_direction(src, tgt)
    }
}

fn run_train(a: TrainArgs) -> Result<(), Failure> {
    check_count("negatives", a.negatives)?;
    check_count("epochs", a.epochs)?;
    let lex = load_lexicon(&a.lexicon)?;
    let src_lang = a.src_lang.clone().unwrap_or_else(|| lex.direction.0.clone());
    let tgt_lang = a.tgt_lang.clone().unwrap_or_else(|| lex.direction.1.clone());
    if src_lang == tgt_lang {
        return Err(invalid(format!("source and target language are both `{src_lang}`")));
    }
    let lex = lex.with_direction(&src_lang, &tgt_lang);
    let mut corpus = load_seed_corpus(&a.src, &a.tgt)?;
    let lex = if a.reverse {
        corpus = corpus.reversed();
        lex.reversed()
    } else {
        lex
    };
    let cfg = TrainConfig {
        negatives_per_positive: a.negatives,
        epochs: a.epochs,
        seed: a.seed,
    };
    let outcome = train(&corpus, &lex, &cfg)?;
    write_file(&a.out, outcome.model.to_json().as_bytes())?;
    let m = &outcome.model;
    if a.json {
        print_json(&json!({
            "model": a.out.display().to_string(),
            "direction": [m.direction.0, m.direction.1],
            "pairs": corpus.len(),
            "dropped_lines": corpus.dropped,
            "seed": a.seed,
            "heldout_size": outcome.heldout_size,
            "heldout_f1": outcome.heldout_f1,
            "heldout_auc": outcome.heldout_auc,
            "default_threshold": m.default_threshold,
            "default_penalty": m.default_penalty,
            "warnings": outcome.warnings,
        }));
    } else {
        println!(
            "trained {}->{} on {} pairs (seed {}, {} dropped lines)",
            m.direction.0, m.direction.1, corpus.len(), a.seed, corpus.dropped
        );
        println!(
            "held-out: {} examples, F1 {:.4}, ROC AUC {:.4}",
            outcome.heldout_size, outcome.heldout_f1, outcome.heldout_auc
        );
        println!(
            "defaults: threshold {:.2}, penalty {:.2}",
            m.default_threshold, m.default_penalty
        );
    }
    Ok(())
}

fn run_tune(a: TuneArgs) -> Result<(), Failure> {
    let mut grids = Grids::default();
    if let Some(t) = a.thresholds {
        grids.thresholds = t;
    }
    if let Some(p) = a.penalties {
        grids.penalties = p;
    }
    if grids.thresholds.is_empty() || grids.penalties.is_empty() {
        return Err(invalid("grids must not be empty"));
    }
    grids.thresholds.iter().try_for_each(|&t| check_threshold(t))?;
    grids.penalties.iter().try_for_each(|&p| check_penalty(p))?;
    let model = ClassifierModel::load(&a.model)?;
    let lex = orient_lexicon(load_lexicon(&a.lexicon)?, &model);
    let dev = load_gold_set(&a.gold)?;
    let result = tune(&model, &lex, &dev, &grids)?;
    write_file(&a.out, result.to_json().as_bytes())?;
    if a.json {
        print!("{}", result.to_json());
    } else {
        println!(
            "best: threshold {:.2}, penalty {:.2} -> P {:.4} R {:.4} F1 {:.4} ({} grid points, {} documents)",
            result.best.threshold,
            result.best.penalty,
            result.precision,
            result.recall,
            result.f1,
            result.trace.len(),
            dev.len()
        );
    }
    Ok(())
}

struct LoadedModels {
    forward: ClassifierModel,
    backward: Option<ClassifierModel>,
    lex: Lexicon,
    params: MiningParams,
}

fn load_models(m: &MiningFlags) -> Result<LoadedModels, Failure> {
    if let Some(t) = m.threshold {
        check_threshold(t)?;
    }
    if let Some(p) = m.penalty {
        check_penalty(p)?;
    }
    check_count("wavefront-workers", m.wavefront_workers)?;
    let forward = ClassifierModel::load(&m.model)?;
    let backward = m.model_rev.as_ref().map(ClassifierModel::load).transpose()?;
    let lex = orient_lexicon(load_lexicon(&m.lexicon)?, &forward);
    let params = MiningParams::new(
        m.threshold.unwrap_or(forward.default_threshold),
        m.penalty.unwrap_or(forward.default_penalty),
    )?;
    Ok(LoadedModels {
        forward,
        backward,
        lex,
        params,
    })
}

fn run_mine(a: MineArgs) -> Result<(), Failure> {
    check_count("workers", a.workers)?;
    let models = load_models(&a.mining)?;
    let cfg = MinerConfig {
        params: models.params,
        workers: a.workers,
        engine: a.engine,
        wavefront_workers: a.mining.wavefront_workers,
        seed: a.seed,
    };
    let miner = Miner::new(&models.forward, models.backward.as_ref(), &models.lex, cfg)?;
    let mut reader = load_document_pairs(&a.mining.docs)?;
    let partial = partial_path(&a.out);
    let file = File::create(&partial).map_err(|e| Failure::Runtime(format!("{}: {e}", partial.display())))?;
    let mut out = BufWriter::new(file);
    let mined = miner.mine_corpus(reader.by_ref(), &mut out);
    drop(out);
    let mut report = match mined {
        Ok(report) => report,
        // a sink failure leaves the .partial file behind as the marker
        Err(e @ MineError::Sink { .. }) => return Err(e.into()),
        Err(e) => {
            let _ = fs::remove_file(&partial);
            return Err(e.into());
        }
    };
    commit(&partial, &a.out)?;
    report.docs_skipped += reader.skipped();
    let report_json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(path) = &a.report {
        write_file(path, report_json.as_bytes())?;
    }
    if a.json {
        print!("{report_json}");
    } else {
        println!(
            "mined {} pairs ({} forward, {} backward) from {} documents, {} skipped",
            report.pairs_emitted, report.forward_pairs, report.backward_pairs, report.docs_processed, report.docs_skipped
        );
        println!(
            "unique tokens: {} source, {} target; threshold {:.2}, penalty {:.2}, engine {}, {} workers, seed {}",
            report.unique_src_tokens,
            report.unique_tgt_tokens,
            report.threshold,
            report.penalty,
            report.engine,
            report.workers,
            report.seed
        );
        println!("wall clock {:.3} s", report.wall_clock_seconds);
    }
    Ok(())
}

fn run_align(a: AlignArgs) -> Result<(), Failure> {
    check_penalty(a.penalty)?;
    check_count("workers", a.workers)?;
    let text = fs::read_to_string(&a.matrix).map_err(|e| invalid(format!("{}: {e}", a.matrix.display())))?;
    let s = SimilarityMatrix::from_tsv(&text)?;
    let path = a.engine.align(&s, a.penalty, a.workers)?;
    print!("{}", path.render(&s));
    Ok(())
}

fn read_lines(path: &Path) -> Result<Vec<String>, Failure> {
    let file = File::open(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    BufReader::new(file)
        .lines()
        .collect::<Result<_, _>>()
        .map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn run_eval(a: EvalArgs) -> Result<(), Failure> {
    if let Some(n) = a.max_n {
        check_count("max-n", n)?;
    }
    let hyps: Vec<Vec<String>> = read_lines(&a.hyp)?.iter().map(|l| split_tokens(l)).collect();
    let refs: Vec<Vec<String>> = read_lines(&a.reference)?.iter().map(|l| split_tokens(l)).collect();
    match a.metric {
        Metric::Bleu => {
            let b = bleu(&hyps, &refs, a.max_n.unwrap_or(4))?;
            if a.json {
                print_json(&json!({
                    "metric": "bleu",
                    "score": b.score,
                    "details": {"precisions": b.precisions, "brevity": b.brevity, "hyp_len": b.hyp_len, "ref_len": b.ref_len},
                }));
            } else {
                let precisions: Vec<String> = b.precisions.iter().map(|p| format!("{:.1}", 100.0 * p)).collect();
                println!(
                    "BLEU = {:.2}, {} (BP={:.3}, hyp_len={}, ref_len={})",
                    100.0 * b.score,
                    precisions.join("/"),
                    b.brevity,
                    b.hyp_len,
                    b.ref_len
                );
            }
        }
        Metric::Nist => {
            let n = nist(&hyps, &refs, a.max_n.unwrap_or(5))?;
            if a.json {
                print_json(&json!({
                    "metric": "nist",
                    "score": n.score,
                    "details": {"info": n.info, "brevity": n.brevity, "hyp_len": n.hyp_len, "ref_len": n.ref_len},
                }));
            } else {
                let info: Vec<String> = n.info.iter().map(|v| format!("{v:.4}")).collect();
                println!("NIST = {:.4}, info {} (BP={:.3})", n.score, info.join("/"), n.brevity);
            }
        }
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn run_sample(a: SampleArgs) -> Result<(), Failure> {
    check_count("segments", a.segments)?;
    check_count("per-segment", a.per_segment)?;
    let src = read_lines(&a.src)?;
    let tgt = read_lines(&a.tgt)?;
    if src.len() != tgt.len() {
        return Err(invalid(format!("line counts differ: {} vs {}", src.len(), tgt.len())));
    }
    let corpus: Vec<(String, String)> = src.into_iter().zip(tgt).collect();
    let split = sample_test_set(&corpus, a.segments, a.per_segment, a.seed)?;
    let side = |items: &[(String, String)], pick: fn(&(String, String)) -> &String| {
        items.iter().fold(String::new(), |mut acc, p| {
            let _ = writeln!(acc, "{}", pick(p));
            acc
        })
    };
    let outputs = [
        (with_suffix(&a.out_test, ".src"), side(&split.test, |p| &p.0)),
        (with_suffix(&a.out_test, ".tgt"), side(&split.test, |p| &p.1)),
        (with_suffix(&a.out_rest, ".src"), side(&split.remainder, |p| &p.0)),
        (with_suffix(&a.out_rest, ".tgt"), side(&split.remainder, |p| &p.1)),
    ];
    for (path, text) in &outputs {
        write_file(path, text.as_bytes())?;
    }
    if a.json {
        print_json(&json!({
            "test": split.test.len(),
            "remainder": split.remainder.len(),
            "segments": a.segments,
            "per_segment": a.per_segment,
            "seed": a.seed,
        }));
    } else {
        println!(
            "test {} pairs, remainder {} pairs ({} segments x {}, seed {})",
            split.test.len(),
            split.remainder.len(),
            a.segments,
            a.per_segment,
            a.seed
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct PairStats {
    pairs: usize,
    unique_src_tokens: usize,
    unique_tgt_tokens: usize,
    forward_pairs: usize,
    backward_pairs: usize,
}

fn run_stats(a: StatsArgs) -> Result<(), Failure> {
    let lines = read_lines(&a.pairs)?;
    let mut src_tokens = std::collections::HashSet::new();
    let mut tgt_tokens = std::collections::HashSet::new();
    let mut stats = PairStats {
        pairs: 0,
        unique_src_tokens: 0,
        unique_tgt_tokens: 0,
        forward_pairs: 0,
        backward_pairs: 0,
    };
    for (idx, line) in lines.iter().enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 {
            return Err(invalid(format!("line {}: expected at least 2 tab-separated columns", idx + 1)));
        }
        stats.pairs += 1;
        src_tokens.extend(tokenize(cols[0]).into_iter().map(|t| t.to_lowercase()));
        tgt_tokens.extend(tokenize(cols[1]).into_iter().map(|t| t.to_lowercase()));
        match cols.get(4).copied() {
            Some("forward") => stats.forward_pairs += 1,
            Some("backward") => stats.backward_pairs += 1,
            _ => {}
        }
    }
    stats.unique_src_tokens = src_tokens.len();
    stats.unique_tgt_tokens = tgt_tokens.len();
    if a.json {
        print_json(&stats);
    } else {
        println!("pairs              {}", stats.pairs);
        println!("unique src tokens  {}", stats.unique_src_tokens);
        println!("unique tgt tokens  {}", stats.unique_tgt_tokens);
        println!("forward / backward {} / {}", stats.forward_pairs, stats.backward_pairs);
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchRow {
    engine: String,
    workers: usize,
    wavefront_workers: usize,
    pairs: usize,
    seconds: f64,
}

fn run_bench(a: BenchArgs) -> Result<(), Failure> {
    if a.engines.is_empty() || a.workers.is_empty() {
        return Err(invalid("--engines and --workers must not be empty"));
    }
    a.workers.iter().try_for_each(|&w| check_count("workers", w))?;
    check_count("repeat", a.repeat)?;
    let models = load_models(&a.mining)?;
    let docs: Vec<DocumentPair> = load_document_pairs(&a.mining.docs)?.collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for &engine in &a.engines {
        for &workers in &a.workers {
            let cfg = MinerConfig {
                params: models.params,
                workers,
                engine,
                wavefront_workers: a.mining.wavefront_workers,
                seed: 42,
            };
            let miner = Miner::new(&models.forward, models.backward.as_ref(), &models.lex, cfg)?;
            let mut best = f64::INFINITY;
            let mut pairs = 0;
            for _ in 0..a.repeat {
                let started = Instant::now();
                let report = miner.mine_corpus(docs.iter().cloned().map(Ok::<_, CorpusError>), &mut std::io::sink())?;
                best = best.min(started.elapsed().as_secs_f64());
                pairs = report.pairs_emitted;
            }
            rows.push(BenchRow {
                engine: engine.label().to_string(),
                workers,
                wavefront_workers: a.mining.wavefront_workers,
                pairs,
                seconds: best,
            });
        }
    }
    if a.json {
        print_json(&json!({ "documents": docs.len(), "rows": rows }));
    } else {
        println!("{} documents", docs.len());
        println!("{:<12} {:>7} {:>9} {:>8} {:>10}", "engine", "workers", "wavefront", "pairs", "seconds");
        for r in &rows {
            println!(
                "{:<12} {:>7} {:>9} {:>8} {:>10.3}",
                r.engine, r.workers, r.wavefront_workers, r.pairs, r.seconds
            );
        }
    }
    Ok(())
}
