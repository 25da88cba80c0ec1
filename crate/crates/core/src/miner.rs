//! End-to-end mining over a stream of document pairs.
//!
//! One reader thread feeds a bounded queue, `workers` threads mine documents
//! independently against shared read-only models, and the calling thread
//! writes results strictly in input order. Output is therefore independent
//! of the worker count.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use crossbeam_channel::{bounded, unbounded};
use serde::Serialize;
use thiserror::Error;

use crate::aligner::{build_similarity_matrix, extract_pairs, AlignError, Engine, MiningParams};
use crate::classifier::ClassifierModel;
use crate::corpus::{DocumentPair, Sentence};
use crate::lexicon::Lexicon;

#[derive(Debug, Error)]
pub enum MineError {
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error("document {doc}: {source}")]
    Document {
        doc: String,
        #[source]
        source: AlignError,
    },
    #[error("input: {0}")]
    Input(String),
    #[error("output write failed after {written} pairs: {source}")]
    Sink {
        written: usize,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid miner configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinedPair {
    pub src: Sentence,
    pub tgt: Sentence,
    pub src_index: usize,
    pub tgt_index: usize,
    pub confidence: f64,
    pub doc_id: String,
    pub direction: Direction,
}

fn single_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl MinedPair {
    pub fn key(&self) -> (&str, &str) {
        (&self.src.normalized, &self.tgt.normalized)
    }

    /// `src<TAB>tgt<TAB>confidence<TAB>doc_id<TAB>direction`, no trailing newline.
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{:.6}\t{}\t{}",
            single_line(&self.src.raw),
            single_line(&self.tgt.raw),
            self.confidence,
            single_line(&self.doc_id),
            self.direction
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinerConfig {
    pub params: MiningParams,
    pub workers: usize,
    pub engine: Engine,
    pub wavefront_workers: usize,
    pub seed: u64,
}

impl MinerConfig {
    pub fn new(params: MiningParams) -> Self {
        MinerConfig {
            params,
            workers: 1,
            engine: Engine::Sequential,
            wavefront_workers: 1,
            seed: 42,
        }
    }

    fn validate(&self) -> Result<(), MineError> {
        if self.workers == 0 || self.wavefront_workers == 0 {
            return Err(MineError::Config("worker counts must be >= 1".into()));
        }
        MiningParams::new(self.params.threshold, self.params.penalty)?;
        Ok(())
    }
}

/// Mines one document pair with one model. `lex` must be oriented like the
/// model. A model whose direction is the reverse of the pair's mines the
/// swapped pair and returns pairs re-oriented to the pair's direction, tagged
/// [`Direction::Backward`].
pub fn mine_document(
    pair: &DocumentPair,
    model: &ClassifierModel,
    lex: &Lexicon,
    cfg: &MinerConfig,
) -> Result<Vec<MinedPair>, AlignError> {
    let model_dir = (model.direction.0.as_str(), model.direction.1.as_str());
    let (src_lang, tgt_lang) = pair.direction();
    if model_dir == (src_lang, tgt_lang) {
        let s = build_similarity_matrix(pair, model, lex)?;
        let path = cfg.engine.align(&s, cfg.params.penalty, cfg.wavefront_workers)?;
        Ok(extract_pairs(&path, &s, pair, &cfg.params))
    } else if model_dir == (tgt_lang, src_lang) {
        let swapped = pair.swapped();
        let s = build_similarity_matrix(&swapped, model, lex)?;
        let path = cfg.engine.align(&s, cfg.params.penalty, cfg.wavefront_workers)?;
        let mut out: Vec<MinedPair> = extract_pairs(&path, &s, &swapped, &cfg.params)
            .into_iter()
            .map(|p| MinedPair {
                src: p.tgt,
                tgt: p.src,
                src_index: p.tgt_index,
                tgt_index: p.src_index,
                direction: Direction::Backward,
                ..p
            })
            .collect();
        out.sort_by_key(|p| (p.src_index, p.tgt_index));
        Ok(out)
    } else {
        Err(AlignError::Direction {
            model_src: model.direction.0.clone(),
            model_tgt: model.direction.1.clone(),
            doc_src: src_lang.to_string(),
            doc_tgt: tgt_lang.to_string(),
        })
    }
}

/// Union of two pair lists, deduplicated on normalized text. Duplicates keep
/// the higher confidence, and the forward tag on exact ties. Output is sorted
/// by document id, then source and target sentence index.
pub fn bidirectional_merge(forward: Vec<MinedPair>, backward: Vec<MinedPair>) -> Vec<MinedPair> {
    let mut kept: Vec<MinedPair> = Vec::with_capacity(forward.len() + backward.len());
    let mut index: HashMap<(String, String, String), usize> = HashMap::new();
    for p in forward.into_iter().chain(backward) {
        let key = (p.doc_id.clone(), p.src.normalized.clone(), p.tgt.normalized.clone());
        match index.get(&key) {
            Some(&k) => {
                let current = &kept[k];
                let better = p.confidence > current.confidence
                    || (p.confidence == current.confidence && p.direction < current.direction);
                if better {
                    kept[k] = p;
                }
            }
            None => {
                index.insert(key, kept.len());
                kept.push(p);
            }
        }
    }
    kept.sort_by(|a, b| {
        (a.doc_id.as_str(), a.src_index, a.tgt_index, a.direction)
            .cmp(&(b.doc_id.as_str(), b.src_index, b.tgt_index, b.direction))
    });
    kept
}

/// Distinct normalized tokens on the source and target sides.
pub fn count_unique_tokens(pairs: &[MinedPair]) -> (usize, usize) {
    let src: HashSet<String> = pairs.iter().flat_map(|p| p.src.normalized_tokens()).collect();
    let tgt: HashSet<String> = pairs.iter().flat_map(|p| p.tgt.normalized_tokens()).collect();
    (src.len(), tgt.len())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiningReport {
    pub pairs_emitted: usize,
    pub unique_src_tokens: usize,
    pub unique_tgt_tokens: usize,
    pub docs_processed: usize,
    pub docs_skipped: usize,
    pub wall_clock_seconds: f64,
    pub forward_pairs: usize,
    pub backward_pairs: usize,
    pub threshold: f64,
    pub penalty: f64,
    pub engine: String,
    pub workers: usize,
    pub wavefront_workers: usize,
    pub bidirectional: bool,
    pub seed: u64,
}

/// Models and lexicon orientations shared by every mining worker.
pub struct Miner<'a> {
    forward: &'a ClassifierModel,
    backward: Option<&'a ClassifierModel>,
    lex: &'a Lexicon,
    lex_reversed: Lexicon,
    cfg: MinerConfig,
}

enum DocOutcome {
    Mined(Vec<MinedPair>),
    Skipped(String),
}

impl<'a> Miner<'a> {
    /// `lex` is oriented like the forward model; the backward model gets the
    /// reversed table.
    pub fn new(
        forward: &'a ClassifierModel,
        backward: Option<&'a ClassifierModel>,
        lex: &'a Lexicon,
        cfg: MinerConfig,
    ) -> Result<Self, MineError> {
        cfg.validate()?;
        if let Some(b) = backward {
            if (&b.direction.0, &b.direction.1) != (&forward.direction.1, &forward.direction.0) {
                return Err(MineError::Config(format!(
                    "backward model direction {}->{} is not the reverse of {}->{}",
                    b.direction.0, b.direction.1, forward.direction.0, forward.direction.1
                )));
            }
        }
        Ok(Miner {
            forward,
            backward,
            lex,
            lex_reversed: lex.reversed(),
            cfg,
        })
    }

    pub fn config(&self) -> &MinerConfig {
        &self.cfg
    }

    /// Forward pairs merged with backward pairs when a backward model is present.
    pub fn mine_pair(&self, pair: &DocumentPair) -> Result<Vec<MinedPair>, AlignError> {
        let forward = mine_document(pair, self.forward, self.lex, &self.cfg)?;
        let backward = match self.backward {
            Some(model) => mine_document(pair, model, &self.lex_reversed, &self.cfg)?,
            None => Vec::new(),
        };
        Ok(bidirectional_merge(forward, backward))
    }

    fn mine_outcome(&self, pair: &DocumentPair) -> Result<DocOutcome, MineError> {
        match self.mine_pair(pair) {
            Ok(pairs) => Ok(DocOutcome::Mined(pairs)),
            Err(e @ (AlignError::TooLarge { .. } | AlignError::Empty { .. })) => Ok(DocOutcome::Skipped(e.to_string())),
            Err(source) => Err(MineError::Document {
                doc: pair.id.clone(),
                source,
            }),
        }
    }

    /// Mines a stream of document pairs and writes TSV records to `out` in
    /// input order.
    pub fn mine_corpus<I, E>(&self, docs: I, out: &mut dyn Write) -> Result<MiningReport, MineError>
    where
        I: IntoIterator<Item = Result<DocumentPair, E>>,
        I::IntoIter: Send,
        E: fmt::Display,
    {
        let started = Instant::now();
        let mut report = MiningReport {
            pairs_emitted: 0,
            unique_src_tokens: 0,
            unique_tgt_tokens: 0,
            docs_processed: 0,
            docs_skipped: 0,
            wall_clock_seconds: 0.0,
            forward_pairs: 0,
            backward_pairs: 0,
            threshold: self.cfg.params.threshold,
            penalty: self.cfg.params.penalty,
            engine: self.cfg.engine.label().to_string(),
            workers: self.cfg.workers,
            wavefront_workers: self.cfg.wavefront_workers,
            bidirectional: self.backward.is_some(),
            seed: self.cfg.seed,
        };
        let mut src_tokens: HashSet<String> = HashSet::new();
        let mut tgt_tokens: HashSet<String> = HashSet::new();
        let cancel = AtomicBool::new(false);
        let workers = self.cfg.workers;
        let docs = docs.into_iter();

        let result = std::thread::scope(|scope| -> Result<(), MineError> {
            let (job_tx, job_rx) = bounded::<(usize, DocumentPair)>(workers * 4);
            let (done_tx, done_rx) = unbounded::<(usize, Result<DocOutcome, MineError>)>();
            let cancel = &cancel;

            let reader_done = done_tx.clone();
            scope.spawn(move || {
                for (idx, item) in docs.enumerate() {
                    if cancel.load(Ordering::Relaxed) {
                        break;
                    }
                    match item {
                        Ok(pair) => {
                            if job_tx.send((idx, pair)).is_err() {
                                break;
                            }
                        }
                        Err(e) => {
                            let _ = reader_done.send((idx, Err(MineError::Input(e.to_string()))));
                            break;
                        }
                    }
                }
            });
            for _ in 0..workers {
                let job_rx = job_rx.clone();
                let done_tx = done_tx.clone();
                scope.spawn(move || {
                    for (idx, pair) in job_rx {
                        if cancel.load(Ordering::Relaxed) {
                            continue;
                        }
                        if done_tx.send((idx, self.mine_outcome(&pair))).is_err() {
                            break;
                        }
                    }
                });
            }
            drop(job_rx);
            drop(done_tx);

            let mut pending: BTreeMap<usize, Result<DocOutcome, MineError>> = BTreeMap::new();
            let mut next = 0usize;
            let mut write_all = |report: &mut MiningReport,
                             src_tokens: &mut HashSet<String>,
                             tgt_tokens: &mut HashSet<String>,
                             outcome: Result<DocOutcome, MineError>|
             -> Result<(), MineError> {
                match outcome? {
                    DocOutcome::Skipped(reason) => {
                        log::warn!("document skipped: {reason}");
                        report.docs_skipped += 1;
                    }
                    DocOutcome::Mined(pairs) => {
                        report.docs_processed += 1;
                        for p in &pairs {
                            writeln!(out, "{}", p.to_tsv()).map_err(|source| MineError::Sink {
                                written: report.pairs_emitted,
                                source,
                            })?;
                            report.pairs_emitted += 1;
                            match p.direction {
                                Direction::Forward => report.forward_pairs += 1,
                                Direction::Backward => report.backward_pairs += 1,
                            }
                            src_tokens.extend(p.src.normalized_tokens());
                            tgt_tokens.extend(p.tgt.normalized_tokens());
                        }
                        if report.docs_processed.is_multiple_of(1000) {
                            log::info!("{} documents mined", report.docs_processed);
                        }
                    }
                }
                Ok(())
            };
            for (idx, outcome) in done_rx {
                pending.insert(idx, outcome);
                while let Some(outcome) = pending.remove(&next) {
                    next += 1;
                    if let Err(e) = write_all(&mut report, &mut src_tokens, &mut tgt_tokens, outcome) {
                        cancel.store(true, Ordering::Relaxed);
                        return Err(e);
                    }
                }
            }
            Ok(())
        });
        result?;
        out.flush().map_err(|source| MineError::Sink {
            written: report.pairs_emitted,
            source,
        })?;
        report.unique_src_tokens = src_tokens.len();
        report.unique_tgt_tokens = tgt_tokens.len();
        report.wall_clock_seconds = started.elapsed().as_secs_f64();
        Ok(report)
    }
}

/// Convenience wrapper around [`Miner::mine_corpus`].
pub fn mine_corpus<I, E>(
    docs: I,
    forward: &ClassifierModel,
    backward: Option<&ClassifierModel>,
    lex: &Lexicon,
    cfg: MinerConfig,
    out: &mut dyn Write,
) -> Result<MiningReport, MineError>
where
    I: IntoIterator<Item = Result<DocumentPair, E>>,
    I::IntoIter: Send,
    E: fmt::Display,
{
    Miner::new(forward, backward, lex, cfg)?.mine_corpus(docs, out)
}
