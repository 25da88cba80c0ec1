//! Grid search over (threshold, penalty) against gold alignments.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::aligner::{build_similarity_matrix, extract_pairs, nw_align, AlignError, AlignmentPath, MiningParams, SimilarityMatrix};
use crate::classifier::{threshold_grid, ClassifierModel};
use crate::corpus::{parse_jsonl_line, parse_pair_value, CorpusError, DocumentPair};
use crate::lexicon::Lexicon;

pub const DEFAULT_PENALTIES: [f64; 6] = [0.05, 0.1, 0.2, 0.4, 0.8, 1.6];

#[derive(Debug, Error)]
pub enum TuneError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error("line {line}: gold pair ({i}, {j}) is outside the {rows}x{cols} document")]
    GoldBounds {
        line: usize,
        i: usize,
        j: usize,
        rows: usize,
        cols: usize,
    },
    #[error("line {line}: `gold` must be a list of [i, j] index pairs")]
    GoldFormat { line: usize },
    #[error("development set is empty")]
    EmptyDevSet,
    #[error("{0} grid is empty")]
    EmptyGrid(&'static str),
}

#[derive(Debug, Clone, Default)]
pub struct GoldSet {
    pub docs: Vec<DocumentPair>,
    pub gold: Vec<BTreeSet<(usize, usize)>>,
}

impl GoldSet {
    pub fn push(&mut self, doc: DocumentPair, gold: BTreeSet<(usize, usize)>) {
        self.docs.push(doc);
        self.gold.push(gold);
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Gold triples `(document index, i, j)`.
    pub fn triples(&self) -> BTreeSet<(usize, usize, usize)> {
        self.gold
            .iter()
            .enumerate()
            .flat_map(|(d, g)| g.iter().map(move |&(i, j)| (d, i, j)))
            .collect()
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<GoldSet, TuneError> {
        let mut set = GoldSet::default();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let text = line.map_err(|source| CorpusError::Io {
                path: format!("line {line_no}"),
                source,
            })?;
            let Some(value) = parse_jsonl_line(&text, line_no)? else {
                continue;
            };
            let doc = parse_pair_value(&value, line_no)?;
            let entries = value
                .get("gold")
                .ok_or(CorpusError::MissingField {
                    line: line_no,
                    field: "gold",
                })?
                .as_array()
                .ok_or(TuneError::GoldFormat { line: line_no })?;
            let mut gold = BTreeSet::new();
            for entry in entries {
                let ij = entry
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
                    .ok_or(TuneError::GoldFormat { line: line_no })?;
                let (rows, cols) = (doc.source.len(), doc.target.len());
                if ij.0 >= rows || ij.1 >= cols {
                    return Err(TuneError::GoldBounds {
                        line: line_no,
                        i: ij.0,
                        j: ij.1,
                        rows,
                        cols,
                    });
                }
                gold.insert(ij);
            }
            if doc.source.is_empty() || doc.target.is_empty() {
                log::warn!("line {line_no}: gold document `{}` has an empty side, skipped", doc.id);
                continue;
            }
            set.push(doc, gold);
        }
        Ok(set)
    }
}

pub fn load_gold_set(path: impl AsRef<Path>) -> Result<GoldSet, TuneError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    GoldSet::from_reader(BufReader::new(file))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 of a predicted set against a gold set.
///
/// Both empty scores 1 everywhere. An empty prediction against non-empty gold
/// scores 0. A non-empty prediction against empty gold has precision 0 and
/// (vacuous) recall 1.
pub fn f_measure<T: Ord>(predicted: &BTreeSet<T>, gold: &BTreeSet<T>) -> Prf {
    if predicted.is_empty() && gold.is_empty() {
        return Prf {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
        };
    }
    let hits = predicted.intersection(gold).count() as f64;
    let precision = if predicted.is_empty() { 0.0 } else { hits / predicted.len() as f64 };
    let recall = if gold.is_empty() { 1.0 } else { hits / gold.len() as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Prf { precision, recall, f1 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub threshold: f64,
    pub penalty: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub best: MiningParams,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub trace: Vec<GridPoint>,
}

#[derive(Serialize)]
struct BestJson {
    threshold: f64,
    penalty: f64,
}

#[derive(Serialize)]
struct TuneJson<'a> {
    best: BestJson,
    precision: f64,
    recall: f64,
    f1: f64,
    trace: &'a [GridPoint],
}

impl TuneResult {
    pub fn to_json(&self) -> String {
        let json = TuneJson {
            best: BestJson {
                threshold: self.best.threshold,
                penalty: self.best.penalty,
            },
            precision: self.precision,
            recall: self.recall,
            f1: self.f1,
            trace: &self.trace,
        };
        let mut s = serde_json::to_string_pretty(&json).expect("tune result serializes");
        s.push('\n');
        s
    }
}

fn validate_grids(thresholds: &[f64], penalties: &[f64]) -> Result<(), TuneError> {
    if thresholds.is_empty() {
        return Err(TuneError::EmptyGrid("threshold"));
    }
    if penalties.is_empty() {
        return Err(TuneError::EmptyGrid("penalty"));
    }
    for &t in thresholds {
        for &p in penalties {
            MiningParams::new(t, p)?;
        }
    }
    Ok(())
}

/// Mined triples `(document index, i, j)` for one parameter setting.
fn predict(
    docs: &[DocumentPair],
    matrices: &[SimilarityMatrix],
    paths: &[AlignmentPath],
    params: &MiningParams,
) -> BTreeSet<(usize, usize, usize)> {
    let mut out = BTreeSet::new();
    for (d, ((doc, s), path)) in docs.iter().zip(matrices).zip(paths).enumerate() {
        for p in extract_pairs(path, s, doc, params) {
            out.insert((d, p.src_index, p.tgt_index));
        }
    }
    out
}

fn better(candidate: &GridPoint, best: &GridPoint) -> bool {
    candidate.f1 > best.f1
        || (candidate.f1 == best.f1
            && (candidate.threshold > best.threshold
                || (candidate.threshold == best.threshold && candidate.penalty < best.penalty)))
}

/// Grid search over precomputed matrices. Trace order is threshold-major in
/// grid order.
pub fn tune_matrices(
    docs: &[DocumentPair],
    matrices: &[SimilarityMatrix],
    gold: &BTreeSet<(usize, usize, usize)>,
    thresholds: &[f64],
    penalties: &[f64],
) -> Result<TuneResult, TuneError> {
    if docs.is_empty() {
        return Err(TuneError::EmptyDevSet);
    }
    validate_grids(thresholds, penalties)?;
    // a path depends on the penalty only
    let paths_by_penalty: Vec<Vec<AlignmentPath>> = penalties
        .iter()
        .map(|&p| matrices.iter().map(|s| nw_align(s, p)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let mut trace = Vec::with_capacity(thresholds.len() * penalties.len());
    for &threshold in thresholds {
        for (&penalty, paths) in penalties.iter().zip(&paths_by_penalty) {
            let params = MiningParams { threshold, penalty };
            let prf = f_measure(&predict(docs, matrices, paths, &params), gold);
            trace.push(GridPoint {
                threshold,
                penalty,
                precision: prf.precision,
                recall: prf.recall,
                f1: prf.f1,
            });
        }
    }
    let best = trace
        .iter()
        .skip(1)
        .fold(trace[0], |best, c| if better(c, &best) { *c } else { best });
    Ok(TuneResult {
        best: MiningParams {
            threshold: best.threshold,
            penalty: best.penalty,
        },
        f1: best.f1,
        precision: best.precision,
        recall: best.recall,
        trace,
    })
}

/// Scores mining the dev set at one parameter setting.
pub fn evaluate(
    model: &ClassifierModel,
    lex: &Lexicon,
    dev: &GoldSet,
    params: &MiningParams,
) -> Result<Prf, TuneError> {
    let matrices = dev_matrices(model, lex, dev)?;
    let paths = matrices
        .iter()
        .map(|s| nw_align(s, params.penalty))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(f_measure(&predict(&dev.docs, &matrices, &paths, params), &dev.triples()))
}

fn dev_matrices(model: &ClassifierModel, lex: &Lexicon, dev: &GoldSet) -> Result<Vec<SimilarityMatrix>, TuneError> {
    dev.docs
        .iter()
        .map(|d| build_similarity_matrix(d, model, lex).map_err(TuneError::from))
        .collect()
}

#[derive(Debug, Clone)]
pub struct Grids {
    pub thresholds: Vec<f64>,
    pub penalties: Vec<f64>,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            thresholds: threshold_grid(),
            penalties: DEFAULT_PENALTIES.to_vec(),
        }
    }
}

/// Tunes mining parameters for `model` on `dev`. Matrices are built once and
/// shared by every grid point.
pub fn tune(model: &ClassifierModel, lex: &Lexicon, dev: &GoldSet, grids: &Grids) -> Result<TuneResult, TuneError> {
    if dev.is_empty() {
        return Err(TuneError::EmptyDevSet);
    }
    validate_grids(&grids.thresholds, &grids.penalties)?;
    let matrices = dev_matrices(model, lex, dev)?;
    tune_matrices(&dev.docs, &matrices, &dev.triples(), &grids.thresholds, &grids.penalties)
}

/// [`tune`] without matrix reuse: every grid point rebuilds and realigns
/// every document.
pub fn tune_uncached(
    model: &ClassifierModel,
    lex: &Lexicon,
    dev: &GoldSet,
    grids: &Grids,
) -> Result<TuneResult, TuneError> {
    if dev.is_empty() {
        return Err(TuneError::EmptyDevSet);
    }
    validate_grids(&grids.thresholds, &grids.penalties)?;
    let mut trace = Vec::new();
    for &threshold in &grids.thresholds {
        for &penalty in &grids.penalties {
            let prf = evaluate(model, lex, dev, &MiningParams { threshold, penalty })?;
            trace.push(GridPoint {
                threshold,
                penalty,
                precision: prf.precision,
                recall: prf.recall,
                f1: prf.f1,
            });
        }
    }
    let best = trace
        .iter()
        .skip(1)
        .fold(trace[0], |best, c| if better(c, &best) { *c } else { best });
    Ok(TuneResult {
        best: MiningParams {
            threshold: best.threshold,
            penalty: best.penalty,
        },
        f1: best.f1,
        precision: best.precision,
        recall: best.recall,
        trace,
    })
}
