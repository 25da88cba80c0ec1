//! Monotone 1-1 sentence alignment over a similarity matrix.
//!
//! All engines minimise the same objective: a diagonal step onto cell `(i, j)`
//! costs `1 - S[i][j]`, and skipping a sentence on either side costs `penalty`.
//! Paths only move down, right or diagonally.
//!
//! Cost recurrence, with `C[0][0] = 0` and borders accumulated one penalty at a time:
//!
//! ```text
//! C[i][j] = min(C[i-1][j-1] + 1 - S[i-1][j-1], C[i-1][j] + penalty, C[i][j-1] + penalty)
//! ```
//!
//! Traceback prefers the diagonal, then skipping a source sentence (moving down),
//! then skipping a target sentence (moving right).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Barrier;

use thiserror::Error;

use crate::classifier::{relative_position, profile_features, ClassifierModel, SentenceProfile};
use crate::corpus::DocumentPair;
use crate::lexicon::Lexicon;
use crate::miner::{Direction, MinedPair};

/// Largest matrix (rows times columns) the aligner accepts.
pub const MAX_CELLS: usize = 25_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum AlignError {
    #[error("similarity matrix must have at least one row and one column, got {rows}x{cols}")]
    Empty { rows: usize, cols: usize },
    #[error("similarity matrix {rows}x{cols} exceeds the {MAX_CELLS}-cell limit")]
    TooLarge { rows: usize, cols: usize },
    #[error("similarity matrix has {found} cells, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("cell ({row}, {col}) = {value} is outside [0, 1]")]
    CellRange { row: usize, col: usize, value: f64 },
    #[error("penalty {0} must be finite and >= 0")]
    Penalty(f64),
    #[error("threshold {0} must lie in [0, 1]")]
    Threshold(f64),
    #[error("model direction {model_src}->{model_tgt} does not match document direction {doc_src}->{doc_tgt}")]
    Direction {
        model_src: String,
        model_tgt: String,
        doc_src: String,
        doc_tgt: String,
    },
    #[error("worker count must be >= 1")]
    Workers,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(rows: usize, cols: usize, cells: Vec<f64>) -> Result<Self, AlignError> {
        check_shape(rows, cols)?;
        if cells.len() != rows * cols {
            return Err(AlignError::Shape {
                expected: rows * cols,
                found: cells.len(),
            });
        }
        if let Some(k) = cells.iter().position(|c| !(0.0..=1.0).contains(c)) {
            return Err(AlignError::CellRange {
                row: k / cols,
                col: k % cols,
                value: cells[k],
            });
        }
        Ok(SimilarityMatrix { rows, cols, cells })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, AlignError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(AlignError::Shape {
                expected: cols,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Parses the debug TSV format: one matrix row per line.
    pub fn from_tsv(text: &str) -> Result<Self, AlignError> {
        let mut rows = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split('\t')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|e| AlignError::Parse {
                        line: idx + 1,
                        message: format!("`{}`: {e}", v.trim()),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.cols + j]
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<(), AlignError> {
    if rows == 0 || cols == 0 {
        return Err(AlignError::Empty { rows, cols });
    }
    if rows.saturating_mul(cols) > MAX_CELLS {
        return Err(AlignError::TooLarge { rows, cols });
    }
    Ok(())
}

fn check_penalty(penalty: f64) -> Result<(), AlignError> {
    if penalty >= 0.0 && penalty.is_finite() {
        Ok(())
    } else {
        Err(AlignError::Penalty(penalty))
    }
}

/// Scores every sentence pair of a document pair with the model.
///
/// `lex` must be oriented like the model (source words are the model's source language).
pub fn build_similarity_matrix(
    pair: &DocumentPair,
    model: &ClassifierModel,
    lex: &Lexicon,
) -> Result<SimilarityMatrix, AlignError> {
    if (model.direction.0.as_str(), model.direction.1.as_str()) != pair.direction() {
        return Err(AlignError::Direction {
            model_src: model.direction.0.clone(),
            model_tgt: model.direction.1.clone(),
            doc_src: pair.source.lang.clone(),
            doc_tgt: pair.target.lang.clone(),
        });
    }
    let (n, m) = (pair.source.len(), pair.target.len());
    check_shape(n, m)?;
    let src: Vec<SentenceProfile> = pair.source.sentences.iter().map(SentenceProfile::new).collect();
    let tgt: Vec<SentenceProfile> = pair.target.sentences.iter().map(SentenceProfile::new).collect();
    let mut cells = Vec::with_capacity(n * m);
    for (i, s) in src.iter().enumerate() {
        let sp = relative_position(i, n);
        for (j, t) in tgt.iter().enumerate() {
            let f = profile_features(s, t, sp, relative_position(j, m), lex);
            cells.push(model.confidence_unchecked(&f.values));
        }
    }
    SimilarityMatrix::new(n, m, cells)
}

/// One step of an alignment path. Indices are 0-based sentence indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Source sentence `i` aligned with target sentence `j`.
    Diag(usize, usize),
    /// Source sentence `i` left unaligned.
    SkipSrc(usize),
    /// Target sentence `j` left unaligned.
    SkipTgt(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentPath {
    pub moves: Vec<Move>,
    pub total_cost: f64,
}

impl AlignmentPath {
    /// Replays the path on `s`: checks that it is a monotone walk from `(0, 0)`
    /// to `(rows, cols)` and returns its cost recomputed step by step.
    pub fn replay(&self, s: &SimilarityMatrix, penalty: f64) -> Result<f64, String> {
        let (mut i, mut j) = (0usize, 0usize);
        let mut cost = 0.0;
        for (k, mv) in self.moves.iter().enumerate() {
            match *mv {
                Move::Diag(a, b) if a == i && b == j && i < s.rows() && j < s.cols() => {
                    cost += 1.0 - s.get(i, j);
                    i += 1;
                    j += 1;
                }
                Move::SkipSrc(a) if a == i && i < s.rows() => {
                    cost += penalty;
                    i += 1;
                }
                Move::SkipTgt(b) if b == j && j < s.cols() => {
                    cost += penalty;
                    j += 1;
                }
                other => return Err(format!("step {k}: {other:?} does not continue from ({i}, {j})")),
            }
        }
        if (i, j) != (s.rows(), s.cols()) {
            return Err(format!("path ends at ({i}, {j}), expected ({}, {})", s.rows(), s.cols()));
        }
        Ok(cost)
    }

    pub fn gap_count(&self) -> usize {
        self.moves.iter().filter(|m| !matches!(m, Move::Diag(..))).count()
    }

    /// Debug listing: `D i j cost`, `GS i`, `GT j`, then `TOTAL cost`.
    pub fn render(&self, s: &SimilarityMatrix) -> String {
        let mut out = String::new();
        for mv in &self.moves {
            match *mv {
                Move::Diag(i, j) => out.push_str(&format!("D {i} {j} {:.6}\n", 1.0 - s.get(i, j))),
                Move::SkipSrc(i) => out.push_str(&format!("GS {i}\n")),
                Move::SkipTgt(j) => out.push_str(&format!("GT {j}\n")),
            }
        }
        out.push_str(&format!("TOTAL {:.6}\n", self.total_cost));
        out
    }
}

#[inline]
fn relax(diag: f64, up: f64, left: f64, sim: f64, penalty: f64) -> f64 {
    let mut best = diag + (1.0 - sim);
    let down = up + penalty;
    if down < best {
        best = down;
    }
    let right = left + penalty;
    if right < best {
        best = right;
    }
    best
}

/// Walks back from `(rows, cols)` over a filled cost table (row-major, `cols + 1` wide).
fn traceback(costs: &[f64], s: &SimilarityMatrix, penalty: f64) -> AlignmentPath {
    let width = s.cols() + 1;
    let (mut i, mut j) = (s.rows(), s.cols());
    let mut moves = Vec::with_capacity(i + j);
    while i > 0 || j > 0 {
        let here = costs[i * width + j];
        if i > 0 && j > 0 && here == costs[(i - 1) * width + j - 1] + (1.0 - s.get(i - 1, j - 1)) {
            moves.push(Move::Diag(i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if i > 0 && (j == 0 || here == costs[(i - 1) * width + j] + penalty) {
            moves.push(Move::SkipSrc(i - 1));
            i -= 1;
        } else {
            moves.push(Move::SkipTgt(j - 1));
            j -= 1;
        }
    }
    moves.reverse();
    AlignmentPath {
        moves,
        total_cost: costs[s.rows() * width + s.cols()],
    }
}

/// Needleman-Wunsch minimum-cost alignment, filled row by row.
pub fn nw_align(s: &SimilarityMatrix, penalty: f64) -> Result<AlignmentPath, AlignError> {
    check_penalty(penalty)?;
    let (n, m) = (s.rows(), s.cols());
    let width = m + 1;
    let mut costs = vec![0.0f64; (n + 1) * width];
    for j in 1..=m {
        costs[j] = costs[j - 1] + penalty;
    }
    for i in 1..=n {
        costs[i * width] = costs[(i - 1) * width] + penalty;
        for j in 1..=m {
            costs[i * width + j] = relax(
                costs[(i - 1) * width + j - 1],
                costs[(i - 1) * width + j],
                costs[i * width + j - 1],
                s.get(i - 1, j - 1),
                penalty,
            );
        }
    }
    Ok(traceback(&costs, s, penalty))
}

/// Tile edge used by [`nw_align_wavefront`] when none is given.
pub fn default_tile(rows: usize, cols: usize, workers: usize) -> usize {
    let longest = rows.max(cols);
    (longest / (workers * 8)).clamp(16, 256)
}

/// Wavefront evaluation of [`nw_align`]; output is bit-identical for any
/// worker count.
pub fn nw_align_wavefront(s: &SimilarityMatrix, penalty: f64, workers: usize) -> Result<AlignmentPath, AlignError> {
    let tile = default_tile(s.rows(), s.cols(), workers.max(1));
    nw_align_wavefront_tiled(s, penalty, workers, tile)
}

/// Wavefront evaluation with an explicit tile edge.
///
/// The interior of the cost table is cut into `tile x tile` blocks. Blocks on
/// the same block anti-diagonal `bi + bj = d` depend only on diagonals `d - 1`
/// and `d - 2`, so each diagonal is split across the workers and a barrier
/// separates consecutive diagonals. `tile == 1` is the plain cell-level
/// anti-diagonal sweep.
pub fn nw_align_wavefront_tiled(
    s: &SimilarityMatrix,
    penalty: f64,
    workers: usize,
    tile: usize,
) -> Result<AlignmentPath, AlignError> {
    check_penalty(penalty)?;
    if workers == 0 {
        return Err(AlignError::Workers);
    }
    let tile = tile.max(1);
    let (n, m) = (s.rows(), s.cols());
    let width = m + 1;
    let table: Vec<AtomicU64> = (0..(n + 1) * width).map(|_| AtomicU64::new(0)).collect();
    let load = |k: usize| f64::from_bits(table[k].load(AtomicOrdering::Relaxed));
    let store = |k: usize, v: f64| table[k].store(v.to_bits(), AtomicOrdering::Relaxed);

    for j in 1..=m {
        store(j, load(j - 1) + penalty);
    }
    for i in 1..=n {
        store(i * width, load((i - 1) * width) + penalty);
    }

    let block_rows = n.div_ceil(tile);
    let block_cols = m.div_ceil(tile);
    let fill_block = |bi: usize, bj: usize| {
        let rows = (bi * tile + 1)..=((bi + 1) * tile).min(n);
        for i in rows {
            for j in (bj * tile + 1)..=((bj + 1) * tile).min(m) {
                let v = relax(
                    load((i - 1) * width + j - 1),
                    load((i - 1) * width + j),
                    load(i * width + j - 1),
                    s.get(i - 1, j - 1),
                    penalty,
                );
                store(i * width + j, v);
            }
        }
    };
    let diagonal = |d: usize| {
        let first = d.saturating_sub(block_cols - 1);
        let last = d.min(block_rows - 1);
        first..=last
    };
    let diagonals = block_rows + block_cols - 1;

    if workers == 1 {
        for d in 0..diagonals {
            for bi in diagonal(d) {
                fill_block(bi, d - bi);
            }
        }
    } else {
        let barrier = Barrier::new(workers);
        let run = |w: usize| {
            for d in 0..diagonals {
                let blocks = diagonal(d);
                let (start, len) = (*blocks.start(), blocks.end() - blocks.start() + 1);
                // contiguous chunk of this diagonal for worker w
                let lo = start + len * w / workers;
                let hi = start + len * (w + 1) / workers;
                for bi in lo..hi {
                    fill_block(bi, d - bi);
                }
                barrier.wait();
            }
        };
        std::thread::scope(|scope| {
            for w in 1..workers {
                let run = &run;
                scope.spawn(move || run(w));
            }
            run(0);
        });
    }

    let costs: Vec<f64> = table.into_iter().map(|a| f64::from_bits(a.into_inner())).collect();
    Ok(traceback(&costs, s, penalty))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Frontier {
    cost: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed for a min-heap; node index breaks ties
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Uniform-cost best-first search over the alignment lattice with the same
/// moves and costs as [`nw_align`].
pub fn search_align(s: &SimilarityMatrix, penalty: f64) -> Result<AlignmentPath, AlignError> {
    check_penalty(penalty)?;
    let (n, m) = (s.rows(), s.cols());
    let width = m + 1;
    let goal = n * width + m;
    let mut dist = vec![f64::INFINITY; (n + 1) * width];
    let mut via: Vec<Option<Move>> = vec![None; (n + 1) * width];
    let mut done = vec![false; (n + 1) * width];
    let mut heap = BinaryHeap::new();
    dist[0] = 0.0;
    heap.push(Frontier { cost: 0.0, node: 0 });
    while let Some(Frontier { cost, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == goal {
            break;
        }
        let (i, j) = (node / width, node % width);
        let mut push = |next: usize, step: f64, mv: Move| {
            let c = cost + step;
            if c < dist[next] {
                dist[next] = c;
                via[next] = Some(mv);
                heap.push(Frontier { cost: c, node: next });
            }
        };
        if i < n && j < m {
            push(node + width + 1, 1.0 - s.get(i, j), Move::Diag(i, j));
        }
        if i < n {
            push(node + width, penalty, Move::SkipSrc(i));
        }
        if j < m {
            push(node + 1, penalty, Move::SkipTgt(j));
        }
    }
    let mut moves = Vec::with_capacity(n + m);
    let mut node = goal;
    while node != 0 {
        let mv = via[node].expect("every settled node has a predecessor");
        node = match mv {
            Move::Diag(..) => node - width - 1,
            Move::SkipSrc(_) => node - width,
            Move::SkipTgt(_) => node - 1,
        };
        moves.push(mv);
    }
    moves.reverse();
    Ok(AlignmentPath {
        moves,
        total_cost: dist[goal],
    })
}

/// Alignment engine selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Sequential,
    Wavefront,
    Search,
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::Sequential => "sequential",
            Engine::Wavefront => "wavefront",
            Engine::Search => "search",
        }
    }

    pub fn align(self, s: &SimilarityMatrix, penalty: f64, wavefront_workers: usize) -> Result<AlignmentPath, AlignError> {
        match self {
            Engine::Sequential => nw_align(s, penalty),
            Engine::Wavefront => nw_align_wavefront(s, penalty, wavefront_workers),
            Engine::Search => search_align(s, penalty),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequential" | "nw" => Ok(Engine::Sequential),
            "wavefront" => Ok(Engine::Wavefront),
            "search" => Ok(Engine::Search),
            other => Err(format!("unknown engine `{other}` (expected sequential, wavefront or search)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiningParams {
    pub threshold: f64,
    pub penalty: f64,
}

impl MiningParams {
    pub fn new(threshold: f64, penalty: f64) -> Result<Self, AlignError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(AlignError::Threshold(threshold));
        }
        check_penalty(penalty)?;
        Ok(MiningParams { threshold, penalty })
    }
}

/// Emits the diagonal steps whose confidence reaches the threshold, in source order.
pub fn extract_pairs(
    path: &AlignmentPath,
    s: &SimilarityMatrix,
    pair: &DocumentPair,
    params: &MiningParams,
) -> Vec<MinedPair> {
    path.moves
        .iter()
        .filter_map(|mv| match *mv {
            Move::Diag(i, j) if s.get(i, j) >= params.threshold => Some(MinedPair {
                src: pair.source.sentences[i].clone(),
                tgt: pair.target.sentences[j].clone(),
                src_index: i,
                tgt_index: j,
                confidence: s.get(i, j),
                doc_id: pair.id.clone(),
                direction: Direction::Forward,
            }),
            _ => None,
        })
        .collect()
}
