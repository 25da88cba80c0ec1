//! Corpus-level BLEU and NIST against a single reference, and segment-stratified
//! test-set sampling.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("{hyp} hypotheses but {refs} references")]
    LengthMismatch { hyp: usize, refs: usize },
    #[error("corpus is empty")]
    Empty,
    #[error("max n-gram order must be >= 1")]
    Order,
    #[error("corpus has {found} pairs, at least {required} ({segments} segments x {per_segment}) are required")]
    TooSmall {
        found: usize,
        required: usize,
        segments: usize,
        per_segment: usize,
    },
    #[error("segments and per-segment counts must be >= 1")]
    Segments,
}

type Counts<'a> = HashMap<&'a [String], usize>;

fn ngram_counts(tokens: &[String], n: usize) -> Counts<'_> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

fn check_inputs(hyps: &[Vec<String>], refs: &[Vec<String>], max_n: usize) -> Result<(), MetricsError> {
    if hyps.len() != refs.len() {
        return Err(MetricsError::LengthMismatch {
            hyp: hyps.len(),
            refs: refs.len(),
        });
    }
    if hyps.is_empty() {
        return Err(MetricsError::Empty);
    }
    if max_n == 0 {
        return Err(MetricsError::Order);
    }
    Ok(())
}

/// Whitespace tokenization for text-form scorer inputs.
pub fn split_tokens(line: &str) -> Vec<String> {
    line.split_whitespace().map(str::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BleuScore {
    pub score: f64,
    /// Modified n-gram precisions after smoothing, orders 1..=max_n.
    pub precisions: Vec<f64>,
    pub brevity: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
}

/// Corpus BLEU. An order with no clipped matches uses precision
/// `1 / (2 * total)`, where `total` is the number of hypothesis n-grams at
/// that order (taken as 1 when the hypotheses have none).
pub fn bleu(hyps: &[Vec<String>], refs: &[Vec<String>], max_n: usize) -> Result<BleuScore, MetricsError> {
    check_inputs(hyps, refs, max_n)?;
    let mut matches = vec![0usize; max_n];
    let mut totals = vec![0usize; max_n];
    for (h, r) in hyps.iter().zip(refs) {
        for n in 1..=max_n {
            let hc = ngram_counts(h, n);
            let rc = ngram_counts(r, n);
            for (gram, &count) in &hc {
                matches[n - 1] += count.min(rc.get(gram).copied().unwrap_or(0));
                totals[n - 1] += count;
            }
        }
    }
    let hyp_len: usize = hyps.iter().map(Vec::len).sum();
    let ref_len: usize = refs.iter().map(Vec::len).sum();
    let precisions: Vec<f64> = matches
        .iter()
        .zip(&totals)
        .map(|(&m, &t)| {
            if m == 0 {
                1.0 / (2.0 * t.max(1) as f64)
            } else {
                m as f64 / t as f64
            }
        })
        .collect();
    let brevity = if hyp_len == 0 {
        0.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).min(0.0).exp()
    };
    let log_mean = precisions.iter().map(|p| p.ln()).sum::<f64>() / max_n as f64;
    Ok(BleuScore {
        score: brevity * log_mean.exp(),
        precisions,
        brevity,
        hyp_len,
        ref_len,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NistScore {
    pub score: f64,
    /// Information gained per hypothesis n-gram, orders 1..=max_n, before brevity.
    pub info: Vec<f64>,
    pub brevity: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
}

/// NIST brevity factor: 1 when the system output is at least as long as the
/// reference, 0.5 at a length ratio of 2/3.
pub fn nist_brevity(hyp_len: usize, ref_len: usize) -> f64 {
    if ref_len == 0 {
        return 1.0;
    }
    let ratio = (hyp_len as f64 / ref_len as f64).min(1.0);
    if ratio <= 0.0 {
        return 0.0;
    }
    let beta = 0.5f64.ln() / 1.5f64.ln().powi(2);
    (beta * ratio.ln().powi(2)).exp()
}

/// Corpus NIST. Information weights come from n-gram counts over the whole
/// reference side: `info(w1..wn) = log2(count(w1..wn-1) / count(w1..wn))`,
/// with the total reference word count as the unigram prefix count.
pub fn nist(hyps: &[Vec<String>], refs: &[Vec<String>], max_n: usize) -> Result<NistScore, MetricsError> {
    check_inputs(hyps, refs, max_n)?;
    let ref_len: usize = refs.iter().map(Vec::len).sum();
    let hyp_len: usize = hyps.iter().map(Vec::len).sum();
    let mut corpus_counts: Vec<Counts<'_>> = vec![HashMap::new(); max_n + 1];
    for r in refs {
        for (n, counts) in corpus_counts.iter_mut().enumerate().skip(1) {
            for (gram, c) in ngram_counts(r, n) {
                *counts.entry(gram).or_insert(0) += c;
            }
        }
    }
    let info_weight = |gram: &[String]| -> f64 {
        let n = gram.len();
        let count = corpus_counts[n][gram] as f64;
        let prefix = if n == 1 {
            ref_len as f64
        } else {
            corpus_counts[n - 1][&gram[..n - 1]] as f64
        };
        (prefix / count).log2()
    };
    let mut gained = vec![0.0f64; max_n];
    let mut totals = vec![0usize; max_n];
    for (h, r) in hyps.iter().zip(refs) {
        for n in 1..=max_n {
            let hc = ngram_counts(h, n);
            let rc = ngram_counts(r, n);
            for (gram, &count) in &hc {
                totals[n - 1] += count;
                let hit = count.min(rc.get(gram).copied().unwrap_or(0));
                if hit > 0 {
                    gained[n - 1] += hit as f64 * info_weight(gram);
                }
            }
        }
    }
    let info: Vec<f64> = gained
        .iter()
        .zip(&totals)
        .map(|(&g, &t)| if t == 0 { 0.0 } else { g / t as f64 })
        .collect();
    let brevity = nist_brevity(hyp_len, ref_len);
    Ok(NistScore {
        score: info.iter().sum::<f64>() * brevity,
        info,
        brevity,
        hyp_len,
        ref_len,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestSplit<T> {
    pub test: Vec<T>,
    pub remainder: Vec<T>,
    pub seed: u64,
}

/// Splits `corpus` into `segments` contiguous near-equal segments and draws
/// `per_segment` items from each without replacement. Both outputs keep
/// corpus order.
pub fn sample_test_set<T: Clone>(
    corpus: &[T],
    segments: usize,
    per_segment: usize,
    seed: u64,
) -> Result<TestSplit<T>, MetricsError> {
    if segments == 0 || per_segment == 0 {
        return Err(MetricsError::Segments);
    }
    let required = segments * per_segment;
    if corpus.len() < required {
        return Err(MetricsError::TooSmall {
            found: corpus.len(),
            required,
            segments,
            per_segment,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = corpus.len() / segments;
    let extra = corpus.len() % segments;
    let mut chosen = vec![false; corpus.len()];
    let mut start = 0;
    for k in 0..segments {
        let size = base + usize::from(k < extra);
        for offset in rand::seq::index::sample(&mut rng, size, per_segment) {
            chosen[start + offset] = true;
        }
        start += size;
    }
    let mut test = Vec::with_capacity(required);
    let mut remainder = Vec::with_capacity(corpus.len() - required);
    for (item, picked) in corpus.iter().zip(chosen) {
        if picked {
            test.push(item.clone());
        } else {
            remainder.push(item.clone());
        }
    }
    Ok(TestSplit { test, remainder, seed })
}
