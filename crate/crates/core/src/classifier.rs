//! Translation-pair classifier.
//!
//! Seven features are extracted from a candidate sentence pair and scored by a
//! linear logistic model. Training uses plain SGD with a fixed schedule, so a
//! model is a pure function of its inputs and seed.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{is_alphabetic_token, is_digit_token, is_punctuation_token, SeedCorpus, Sentence};
use crate::lexicon::{covered_fraction, Lexicon};

pub const SCHEMA_ID: &str = "pairfeat-7";
pub const FEATURE_COUNT: usize = 7;
pub const MODEL_VERSION: u32 = 1;
pub const DEFAULT_PENALTY: f64 = 0.2;
pub const MIN_TRAINING_PAIRS: usize = 10;

/// Feature names in vector order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "length_ratio",
    "coverage_src_tgt",
    "coverage_tgt_src",
    "digit_overlap",
    "punct_ratio",
    "position",
    "constant",
];

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("feature schema `{features}` does not match model schema `{model}`")]
    SchemaMismatch { features: String, model: String },
    #[error("seed corpus has {found} pairs, at least {MIN_TRAINING_PAIRS} are required")]
    CorpusTooSmall { found: usize },
    #[error("invalid training option: {0}")]
    InvalidOption(String),
    #[error("unsupported model version {found} (expected {MODEL_VERSION})")]
    UnknownVersion { found: u32 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; FEATURE_COUNT],
    pub schema_id: &'static str,
}

/// Per-sentence statistics reused across every cell a sentence takes part in.
#[derive(Debug, Clone)]
pub struct SentenceProfile {
    token_count: usize,
    alpha: Vec<String>,
    tokens: HashSet<String>,
    digits: HashSet<String>,
    punct: usize,
}

impl SentenceProfile {
    pub fn new(sentence: &Sentence) -> Self {
        let normalized: Vec<String> = sentence.normalized_tokens().collect();
        SentenceProfile {
            token_count: normalized.len(),
            alpha: normalized
                .iter()
                .filter(|t| is_alphabetic_token(t))
                .cloned()
                .collect(),
            digits: normalized
                .iter()
                .filter(|t| is_digit_token(t))
                .cloned()
                .collect(),
            punct: normalized.iter().filter(|t| is_punctuation_token(t)).count(),
            tokens: normalized.into_iter().collect(),
        }
    }
}

fn min_max_ratio(a: usize, b: usize) -> f64 {
    match a.max(b) {
        0 => 1.0,
        hi => a.min(b) as f64 / hi as f64,
    }
}

fn jaccard(a: &HashSet<String>, b: &HashSet<String>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let inter = a.intersection(b).count();
    inter as f64 / (a.len() + b.len() - inter) as f64
}

/// Relative position of sentence `index` in a document of `len` sentences.
pub fn relative_position(index: usize, len: usize) -> f64 {
    if len <= 1 {
        0.0
    } else {
        index as f64 / (len - 1) as f64
    }
}

pub fn profile_features(
    src: &SentenceProfile,
    tgt: &SentenceProfile,
    src_pos: f64,
    tgt_pos: f64,
    lex: &Lexicon,
) -> FeatureVector {
    FeatureVector {
        values: [
            min_max_ratio(src.token_count, tgt.token_count),
            covered_fraction(|w| lex.translations(w), &src.alpha, &tgt.tokens),
            covered_fraction(|w| lex.reverse_translations(w), &tgt.alpha, &src.tokens),
            jaccard(&src.digits, &tgt.digits),
            min_max_ratio(src.punct, tgt.punct),
            1.0 - (src_pos - tgt_pos).abs(),
            1.0,
        ],
        schema_id: SCHEMA_ID,
    }
}

pub fn extract_features(
    src: &Sentence,
    tgt: &Sentence,
    src_pos: f64,
    tgt_pos: f64,
    lex: &Lexicon,
) -> FeatureVector {
    profile_features(
        &SentenceProfile::new(src),
        &SentenceProfile::new(tgt),
        src_pos,
        tgt_pos,
        lex,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainedOn {
    pub pairs: usize,
    pub seed: u64,
}

/// Linear logistic classifier plus the mining defaults chosen at training time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub version: u32,
    pub schema_id: String,
    pub direction: (String, String),
    pub weights: Vec<f64>,
    pub bias: f64,
    pub default_threshold: f64,
    pub default_penalty: f64,
    pub trained_on: TrainedOn,
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl ClassifierModel {
    /// A model with the given parameters and the stock mining defaults.
    pub fn new(direction: (&str, &str), weights: [f64; FEATURE_COUNT], bias: f64) -> Self {
        ClassifierModel {
            version: MODEL_VERSION,
            schema_id: SCHEMA_ID.to_string(),
            direction: (direction.0.to_string(), direction.1.to_string()),
            weights: weights.to_vec(),
            bias,
            default_threshold: 0.5,
            default_penalty: DEFAULT_PENALTY,
            trained_on: TrainedOn { pairs: 0, seed: 0 },
        }
    }

    pub fn validate(&self) -> Result<(), ClassifierError> {
        if self.version != MODEL_VERSION {
            return Err(ClassifierError::UnknownVersion {
                found: self.version,
            });
        }
        if self.weights.len() != FEATURE_COUNT {
            return Err(ClassifierError::InvalidModel(format!(
                "{} weights for a {FEATURE_COUNT}-feature schema",
                self.weights.len()
            )));
        }
        if !self.weights.iter().chain([&self.bias]).all(|w| w.is_finite()) {
            return Err(ClassifierError::InvalidModel("non-finite weight".into()));
        }
        if !(0.0..=1.0).contains(&self.default_threshold) {
            return Err(ClassifierError::InvalidModel(format!(
                "default_threshold {} outside [0, 1]",
                self.default_threshold
            )));
        }
        if !(self.default_penalty >= 0.0 && self.default_penalty.is_finite()) {
            return Err(ClassifierError::InvalidModel(format!(
                "default_penalty {} is negative",
                self.default_penalty
            )));
        }
        Ok(())
    }

    pub fn margin(&self, values: &[f64; FEATURE_COUNT]) -> f64 {
        self.weights
            .iter()
            .zip(values)
            .map(|(w, x)| w * x)
            .sum::<f64>()
            + self.bias
    }

    /// Probability that the pair is a translation, kept strictly inside (0, 1).
    pub fn confidence(&self, f: &FeatureVector) -> Result<f64, ClassifierError> {
        if f.schema_id != self.schema_id {
            return Err(ClassifierError::SchemaMismatch {
                features: f.schema_id.to_string(),
                model: self.schema_id.clone(),
            });
        }
        Ok(self.confidence_unchecked(&f.values))
    }

    pub(crate) fn confidence_unchecked(&self, values: &[f64; FEATURE_COUNT]) -> f64 {
        sigmoid(self.margin(values)).clamp(f64::EPSILON, 1.0 - f64::EPSILON)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifierError> {
        let raw: serde_json::Value = serde_json::from_str(text).map_err(|source| ClassifierError::Json {
            path: "<model>".into(),
            source,
        })?;
        let version = raw.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if version != MODEL_VERSION {
            return Err(ClassifierError::UnknownVersion { found: version });
        }
        let model: ClassifierModel = serde_json::from_value(raw).map_err(|source| ClassifierError::Json {
            path: "<model>".into(),
            source,
        })?;
        model.validate()?;
        Ok(model)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ClassifierError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ClassifierError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            ClassifierError::Json { source, .. } => ClassifierError::Json {
                path: path.display().to_string(),
                source,
            },
            other => other,
        })
    }
}

/// Free-function form of [`ClassifierModel::confidence`].
pub fn confidence(model: &ClassifierModel, f: &FeatureVector) -> Result<f64, ClassifierError> {
    model.confidence(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    fn target(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingExample {
    pub features: FeatureVector,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainConfig {
    pub negatives_per_positive: usize,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            negatives_per_positive: 2,
            epochs: 20,
            seed: 42,
        }
    }
}

/// Builds labelled examples from a seed corpus: one positive per aligned pair
/// and `k` negatives per positive, alternating uniform mismatches and "near"
/// mismatches offset by 1 to 3 positions.
pub fn generate_examples(
    corpus: &SeedCorpus,
    lex: &Lexicon,
    negatives_per_positive: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<TrainingExample> {
    let n = corpus.len();
    let src: Vec<SentenceProfile> = corpus.pairs.iter().map(|(s, _)| SentenceProfile::new(s)).collect();
    let tgt: Vec<SentenceProfile> = corpus.pairs.iter().map(|(_, t)| SentenceProfile::new(t)).collect();
    let example = |i: usize, j: usize, label| TrainingExample {
        features: profile_features(
            &src[i],
            &tgt[j],
            relative_position(i, n),
            relative_position(j, n),
            lex,
        ),
        label,
    };
    let mut out = Vec::with_capacity(n * (1 + negatives_per_positive));
    if n < 2 {
        return (0..n).map(|i| example(i, i, Label::Positive)).collect();
    }
    for i in 0..n {
        out.push(example(i, i, Label::Positive));
        for r in 0..negatives_per_positive {
            let j = if r % 2 == 0 {
                let mut j = rng.random_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                j
            } else {
                let offset = rng.random_range(1..=3usize).min(n - 1);
                let down = rng.random_bool(0.5);
                match (down, i.checked_sub(offset), i + offset < n) {
                    (true, Some(j), _) | (false, Some(j), false) => j,
                    (_, _, true) => i + offset,
                    // offset exceeds the corpus on both sides; fall back to the farthest row
                    _ => {
                        if i >= n / 2 {
                            0
                        } else {
                            n - 1
                        }
                    }
                }
            };
            out.push(example(i, j, Label::Negative));
        }
    }
    out
}

/// Area under the ROC curve for `(score, is_positive)` pairs, ties counted as 1/2.
pub fn roc_auc(scored: &[(f64, bool)]) -> f64 {
    let mut sorted: Vec<(f64, bool)> = scored.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let positives = sorted.iter().filter(|s| s.1).count();
    let negatives = sorted.len() - positives;
    if positives == 0 || negatives == 0 {
        return 0.5;
    }
    // rank-sum with average ranks over ties
    let mut rank_sum = 0.0;
    let mut k = 0;
    while k < sorted.len() {
        let mut end = k;
        while end + 1 < sorted.len() && sorted[end + 1].0 == sorted[k].0 {
            end += 1;
        }
        let avg_rank = (k + end) as f64 / 2.0 + 1.0;
        rank_sum += avg_rank * sorted[k..=end].iter().filter(|s| s.1).count() as f64;
        k = end + 1;
    }
    let p = positives as f64;
    (rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64)
}

/// Precision, recall and F1 of `score >= threshold` against the labels.
pub fn f1_at(scored: &[(f64, bool)], threshold: f64) -> (f64, f64, f64) {
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fneg = 0usize;
    for &(s, pos) in scored {
        match (s >= threshold, pos) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let r = if tp + fneg == 0 { 0.0 } else { tp as f64 / (tp + fneg) as f64 };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

/// Threshold grid 0.05, 0.10, ..., 0.95.
pub fn threshold_grid() -> Vec<f64> {
    (1..=19).map(|k| (k * 5) as f64 / 100.0).collect()
}

pub(crate) fn sgd_fit(examples: &[TrainingExample], epochs: usize, rng: &mut ChaCha8Rng) -> ([f64; FEATURE_COUNT], f64) {
    let mut w = [0.0; FEATURE_COUNT];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut step = 0u64;
    for _ in 0..epochs {
        order.shuffle(rng);
        for &idx in &order {
            let ex = &examples[idx];
            let x = &ex.features.values;
            let z = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + b;
            let grad = sigmoid(z) - ex.label.target();
            let lr = 0.1 / (1.0 + 0.01 * step as f64);
            for (wk, xk) in w.iter_mut().zip(x) {
                *wk -= lr * grad * xk;
            }
            b -= lr * grad;
            step += 1;
        }
    }
    (w, b)
}

/// Held-out F1 below which training reports a warning.
pub const MIN_HELDOUT_F1: f64 = 0.6;

fn heldout_warning(f1: f64) -> Option<String> {
    (f1 < MIN_HELDOUT_F1).then(|| {
        format!("held-out F1 {f1:.3} is below {MIN_HELDOUT_F1}; the seed corpus may be degenerate")
    })
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: ClassifierModel,
    pub heldout_f1: f64,
    pub heldout_auc: f64,
    pub heldout_size: usize,
    pub warnings: Vec<String>,
}

/// Trains a model whose direction is the lexicon's direction.
pub fn train(corpus: &SeedCorpus, lex: &Lexicon, cfg: &TrainConfig) -> Result<TrainOutcome, ClassifierError> {
    if corpus.len() < MIN_TRAINING_PAIRS {
        return Err(ClassifierError::CorpusTooSmall { found: corpus.len() });
    }
    if cfg.negatives_per_positive == 0 {
        return Err(ClassifierError::InvalidOption("negatives per positive must be >= 1".into()));
    }
    if cfg.epochs == 0 {
        return Err(ClassifierError::InvalidOption("epochs must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut examples = generate_examples(corpus, lex, cfg.negatives_per_positive, &mut rng);
    examples.shuffle(&mut rng);
    let heldout_size = (examples.len() / 10).max(1);
    let (train_set, heldout) = examples.split_at(examples.len() - heldout_size);
    let (weights, bias) = sgd_fit(train_set, cfg.epochs, &mut rng);

    let mut model = ClassifierModel::new((&lex.direction.0, &lex.direction.1), weights, bias);
    model.trained_on = TrainedOn {
        pairs: corpus.len(),
        seed: cfg.seed,
    };
    let scored: Vec<(f64, bool)> = heldout
        .iter()
        .map(|ex| (model.confidence_unchecked(&ex.features.values), ex.label == Label::Positive))
        .collect();
    let mut best = (f64::NEG_INFINITY, 0.5);
    for t in threshold_grid() {
        let (_, _, f) = f1_at(&scored, t);
        // ties go to the higher threshold
        if f >= best.0 {
            best = (f, t);
        }
    }
    model.default_threshold = best.1;
    let warnings: Vec<String> = heldout_warning(best.0).into_iter().collect();
    for msg in &warnings {
        log::warn!("{msg}");
    }
    Ok(TrainOutcome {
        model,
        heldout_f1: best.0,
        heldout_auc: roc_auc(&scored),
        heldout_size,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::seed_corpus_from_lines;
    use proptest::prelude::*;

    fn s(text: &str) -> Sentence {
        Sentence::new(text).unwrap()
    }

    fn full_lexicon() -> Lexicon {
        Lexicon::from_entries(("pl", "en"), [("ala", "ala", 1.0), ("ma", "ma", 1.0), ("kota", "kota", 1.0)])
    }

    #[test]
    fn identical_sentences_saturate_features() {
        let a = s("Ala ma kota, 7.");
        let f = extract_features(&a, &a, 0.0, 0.0, &full_lexicon());
        assert_eq!(f.values, [1.0; FEATURE_COUNT]);
    }

    #[test]
    fn direct_formula_features() {
        let lex = Lexicon::from_entries(("pl", "en"), Vec::<(&str, &str, f64)>::new());
        let f = extract_features(&s("a b c d"), &s("x y"), 0.0, 1.0, &lex);
        assert_eq!(&f.values[..6], &[0.5, 0.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(f.values[6], 1.0);
    }

    #[test]
    fn digit_overlap_is_jaccard() {
        let lex = full_lexicon();
        let f = extract_features(&s("in 2015"), &s("w 2015 i 7"), 0.5, 0.5, &lex);
        assert_eq!(f.values[3], 0.5);
        let f = extract_features(&s("in 2015"), &s("w"), 0.5, 0.5, &lex);
        assert_eq!(f.values[3], 0.0);
    }

    #[test]
    fn reverse_coverage_uses_reverse_lookup() {
        let lex = Lexicon::from_entries(("pl", "en"), [("kot", "cat", 0.9)]);
        let f = extract_features(&s("kot pies"), &s("cat"), 0.0, 0.0, &lex);
        assert_eq!(f.values[1], 0.5);
        assert_eq!(f.values[2], 1.0);
    }

    #[test]
    fn confidence_examples() {
        let f = FeatureVector {
            values: [0.3, 0.1, 0.9, 1.0, 0.0, 0.25, 1.0],
            schema_id: SCHEMA_ID,
        };
        let zero = ClassifierModel::new(("a", "b"), [0.0; 7], 0.0);
        assert_eq!(zero.confidence(&f).unwrap(), 0.5);

        let mut ten = ClassifierModel::new(("a", "b"), [0.0; 7], 10.0);
        assert!(ten.confidence(&f).unwrap() >= 0.9999);
        ten.bias = 1e6;
        let c = ten.confidence(&f).unwrap();
        assert!(c < 1.0 && c > 0.9999);

        // 0.3*2 + 0.1*(-1) + 0.9*0.5 + 1*1.5 + 0 + 0.25*4 + 1*(-2) - 0.45 = 1.0
        let m = ClassifierModel::new(("a", "b"), [2.0, -1.0, 0.5, 1.5, 3.0, 4.0, -2.0], -0.45);
        let by_hand = 1.0 / (1.0 + (-1.0f64).exp());
        assert!((m.confidence(&f).unwrap() - by_hand).abs() < 1e-12);
        assert!((by_hand - 0.731_058_578_630_004_9).abs() < 1e-15);
    }

    #[test]
    fn schema_mismatch_names_both() {
        let mut m = ClassifierModel::new(("a", "b"), [0.0; 7], 0.0);
        m.schema_id = "other".into();
        let f = FeatureVector {
            values: [0.0; 7],
            schema_id: SCHEMA_ID,
        };
        let msg = m.confidence(&f).unwrap_err().to_string();
        assert!(msg.contains("other") && msg.contains(SCHEMA_ID), "{msg}");
    }

    #[test]
    fn model_json_round_trip_and_version_check() {
        let mut m = ClassifierModel::new(("pl", "en"), [0.5, 1.0, 1.5, 0.1, 0.2, 0.3, 0.0], -2.0);
        m.trained_on = TrainedOn { pairs: 12, seed: 9 };
        let json = m.to_json();
        assert!(json.contains("\"direction\": [\n    \"pl\",\n    \"en\"\n  ]"));
        assert_eq!(ClassifierModel::from_json(&json).unwrap(), m);
        let bumped = json.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(
            ClassifierModel::from_json(&bumped),
            Err(ClassifierError::UnknownVersion { found: 2 })
        ));
        let short = json.replace("\"bias\": -2.0", "\"bias\": -2.0, \"extra\": 1");
        assert!(ClassifierModel::from_json(&short).is_ok());
    }

    #[test]
    fn separable_examples_are_fit_exactly() {
        let ex = |v: f64, label| TrainingExample {
            features: FeatureVector {
                values: [v, v, v, v, v, v, 1.0],
                schema_id: SCHEMA_ID,
            },
            label,
        };
        let mut examples = Vec::new();
        for _ in 0..50 {
            examples.push(ex(1.0, Label::Positive));
            examples.push(ex(0.0, Label::Negative));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (w, b) = sgd_fit(&examples, 20, &mut rng);
        let model = ClassifierModel::new(("a", "b"), w, b);
        let correct = examples
            .iter()
            .filter(|e| (model.confidence_unchecked(&e.features.values) >= 0.5) == (e.label == Label::Positive))
            .count();
        assert_eq!(correct, examples.len());
    }

    #[test]
    fn training_rejects_small_corpus() {
        let lines: Vec<String> = (0..9).map(|i| format!("w{i}")).collect();
        let corpus = seed_corpus_from_lines(&lines, &lines).unwrap();
        let err = train(&corpus, &full_lexicon(), &TrainConfig::default()).unwrap_err();
        assert!(matches!(err, ClassifierError::CorpusTooSmall { found: 9 }));
    }

    #[test]
    fn degenerate_corpus_learns_only_position() {
        let lines = vec!["Ala ma kota.".to_string(); 30];
        let corpus = seed_corpus_from_lines(&lines, &lines).unwrap();
        let out = train(&corpus, &full_lexicon(), &TrainConfig::default()).unwrap();
        let w = &out.model.weights;
        // every feature but position is constant 1, so those weights move in lockstep
        assert!(w.iter().enumerate().all(|(k, &v)| k == 5 || v == w[0]));
        assert!(w[5] > w[0]);
        assert_eq!(out.warnings.is_empty(), out.heldout_f1 >= MIN_HELDOUT_F1);
    }

    #[test]
    fn low_heldout_f1_warns() {
        assert!(heldout_warning(0.59).unwrap().contains("below 0.6"));
        assert!(heldout_warning(0.6).is_none());
    }

    #[test]
    fn near_negatives_stay_in_bounds() {
        let lines: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        let corpus = seed_corpus_from_lines(&lines, &lines).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ex = generate_examples(&corpus, &full_lexicon(), 4, &mut rng);
        assert_eq!(ex.len(), 50);
        assert_eq!(ex.iter().filter(|e| e.label == Label::Positive).count(), 10);
    }

    #[test]
    fn auc_and_f1_helpers() {
        assert_eq!(roc_auc(&[(0.9, true), (0.1, false)]), 1.0);
        assert_eq!(roc_auc(&[(0.1, true), (0.9, false)]), 0.0);
        assert_eq!(roc_auc(&[(0.5, true), (0.5, false)]), 0.5);
        assert_eq!(f1_at(&[(0.9, true), (0.8, false), (0.1, true)], 0.5), (0.5, 0.5, 0.5));
        let grid = threshold_grid();
        assert_eq!(grid.len(), 19);
        assert_eq!(grid[2], 0.15);
        assert_eq!(grid[18], 0.95);
    }

    proptest! {
        #[test]
        fn confidence_strictly_inside_unit_interval(
            w in proptest::array::uniform7(-1e3f64..1e3),
            x in proptest::array::uniform7(-10f64..10.0),
            b in -1e4f64..1e4,
        ) {
            let m = ClassifierModel::new(("a", "b"), w, b);
            let c = m.confidence(&FeatureVector { values: x, schema_id: SCHEMA_ID }).unwrap();
            prop_assert!(c > 0.0 && c < 1.0);
        }

        #[test]
        fn identical_sentence_symmetry(text in "[A-Z][a-z]{1,6}( [a-z0-9]{1,5}){0,6}[.,]?", pos in 0.0f64..=1.0) {
            let a = Sentence::new(&text).unwrap();
            let lex = Lexicon::from_entries(("a", "b"), [("x", "y", 0.5)]);
            let f = extract_features(&a, &a, pos, pos, &lex);
            for k in [0, 3, 4, 5] {
                prop_assert_eq!(f.values[k], 1.0);
            }
        }
    }
}
