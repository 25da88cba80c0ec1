//! Parallel sentence mining from comparable document pairs.
//!
//! Candidate sentence pairs are scored by a linear translation classifier
//! ([`classifier`]), each document pair is aligned with a monotone
//! Needleman-Wunsch dynamic program ([`aligner`]), and aligned pairs above a
//! confidence threshold are emitted ([`miner`]). [`tuner`] picks the threshold
//! and gap penalty against gold alignments and [`metrics`] scores translations
//! with BLEU and NIST.

pub mod aligner;
pub mod classifier;
pub mod cli;
pub mod corpus;
pub mod lexicon;
pub mod metrics;
pub mod miner;
pub mod synth;
pub mod tuner;

pub use aligner::{
    build_similarity_matrix, extract_pairs, nw_align, nw_align_wavefront, search_align, AlignmentPath, Engine,
    MiningParams, Move, SimilarityMatrix,
};
pub use classifier::{extract_features, train, ClassifierModel, FeatureVector, TrainConfig};
pub use corpus::{load_document_pairs, load_seed_corpus, segment_sentences, tokenize, Document, DocumentPair, SeedCorpus, Sentence};
pub use lexicon::{coverage, load_lexicon, Lexicon};
pub use miner::{bidirectional_merge, count_unique_tokens, mine_corpus, mine_document, Direction, MinedPair, Miner, MinerConfig, MiningReport};
pub use tuner::{f_measure, tune, GoldSet, TuneResult};
