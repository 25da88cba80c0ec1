//! Synthetic bilingual fixtures.
//!
//! Two artificial languages share a word-index space: source word `k`
//! translates to target word `k`. Translations are noisy (dropped, inserted and
//! locally swapped words), and only the most frequent words get a lexicon
//! entry, so the classifier faces realistic partial coverage. Everything is
//! a pure function of the seed.

use std::collections::{BTreeSet, HashSet};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::corpus::{seed_corpus_from_lines, Document, DocumentPair, SeedCorpus, Sentence, ABBREVIATIONS};
use crate::lexicon::Lexicon;
use crate::tuner::GoldSet;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub seed: u64,
    pub src_lang: String,
    pub tgt_lang: String,
    pub vocab: usize,
    pub lexicon_entries: usize,
    pub min_words: usize,
    pub max_words: usize,
    pub drop_prob: f64,
    pub insert_prob: f64,
    pub swap_prob: f64,
    pub number_prob: f64,
    pub comma_prob: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 7,
            src_lang: "xs".into(),
            tgt_lang: "xt".into(),
            vocab: 800,
            lexicon_entries: 500,
            min_words: 4,
            max_words: 14,
            drop_prob: 0.1,
            insert_prob: 0.1,
            swap_prob: 0.15,
            number_prob: 0.3,
            comma_prob: 0.3,
        }
    }
}

const SRC_SYLLABLES: &[&str] = &[
    "ka", "to", "mi", "ze", "ru", "pa", "li", "go", "we", "sy", "bo", "da", "ne", "ku", "ta", "ri",
];
const TGT_SYLLABLES: &[&str] = &[
    "bel", "dor", "an", "fim", "gul", "hex", "or", "pun", "sel", "tav", "ul", "vin", "wor", "yex", "zar", "ep",
];

fn make_words(rng: &mut ChaCha8Rng, syllables: &[&str], count: usize) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut words = Vec::with_capacity(count);
    while words.len() < count {
        let len = rng.random_range(2..=4);
        let word: String = (0..len).map(|_| syllables[rng.random_range(0..syllables.len())]).collect();
        if !ABBREVIATIONS.contains(&word.as_str()) && seen.insert(word.clone()) {
            words.push(word);
        }
    }
    words
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Piece {
    Word(usize),
    Number(u32),
    Comma,
}

/// Generator state: two vocabularies, the lexicon, and an RNG.
pub struct SynthLanguages {
    cfg: SynthConfig,
    src_words: Vec<String>,
    tgt_words: Vec<String>,
    lexicon: Lexicon,
    rng: ChaCha8Rng,
}

impl SynthLanguages {
    pub fn new(cfg: SynthConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let src_words = make_words(&mut rng, SRC_SYLLABLES, cfg.vocab);
        let tgt_words = make_words(&mut rng, TGT_SYLLABLES, cfg.vocab);
        let entries: Vec<(String, String, f64)> = (0..cfg.lexicon_entries.min(cfg.vocab))
            .map(|k| (src_words[k].clone(), tgt_words[k].clone(), rng.random_range(0.3..=1.0)))
            .collect();
        let lexicon = Lexicon::from_entries((&cfg.src_lang, &cfg.tgt_lang), entries);
        SynthLanguages {
            cfg,
            src_words,
            tgt_words,
            lexicon,
            rng,
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn config(&self) -> &SynthConfig {
        &self.cfg
    }

    /// Frequent words have low indices.
    fn word(&mut self) -> usize {
        let u: f64 = self.rng.random();
        ((u * u) * self.cfg.vocab as f64) as usize
    }

    fn pieces(&mut self) -> Vec<Piece> {
        let len = self.rng.random_range(self.cfg.min_words..=self.cfg.max_words);
        let mut out: Vec<Piece> = (0..len).map(|_| Piece::Word(self.word())).collect();
        if self.rng.random_bool(self.cfg.number_prob) {
            let at = self.rng.random_range(1..=out.len());
            out.insert(at, Piece::Number(self.rng.random_range(1..3000)));
        }
        if out.len() > 2 && self.rng.random_bool(self.cfg.comma_prob) {
            let at = self.rng.random_range(1..out.len() - 1);
            out.insert(at, Piece::Comma);
        }
        out
    }

    fn translate(&mut self, pieces: &[Piece]) -> Vec<Piece> {
        let mut out = Vec::with_capacity(pieces.len() + 2);
        for p in pieces {
            match p {
                Piece::Word(_) if self.rng.random_bool(self.cfg.drop_prob) => {}
                other => out.push(other.clone()),
            }
            if self.rng.random_bool(self.cfg.insert_prob) {
                out.push(Piece::Word(self.word()));
            }
        }
        if out.iter().all(|p| !matches!(p, Piece::Word(_))) {
            out.insert(0, Piece::Word(self.word()));
        }
        let mut k = 0;
        while k + 1 < out.len() {
            if self.rng.random_bool(self.cfg.swap_prob) {
                out.swap(k, k + 1);
                k += 2;
            } else {
                k += 1;
            }
        }
        // keep the sentence starting with a word and never ending on a comma
        if let Some(first_word) = out.iter().position(|p| matches!(p, Piece::Word(_))) {
            out[..=first_word].rotate_right(1);
        }
        while matches!(out.last(), Some(Piece::Comma)) {
            out.pop();
        }
        out
    }

    fn render(pieces: &[Piece], words: &[String]) -> String {
        let mut text = String::new();
        for (k, p) in pieces.iter().enumerate() {
            match p {
                Piece::Word(w) => {
                    if k > 0 {
                        text.push(' ');
                    }
                    if k == 0 {
                        text.push_str(&capitalize(&words[*w]));
                    } else {
                        text.push_str(&words[*w]);
                    }
                }
                Piece::Number(n) => {
                    if k > 0 {
                        text.push(' ');
                    }
                    text.push_str(&n.to_string());
                }
                Piece::Comma => text.push(','),
            }
        }
        text.push('.');
        text
    }

    /// A source sentence and its noisy translation.
    pub fn sentence_pair(&mut self) -> (String, String) {
        let src = self.pieces();
        let tgt = self.translate(&src);
        (Self::render(&src, &self.src_words), Self::render(&tgt, &self.tgt_words))
    }

    pub fn source_sentence(&mut self) -> String {
        let p = self.pieces();
        Self::render(&p, &self.src_words)
    }

    pub fn target_sentence(&mut self) -> String {
        let p = self.pieces();
        Self::render(&p, &self.tgt_words)
    }

    /// Line-aligned parallel text.
    pub fn parallel_lines(&mut self, n: usize) -> (Vec<String>, Vec<String>) {
        (0..n).map(|_| self.sentence_pair()).unzip()
    }

    pub fn seed_corpus(&mut self, n: usize) -> SeedCorpus {
        let (src, tgt) = self.parallel_lines(n);
        seed_corpus_from_lines(&src, &tgt).expect("equal line counts")
    }

    /// A comparable document pair: `gold` translation pairs kept in order, with
    /// unrelated sentences interleaved at random on each side.
    pub fn comparable_pair(
        &mut self,
        id: &str,
        gold: usize,
        src_distractors: usize,
        tgt_distractors: usize,
    ) -> (DocumentPair, BTreeSet<(usize, usize)>) {
        let pairs: Vec<(String, String)> = (0..gold).map(|_| self.sentence_pair()).collect();
        let src_layout = self.layout(gold, src_distractors);
        let tgt_layout = self.layout(gold, tgt_distractors);
        let mut src = Vec::with_capacity(src_layout.len());
        let mut src_pos = Vec::with_capacity(gold);
        for (k, slot) in src_layout.iter().enumerate() {
            match slot {
                Some(g) => {
                    src_pos.push(k);
                    src.push(pairs[*g].0.clone());
                }
                None => src.push(self.source_sentence()),
            }
        }
        let mut tgt = Vec::with_capacity(tgt_layout.len());
        let mut tgt_pos = Vec::with_capacity(gold);
        for (k, slot) in tgt_layout.iter().enumerate() {
            match slot {
                Some(g) => {
                    tgt_pos.push(k);
                    tgt.push(pairs[*g].1.clone());
                }
                None => tgt.push(self.target_sentence()),
            }
        }
        let doc = |lang: &str, lines: &[String]| Document {
            id: id.to_string(),
            lang: lang.to_string(),
            sentences: lines.iter().map(|l| Sentence::new(l).expect("generated sentences are non-empty")).collect(),
        };
        let pair = DocumentPair {
            id: id.to_string(),
            source: doc(&self.cfg.src_lang, &src),
            target: doc(&self.cfg.tgt_lang, &tgt),
        };
        (pair, src_pos.into_iter().zip(tgt_pos).collect())
    }

    /// Slot order for `gold` ordered items among `distractors` fillers.
    fn layout(&mut self, gold: usize, distractors: usize) -> Vec<Option<usize>> {
        let mut out = Vec::with_capacity(gold + distractors);
        let (mut g, mut d) = (0, 0);
        while g < gold || d < distractors {
            let take_gold = d == distractors
                || (g < gold && self.rng.random_range(0..(gold - g + distractors - d)) < gold - g);
            if take_gold {
                out.push(Some(g));
                g += 1;
            } else {
                out.push(None);
                d += 1;
            }
        }
        out
    }

    /// `docs` comparable pairs with 3..=8 gold pairs and 1..=6 distractors per side.
    pub fn comparable_corpus(&mut self, prefix: &str, docs: usize) -> GoldSet {
        let mut set = GoldSet::default();
        for k in 0..docs {
            let gold = self.rng.random_range(3..=8);
            let sd = self.rng.random_range(1..=6);
            let td = self.rng.random_range(1..=6);
            let (pair, g) = self.comparable_pair(&format!("{prefix}{k:05}"), gold, sd, td);
            set.push(pair, g);
        }
        set
    }
}

/// JSONL line for a document pair in pre-segmented list form, with optional gold pairs.
pub fn document_pair_json(pair: &DocumentPair, gold: Option<&BTreeSet<(usize, usize)>>) -> String {
    let raw = |d: &Document| d.sentences.iter().map(|s| s.raw.clone()).collect::<Vec<_>>();
    let mut value = json!({
        "id": pair.id,
        "src_lang": pair.source.lang,
        "tgt_lang": pair.target.lang,
        "src": raw(&pair.source),
        "tgt": raw(&pair.target),
    });
    if let Some(g) = gold {
        value["gold"] = json!(g.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>());
    }
    value.to_string()
}

/// The whole gold set as JSONL.
pub fn gold_set_jsonl(set: &GoldSet, with_gold: bool) -> String {
    let mut out = String::new();
    for (doc, gold) in set.docs.iter().zip(&set.gold) {
        out.push_str(&document_pair_json(doc, with_gold.then_some(gold)));
        out.push('\n');
    }
    out
}
