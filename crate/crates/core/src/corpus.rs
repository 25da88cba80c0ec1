//! Documents, sentences and the loaders that read them from disk.
//!
//! Segmentation and tokenization are rule based. A sentence ends at a run of
//! `.`, `!` or `?` that is followed by whitespace and then an uppercase letter
//! or a digit, unless the word in front of a lone `.` is on the abbreviation
//! stop-list ([`ABBREVIATIONS`]).

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde_json::Value;
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Words that never end a sentence when followed by a single `.`.
/// Compared case-insensitively.
pub const ABBREVIATIONS: &[&str] = &["dr", "mr", "mrs", "ms", "prof", "st", "no", "vs", "etc"];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed JSON: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: missing field `{field}`")]
    MissingField { line: usize, field: &'static str },
    #[error("line {line}: field `{field}` {message}")]
    InvalidField {
        line: usize,
        field: &'static str,
        message: String,
    },
    #[error("line {line}: source and target language are both `{lang}`")]
    SameLanguage { line: usize, lang: String },
    #[error("seed corpus line counts differ: {src} vs {tgt}")]
    LineCountMismatch { src: usize, tgt: usize },
}

/// Canonical text form: Unicode NFC, lowercase, single spaces.
pub fn normalize(text: &str) -> String {
    let lowered: String = text.nfc().collect::<String>().to_lowercase();
    lowered.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub raw: String,
    pub tokens: Vec<String>,
    pub normalized: String,
}

impl Sentence {
    /// Builds a sentence from raw text. Returns `None` for blank input.
    pub fn new(raw: &str) -> Option<Sentence> {
        let raw = raw.trim();
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            return None;
        }
        Some(Sentence {
            raw: raw.to_string(),
            normalized: normalize(raw),
            tokens,
        })
    }

    /// Lowercased NFC tokens.
    pub fn normalized_tokens(&self) -> impl Iterator<Item = String> + '_ {
        self.tokens.iter().map(|t| t.to_lowercase())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub lang: String,
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentPair {
    pub id: String,
    pub source: Document,
    pub target: Document,
}

impl DocumentPair {
    pub fn direction(&self) -> (&str, &str) {
        (&self.source.lang, &self.target.lang)
    }

    /// The same pair with source and target exchanged.
    pub fn swapped(&self) -> DocumentPair {
        DocumentPair {
            id: self.id.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SeedCorpus {
    pub pairs: Vec<(Sentence, Sentence)>,
    /// Lines dropped because one side was blank.
    pub dropped: usize,
}

impl SeedCorpus {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Source and target sides exchanged.
    pub fn reversed(&self) -> SeedCorpus {
        SeedCorpus {
            pairs: self
                .pairs
                .iter()
                .map(|(s, t)| (t.clone(), s.clone()))
                .collect(),
            dropped: self.dropped,
        }
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_abbreviation(before: &str) -> bool {
    let word: String = before
        .chars()
        .rev()
        .take_while(|c| c.is_alphabetic())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    if word.is_empty() {
        return false;
    }
    let lower = word.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}

/// Splits raw text into sentences.
pub fn segment_sentences(text: &str) -> Vec<Sentence> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut k = 0usize;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if !is_terminator(c) {
            k += 1;
            continue;
        }
        let mut run_end = k;
        while run_end + 1 < chars.len() && is_terminator(chars[run_end + 1].1) {
            run_end += 1;
        }
        let after = run_end + 1;
        let mut next = after;
        while next < chars.len() && chars[next].1.is_whitespace() {
            next += 1;
        }
        let boundary = next > after
            && next < chars.len()
            && (chars[next].1.is_uppercase() || chars[next].1.is_ascii_digit());
        let single_period = run_end == k && c == '.';
        if boundary && !(single_period && is_abbreviation(&text[start..pos])) {
            let end = chars[after].0;
            if let Some(s) = Sentence::new(&text[start..end]) {
                out.push(s);
            }
            start = chars[next].0;
            k = next;
        } else {
            k = after;
        }
    }
    if let Some(s) = Sentence::new(&text[start..]) {
        out.push(s);
    }
    out
}

/// Splits a sentence into maximal letter/digit runs and single punctuation marks.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut run = String::new();
    for c in sentence.nfc() {
        if c.is_alphanumeric() {
            run.push(c);
            continue;
        }
        if !run.is_empty() {
            tokens.push(std::mem::take(&mut run));
        }
        if !c.is_whitespace() {
            tokens.push(c.to_string());
        }
    }
    if !run.is_empty() {
        tokens.push(run);
    }
    tokens
}

pub fn is_digit_token(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| c.is_numeric())
}

pub fn is_alphabetic_token(token: &str) -> bool {
    token.chars().any(|c| c.is_alphabetic())
}

pub fn is_punctuation_token(token: &str) -> bool {
    let mut chars = token.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if !c.is_alphanumeric())
}

fn open(path: &Path) -> Result<File, CorpusError> {
    File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn field<'a>(obj: &'a Value, line: usize, name: &'static str) -> Result<&'a Value, CorpusError> {
    obj.get(name)
        .ok_or(CorpusError::MissingField { line, field: name })
}

fn string_field(obj: &Value, line: usize, name: &'static str) -> Result<String, CorpusError> {
    field(obj, line, name)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| CorpusError::InvalidField {
            line,
            field: name,
            message: "must be a string".into(),
        })
}

fn document_field(
    obj: &Value,
    line: usize,
    name: &'static str,
    id: &str,
    lang: String,
) -> Result<Document, CorpusError> {
    let sentences = match field(obj, line, name)? {
        Value::String(text) => segment_sentences(text),
        Value::Array(items) => {
            let mut sentences = Vec::with_capacity(items.len());
            for item in items {
                let text = item.as_str().ok_or_else(|| CorpusError::InvalidField {
                    line,
                    field: name,
                    message: "list entries must be strings".into(),
                })?;
                sentences.extend(Sentence::new(text));
            }
            sentences
        }
        _ => {
            return Err(CorpusError::InvalidField {
                line,
                field: name,
                message: "must be a string or a list of strings".into(),
            })
        }
    };
    Ok(Document {
        id: id.to_string(),
        lang,
        sentences,
    })
}

/// Parses one JSONL object into a document pair. Either side may come back empty.
pub fn parse_pair_value(obj: &Value, line: usize) -> Result<DocumentPair, CorpusError> {
    if !obj.is_object() {
        return Err(CorpusError::Malformed {
            line,
            message: "expected a JSON object".into(),
        });
    }
    let id = string_field(obj, line, "id")?;
    let src_lang = string_field(obj, line, "src_lang")?;
    let tgt_lang = string_field(obj, line, "tgt_lang")?;
    if src_lang == tgt_lang {
        return Err(CorpusError::SameLanguage {
            line,
            lang: src_lang,
        });
    }
    let source = document_field(obj, line, "src", &id, src_lang)?;
    let target = document_field(obj, line, "tgt", &id, tgt_lang)?;
    Ok(DocumentPair { id, source, target })
}

/// Parses one JSONL line. Blank lines yield `Ok(None)`.
pub fn parse_jsonl_line(text: &str, line: usize) -> Result<Option<Value>, CorpusError> {
    if text.trim().is_empty() {
        return Ok(None);
    }
    serde_json::from_str(text)
        .map(Some)
        .map_err(|e| CorpusError::Malformed {
            line,
            message: e.to_string(),
        })
}

/// Streaming reader over a document-pair JSONL file.
///
/// Pairs with an empty side are skipped with a warning and counted in
/// [`DocumentPairReader::skipped`].
pub struct DocumentPairReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    skipped: usize,
    failed: bool,
}

impl<R: BufRead> DocumentPairReader<R> {
    pub fn new(reader: R) -> Self {
        DocumentPairReader {
            lines: reader.lines(),
            line_no: 0,
            skipped: 0,
            failed: false,
        }
    }

    pub fn skipped(&self) -> usize {
        self.skipped
    }
}

impl<R: BufRead> Iterator for DocumentPairReader<R> {
    type Item = Result<DocumentPair, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            let text = match self.lines.next()? {
                Ok(text) => text,
                Err(source) => {
                    self.failed = true;
                    return Some(Err(CorpusError::Io {
                        path: format!("line {}", self.line_no + 1),
                        source,
                    }));
                }
            };
            self.line_no += 1;
            let parsed = parse_jsonl_line(&text, self.line_no)
                .and_then(|v| v.map(|v| parse_pair_value(&v, self.line_no)).transpose());
            match parsed {
                Ok(None) => continue,
                Ok(Some(pair)) if pair.source.is_empty() || pair.target.is_empty() => {
                    log::warn!(
                        "line {}: document pair `{}` has an empty side, skipped",
                        self.line_no,
                        pair.id
                    );
                    self.skipped += 1;
                }
                Ok(Some(pair)) => return Some(Ok(pair)),
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

/// Opens a document-pair JSONL file for streaming.
pub fn load_document_pairs(
    path: impl AsRef<Path>,
) -> Result<DocumentPairReader<BufReader<File>>, CorpusError> {
    Ok(DocumentPairReader::new(BufReader::new(open(path.as_ref())?)))
}

fn read_lines(path: &Path) -> Result<Vec<String>, CorpusError> {
    BufReader::new(open(path)?)
        .lines()
        .collect::<Result<_, _>>()
        .map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })
}

/// Pairs line `i` of `src_path` with line `i` of `tgt_path`.
pub fn load_seed_corpus(
    src_path: impl AsRef<Path>,
    tgt_path: impl AsRef<Path>,
) -> Result<SeedCorpus, CorpusError> {
    let src = read_lines(src_path.as_ref())?;
    let tgt = read_lines(tgt_path.as_ref())?;
    seed_corpus_from_lines(&src, &tgt)
}

pub fn seed_corpus_from_lines<S: AsRef<str>>(
    src: &[S],
    tgt: &[S],
) -> Result<SeedCorpus, CorpusError> {
    if src.len() != tgt.len() {
        return Err(CorpusError::LineCountMismatch {
            src: src.len(),
            tgt: tgt.len(),
        });
    }
    let mut corpus = SeedCorpus::default();
    for (s, t) in src.iter().zip(tgt) {
        match (Sentence::new(s.as_ref()), Sentence::new(t.as_ref())) {
            (Some(s), Some(t)) => corpus.pairs.push((s, t)),
            _ => corpus.dropped += 1,
        }
    }
    if corpus.dropped > 0 {
        log::warn!("seed corpus: dropped {} blank line(s)", corpus.dropped);
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Cursor;

    fn raws(sentences: &[Sentence]) -> Vec<&str> {
        sentences.iter().map(|s| s.raw.as_str()).collect()
    }

    #[test]
    fn segments_simple_text() {
        let s = segment_sentences("Hello world. How are you?");
        assert_eq!(raws(&s), ["Hello world.", "How are you?"]);
        assert!(segment_sentences("").is_empty());
        assert!(segment_sentences("   \n ").is_empty());
    }

    #[test]
    fn abbreviation_suppresses_split() {
        // "Dr." is followed by " S" (uppercase), which would split without the
        // stop-list; "arrived." is followed by " H" and splits.
        let s = segment_sentences("Dr. Smith arrived. He sat.");
        assert_eq!(raws(&s), ["Dr. Smith arrived.", "He sat."]);
        let s = segment_sentences("Item no. 5 was sold. It vs. It was close.");
        assert_eq!(raws(&s), ["Item no. 5 was sold.", "It vs. It was close."]);
    }

    #[test]
    fn no_split_without_uppercase_or_digit() {
        let s = segment_sentences("pi is 3.14 today. then more! 2 more?! Yes");
        assert_eq!(raws(&s), ["pi is 3.14 today. then more!", "2 more?!", "Yes"]);
    }

    #[test]
    fn tokenizes_words_and_punctuation() {
        assert_eq!(tokenize("The cat, sat."), ["The", "cat", ",", "sat", "."]);
        assert_eq!(tokenize("x"), ["x"]);
        assert_eq!(tokenize("3.14 apples"), ["3", ".", "14", "apples"]);
        assert_eq!(tokenize("don't"), ["don", "'", "t"]);
    }

    #[test]
    fn normalization_folds_case_and_whitespace() {
        assert_eq!(normalize("  The\tCAT \n sat "), "the cat sat");
        // Decomposed e + combining acute composes to U+00E9.
        assert_eq!(normalize("Cafe\u{301}"), "caf\u{e9}");
        let s = Sentence::new(" Ab  C ").unwrap();
        assert_eq!(s.normalized, "ab c");
        assert_eq!(s.raw, "Ab  C");
    }

    #[test]
    fn token_classes() {
        assert!(is_digit_token("2015"));
        assert!(!is_digit_token("a1"));
        assert!(is_alphabetic_token("a1"));
        assert!(is_punctuation_token(","));
        assert!(!is_punctuation_token(",,"));
        assert!(!is_punctuation_token("a"));
    }

    const THREE: &str = r#"{"id":"a","src_lang":"pl","tgt_lang":"en","src":"A. B.","tgt":["One.","Two."]}
{"id":"b","src_lang":"pl","tgt_lang":"en","src":["X"],"tgt":"Y."}

{"id":"c","src_lang":"pl","tgt_lang":"en","src":"Z z.","tgt":"W w."}
"#;

    #[test]
    fn loads_pairs_in_order() {
        let pairs: Vec<_> = DocumentPairReader::new(Cursor::new(THREE))
            .collect::<Result<_, _>>()
            .unwrap();
        let ids: Vec<_> = pairs.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(pairs[0].source.len(), 2);
        assert_eq!(pairs[0].target.len(), 2);
        assert_eq!(pairs[0].direction(), ("pl", "en"));
    }

    #[test]
    fn malformed_line_is_reported_by_number() {
        let text = "{\"id\":\"a\",\"src_lang\":\"pl\",\"tgt_lang\":\"en\",\"src\":\"A\",\"tgt\":\"B\"}\n{oops\n";
        let mut reader = DocumentPairReader::new(Cursor::new(text));
        assert!(reader.next().unwrap().is_ok());
        let err = reader.next().unwrap().unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(reader.next().is_none());
    }

    #[test]
    fn missing_field_is_named() {
        let text = "{\"id\":\"a\",\"src_lang\":\"pl\",\"tgt_lang\":\"en\",\"src\":\"A\"}\n";
        let err = DocumentPairReader::new(Cursor::new(text))
            .next()
            .unwrap()
            .unwrap_err();
        assert!(matches!(err, CorpusError::MissingField { line: 1, field: "tgt" }));
    }

    #[test]
    fn empty_side_is_skipped_and_counted() {
        let text = "{\"id\":\"a\",\"src_lang\":\"pl\",\"tgt_lang\":\"en\",\"src\":\"  \",\"tgt\":\"B\"}\n\
                    {\"id\":\"b\",\"src_lang\":\"pl\",\"tgt_lang\":\"en\",\"src\":\"A\",\"tgt\":[]}\n\
                    {\"id\":\"c\",\"src_lang\":\"pl\",\"tgt_lang\":\"en\",\"src\":\"A\",\"tgt\":\"B\"}\n";
        let mut reader = DocumentPairReader::new(Cursor::new(text));
        let pairs: Vec<_> = reader.by_ref().collect::<Result<_, _>>().unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(reader.skipped(), 2);
    }

    #[test]
    fn same_language_is_rejected() {
        let text = "{\"id\":\"a\",\"src_lang\":\"en\",\"tgt_lang\":\"en\",\"src\":\"A\",\"tgt\":\"B\"}\n";
        let err = DocumentPairReader::new(Cursor::new(text))
            .next()
            .unwrap()
            .unwrap_err();
        assert!(matches!(err, CorpusError::SameLanguage { .. }));
    }

    #[test]
    fn seed_corpus_pairs_lines() {
        let src = ["a", "b", "c", "d", "e"];
        let tgt = ["1", "2", "3", "4", "5"];
        assert_eq!(seed_corpus_from_lines(&src, &tgt).unwrap().len(), 5);

        let err = seed_corpus_from_lines(&src, &tgt[..4]).unwrap_err();
        assert!(err.to_string().contains("5 vs 4"), "{err}");

        let tgt = ["1", "2", " ", "4", "5"];
        let corpus = seed_corpus_from_lines(&src, &tgt).unwrap();
        assert_eq!(corpus.len(), 4);
        assert_eq!(corpus.dropped, 1);
    }

    fn squash(s: &str) -> String {
        s.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    proptest! {
        #[test]
        fn segmentation_round_trips(text in "[A-Za-z0-9 .!?,\n]{0,80}") {
            let sentences = segment_sentences(&text);
            let joined = sentences.iter().map(|s| s.raw.as_str()).collect::<Vec<_>>().join(" ");
            prop_assert_eq!(squash(&joined), squash(&text));
            for s in &sentences {
                prop_assert!(!s.tokens.is_empty());
                prop_assert_eq!(&s.normalized, &normalize(&s.raw));
            }
        }

        #[test]
        fn tokenize_is_idempotent(text in "\\PC{0,40}") {
            let once = tokenize(&text);
            let twice = tokenize(&once.join(" "));
            prop_assert_eq!(once, twice);
        }
    }
}
