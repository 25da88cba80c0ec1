//! Bilingual word-translation table.
//!
//! TSV rows are `src<TAB>tgt<TAB>prob`. Lines starting with `#` are comments;
//! a comment of the form `# langs: <src> <tgt>` sets the table's direction.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use thiserror::Error;

use crate::corpus::{is_alphabetic_token, normalize};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected 3 tab-separated columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: probability `{value}` is not in (0, 1]")]
    Probability { line: usize, value: String },
}

type Table = HashMap<String, Vec<(String, f64)>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    pub direction: (String, String),
    forward: Table,
    reverse: Table,
}

fn valid_probability(p: f64) -> bool {
    p > 0.0 && p <= 1.0
}

fn build_table(pairs: &HashMap<(String, String), f64>, flip: bool) -> Table {
    let mut table: Table = HashMap::new();
    for ((s, t), &p) in pairs {
        let (key, value) = if flip { (t, s) } else { (s, t) };
        table.entry(key.clone()).or_default().push((value.clone(), p));
    }
    for list in table.values_mut() {
        list.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    }
    table
}

impl Lexicon {
    /// Builds a lexicon from `(src, tgt, prob)` entries. Words are normalized and
    /// duplicate pairs keep their highest probability. Entries with an invalid
    /// probability are ignored.
    pub fn from_entries<I, S, T>(direction: (&str, &str), entries: I) -> Lexicon
    where
        I: IntoIterator<Item = (S, T, f64)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut pairs: HashMap<(String, String), f64> = HashMap::new();
        for (s, t, p) in entries {
            if !valid_probability(p) {
                continue;
            }
            let key = (normalize(s.as_ref()), normalize(t.as_ref()));
            if key.0.is_empty() || key.1.is_empty() {
                continue;
            }
            let slot = pairs.entry(key).or_insert(p);
            if p > *slot {
                *slot = p;
            }
        }
        Lexicon {
            direction: (direction.0.to_string(), direction.1.to_string()),
            forward: build_table(&pairs, false),
            reverse: build_table(&pairs, true),
        }
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<Lexicon, LexiconError> {
        let mut direction = ("src".to_string(), "tgt".to_string());
        let mut entries = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|source| LexiconError::Io {
                path: format!("line {line_no}"),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(langs) = comment.trim().strip_prefix("langs:") {
                    let langs: Vec<&str> = langs.split_whitespace().collect();
                    if let [s, t] = langs[..] {
                        direction = (s.to_string(), t.to_string());
                    }
                }
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 3 {
                return Err(LexiconError::Columns {
                    line: line_no,
                    found: cols.len(),
                });
            }
            let value = cols[2].trim();
            let prob: f64 = value
                .parse()
                .ok()
                .filter(|p| valid_probability(*p))
                .ok_or_else(|| LexiconError::Probability {
                    line: line_no,
                    value: value.to_string(),
                })?;
            entries.push((cols[0].to_string(), cols[1].to_string(), prob));
        }
        Ok(Lexicon::from_entries(
            (&direction.0, &direction.1),
            entries,
        ))
    }

    /// Number of distinct source words.
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Translations of a normalized source word, most probable first.
    pub fn translations(&self, word: &str) -> &[(String, f64)] {
        self.forward.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Source words translating to a normalized target word.
    pub fn reverse_translations(&self, word: &str) -> &[(String, f64)] {
        self.reverse.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The same table read target-to-source.
    pub fn reversed(&self) -> Lexicon {
        Lexicon {
            direction: (self.direction.1.clone(), self.direction.0.clone()),
            forward: self.reverse.clone(),
            reverse: self.forward.clone(),
        }
    }

    pub fn with_direction(mut self, src: &str, tgt: &str) -> Lexicon {
        self.direction = (src.to_string(), tgt.to_string());
        self
    }

    /// Writes the table as TSV, sorted, with a `# langs:` header.
    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<(&String, &String, f64)> = self
            .forward
            .iter()
            .flat_map(|(s, ts)| ts.iter().map(move |(t, p)| (s, t, *p)))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(b.0).then_with(|| a.1.cmp(b.1)));
        let mut out = format!("# langs: {} {}\n", self.direction.0, self.direction.1);
        for (s, t, p) in rows {
            out.push_str(&format!("{s}\t{t}\t{p}\n"));
        }
        out
    }
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Lexicon::from_reader(BufReader::new(file))
}

/// Fraction of alphabetic `from` tokens with a translation (per `table`) in `to`.
/// Tokens must already be normalized.
pub(crate) fn covered_fraction<'a>(
    lookup: impl Fn(&str) -> &'a [(String, f64)],
    from_alpha: &[String],
    to: &HashSet<String>,
) -> f64 {
    if from_alpha.is_empty() {
        return 0.0;
    }
    let hits = from_alpha
        .iter()
        .filter(|tok| lookup(tok).iter().any(|(t, _)| to.contains(t)))
        .count();
    hits as f64 / from_alpha.len() as f64
}

/// Source-to-target coverage of a token pair, see [`covered_fraction`].
pub fn coverage<S: AsRef<str>, T: AsRef<str>>(lex: &Lexicon, src_tokens: &[S], tgt_tokens: &[T]) -> f64 {
    let alpha: Vec<String> = src_tokens
        .iter()
        .map(|t| t.as_ref().to_lowercase())
        .filter(|t| is_alphabetic_token(t))
        .collect();
    let targets: HashSet<String> = tgt_tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
    covered_fraction(|w| lex.translations(w), &alpha, &targets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Cursor;

    fn lex(rows: &str) -> Result<Lexicon, LexiconError> {
        Lexicon::from_reader(Cursor::new(rows))
    }

    #[test]
    fn loads_single_entry() {
        let l = lex("kot\tcat\t0.9\n").unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.translations("kot"), &[("cat".to_string(), 0.9)]);
        assert_eq!(l.reverse_translations("cat"), &[("kot".to_string(), 0.9)]);
        assert_eq!(l.direction, ("src".to_string(), "tgt".to_string()));
    }

    #[test]
    fn duplicates_keep_max_probability() {
        let l = lex("kot\tcat\t0.9\nkot\tcat\t0.4\n").unwrap();
        assert_eq!(l.translations("kot"), &[("cat".to_string(), 0.9)]);
    }

    #[test]
    fn targets_sorted_by_probability() {
        let l = lex("# langs: pl en\n\nKot\tkitty\t0.2\nkot\tCat\t0.7\n").unwrap();
        let words: Vec<_> = l.translations("kot").iter().map(|(w, _)| w.as_str()).collect();
        assert_eq!(words, ["cat", "kitty"]);
        assert_eq!(l.direction, ("pl".to_string(), "en".to_string()));
        assert_eq!(l.reversed().direction, ("en".to_string(), "pl".to_string()));
    }

    #[test]
    fn rejects_bad_rows() {
        let err = lex("kot\tcat\t1.5\n").unwrap_err();
        assert!(matches!(err, LexiconError::Probability { line: 1, .. }));
        let err = lex("a\tb\t0.5\nkot\tcat\n").unwrap_err();
        assert!(matches!(err, LexiconError::Columns { line: 2, found: 2 }));
        assert!(lex("kot\tcat\t0\n").is_err());
        assert!(lex("kot\tcat\tabc\n").is_err());
    }

    #[test]
    fn tsv_round_trip() {
        let l = lex("# langs: pl en\nkot\tcat\t0.9\npies\tdog\t0.5\n").unwrap();
        assert_eq!(lex(&l.to_tsv()).unwrap(), l);
    }

    #[test]
    fn coverage_examples() {
        let l = lex("kot\tcat\t0.9\npies\tdog\t0.8\n").unwrap();
        assert_eq!(coverage(&l, &["kot", "pies"], &["cat", "dog"]), 1.0);
        assert_eq!(coverage(&l, &["kot", "pies"], &["house"]), 0.0);
        assert_eq!(coverage(&l, &["Kot", "pies", ",", "12"], &["CAT", "."]), 0.5);
        assert_eq!(coverage(&l, &[",", "12"], &["cat"]), 0.0);
    }

    proptest! {
        #[test]
        fn coverage_is_bounded_and_monotone(
            src in proptest::collection::vec("[a-d]{1,2}", 0..8),
            tgt in proptest::collection::vec("[w-z]{1,2}", 0..8),
            extra in "[w-z]{1,2}",
        ) {
            let l = Lexicon::from_entries(("a", "b"), [
                ("a", "w", 0.9), ("b", "x", 0.5), ("ab", "yz", 0.3), ("c", "zz", 1.0), ("a", "y", 0.2),
            ]);
            let before = coverage(&l, &src, &tgt);
            prop_assert!((0.0..=1.0).contains(&before));
            let mut more = tgt.clone();
            more.push(extra);
            prop_assert!(coverage(&l, &src, &more) >= before);
        }
    }
}
