//! Text ingestion: sentence segmentation, token normalization, stopword
//! handling and corpus statistics.
//!
//! Segmentation is purely rule based. A sentence ends at a run of terminal
//! punctuation (`.`, `!`, `?`, `…`), optionally followed by closing quotes or
//! brackets, when the next character is whitespace or the end of input.
//! Abbreviations get no special treatment.
//!
//! Within a sentence, a word is a maximal run of alphanumeric characters,
//! where apostrophes and hyphens are kept only when they sit between two
//! alphanumerics (`don't`, `well-known`). Everything else separates words, so
//! leading and trailing punctuation never reaches the normalized form. The
//! normalized form is the lowercased word; there is no lemmatization.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
    pub sentence_index: usize,
    pub position_in_sentence: usize,
}

/// Knobs for [`tokenize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizationRules {
    pub lowercase: bool,
    /// Keep `'`, `’` and `-` inside words when flanked by alphanumerics.
    pub inner_joiners: bool,
}

impl Default for NormalizationRules {
    fn default() -> Self {
        NormalizationRules {
            lowercase: true,
            inner_joiners: true,
        }
    }
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | '’' | '”' | '»' | ')' | ']' | '}')
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-')
}

fn is_combining_mark(c: char) -> bool {
    matches!(c as u32,
        0x0300..=0x036F | 0x1AB0..=0x1AFF | 0x1DC0..=0x1DFF | 0x20D0..=0x20FF | 0xFE20..=0xFE2F)
}

/// Splits `text` into sentence slices.
fn split_sentences(text: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        if !is_terminal(chars[i].1) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && is_terminal(chars[j].1) {
            j += 1;
        }
        while j < chars.len() && is_closer(chars[j].1) {
            j += 1;
        }
        if j == chars.len() || chars[j].1.is_whitespace() {
            let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
            out.push(&text[start..end]);
            start = end;
        }
        i = j.max(i + 1);
    }
    if start < text.len() {
        out.push(&text[start..]);
    }
    out
}

/// Splits one sentence into word slices.
fn split_words(sentence: &str, rules: NormalizationRules) -> Vec<&str> {
    let chars: Vec<(usize, char)> = sentence.char_indices().collect();
    let mut words = Vec::new();
    let mut start: Option<usize> = None;
    for (k, &(byte, c)) in chars.iter().enumerate() {
        let inside = if c.is_alphanumeric() {
            true
        } else if is_combining_mark(c) {
            start.is_some()
        } else if rules.inner_joiners && is_joiner(c) && start.is_some() {
            chars
                .get(k + 1)
                .is_some_and(|&(_, next)| next.is_alphanumeric())
        } else {
            false
        };
        match (inside, start) {
            (true, None) => start = Some(byte),
            (false, Some(s)) => {
                words.push(&sentence[s..byte]);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        words.push(&sentence[s..]);
    }
    words
}

fn normalize_word(word: &str, rules: NormalizationRules) -> String {
    if rules.lowercase {
        word.to_lowercase()
    } else {
        word.to_owned()
    }
}

/// Tokenizes `text` into sentences of normalized tokens. Sentence indices
/// start at zero; empty sentences are dropped.
pub fn tokenize(text: &str, rules: NormalizationRules) -> Vec<Vec<Token>> {
    let mut out: Vec<Vec<Token>> = Vec::new();
    for sentence in split_sentences(text) {
        let sentence_index = out.len();
        let tokens: Vec<Token> = split_words(sentence, rules)
            .into_iter()
            .filter_map(|w| {
                let normalized = normalize_word(w, rules);
                (!normalized.is_empty()).then_some((w, normalized))
            })
            .enumerate()
            .map(|(position_in_sentence, (surface, normalized))| Token {
                surface: surface.to_owned(),
                normalized,
                sentence_index,
                position_in_sentence,
            })
            .collect();
        if !tokens.is_empty() {
            out.push(tokens);
        }
    }
    out
}

/// Normalizes a single form with the same rules [`tokenize`] applies.
/// Multi-word input yields several forms.
pub fn normalize_form(text: &str, rules: NormalizationRules) -> Vec<String> {
    tokenize(text, rules)
        .into_iter()
        .flatten()
        .map(|t| t.normalized)
        .collect()
}

/// Decodes a document, reporting the first invalid byte offset.
pub fn decode_utf8(path: &Path, bytes: Vec<u8>) -> Result<String> {
    String::from_utf8(bytes).map_err(|e| Error::Encoding {
        path: path.to_path_buf(),
        offset: e.utf8_error().valid_up_to(),
    })
}

pub fn read_document(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_utf8(path, bytes)
}

/// Ordered sentences of tokens, remembering which document each sentence
/// came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Vec<Token>>,
    sources: Vec<String>,
    // first sentence index of each document
    doc_starts: Vec<usize>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a corpus from already tokenized sentences as one document.
    pub fn from_sentences(source: impl Into<String>, sentences: Vec<Vec<Token>>) -> Self {
        let mut corpus = Corpus::new();
        corpus.append_sentences(source.into(), sentences);
        corpus
    }

    pub fn push_document(
        &mut self,
        source: impl Into<String>,
        text: &str,
        rules: NormalizationRules,
    ) {
        self.append_sentences(source.into(), tokenize(text, rules));
    }

    pub(crate) fn append_sentences(&mut self, source: String, sentences: Vec<Vec<Token>>) {
        self.sources.push(source);
        self.doc_starts.push(self.sentences.len());
        for mut sentence in sentences.into_iter().filter(|s| !s.is_empty()) {
            let idx = self.sentences.len();
            for (pos, tok) in sentence.iter_mut().enumerate() {
                tok.sentence_index = idx;
                tok.position_in_sentence = pos;
            }
            self.sentences.push(sentence);
        }
    }

    /// Reads and tokenizes the given files in order, one document each.
    pub fn from_files<P: AsRef<Path>>(paths: &[P], rules: NormalizationRules) -> Result<Self> {
        let mut corpus = Corpus::new();
        for path in paths {
            let path = path.as_ref();
            let text = read_document(path)?;
            corpus.push_document(path.display().to_string(), &text, rules);
        }
        Ok(corpus)
    }

    pub fn sentences(&self) -> &[Vec<Token>] {
        &self.sentences
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn document_count(&self) -> usize {
        self.sources.len()
    }

    /// Sentences belonging to document `doc`.
    pub fn document_sentences(&self, doc: usize) -> &[Vec<Token>] {
        let start = self.doc_starts[doc];
        let end = self
            .doc_starts
            .get(doc + 1)
            .copied()
            .unwrap_or(self.sentences.len());
        &self.sentences[start..end]
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Set of normalized stopword forms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    entries: BTreeSet<String>,
}

impl StopwordList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses one form per line; blank lines and `#` comments are ignored.
    /// Returns the list and the number of lines that normalized to nothing.
    pub fn parse(text: &str) -> (Self, usize) {
        let rules = NormalizationRules::default();
        let mut list = StopwordList::new();
        let mut skipped = 0;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let forms = normalize_form(line, rules);
            if forms.is_empty() {
                skipped += 1;
            }
            list.entries.extend(forms);
        }
        (list, skipped)
    }

    pub fn insert(&mut self, word: &str) -> bool {
        let mut added = false;
        for form in normalize_form(word, NormalizationRules::default()) {
            added |= self.entries.insert(form);
        }
        added
    }

    pub fn contains(&self, normalized: &str) -> bool {
        self.entries.contains(normalized)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

impl<S: AsRef<str>> FromIterator<S> for StopwordList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut list = StopwordList::new();
        for w in iter {
            list.insert(w.as_ref());
        }
        list
    }
}

pub fn load_stopwords(path: &Path) -> Result<StopwordList> {
    let text = read_document(path)?;
    let (list, skipped) = StopwordList::parse(&text);
    if skipped > 0 {
        log::warn!(
            "{}: skipped {skipped} lines that normalize to nothing",
            path.display()
        );
    }
    log::info!("{}: {} stopwords", path.display(), list.len());
    Ok(list)
}

/// Removes stopword tokens, re-indexes positions densely and drops
/// sentences left empty. Document boundaries are kept.
pub fn filter_stopwords(corpus: &Corpus, stops: &StopwordList) -> Corpus {
    if stops.is_empty() {
        return corpus.clone();
    }
    let mut out = Corpus::new();
    for (doc, source) in corpus.sources.iter().enumerate() {
        let kept: Vec<Vec<Token>> = corpus
            .document_sentences(doc)
            .iter()
            .map(|s| {
                s.iter()
                    .filter(|t| !stops.contains(&t.normalized))
                    .cloned()
                    .collect()
            })
            .collect();
        out.append_sentences(source.clone(), kept);
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    #[serde(rename = "words")]
    pub word_count: usize,
    pub unique_words: usize,
    #[serde(rename = "stopwords")]
    pub stopwords_present: usize,
}

pub fn corpus_stats(corpus: &Corpus, stops: &StopwordList) -> CorpusStats {
    let mut distinct: HashSet<&str> = HashSet::new();
    let mut word_count = 0;
    for tok in corpus.sentences.iter().flatten() {
        word_count += 1;
        distinct.insert(&tok.normalized);
    }
    let stopwords_present = distinct.iter().filter(|w| stops.contains(w)).count();
    CorpusStats {
        word_count,
        unique_words: distinct.len(),
        stopwords_present,
    }
}

/// Resolves `files` relative to `base` unless already absolute.
pub fn resolve_paths(base: &Path, files: &[PathBuf]) -> Vec<PathBuf> {
    files
        .iter()
        .map(|f| {
            if f.is_absolute() {
                f.clone()
            } else {
                base.join(f)
            }
        })
        .collect()
}
