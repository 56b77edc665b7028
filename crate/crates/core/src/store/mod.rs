//! The local word n-gram index: per-order occurrence tables plus a
//! character-bigram inverted index over the unigram vocabulary.
//!
//! An index is built once (single writer) and is immutable afterwards, so a
//! shared reference can serve lookups from any number of threads.

mod persist;

use std::collections::HashMap;
use std::io::BufRead;

use crate::candidates::{char_bigrams, CharBigram};
use crate::error::{IndexError, LookupError};
use crate::token::{normalize_token, Token, NORMALIZATION_VERSION};

pub use persist::{load_index, save_index, MANIFEST_FILE};

/// Highest n-gram order the engine ever counts or queries.
pub const MAX_ORDER: usize = 5;

/// A word sequence of length `1..=MAX_ORDER`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ngram(Vec<Token>);

impl Ngram {
    pub fn new(tokens: Vec<Token>) -> Result<Ngram, LookupError> {
        check_order(tokens.len(), MAX_ORDER)?;
        Ok(Ngram(tokens))
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }
}

impl std::ops::Deref for Ngram {
    type Target = [Token];

    fn deref(&self) -> &[Token] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexManifest {
    pub corpus_id: String,
    pub max_order: usize,
    /// Total running tokens seen while building.
    pub token_count: u64,
    pub distinct_unigrams: usize,
    pub normalization_version: String,
}

impl IndexManifest {
    /// The `manifest.tsv` text: one `key<TAB>value` line per field.
    pub fn to_tsv(&self) -> String {
        format!(
            "corpus_id\t{}\nmax_order\t{}\ntoken_count\t{}\ndistinct_unigrams\t{}\nnormalization_version\t{}\n",
            self.corpus_id,
            self.max_order,
            self.token_count,
            self.distinct_unigrams,
            self.normalization_version,
        )
    }
}

/// Incrementally counts n-grams over one or more corpora.
///
/// Every input line is a sentence: n-grams never span a line break.
#[derive(Debug)]
pub struct IndexBuilder {
    corpus_id: String,
    max_order: usize,
    tables: Vec<HashMap<String, u64>>,
    token_count: u64,
}

impl IndexBuilder {
    pub fn new(max_order: usize) -> Result<IndexBuilder, IndexError> {
        if !(1..=MAX_ORDER).contains(&max_order) {
            return Err(IndexError::Config(format!(
                "max order must be in 1..={MAX_ORDER}, got {max_order}"
            )));
        }
        Ok(IndexBuilder {
            corpus_id: "corpus".to_owned(),
            max_order,
            tables: vec![HashMap::new(); max_order],
            token_count: 0,
        })
    }

    pub fn corpus_id(mut self, id: impl Into<String>) -> IndexBuilder {
        // The manifest is key<TAB>value per line; keep the id on one field.
        self.corpus_id = id
            .into()
            .chars()
            .map(|c| if c.is_whitespace() { '_' } else { c })
            .collect();
        self
    }

    pub fn add_line(&mut self, line: &str) {
        let tokens: Vec<Token> = line
            .split_whitespace()
            .filter_map(normalize_token)
            .collect();
        self.token_count += tokens.len() as u64;
        for (k, table) in self.tables.iter_mut().enumerate() {
            for window in tokens.windows(k + 1) {
                *table.entry(join_key(window)).or_insert(0) += 1;
            }
        }
    }

    pub fn add_reader<R: BufRead>(&mut self, mut reader: R) -> Result<(), IndexError> {
        let mut line = String::new();
        loop {
            line.clear();
            if reader.read_line(&mut line).map_err(IndexError::Input)? == 0 {
                return Ok(());
            }
            self.add_line(&line);
        }
    }

    pub fn finish(self) -> NgramIndex {
        NgramIndex::from_parts(
            self.corpus_id,
            self.max_order,
            self.tables,
            self.token_count,
        )
    }
}

/// Builds an index from a UTF-8 text stream, one sentence per line.
pub fn build_index<R: BufRead>(corpus: R, max_order: usize) -> Result<NgramIndex, IndexError> {
    let mut builder = IndexBuilder::new(max_order)?;
    builder.add_reader(corpus)?;
    Ok(builder.finish())
}

#[derive(Debug, Clone)]
pub struct NgramIndex {
    corpus_id: String,
    max_order: usize,
    token_count: u64,
    /// `tables[k - 1]` maps space-joined k-grams to their counts.
    tables: Vec<HashMap<String, u64>>,
    /// Unigram vocabulary in lexicographic order; postings refer into it.
    vocab: Vec<String>,
    postings: HashMap<CharBigram, Vec<u32>>,
}

impl NgramIndex {
    pub fn empty(max_order: usize) -> Result<NgramIndex, IndexError> {
        Ok(IndexBuilder::new(max_order)?.finish())
    }

    pub(crate) fn from_parts(
        corpus_id: String,
        max_order: usize,
        tables: Vec<HashMap<String, u64>>,
        token_count: u64,
    ) -> NgramIndex {
        let mut vocab: Vec<String> = tables[0].keys().cloned().collect();
        vocab.sort_unstable();

        let mut postings: HashMap<CharBigram, Vec<u32>> = HashMap::new();
        for (id, word) in vocab.iter().enumerate() {
            for bigram in char_bigrams(word) {
                postings.entry(bigram).or_default().push(id as u32);
            }
        }

        NgramIndex {
            corpus_id,
            max_order,
            token_count,
            tables,
            vocab,
            postings,
        }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn manifest(&self) -> IndexManifest {
        IndexManifest {
            corpus_id: self.corpus_id.clone(),
            max_order: self.max_order,
            token_count: self.token_count,
            distinct_unigrams: self.vocab.len(),
            normalization_version: NORMALIZATION_VERSION.to_owned(),
        }
    }

    /// Number of distinct n-grams stored for each order, lowest order first.
    pub fn distinct_per_order(&self) -> Vec<usize> {
        self.tables.iter().map(HashMap::len).collect()
    }

    /// The unigram vocabulary, sorted.
    pub fn vocab(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.vocab.iter().map(String::as_str)
    }

    pub fn unigram_exists(&self, token: &str) -> bool {
        self.tables[0].contains_key(token)
    }

    pub fn unigram_count(&self, token: &str) -> u64 {
        self.tables[0].get(token).copied().unwrap_or(0)
    }

    /// Stored count of `tokens`, zero when absent.
    pub fn count<S: AsRef<str>>(&self, tokens: &[S]) -> Result<u64, LookupError> {
        check_order(tokens.len(), self.max_order)?;
        Ok(self.tables[tokens.len() - 1]
            .get(&join_key(tokens))
            .copied()
            .unwrap_or(0))
    }

    pub fn ngram_count(&self, ngram: &Ngram) -> Result<u64, LookupError> {
        self.count(ngram.tokens())
    }

    /// Vocabulary words containing `bigram`, in lexicographic order.
    pub fn unigrams_containing_bigram(&self, bigram: CharBigram) -> Vec<&str> {
        self.postings
            .get(&bigram)
            .map(|ids| {
                ids.iter()
                    .map(|&id| self.vocab[id as usize].as_str())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// All stored n-grams of one order as `(tokens, count)`, in no
    /// particular order.
    pub fn iter_order(&self, order: usize) -> impl Iterator<Item = (Vec<&str>, u64)> + '_ {
        self.tables
            .get(order.wrapping_sub(1))
            .into_iter()
            .flat_map(|table| table.iter().map(|(k, &c)| (k.split(' ').collect(), c)))
    }
}

pub(crate) fn check_order(len: usize, max_order: usize) -> Result<(), LookupError> {
    if len == 0 {
        return Err(LookupError::Query("empty n-gram".to_owned()));
    }
    if len > max_order {
        return Err(LookupError::Query(format!(
            "{len}-gram exceeds the index max order {max_order}"
        )));
    }
    Ok(())
}

fn join_key<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut key = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            key.push(' ');
        }
        key.push_str(t.as_ref());
    }
    key
}
