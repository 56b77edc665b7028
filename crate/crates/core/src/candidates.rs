//! Candidate corrections by shared character bigrams.
//!
//! Every distinct adjacent character pair of the error word is looked up in
//! the bigram postings; each vocabulary word that turns up is scored by the
//! number of distinct bigrams it shares with the error word. The best `k`
//! survive, ordered by shared count, then corpus frequency, then spelling.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::backend::NgramBackend;
use crate::error::LookupError;
use crate::token::Token;

pub const DEFAULT_TOP_K: usize = 8;

/// An adjacent pair of characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharBigram([char; 2]);

impl CharBigram {
    pub fn new(first: char, second: char) -> CharBigram {
        CharBigram([first, second])
    }

    /// Parses a string of exactly two characters.
    pub fn parse(s: &str) -> Option<CharBigram> {
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => Some(CharBigram([a, b])),
            _ => None,
        }
    }

    /// Whether `word` contains this pair as a substring.
    pub fn occurs_in(&self, word: &str) -> bool {
        let chars: Vec<char> = word.chars().collect();
        chars.windows(2).any(|w| w == self.0)
    }
}

impl fmt::Display for CharBigram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0[0], self.0[1])
    }
}

/// Distinct adjacent character pairs of `word`, in first-occurrence order.
/// Words shorter than two characters have none.
pub fn char_bigrams(word: &str) -> Vec<CharBigram> {
    let chars: Vec<char> = word.chars().collect();
    let mut out: Vec<CharBigram> = Vec::with_capacity(chars.len().saturating_sub(1));
    for pair in chars.windows(2) {
        let g = CharBigram([pair[0], pair[1]]);
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Size of the intersection of the two words' distinct bigram sets.
pub fn shared_bigram_count(a: &str, b: &str) -> usize {
    let a = char_bigrams(a);
    char_bigrams(b).iter().filter(|g| a.contains(g)).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub word: Token,
    /// Distinct character bigrams shared with the error word.
    pub shared: usize,
    /// Corpus occurrence count of `word`.
    pub unigram_count: u64,
}

impl Candidate {
    /// Ranking order: shared desc, then frequency desc, then word asc.
    pub fn rank_cmp(&self, other: &Candidate) -> Ordering {
        other
            .shared
            .cmp(&self.shared)
            .then(other.unigram_count.cmp(&self.unigram_count))
            .then_with(|| self.word.cmp(&other.word))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub error: Token,
    pub ranked: Vec<Candidate>,
}

impl CandidateSet {
    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> + '_ {
        self.ranked.iter().map(|c| &c.word)
    }
}

/// The top `k` vocabulary words sharing character bigrams with `error`.
///
/// The error word itself never appears in the result. An error with no
/// bigrams, or whose bigrams have no postings, yields an empty set.
pub fn generate_candidates<B: NgramBackend + ?Sized>(
    error: &Token,
    backend: &B,
    k: usize,
) -> Result<CandidateSet, LookupError> {
    let bigrams = char_bigrams(error.as_str());

    // Each posting list a word appears in is one shared bigram.
    let mut shared: HashMap<Token, usize> = HashMap::new();
    for g in &bigrams {
        for word in backend.unigrams_containing_bigram(*g)? {
            *shared.entry(word).or_insert(0) += 1;
        }
    }
    shared.remove(error);

    let mut scored: Vec<(Token, usize)> = shared.into_iter().collect();
    scored.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    // Frequencies only matter for words at or above the shared count of the
    // k-th word; everything below can never make the cut.
    let cutoff = match scored.get(k.saturating_sub(1)) {
        Some(&(_, s)) if k > 0 => s,
        _ => 0,
    };
    let mut ranked = Vec::new();
    for (word, s) in scored
        .into_iter()
        .take_while(|&(_, s)| s >= cutoff && s > 0)
    {
        let unigram_count = backend.unigram_count(&word)?;
        ranked.push(Candidate {
            word,
            shared: s,
            unigram_count,
        });
    }
    ranked.sort_by(Candidate::rank_cmp);
    ranked.truncate(k);

    Ok(CandidateSet {
        error: error.clone(),
        ranked,
    })
}
