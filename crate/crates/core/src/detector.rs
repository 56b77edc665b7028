//! Transcript tokenization and error detection.

use std::ops::Range;

use crate::backend::NgramBackend;
use crate::candidates::{generate_candidates, DEFAULT_TOP_K};
use crate::corrector::context_prefix;
use crate::error::LookupError;
use crate::token::{normalize_token, trim_edges, Token};

/// ASR output split into normalized word tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    raw: String,
    tokens: Vec<Token>,
    /// Byte range of each token's word core in `raw`, edge punctuation
    /// excluded. Ascending and non-overlapping.
    spans: Vec<Range<usize>>,
}

impl Transcript {
    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn spans(&self) -> &[Range<usize>] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The original (un-normalized) text of token `i`.
    pub fn surface(&self, i: usize) -> &str {
        &self.raw[self.spans[i].clone()]
    }
}

/// Splits on whitespace and normalizes each piece; pieces that normalize to
/// nothing are dropped.
pub fn tokenize(text: &str) -> Transcript {
    let mut tokens = Vec::new();
    let mut spans = Vec::new();
    let base = text.as_ptr() as usize;
    for segment in text.split_whitespace() {
        let Some(token) = normalize_token(segment) else {
            continue;
        };
        let core = trim_edges(segment);
        let start = core.as_ptr() as usize - base;
        tokens.push(token);
        spans.push(start..start + core.len());
    }
    Transcript {
        raw: text.to_owned(),
        tokens,
        spans,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// Not in the vocabulary.
    NonWord,
    /// In the vocabulary but out-scored in context by a similar word.
    RealWordSuspect,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::NonWord => "nonword",
            ErrorKind::RealWordSuspect => "realword",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectedError {
    pub position: usize,
    pub token: Token,
    pub kind: ErrorKind,
}

/// Numerals are outside the word vocabulary and are never flagged.
fn exempt(token: &Token) -> bool {
    token.has_digit()
}

/// One `NonWord` error, in position order, for every token the backend does
/// not know.
pub fn detect_nonword_errors<B: NgramBackend + ?Sized>(
    transcript: &Transcript,
    backend: &B,
) -> Result<Vec<DetectedError>, LookupError> {
    let mut errors = Vec::new();
    for (position, token) in transcript.tokens.iter().enumerate() {
        if exempt(token) {
            continue;
        }
        if !backend.unigram_exists(token)? {
            errors.push(DetectedError {
                position,
                token: token.clone(),
                kind: ErrorKind::NonWord,
            });
        }
    }
    Ok(errors)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealWordParams {
    /// A candidate must out-count the original context by this factor.
    /// `f64::INFINITY` disables the pass.
    pub margin: f64,
    /// Preceding words used as context (at most 4).
    pub window: usize,
    pub top_k: usize,
}

impl Default for RealWordParams {
    fn default() -> Self {
        RealWordParams {
            margin: 10.0,
            window: 4,
            top_k: DEFAULT_TOP_K,
        }
    }
}

/// Flags in-vocabulary tokens whose context count is beaten by a similar
/// word's context count by at least `params.margin`.
///
/// The context is the same preceding-word prefix the corrector uses, queried
/// at full order only. A zero count for the original token is treated as 1.
/// Tokens that are out of vocabulary, contain digits, or are a single
/// character are never flagged here.
pub fn detect_realword_suspects<B: NgramBackend + ?Sized>(
    transcript: &Transcript,
    backend: &B,
    params: &RealWordParams,
) -> Result<Vec<DetectedError>, LookupError> {
    if !params.margin.is_finite() {
        return Ok(Vec::new());
    }
    let mut suspects = Vec::new();
    for (position, token) in transcript.tokens.iter().enumerate() {
        if exempt(token) || token.char_len() < 2 || !backend.unigram_exists(token)? {
            continue;
        }
        let candidates = generate_candidates(token, backend, params.top_k)?;
        if candidates.is_empty() {
            continue;
        }

        let prefix = context_prefix(transcript, position, params.window, backend.max_order());
        let mut query: Vec<Token> = prefix.to_vec();
        query.push(token.clone());
        let original = backend.ngram_count(&query)?.max(1) as f64;

        for word in candidates.words() {
            *query.last_mut().expect("query holds the candidate") = word.clone();
            if backend.ngram_count(&query)? as f64 >= params.margin * original {
                suspects.push(DetectedError {
                    position,
                    token: token.clone(),
                    kind: ErrorKind::RealWordSuspect,
                });
                break;
            }
        }
    }
    Ok(suspects)
}
