//! Context-sensitive selection among candidate corrections.
//!
//! Each candidate is appended to the (up to) four words preceding the error
//! and the resulting n-gram is counted. The most frequent context wins. When
//! every candidate's context is unseen, the oldest prefix word is dropped and
//! the query retried one order lower, down to bare unigram counts.

use std::ops::Range;

use crate::backend::NgramBackend;
use crate::candidates::{generate_candidates, Candidate, DEFAULT_TOP_K};
use crate::detector::{
    detect_nonword_errors, detect_realword_suspects, tokenize, DetectedError, ErrorKind,
    RealWordParams, Transcript,
};
use crate::error::LookupError;
use crate::token::Token;

/// Most preceding words a context query can carry.
pub const MAX_CONTEXT: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub top_k: usize,
    /// Preceding words per context query, `0..=4`.
    pub context_window: usize,
    pub realword_enabled: bool,
    pub realword_margin: f64,
    pub backoff_enabled: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            top_k: DEFAULT_TOP_K,
            context_window: MAX_CONTEXT,
            realword_enabled: false,
            realword_margin: 10.0,
            backoff_enabled: true,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.top_k == 0 {
            return Err("top_k must be at least 1".into());
        }
        if self.context_window > MAX_CONTEXT {
            return Err(format!("context window must be at most {MAX_CONTEXT}"));
        }
        if self.realword_margin.is_nan() || self.realword_margin < 1.0 {
            return Err("real-word margin must be at least 1".into());
        }
        Ok(())
    }
}

/// A candidate placed after the words that precede the error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextQuery {
    pub prefix: Vec<Token>,
    pub candidate: Token,
}

impl ContextQuery {
    pub fn order(&self) -> usize {
        self.prefix.len() + 1
    }

    /// The query cut down to `order` words, keeping the newest prefix words.
    pub fn truncated(&self, order: usize) -> Vec<Token> {
        let keep = order.saturating_sub(1).min(self.prefix.len());
        let mut words = self.prefix[self.prefix.len() - keep..].to_vec();
        words.push(self.candidate.clone());
        words
    }
}

/// The up-to-`window` tokens right before `position`, capped so that prefix
/// plus candidate fits the backend's max order.
pub(crate) fn context_prefix(
    transcript: &Transcript,
    position: usize,
    window: usize,
    max_order: usize,
) -> &[Token] {
    let len = window
        .min(MAX_CONTEXT)
        .min(max_order.saturating_sub(1))
        .min(position);
    &transcript.tokens()[position - len..position]
}

/// One query per candidate, all sharing the same prefix. Candidates keep
/// their given order, which is the tie-break order during selection.
pub fn build_context_queries<'a>(
    transcript: &Transcript,
    position: usize,
    candidates: impl IntoIterator<Item = &'a Token>,
    window: usize,
    max_order: usize,
) -> Vec<ContextQuery> {
    let prefix = context_prefix(transcript, position, window, max_order);
    candidates
        .into_iter()
        .map(|c| ContextQuery {
            prefix: prefix.to_vec(),
            candidate: c.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextScore {
    pub word: Token,
    pub order: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub chosen: Option<Token>,
    /// Every candidate's count at `backoff_order`, in candidate order.
    pub scores: Vec<ContextScore>,
    /// The order at which the decision was made (or the lowest one tried).
    pub backoff_order: usize,
}

/// Picks the candidate whose context is most frequent, backing off to
/// shorter contexts while every count is zero. Ties go to the earlier
/// candidate.
pub fn select_correction<B: NgramBackend + ?Sized>(
    queries: &[ContextQuery],
    backend: &B,
    backoff_enabled: bool,
) -> Result<Selection, LookupError> {
    let full_order = queries.iter().map(ContextQuery::order).max().unwrap_or(1);
    let lowest = if backoff_enabled { 1 } else { full_order };

    let mut scores = Vec::new();
    for order in (lowest..=full_order).rev() {
        scores.clear();
        for q in queries {
            let words = q.truncated(order);
            scores.push(ContextScore {
                word: q.candidate.clone(),
                order: words.len(),
                count: backend.ngram_count(&words)?,
            });
        }
        let mut best: Option<&ContextScore> = None;
        for s in &scores {
            if s.count > best.map_or(0, |b| b.count) {
                best = Some(s);
            }
        }
        if let Some(best) = best {
            return Ok(Selection {
                chosen: Some(best.word.clone()),
                scores: scores.clone(),
                backoff_order: order,
            });
        }
    }
    Ok(Selection {
        chosen: None,
        scores,
        backoff_order: lowest,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionDecision {
    pub error: DetectedError,
    pub candidates: Vec<Candidate>,
    /// The replacement, or `None` when the error is left as is.
    pub chosen: Option<Token>,
    pub scores: Vec<ContextScore>,
    pub backoff_order: usize,
}

impl CorrectionDecision {
    /// Whether applying this decision changes the text.
    pub fn changes_text(&self) -> bool {
        self.chosen.as_ref().is_some_and(|c| *c != self.error.token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub corrected_text: String,
    pub decisions: Vec<CorrectionDecision>,
}

/// Decides one detected error against the original transcript.
pub fn decide<B: NgramBackend + ?Sized>(
    transcript: &Transcript,
    error: &DetectedError,
    backend: &B,
    config: &PipelineConfig,
) -> Result<CorrectionDecision, LookupError> {
    let set = generate_candidates(&error.token, backend, config.top_k)?;
    let mut words: Vec<&Token> = Vec::with_capacity(set.len() + 1);
    // In real-word mode the original competes too and wins ties.
    if error.kind == ErrorKind::RealWordSuspect {
        words.push(&error.token);
    }
    words.extend(set.words());

    let order_cap = backend.max_order();
    if set.is_empty() {
        let full =
            context_prefix(transcript, error.position, config.context_window, order_cap).len() + 1;
        return Ok(CorrectionDecision {
            error: error.clone(),
            candidates: Vec::new(),
            chosen: None,
            scores: Vec::new(),
            backoff_order: full,
        });
    }

    let queries = build_context_queries(
        transcript,
        error.position,
        words,
        config.context_window,
        order_cap,
    );
    let selection = select_correction(&queries, backend, config.backoff_enabled)?;
    Ok(CorrectionDecision {
        error: error.clone(),
        candidates: set.ranked,
        chosen: selection.chosen,
        scores: selection.scores,
        backoff_order: selection.backoff_order,
    })
}

/// Runs detection and correction over `text`.
///
/// All decisions use the original tokens as context. Replacements keep the
/// surrounding punctuation and a leading capital; everything else in the
/// text is copied through byte for byte. On a lookup error nothing is
/// returned.
pub fn correct_transcript<B: NgramBackend + ?Sized>(
    text: &str,
    backend: &B,
    config: &PipelineConfig,
) -> Result<Correction, LookupError> {
    let transcript = tokenize(text);
    let mut errors = detect_nonword_errors(&transcript, backend)?;
    if config.realword_enabled {
        let params = RealWordParams {
            margin: config.realword_margin,
            window: config.context_window,
            top_k: config.top_k,
        };
        errors.extend(detect_realword_suspects(&transcript, backend, &params)?);
        errors.sort_by_key(|e| e.position);
    }

    let decisions = errors
        .iter()
        .map(|e| decide(&transcript, e, backend, config))
        .collect::<Result<Vec<_>, _>>()?;

    let edits = decisions.iter().filter(|d| d.changes_text()).map(|d| {
        let span = transcript.spans()[d.error.position].clone();
        let chosen = d.chosen.as_ref().expect("changing decision has a word");
        (
            span,
            match_case(transcript.surface(d.error.position), chosen.as_str()),
        )
    });
    let corrected_text = apply_edits(text, edits);

    Ok(Correction {
        corrected_text,
        decisions,
    })
}

/// Corrects each line of `text` on its own, since the index counts lines as
/// sentences and never joins n-grams across them. Line endings are kept and
/// decision positions index the token sequence of the whole text.
pub fn correct_document<B: NgramBackend + ?Sized>(
    text: &str,
    backend: &B,
    config: &PipelineConfig,
) -> Result<Correction, LookupError> {
    let mut corrected_text = String::with_capacity(text.len());
    let mut decisions = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let mut out = correct_transcript(line, backend, config)?;
        for d in &mut out.decisions {
            d.error.position += offset;
        }
        offset += tokenize(line).len();
        corrected_text.push_str(&out.corrected_text);
        decisions.append(&mut out.decisions);
    }
    Ok(Correction {
        corrected_text,
        decisions,
    })
}

/// Capitalizes `word` when `original` starts with an uppercase letter.
pub fn match_case(original: &str, word: &str) -> String {
    let upper = original.chars().next().is_some_and(char::is_uppercase);
    let mut chars = word.chars();
    match chars.next() {
        Some(first) if upper => first.to_uppercase().chain(chars).collect(),
        _ => word.to_owned(),
    }
}

/// Replaces ascending, non-overlapping byte ranges of `text`.
pub fn apply_edits(text: &str, edits: impl IntoIterator<Item = (Range<usize>, String)>) -> String {
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for (span, replacement) in edits {
        out.push_str(&text[cursor..span.start]);
        out.push_str(&replacement);
        cursor = span.end;
    }
    out.push_str(&text[cursor..]);
    out
}
