//! Seeded injection of ASR-like word errors with ground truth.
//!
//! Non-word errors are single character edits (substitution, deletion or
//! insertion) re-rolled until the result is out of vocabulary. Real-word
//! errors swap a token for another vocabulary word with similar spelling.
//! Both kinds must keep at least `min_shared_bigrams` character bigrams of
//! the original word.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::backend::NgramBackend;
use crate::candidates::{char_bigrams, shared_bigram_count};
use crate::corrector::{apply_edits, match_case};
use crate::detector::tokenize;
use crate::error::LookupError;
use crate::token::Token;

/// Attempts at drawing an out-of-vocabulary edit before a token is skipped.
const MAX_EDIT_ATTEMPTS: usize = 64;

const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionSpec {
    pub nonword_rate: f64,
    pub realword_rate: f64,
    pub seed: u64,
    pub min_shared_bigrams: usize,
}

impl Default for CorruptionSpec {
    fn default() -> Self {
        CorruptionSpec {
            nonword_rate: 0.0,
            realword_rate: 0.0,
            seed: 0,
            min_shared_bigrams: 2,
        }
    }
}

impl CorruptionSpec {
    pub fn validate(&self) -> Result<(), String> {
        let in_unit = |r: f64| (0.0..=1.0).contains(&r);
        if !in_unit(self.nonword_rate) || !in_unit(self.realword_rate) {
            return Err("corruption rates must lie in [0, 1]".into());
        }
        if self.nonword_rate + self.realword_rate > 1.0 {
            return Err("nonword_rate + realword_rate must not exceed 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorruptionKind {
    NonWord,
    RealWord,
}

impl fmt::Display for CorruptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorruptionKind::NonWord => "nonword",
            CorruptionKind::RealWord => "realword",
        })
    }
}

impl FromStr for CorruptionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nonword" => Ok(CorruptionKind::NonWord),
            "realword" => Ok(CorruptionKind::RealWord),
            other => Err(format!("unknown corruption kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionRecord {
    pub position: usize,
    pub original: Token,
    pub corrupted: Token,
    pub kind: CorruptionKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    pub corrupted_text: String,
    pub records: Vec<CorruptionRecord>,
}

#[derive(Debug, thiserror::Error)]
pub enum SimulatorError {
    #[error("invalid corruption spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Lookup(#[from] LookupError),
}

/// Corrupts tokens of `text` at the configured rates. Output is a pure
/// function of the inputs and `spec.seed`; surrounding punctuation,
/// whitespace and a leading capital are preserved.
pub fn inject_errors<B: NgramBackend + ?Sized>(
    text: &str,
    backend: &B,
    spec: &CorruptionSpec,
) -> Result<Injection, SimulatorError> {
    spec.validate().map_err(SimulatorError::Spec)?;
    let transcript = tokenize(text);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut records = Vec::new();

    for (position, original) in transcript.tokens().iter().enumerate() {
        // One draw per token keeps the selection stable when rates change
        // only in which kind they pick.
        let roll: f64 = rng.gen();
        let kind = if roll < spec.nonword_rate {
            CorruptionKind::NonWord
        } else if roll < spec.nonword_rate + spec.realword_rate {
            CorruptionKind::RealWord
        } else {
            continue;
        };
        if original.has_digit() {
            continue;
        }
        let corrupted = match kind {
            CorruptionKind::NonWord => nonword_edit(original, backend, spec, &mut rng)?,
            CorruptionKind::RealWord => realword_swap(original, backend, spec, &mut rng)?,
        };
        match corrupted {
            Some(corrupted) => records.push(CorruptionRecord {
                position,
                original: original.clone(),
                corrupted,
                kind,
            }),
            None => log::debug!("no {kind} corruption for {original:?} at {position}, skipped"),
        }
    }

    let edits = records.iter().map(|r| {
        let surface = transcript.surface(r.position);
        (
            transcript.spans()[r.position].clone(),
            match_case(surface, r.corrupted.as_str()),
        )
    });
    Ok(Injection {
        corrupted_text: apply_edits(text, edits),
        records,
    })
}

/// Applies one random edit to `word`. Returns `None` if the edit leaves
/// nothing behind.
pub(crate) fn random_edit<R: Rng>(word: &str, rng: &mut R) -> Option<String> {
    let mut chars: Vec<char> = word.chars().collect();
    match rng.gen_range(0..3) {
        0 => {
            let i = rng.gen_range(0..chars.len());
            chars[i] = random_letter(rng);
        }
        1 => {
            let i = rng.gen_range(0..chars.len());
            chars.remove(i);
        }
        _ => {
            let i = rng.gen_range(0..=chars.len());
            chars.insert(i, random_letter(rng));
        }
    }
    if chars.is_empty() {
        None
    } else {
        Some(chars.into_iter().collect())
    }
}

fn random_letter<R: Rng>(rng: &mut R) -> char {
    ALPHABET[rng.gen_range(0..ALPHABET.len())] as char
}

fn nonword_edit<B: NgramBackend + ?Sized, R: Rng>(
    original: &Token,
    backend: &B,
    spec: &CorruptionSpec,
    rng: &mut R,
) -> Result<Option<Token>, LookupError> {
    for _ in 0..MAX_EDIT_ATTEMPTS {
        let Some(edited) = random_edit(original.as_str(), rng) else {
            continue;
        };
        // Edits that normalize differently (e.g. gain edge punctuation) are
        // not single-token substitutions.
        let Some(candidate) = Token::parse_normalized(&edited) else {
            continue;
        };
        if candidate == *original
            || shared_bigram_count(original.as_str(), candidate.as_str()) < spec.min_shared_bigrams
        {
            continue;
        }
        if !backend.unigram_exists(&candidate)? {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

fn realword_swap<B: NgramBackend + ?Sized, R: Rng>(
    original: &Token,
    backend: &B,
    spec: &CorruptionSpec,
    rng: &mut R,
) -> Result<Option<Token>, LookupError> {
    let mut pool: Vec<Token> = Vec::new();
    for g in char_bigrams(original.as_str()) {
        pool.extend(backend.unigrams_containing_bigram(g)?);
    }
    pool.sort_unstable();
    pool.dedup();
    pool.retain(|w| {
        w != original
            && !w.has_digit()
            && shared_bigram_count(original.as_str(), w.as_str()) >= spec.min_shared_bigrams.max(1)
    });
    Ok(pool.choose(rng).cloned())
}

/// Ground-truth TSV: `position<TAB>original<TAB>corrupted<TAB>kind`.
pub fn write_ground_truth(records: &[CorruptionRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.position, r.original, r.corrupted, r.kind
        ));
    }
    out
}

pub fn read_ground_truth<R: BufRead>(reader: R) -> Result<Vec<CorruptionRecord>, String> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| format!("line {}: {e}", i + 1))?;
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| format!("line {}: {what}", i + 1);
        let fields: Vec<&str> = line.split('\t').collect();
        let [position, original, corrupted, kind] = fields[..] else {
            return Err(bad("expected 4 tab-separated fields"));
        };
        records.push(CorruptionRecord {
            position: position.parse().map_err(|_| bad("bad position"))?,
            original: Token::parse_normalized(original).ok_or_else(|| bad("bad original token"))?,
            corrupted: Token::parse_normalized(corrupted)
                .ok_or_else(|| bad("bad corrupted token"))?,
            kind: kind.parse().map_err(|e: String| bad(&e))?,
        });
    }
    Ok(records)
}
