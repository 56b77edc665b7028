//! Positional scoring of a correction run against its reference text.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::detector::tokenize;
use crate::simulator::{CorruptionKind, CorruptionRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub total_words: usize,
    pub total_errors: usize,
    pub nonword_errors: usize,
    pub realword_errors: usize,
    pub corrected: usize,
    pub corrected_nonword: usize,
    pub corrected_realword: usize,
    /// Clean positions the correction pass changed. Not part of
    /// `residual_error_rate`.
    pub introduced_errors: usize,
    /// `(total_errors - corrected) / total_words`.
    pub residual_error_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(
        "token counts differ: reference {reference}, corrupted {corrupted}, corrected {corrected}"
    )]
    Misaligned {
        reference: usize,
        corrupted: usize,
        corrected: usize,
    },
    #[error("position {0} differs from the reference but has no ground-truth record")]
    Unrecorded(usize),
    #[error("ground-truth record at position {position}: {reason}")]
    BadRecord { position: usize, reason: String },
}

impl EvaluationReport {
    /// Corrupted-vs-reference error rate before correction.
    pub fn input_error_rate(&self) -> f64 {
        ratio(self.total_errors, self.total_words)
    }

    pub fn correction_rate(&self) -> f64 {
        ratio(self.corrected, self.total_errors)
    }

    pub fn nonword_correction_rate(&self) -> f64 {
        ratio(self.corrected_nonword, self.nonword_errors)
    }

    pub fn realword_correction_rate(&self) -> f64 {
        ratio(self.corrected_realword, self.realword_errors)
    }

    /// Builds a report from raw tallies, deriving totals and the residual
    /// rate.
    pub fn from_counts(
        total_words: usize,
        nonword_errors: usize,
        realword_errors: usize,
        corrected_nonword: usize,
        corrected_realword: usize,
        introduced_errors: usize,
    ) -> EvaluationReport {
        let total_errors = nonword_errors + realword_errors;
        let corrected = corrected_nonword + corrected_realword;
        EvaluationReport {
            total_words,
            total_errors,
            nonword_errors,
            realword_errors,
            corrected,
            corrected_nonword,
            corrected_realword,
            introduced_errors,
            residual_error_rate: ratio(total_errors - corrected, total_words),
        }
    }

    /// `metric<TAB>value` lines, fixed order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let rows: [(&str, String); 13] = [
            ("total_words", self.total_words.to_string()),
            ("total_errors", self.total_errors.to_string()),
            ("nonword_errors", self.nonword_errors.to_string()),
            ("realword_errors", self.realword_errors.to_string()),
            ("corrected", self.corrected.to_string()),
            (
                "not_corrected",
                (self.total_errors - self.corrected).to_string(),
            ),
            ("corrected_nonword", self.corrected_nonword.to_string()),
            ("corrected_realword", self.corrected_realword.to_string()),
            ("introduced_errors", self.introduced_errors.to_string()),
            (
                "input_error_rate",
                format!("{:.6}", self.input_error_rate()),
            ),
            (
                "residual_error_rate",
                format!("{:.6}", self.residual_error_rate),
            ),
            (
                "nonword_correction_rate",
                format!("{:.6}", self.nonword_correction_rate()),
            ),
            (
                "realword_correction_rate",
                format!("{:.6}", self.realword_correction_rate()),
            ),
        ];
        for (key, value) in rows {
            let _ = writeln!(out, "{key}\t{value}");
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "{} words, {} errors ({} non-word, {} real-word); corrected {} ({:.1}%): \
             non-word {:.1}%, real-word {:.1}%; residual error rate {:.2}% (was {:.2}%)",
            self.total_words,
            self.total_errors,
            self.nonword_errors,
            self.realword_errors,
            self.corrected,
            100.0 * self.correction_rate(),
            100.0 * self.nonword_correction_rate(),
            100.0 * self.realword_correction_rate(),
            100.0 * self.residual_error_rate,
            100.0 * self.input_error_rate(),
        )
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Scores `corrected` against `reference`, with `corrupted` defining which
/// positions were errors and `records` their kind.
pub fn evaluate(
    reference: &str,
    corrupted: &str,
    corrected: &str,
    records: &[CorruptionRecord],
) -> Result<EvaluationReport, EvalError> {
    let reference = tokenize(reference);
    let corrupted = tokenize(corrupted);
    let corrected = tokenize(corrected);
    if reference.len() != corrupted.len() || reference.len() != corrected.len() {
        return Err(EvalError::Misaligned {
            reference: reference.len(),
            corrupted: corrupted.len(),
            corrected: corrected.len(),
        });
    }

    let mut kinds: HashMap<usize, CorruptionKind> = HashMap::new();
    for r in records {
        let bad = |reason: &str| EvalError::BadRecord {
            position: r.position,
            reason: reason.to_owned(),
        };
        if r.position >= reference.len() {
            return Err(bad("position is past the end of the text"));
        }
        if reference.tokens()[r.position] != r.original
            || corrupted.tokens()[r.position] != r.corrupted
        {
            return Err(bad("tokens do not match the texts"));
        }
        if kinds.insert(r.position, r.kind).is_some() {
            return Err(bad("duplicate position"));
        }
    }

    let (mut nonword, mut realword, mut fixed_nonword, mut fixed_realword, mut introduced) =
        (0, 0, 0, 0, 0);
    for i in 0..reference.len() {
        let truth = &reference.tokens()[i];
        let fixed = corrected.tokens()[i] == *truth;
        if corrupted.tokens()[i] == *truth {
            introduced += usize::from(!fixed);
            continue;
        }
        match kinds.get(&i).ok_or(EvalError::Unrecorded(i))? {
            CorruptionKind::NonWord => {
                nonword += 1;
                fixed_nonword += usize::from(fixed);
            }
            CorruptionKind::RealWord => {
                realword += 1;
                fixed_realword += usize::from(fixed);
            }
        }
    }

    Ok(EvaluationReport::from_counts(
        reference.len(),
        nonword,
        realword,
        fixed_nonword,
        fixed_realword,
        introduced,
    ))
}
