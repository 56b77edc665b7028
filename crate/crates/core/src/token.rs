//! Word tokens and the normalization applied to every word before it is
//! counted, looked up or compared.

use std::borrow::Borrow;
use std::fmt;

/// Version tag written into index manifests. Bump whenever
/// [`normalize_token`] changes behavior, since persisted indexes are only
/// valid for the rules they were built with.
pub const NORMALIZATION_VERSION: &str = "lower-edgepunct-v1";

/// A normalized word: lower-cased, no leading or trailing punctuation,
/// no whitespace, never empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    /// Normalizes `raw` into a token. Shorthand for [`normalize_token`].
    pub fn new(raw: &str) -> Option<Token> {
        normalize_token(raw)
    }

    /// Accepts `s` only if it is already in normalized form.
    pub fn parse_normalized(s: &str) -> Option<Token> {
        normalize_token(s).filter(|t| t.0 == s)
    }

    /// Words read back out of an index were normalized when counted.
    pub(crate) fn from_index(s: &str) -> Token {
        Token(s.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn has_digit(&self) -> bool {
        self.0.chars().any(|c| c.is_numeric())
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Token {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Lower-cases `raw` and strips leading and trailing punctuation. Interior
/// apostrophes and hyphens (and any other interior characters) survive.
/// Returns `None` when nothing is left, or when the residue still contains
/// whitespace (a token is a single word).
pub fn normalize_token(raw: &str) -> Option<Token> {
    let lowered = trim_edges(raw).to_lowercase();
    let word = trim_edges(&lowered);
    if word.is_empty() || word.chars().any(char::is_whitespace) {
        return None;
    }
    Some(Token(word.to_owned()))
}

/// The slice of `raw` left after stripping edge punctuation. Exposed so the
/// tokenizer can record where a token's word core sits inside its segment.
pub(crate) fn trim_edges(raw: &str) -> &str {
    raw.trim_matches(|c: char| !c.is_alphanumeric())
}
