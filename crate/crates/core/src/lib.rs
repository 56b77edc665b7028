//! Post-editing spelling correction for speech-recognizer output.
//!
//! The pipeline detects out-of-vocabulary words (and, optionally, in-vocabulary
//! words that look wrong in context), proposes corrections that share
//! character bigrams with the error, and picks the one whose preceding
//! four-word context is most frequent in a word n-gram index.
//!
//! ```
//! use ngramfix_core::{build_index, correct_transcript, PipelineConfig};
//!
//! let corpus = "watch episodes of your favorite shows and more\nhaws\n";
//! let index = build_index(corpus.as_bytes(), 5).unwrap();
//! let out = correct_transcript(
//!     "watch episodes of your favorite shaws and more",
//!     &index,
//!     &PipelineConfig::default(),
//! )
//! .unwrap();
//! assert_eq!(out.corrected_text, "watch episodes of your favorite shows and more");
//! ```

pub mod backend;
pub mod candidates;
pub mod corrector;
pub mod detector;
pub mod error;
pub mod eval;
pub mod simulator;
pub mod store;
pub mod token;

pub use backend::NgramBackend;
pub use candidates::{
    char_bigrams, generate_candidates, shared_bigram_count, Candidate, CandidateSet, CharBigram,
    DEFAULT_TOP_K,
};
pub use corrector::{
    build_context_queries, correct_document, correct_transcript, select_correction, ContextQuery,
    ContextScore, Correction, CorrectionDecision, PipelineConfig, Selection, MAX_CONTEXT,
};
pub use detector::{
    detect_nonword_errors, detect_realword_suspects, tokenize, DetectedError, ErrorKind,
    RealWordParams, Transcript,
};
pub use error::{IndexError, LookupError};
pub use eval::{evaluate, EvalError, EvaluationReport};
pub use simulator::{
    inject_errors, read_ground_truth, write_ground_truth, CorruptionKind, CorruptionRecord,
    CorruptionSpec, Injection, SimulatorError,
};
pub use store::{
    build_index, load_index, save_index, IndexBuilder, IndexManifest, Ngram, NgramIndex, MAX_ORDER,
};
pub use token::{normalize_token, Token, NORMALIZATION_VERSION};
