use crate::candidates::CharBigram;
use crate::error::LookupError;
use crate::store::NgramIndex;
use crate::token::Token;

/// The lookups the correction pipeline needs from an n-gram source.
///
/// Implemented by the in-process [`NgramIndex`] and by remote clients. A
/// failed lookup must surface as an error, never as a zero count.
pub trait NgramBackend {
    /// Highest n-gram order this backend can answer.
    fn max_order(&self) -> usize;

    fn unigram_exists(&self, token: &Token) -> Result<bool, LookupError> {
        Ok(self.unigram_count(token)? > 0)
    }

    fn unigram_count(&self, token: &Token) -> Result<u64, LookupError> {
        self.ngram_count(std::slice::from_ref(token))
    }

    /// Count of the word sequence, zero when absent.
    fn ngram_count(&self, ngram: &[Token]) -> Result<u64, LookupError>;

    /// Vocabulary words containing `bigram`, lexicographically sorted.
    fn unigrams_containing_bigram(&self, bigram: CharBigram) -> Result<Vec<Token>, LookupError>;
}

impl NgramBackend for NgramIndex {
    fn max_order(&self) -> usize {
        NgramIndex::max_order(self)
    }

    fn unigram_exists(&self, token: &Token) -> Result<bool, LookupError> {
        Ok(NgramIndex::unigram_exists(self, token.as_str()))
    }

    fn unigram_count(&self, token: &Token) -> Result<u64, LookupError> {
        Ok(NgramIndex::unigram_count(self, token.as_str()))
    }

    fn ngram_count(&self, ngram: &[Token]) -> Result<u64, LookupError> {
        self.count(ngram)
    }

    fn unigrams_containing_bigram(&self, bigram: CharBigram) -> Result<Vec<Token>, LookupError> {
        Ok(NgramIndex::unigrams_containing_bigram(self, bigram)
            .into_iter()
            .map(Token::from_index)
            .collect())
    }
}

impl<B: NgramBackend + ?Sized> NgramBackend for &B {
    fn max_order(&self) -> usize {
        (**self).max_order()
    }

    fn unigram_exists(&self, token: &Token) -> Result<bool, LookupError> {
        (**self).unigram_exists(token)
    }

    fn unigram_count(&self, token: &Token) -> Result<u64, LookupError> {
        (**self).unigram_count(token)
    }

    fn ngram_count(&self, ngram: &[Token]) -> Result<u64, LookupError> {
        (**self).ngram_count(ngram)
    }

    fn unigrams_containing_bigram(&self, bigram: CharBigram) -> Result<Vec<Token>, LookupError> {
        (**self).unigrams_containing_bigram(bigram)
    }
}
