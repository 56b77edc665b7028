use std::time::Duration;

use ngramfix_core::{CharBigram, LookupError, NgramBackend, Token};
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

/// Bytes left unescaped inside a query value.
const QUERY_VALUE: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

/// An [`NgramBackend`] that forwards every lookup to a running service,
/// one HTTP request per call.
#[derive(Debug, Clone)]
pub struct RemoteBackend {
    base: String,
    agent: ureq::Agent,
    max_order: usize,
}

impl RemoteBackend {
    /// Connects to `base_url` and reads the index max order from its
    /// manifest.
    pub fn connect(base_url: &str) -> Result<RemoteBackend, LookupError> {
        let mut backend = RemoteBackend::with_max_order(base_url, 1);
        let manifest = backend.manifest()?;
        backend.max_order = manifest
            .lines()
            .find_map(|l| l.strip_prefix("max_order\t"))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| LookupError::Protocol("manifest has no valid max_order".into()))?;
        Ok(backend)
    }

    /// A client that trusts the caller about the index max order and does
    /// not contact the service until the first lookup.
    pub fn with_max_order(base_url: &str, max_order: usize) -> RemoteBackend {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(DEFAULT_TIMEOUT))
            .http_status_as_error(false)
            .build()
            .into();
        RemoteBackend {
            base: base_url.trim_end_matches('/').to_owned(),
            agent,
            max_order,
        }
    }

    /// The raw `manifest.tsv` served by the remote index.
    pub fn manifest(&self) -> Result<String, LookupError> {
        self.get("/v1/manifest", None)
    }

    fn get(&self, path: &str, q: Option<String>) -> Result<String, LookupError> {
        let mut url = format!("{}{}", self.base, path);
        if let Some(q) = q {
            url.push_str("?q=");
            url.push_str(&q);
        }
        let mut response = self
            .agent
            .get(&url)
            .call()
            .map_err(|e| LookupError::Transport(format!("GET {url}: {e}")))?;
        let status = response.status().as_u16();
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| LookupError::Transport(format!("GET {url}: {e}")))?;
        match status {
            200 => Ok(body),
            400 => Err(LookupError::Query(body.trim_end().to_owned())),
            other => Err(LookupError::Protocol(format!("GET {url}: HTTP {other}"))),
        }
    }

    fn count(&self, path: &str, q: String) -> Result<u64, LookupError> {
        let body = self.get(path, Some(q))?;
        body.parse()
            .map_err(|_| LookupError::Protocol(format!("expected a count, got {body:?}")))
    }
}

fn encode(s: &str) -> String {
    utf8_percent_encode(s, QUERY_VALUE).to_string()
}

impl NgramBackend for RemoteBackend {
    fn max_order(&self) -> usize {
        self.max_order
    }

    fn unigram_count(&self, token: &Token) -> Result<u64, LookupError> {
        self.count("/v1/unigram", encode(token.as_str()))
    }

    fn ngram_count(&self, ngram: &[Token]) -> Result<u64, LookupError> {
        let q: Vec<String> = ngram.iter().map(|t| encode(t.as_str())).collect();
        self.count("/v1/ngram", q.join("+"))
    }

    fn unigrams_containing_bigram(&self, bigram: CharBigram) -> Result<Vec<Token>, LookupError> {
        let body = self.get("/v1/postings", Some(encode(&bigram.to_string())))?;
        body.lines()
            .map(|w| {
                Token::parse_normalized(w)
                    .ok_or_else(|| LookupError::Protocol(format!("bad postings entry {w:?}")))
            })
            .collect()
    }
}
