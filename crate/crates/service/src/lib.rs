//! HTTP lookup service over an [`NgramIndex`] and a matching client.
//!
//! Protocol (HTTP/1.1, UTF-8, plain-text bodies):
//!
//! | request                         | 200 body                        |
//! |---------------------------------|---------------------------------|
//! | `GET /v1/unigram?q=<token>`     | decimal count                   |
//! | `GET /v1/ngram?q=<t1+t2+...>`   | decimal count (1..=max order)   |
//! | `GET /v1/postings?q=<2 chars>`  | matching words, one per line    |
//! | `GET /v1/manifest`              | the index `manifest.tsv`        |
//!
//! Malformed queries get `400` and a one-line reason.
//!
//! [`NgramIndex`]: ngramfix_core::NgramIndex

mod client;
mod server;

pub use client::RemoteBackend;
pub use server::{router, spawn, RunningService, ServiceConfig, DEFAULT_POSTINGS_CAP};

use std::net::SocketAddr;

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },

    #[error("service runtime failed: {0}")]
    Runtime(#[source] std::io::Error),
}
