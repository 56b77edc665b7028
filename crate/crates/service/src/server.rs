use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::routing::get;
use axum::Router;
use ngramfix_core::{CharBigram, NgramIndex, Token};
use tokio::sync::oneshot;

use crate::ServiceError;

/// Most words a postings response carries.
pub const DEFAULT_POSTINGS_CAP: usize = 1000;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub postings_cap: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            postings_cap: DEFAULT_POSTINGS_CAP,
        }
    }
}

#[derive(Clone)]
struct AppState {
    index: Arc<NgramIndex>,
    config: Arc<ServiceConfig>,
}

type Reply = (StatusCode, String);
type Params = Query<HashMap<String, String>>;

fn bad_request(reason: impl std::fmt::Display) -> Reply {
    (StatusCode::BAD_REQUEST, format!("{reason}\n"))
}

fn query_param(params: &HashMap<String, String>) -> Result<&str, Reply> {
    params
        .get("q")
        .map(String::as_str)
        .ok_or_else(|| bad_request("missing q parameter"))
}

fn parse_token(s: &str) -> Result<Token, Reply> {
    Token::parse_normalized(s)
        .ok_or_else(|| bad_request(format!("{s:?} is not a normalized token")))
}

async fn unigram(State(state): State<AppState>, Query(params): Params) -> Reply {
    let result = query_param(&params).and_then(parse_token);
    match result {
        Ok(token) => (
            StatusCode::OK,
            state.index.unigram_count(token.as_str()).to_string(),
        ),
        Err(reply) => reply,
    }
}

async fn ngram(State(state): State<AppState>, Query(params): Params) -> Reply {
    let tokens = match query_param(&params) {
        // '+' separators arrive as spaces after form decoding.
        Ok(q) => q.split(' ').map(parse_token).collect::<Result<Vec<_>, _>>(),
        Err(reply) => return reply,
    };
    let tokens = match tokens {
        Ok(t) => t,
        Err(reply) => return reply,
    };
    match state.index.count(&tokens) {
        Ok(count) => (StatusCode::OK, count.to_string()),
        Err(e) => bad_request(e),
    }
}

async fn postings(State(state): State<AppState>, Query(params): Params) -> Reply {
    let q = match query_param(&params) {
        Ok(q) => q,
        Err(reply) => return reply,
    };
    let Some(bigram) = CharBigram::parse(q) else {
        return bad_request(format!("{q:?} is not exactly two characters"));
    };
    let mut body = String::new();
    for word in state
        .index
        .unigrams_containing_bigram(bigram)
        .into_iter()
        .take(state.config.postings_cap)
    {
        body.push_str(word);
        body.push('\n');
    }
    (StatusCode::OK, body)
}

async fn manifest(State(state): State<AppState>) -> Reply {
    (StatusCode::OK, state.index.manifest().to_tsv())
}

/// The service routes, for embedding in another server.
pub fn router(index: Arc<NgramIndex>, config: ServiceConfig) -> Router {
    Router::new()
        .route("/v1/unigram", get(unigram))
        .route("/v1/ngram", get(ngram))
        .route("/v1/postings", get(postings))
        .route("/v1/manifest", get(manifest))
        .with_state(AppState {
            index,
            config: Arc::new(config),
        })
}

/// A service running on its own thread.
#[derive(Debug)]
pub struct RunningService {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<Result<(), ServiceError>>>,
}

impl RunningService {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Stops accepting requests and waits for in-flight ones to finish.
    pub fn shutdown(mut self) -> Result<(), ServiceError> {
        self.stop()
    }

    /// Blocks until the service exits (on Ctrl-C when started with
    /// `until_ctrl_c`).
    pub fn wait(mut self) -> Result<(), ServiceError> {
        match self.thread.take() {
            Some(t) => t.join().expect("service thread panicked"),
            None => Ok(()),
        }
    }

    fn stop(&mut self) -> Result<(), ServiceError> {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        match self.thread.take() {
            Some(t) => t.join().expect("service thread panicked"),
            None => Ok(()),
        }
    }
}

impl Drop for RunningService {
    fn drop(&mut self) {
        if let Err(e) = self.stop() {
            log::warn!("service shutdown: {e}");
        }
    }
}

/// Binds `addr` and serves `index` on a background thread. Port 0 picks a
/// free port; see [`RunningService::local_addr`]. With `until_ctrl_c` the
/// service also stops on an interrupt signal.
pub fn spawn(
    index: Arc<NgramIndex>,
    addr: SocketAddr,
    config: ServiceConfig,
    until_ctrl_c: bool,
) -> Result<RunningService, ServiceError> {
    let listener =
        std::net::TcpListener::bind(addr).map_err(|source| ServiceError::Bind { addr, source })?;
    let local = listener.local_addr().map_err(ServiceError::Runtime)?;
    listener
        .set_nonblocking(true)
        .map_err(ServiceError::Runtime)?;

    let app = router(index, config);
    let (tx, rx) = oneshot::channel::<()>();
    let thread = std::thread::Builder::new()
        .name(format!("ngram-service-{}", local.port()))
        .spawn(move || {
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .worker_threads(4)
                .enable_all()
                .build()
                .map_err(ServiceError::Runtime)?;
            runtime.block_on(async move {
                let listener =
                    tokio::net::TcpListener::from_std(listener).map_err(ServiceError::Runtime)?;
                let stop = async move {
                    if until_ctrl_c {
                        tokio::select! {
                            _ = rx => {}
                            _ = tokio::signal::ctrl_c() => log::info!("interrupted, shutting down"),
                        }
                    } else {
                        let _ = rx.await;
                    }
                };
                axum::serve(listener, app)
                    .with_graceful_shutdown(stop)
                    .await
                    .map_err(ServiceError::Runtime)
            })
        })
        .map_err(ServiceError::Runtime)?;

    log::info!("serving n-gram index on http://{local}");
    Ok(RunningService {
        addr: local,
        shutdown: Some(tx),
        thread: Some(thread),
    })
}
