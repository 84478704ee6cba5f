//! Local HTTP+JSON API over one store file.
//!
//! Reads run in parallel under a read lock. A mutation takes the write lock,
//! applies itself to a copy of the lexicon, saves the copy and only then
//! swaps it in, so a failed save leaves both memory and disk unchanged and
//! every acknowledged mutation is already on disk.

use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use lughat_core::{ChangeSet, DictionaryKind, KeyboardLayout, Lexicon, LexiconError};
use serde::Deserialize;
use tokio::sync::RwLock;
use tower_http::services::ServeDir;

use crate::api::{self, ApiEntry, ChangeSetJson, EntryInput, ErrorBody, Health, KeyboardJson, TokenizeRequest};
use crate::storefile::{self, LoadOptions, StoreError};

pub struct AppState {
    lexicon: RwLock<Lexicon>,
    store_path: PathBuf,
    keyboard: KeyboardJson,
}

impl AppState {
    /// Loads `store_path`, creating an empty store file when none exists.
    /// Returns what `--repair` changed, if anything.
    pub fn open(store_path: &Path, repair: bool) -> Result<(Self, Option<ChangeSet>), StoreError> {
        let (lexicon, repaired) = if store_path.exists() {
            let loaded = storefile::load_with(store_path, &LoadOptions { repair, ..LoadOptions::default() })?;
            if loaded.repaired.is_some() {
                storefile::save(&loaded.lexicon, store_path)?;
            }
            (loaded.lexicon, loaded.repaired)
        } else {
            let lexicon = Lexicon::new();
            storefile::save(&lexicon, store_path)?;
            (lexicon, None)
        };
        Ok((Self::with_lexicon(lexicon, store_path), repaired))
    }

    pub fn with_lexicon(lexicon: Lexicon, store_path: &Path) -> Self {
        Self {
            lexicon: RwLock::new(lexicon),
            store_path: store_path.to_owned(),
            keyboard: KeyboardJson::from(&KeyboardLayout::shipped()),
        }
    }
}

pub type Shared = Arc<AppState>;

pub fn router(state: Shared, assets: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/entries", get(list_entries))
        .route("/api/entries/{kind}/{key}", get(get_entry).put(put_entry).delete(delete_entry))
        .route("/api/tokenize", post(tokenize))
        .route("/api/keyboard", get(keyboard))
        .route("/api/{*rest}", axum::routing::any(unknown_api))
        .with_state(state);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(unknown_api),
    }
}

/// Serves until Ctrl-C. `port` 0 picks a free port.
pub async fn serve(store_path: &Path, port: u16, assets: Option<&Path>, repair: bool) -> Result<(), ServeError> {
    let (state, repaired) = AppState::open(store_path, repair)?;
    if let Some(changes) = repaired {
        eprintln!("repaired store: {} changes", changes.len());
    }
    let listener = tokio::net::TcpListener::bind(SocketAddr::from((Ipv4Addr::LOCALHOST, port))).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state), assets))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

struct ApiError(StatusCode, ErrorBody);

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError(StatusCode::BAD_REQUEST, ErrorBody::new("bad_request", message))
    }
}

impl From<LexiconError> for ApiError {
    fn from(err: LexiconError) -> Self {
        let status = match err {
            LexiconError::EmptyKey | LexiconError::RepertoireViolation(_) => StatusCode::BAD_REQUEST,
            LexiconError::NotFound => StatusCode::NOT_FOUND,
            LexiconError::Linked { .. } => StatusCode::CONFLICT,
        };
        ApiError(status, ErrorBody::from(&err))
    }
}

impl From<StoreError> for ApiError {
    fn from(err: StoreError) -> Self {
        ApiError(StatusCode::INTERNAL_SERVER_ERROR, ErrorBody::new("io", err.to_string()))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json(self.0, &self.1)
    }
}

fn json<T: serde::Serialize>(status: StatusCode, value: &T) -> Response {
    (status, [(header::CONTENT_TYPE, HeaderValue::from_static("application/json; charset=utf-8"))], api::encode(value))
        .into_response()
}

fn with_etag(mut response: Response, revision: u64) -> Response {
    let tag = HeaderValue::from_str(&format!("\"{revision}\"")).expect("digits are valid header text");
    response.headers_mut().insert(header::ETAG, tag);
    response
}

fn parse_kind(raw: &str) -> Result<DictionaryKind, ApiError> {
    raw.parse().map_err(|_| ApiError::bad_request(format!("unknown dictionary kind {raw:?}; use e2s or s2e")))
}

enum Precondition {
    None,
    Exists,
    Revision(u64),
}

fn precondition(headers: &HeaderMap) -> Result<Precondition, ApiError> {
    let Some(value) = headers.get(header::IF_MATCH) else {
        return Ok(Precondition::None);
    };
    let text = value.to_str().map_err(|_| ApiError::bad_request("If-Match is not text"))?.trim();
    if text == "*" {
        return Ok(Precondition::Exists);
    }
    let bare = text.trim_start_matches("W/").trim_matches('"');
    bare.parse()
        .map(Precondition::Revision)
        .map_err(|_| ApiError::bad_request("If-Match must be a revision number"))
}

/// Checks an If-Match precondition against the current revision (0 when the
/// entry does not exist).
fn check_precondition(pre: &Precondition, current: Option<u64>) -> Result<(), ApiError> {
    let ok = match pre {
        Precondition::None => true,
        Precondition::Exists => current.is_some(),
        Precondition::Revision(expected) => *expected == current.unwrap_or(0),
    };
    if ok {
        Ok(())
    } else {
        let found = current.map_or_else(|| "no entry".to_owned(), |r| format!("revision {r}"));
        Err(ApiError(StatusCode::CONFLICT, ErrorBody::new("conflict", format!("entry changed: found {found}"))))
    }
}

async fn health(State(state): State<Shared>) -> Response {
    let lex = state.lexicon.read().await;
    json(
        StatusCode::OK,
        &Health {
            status: "ok",
            entries_e2s: lex.len(DictionaryKind::EnglishToSindhi),
            entries_s2e: lex.len(DictionaryKind::SindhiToEnglish),
        },
    )
}

#[derive(Deserialize)]
struct ListQuery {
    kind: Option<String>,
    #[serde(default)]
    prefix: String,
    #[serde(default)]
    offset: usize,
    limit: Option<usize>,
}

async fn list_entries(State(state): State<Shared>, query: Result<Query<ListQuery>, axum::extract::rejection::QueryRejection>) -> Result<Response, ApiError> {
    let Query(query) = query.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let kind = parse_kind(query.kind.as_deref().unwrap_or("e2s"))?;
    let lex = state.lexicon.read().await;
    Ok(json(StatusCode::OK, &api::word_list(&lex, kind, &query.prefix, query.offset, query.limit)))
}

async fn get_entry(State(state): State<Shared>, UrlPath((kind, key)): UrlPath<(String, String)>) -> Result<Response, ApiError> {
    let kind = parse_kind(&kind)?;
    let lex = state.lexicon.read().await;
    let record = lex.get(kind, &key).ok_or(LexiconError::NotFound)?;
    let entry = ApiEntry::from_record(kind, record).expect("stored headwords have keys");
    Ok(with_etag(json(StatusCode::OK, &entry), record.revision))
}

/// Runs `mutate` on a copy of the lexicon, saves the copy, then publishes it.
async fn mutate(
    state: &AppState,
    mutate: impl FnOnce(&mut Lexicon) -> Result<ChangeSet, ApiError>,
) -> Result<ChangeSet, ApiError> {
    let mut guard = state.lexicon.write().await;
    let mut next = guard.clone();
    let changes = mutate(&mut next)?;
    storefile::save(&next, &state.store_path)?;
    next.mark_clean();
    *guard = next;
    Ok(changes)
}

async fn put_entry(
    State(state): State<Shared>,
    UrlPath((kind, key)): UrlPath<(String, String)>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response, ApiError> {
    let kind = parse_kind(&kind)?;
    let pre = precondition(&headers)?;
    let input: EntryInput = serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(format!("invalid entry: {e}")))?;
    if input.kind.as_deref().is_some_and(|k| k != kind.code()) {
        return Err(ApiError::bad_request("body kind differs from the URL"));
    }
    let side = kind.headword_side();
    let url_key = lughat_core::text::key_form(&key, side);
    if !input.headword.trim().is_empty() && lughat_core::text::key_form(&input.headword, side) != url_key {
        return Err(ApiError(
            StatusCode::BAD_REQUEST,
            ErrorBody::new("key_mismatch", "headword does not normalize to the key in the URL"),
        ));
    }
    let mut record = input.into_record();
    if record.headword.trim().is_empty() {
        record.headword = key;
    }
    let changes = mutate(&state, |lex| {
        check_precondition(&pre, lex.get(kind, &record.headword).map(|r| r.revision))?;
        Ok(lex.put(kind, record)?)
    })
    .await?;
    let revision = changes.touching(kind).find(|c| c.key.as_str() == url_key).map(|c| c.record.revision);
    let response = json(StatusCode::OK, &ChangeSetJson::from(&changes));
    Ok(match revision {
        Some(r) => with_etag(response, r),
        None => response,
    })
}

async fn delete_entry(
    State(state): State<Shared>,
    UrlPath((kind, key)): UrlPath<(String, String)>,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let kind = parse_kind(&kind)?;
    let pre = precondition(&headers)?;
    let changes = mutate(&state, |lex| {
        let current = lex.get(kind, &key).map(|r| r.revision).ok_or(LexiconError::NotFound)?;
        check_precondition(&pre, Some(current))?;
        Ok(lex.delete(kind, &key)?)
    })
    .await?;
    Ok(json(StatusCode::OK, &ChangeSetJson::from(&changes)))
}

async fn tokenize(State(state): State<Shared>, body: Bytes) -> Result<Response, ApiError> {
    let request: TokenizeRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(format!("expected {{\"text\": ...}}: {e}")))?;
    let lex = state.lexicon.read().await;
    Ok(json(StatusCode::OK, &api::tokens(lex.repertoire(), &request.text)))
}

async fn keyboard(State(state): State<Shared>) -> Response {
    json(StatusCode::OK, &state.keyboard)
}

async fn unknown_api() -> ApiError {
    ApiError(StatusCode::NOT_FOUND, ErrorBody::new("not_found", "no such endpoint"))
}
