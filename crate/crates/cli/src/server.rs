//! JSON over HTTP: `POST /expand`, `GET /lexicon`, `GET /lexicon/{lemma}`,
//! `GET /health`.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::Context;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};

use expando::lexicon::{Category, LexEntry};
use expando::realiser::{expand, ExpandOptions};

use crate::commands::Serve;
use crate::Resources;

pub const PORT_VAR: &str = "EXPANDO_PORT";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandRequest {
    pub words: Vec<String>,
    pub top_k: Option<usize>,
    pub contractions: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct CandidateOut {
    pub text: String,
    pub score: f64,
    pub trace: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ExpandResponse {
    pub candidates: Vec<CandidateOut>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct EntrySummary {
    pub lemma: String,
    pub category: String,
    pub features: BTreeMap<String, String>,
    pub sources: Vec<String>,
}

impl From<&LexEntry> for EntrySummary {
    fn from(e: &LexEntry) -> Self {
        Self {
            lemma: e.lemma.clone(),
            category: e.category().as_str().to_string(),
            features: e.features().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            sources: e.sources.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct ListQuery {
    pub category: Option<String>,
}

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(serde_json::json!({ "error": self.1 }))).into_response()
    }
}

type Shared = Arc<Resources>;

async fn post_expand(
    State(res): State<Shared>,
    body: Result<Json<ExpandRequest>, JsonRejection>,
) -> Result<Json<ExpandResponse>, ApiError> {
    let Json(req) = body.map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.body_text()))?;
    if req.words.iter().all(|w| w.trim().is_empty()) {
        return Err(ApiError(StatusCode::BAD_REQUEST, "words must not be empty".into()));
    }
    let defaults = ExpandOptions::default();
    let top_k = req.top_k.unwrap_or(defaults.top_k);
    if top_k == 0 {
        return Err(ApiError(StatusCode::BAD_REQUEST, "top_k must be at least 1".into()));
    }
    let options = ExpandOptions { top_k, contractions: req.contractions.unwrap_or(defaults.contractions) };
    let e = expand(&req.words, &res.lexicon, &res.model, &res.rules, &options);
    Ok(Json(ExpandResponse {
        candidates: e
            .candidates
            .into_iter()
            .map(|c| CandidateOut { text: c.text, score: c.score, trace: c.trace })
            .collect(),
        diagnostics: e.diagnostics,
    }))
}

async fn get_entry(State(res): State<Shared>, Path(lemma): Path<String>) -> Result<Json<Vec<EntrySummary>>, ApiError> {
    let wanted = lemma.to_lowercase();
    let mut found: Vec<EntrySummary> =
        res.lexicon.entries().iter().filter(|e| e.lemma == wanted).map(EntrySummary::from).collect();
    if found.is_empty() {
        found = res.lexicon.lookup(&wanted).into_iter().map(|m| EntrySummary::from(m.entry)).collect();
    }
    if found.is_empty() {
        return Err(ApiError(StatusCode::NOT_FOUND, format!("'{lemma}' is not in the lexicon")));
    }
    Ok(Json(found))
}

async fn list_entries(
    State(res): State<Shared>,
    Query(q): Query<ListQuery>,
) -> Result<Json<Vec<EntrySummary>>, ApiError> {
    let category: Option<Category> = q
        .category
        .map(|c| c.parse().map_err(|e: String| ApiError(StatusCode::BAD_REQUEST, e)))
        .transpose()?;
    Ok(Json(
        res.lexicon
            .entries()
            .iter()
            .filter(|e| category.is_none_or(|c| e.category() == c))
            .map(EntrySummary::from)
            .collect(),
    ))
}

async fn health(State(res): State<Shared>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "entries": res.lexicon.len() }))
}

pub fn router(resources: Resources, cors_origin: Option<&str>) -> anyhow::Result<Router> {
    let cors = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    let cors = match cors_origin {
        Some(o) => cors.allow_origin(HeaderValue::from_str(o).context("invalid CORS origin")?),
        None => cors.allow_origin(Any),
    };
    Ok(Router::new()
        .route("/expand", post(post_expand))
        .route("/lexicon", get(list_entries))
        .route("/lexicon/{lemma}", get(get_entry))
        .route("/health", get(health))
        .layer(cors)
        .with_state(Arc::new(resources)))
}

/// The port to bind: `EXPANDO_PORT` when set, otherwise the flag value.
pub fn port(flag: u16, env: Option<&str>) -> anyhow::Result<u16> {
    match env {
        Some(v) => v.trim().parse().with_context(|| format!("{PORT_VAR}={v} is not a port number")),
        None => Ok(flag),
    }
}

pub fn serve(a: Serve) -> anyhow::Result<()> {
    let resources = Resources::load(a.resources.lexicon.as_deref(), a.resources.model.as_deref())?;
    let port = port(a.port, std::env::var(PORT_VAR).ok().as_deref())?;
    let app = router(resources, a.cors_origin.as_deref())?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((a.host.as_str(), port))
            .await
            .with_context(|| format!("cannot listen on {}:{port}", a.host))?;
        log::warn!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}
