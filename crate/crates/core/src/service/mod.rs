//! HTTP design service: catalog delivery, scenario assignment, scene storage,
//! the practice gate, scoring, plan rendering and submissions.
//!
//! | method | path                              |
//! |--------|-----------------------------------|
//! | GET    | `/api/catalog`                    |
//! | GET    | `/api/practice`                   |
//! | POST   | `/api/assignments`                |
//! | POST   | `/api/scenes`                     |
//! | GET    | `/api/scenes/{id}`                |
//! | POST   | `/api/scenes/validate-practice`   |
//! | GET    | `/api/scenes/{id}/score`          |
//! | GET    | `/api/scenes/{id}/plan.svg`       |
//! | POST   | `/api/submissions`                |
//! | GET    | `/api/submissions/{id}`           |
//!
//! Errors are JSON objects `{code, message, details}`.

mod assign;
mod store;

use std::collections::HashMap;
use std::future::Future;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::Engine as _;
use chrono::Utc;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, ScenarioId};
use crate::metrics::{score_scene, MetricError, ScoreConfig, SunSample};
use crate::render::{render_plan, RenderOptions};
use crate::scene::{
    decode_scene, encode_scene, match_replication, validate_scene, MatchReport, MatchTolerances,
    Scene,
};

pub use assign::{fnv1a, group_for, participant_seed, scenario_order};
pub use store::{
    Appended, Assignment, Index, RecordBody, RecordKind, Store, StoreError, StoreRecord,
    StoredScene, Submission,
};

/// The scene participants replicate before designing.
pub const PRACTICE_DOCUMENT: &str = include_str!("../../data/practice.scene.json");

pub fn practice_scene() -> Scene {
    decode_scene(PRACTICE_DOCUMENT).expect("shipped practice scene is valid")
}

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub bind: IpAddr,
    pub port: u16,
    /// Mixed into every participant's shuffle seed.
    pub seed: u64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            data_dir: PathBuf::from("lotforge-data"),
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            seed: 0,
        }
    }
}

impl ServiceConfig {
    /// Defaults overridden by `LOTFORGE_DATA_DIR`, `LOTFORGE_PORT` and
    /// `LOTFORGE_SEED`.
    pub fn from_env() -> Result<Self, String> {
        let mut c = Self::default();
        if let Ok(v) = std::env::var("LOTFORGE_DATA_DIR") {
            c.data_dir = PathBuf::from(v);
        }
        if let Ok(v) = std::env::var("LOTFORGE_PORT") {
            c.port = v
                .parse()
                .map_err(|_| format!("LOTFORGE_PORT `{v}` is not a port"))?;
        }
        if let Ok(v) = std::env::var("LOTFORGE_SEED") {
            c.seed = v
                .parse()
                .map_err(|_| format!("LOTFORGE_SEED `{v}` is not an integer"))?;
        }
        Ok(c)
    }

    pub fn addr(&self) -> SocketAddr {
        SocketAddr::new(self.bind, self.port)
    }
}

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub catalog: Arc<Catalog>,
    pub score_config: Arc<ScoreConfig>,
    pub practice: Arc<Scene>,
    pub seed: u64,
}

impl AppState {
    pub fn new(store: Store, catalog: Catalog, seed: u64) -> Self {
        Self {
            store: Arc::new(store),
            catalog: Arc::new(catalog),
            score_config: Arc::new(ScoreConfig::default()),
            practice: Arc::new(practice_scene()),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub details: Vec<serde_json::Value>,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
            details: Vec::new(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad-request", message)
    }

    fn not_found(what: &str, id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "not-found",
            format!("{what} `{id}` not found"),
        )
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        ApiError::internal(e.to_string())
    }
}

impl From<MetricError> for ApiError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::InvalidScene(issues) => ApiError {
                details: issues
                    .iter()
                    .map(|i| serde_json::to_value(i).unwrap_or_default())
                    .collect(),
                ..ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "validation-failed",
                    "scene has validation errors",
                )
            },
            MetricError::Sun(m) => ApiError::new(StatusCode::BAD_REQUEST, "bad-option", m),
            other => ApiError::internal(other.to_string()),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> ApiResult<T> + Send + 'static,
) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
}

fn json_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> ApiResult<T> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

fn parse_scene(body: &[u8]) -> ApiResult<Scene> {
    let text = std::str::from_utf8(body).map_err(|_| ApiError::bad_request("body is not UTF-8"))?;
    decode_scene(text).map_err(|e| ApiError::bad_request(e.to_string()))
}

fn stored_scene(state: &AppState, id: &str) -> ApiResult<Scene> {
    state
        .store
        .snapshot()
        .scenes
        .get(id)
        .map(|s| s.scene.clone())
        .ok_or_else(|| ApiError::not_found("scene", id))
}

fn scene_json(scene: &Scene) -> Response {
    (
        [(header::CONTENT_TYPE, "application/json")],
        encode_scene(scene),
    )
        .into_response()
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/", get(index_page))
        .route("/api/catalog", get(get_catalog))
        .route("/api/practice", get(get_practice))
        .route("/api/assignments", post(post_assignment))
        .route("/api/scenes", post(post_scene))
        .route(
            "/api/scenes/validate-practice",
            post(post_validate_practice),
        )
        .route("/api/scenes/{id}", get(get_scene))
        .route("/api/scenes/{id}/score", get(get_score))
        .route("/api/scenes/{id}/plan.svg", get(get_plan))
        .route("/api/submissions", post(post_submission))
        .route("/api/submissions/{id}", get(get_submission))
        .with_state(state)
}

/// Serves until `shutdown` resolves, then drains in-flight requests. Every
/// acknowledged write is already on disk, so nothing else needs flushing.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: AppState,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
}

async fn index_page() -> Html<&'static str> {
    Html(INDEX_HTML)
}

const INDEX_HTML: &str = r#"<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>lotforge</title></head>
<body>
<h1>lotforge design service</h1>
<p>The browser editor is not bundled with this build. The JSON API is live:</p>
<ul>
<li><a href="/api/catalog">GET /api/catalog</a></li>
<li><a href="/api/practice">GET /api/practice</a></li>
<li>POST /api/assignments</li>
<li>POST /api/scenes, GET /api/scenes/{id}</li>
<li>POST /api/scenes/validate-practice</li>
<li>GET /api/scenes/{id}/score, GET /api/scenes/{id}/plan.svg</li>
<li>POST /api/submissions, GET /api/submissions/{id}</li>
</ul>
</body>
</html>
"#;

async fn get_catalog(State(state): State<AppState>) -> Response {
    (
        [(header::CONTENT_TYPE, "application/json")],
        state.catalog.encode(),
    )
        .into_response()
}

async fn get_practice(State(state): State<AppState>) -> Response {
    scene_json(&state.practice)
}

#[derive(Debug, Deserialize)]
struct AssignmentRequest {
    participant_id: String,
    #[serde(default)]
    seed: Option<u64>,
}

async fn post_assignment(
    State(state): State<AppState>,
    body: Bytes,
) -> ApiResult<Json<Assignment>> {
    let req: AssignmentRequest = json_body(&body)?;
    let participant = req.participant_id.trim().to_string();
    if participant.is_empty() {
        return Err(ApiError::bad_request("participant_id must not be empty"));
    }
    let seed = req
        .seed
        .unwrap_or_else(|| participant_seed(state.seed, &participant));
    blocking(move || {
        let (_, a) = state
            .store
            .append_with(RecordKind::Assignment, |index, _| {
                if let Some(existing) = index.assignments.get(&participant) {
                    return Ok(Appended::Existing(participant.clone(), existing.clone()));
                }
                let group = group_for(index.assignments.len());
                let a = Assignment {
                    participant_id: participant.clone(),
                    group,
                    scenario_order: scenario_order(group, seed),
                    seed,
                    issued_at: Utc::now(),
                };
                let body =
                    serde_json::to_value(&a).map_err(|e| StoreError::Corrupt(e.to_string()))?;
                Ok(Appended::New(RecordBody(body), a))
            })?;
        Ok(Json(a))
    })
    .await
}

#[derive(Debug, Serialize)]
struct Saved {
    scene_id: String,
}

async fn post_scene(
    State(state): State<AppState>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<Saved>)> {
    let scene = parse_scene(&body)?;
    let issues = validate_scene(&scene, &state.catalog);
    if issues.iter().any(|i| i.is_error()) {
        return Err(MetricError::InvalidScene(issues).into());
    }
    blocking(move || {
        let scene_id = state.store.save_scene(&scene)?;
        Ok((StatusCode::CREATED, Json(Saved { scene_id })))
    })
    .await
}

async fn get_scene(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(scene_json(&stored_scene(&state, &id)?))
}

async fn post_validate_practice(
    State(state): State<AppState>,
    body: Bytes,
) -> ApiResult<Json<MatchReport>> {
    let candidate = parse_scene(&body)?;
    Ok(Json(match_replication(
        &candidate,
        &state.practice,
        &MatchTolerances::default(),
        &state.catalog,
    )))
}

async fn get_score(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
) -> ApiResult<Response> {
    let scene = stored_scene(&state, &id)?;
    // stored scenes never change, so the id and config version identify the result
    let etag = format!("\"{id}.{}\"", state.score_config.version);
    let cache = [
        (header::ETAG, etag.clone()),
        (header::CACHE_CONTROL, "private, max-age=3600".to_string()),
    ];
    if headers
        .get(header::IF_NONE_MATCH)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.split(',').any(|t| t.trim() == etag || t.trim() == "*"))
    {
        return Ok((StatusCode::NOT_MODIFIED, cache).into_response());
    }
    let report =
        blocking(move || Ok(score_scene(&scene, &state.catalog, &state.score_config)?)).await?;
    Ok((cache, Json(report)).into_response())
}

fn flag(query: &HashMap<String, String>, key: &str) -> ApiResult<bool> {
    match query.get(key).map(|v| v.to_ascii_lowercase()) {
        None => Ok(false),
        Some(v) => match v.as_str() {
            "" | "1" | "true" | "yes" | "on" => Ok(true),
            "0" | "false" | "no" | "off" => Ok(false),
            _ => Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "bad-option",
                format!("`{key}` must be a boolean, got `{v}`"),
            )),
        },
    }
}

async fn get_plan(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let scene = stored_scene(&state, &id)?;
    let sun = query
        .get("sun")
        .map(|s| SunSample::parse_pair(s))
        .transpose()?;
    let options = RenderOptions {
        show_shadows: flag(&query, "shadows")? || sun.is_some(),
        sun,
        legend: flag(&query, "legend")?,
    };
    let svg = render_plan(&scene, &state.catalog, &options)?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}

#[derive(Debug, Deserialize)]
struct SubmissionRequest {
    participant_id: String,
    scenario_id: ScenarioId,
    scene_id: String,
    #[serde(default)]
    screenshot: Option<String>,
}

#[derive(Debug, Serialize)]
struct Submitted {
    submission_id: String,
}

async fn post_submission(
    State(state): State<AppState>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<Submitted>)> {
    let req: SubmissionRequest = json_body(&body)?;
    if let Some(shot) = &req.screenshot {
        base64::engine::general_purpose::STANDARD
            .decode(shot)
            .map_err(|e| ApiError::bad_request(format!("screenshot is not base64: {e}")))?;
    }
    let scene = stored_scene(&state, &req.scene_id)?;
    let snapshot = state.store.snapshot();
    let assigned = snapshot
        .assignments
        .get(&req.participant_id)
        .is_some_and(|a| a.scenario_order.contains(&req.scenario_id));
    if !assigned {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "conflict",
            format!(
                "scenario `{}` is not assigned to participant `{}`",
                req.scenario_id, req.participant_id
            ),
        ));
    }
    let plan_svg = render_plan(
        &scene,
        &state.catalog,
        &RenderOptions {
            legend: true,
            ..Default::default()
        },
    )?;
    blocking(move || {
        let (submission_id, _) = state.store.append_with(RecordKind::Submission, |_, id| {
            let s = Submission {
                submission_id: id.to_string(),
                participant_id: req.participant_id,
                scenario_id: req.scenario_id,
                scene_id: req.scene_id,
                screenshot: req.screenshot,
                plan_svg,
                created_at: Utc::now(),
            };
            let body = serde_json::to_value(&s).map_err(|e| StoreError::Corrupt(e.to_string()))?;
            Ok(Appended::New(RecordBody(body), ()))
        })?;
        Ok((StatusCode::CREATED, Json(Submitted { submission_id })))
    })
    .await
}

async fn get_submission(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<Submission>> {
    state
        .store
        .snapshot()
        .submissions
        .get(&id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::not_found("submission", &id))
}
