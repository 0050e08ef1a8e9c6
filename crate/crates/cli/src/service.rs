//! HTTP front end: `POST /api/price`, `GET /api/health` and static assets.

use std::hash::{DefaultHasher, Hash, Hasher};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::State;
use axum::handler::HandlerWithoutStateExt;
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;
use tokio::sync::Semaphore;
use tower_http::services::ServeDir;

use crate::request::{parse_request, price_request, RequestError};

pub const DEFAULT_PORT: u16 = 8080;
pub const PORT_ENV: &str = "OPTIONFORGE_PORT";
pub const WEBUI_DIR_ENV: &str = "OPTIONFORGE_WEBUI_DIR";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Concurrent pricing jobs; health checks never wait on these.
    pub workers: usize,
    /// Directory of built web UI assets served under `/`.
    pub webui_dir: PathBuf,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            webui_dir: std::env::var_os(WEBUI_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("webui/dist")),
        }
    }
}

#[derive(Clone)]
struct AppState {
    workers: Arc<Semaphore>,
}

pub fn router(config: &ServiceConfig) -> Router {
    let state = AppState {
        workers: Arc::new(Semaphore::new(config.workers.max(1))),
    };
    let assets = ServeDir::new(&config.webui_dir).not_found_service(placeholder_page.into_service());
    Router::new()
        .route("/api/price", post(price))
        .route("/api/health", get(health))
        .fallback_service(assets)
        .with_state(state)
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

async fn placeholder_page() -> impl IntoResponse {
    (
        StatusCode::NOT_FOUND,
        Html(
            "<!doctype html><title>optionforge</title>\
             <p>The calculator UI is not installed. The pricing API is at \
             <code>POST /api/price</code>.</p>",
        ),
    )
}

fn is_json(headers: &HeaderMap) -> bool {
    headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.split(';').next())
        .is_some_and(|v| v.trim().eq_ignore_ascii_case("application/json"))
}

async fn price(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> Response {
    let started = Instant::now();
    if !is_json(&headers) {
        return (
            StatusCode::UNSUPPORTED_MEDIA_TYPE,
            Json(json!({ "error": "content-type must be application/json" })),
        )
            .into_response();
    }
    let mut hasher = DefaultHasher::new();
    body.hash(&mut hasher);
    let inputs_hash = hasher.finish();

    let outcome = match parse_request(&body) {
        Err(e) => Err(e),
        Ok(req) => {
            let Ok(_permit) = state.workers.acquire().await else {
                return StatusCode::SERVICE_UNAVAILABLE.into_response();
            };
            tokio::task::spawn_blocking(move || price_request(&req))
                .await
                .unwrap_or_else(|e| Err(RequestError::Numeric(format!("pricing task failed: {e}"))))
        }
    };
    let latency_ms = started.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(resp) => {
            eprintln!(
                "price method={} inputs={inputs_hash:016x} price={} latency_ms={latency_ms:.3}",
                resp.method, resp.price
            );
            (StatusCode::OK, Json(resp)).into_response()
        }
        Err(RequestError::Invalid(errors)) => {
            eprintln!("price inputs={inputs_hash:016x} status=400 latency_ms={latency_ms:.3}");
            (StatusCode::BAD_REQUEST, Json(json!({ "errors": errors }))).into_response()
        }
        Err(RequestError::Numeric(message)) => {
            eprintln!("price inputs={inputs_hash:016x} status=422 latency_ms={latency_ms:.3}");
            (StatusCode::UNPROCESSABLE_ENTITY, Json(json!({ "error": message }))).into_response()
        }
    }
}

/// Binds `host:port` and serves until Ctrl-C.
pub async fn serve(host: &str, port: u16, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!(
        "optionforge listening on http://{} ({} pricing workers)",
        listener.local_addr()?,
        config.workers
    );
    axum::serve(listener, router(&config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
