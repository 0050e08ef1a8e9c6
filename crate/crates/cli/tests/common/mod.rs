#![allow(dead_code)]

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use optionforge_cli::service::{router, ServiceConfig};

pub fn app(webui_dir: &std::path::Path) -> Router {
    router(&ServiceConfig {
        workers: 2,
        webui_dir: webui_dir.to_path_buf(),
    })
}

pub fn test_app() -> Router {
    app(std::path::Path::new("/nonexistent-webui"))
}

pub async fn send(app: Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, body)
}

pub async fn post_json(app: Router, path: &str, body: &Value) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(Method::POST)
        .uri(path)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(serde_json::to_vec(body).unwrap()))
        .unwrap();
    let (status, bytes) = send(app, req).await;
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

/// Calculator form inputs: S=100, E=120, r=2%, 89 days.
pub fn calculator_request(option_type: &str, vol_pct: f64) -> Value {
    serde_json::json!({
        "option_type": option_type,
        "spot": 100.0,
        "strike": 120.0,
        "rate_pct": 2.0,
        "vol_pct": vol_pct,
        "purchase_date": "2014-02-06",
        "expiry_date": "2014-05-06",
    })
}
