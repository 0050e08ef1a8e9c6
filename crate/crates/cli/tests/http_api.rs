mod common;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use serde_json::{json, Value};

use common::{app, calculator_request, post_json, send, test_app};

fn empty(method: Method, uri: &str) -> Request<Body> {
    Request::builder().method(method).uri(uri).body(Body::empty()).unwrap()
}

#[tokio::test]
async fn health_get_head_post() {
    let (status, body) = send(test_app(), empty(Method::GET, "/api/health")).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["status"], "ok");
    assert!(v["version"].is_string());

    let (status, body) = send(test_app(), empty(Method::HEAD, "/api/health")).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body.is_empty());

    let (status, _) = send(test_app(), empty(Method::POST, "/api/health")).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
}

#[tokio::test]
async fn price_endpoint_rejects_other_methods() {
    let (status, _) = send(test_app(), empty(Method::GET, "/api/price")).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
    let (status, _) = send(test_app(), empty(Method::PUT, "/api/price")).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
}

#[tokio::test]
async fn calculator_call() {
    let (status, v) = post_json(test_app(), "/api/price", &calculator_request("call", 50.0)).await;
    assert_eq!(status, StatusCode::OK);
    assert!((v["price"].as_f64().unwrap() - 3.7182).abs() < 1e-3);
    assert_eq!(v["price_display"], "3.72");
    assert_eq!(v["method"], "analytic");
    assert_eq!(v["inputs"]["time_days"], 89);
    assert!((v["inputs"]["maturity_years"].as_f64().unwrap() - 89.0 / 365.0).abs() < 1e-15);
    assert_eq!(v["inputs"]["sigma"], 0.5);
    assert!(v["diagnostics"]["d1"].is_f64());
}

#[tokio::test]
async fn calculator_put_at_half_percent_vol() {
    let (status, v) = post_json(test_app(), "/api/price", &calculator_request("put", 0.5)).await;
    assert_eq!(status, StatusCode::OK);
    let expected = 120.0 * (-0.02f64 * 89.0 / 365.0).exp() - 100.0;
    assert!((v["price"].as_f64().unwrap() - expected).abs() < 5e-4);
    assert_eq!(v["price_display"], "19.42");
}

#[tokio::test]
async fn every_method_is_served() {
    let (_, v) = post_json(test_app(), "/api/price", &calculator_request("call", 50.0)).await;
    let exact = v["price"].as_f64().unwrap();
    for (method, tag, tol) in [
        ("heat", "heat_kernel", 1e-6),
        ("cn", "crank_nicolson", 1e-3),
        ("mc", "monte_carlo", 0.03),
    ] {
        let mut req = calculator_request("call", 50.0);
        req["method"] = json!(method);
        let (status, v) = post_json(test_app(), "/api/price", &req).await;
        assert_eq!(status, StatusCode::OK, "{method}: {v}");
        assert_eq!(v["method"], tag);
        let price = v["price"].as_f64().unwrap();
        assert!((price - exact).abs() / exact < tol, "{method}: {price} vs {exact}");
    }
}

#[tokio::test]
async fn method_specific_diagnostics() {
    let mut req = calculator_request("call", 50.0);
    req["method"] = json!("cn");
    req["grid"] = json!({ "n_space": 64, "n_time": 32, "smoothing": "rannacher" });
    let (status, v) = post_json(test_app(), "/api/price", &req).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["diagnostics"]["grid"]["n_space"], 64);
    assert_eq!(v["diagnostics"]["grid"]["n_time"], 32);

    req["method"] = json!("mc");
    req.as_object_mut().unwrap().remove("grid");
    let (_, v) = post_json(test_app(), "/api/price", &req).await;
    assert!(v["diagnostics"]["std_error"].as_f64().unwrap() > 0.0);
    assert_eq!(v["diagnostics"]["n_paths"], 1_000_000);
}

#[tokio::test]
async fn negative_vol_names_the_field() {
    let (status, v) = post_json(test_app(), "/api/price", &calculator_request("call", -5.0)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let errors = v["errors"].as_array().unwrap();
    assert!(errors.iter().any(|e| e["field"] == "vol_pct"), "{v}");
}

#[tokio::test]
async fn unknown_and_missing_fields_are_rejected() {
    let mut req = calculator_request("call", 50.0);
    req["dividend"] = json!(0.01);
    let (status, v) = post_json(test_app(), "/api/price", &req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["errors"][0]["field"], "dividend");

    let mut req = calculator_request("call", 50.0);
    req.as_object_mut().unwrap().remove("strike");
    let (status, v) = post_json(test_app(), "/api/price", &req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["errors"][0]["field"], "strike");
}

#[tokio::test]
async fn reversed_dates_are_a_field_error() {
    let mut req = calculator_request("call", 50.0);
    req["purchase_date"] = json!("2014-05-06");
    req["expiry_date"] = json!("2014-02-06");
    let (status, v) = post_json(test_app(), "/api/price", &req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["errors"][0]["field"], "expiry_date");
}

#[tokio::test]
async fn malformed_json_is_400() {
    let req = Request::builder()
        .method(Method::POST)
        .uri("/api/price")
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from("{not json"))
        .unwrap();
    let (status, _) = send(test_app(), req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn non_json_content_type_is_refused() {
    let body = serde_json::to_vec(&calculator_request("call", 50.0)).unwrap();
    let req = Request::builder()
        .method(Method::POST)
        .uri("/api/price")
        .header(header::CONTENT_TYPE, "text/plain")
        .body(Body::from(body))
        .unwrap();
    let (status, _) = send(test_app(), req).await;
    assert_eq!(status, StatusCode::UNSUPPORTED_MEDIA_TYPE);
}

#[tokio::test]
async fn far_boundary_below_spot_is_400() {
    let mut req = calculator_request("call", 50.0);
    req["method"] = json!("cn");
    req["grid"] = json!({ "s_max": 50.0 });
    let (status, v) = post_json(test_app(), "/api/price", &req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{v}");
}

#[tokio::test]
async fn singular_system_is_422() {
    // One implicit step with r = -(1/dt + sigma^2) zeroes the first pivot.
    let tau = 89.0 / 365.0;
    let mut req = calculator_request("call", 50.0);
    req["rate_pct"] = json!((-(1.0 / tau) - 0.25) * 100.0);
    req["method"] = json!("cn");
    req["grid"] = json!({ "n_space": 8, "n_time": 1, "theta": 1.0 });
    let (status, v) = post_json(test_app(), "/api/price", &req).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
    assert!(v["error"].as_str().unwrap().contains("singular"), "{v}");
}

#[tokio::test]
async fn static_assets_and_placeholder() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<h1>calculator</h1>").unwrap();
    let (status, body) = send(app(dir.path()), empty(Method::GET, "/")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"<h1>calculator</h1>");

    let (status, body) = send(test_app(), empty(Method::GET, "/")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(String::from_utf8(body).unwrap().contains("/api/price"));
}

#[tokio::test]
async fn health_answers_while_pricing_is_busy() {
    let app = test_app();
    let mut jobs = Vec::new();
    for _ in 0..4 {
        let mut req = calculator_request("call", 50.0);
        req["method"] = json!("mc");
        let app = app.clone();
        jobs.push(tokio::spawn(async move { post_json(app, "/api/price", &req).await }));
    }
    let started = std::time::Instant::now();
    let (status, _) = send(app.clone(), empty(Method::GET, "/api/health")).await;
    assert_eq!(status, StatusCode::OK);
    assert!(started.elapsed() < std::time::Duration::from_millis(500));
    for j in jobs {
        assert_eq!(j.await.unwrap().0, StatusCode::OK);
    }
}
