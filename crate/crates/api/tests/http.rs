use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use rld_api::{router, Store};
use rld_core::io::read_json;
use rld_core::pipeline::{predict_closed_form, PredictionContext};
use rld_core::{PosteriorState, TaskSeverityModel};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::sync::Arc;
use tower::ServiceExt;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/tutorial").join(name)
}

fn tutorial_registration() -> Value {
    serde_json::from_str(&std::fs::read_to_string(fixture("robot.json")).unwrap()).unwrap()
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn tutorial_app() -> Router {
    let app = router(Arc::new(Store::in_memory()));
    let (status, body) = send(&app, "POST", "/robots", Some(tutorial_registration())).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    app
}

fn two_inspections() -> Value {
    json!({
        "inspections": [
            { "epoch": 1, "cycles": 10, "time": 2.0, "accuracy": 4.5 },
            { "epoch": 2, "cycles": 20, "time": 4.5, "accuracy": 5.25 }
        ],
        "tasks": [
            { "state": "light", "start": 0.0, "end": 1.5 },
            { "state": "heavy", "start": 1.5, "end": 4.5 }
        ]
    })
}

#[tokio::test]
async fn healthz() {
    let app = router(Arc::new(Store::in_memory()));
    assert_eq!(send(&app, "GET", "/healthz", None).await, (StatusCode::OK, json!({ "status": "ok" })));
}

#[tokio::test]
async fn closed_form_matches_library_and_cli_fixture() {
    let app = tutorial_app().await;
    let (status, body) = send(&app, "GET", "/robots/tutorial/rld?approach=1", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["ig"], json!({ "mean": 12.0, "shape": 36.0 }));

    let model: TaskSeverityModel = read_json(&fixture("model.json")).unwrap();
    let posterior: PosteriorState = read_json(&fixture("posterior.json")).unwrap();
    let ctx: PredictionContext = read_json(&fixture("context.json")).unwrap();
    let library = serde_json::to_value(predict_closed_form(&posterior, &model, &ctx).unwrap()).unwrap();
    assert_eq!(body, library);
}

#[tokio::test]
async fn whatif_rows_are_ordered() {
    let app = tutorial_app().await;
    let req = json!({ "scenarios": [[1.0, 0.0], [0.0, 1.0]] });
    let (status, rows) = send(&app, "POST", "/robots/tutorial/whatif", Some(req)).await;
    assert_eq!(status, StatusCode::OK);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["median_hours"].as_f64().unwrap() >= rows[1]["median_hours"].as_f64().unwrap());
}

#[tokio::test]
async fn invalid_scenarios_are_rejected() {
    let app = tutorial_app().await;
    for bad in [json!([[0.7, 0.7]]), json!([[-0.5, 1.5]]), json!([[1.0]])] {
        let (status, body) = send(&app, "POST", "/robots/tutorial/whatif", Some(json!({ "scenarios": bad }))).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
        assert!(body["error"].is_string());
    }
}

#[tokio::test]
async fn unknown_robot_is_404() {
    let app = router(Arc::new(Store::in_memory()));
    for (method, uri) in [("GET", "/robots/ghost/posterior"), ("GET", "/robots/ghost/rld?approach=1")] {
        assert_eq!(send(&app, method, uri, None).await.0, StatusCode::NOT_FOUND);
    }
    let (status, _) = send(&app, "POST", "/robots/ghost/inspections", Some(two_inspections())).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn inspections_update_the_posterior() {
    let app = tutorial_app().await;
    let (status, post) = send(&app, "POST", "/robots/tutorial/inspections", Some(two_inspections())).await;
    assert_eq!(status, StatusCode::OK, "{post}");
    assert_eq!(post["last_epoch"], 2);
    // chain statistics picked up the light → heavy switch at t = 1.5
    assert_eq!(post["ctmc_stats"]["counts"][0][1], 51.0);
    let (_, fetched) = send(&app, "GET", "/robots/tutorial/posterior", None).await;
    assert_eq!(fetched, post);
}

#[tokio::test]
async fn out_of_order_inspections_are_rejected() {
    let app = tutorial_app().await;
    let stale = json!({
        "inspections": [{ "epoch": 1, "cycles": 0, "time": 2.0, "accuracy": 4.5 }],
        "tasks": [{ "state": "light", "start": 0.0, "end": 2.0 }]
    });
    let (status, _) = send(&app, "POST", "/robots/tutorial/inspections", Some(stale)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let skipped = json!({
        "inspections": [{ "epoch": 2, "cycles": 20, "time": 2.0, "accuracy": 4.5 }],
        "tasks": [{ "state": "light", "start": 0.0, "end": 2.0 }]
    });
    assert_eq!(send(&app, "POST", "/robots/tutorial/inspections", Some(skipped)).await.0, StatusCode::UNPROCESSABLE_ENTITY);

    // a rejected batch leaves the robot untouched
    let (_, post) = send(&app, "GET", "/robots/tutorial/posterior", None).await;
    assert_eq!(post["last_epoch"], 0);
}

#[tokio::test]
async fn approach_two_needs_a_seed_and_a_bounded_size() {
    let app = tutorial_app().await;
    assert_eq!(send(&app, "GET", "/robots/tutorial/rld?approach=2", None).await.0, StatusCode::UNPROCESSABLE_ENTITY);
    let too_big = "/robots/tutorial/rld?approach=2&seed=1&M=100001";
    assert_eq!(send(&app, "GET", too_big, None).await.0, StatusCode::UNPROCESSABLE_ENTITY);

    let uri = "/robots/tutorial/rld?approach=2&seed=5&M=300&horizon=100";
    let (status, first) = send(&app, "GET", uri, None).await;
    assert_eq!(status, StatusCode::OK, "{first}");
    assert_eq!(first["approach"], 2);
    let failed = first["failure_times"].as_array().unwrap().len();
    assert_eq!(failed + first["censored"].as_u64().unwrap() as usize, 300);
    assert_eq!(send(&app, "GET", uri, None).await.1, first);
}

#[tokio::test]
async fn concurrent_mutation_is_a_conflict() {
    let store = Arc::new(Store::in_memory());
    let app = router(store.clone());
    send(&app, "POST", "/robots", Some(tutorial_registration())).await;
    let slot = store.get("tutorial").unwrap();
    let guard = slot.write().await;
    let (status, _) = send(&app, "POST", "/robots/tutorial/inspections", Some(two_inspections())).await;
    assert_eq!(status, StatusCode::CONFLICT);
    drop(guard);
    let (status, _) = send(&app, "POST", "/robots/tutorial/inspections", Some(two_inspections())).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn duplicate_and_malformed_registrations() {
    let app = tutorial_app().await;
    assert_eq!(send(&app, "POST", "/robots", Some(tutorial_registration())).await.0, StatusCode::CONFLICT);

    let mut bad = tutorial_registration();
    bad["id"] = json!("../etc");
    assert_eq!(send(&app, "POST", "/robots", Some(bad)).await.0, StatusCode::UNPROCESSABLE_ENTITY);

    let mut unnamed = tutorial_registration();
    unnamed.as_object_mut().unwrap().remove("id");
    let (status, body) = send(&app, "POST", "/robots", Some(unnamed)).await;
    assert_eq!(status, StatusCode::CREATED);
    assert!(body["id"].as_str().unwrap().starts_with("robot-"));
}

#[tokio::test]
async fn state_survives_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let before = {
        let app = router(Arc::new(Store::open(dir.path()).unwrap()));
        send(&app, "POST", "/robots", Some(tutorial_registration())).await;
        send(&app, "POST", "/robots/tutorial/inspections", Some(two_inspections())).await;
        send(&app, "GET", "/robots/tutorial/posterior", None).await.1
    };
    let app = router(Arc::new(Store::open(dir.path()).unwrap()));
    let (status, after) = send(&app, "GET", "/robots/tutorial/posterior", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after, before);
    assert_eq!(send(&app, "GET", "/robots", None).await.1, json!({ "robots": ["tutorial"] }));
}
