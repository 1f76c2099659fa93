//! JSON-over-HTTP access to per-robot posteriors, lifetime predictions and
//! what-if tables. See `docs/api.md` for the request and response schemas.

mod error;
mod robot;
mod store;

pub use error::ApiError;
pub use robot::{Event, InspectionBatch, PriorSpec, Registration, Robot, RobotConfig, TaskRecord};
pub use store::Store;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use rld_core::pipeline::{predict_closed_form, predict_monte_carlo, whatif_table, MonteCarloOptions};
use rld_core::rld::WhatIfRow;
use rld_core::{PosteriorState, RldReport, WhatIfScenario};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use tower_http::cors::{Any, CorsLayer};

/// Largest Monte-Carlo request served synchronously.
pub const MAX_PATHS: usize = 100_000;
pub const DEFAULT_PATHS: usize = 10_000;

pub type AppState = Arc<Store>;

pub fn router(store: AppState) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/robots", post(register).get(list))
        .route("/robots/{id}/inspections", post(append_inspections))
        .route("/robots/{id}/posterior", get(posterior))
        .route("/robots/{id}/rld", get(rld))
        .route("/robots/{id}/whatif", post(whatif))
        .layer(CorsLayer::new().allow_origin(Any).allow_methods(Any).allow_headers(Any))
        .with_state(store)
}

/// Serves until interrupted.
pub async fn serve(addr: SocketAddr, data_dir: Option<PathBuf>) -> Result<(), Box<dyn std::error::Error>> {
    let store = match data_dir {
        Some(dir) => Store::open(&dir)?,
        None => Store::in_memory(),
    };
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(store)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

async fn healthz() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

async fn list(State(store): State<AppState>) -> Json<Value> {
    Json(json!({ "robots": store.ids() }))
}

async fn register(
    State(store): State<AppState>,
    Json(mut reg): Json<Registration>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let id = match &reg.id {
        Some(id) => id.clone(),
        None => store.generate_id(),
    };
    reg.id = Some(id.clone());
    let robot = Robot::register(id.clone(), &reg)?;
    let posterior = robot.posterior().clone();
    store.insert(robot, &Event::Registered(reg))?;
    Ok((StatusCode::CREATED, Json(json!({ "id": id, "posterior": posterior }))))
}

async fn append_inspections(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Json(batch): Json<InspectionBatch>,
) -> Result<Json<PosteriorState>, ApiError> {
    let slot = store.get(&id)?;
    let mut robot = slot
        .try_write()
        .map_err(|_| ApiError::Conflict(format!("robot `{id}` is being updated or read; retry")))?;
    let next = robot.appended(&batch)?;
    store.persist(&id, &Event::Inspections(batch))?;
    *robot = next;
    Ok(Json(robot.posterior().clone()))
}

async fn posterior(State(store): State<AppState>, Path(id): Path<String>) -> Result<Json<PosteriorState>, ApiError> {
    let slot = store.get(&id)?;
    let robot = slot.read().await;
    Ok(Json(robot.posterior().clone()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RldQuery {
    #[serde(default = "default_approach")]
    pub approach: u8,
    #[serde(rename = "M")]
    pub paths: Option<usize>,
    pub horizon: Option<f64>,
    pub seed: Option<u64>,
    pub dt: Option<f64>,
}

fn default_approach() -> u8 {
    1
}

async fn rld(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<RldQuery>,
) -> Result<Json<RldReport>, ApiError> {
    let slot = store.get(&id)?;
    let robot = slot.read().await;
    let ctx = robot.context()?;
    match q.approach {
        1 => Ok(Json(predict_closed_form(robot.posterior(), &robot.model, &ctx)?)),
        2 => {
            let seed = q.seed.ok_or_else(|| ApiError::Unprocessable("approach 2 requires an explicit seed".into()))?;
            let paths = q.paths.unwrap_or(DEFAULT_PATHS);
            if paths == 0 || paths > MAX_PATHS {
                return Err(ApiError::Unprocessable(format!("M must be in 1..={MAX_PATHS}; use the CLI for larger runs")));
            }
            let opts = MonteCarloOptions { paths, horizon: q.horizon, seed, dt: q.dt, jobs: None };
            let (posterior, model) = (robot.posterior().clone(), robot.model.clone());
            // the read guard stays held so no append can interleave
            let report = tokio::task::spawn_blocking(move || predict_monte_carlo(&posterior, &model, &ctx, &opts))
                .await
                .map_err(|e| ApiError::Internal(e.to_string()))??;
            drop(robot);
            Ok(Json(report))
        }
        a => Err(ApiError::Unprocessable(format!("approach must be 1 or 2, got {a}"))),
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfRequest {
    pub scenarios: Vec<Vec<f64>>,
}

async fn whatif(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<WhatIfRequest>,
) -> Result<Json<Vec<WhatIfRow>>, ApiError> {
    let slot = store.get(&id)?;
    let robot = slot.read().await;
    let scenarios = req.scenarios.into_iter().map(WhatIfScenario::new).collect::<Result<Vec<_>, _>>()?;
    let ctx = robot.context()?;
    Ok(Json(whatif_table(robot.posterior(), &robot.model, &ctx, &scenarios)?))
}
