//! Stateless HTTP/JSON API over the laboratory, under `/api/v1`.
//!
//! ```text
//! GET  /api/v1/scenarios                       [{id,title,kind}]
//! GET  /api/v1/scenarios/{id}                  scenario spec
//! GET  /api/v1/scenarios/{id}/scene?frame=k    scene JSON, tracks baked at frame k
//! GET  /api/v1/scenarios/{id}/export.wrl       VRML97 world (model/vrml)
//! POST /api/v1/pattern                         pattern mesh JSON
//! POST /api/v1/polarization                    polarization readout
//! POST /api/v1/characteristics                 dipole characteristics
//! ```
//!
//! Bodies are produced by the same writers the library and CLI use, so a
//! response is byte-identical to the direct call. Failures are
//! `{"status":…,"code":…,"message":…}` with status 400, 404 or 422.

use std::net::SocketAddr;
use std::sync::{Arc, OnceLock};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use virtlab::coords::direction;
use virtlab::export::{characteristics_json, data_json, write_pattern_json, write_vrml, PolarizationJson};
use virtlab::farfield::{array_farfield, polarization, HandednessConvention};
use virtlab::patterns::{dipole_characteristics, pattern_grid, PatternMapping, SphericalGrid};
use virtlab::scenarios::{array_from_specs, build, catalog, BuildOutput, ElementSpec, ScenarioSpec};
use virtlab::Error;

pub const DEFAULT_PORT: u16 = 8080;
/// Largest `n_theta · n_phi` accepted by `/pattern`.
pub const MAX_GRID_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Adds permissive CORS headers for a browser UI on another origin.
    pub cors: bool,
}

/// Error body of every failed request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub status: u16,
    pub code: String,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status: status.as_u16(),
            code: code.to_string(),
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn unknown_scenario(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "unknown_scenario", format!("unknown scenario `{id}`"))
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, code) = match &e {
            Error::InvalidParameter { .. } => (StatusCode::BAD_REQUEST, "invalid_parameter"),
            Error::Config(_) => (StatusCode::BAD_REQUEST, "invalid_parameter"),
            Error::AntiResonant { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "anti_resonant"),
            Error::NullField => (StatusCode::UNPROCESSABLE_ENTITY, "null_field"),
            Error::NotTransverse { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "not_transverse"),
            Error::DegeneratePattern => (StatusCode::UNPROCESSABLE_ENTITY, "degenerate_pattern"),
            Error::SingularLoad => (StatusCode::UNPROCESSABLE_ENTITY, "singular_load"),
            _ => (StatusCode::UNPROCESSABLE_ENTITY, "compute_error"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        let body = serde_json::to_string(&self).expect("error serializes");
        (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn json_body(body: String) -> Response {
    ([(header::CONTENT_TYPE, HeaderValue::from_static("application/json"))], body).into_response()
}

/// The catalog with each scenario built at most once, on first use.
struct Catalog {
    specs: Vec<ScenarioSpec>,
    builds: Vec<OnceLock<Result<Arc<BuildOutput>, ApiError>>>,
}

impl Catalog {
    fn new() -> Self {
        let specs = catalog();
        let builds = specs.iter().map(|_| OnceLock::new()).collect();
        Catalog { specs, builds }
    }

    fn index(&self, id: &str) -> Result<usize, ApiError> {
        self.specs
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| ApiError::unknown_scenario(id))
    }

    fn built(&self, k: usize) -> Result<Arc<BuildOutput>, ApiError> {
        self.builds[k]
            .get_or_init(|| build(&self.specs[k]).map(Arc::new).map_err(ApiError::from))
            .clone()
    }
}

type AppState = Arc<Catalog>;

/// Runs CPU-bound work off the async executor.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "compute_error", e.to_string()))?
}

#[derive(Serialize)]
struct ScenarioSummary<'a> {
    id: &'a str,
    title: &'a str,
    kind: &'static str,
}

async fn list_scenarios(State(cat): State<AppState>) -> ApiResult {
    let list: Vec<_> = cat
        .specs
        .iter()
        .map(|s| ScenarioSummary {
            id: &s.id,
            title: &s.title,
            kind: s.kind().name(),
        })
        .collect();
    Ok(json_body(data_json(&list)?))
}

async fn get_scenario(State(cat): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let k = cat.index(&id)?;
    Ok(json_body(cat.specs[k].to_json()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameQuery {
    frame: Option<usize>,
}

async fn get_scene(
    State(cat): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<FrameQuery>, QueryRejection>,
) -> ApiResult {
    let Query(q) = query?;
    let k = cat.index(&id)?;
    blocking(move || {
        let out = cat.built(k)?;
        let n = cat.specs[k].n_frames;
        let body = match q.frame {
            None => data_json(&out.scene)?,
            Some(f) if f < n => data_json(&out.scene.frame(f, n))?,
            Some(f) => {
                return Err(ApiError::bad_request(format!(
                    "invalid parameter `frame`: {f} is out of range for {n} frames"
                )))
            }
        };
        Ok(json_body(body))
    })
    .await
}

async fn export_wrl(State(cat): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let k = cat.index(&id)?;
    blocking(move || {
        let text = write_vrml(&cat.built(k)?.scene)?;
        Ok(([(header::CONTENT_TYPE, "model/vrml")], text).into_response())
    })
    .await
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRequest {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridRequest {
    fn default() -> Self {
        GridRequest { n_theta: 46, n_phi: 90 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternRequest {
    pub elements: Vec<ElementSpec>,
    #[serde(default)]
    pub grid: GridRequest,
    #[serde(default)]
    pub mapping: PatternMapping,
}

/// `POST /pattern` body, computed directly.
pub fn pattern_body(req: &PatternRequest) -> Result<String, ApiError> {
    let g = req.grid;
    if g.n_theta.saturating_mul(g.n_phi) > MAX_GRID_SAMPLES {
        return Err(ApiError::bad_request(format!(
            "invalid parameter `grid`: {}×{} exceeds {MAX_GRID_SAMPLES} samples",
            g.n_theta, g.n_phi
        )));
    }
    let array = array_from_specs(&req.elements)?;
    let grid = SphericalGrid::new(g.n_theta, g.n_phi)?;
    Ok(write_pattern_json(&pattern_grid(&array, grid)?, req.mapping))
}

async fn post_pattern(body: Result<Json<PatternRequest>, JsonRejection>) -> ApiResult {
    let Json(req) = body?;
    blocking(move || pattern_body(&req).map(json_body)).await
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionRequest {
    pub theta_deg: f64,
    pub phi_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationRequest {
    pub elements: Vec<ElementSpec>,
    pub direction: DirectionRequest,
    #[serde(default)]
    pub convention: HandednessConvention,
}

/// `POST /polarization` body, computed directly.
pub fn polarization_body(req: &PolarizationRequest) -> Result<String, ApiError> {
    let d = req.direction;
    if !d.theta_deg.is_finite() || !d.phi_deg.is_finite() {
        return Err(ApiError::bad_request("invalid parameter `direction`: angles must be finite"));
    }
    let array = array_from_specs(&req.elements)?;
    let r = direction(d.theta_deg.to_radians(), d.phi_deg.to_radians());
    let e = array_farfield(&array, r);
    let p = polarization(&e, r, req.convention)?;
    Ok(data_json(&PolarizationJson::from(&p))?)
}

async fn post_polarization(body: Result<Json<PolarizationRequest>, JsonRejection>) -> ApiResult {
    let Json(req) = body?;
    blocking(move || polarization_body(&req).map(json_body)).await
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacteristicsRequest {
    pub length: f64,
    /// Answer 200 with `anti_resonant: true` instead of 422.
    #[serde(default)]
    pub allow_anti_resonant: bool,
}

/// `POST /characteristics` body, computed directly.
pub fn characteristics_body(req: &CharacteristicsRequest) -> Result<String, ApiError> {
    if !(req.length > 0.0 && req.length.is_finite()) {
        return Err(ApiError::bad_request("invalid parameter `length`: must be positive"));
    }
    let c = dipole_characteristics(req.length)?;
    if c.anti_resonant && !req.allow_anti_resonant {
        return Err(Error::AntiResonant { length: req.length }.into());
    }
    Ok(data_json(&characteristics_json(&c))?)
}

async fn post_characteristics(body: Result<Json<CharacteristicsRequest>, JsonRejection>) -> ApiResult {
    let Json(req) = body?;
    blocking(move || characteristics_body(&req).map(json_body)).await
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

pub fn router(config: &ServiceConfig) -> Router {
    let api = Router::new()
        .route("/scenarios", get(list_scenarios))
        .route("/scenarios/{id}", get(get_scenario))
        .route("/scenarios/{id}/scene", get(get_scene))
        .route("/scenarios/{id}/export.wrl", get(export_wrl))
        .route("/pattern", post(post_pattern))
        .route("/polarization", post(post_polarization))
        .route("/characteristics", post(post_characteristics));
    let app = Router::new()
        .nest("/api/v1", api)
        .fallback(not_found)
        .with_state(Arc::new(Catalog::new()));
    if config.cors {
        app.layer(CorsLayer::permissive())
    } else {
        app
    }
}

/// Serves on `addr` until the process ends.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("virtlab service listening on http://{}/api/v1", listener.local_addr()?);
    axum::serve(listener, router(&config)).await
}
