//! HTTP API for running live 2AFC studies on top of [`StudyService`].

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use interior_aesthetics::color::BasicColor;
use interior_aesthetics::service::StudyService;
use interior_aesthetics::study::{HitSummary, ImagePair, StudyReport};
use interior_aesthetics::{Error, ImageId, StudyId, UserId};
use serde::{Deserialize, Serialize};
use serde_json::json;

/// Reads run concurrently; writes serialize here and then through the
/// event log's single writer.
pub type AppState = Arc<RwLock<StudyService>>;

pub fn state(service: StudyService) -> AppState {
    Arc::new(RwLock::new(service))
}

pub fn api(state: AppState) -> Router {
    Router::new()
        .route("/api/users", post(create_user))
        .route("/api/users/{id}/ratings", post(submit_ratings).get(get_ratings))
        .route("/api/colors", get(colors))
        .route("/api/images", get(images))
        .route("/api/images/{id}", get(image_png))
        .route("/api/images/{id}/features", get(image_features))
        .route("/api/studies", post(create_study))
        .route("/api/studies/{id}/next", get(next_trial))
        .route("/api/studies/{id}/trials", post(record_trial))
        .route("/api/studies/{id}/report", get(report))
        .with_state(state)
}

pub struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        Self(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            Error::NotFound(_) => StatusCode::NOT_FOUND,
            Error::Conflict(_) => StatusCode::CONFLICT,
            Error::InvalidArgument(_)
            | Error::InvalidMembership { .. }
            | Error::InvalidVariable { .. }
            | Error::InvalidRule(_)
            | Error::UnknownTerm { .. }
            | Error::UndefinedCorrelation(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(json!({ "error": self.0.to_string() }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn read(state: &AppState) -> std::sync::RwLockReadGuard<'_, StudyService> {
    state.read().unwrap_or_else(|p| p.into_inner())
}

fn write(state: &AppState) -> std::sync::RwLockWriteGuard<'_, StudyService> {
    state.write().unwrap_or_else(|p| p.into_inner())
}

#[derive(Deserialize)]
struct NewUser {
    name: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct UserCreated {
    user_id: UserId,
}

async fn create_user(State(state): State<AppState>, Json(body): Json<NewUser>) -> ApiResult<impl IntoResponse> {
    let user_id = write(&state).create_user(&body.name)?;
    Ok((StatusCode::CREATED, Json(UserCreated { user_id })))
}

async fn submit_ratings(
    State(state): State<AppState>,
    Path(id): Path<UserId>,
    Json(ratings): Json<BTreeMap<BasicColor, f64>>,
) -> ApiResult<StatusCode> {
    write(&state).submit_ratings(&id, &ratings)?;
    Ok(StatusCode::NO_CONTENT)
}

/// Stored profile, normalized to `[0, 1]`.
async fn get_ratings(State(state): State<AppState>, Path(id): Path<UserId>) -> ApiResult<Json<BTreeMap<BasicColor, f64>>> {
    Ok(Json(read(&state).profile(&id)?.ratings()))
}

#[derive(Serialize)]
struct Swatch {
    name: &'static str,
    rgb: [u8; 3],
}

async fn colors() -> Json<Vec<Swatch>> {
    Json(
        BasicColor::ALL
            .into_iter()
            .map(|c| Swatch {
                name: c.name(),
                rgb: c.centroid(),
            })
            .collect(),
    )
}

async fn images(State(state): State<AppState>) -> Json<Vec<ImageId>> {
    Json(read(&state).corpus().table.ids().cloned().collect())
}

async fn image_png(State(state): State<AppState>, Path(id): Path<ImageId>) -> ApiResult<Response> {
    let path = {
        let service = read(&state);
        service.corpus().row(&id)?;
        service
            .corpus()
            .image_path(&id)
            .ok_or_else(|| Error::NotFound(format!("image file for {id}")))?
    };
    let bytes = std::fs::read(&path).map_err(|_| Error::NotFound(format!("image file for {id}")))?;
    Ok(([(header::CONTENT_TYPE, "image/png")], Bytes::from(bytes)).into_response())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DominantColor {
    color: BasicColor,
    pixel_count: u32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Features {
    image_id: ImageId,
    likes: u64,
    color_harmony: f64,
    lightness: u8,
    complexity: u32,
    color_harmony_norm: f64,
    lightness_norm: f64,
    simplicity_norm: f64,
    aesthetic_score: f64,
    dominant_colors: Vec<DominantColor>,
}

async fn image_features(State(state): State<AppState>, Path(id): Path<ImageId>) -> ApiResult<Json<Features>> {
    let service = read(&state);
    let row = service.corpus().row(&id)?;
    let dominant_colors = service
        .corpus()
        .palettes
        .get(&id)
        .map(|p| {
            p.entries()
                .iter()
                .map(|&(color, pixel_count)| DominantColor { color, pixel_count })
                .collect()
        })
        .unwrap_or_default();
    Ok(Json(Features {
        image_id: row.image_id.clone(),
        likes: row.likes,
        color_harmony: row.color_harmony,
        lightness: row.lightness,
        complexity: row.complexity,
        color_harmony_norm: row.ch_norm,
        lightness_norm: row.l_norm,
        simplicity_norm: row.simplicity_norm,
        aesthetic_score: row.aesthetic_score,
        dominant_colors,
    }))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct NewStudy {
    image_ids: Vec<ImageId>,
    user_ids: Vec<UserId>,
    seed: Option<u64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PlanEntry {
    user_id: UserId,
    pair: ImagePair,
    left_image: ImageId,
    right_image: ImageId,
}

/// Predictions stay server-side so operators cannot see them mid-study.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StudyCreated {
    study_id: StudyId,
    seed: u64,
    trials_per_user: usize,
    total_trials: usize,
    plan: Vec<PlanEntry>,
}

async fn create_study(State(state): State<AppState>, Json(body): Json<NewStudy>) -> ApiResult<impl IntoResponse> {
    let mut service = write(&state);
    let study = service.create_study(body.image_ids, body.user_ids, body.seed)?;
    let created = StudyCreated {
        study_id: study.study_id.clone(),
        seed: study.seed,
        trials_per_user: study.trials_per_user(),
        total_trials: study.plan.len(),
        plan: study
            .plan
            .iter()
            .map(|t| PlanEntry {
                user_id: t.user_id.clone(),
                pair: t.pair.clone(),
                left_image: t.left.clone(),
                right_image: t.right.clone(),
            })
            .collect(),
    };
    Ok((StatusCode::CREATED, Json(created)))
}

#[derive(Deserialize)]
struct NextQuery {
    user: UserId,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Next {
    done: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair: Option<ImagePair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left_image: Option<ImageId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right_image: Option<ImageId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<usize>,
    total: usize,
}

async fn next_trial(
    State(state): State<AppState>,
    Path(id): Path<StudyId>,
    Query(q): Query<NextQuery>,
) -> ApiResult<Json<Next>> {
    let service = read(&state);
    let next = service.next_trial(&id, &q.user)?;
    let total = service.study(&id)?.trials_per_user();
    Ok(Json(match next {
        Some(n) => Next {
            done: false,
            pair: Some(n.pair),
            left_image: Some(n.left),
            right_image: Some(n.right),
            index: Some(n.index),
            total,
        },
        None => Next {
            done: true,
            pair: None,
            left_image: None,
            right_image: None,
            index: None,
            total,
        },
    }))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct TrialAnswer {
    user_id: UserId,
    pair: ImagePair,
    choice: ImageId,
}

#[derive(Serialize)]
struct TrialRecorded {
    hit: bool,
}

async fn record_trial(
    State(state): State<AppState>,
    Path(id): Path<StudyId>,
    Json(body): Json<TrialAnswer>,
) -> ApiResult<impl IntoResponse> {
    let trial = write(&state).record_trial(&id, &body.user_id, body.pair, body.choice)?;
    Ok((StatusCode::CREATED, Json(TrialRecorded { hit: trial.hit })))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Hits {
    hits: usize,
    trials: usize,
    hit_rate: Option<f64>,
}

impl From<&HitSummary> for Hits {
    fn from(h: &HitSummary) -> Self {
        Self {
            hits: h.hits,
            trials: h.trials,
            hit_rate: h.hit_rate,
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportBody {
    study_id: StudyId,
    per_user: BTreeMap<UserId, Hits>,
    overall: Hits,
    expected_trials: usize,
    complete: bool,
}

impl From<&StudyReport> for ReportBody {
    fn from(r: &StudyReport) -> Self {
        Self {
            study_id: r.study_id.clone(),
            per_user: r.per_user.iter().map(|(u, h)| (u.clone(), h.into())).collect(),
            overall: (&r.overall).into(),
            expected_trials: r.expected_trials,
            complete: r.complete,
        }
    }
}

async fn report(State(state): State<AppState>, Path(id): Path<StudyId>) -> ApiResult<Json<ReportBody>> {
    Ok(Json((&read(&state).report(&id)?).into()))
}
