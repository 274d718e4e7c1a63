//! The JSON service behind `polyrecip serve`.
//!
//! | route | |
//! |---|---|
//! | `GET /` | the viewer page |
//! | `GET /api/complex` | primal document, edges and active faces |
//! | `GET /api/analysis` | counts, rank, dof, independent faces |
//! | `POST /api/solve` | [`SolveRequest`] → [`DualDocument`] |
//!
//! Bodies that are not a valid request get `400`; requests the solver
//! rejects get `422`. Both carry `{"error": <code>, "message": <text>}`.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;

use crate::session::{AnalysisView, ComplexView, DualDocument, Session, SolveRequest};

const VIEWER: &str = include_str!("../assets/index.html");

pub fn router(session: Arc<Session>) -> Router {
    Router::new()
        .route("/", get(viewer))
        .route("/api/complex", get(complex))
        .route("/api/analysis", get(analysis))
        .route("/api/solve", post(solve))
        .with_state(session)
}

/// An error response with a stable code in the body.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.code, "message": self.message });
        (self.status, Json(body)).into_response()
    }
}

impl From<polyrecip::Error> for ApiError {
    fn from(err: polyrecip::Error) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code: err.code().to_string(),
            message: err.to_string(),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(rejection: JsonRejection) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: "MalformedRequest".to_string(),
            message: rejection.body_text(),
        }
    }
}

async fn viewer() -> Html<&'static str> {
    Html(VIEWER)
}

async fn complex(State(session): State<Arc<Session>>) -> Json<ComplexView> {
    Json(session.complex_view())
}

async fn analysis(State(session): State<Arc<Session>>) -> Json<AnalysisView> {
    Json(session.analysis())
}

async fn solve(
    State(session): State<Arc<Session>>,
    request: Result<Json<SolveRequest>, JsonRejection>,
) -> Result<Json<DualDocument>, ApiError> {
    let Json(request) = request?;
    let result = tokio::task::spawn_blocking(move || session.solve(&request))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            code: "Internal".to_string(),
            message: e.to_string(),
        })?;
    Ok(Json(result?))
}

/// Binds `addr` and serves until ctrl-c.
pub async fn serve(session: Arc<Session>, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(session))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
