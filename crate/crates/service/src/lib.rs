//! HTTP facade over the translator. Every handler is a pure function of its
//! request body; there is no state shared between requests.

use axum::body::Bytes;
use axum::extract::DefaultBodyLimit;
use axum::http::{header, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};

use typestate_core::decompile::decompile;
use typestate_core::diagnostic::{has_errors, Diagnostic};
use typestate_core::interchange::{ast_to_json, doa_to_json};
use typestate_core::pipeline::{load, load_automaton, InputKind, Loaded};
use typestate_core::syntax::render;

/// Largest accepted request body.
pub const BODY_LIMIT: usize = 1024 * 1024;

const DEFAULT_NAME: &str = "Protocol";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub name: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvertRequest {
    pub kind: InputKind,
    pub payload: String,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvertResponse {
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ConvertResponse {
    fn from_outcome(outcome: Result<(String, Vec<Diagnostic>), Vec<Diagnostic>>) -> Self {
        match outcome {
            Ok((result, diagnostics)) => ConvertResponse {
                ok: !has_errors(&diagnostics),
                result: Some(result),
                diagnostics,
            },
            Err(diagnostics) => ConvertResponse {
                ok: false,
                result: None,
                diagnostics,
            },
        }
    }
}

/// Envelope problems; these become HTTP 400.
#[derive(Debug)]
struct BadRequest(String);

impl IntoResponse for BadRequest {
    fn into_response(self) -> Response {
        (StatusCode::BAD_REQUEST, Json(serde_json::json!({ "error": self.0 }))).into_response()
    }
}

fn envelope(body: &[u8], allowed: &[InputKind]) -> Result<ConvertRequest, BadRequest> {
    let req: ConvertRequest =
        serde_json::from_slice(body).map_err(|e| BadRequest(format!("malformed request: {e}")))?;
    if req.payload.trim().is_empty() {
        return Err(BadRequest("payload must not be empty".into()));
    }
    if !allowed.contains(&req.kind) {
        let names: Vec<&str> = allowed.iter().map(|k| k.as_str()).collect();
        return Err(BadRequest(format!(
            "kind `{}` is not accepted here (expected {})",
            req.kind,
            names.join(" or ")
        )));
    }
    Ok(req)
}

fn respond(outcome: Result<(String, Vec<Diagnostic>), Vec<Diagnostic>>) -> Json<ConvertResponse> {
    Json(ConvertResponse::from_outcome(outcome))
}

/// Protocol text or syntax tree to automaton document.
pub fn compile_request(req: &ConvertRequest) -> Result<(String, Vec<Diagnostic>), Vec<Diagnostic>> {
    let checked = load_automaton(req.kind, &req.payload)?;
    Ok((doa_to_json(&checked.value), checked.warnings))
}

/// Automaton document to protocol text.
pub fn decompile_request(req: &ConvertRequest) -> Result<(String, Vec<Diagnostic>), Vec<Diagnostic>> {
    let checked = load_automaton(req.kind, &req.payload)?;
    let name = req.options.name.as_deref().unwrap_or(DEFAULT_NAME);
    let ast = decompile(name, &checked.value)?;
    Ok((render(&ast), checked.warnings))
}

/// Protocol text to syntax tree document, and back.
pub fn ast_request(req: &ConvertRequest) -> Result<(String, Vec<Diagnostic>), Vec<Diagnostic>> {
    let checked = load(req.kind, &req.payload)?;
    let Loaded::Protocol(ast) = checked.value else {
        unreachable!("automaton kinds are rejected by the envelope check")
    };
    let text = match req.kind {
        InputKind::Typestate => ast_to_json(&ast),
        _ => render(&ast),
    };
    Ok((text, checked.warnings))
}

/// Diagnostics only; the result is the input in canonical form.
pub fn validate_request(req: &ConvertRequest) -> Result<(String, Vec<Diagnostic>), Vec<Diagnostic>> {
    let checked = load(req.kind, &req.payload)?;
    let canonical = match checked.value {
        Loaded::Protocol(ast) => render(&ast),
        Loaded::Automaton(doa) => doa_to_json(&doa),
    };
    Ok((canonical, checked.warnings))
}

async fn compile_handler(body: Bytes) -> Result<Json<ConvertResponse>, BadRequest> {
    let req = envelope(&body, &[InputKind::Typestate, InputKind::Ast])?;
    Ok(respond(compile_request(&req)))
}

async fn decompile_handler(body: Bytes) -> Result<Json<ConvertResponse>, BadRequest> {
    let req = envelope(&body, &[InputKind::Doa])?;
    Ok(respond(decompile_request(&req)))
}

async fn ast_handler(body: Bytes) -> Result<Json<ConvertResponse>, BadRequest> {
    let req = envelope(&body, &[InputKind::Typestate, InputKind::Ast])?;
    Ok(respond(ast_request(&req)))
}

async fn validate_handler(body: Bytes) -> Result<Json<ConvertResponse>, BadRequest> {
    let req = envelope(&body, &[InputKind::Typestate, InputKind::Ast, InputKind::Doa])?;
    Ok(respond(validate_request(&req)))
}

async fn healthz() -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "text/plain")], "ok")
}

pub fn router() -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers(Any);
    let api = Router::new()
        .route("/api/compile", post(compile_handler))
        .route("/api/decompile", post(decompile_handler))
        .route("/api/ast", post(ast_handler))
        .route("/api/validate", post(validate_handler))
        .layer(cors)
        .layer(DefaultBodyLimit::max(BODY_LIMIT));
    api.route("/healthz", get(healthz))
}

/// Serves [`router`] on `listener` until the process stops.
pub async fn serve(listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router()).await
}
