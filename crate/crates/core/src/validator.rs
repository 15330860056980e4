//! JSON API behind the web validator.
//!
//! | route                 | request body                      | response                  |
//! |-----------------------|-----------------------------------|---------------------------|
//! | `POST /api/check`     | `{content, format?}`              | [`CheckResponse`]         |
//! | `POST /api/transform` | `{content, from?, to}`            | `{content, format}`       |
//! | `POST /api/publish`   | `{content, format?}`              | `{server, publishedCount, message}` |
//! | `POST /api/fetch`     | `{ref, format?}`                  | `{uri, content, format}`  |
//!
//! Errors come back as `{error}` with a 4xx/5xx status. Everything else is
//! served from the UI asset directory, when one is configured.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::nanopub::{extract_nanopubs, ExtractError, Nanopub};
use crate::rdf::{Dataset, Format};
use crate::registry::client::parse_ref;
use crate::registry::{Client, ClientError, ServerList};
use crate::sign::{verify_signature, SignatureStatus};
use crate::trusty::{is_trusty_uri, verify_trusty, TrustyStatus};

pub const DEFAULT_BODY_LIMIT: usize = 1024 * 1024;

#[derive(Debug, Clone)]
pub struct ValidatorConfig {
    pub servers: ServerList,
    pub body_limit: usize,
    /// Built validator UI; a placeholder page is served when absent.
    pub assets: Option<PathBuf>,
}

impl Default for ValidatorConfig {
    fn default() -> Self {
        ValidatorConfig {
            servers: ServerList::default(),
            body_limit: DEFAULT_BODY_LIMIT,
            assets: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    /// `R1`..`R7` for well-formedness violations.
    pub rule: Option<String>,
    pub message: String,
    pub graph: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResponse {
    pub uri: Option<String>,
    pub well_formed: bool,
    pub trusty: Verdict,
    pub signed: Verdict,
    pub issues: Vec<Issue>,
}

#[derive(Debug, Deserialize)]
struct ContentRequest {
    content: String,
    format: Option<String>,
}

#[derive(Debug, Deserialize)]
struct TransformRequest {
    content: String,
    from: Option<String>,
    to: String,
}

#[derive(Debug, Deserialize)]
struct FetchRequest {
    #[serde(rename = "ref")]
    reference: String,
    format: Option<String>,
}

#[derive(Debug, Serialize)]
struct Serialized {
    #[serde(skip_serializing_if = "Option::is_none")]
    uri: Option<String>,
    content: String,
    format: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct Published {
    server: String,
    published_count: usize,
    message: String,
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        #[derive(Serialize)]
        struct Body {
            error: String,
        }
        (self.0, Json(Body { error: self.1 })).into_response()
    }
}

fn bad_request(msg: impl ToString) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, msg.to_string())
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn format_arg(name: Option<&str>) -> Result<Format, ApiError> {
    match name {
        None => Ok(Format::TriG),
        Some(n) => n.parse().map_err(bad_request),
    }
}

fn parse(content: &str, format: Option<&str>) -> Result<Dataset, ApiError> {
    Dataset::parse(content, format_arg(format)?).map_err(bad_request)
}

fn issues_of(e: &ExtractError) -> Vec<Issue> {
    match e {
        ExtractError::Malformed(m) => m
            .violations
            .iter()
            .map(|v| Issue {
                rule: Some(v.rule.to_string()),
                message: v.message.clone(),
                graph: v.graph.clone(),
            })
            .collect(),
        other => vec![Issue {
            rule: None,
            message: other.to_string(),
            graph: None,
        }],
    }
}

/// Structured check of a document meant to hold one nanopublication.
pub fn check_dataset(ds: Dataset) -> CheckResponse {
    let mut results = extract_nanopubs(ds);
    let single = results.len() == 1 && results[0].is_ok();
    if !single {
        let mut issues: Vec<Issue> = results
            .iter()
            .filter_map(|r| r.as_ref().err())
            .flat_map(issues_of)
            .collect();
        if issues.is_empty() || results.len() != 1 {
            issues.push(Issue {
                rule: None,
                message: ExtractError::NotSingle(results.len()).to_string(),
                graph: None,
            });
        }
        let uri = results.iter().find_map(|r| match r {
            Ok(np) => Some(np.uri().to_string()),
            Err(ExtractError::Malformed(m)) => m.uri.clone(),
            Err(_) => None,
        });
        return CheckResponse {
            uri,
            well_formed: false,
            trusty: Verdict::None,
            signed: Verdict::None,
            issues,
        };
    }
    let np = results.pop().unwrap().unwrap();
    let mut issues = Vec::new();
    let trusty = match verify_trusty(&np) {
        TrustyStatus::Valid => Verdict::Valid,
        TrustyStatus::NoTrustyUri => Verdict::None,
        TrustyStatus::Invalid => {
            issues.push(Issue {
                rule: None,
                message: "trusty URI does not match the content".into(),
                graph: None,
            });
            Verdict::Invalid
        }
    };
    let signed = match verify_signature(&np) {
        SignatureStatus::Valid => Verdict::Valid,
        SignatureStatus::Unsigned => Verdict::None,
        SignatureStatus::Invalid(why) => {
            issues.push(Issue {
                rule: None,
                message: format!("signature is invalid: {why}"),
                graph: Some(np.pubinfo_graph().to_string()),
            });
            Verdict::Invalid
        }
    };
    CheckResponse {
        uri: Some(np.uri().to_string()),
        well_formed: true,
        trusty,
        signed,
        issues,
    }
}

async fn api_check(Json(req): Json<ContentRequest>) -> ApiResult<CheckResponse> {
    let ds = parse(&req.content, req.format.as_deref())?;
    Ok(Json(check_dataset(ds)))
}

async fn api_transform(Json(req): Json<TransformRequest>) -> ApiResult<Serialized> {
    let ds = parse(&req.content, req.from.as_deref())?;
    let to = format_arg(Some(&req.to))?;
    let content = ds.serialize(to).map_err(bad_request)?;
    Ok(Json(Serialized {
        uri: None,
        content,
        format: to.to_string(),
    }))
}

fn single(ds: Dataset) -> Result<Nanopub, ApiError> {
    Nanopub::from_dataset(ds).map_err(bad_request)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

async fn api_publish(
    State(cfg): State<Arc<ValidatorConfig>>,
    Json(req): Json<ContentRequest>,
) -> ApiResult<Published> {
    let np = single(parse(&req.content, req.format.as_deref())?)?;
    if verify_trusty(&np) != TrustyStatus::Valid {
        return Err(bad_request(
            "only nanopublications with a valid trusty URI can be published",
        ));
    }
    let client = Client::new(cfg.servers.clone());
    let reports = blocking(move || client.publish(&[np]))
        .await?
        .map_err(|e| match e {
            ClientError::NotTrusty(_) => bad_request(e),
            other => ApiError(StatusCode::BAD_GATEWAY, other.to_string()),
        })?;
    let r = reports
        .into_iter()
        .next()
        .expect("publish reports every server used");
    Ok(Json(Published {
        message: r.to_string(),
        server: r.server,
        published_count: r.published_count,
    }))
}

fn fetch_url(url: &str) -> Result<Dataset, ApiError> {
    let resp = ureq::get(url)
        .set("Accept", "application/trig, application/n-quads;q=0.9")
        .call()
        .map_err(|e| match e {
            ureq::Error::Status(404, _) => ApiError(StatusCode::NOT_FOUND, format!("{url}: not found")),
            other => ApiError(StatusCode::BAD_GATEWAY, format!("{url}: {other}")),
        })?;
    let format = Format::from_media_type(resp.content_type())
        .or_else(|| Format::from_extension(std::path::Path::new(url)))
        .unwrap_or(Format::TriG);
    let text = resp
        .into_string()
        .map_err(|e| ApiError(StatusCode::BAD_GATEWAY, e.to_string()))?;
    Dataset::parse(&text, format).map_err(|e| ApiError(StatusCode::BAD_GATEWAY, format!("{url}: {e}")))
}

async fn api_fetch(
    State(cfg): State<Arc<ValidatorConfig>>,
    Json(req): Json<FetchRequest>,
) -> ApiResult<Serialized> {
    let format = format_arg(req.format.as_deref())?;
    let reference = req.reference.trim().to_string();
    let is_url = reference.starts_with("http://") || reference.starts_with("https://");
    let ds = if is_trusty_uri(&reference) || parse_ref(&reference).is_ok() {
        let client = Client::new(cfg.servers.clone());
        let got = blocking(move || client.get(&reference)).await?;
        got.map(|np| np.to_dataset()).map_err(|e| match e {
            ClientError::NotFound(_) => ApiError(StatusCode::NOT_FOUND, e.to_string()),
            ClientError::Corrupt { .. } => ApiError(StatusCode::CONFLICT, e.to_string()),
            ClientError::BadRef(_) => bad_request(e),
            other => ApiError(StatusCode::BAD_GATEWAY, other.to_string()),
        })?
    } else if is_url {
        blocking(move || fetch_url(&reference)).await??
    } else {
        return Err(bad_request(format!(
            "'{}' is not a URL or artifact code",
            req.reference
        )));
    };
    let uri = extract_nanopubs(ds.clone())
        .into_iter()
        .find_map(Result::ok)
        .map(|np| np.uri().to_string());
    Ok(Json(Serialized {
        uri,
        content: ds.serialize(format).map_err(bad_request)?,
        format: format.to_string(),
    }))
}

const PLACEHOLDER_PAGE: &str = "<!doctype html>\n<title>nanopub validator</title>\n\
<p>The validator UI is not installed. The JSON API is available under <code>/api/</code>.</p>\n";

pub fn router(config: ValidatorConfig) -> Router {
    let limit = config.body_limit;
    let assets = config.assets.clone();
    let api = Router::new()
        .route("/api/check", post(api_check))
        .route("/api/transform", post(api_transform))
        .route("/api/publish", post(api_publish))
        .route("/api/fetch", post(api_fetch))
        .layer(DefaultBodyLimit::max(limit))
        .with_state(Arc::new(config));
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route(
            "/",
            get(|| async { ([(header::CACHE_CONTROL, "no-store")], Html(PLACEHOLDER_PAGE)) }),
        ),
    }
}
