//! A registry node over a [`Store`].

use std::collections::HashMap;
use std::io;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;
use std::thread::JoinHandle;

use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use thiserror::Error;
use tokio::sync::oneshot;

use super::store::{Store, StoreError};
use super::{ServerInfo, PROTOCOL_VERSION};
use crate::nanopub::Nanopub;
use crate::rdf::{Dataset, Format};
use crate::trusty::{verify_trusty, ArtifactCode, TrustyStatus};

pub const DEFAULT_PAGE_SIZE: usize = 1000;
const MAX_BODY: usize = 16 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeConfig {
    pub host: IpAddr,
    /// 0 picks a free port.
    pub port: u16,
    pub data_dir: PathBuf,
    pub admits_publish: bool,
    pub page_size: usize,
    pub description: String,
}

impl NodeConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> NodeConfig {
        NodeConfig {
            host: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: 0,
            data_dir: data_dir.into(),
            admits_publish: true,
            page_size: DEFAULT_PAGE_SIZE,
            description: "nanopub registry node".to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ServerError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: io::Error },
    #[error("page size must be positive")]
    PageSize,
}

struct Node {
    store: Store,
    config: NodeConfig,
}

type Shared = Arc<Node>;

fn text(status: StatusCode, body: impl Into<String>) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
        body.into(),
    )
        .into_response()
}

async fn info(State(node): State<Shared>) -> Json<ServerInfo> {
    Json(ServerInfo {
        url: String::new(),
        protocol_version: PROTOCOL_VERSION.to_string(),
        description: node.config.description.clone(),
        admits_publish: node.config.admits_publish,
        page_size: node.config.page_size,
        nanopub_count: node.store.len(),
    })
}

async fn publish(State(node): State<Shared>, headers: HeaderMap, body: String) -> Response {
    if !node.config.admits_publish {
        return text(
            StatusCode::METHOD_NOT_ALLOWED,
            "this node does not accept publications\n",
        );
    }
    let format = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(Format::from_media_type)
        .unwrap_or(Format::TriG);
    let np = match Dataset::parse(&body, format)
        .map_err(|e| e.to_string())
        .and_then(|ds| Nanopub::from_dataset(ds).map_err(|e| e.to_string()))
    {
        Ok(np) => np,
        Err(e) => return text(StatusCode::BAD_REQUEST, format!("{e}\n")),
    };
    if verify_trusty(&np) != TrustyStatus::Valid {
        return text(
            StatusCode::BAD_REQUEST,
            "nanopub does not have a valid trusty URI\n",
        );
    }
    let uri = np.uri().to_string();
    let stored = tokio::task::spawn_blocking(move || node.store.put(&np)).await;
    match stored {
        Ok(Ok(true)) => {
            log::info!("stored {uri}");
            text(StatusCode::CREATED, format!("{uri}\n"))
        }
        Ok(Ok(false)) => text(StatusCode::OK, format!("{uri}\n")),
        Ok(Err(e)) => {
            log::error!("storing {uri}: {e}");
            text(StatusCode::INTERNAL_SERVER_ERROR, format!("{e}\n"))
        }
        Err(e) => text(StatusCode::INTERNAL_SERVER_ERROR, format!("{e}\n")),
    }
}

async fn list(State(node): State<Shared>, Query(q): Query<HashMap<String, String>>) -> Response {
    let page = match q.get("page").map(|p| p.parse::<usize>()) {
        None => 1,
        Some(Ok(p)) if p >= 1 => p,
        Some(_) => return text(StatusCode::BAD_REQUEST, "page must be a positive integer\n"),
    };
    let mut body = String::new();
    for code in node.store.page(page, node.config.page_size) {
        body.push_str(code.as_str());
        body.push('\n');
    }
    text(StatusCode::OK, body)
}

fn negotiate(headers: &HeaderMap) -> Format {
    headers
        .get(header::ACCEPT)
        .and_then(|v| v.to_str().ok())
        .and_then(|accept| accept.split(',').find_map(Format::from_media_type))
        .unwrap_or(Format::TriG)
}

async fn fetch(State(node): State<Shared>, Path(name): Path<String>, headers: HeaderMap) -> Response {
    let (code, format) = if let Some(c) = name.strip_suffix(".trig") {
        (c, Format::TriG)
    } else if let Some(c) = name.strip_suffix(".nq") {
        (c, Format::NQuads)
    } else {
        (name.as_str(), negotiate(&headers))
    };
    let Ok(code) = code.parse::<ArtifactCode>() else {
        return text(
            StatusCode::BAD_REQUEST,
            format!("'{code}' is not an artifact code\n"),
        );
    };
    let loaded = tokio::task::spawn_blocking(move || node.store.get(&code)).await;
    let np = match loaded {
        Ok(Ok(Some(np))) => np,
        Ok(Ok(None)) => return text(StatusCode::NOT_FOUND, "not found\n"),
        Ok(Err(e)) => {
            log::error!("{e}");
            return text(StatusCode::INTERNAL_SERVER_ERROR, format!("{e}\n"));
        }
        Err(e) => return text(StatusCode::INTERNAL_SERVER_ERROR, format!("{e}\n")),
    };
    match np.to_dataset().serialize(format) {
        Ok(body) => (
            StatusCode::OK,
            [(header::CONTENT_TYPE, format.media_type())],
            body,
        )
            .into_response(),
        Err(e) => text(StatusCode::INTERNAL_SERVER_ERROR, format!("{e}\n")),
    }
}

/// The node's routes over an opened store.
pub fn router(store: Store, config: NodeConfig) -> Router {
    Router::new()
        .route("/", get(info).post(publish))
        .route("/nanopubs.txt", get(list))
        .route("/{code}", get(fetch))
        .layer(DefaultBodyLimit::max(MAX_BODY))
        .with_state(Arc::new(Node { store, config }))
}

/// A node serving on a background thread until stopped or dropped.
pub struct RunningNode {
    addr: SocketAddr,
    url: String,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<()>>,
}

impl RunningNode {
    pub fn start(config: NodeConfig) -> Result<RunningNode, ServerError> {
        if config.page_size == 0 {
            return Err(ServerError::PageSize);
        }
        let store = Store::open(&config.data_dir)?;
        let wanted = SocketAddr::new(config.host, config.port);
        let bind_err = |source| ServerError::Bind { addr: wanted, source };
        let listener = std::net::TcpListener::bind(wanted).map_err(bind_err)?;
        listener.set_nonblocking(true).map_err(bind_err)?;
        let addr = listener.local_addr().map_err(bind_err)?;
        let app = router(store, config);
        let (tx, rx) = oneshot::channel::<()>();
        let thread = std::thread::Builder::new()
            .name(format!("np-node-{}", addr.port()))
            .spawn(move || {
                let rt = tokio::runtime::Builder::new_multi_thread()
                    .worker_threads(2)
                    .enable_all()
                    .build()
                    .expect("tokio runtime");
                rt.block_on(async move {
                    let listener = tokio::net::TcpListener::from_std(listener).expect("listener");
                    let stop = async {
                        let _ = rx.await;
                    };
                    if let Err(e) = axum::serve(listener, app).with_graceful_shutdown(stop).await {
                        log::error!("node {addr}: {e}");
                    }
                });
            })
            .map_err(bind_err)?;
        let host = match addr.ip() {
            IpAddr::V6(ip) => format!("[{ip}]"),
            IpAddr::V4(ip) => ip.to_string(),
        };
        Ok(RunningNode {
            addr,
            url: format!("http://{host}:{}/", addr.port()),
            shutdown: Some(tx),
            thread: Some(thread),
        })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Base URL, with trailing slash.
    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn stop(mut self) {
        self.shutdown_now();
    }

    fn shutdown_now(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for RunningNode {
    fn drop(&mut self) {
        self.shutdown_now();
    }
}
