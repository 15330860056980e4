#![allow(dead_code)]

use std::collections::HashMap;
use std::net::TcpListener;
use std::path::Path;
use std::sync::Arc;

use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::routing::get;
use axum::Router;
use nanopub::rdf::{Dataset, Format};
use nanopub::registry::{Client, NodeConfig, RunningNode, ServerList};
use nanopub::trusty::{make_trusty, TrustyUri};
use nanopub::{extract_nanopubs, Nanopub};
use tempfile::TempDir;

pub mod gen;

pub const FIXTURE: &str = include_str!("../fixtures/nanopubfile.trig");

pub fn fixture() -> Vec<Nanopub> {
    extract_nanopubs(Dataset::parse(FIXTURE, Format::TriG).unwrap())
        .into_iter()
        .map(Result::unwrap)
        .collect()
}

pub fn trusty_fixture() -> Vec<Nanopub> {
    fixture().iter().map(|n| make_trusty(n).unwrap()).collect()
}

pub fn code_of(np: &Nanopub) -> String {
    TrustyUri::parse(np.uri()).unwrap().code().to_string()
}

/// A URL nothing listens on.
pub fn dead_url() -> String {
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = l.local_addr().unwrap().port();
    drop(l);
    format!("http://127.0.0.1:{port}/")
}

pub struct Network {
    pub nodes: Vec<Option<RunningNode>>,
    pub urls: Vec<String>,
    _dirs: Vec<TempDir>,
}

impl Network {
    pub fn start(n: usize) -> Network {
        let mut nodes = Vec::new();
        let mut dirs = Vec::new();
        for _ in 0..n {
            let dir = TempDir::new().unwrap();
            nodes.push(Some(RunningNode::start(NodeConfig::new(dir.path())).unwrap()));
            dirs.push(dir);
        }
        let urls = nodes
            .iter()
            .map(|n| n.as_ref().unwrap().url().to_string())
            .collect();
        Network {
            nodes,
            urls,
            _dirs: dirs,
        }
    }

    pub fn dir(&self, i: usize) -> &Path {
        self._dirs[i].path()
    }

    pub fn stop(&mut self, i: usize) {
        if let Some(n) = self.nodes[i].take() {
            n.stop();
        }
    }

    /// Brings a stopped node back on its old port and data directory.
    pub fn restart(&mut self, i: usize) {
        if self.nodes[i].is_some() {
            return;
        }
        let port = self.urls[i]
            .trim_end_matches('/')
            .rsplit(':')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        let mut config = NodeConfig::new(self._dirs[i].path());
        config.port = port;
        self.nodes[i] = Some(RunningNode::start(config).unwrap());
    }

    pub fn client(&self) -> Client {
        Client::new(ServerList::new(&self.urls).unwrap())
    }

    /// Publishes to every node, as the network's replication would.
    pub fn mirror(&self, nps: &[Nanopub]) {
        for url in &self.urls {
            Client::new(ServerList::new([url]).unwrap()).publish(nps).unwrap();
        }
    }

    pub fn servers_file(&self, dir: &Path) -> std::path::PathBuf {
        let path = dir.join("servers.list");
        std::fs::write(&path, format!("# local test network\n{}\n", self.urls.join("\n"))).unwrap();
        path
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Hostility {
    /// Serves the requested nanopub with one assertion term changed.
    Tamper,
    /// Serves a different, internally valid nanopub.
    Substitute,
    /// Serves text that is not RDF.
    Garbage,
}

struct Hostile {
    genuine: HashMap<String, String>,
    decoy: String,
    mode: Hostility,
}

async fn hostile_get(State(h): State<Arc<Hostile>>, UrlPath(code): UrlPath<String>) -> (StatusCode, String) {
    let code = code.trim_end_matches(".trig").to_string();
    let Some(text) = h.genuine.get(&code) else {
        return (StatusCode::NOT_FOUND, String::new());
    };
    let body = match h.mode {
        Hostility::Tamper => text.replace("diseaseB", "diseaseX"),
        Hostility::Substitute => h.decoy.clone(),
        Hostility::Garbage => "<html>not a nanopub</html>".to_string(),
    };
    (StatusCode::OK, body)
}

/// Starts a node that answers every known code with bad content. Runs
/// until the process exits.
pub fn hostile_node(nps: &[Nanopub], mode: Hostility) -> String {
    let genuine = nps
        .iter()
        .map(|n| (code_of(n), n.to_dataset().serialize(Format::TriG).unwrap()))
        .collect();
    let decoy = make_trusty(&fixture()[2])
        .unwrap()
        .to_dataset()
        .serialize(Format::TriG)
        .unwrap();
    let state = Arc::new(Hostile { genuine, decoy, mode });
    let app = Router::new()
        .route("/", get(|| async { "<html>welcome</html>" }))
        .route("/{code}", get(hostile_get))
        .with_state(state);
    serve(app)
}

/// Serves `app` on a free local port from a detached thread.
pub fn serve(app: Router) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    listener.set_nonblocking(true).unwrap();
    let url = format!("http://{}/", listener.local_addr().unwrap());
    std::thread::spawn(move || {
        tokio::runtime::Builder::new_current_thread()
            .enable_all()
            .build()
            .unwrap()
            .block_on(async move {
                let l = tokio::net::TcpListener::from_std(listener).unwrap();
                axum::serve(l, app).await.unwrap();
            })
    });
    url
}
