//! Blocking client for the registry network.
//!
//! Retrieval asks one server at a time in random order and hedges: another
//! server is asked whenever a request fails or stays unanswered for a short
//! while, with at most [`MAX_IN_FLIGHT`] requests outstanding. The first
//! response that verifies against the requested artifact code wins.

// ureq::Error is large but it is what ureq hands back.
#![allow(clippy::result_large_err)]

use std::collections::VecDeque;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::mpsc::{self, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use rand::seq::SliceRandom;
use thiserror::Error;

use super::ServerInfo;
use crate::index::{self, IndexError, NanopubIndex};
use crate::nanopub::Nanopub;
use crate::rdf::{Dataset, Format};
use crate::trusty::{verify_trusty, ArtifactCode, TrustyStatus, TrustyUri};

pub const DEFAULT_SERVERS: [&str; 5] = [
    "http://np.inn.ac/",
    "http://ristretto.med.yale.edu:8080/nanopub-server/",
    "http://nanopub-server.ops.labs.vu.nl/",
    "http://nanopubs.stanford.edu/nanopub-server/",
    "http://nanopubs.semanticscience.org/",
];

pub const MAX_IN_FLIGHT: usize = 4;
const HEDGE_AFTER: Duration = Duration::from_millis(500);
const RETRIES: u32 = 2;
const CONTENT_WORKERS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClientError {
    #[error("'{0}' is neither a trusty URI nor an artifact code")]
    BadRef(String),
    #[error("invalid server URL '{0}': expected an absolute http(s) URL")]
    BadServer(String),
    #[error("server list is empty")]
    NoServers,
    #[error("cannot read server list {path}: {reason}")]
    ServerList { path: String, reason: String },
    #[error("<{0}> does not have a valid trusty URI; only trusty nanopubs can be published")]
    NotTrusty(String),
    #[error("no server accepted the nanopubs: {}", join_failures(.0))]
    NoServerAccepted(Vec<(String, String)>),
    #[error("{0} not found on any server")]
    NotFound(ArtifactCode),
    #[error("{code} found only in corrupted form (at {})", .servers.join(", "))]
    Corrupt {
        code: ArtifactCode,
        servers: Vec<String>,
    },
    #[error("{url}: {reason}")]
    Unreachable { url: String, reason: String },
    #[error("{url} did not return a server info document: {reason}")]
    MalformedInfo { url: String, reason: String },
    #[error("<{0}> is not an index")]
    NotAnIndex(String),
    #[error("index content incomplete, missing: {}", .0.join(" "))]
    MissingElements(Vec<String>),
    #[error(transparent)]
    Index(#[from] IndexError),
}

fn join_failures(f: &[(String, String)]) -> String {
    f.iter()
        .map(|(s, why)| format!("{s} ({why})"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Resolves a trusty URI or a bare artifact code to the code.
pub fn parse_ref(r: &str) -> Result<ArtifactCode, ClientError> {
    let r = r.trim();
    if let Ok(code) = r.parse::<ArtifactCode>() {
        return Ok(code);
    }
    TrustyUri::parse(r)
        .map(|t| t.code().clone())
        .ok_or_else(|| ClientError::BadRef(r.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServerSource {
    BuiltIn,
    File,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerList {
    entries: Vec<String>,
    source: ServerSource,
}

impl Default for ServerList {
    fn default() -> Self {
        ServerList {
            entries: DEFAULT_SERVERS.iter().map(|s| s.to_string()).collect(),
            source: ServerSource::BuiltIn,
        }
    }
}

fn normalize_server(url: &str) -> Result<String, ClientError> {
    let url = url.trim();
    let rest = url
        .strip_prefix("http://")
        .or_else(|| url.strip_prefix("https://"))
        .ok_or_else(|| ClientError::BadServer(url.to_string()))?;
    if rest.is_empty() || rest.starts_with('/') || url.contains(char::is_whitespace) {
        return Err(ClientError::BadServer(url.to_string()));
    }
    Ok(if url.ends_with('/') {
        url.to_string()
    } else {
        format!("{url}/")
    })
}

impl ServerList {
    pub fn new<I, S>(urls: I) -> Result<ServerList, ClientError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let entries = urls
            .into_iter()
            .map(|u| normalize_server(u.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        if entries.is_empty() {
            return Err(ClientError::NoServers);
        }
        Ok(ServerList {
            entries,
            source: ServerSource::Explicit,
        })
    }

    /// One URL per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<ServerList, ClientError> {
        let urls = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let mut list = Self::new(urls)?;
        list.source = ServerSource::File;
        Ok(list)
    }

    pub fn load(path: &Path) -> Result<ServerList, ClientError> {
        let text = fs::read_to_string(path).map_err(|e| ClientError::ServerList {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn source(&self) -> ServerSource {
        self.source
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublishReport {
    pub server: String,
    pub published_count: usize,
}

impl fmt::Display for PublishReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let noun = if self.published_count == 1 {
            "nanopub"
        } else {
            "nanopubs"
        };
        write!(f, "{} {noun} published at {}", self.published_count, self.server)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatusReport {
    pub code: ArtifactCode,
    /// Full URLs of verified copies, in server-list order.
    pub found_at: Vec<String>,
    pub corrupt_at: Vec<String>,
    pub unreachable: Vec<String>,
}

impl StatusReport {
    pub fn count(&self) -> usize {
        self.found_at.len()
    }

    /// `URL:` lines (when `list_all`) followed by the count line.
    pub fn render(&self, list_all: bool) -> String {
        let mut out = String::new();
        if list_all {
            for url in &self.found_at {
                out.push_str(&format!("URL: {url}\n"));
            }
        }
        let noun = if self.count() == 1 { "server" } else { "servers" };
        out.push_str(&format!("Found on {} nanopub {noun}.\n", self.count()));
        out
    }
}

/// An index together with everything it defines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexContent {
    /// Index nanopubs, oldest chunk first; the top index is last.
    pub indexes: Vec<Nanopub>,
    pub elements: Vec<Nanopub>,
}

impl IndexContent {
    pub fn nanopubs(&self) -> impl Iterator<Item = &Nanopub> {
        self.indexes.iter().chain(&self.elements)
    }

    pub fn to_dataset(&self) -> Dataset {
        Dataset::from_quads(self.nanopubs().flat_map(|n| n.quads().iter().cloned()).collect())
    }
}

enum Outcome {
    Verified(Box<Nanopub>),
    Corrupt(String),
    Missing,
    Failed(String, String),
}

fn transient(e: &ureq::Error) -> bool {
    match e {
        ureq::Error::Status(code, _) => *code >= 500,
        ureq::Error::Transport(_) => true,
    }
}

fn describe(e: ureq::Error) -> String {
    match e {
        ureq::Error::Status(code, resp) => {
            let body = resp.into_string().unwrap_or_default();
            format!("HTTP {code} {}", body.trim())
        }
        ureq::Error::Transport(t) => t.to_string(),
    }
}

#[derive(Clone)]
pub struct Client {
    servers: ServerList,
    agent: ureq::Agent,
}

impl fmt::Debug for Client {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Client").field("servers", &self.servers).finish()
    }
}

impl Client {
    pub fn new(servers: ServerList) -> Client {
        Self::with_timeouts(servers, Duration::from_secs(10), Duration::from_secs(30))
    }

    pub fn with_timeouts(servers: ServerList, connect: Duration, read: Duration) -> Client {
        let agent = ureq::AgentBuilder::new()
            .timeout_connect(connect)
            .timeout_read(read)
            .build();
        Client { servers, agent }
    }

    pub fn servers(&self) -> &ServerList {
        &self.servers
    }

    fn call<F>(&self, mut request: F) -> Result<ureq::Response, ureq::Error>
    where
        F: FnMut() -> Result<ureq::Response, ureq::Error>,
    {
        let mut attempt = 0;
        loop {
            match request() {
                Err(e) if attempt < RETRIES && transient(&e) => {
                    attempt += 1;
                    thread::sleep(Duration::from_millis(50 * u64::from(attempt)));
                }
                other => return other,
            }
        }
    }

    /// Uploads `nps` to the first server that accepts them, moving down the
    /// list when a server refuses or is unreachable.
    pub fn publish(&self, nps: &[Nanopub]) -> Result<Vec<PublishReport>, ClientError> {
        if let Some(bad) = nps.iter().find(|n| verify_trusty(n) != TrustyStatus::Valid) {
            return Err(ClientError::NotTrusty(bad.uri().to_string()));
        }
        let mut reports: Vec<PublishReport> = Vec::new();
        let mut failures = Vec::new();
        let mut pending: VecDeque<&Nanopub> = nps.iter().collect();
        for server in self.servers.entries() {
            let mut count = 0;
            while let Some(np) = pending.front() {
                let body = np
                    .to_dataset()
                    .serialize(Format::TriG)
                    .expect("a well-formed nanopub always serializes");
                let sent = self.call(|| {
                    self.agent
                        .post(server)
                        .set("Content-Type", Format::TriG.media_type())
                        .send_string(&body)
                });
                match sent {
                    Ok(_) => {
                        count += 1;
                        pending.pop_front();
                    }
                    Err(e) => {
                        let why = describe(e);
                        log::warn!("{server}: publishing <{}> failed: {why}", np.uri());
                        failures.push((server.clone(), why));
                        break;
                    }
                }
            }
            if count > 0 {
                reports.push(PublishReport {
                    server: server.clone(),
                    published_count: count,
                });
            }
            if pending.is_empty() {
                return Ok(reports);
            }
        }
        Err(ClientError::NoServerAccepted(failures))
    }

    fn fetch_one(&self, server: &str, code: &ArtifactCode) -> Outcome {
        let url = format!("{server}{code}");
        let resp = self.call(|| {
            self.agent
                .get(&url)
                .set("Accept", Format::TriG.media_type())
                .call()
        });
        let body = match resp {
            Ok(r) => {
                let format = Format::from_media_type(r.content_type()).unwrap_or(Format::TriG);
                match r.into_string() {
                    Ok(b) => (b, format),
                    Err(e) => return Outcome::Failed(url, e.to_string()),
                }
            }
            Err(ureq::Error::Status(404, _)) => return Outcome::Missing,
            Err(e) => return Outcome::Failed(url, describe(e)),
        };
        let parsed = Dataset::parse(&body.0, body.1)
            .map_err(|e| e.to_string())
            .and_then(|ds| Nanopub::from_dataset(ds).map_err(|e| e.to_string()));
        match parsed {
            Ok(np)
                if TrustyUri::parse(np.uri()).is_some_and(|t| t.code() == code)
                    && verify_trusty(&np) == TrustyStatus::Valid =>
            {
                Outcome::Verified(Box::new(np))
            }
            Ok(_) => {
                log::warn!("{url}: content does not match its artifact code");
                Outcome::Corrupt(url)
            }
            Err(e) => {
                log::warn!("{url}: unusable response: {e}");
                Outcome::Corrupt(url)
            }
        }
    }

    /// Retrieves a nanopub that verifies against `reference`.
    pub fn get(&self, reference: &str) -> Result<Nanopub, ClientError> {
        let code = parse_ref(reference)?;
        self.get_code(&code)
    }

    pub fn get_code(&self, code: &ArtifactCode) -> Result<Nanopub, ClientError> {
        let mut order = self.servers.entries().to_vec();
        order.shuffle(&mut rand::thread_rng());
        let mut queue: VecDeque<String> = order.into();

        let (tx, rx) = mpsc::channel::<Outcome>();
        let launch = |server: String| {
            let client = self.clone();
            let code = code.clone();
            let tx = tx.clone();
            thread::spawn(move || {
                let _ = tx.send(client.fetch_one(&server, &code));
            });
        };

        let mut in_flight = 0;
        let mut corrupt = Vec::new();
        if let Some(s) = queue.pop_front() {
            launch(s);
            in_flight += 1;
        }
        while in_flight > 0 {
            match rx.recv_timeout(HEDGE_AFTER) {
                Ok(outcome) => {
                    in_flight -= 1;
                    match outcome {
                        Outcome::Verified(np) => return Ok(*np),
                        Outcome::Corrupt(url) => corrupt.push(url),
                        Outcome::Missing => {}
                        Outcome::Failed(url, why) => log::info!("{url}: {why}"),
                    }
                    if let Some(s) = queue.pop_front() {
                        launch(s);
                        in_flight += 1;
                    }
                }
                Err(RecvTimeoutError::Timeout) => {
                    if in_flight < MAX_IN_FLIGHT {
                        if let Some(s) = queue.pop_front() {
                            launch(s);
                            in_flight += 1;
                        }
                    }
                }
                Err(RecvTimeoutError::Disconnected) => break,
            }
        }
        if corrupt.is_empty() {
            Err(ClientError::NotFound(code.clone()))
        } else {
            Err(ClientError::Corrupt {
                code: code.clone(),
                servers: corrupt,
            })
        }
    }

    /// Retrieves an index and every nanopub it defines.
    pub fn get_content(&self, reference: &str) -> Result<IndexContent, ClientError> {
        let top = self.get(reference)?;
        let uri = top.uri().to_string();
        let top = NanopubIndex::from_nanopub(top).map_err(|e| match e {
            IndexError::NotAnIndex(_) => ClientError::NotAnIndex(uri),
            other => other.into(),
        })?;
        let resolved = index::resolve(top, |u| self.get(u).map_err(|e| e.to_string()))?;

        let jobs: Mutex<VecDeque<(usize, String)>> =
            Mutex::new(resolved.elements.iter().cloned().enumerate().collect());
        let results: Mutex<Vec<Option<Nanopub>>> = Mutex::new(vec![None; resolved.elements.len()]);
        let missing: Mutex<Vec<String>> = Mutex::new(Vec::new());
        thread::scope(|s| {
            for _ in 0..CONTENT_WORKERS.min(resolved.elements.len()) {
                s.spawn(|| loop {
                    let Some((i, uri)) = jobs.lock().unwrap().pop_front() else {
                        break;
                    };
                    match self.get(&uri) {
                        Ok(np) => results.lock().unwrap()[i] = Some(np),
                        Err(e) => {
                            log::warn!("{uri}: {e}");
                            missing.lock().unwrap().push(uri);
                        }
                    }
                });
            }
        });
        let mut missing = missing.into_inner().unwrap();
        if !missing.is_empty() {
            missing.sort();
            return Err(ClientError::MissingElements(missing));
        }
        Ok(IndexContent {
            indexes: resolved.indexes,
            elements: results.into_inner().unwrap().into_iter().flatten().collect(),
        })
    }

    /// Asks every server for `reference`; only verified copies count.
    pub fn status(&self, reference: &str) -> Result<StatusReport, ClientError> {
        let code = parse_ref(reference)?;
        let servers = self.servers.entries();
        let outcomes: Vec<Mutex<Option<Outcome>>> = servers.iter().map(|_| Mutex::new(None)).collect();
        let next = Mutex::new(0usize);
        thread::scope(|s| {
            for _ in 0..MAX_IN_FLIGHT.min(servers.len()) {
                s.spawn(|| loop {
                    let i = {
                        let mut n = next.lock().unwrap();
                        let i = *n;
                        *n += 1;
                        i
                    };
                    if i >= servers.len() {
                        break;
                    }
                    *outcomes[i].lock().unwrap() = Some(self.fetch_one(&servers[i], &code));
                });
            }
        });
        let mut report = StatusReport {
            code: code.clone(),
            found_at: Vec::new(),
            corrupt_at: Vec::new(),
            unreachable: Vec::new(),
        };
        for (server, outcome) in servers.iter().zip(outcomes) {
            match outcome.into_inner().unwrap() {
                Some(Outcome::Verified(_)) => report.found_at.push(format!("{server}{code}")),
                Some(Outcome::Corrupt(url)) => report.corrupt_at.push(url),
                Some(Outcome::Failed(..)) => report.unreachable.push(server.clone()),
                Some(Outcome::Missing) | None => {}
            }
        }
        Ok(report)
    }

    pub fn server_info(&self, url: &str) -> Result<ServerInfo, ClientError> {
        let url = normalize_server(url)?;
        let resp = self
            .call(|| self.agent.get(&url).set("Accept", "application/json").call())
            .map_err(|e| ClientError::Unreachable {
                url: url.clone(),
                reason: describe(e),
            })?;
        let malformed = |reason: String| ClientError::MalformedInfo {
            url: url.clone(),
            reason,
        };
        let body = resp.into_string().map_err(|e| malformed(e.to_string()))?;
        let mut info: ServerInfo = serde_json::from_str(&body).map_err(|e| malformed(e.to_string()))?;
        if info.page_size == 0 {
            return Err(malformed("pageSize must be positive".into()));
        }
        info.url = url.clone();
        Ok(info)
    }
}
