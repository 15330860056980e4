//! The registry network: a store, an HTTP node serving it, and a client
//! that talks to many nodes.
//!
//! Protocol, relative to a node's base URL:
//!
//! | request                      | response                                   |
//! |------------------------------|--------------------------------------------|
//! | `GET /`                      | [`ServerInfo`] as JSON                     |
//! | `POST /`                     | publish one trusty nanopub (TriG or N-Quads) |
//! | `GET /nanopubs.txt?page=N`   | artifact codes, one per line               |
//! | `GET /<code>[.trig\|.nq]`    | the nanopub                                |

pub mod client;
pub mod server;
pub mod store;

use serde::{Deserialize, Serialize};

pub use client::{Client, ClientError, PublishReport, ServerList, StatusReport};
pub use server::{NodeConfig, RunningNode, DEFAULT_PAGE_SIZE};
pub use store::{Store, StoreError};

pub const PROTOCOL_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ServerInfo {
    /// Filled in by the client; nodes do not know their public URL.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub url: String,
    pub protocol_version: String,
    pub description: String,
    pub admits_publish: bool,
    pub page_size: usize,
    pub nanopub_count: usize,
}
