//! Nanopublications: parsing, validation, trusty URIs, signatures, indexes
//! and a small registry network.

pub mod cli;
pub mod index;
pub mod nanopub;
pub mod rdf;
pub mod registry;
pub mod sign;
pub mod trusty;
pub mod validator;

pub use nanopub::{extract_nanopubs, ExtractError, MalformedNanopub, Nanopub};
pub use rdf::{Dataset, Format};

#[cfg(test)]
pub(crate) mod testutil;
