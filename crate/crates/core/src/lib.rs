//! Translation-style ontology matching core.
//!
//! Classes of a target ontology are addressed by hierarchical path
//! identifiers ([`smartid::PathId`]); a source description is matched by
//! decoding a path token by token through a [`trie::PathTrie`], so only
//! identifiers that exist in the target can ever be produced.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the wire
//! translator and the command line live in the `ontomap` crate.
#![no_std]
#![deny(rust_2018_idioms)]

extern crate alloc;

pub mod align;
pub mod corpus;
pub mod error;
pub mod metrics;
pub mod ontology;
pub mod smartid;
pub mod text;
pub mod trie;

pub use error::{AlignError, CorpusError, MetricError, OntologyError, SmartIdError};
pub use ontology::{ClassRecord, DescriptionSet, OntologyGraph};
pub use smartid::{PathId, SmartIdTable};
pub use trie::PathTrie;
