//! Std companion to `ontomap-core`: ontology class files, SmartID tables,
//! corpus and mapping files, the translator wire protocol and the `ontomap`
//! command line.

pub mod cache;
pub mod classfile;
pub mod cli;
pub mod config;
pub mod corpusio;
pub mod error;
pub mod idtable;
pub mod mapfile;
pub mod provenance;
pub mod report;
pub mod wire;

pub use error::{Error, Result};
