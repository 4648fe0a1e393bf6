//! Compose urban lot-repair designs from a pattern-language catalog, score
//! them on eight livability metrics, render plan views, and analyze survey
//! ratings of finished designs.
//!
//! | module       | what it does                                                    |
//! |--------------|-----------------------------------------------------------------|
//! | [`scene`]    | scene model, canonical documents, practice-scene matching       |
//! | [`catalog`]  | patterns, placeable elements, the twelve scenario briefs        |
//! | [`metrics`]  | shadow geometry and the deterministic eight-metric scorer       |
//! | [`render`]   | SVG plan view                                                   |
//! | [`survey`]   | rating ingestion, attention checks, means, agreement, coding    |
//! | [`service`]  | HTTP design service with an append-only record store            |
//! | [`cli`]      | batch commands behind the `lotforge` binary                     |
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod catalog;
pub mod cli;
pub mod geometry;
pub mod metric;
pub mod metrics;
pub mod render;
pub mod scene;
pub mod service;
pub mod survey;

pub use catalog::{builtin_catalog, load_catalog, Catalog};
pub use metric::Metric;
pub use scene::Scene;
