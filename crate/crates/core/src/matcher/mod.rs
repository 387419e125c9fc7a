//! Numerical rule matching: configuration detection and rule instantiation.

mod config;
mod matching;
mod rule;

pub use config::{
    bisector_statement, canonical_similar, detect_configurations, similarity_statements, Bisector, ConfigSet,
    SimilarPair,
};
pub use matching::{make_instance, match_rules, normalize_instances, RuleInstance};
pub use rule::{
    builtin_catalog, builtin_catalog_text, format_catalog, load_catalog, parse_catalog, CatalogError, Rule,
    RuleSource,
};
