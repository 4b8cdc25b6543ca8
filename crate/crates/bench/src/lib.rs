//! Shared fixtures for the criterion benchmarks.

use tqft::{FiniteGroup, Preset};

/// Builds a preset group, panicking on a bad name.
pub fn group(name: &str) -> FiniteGroup {
    Preset::parse(name)
        .and_then(|p| p.build())
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}
