//! Size guard for the exhaustive routines.
//!
//! Subpartition enumeration grows like the Bell numbers, so every exhaustive
//! entry point refuses graphs above a vertex limit unless it is raised
//! explicitly.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::vertex_set::MAX_VERTICES;

pub const DEFAULT_MAX_VERTICES: usize = 20;

/// Name of the environment variable read by [`max_vertices_from_env`].
pub const MAX_N_ENV: &str = "ARBORPACK_MAX_N";

static MAX_N: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_VERTICES);

pub fn max_vertices() -> usize {
    MAX_N.load(Ordering::Relaxed)
}

/// Raise or lower the guard. Values above the bit-set capacity are clamped.
pub fn set_max_vertices(n: usize) {
    MAX_N.store(n.min(MAX_VERTICES), Ordering::Relaxed);
}

/// Apply `ARBORPACK_MAX_N` if it is set. Returns the effective limit.
pub fn max_vertices_from_env() -> Result<usize> {
    if let Ok(raw) = std::env::var(MAX_N_ENV) {
        let n = raw
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("{MAX_N_ENV}={raw:?} is not a count")))?;
        set_max_vertices(n);
    }
    Ok(max_vertices())
}

pub(crate) fn guard(n: usize) -> Result<()> {
    let limit = max_vertices();
    if n > limit {
        return Err(Error::SizeGuard { n, limit });
    }
    Ok(())
}

/// Arc limit for the exhaustive packing oracle. Its search tree grows like
/// `(slots+1)^arcs` before pruning.
pub const DEFAULT_MAX_SEARCH_ARCS: usize = 24;

static MAX_ARCS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_SEARCH_ARCS);

pub fn max_search_arcs() -> usize {
    MAX_ARCS.load(Ordering::Relaxed)
}

pub fn set_max_search_arcs(arcs: usize) {
    MAX_ARCS.store(arcs, Ordering::Relaxed);
}

pub(crate) fn guard_search(n: usize, arcs: usize) -> Result<()> {
    guard(n)?;
    let limit = max_search_arcs();
    if arcs > limit {
        return Err(Error::ArcGuard { arcs, limit });
    }
    Ok(())
}
