//! Intersection of two tiles, decided through their level functions.

use crate::error::Result;
use crate::graph::{Graph, Subgraph, ZeroCochain};

use super::cac::CacOrientation;
use super::{build_tile, shift_by_half_orientation, LevelVector, TilingParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedFace {
    /// Doubled half-integer levels; `d*` of it lies in both tiles.
    pub alpha: LevelVector,
    pub d1: CacOrientation,
    pub d2: CacOrientation,
    /// Components of the common active edges with equal levels.
    pub components: Vec<Subgraph>,
}

/// `Some` exactly when the two tiles intersect.
pub fn tiles_adjacent(
    g: &Graph,
    params: &TilingParams,
    f1: &ZeroCochain<i64>,
    f2: &ZeroCochain<i64>,
) -> Result<Option<SharedFace>> {
    let t1 = build_tile(g, params, f1)?;
    let t2 = build_tile(g, params, f2)?;
    let h: Vec<i64> = t2.f.0.iter().zip(&t1.f.0).map(|(a, b)| a - b).collect();
    let mut values = h.clone();
    values.sort_unstable();
    values.dedup();
    let parts: Vec<Vec<usize>> = values
        .iter()
        .map(|&val| (0..h.len()).filter(|&v| h[v] == val).collect())
        .collect();
    let reversed: Vec<Vec<usize>> = parts.iter().rev().cloned().collect();
    let d1 = CacOrientation::from_ordered_partition(g, &t1.active, &parts);
    let d2 = CacOrientation::from_ordered_partition(g, &t2.active, &reversed);
    let m = g.edge_count();
    let alpha = shift_by_half_orientation(&t1.level, &d1.chi(m));
    if alpha != shift_by_half_orientation(&t2.level, &d2.chi(m)) {
        return Ok(None);
    }
    let keep: Vec<bool> = (0..m)
        .map(|e| t1.active[e] && t2.active[e] && t1.level.0[e] == t2.level.0[e])
        .collect();
    Ok(Some(SharedFace {
        alpha,
        d1,
        d2,
        components: g.component_subgraphs(&keep),
    }))
}
