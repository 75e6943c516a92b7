//! Voronoi cells of graphs, their face posets, and twisted mixed tilings.

mod adjacency;
mod cac;
mod cell;
mod level;
mod tiling;

pub use adjacency::{tiles_adjacent, SharedFace};
pub use cac::{enumerate_cac, CacOrientation, CacPoset, PARTITION_CAP};
pub use cell::{cell_geometry, CellGeometry, Face, CELL_CAP};
pub use level::solve_level_function;
pub(crate) use tiling::h0_constraint;
pub use tiling::{build_tile, locate_point, CoveringBound, Tile, TileCatalog, TileFacet};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graph::{Graph, OneCochain, ZeroCochain};
use crate::scalar::{half, Q};

/// Edge lengths `ℓ ≥ 1` and an integral twisting `𝔪`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingParams {
    pub lengths: Vec<i64>,
    pub twist: OneCochain<i64>,
}

impl TilingParams {
    pub fn new(g: &Graph, lengths: Vec<i64>, twist: OneCochain<i64>) -> Result<Self> {
        let m = g.edge_count();
        if lengths.len() != m || twist.len() != m {
            return Err(Error::Validation(format!(
                "lengths and twist need {m} entries, got {} and {}",
                lengths.len(),
                twist.len()
            )));
        }
        if let Some(e) = lengths.iter().position(|&l| l < 1) {
            return Err(Error::Validation(format!(
                "length of {} must be positive",
                g.edge_name(e)
            )));
        }
        Ok(TilingParams { lengths, twist })
    }

    /// `ℓ ≡ 1`, `𝔪 = 0`.
    pub fn unit(g: &Graph) -> Self {
        TilingParams {
            lengths: vec![1; g.edge_count()],
            twist: OneCochain::zeros(g.edge_count()),
        }
    }
}

/// Half-integers per reference-oriented edge, stored doubled.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelVector(pub Vec<i64>);

impl LevelVector {
    pub fn from_integers(levels: &[i64]) -> Self {
        LevelVector(levels.iter().map(|l| 2 * l).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn doubled(&self, e: usize) -> i64 {
        self.0[e]
    }

    pub fn is_integral_at(&self, e: usize) -> bool {
        self.0[e] % 2 == 0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v % 2 == 0)
    }

    /// The level itself when integral, else the integer just below it.
    pub fn floor(&self, e: usize) -> i64 {
        Integer::div_floor(&self.0[e], &2)
    }

    pub fn value(&self, e: usize) -> Q {
        half(self.0[e])
    }

    /// Edges with an integral level.
    pub fn integral_edges(&self) -> Vec<bool> {
        self.0.iter().map(|v| v % 2 == 0).collect()
    }
}

/// `𝔡^{𝔪,n}_f`: the ratio `(f(head) − f(tail) + n𝔪_e)/(nℓ_e)` when it is an
/// integer, otherwise its floor plus one half.
pub fn dee(g: &Graph, params: &TilingParams, f: &ZeroCochain<i64>, n: i64) -> LevelVector {
    assert!(n >= 1, "n must be positive");
    LevelVector(
        g.edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let num = f.0[e.head] - f.0[e.tail] + n * params.twist.0[i];
                let den = n * params.lengths[i];
                if num % den == 0 {
                    2 * (num / den)
                } else {
                    2 * Integer::div_floor(&num, &den) + 1
                }
            })
            .collect(),
    )
}

/// The spanning subgraph of integral-level edges and its components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSubgraph {
    pub edges: Vec<bool>,
    pub components: Vec<Vec<usize>>,
}

impl ActiveSubgraph {
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }
}

pub fn active_subgraph(g: &Graph, level: &LevelVector) -> ActiveSubgraph {
    let edges = level.integral_edges();
    let components = g.components_of(&edges);
    ActiveSubgraph { edges, components }
}

/// `χ_D` in doubled encoding is `2χ_D`; adding `½χ_D` to a doubled level adds `χ_D`.
pub(crate) fn shift_by_half_orientation(level: &LevelVector, chi: &OneCochain<i64>) -> LevelVector {
    LevelVector(level.0.iter().zip(&chi.0).map(|(l, c)| l + c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dee_examples() {
        let p2 = Graph::path(2);
        let two = TilingParams::new(&p2, vec![2], OneCochain(vec![0])).unwrap();
        assert_eq!(dee(&p2, &two, &ZeroCochain(vec![0, 1]), 1), LevelVector(vec![1]));
        assert_eq!(dee(&p2, &two, &ZeroCochain(vec![0, 0]), 1), LevelVector(vec![0]));
        let unit = TilingParams::unit(&p2);
        assert_eq!(dee(&p2, &unit, &ZeroCochain(vec![0, 1]), 2), LevelVector(vec![1]));
        assert_eq!(dee(&p2, &unit, &ZeroCochain(vec![0, -3]), 2), LevelVector(vec![-3]));
    }

    #[test]
    fn dee_is_antisymmetric() {
        // Reversing the reference edge negates the level.
        let fwd = Graph::path(2);
        let bwd = Graph::from_edge_list(2, &[(1, 0)]).unwrap();
        for l in 1..4 {
            for m in -3..4 {
                for x in -7..8 {
                    let pf = TilingParams::new(&fwd, vec![l], OneCochain(vec![m])).unwrap();
                    let pb = TilingParams::new(&bwd, vec![l], OneCochain(vec![-m])).unwrap();
                    let f = ZeroCochain(vec![0, x]);
                    assert_eq!(dee(&fwd, &pf, &f, 1).0[0], -dee(&bwd, &pb, &f, 1).0[0]);
                }
            }
        }
    }

    #[test]
    fn active_examples() {
        let k3 = Graph::complete(3);
        let a = active_subgraph(&k3, &LevelVector(vec![0, 0, 1]));
        assert_eq!(a.edges, vec![true, true, false]);
        assert!(a.is_connected());
        let p2 = Graph::path(2);
        let a = active_subgraph(&p2, &LevelVector(vec![1]));
        assert_eq!(a.components.len(), 2);
        assert!(active_subgraph(&k3, &LevelVector(vec![0; 3])).edges.iter().all(|&b| b));
    }

    #[test]
    fn params_validation() {
        let p2 = Graph::path(2);
        assert!(TilingParams::new(&p2, vec![0], OneCochain(vec![0])).is_err());
        assert!(TilingParams::new(&p2, vec![1, 1], OneCochain(vec![0])).is_err());
    }
}
