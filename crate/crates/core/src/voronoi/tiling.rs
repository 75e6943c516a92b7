//! Tiles of the twisted mixed tiling of `H_0` and point location.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{apply_d_star, Graph, OneCochain, VertexSet, ZeroCochain};
use crate::lattice::enumerate_bonds_on;
use crate::linalg::inverse;
use crate::polyhedron::LinearConstraint;
use crate::scalar::{ceil_q, floor_q, half, q, q_frac, to_i64, Q};

use super::cell::{cell_geometry, CellGeometry};
use super::{active_subgraph, dee, LevelVector, TilingParams};

/// A facet inequality `x(X) ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileFacet {
    pub set: VertexSet,
    pub bound: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    /// Normalized: zero at the first vertex.
    pub f: ZeroCochain<i64>,
    pub level: LevelVector,
    pub active: Vec<bool>,
    pub center: ZeroCochain<Q>,
    /// One per bond of the active subgraph.
    pub facets: Vec<TileFacet>,
}

impl Tile {
    /// `x` is assumed to lie in `H_0`.
    pub fn contains(&self, x: &ZeroCochain<Q>) -> bool {
        self.facets.iter().all(|h| x.sum_over(h.set) <= h.bound)
    }

    pub fn contains_in_interior(&self, x: &ZeroCochain<Q>) -> bool {
        self.facets.iter().all(|h| x.sum_over(h.set) < h.bound)
    }

    /// The facet system as constraints on all vertex coordinates; callers add
    /// the sum-zero equation.
    pub fn constraints(&self, n: usize) -> Vec<LinearConstraint> {
        self.facets
            .iter()
            .map(|h| {
                let coeffs = (0..n)
                    .map(|v| if h.set >> v & 1 == 1 { q(1) } else { Q::zero() })
                    .collect();
                LinearConstraint::le(coeffs, h.bound.clone())
            })
            .collect()
    }

    /// Cell geometry of the active subgraph; vertices translate by the center.
    pub fn geometry(&self, g: &Graph) -> Result<CellGeometry> {
        let (sub, _) = g.spanning_subgraph(&self.active)?;
        cell_geometry(&sub)
    }

    pub fn vertices(&self, g: &Graph) -> Result<Vec<ZeroCochain<Q>>> {
        let (sub, _) = g.spanning_subgraph(&self.active)?;
        let cell = cell_geometry(&sub)?;
        Ok(cell
            .vertices_h0(&sub)
            .into_iter()
            .map(|v| ZeroCochain(v.0.iter().zip(&self.center.0).map(|(a, c)| a + c).collect()))
            .collect())
    }
}

/// `x(V) = 0`.
pub(crate) fn h0_constraint(n: usize) -> LinearConstraint {
    LinearConstraint::eq(vec![q(1); n], Q::zero())
}

type BondSides = Vec<(VertexSet, i64)>;

#[derive(Default)]
struct BondCache(HashMap<Vec<bool>, BondSides>);

impl BondCache {
    fn get(&mut self, g: &Graph, active: &[bool]) -> Result<&BondSides> {
        if !self.0.contains_key(active) {
            let sides = enumerate_bonds_on(g, active)?
                .into_iter()
                .map(|b| (b.set, b.norm_sq))
                .collect();
            self.0.insert(active.to_vec(), sides);
        }
        Ok(&self.0[active])
    }
}

fn normalized(f: &ZeroCochain<i64>) -> ZeroCochain<i64> {
    let base = f.0.first().copied().unwrap_or(0);
    ZeroCochain(f.0.iter().map(|v| v - base).collect())
}

fn build_with(g: &Graph, params: &TilingParams, f: &ZeroCochain<i64>, cache: &mut BondCache) -> Result<Tile> {
    if f.len() != g.vertex_count() {
        return Err(Error::Validation(format!(
            "f needs {} entries, got {}",
            g.vertex_count(),
            f.len()
        )));
    }
    let f = normalized(f);
    let level = dee(g, params, &f, 1);
    let active = active_subgraph(g, &level);
    if !active.is_connected() {
        return Err(Error::NotATile);
    }
    let halves = OneCochain(level.0.iter().map(|&v| half(v)).collect());
    let center = apply_d_star(g, &halves);
    let facets = cache
        .get(g, &active.edges)?
        .iter()
        .map(|&(set, norm_sq)| TileFacet {
            set,
            bound: center.sum_over(set) + q_frac(norm_sq, 2),
        })
        .collect();
    Ok(Tile {
        f,
        level,
        active: active.edges,
        center,
        facets,
    })
}

/// `f` is normalized to vanish at the first vertex.
pub fn build_tile(g: &Graph, params: &TilingParams, f: &ZeroCochain<i64>) -> Result<Tile> {
    build_with(g, params, f, &mut BondCache::default())
}

/// Rigorous bound on the tiles that can contain a point.
///
/// A tile of `f` containing `x` forces `L_W f = x − d*(W𝔪) − d*(ξ)` with
/// `W = diag(1/ℓ)` and `|ξ_e| ≤ 1`. Grounding at the first vertex, each
/// `f(v)` lies within `R(v) = Σ_e |K(v, head e) − K(v, tail e)|` of the
/// solution for `ξ = 0`, where `K` inverts the grounded weighted Laplacian.
#[derive(Clone, Debug)]
pub struct CoveringBound {
    /// Rows and columns indexed by vertices `1..n`.
    k: Vec<Vec<Q>>,
    radius: Vec<Q>,
    shift: ZeroCochain<Q>,
}

impl CoveringBound {
    pub fn new(g: &Graph, params: &TilingParams) -> Self {
        let n = g.vertex_count();
        let mut lap = vec![vec![Q::zero(); n]; n];
        for (e, ed) in g.edges().iter().enumerate() {
            let w = q_frac(1, params.lengths[e]);
            lap[ed.head][ed.head] += &w;
            lap[ed.tail][ed.tail] += &w;
            lap[ed.head][ed.tail] -= &w;
            lap[ed.tail][ed.head] -= &w;
        }
        let reduced: Vec<Vec<Q>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
        let k = inverse(&reduced).expect("grounded Laplacian of a connected graph is invertible");
        let entry = |v: usize, w: usize| if w == 0 { Q::zero() } else { k[v - 1][w - 1].clone() };
        let radius = (1..n)
            .map(|v| {
                g.edges()
                    .iter()
                    .fold(Q::zero(), |acc, ed| acc + (entry(v, ed.head) - entry(v, ed.tail)).abs())
            })
            .collect();
        let wm = OneCochain(
            (0..g.edge_count())
                .map(|e| q_frac(params.twist.0[e], params.lengths[e]))
                .collect(),
        );
        CoveringBound {
            k,
            radius,
            shift: apply_d_star(g, &wm),
        }
    }

    /// Inclusive integer ranges for `f(v)`; the first vertex is pinned to 0.
    pub fn candidate_box(&self, x: &ZeroCochain<Q>) -> Vec<(i64, i64)> {
        let b: Vec<Q> = x.0[1..].iter().zip(&self.shift.0[1..]).map(|(a, s)| a - s).collect();
        let mut out = vec![(0, 0)];
        for (row, r) in self.k.iter().zip(&self.radius) {
            let f0 = row.iter().zip(&b).fold(Q::zero(), |acc, (kv, bv)| acc + kv * bv);
            let lo = to_i64(&ceil_q(&(&f0 - r))).expect("candidate range fits in i64");
            let hi = to_i64(&floor_q(&(&f0 + r))).expect("candidate range fits in i64");
            out.push((lo, hi));
        }
        out
    }

    /// Smallest window guaranteed to contain every tile through `x`.
    pub fn window(&self, x: &ZeroCochain<Q>) -> i64 {
        self.candidate_box(x)
            .iter()
            .map(|&(lo, hi)| lo.abs().max(hi.abs()))
            .max()
            .unwrap_or(0)
    }
}

pub(crate) fn check_h0(g: &Graph, x: &ZeroCochain<Q>) -> Result<()> {
    if x.len() != g.vertex_count() {
        return Err(Error::Validation(format!(
            "point needs {} coordinates, got {}",
            g.vertex_count(),
            x.len()
        )));
    }
    if !x.sum().is_zero() {
        return Err(Error::Validation("point coordinates must sum to zero".into()));
    }
    Ok(())
}

fn for_each_in_box(bx: &[(i64, i64)], cur: &mut Vec<i64>, visit: &mut impl FnMut(&[i64]) -> Result<()>) -> Result<()> {
    if cur.len() == bx.len() {
        return visit(cur);
    }
    let (lo, hi) = bx[cur.len()];
    for v in lo..=hi {
        cur.push(v);
        for_each_in_box(bx, cur, visit)?;
        cur.pop();
    }
    Ok(())
}

/// All tiles with `|f(v)| ≤ window` containing `x`, ordered by `f`. Fails
/// when the window cannot be shown to contain every such tile.
pub fn locate_point(g: &Graph, params: &TilingParams, x: &ZeroCochain<Q>, window: i64) -> Result<Vec<Tile>> {
    check_h0(g, x)?;
    let bound = CoveringBound::new(g, params);
    let bx = bound.candidate_box(x);
    if bx.iter().any(|&(lo, hi)| lo < -window || hi > window) {
        return Err(Error::WindowTooSmall(format!(
            "window {window} is below the covering bound {}",
            bound.window(x)
        )));
    }
    let mut cache = BondCache::default();
    let mut out = Vec::new();
    for_each_in_box(&bx, &mut Vec::new(), &mut |f| {
        match build_with(g, params, &ZeroCochain(f.to_vec()), &mut cache) {
            Ok(t) if t.contains(x) => out.push(t),
            Ok(_) | Err(Error::NotATile) => {}
            Err(e) => return Err(e),
        }
        Ok(())
    })?;
    if out.is_empty() {
        return Err(Error::WindowTooSmall("no tile contains the point".into()));
    }
    Ok(out)
}

/// Every tile with `|f(v)| ≤ window`, with a spatial index on centers.
#[derive(Clone, Debug)]
pub struct TileCatalog {
    tiles: Vec<Tile>,
    window: i64,
    /// Bucket of `⌊center(v)⌋` over vertices `1..n`.
    grid: HashMap<Vec<i64>, Vec<usize>>,
    /// A tile lies within `deg(v)/2` of its center in coordinate `v`.
    reach: Vec<Q>,
}

impl TileCatalog {
    pub fn new(g: &Graph, params: &TilingParams, window: i64) -> Result<Self> {
        let n = g.vertex_count();
        let mut bx = vec![(0, 0)];
        bx.extend(std::iter::repeat_n((-window, window), n - 1));
        let mut cache = BondCache::default();
        let mut tiles = Vec::new();
        for_each_in_box(&bx, &mut Vec::new(), &mut |f| {
            match build_with(g, params, &ZeroCochain(f.to_vec()), &mut cache) {
                Ok(t) => tiles.push(t),
                Err(Error::NotATile) => {}
                Err(e) => return Err(e),
            }
            Ok(())
        })?;
        let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            grid.entry(bucket(&t.center)).or_default().push(i);
        }
        let reach = (0..n).map(|v| q_frac(g.degree(v) as i64, 2)).collect();
        Ok(TileCatalog {
            tiles,
            window,
            grid,
            reach,
        })
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn get(&self, f: &ZeroCochain<i64>) -> Option<&Tile> {
        let f = normalized(f);
        self.tiles.iter().find(|t| t.f == f)
    }

    /// Catalog tiles containing `x`, ordered by `f`. Only complete when the
    /// covering bound of `x` fits in the window.
    pub fn locate(&self, x: &ZeroCochain<Q>) -> Vec<&Tile> {
        let ranges: Vec<(i64, i64)> = x.0[1..]
            .iter()
            .zip(&self.reach[1..])
            .map(|(xv, r)| {
                let lo = to_i64(&floor_q(&(xv - r))).expect("bucket fits in i64");
                let hi = to_i64(&floor_q(&(xv + r))).expect("bucket fits in i64");
                (lo, hi)
            })
            .collect();
        let mut hits: Vec<usize> = Vec::new();
        let _ = for_each_in_box(&ranges, &mut Vec::new(), &mut |key| {
            if let Some(ids) = self.grid.get(key) {
                hits.extend(ids.iter().copied().filter(|&i| self.tiles[i].contains(x)));
            }
            Ok(())
        });
        hits.sort_unstable();
        hits.into_iter().map(|i| &self.tiles[i]).collect()
    }
}

fn bucket(center: &ZeroCochain<Q>) -> Vec<i64> {
    center.0[1..]
        .iter()
        .map(|c| to_i64(&floor_q(c)).expect("bucket fits in i64"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2_len2() -> (Graph, TilingParams) {
        let g = Graph::path(2);
        let p = TilingParams::new(&g, vec![2], OneCochain(vec![0])).unwrap();
        (g, p)
    }

    fn pt(v: &[Q]) -> ZeroCochain<Q> {
        ZeroCochain(v.to_vec())
    }

    #[test]
    fn origin_tile_of_a_segment() {
        let (g, p) = p2_len2();
        let t = build_tile(&g, &p, &ZeroCochain(vec![0, 0])).unwrap();
        assert!(t.center.0.iter().all(Zero::is_zero));
        let mut bounds: Vec<Q> = t.facets.iter().map(|h| h.bound.clone()).collect();
        bounds.sort();
        assert_eq!(bounds, vec![q_frac(1, 2), q_frac(1, 2)]);
        assert_eq!(
            build_tile(&g, &p, &ZeroCochain(vec![0, 1])),
            Err(Error::NotATile)
        );
    }

    #[test]
    fn k3_origin_tile_is_the_cell() {
        let g = Graph::complete(3);
        let t = build_tile(&g, &TilingParams::unit(&g), &ZeroCochain(vec![0, 0, 0])).unwrap();
        let cell = cell_geometry(&g).unwrap();
        let mut a = t.vertices(&g).unwrap();
        let mut b = cell.vertices_h0(&g);
        a.sort_by(|x, y| x.0.cmp(&y.0));
        b.sort_by(|x, y| x.0.cmp(&y.0));
        assert_eq!(a, b);
    }

    #[test]
    fn locate_examples() {
        let (g, p) = p2_len2();
        let inner = pt(&[q_frac(-3, 10), q_frac(3, 10)]);
        let found = locate_point(&g, &p, &inner, 3).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].f.0, vec![0, 0]);

        let edge = pt(&[q_frac(-1, 2), q_frac(1, 2)]);
        let fs: Vec<Vec<i64>> = locate_point(&g, &p, &edge, 3)
            .unwrap()
            .into_iter()
            .map(|t| t.f.0)
            .collect();
        assert_eq!(fs, vec![vec![0, 0], vec![0, 2]]);
    }

    #[test]
    fn center_is_located_uniquely() {
        let g = Graph::complete(3);
        let p = TilingParams::new(&g, vec![1, 2, 3], OneCochain(vec![1, -2, 0])).unwrap();
        let t = (-3..=3)
            .flat_map(|a| (-3..=3).map(move |b| ZeroCochain(vec![0, a, b])))
            .filter_map(|f| build_tile(&g, &p, &f).ok())
            .find(|t| t.f.0 != vec![0, 0, 0])
            .unwrap();
        let found = locate_point(&g, &p, &t.center, 20).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].f, t.f);
    }

    #[test]
    fn small_window_is_an_error() {
        let (g, p) = p2_len2();
        let far = pt(&[q(-9), q(9)]);
        assert!(matches!(locate_point(&g, &p, &far, 1), Err(Error::WindowTooSmall(_))));
        assert!(locate_point(&g, &p, &far, 40).is_ok());
    }

    #[test]
    fn rejects_points_off_h0() {
        let (g, p) = p2_len2();
        assert!(matches!(
            locate_point(&g, &p, &pt(&[q(1), q(1)]), 3),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn catalog_agrees_with_locate() {
        let g = Graph::cycle(4);
        let p = TilingParams::new(&g, vec![1, 2, 1, 3], OneCochain(vec![0, 1, -1, 2])).unwrap();
        let bound = CoveringBound::new(&g, &p);
        let samples = [
            vec![q_frac(1, 3), q_frac(-1, 2), q_frac(2, 7), q_frac(-5, 42)],
            vec![q(1), q(0), q(-1), q(0)],
            vec![q_frac(1, 2), q_frac(1, 2), q_frac(-1, 2), q_frac(-1, 2)],
        ];
        let window = samples.iter().map(|s| bound.window(&pt(s))).max().unwrap();
        let cat = TileCatalog::new(&g, &p, window).unwrap();
        for s in samples {
            let x = pt(&s);
            let a: Vec<_> = locate_point(&g, &p, &x, window).unwrap().into_iter().map(|t| t.f).collect();
            let b: Vec<_> = cat.locate(&x).into_iter().map(|t| t.f.clone()).collect();
            assert_eq!(a, b);
        }
    }
}
