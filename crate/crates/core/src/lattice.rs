//! Bonds, the lattice index, and the two constructive flow results.

use num_bigint::BigInt;
use num_traits::One;

use crate::cycles::simple_cycles;
use crate::error::{Error, Result};
use crate::graph::{
    contains, cut_element, members, positive_support, Graph, OneCochain, OrientedEdge, VertexSet,
    ZeroCochain,
};
use crate::linalg::{det_bareiss, smith_invariants};

/// Largest vertex count for which subset enumeration is attempted.
pub const SUBSET_CAP: usize = 20;

pub(crate) fn check_cap(g: &Graph, what: &'static str, cap: usize) -> Result<()> {
    if g.vertex_count() > cap {
        return Err(Error::TooLarge {
            what,
            cap,
            got: g.vertex_count(),
        });
    }
    Ok(())
}

/// A cut element `d(χ_X)` with both sides of the cut connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bond {
    pub set: VertexSet,
    pub cochain: OneCochain<i64>,
    pub norm_sq: i64,
}

impl Bond {
    /// The edges entering `X`.
    pub fn positive_support(&self) -> Vec<OrientedEdge> {
        positive_support(&self.cochain)
    }

    pub fn vertices(&self, n: usize) -> Vec<usize> {
        members(self.set, n)
    }
}

pub fn enumerate_bonds(g: &Graph) -> Result<Vec<Bond>> {
    enumerate_bonds_on(g, &vec![true; g.edge_count()])
}

/// Bonds of the spanning subgraph on the kept edges; cochains vanish on the
/// other edges.
pub fn enumerate_bonds_on(g: &Graph, keep: &[bool]) -> Result<Vec<Bond>> {
    check_cap(g, "bond enumeration", SUBSET_CAP)?;
    let n = g.vertex_count();
    let full: VertexSet = (1 << n) - 1;
    let mut out: Vec<Bond> = Vec::new();
    for x in 1..full {
        if !g.induces_connected(x, keep) || !g.induces_connected(full ^ x, keep) {
            continue;
        }
        let mut c = cut_element(g, x);
        for (v, &k) in c.0.iter_mut().zip(keep) {
            if !k {
                *v = 0;
            }
        }
        if out.iter().any(|b| b.cochain == c) {
            continue;
        }
        let norm_sq = c.0.iter().map(|v| v * v).sum();
        out.push(Bond {
            set: x,
            cochain: c,
            norm_sq,
        });
    }
    Ok(out)
}

pub fn laplacian_matrix(g: &Graph) -> Vec<Vec<BigInt>> {
    let n = g.vertex_count();
    let mut m = vec![vec![BigInt::from(0); n]; n];
    for e in g.edges() {
        m[e.tail][e.tail] += 1;
        m[e.head][e.head] += 1;
        m[e.tail][e.head] -= 1;
        m[e.head][e.tail] -= 1;
    }
    m
}

/// Kirchhoff: a principal `(|V|−1)`-minor of the Laplacian matrix.
pub fn spanning_tree_count(g: &Graph) -> BigInt {
    let m: Vec<Vec<BigInt>> = laplacian_matrix(g)
        .into_iter()
        .skip(1)
        .map(|row| row.into_iter().skip(1).collect())
        .collect();
    det_bareiss(m)
}

/// Index of the image of the Laplacian in the sum-zero integer vectors: the
/// product of the nonzero invariant factors of the Laplacian matrix.
pub fn laplacian_lattice_index(g: &Graph) -> BigInt {
    smith_invariants(laplacian_matrix(g))
        .into_iter()
        .fold(BigInt::one(), |a, d| a * d)
}

/// Invariant factors of the cokernel torsion (the critical group).
pub fn critical_group(g: &Graph) -> Vec<BigInt> {
    smith_invariants(laplacian_matrix(g))
        .into_iter()
        .filter(|d| !d.is_one())
        .collect()
}

/// An `η` with `|η_e| ≤ h(e)` whose sum over every cycle equals that of `β`.
///
/// Shrinks `h` one unit at a time on the lowest-index edge that lies on no
/// tight cycle, then reads `η = ±h` off the oriented edges of tight cycles.
pub fn bounded_flow(g: &Graph, beta: &OneCochain<i64>, h: &[i64]) -> Result<OneCochain<i64>> {
    let m = g.edge_count();
    if beta.len() != m || h.len() != m {
        return Err(Error::Validation("beta and h need one value per edge".into()));
    }
    if h.iter().any(|&v| v < 0) {
        return Err(Error::Validation("h must be nonnegative".into()));
    }
    let cycles = simple_cycles(g, &vec![true; m]);
    let sum_beta = |c: &crate::cycles::OrientedCycle| -> i64 {
        c.edges.iter().map(|&oe| beta.at(oe)).sum()
    };
    let sum_h = |c: &crate::cycles::OrientedCycle, h: &[i64]| -> i64 {
        c.edges.iter().map(|oe| h[oe.edge]).sum()
    };
    for c in &cycles {
        let (b, s) = (sum_beta(c), sum_h(c, h));
        if b.abs() > s {
            return Err(Error::Hypothesis {
                cycle: c.label(g),
                detail: format!("|{b}| exceeds the bound {s}"),
            });
        }
    }
    let betas: Vec<i64> = cycles.iter().map(sum_beta).collect();
    let mut h = h.to_vec();
    loop {
        let mut on_tight = vec![[false; 2]; m];
        for (c, &b) in cycles.iter().zip(&betas) {
            if b == sum_h(c, &h) {
                for oe in &c.edges {
                    on_tight[oe.edge][oe.forward as usize] = true;
                }
            }
        }
        if let Some(e) = (0..m).find(|&e| h[e] > 0 && on_tight[e] == [false, false]) {
            h[e] -= 1;
            continue;
        }
        let eta: Vec<i64> = (0..m)
            .map(|e| match (h[e] > 0, on_tight[e]) {
                (true, [false, true]) => h[e],
                (true, [true, false]) => -h[e],
                (true, _) => unreachable!("an edge lies on tight cycles in both directions"),
                (false, _) => 0,
            })
            .collect();
        return Ok(OneCochain(eta));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowCertificate {
    /// `d*η = h` with `η ≥ 0` on the given orientation.
    Flow(OneCochain<i64>),
    /// A cut `X` whose entering edges all lie in the orientation, with `h(X) < 0`.
    Cut(VertexSet),
}

/// Orientation lookup: `dir[e] = Some(forward)` when `D` contains that
/// orientation of `e`.
fn orientation_table(g: &Graph, d: &[OrientedEdge]) -> Result<Vec<Option<bool>>> {
    let mut dir = vec![None; g.edge_count()];
    for oe in d {
        if oe.edge >= g.edge_count() {
            return Err(Error::Validation(format!("edge index {} out of range", oe.edge)));
        }
        if dir[oe.edge].is_some() {
            return Err(Error::Validation(format!(
                "edge {} appears twice in the orientation",
                g.edge_name(oe.edge)
            )));
        }
        dir[oe.edge] = Some(oe.forward);
    }
    Ok(dir)
}

/// Whether every edge of `G[s]` entering `x` from `s − x` lies in `D`.
fn entering_edges_in_d(g: &Graph, dir: &[Option<bool>], s: VertexSet, x: VertexSet) -> bool {
    g.edges().iter().enumerate().all(|(i, e)| {
        if !contains(s, e.tail) || !contains(s, e.head) {
            return true;
        }
        match (contains(x, e.tail), contains(x, e.head)) {
            (false, true) => dir[i] == Some(true),
            (true, false) => dir[i] == Some(false),
            _ => true,
        }
    })
}

/// Either an integral `η ≥ 0` on `D` with `d*η = h`, or a cut `X` with
/// `𝔼(V−X, X) ⊆ 𝔼(D)` and `h(X) < 0`.
pub fn nonneg_flow(g: &Graph, h: &ZeroCochain<i64>, d: &[OrientedEdge]) -> Result<FlowCertificate> {
    check_cap(g, "flow search", SUBSET_CAP)?;
    let n = g.vertex_count();
    if h.len() != n {
        return Err(Error::Validation("h needs one value per vertex".into()));
    }
    if h.sum() != 0 {
        return Err(Error::Validation("h must sum to zero".into()));
    }
    let dir = orientation_table(g, d)?;
    let full: VertexSet = (1 << n) - 1;
    for x in 1..full {
        if entering_edges_in_d(g, &dir, full, x) && h.sum_over(x) < 0 {
            return Ok(FlowCertificate::Cut(x));
        }
    }
    let mut h = h.0.clone();
    let mut eta = vec![0; g.edge_count()];
    augment(g, &dir, full, &mut h, &mut eta);
    Ok(FlowCertificate::Flow(OneCochain(eta)))
}

/// Augmenting-path induction on `G[s]`: push flow from a vertex with `h < 0`
/// to one with `h > 0` along a path that never traverses the reverse of a
/// `D` edge, as far as every admissible cut allows; split on a tight cut.
fn augment(g: &Graph, dir: &[Option<bool>], s: VertexSet, h: &mut [i64], eta: &mut [i64]) {
    let n = g.vertex_count();
    loop {
        let sources: Vec<usize> = members(s, n).into_iter().filter(|&v| h[v] < 0).collect();
        if sources.is_empty() {
            return;
        }
        let (path, v, u) = admissible_path(g, dir, s, &sources, h)
            .expect("cut condition guarantees an augmenting path");
        let admissible = |x: VertexSet| x & !s == 0 && entering_edges_in_d(g, dir, s, x);
        let cut_sum = |x: VertexSet, h: &[i64]| -> i64 {
            members(x, n).iter().map(|&w| h[w]).sum()
        };
        let splitting: Vec<VertexSet> = subsets_of(s)
            .filter(|&x| contains(x, u) && !contains(x, v) && admissible(x))
            .collect();
        let eps = splitting
            .iter()
            .map(|&x| cut_sum(x, h))
            .fold(h[u].min(-h[v]), i64::min);
        for oe in &path {
            eta[oe.edge] += eps * oe.sign();
        }
        h[u] -= eps;
        h[v] += eps;
        if h[u] == 0 || h[v] == 0 {
            continue;
        }
        let x = *splitting
            .iter()
            .find(|&&x| cut_sum(x, h) == 0)
            .expect("maximal step leaves a tight cut");
        augment(g, dir, x, h, eta);
        augment(g, dir, s & !x, h, eta);
        return;
    }
}

/// Nonempty subsets of `s`.
fn subsets_of(s: VertexSet) -> impl Iterator<Item = VertexSet> {
    let mut x: VertexSet = 0;
    std::iter::from_fn(move || {
        x = x.wrapping_sub(s) & s;
        (x != 0).then_some(x)
    })
}

/// Breadth-first search from the sources; returns the first path found to a
/// vertex with `h > 0` together with its endpoints.
fn admissible_path(
    g: &Graph,
    dir: &[Option<bool>],
    s: VertexSet,
    sources: &[usize],
    h: &[i64],
) -> Option<(Vec<OrientedEdge>, usize, usize)> {
    let n = g.vertex_count();
    let mut prev: Vec<Option<OrientedEdge>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for &v in sources {
        seen[v] = true;
        queue.push_back(v);
    }
    while let Some(w) = queue.pop_front() {
        if h[w] > 0 {
            let mut path = Vec::new();
            let mut at = w;
            while let Some(oe) = prev[at] {
                path.push(oe);
                at = g.tail(oe);
            }
            path.reverse();
            return Some((path, at, w));
        }
        for e in 0..g.edge_count() {
            let edge = g.edge(e);
            if !contains(s, edge.tail) || !contains(s, edge.head) {
                continue;
            }
            for oe in [OrientedEdge::forward(e), OrientedEdge::backward(e)] {
                // The reverse of a D edge may not be traversed.
                if dir[e] == Some(!oe.forward) || g.tail(oe) != w {
                    continue;
                }
                let t = g.head(oe);
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some(oe);
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_d, apply_d_star, mask_of};

    #[test]
    fn bond_counts() {
        assert_eq!(enumerate_bonds(&Graph::complete(3)).unwrap().len(), 6);
        assert_eq!(enumerate_bonds(&Graph::path(2)).unwrap().len(), 2);
        // Path segments of C4: 4 singletons, 4 adjacent pairs, 4 triples.
        assert_eq!(enumerate_bonds(&Graph::cycle(4)).unwrap().len(), 12);
        assert_eq!(enumerate_bonds(&Graph::complete(4)).unwrap().len(), 14);
    }

    #[test]
    fn bonds_are_cut_elements_with_nonempty_positive_support() {
        for g in [Graph::complete(4), Graph::cycle(5), Graph::banana(3)] {
            for b in enumerate_bonds(&g).unwrap() {
                assert!(b.cochain.0.iter().all(|v| (-1..=1).contains(v)));
                assert!(!b.positive_support().is_empty());
                assert_eq!(b.norm_sq as usize, g.cut_size(b.set, &vec![true; g.edge_count()]));
            }
        }
    }

    #[test]
    fn subgraph_bonds_ignore_dropped_edges() {
        let g = Graph::complete(3);
        let bonds = enumerate_bonds_on(&g, &[true, true, false]).unwrap();
        // The path v1 − v2 − v3 has bonds {v1}, {v3}, {v1,v2}, {v2,v3}.
        assert_eq!(bonds.len(), 4);
        assert!(bonds.iter().all(|b| b.cochain.0[2] == 0));
    }

    #[test]
    fn bond_cap() {
        let g = Graph::path(SUBSET_CAP + 1);
        assert!(matches!(enumerate_bonds(&g), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn tree_counts() {
        assert_eq!(spanning_tree_count(&Graph::path(2)), BigInt::from(1));
        assert_eq!(spanning_tree_count(&Graph::complete(3)), BigInt::from(3));
        assert_eq!(spanning_tree_count(&Graph::complete(4)), BigInt::from(16));
        assert_eq!(laplacian_lattice_index(&Graph::complete(3)), BigInt::from(3));
        assert_eq!(laplacian_lattice_index(&Graph::path(2)), BigInt::from(1));
        assert_eq!(laplacian_lattice_index(&Graph::complete(4)), BigInt::from(16));
        assert_eq!(spanning_tree_count(&Graph::path(1)), BigInt::from(1));
        assert_eq!(critical_group(&Graph::complete(4)), vec![BigInt::from(4), BigInt::from(4)]);
    }

    #[test]
    fn bounded_flow_examples() {
        let k3 = Graph::complete(3);
        let eta = bounded_flow(&k3, &OneCochain(vec![1, 1, -1]), &[1, 1, 1]).unwrap();
        assert_eq!(eta.0, vec![1, 1, -1]);
        let beta = apply_d(&k3, &ZeroCochain(vec![0i64, 4, -3]));
        assert_eq!(bounded_flow(&k3, &beta, &[0, 0, 0]).unwrap().0, vec![0, 0, 0]);
        let err = bounded_flow(&k3, &OneCochain(vec![2, 2, 0]), &[1, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { .. }));
    }

    #[test]
    fn nonneg_flow_examples() {
        let p2 = Graph::path(2);
        let d = [OrientedEdge::forward(0)];
        assert_eq!(
            nonneg_flow(&p2, &ZeroCochain(vec![-1, 1]), &d).unwrap(),
            FlowCertificate::Flow(OneCochain(vec![1]))
        );
        assert_eq!(
            nonneg_flow(&p2, &ZeroCochain(vec![1, -1]), &d).unwrap(),
            FlowCertificate::Cut(mask_of(&[1]))
        );
        let k3 = Graph::complete(3);
        assert_eq!(
            nonneg_flow(&k3, &ZeroCochain(vec![0, 0, 0]), &[]).unwrap(),
            FlowCertificate::Flow(OneCochain(vec![0, 0, 0]))
        );
        let bad = [OrientedEdge::forward(0), OrientedEdge::backward(0)];
        assert!(nonneg_flow(&p2, &ZeroCochain(vec![0, 0]), &bad).is_err());
        assert!(nonneg_flow(&p2, &ZeroCochain(vec![1, 0]), &d).is_err());
    }

    #[test]
    fn nonneg_flow_needs_splitting() {
        // Two sinks behind a cut that is exactly saturated.
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let d = [OrientedEdge::forward(1)];
        let h = ZeroCochain(vec![-2, -1, 1, 2]);
        match nonneg_flow(&g, &h, &d).unwrap() {
            FlowCertificate::Flow(eta) => {
                assert_eq!(apply_d_star(&g, &eta), h);
                assert!(eta.0[1] >= 0);
            }
            FlowCertificate::Cut(x) => panic!("unexpected cut {x:b}"),
        }
    }
}
