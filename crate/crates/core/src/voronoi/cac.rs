//! Coherent acyclic orientations of cut subgraphs.

use std::collections::{BTreeSet, HashSet};

use crate::error::Result;
use crate::graph::{Graph, OneCochain, OrientedEdge};
use crate::lattice::check_cap;

/// Ordered partitions grow like the Fubini numbers; 7 vertices give 47293.
pub const PARTITION_CAP: usize = 7;

/// An orientation of the edges crossing an ordered vertex partition, from
/// lower to higher parts. Equality compares only the oriented edge set.
#[derive(Clone, Debug)]
pub struct CacOrientation {
    /// Sorted; never holds both directions of an edge.
    pub edges: Vec<OrientedEdge>,
    /// Components of the kept graph minus the oriented edges, in the
    /// lexicographically least order compatible with the orientation.
    pub partition: Vec<Vec<usize>>,
}

impl PartialEq for CacOrientation {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
    }
}

impl Eq for CacOrientation {}

impl std::hash::Hash for CacOrientation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.edges.hash(state);
    }
}

impl CacOrientation {
    /// The orientation induced by an ordered partition on the kept edges.
    pub fn from_ordered_partition(g: &Graph, keep: &[bool], parts: &[Vec<usize>]) -> Self {
        let mut rank = vec![usize::MAX; g.vertex_count()];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                rank[v] = i;
            }
        }
        let mut edges: Vec<OrientedEdge> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| keep[e])
            .filter_map(|(e, ed)| match rank[ed.tail].cmp(&rank[ed.head]) {
                std::cmp::Ordering::Less => Some(OrientedEdge::forward(e)),
                std::cmp::Ordering::Greater => Some(OrientedEdge::backward(e)),
                std::cmp::Ordering::Equal => None,
            })
            .collect();
        edges.sort();
        let partition = canonical_partition(g, keep, &edges)
            .expect("an ordered partition induces a coherent orientation");
        CacOrientation { edges, partition }
    }

    /// Recognizes an oriented edge set as a coherent acyclic orientation of a
    /// cut subgraph of the kept graph.
    pub fn from_edges(g: &Graph, keep: &[bool], mut edges: Vec<OrientedEdge>) -> Option<Self> {
        edges.sort();
        edges.dedup();
        if edges.windows(2).any(|w| w[0].edge == w[1].edge) || edges.iter().any(|oe| !keep[oe.edge]) {
            return None;
        }
        let partition = canonical_partition(g, keep, &edges)?;
        Some(CacOrientation { edges, partition })
    }

    pub fn empty(g: &Graph) -> Self {
        CacOrientation {
            edges: Vec::new(),
            partition: vec![(0..g.vertex_count()).collect()],
        }
    }

    pub fn contains(&self, oe: OrientedEdge) -> bool {
        self.edges.binary_search(&oe).is_ok()
    }

    /// Whether every edge of `self` also lies in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.edges.iter().all(|&oe| other.contains(oe))
    }

    /// Underlying undirected edges.
    pub fn edge_mask(&self, m: usize) -> Vec<bool> {
        let mut mask = vec![false; m];
        for oe in &self.edges {
            mask[oe.edge] = true;
        }
        mask
    }

    /// `+1` on edges oriented forward, `-1` on edges oriented backward.
    pub fn chi(&self, m: usize) -> OneCochain<i64> {
        let mut c = OneCochain::zeros(m);
        for oe in &self.edges {
            c.0[oe.edge] = oe.sign();
        }
        c
    }

    pub fn labels(&self, g: &Graph) -> Vec<String> {
        self.edges.iter().map(|&oe| g.oriented_label(oe)).collect()
    }
}

/// Components of `keep − E(D)` ordered topologically, smallest available
/// component first. `None` if some kept edge between distinct components is
/// missing from `D`, if a `D` edge lies inside a component, or if the
/// component graph has a directed cycle.
fn canonical_partition(g: &Graph, keep: &[bool], d: &[OrientedEdge]) -> Option<Vec<Vec<usize>>> {
    let mut rest = keep.to_vec();
    for oe in d {
        rest[oe.edge] = false;
    }
    let comps = g.components_of(&rest);
    let mut comp_of = vec![0; g.vertex_count()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let k = comps.len();
    let mut succ = vec![BTreeSet::new(); k];
    let mut indeg = vec![0usize; k];
    for (e, &kept) in keep.iter().enumerate() {
        let (a, b) = (comp_of[g.edge(e).tail], comp_of[g.edge(e).head]);
        let oriented = !rest[e] && kept;
        if a == b {
            if oriented {
                return None;
            }
            continue;
        }
        if !kept {
            continue;
        }
        let oe = d.iter().find(|oe| oe.edge == e)?;
        let (from, to) = if oe.forward { (a, b) } else { (b, a) };
        if succ[from].insert(to) {
            indeg[to] += 1;
        }
    }
    // Components come sorted by least vertex, so index order is lexicographic.
    let mut ready: BTreeSet<usize> = (0..k).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(&c) = ready.iter().next() {
        ready.remove(&c);
        order.push(c);
        for &s in &succ[c] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                ready.insert(s);
            }
        }
    }
    (order.len() == k).then(|| order.into_iter().map(|c| comps[c].clone()).collect())
}

/// CAC elements ordered by reverse inclusion of oriented edge sets.
#[derive(Clone, Debug)]
pub struct CacPoset {
    /// Sorted by size of the edge set, then lexicographically.
    pub elements: Vec<CacOrientation>,
}

impl CacPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `i ⪯ j` iff the edges of `j` are contained in those of `i`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.elements[j].is_subset_of(&self.elements[i])
    }

    pub fn index_of(&self, edges: &[OrientedEdge]) -> Option<usize> {
        self.elements.iter().position(|d| d.edges == edges)
    }

    /// Minimal elements: orientations of every edge of the graph.
    pub fn minimal(&self, edge_count: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.elements[i].edges.len() == edge_count)
            .collect()
    }
}

pub fn enumerate_cac(g: &Graph) -> Result<CacPoset> {
    check_cap(g, "CAC enumeration", PARTITION_CAP)?;
    let n = g.vertex_count();
    let keep = vec![true; g.edge_count()];
    let mut seen: HashSet<Vec<OrientedEdge>> = HashSet::new();
    let mut elements = Vec::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    ordered_partitions((1u64 << n) - 1, &mut parts, &mut |parts| {
        let d = CacOrientation::from_ordered_partition(g, &keep, parts);
        if seen.insert(d.edges.clone()) {
            elements.push(d);
        }
    });
    elements.sort_by(|a, b| (a.edges.len(), &a.edges).cmp(&(b.edges.len(), &b.edges)));
    Ok(CacPoset { elements })
}

fn ordered_partitions(rest: u64, parts: &mut Vec<Vec<usize>>, visit: &mut impl FnMut(&[Vec<usize>])) {
    if rest == 0 {
        visit(parts);
        return;
    }
    let mut block = rest;
    loop {
        parts.push((0..64).filter(|&v| block >> v & 1 == 1).collect());
        ordered_partitions(rest & !block, parts, visit);
        parts.pop();
        block = (block - 1) & rest;
        if block == 0 {
            break;
        }
    }
}
