//! Spanning trees, fundamental cycles and simple oriented cycles.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, OneCochain, OrientedEdge, UnionFind};

/// A closed walk without repeated vertices, as its oriented edges in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedCycle {
    pub edges: Vec<OrientedEdge>,
}

impl OrientedCycle {
    pub fn cochain(&self, edge_count: usize) -> OneCochain<i64> {
        let mut c = vec![0; edge_count];
        for oe in &self.edges {
            c[oe.edge] += oe.sign();
        }
        OneCochain(c)
    }

    pub fn reversed(&self) -> Self {
        OrientedCycle {
            edges: self.edges.iter().rev().map(|oe| oe.reversed()).collect(),
        }
    }

    pub fn contains(&self, oe: OrientedEdge) -> bool {
        self.edges.contains(&oe)
    }

    pub fn edge_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().map(|oe| oe.edge).collect();
        v.sort_unstable();
        v
    }

    pub fn label(&self, g: &Graph) -> String {
        let parts: Vec<String> = self.edges.iter().map(|&oe| g.oriented_label(oe)).collect();
        format!("[{}]", parts.join(" "))
    }

    /// Whether the smallest edge of the cycle is traversed in its reference
    /// direction; exactly one of the two orientations has this property.
    pub fn is_canonical(&self) -> bool {
        self.edges
            .iter()
            .min_by_key(|oe| oe.edge)
            .is_some_and(|oe| oe.forward)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalCycle {
    /// The non-tree edge, traversed forward.
    pub edge: usize,
    pub cycle: OrientedCycle,
    pub cochain: OneCochain<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSpace {
    pub tree: Vec<usize>,
    pub in_tree: Vec<bool>,
    /// One per non-tree edge, in edge order; a basis of the cycle space.
    pub fundamental: Vec<FundamentalCycle>,
    /// Every simple cycle in both orientations, sorted by edge indices.
    pub simple: Vec<OrientedCycle>,
}

impl CycleSpace {
    pub fn rank(&self) -> usize {
        self.fundamental.len()
    }

    /// Index of the fundamental cycle of a non-tree edge.
    pub fn fundamental_index(&self, edge: usize) -> Option<usize> {
        self.fundamental.iter().position(|c| c.edge == edge)
    }
}

/// Greedy spanning tree: edges in index order, skipping those closing a cycle.
pub fn default_tree(g: &Graph) -> Vec<usize> {
    let mut uf = UnionFind::new(g.vertex_count());
    (0..g.edge_count())
        .filter(|&e| uf.union(g.edge(e).tail, g.edge(e).head))
        .collect()
}

pub fn cycle_space(g: &Graph) -> CycleSpace {
    cycle_space_with_tree(g, &default_tree(g)).expect("default tree is spanning")
}

pub fn cycle_space_with_tree(g: &Graph, tree: &[usize]) -> Result<CycleSpace> {
    let mut in_tree = vec![false; g.edge_count()];
    let mut uf = UnionFind::new(g.vertex_count());
    for &e in tree {
        if e >= g.edge_count() || in_tree[e] {
            return Err(Error::Validation(format!("bad tree edge index {e}")));
        }
        in_tree[e] = true;
        if !uf.union(g.edge(e).tail, g.edge(e).head) {
            return Err(Error::Validation(format!(
                "tree edge {} closes a cycle",
                g.edge_name(e)
            )));
        }
    }
    if tree.len() + 1 != g.vertex_count() {
        return Err(Error::Validation("tree does not span the graph".into()));
    }
    let mut tree_sorted = tree.to_vec();
    tree_sorted.sort_unstable();
    let fundamental = (0..g.edge_count())
        .filter(|&e| !in_tree[e])
        .map(|e| {
            let mut edges = vec![OrientedEdge::forward(e)];
            edges.extend(tree_path(g, &in_tree, g.edge(e).head, g.edge(e).tail));
            let cycle = OrientedCycle { edges };
            FundamentalCycle {
                edge: e,
                cochain: cycle.cochain(g.edge_count()),
                cycle,
            }
        })
        .collect();
    Ok(CycleSpace {
        tree: tree_sorted,
        in_tree,
        fundamental,
        simple: simple_cycles(g, &vec![true; g.edge_count()]),
    })
}

/// Oriented edges of the unique tree path from `from` to `to`.
fn tree_path(g: &Graph, in_tree: &[bool], from: usize, to: usize) -> Vec<OrientedEdge> {
    let n = g.vertex_count();
    let mut prev: Vec<Option<OrientedEdge>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for e in (0..g.edge_count()).filter(|&e| in_tree[e]) {
            for oe in [OrientedEdge::forward(e), OrientedEdge::backward(e)] {
                let w = g.head(oe);
                if g.tail(oe) == v && !seen[w] {
                    seen[w] = true;
                    prev[w] = Some(oe);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let oe = prev[v].expect("tree spans the graph");
        path.push(oe);
        v = g.tail(oe);
    }
    path.reverse();
    path
}

/// All simple oriented cycles of the spanning subgraph on the kept edges,
/// both orientations, sorted by (edge indices, cochain).
pub fn simple_cycles(g: &Graph, keep: &[bool]) -> Vec<OrientedCycle> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        on_path[s] = true;
        extend_cycles(g, keep, s, s, &mut path, &mut on_path, &mut out);
        on_path[s] = false;
    }
    let m = g.edge_count();
    out.sort_by_cached_key(|c| (c.edge_indices(), c.cochain(m).0));
    out
}

fn extend_cycles(
    g: &Graph,
    keep: &[bool],
    start: usize,
    at: usize,
    path: &mut Vec<OrientedEdge>,
    on_path: &mut [bool],
    out: &mut Vec<OrientedCycle>,
) {
    for e in 0..g.edge_count() {
        if !keep[e] || path.iter().any(|oe| oe.edge == e) {
            continue;
        }
        for oe in [OrientedEdge::forward(e), OrientedEdge::backward(e)] {
            if g.tail(oe) != at {
                continue;
            }
            let w = g.head(oe);
            if w == start {
                let mut edges = path.clone();
                edges.push(oe);
                out.push(OrientedCycle { edges });
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(oe);
                extend_cycles(g, keep, start, w, path, on_path, out);
                path.pop();
                on_path[w] = false;
            }
        }
    }
}

/// One orientation per undirected simple cycle (the canonical one).
pub fn undirected_cycles(g: &Graph, keep: &[bool]) -> Vec<OrientedCycle> {
    simple_cycles(g, keep)
        .into_iter()
        .filter(OrientedCycle::is_canonical)
        .collect()
}
