//! Graphs with a reference orientation, cochains, and the differentials `d`, `d*`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};

/// Scalars cochains can take values in: `i64`, `BigInt`, `BigRational`.
pub trait Scalar:
    Clone + PartialEq + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Zero + Add<Output = T> + Sub<Output = T> + Neg<Output = T> + Mul<Output = T>
{
}

/// A vertex subset as a bitmask. Subset enumeration is only offered for
/// graphs small enough that this fits.
pub type VertexSet = u64;

pub const MAX_MASK_VERTICES: usize = 63;

pub fn mask_of(vertices: &[usize]) -> VertexSet {
    vertices.iter().fold(0, |m, &v| m | (1 << v))
}

pub fn members(mask: VertexSet, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn contains(mask: VertexSet, v: usize) -> bool {
    mask >> v & 1 == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

/// An edge together with a direction; `forward` is the reference orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl OrientedEdge {
    pub fn forward(edge: usize) -> Self {
        OrientedEdge { edge, forward: true }
    }

    pub fn backward(edge: usize) -> Self {
        OrientedEdge { edge, forward: false }
    }

    pub fn reversed(self) -> Self {
        OrientedEdge {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    /// `+1` for the reference orientation, `-1` for its reverse.
    pub fn sign(self) -> i64 {
        if self.forward {
            1
        } else {
            -1
        }
    }
}

/// A connected loopless multigraph. The stored direction of each edge is its
/// reference orientation; indices never change after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(vertex_names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let edge_names = (1..=edges.len()).map(|i| format!("e{i}")).collect();
        Self::with_edge_names(vertex_names, edges, edge_names)
    }

    pub fn with_edge_names(
        vertex_names: Vec<String>,
        edges: Vec<Edge>,
        edge_names: Vec<String>,
    ) -> Result<Self> {
        if vertex_names.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if edge_names.len() != edges.len() {
            return Err(Error::InvalidGraph("edge name count mismatch".into()));
        }
        check_unique(&vertex_names, "vertex")?;
        check_unique(&edge_names, "edge")?;
        let n = vertex_names.len();
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= n || e.head >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {} has an endpoint out of range",
                    edge_names[i]
                )));
            }
            if e.tail == e.head {
                return Err(Error::InvalidGraph(format!(
                    "edge {} is a self loop at {}",
                    edge_names[i], vertex_names[e.tail]
                )));
            }
        }
        let g = Graph {
            vertex_names,
            edge_names,
            edges,
        };
        if !g.is_connected_on(&vec![true; g.edge_count()]) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Vertices named `v1..vn`, edges `e1..em` in the given order.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let names = (1..=n).map(|i| format!("v{i}")).collect();
        let edges = edges
            .iter()
            .map(|&(tail, head)| Edge { tail, head })
            .collect();
        Self::new(names, edges)
    }

    /// The path `v1 → v2 → … → vn`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Self::from_edge_list(n, &edges).expect("paths are connected")
    }

    /// The cycle `v1 → v2 → … → vn → v1`, `n ≥ 3`.
    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, n - 1));
        Self::from_edge_list(n, &edges).expect("cycles are connected")
    }

    /// Complete graph with edges `vi → vj` for `i < j`, ordered by `j − i`
    /// and then by `i`, so the path `v1 → … → vn` comes first.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for gap in 1..n {
            for i in 0..n - gap {
                edges.push((i, i + gap));
            }
        }
        Self::from_edge_list(n, &edges).expect("complete graphs are connected")
    }

    /// Two vertices joined by `k` parallel edges, all oriented `v1 → v2`.
    pub fn banana(k: usize) -> Self {
        Self::from_edge_list(2, &vec![(0, 1); k]).expect("k ≥ 1 parallel edges")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    pub fn tail(&self, oe: OrientedEdge) -> usize {
        let e = self.edges[oe.edge];
        if oe.forward {
            e.tail
        } else {
            e.head
        }
    }

    pub fn head(&self, oe: OrientedEdge) -> usize {
        let e = self.edges[oe.edge];
        if oe.forward {
            e.head
        } else {
            e.tail
        }
    }

    /// `|E| − |V| + 1`.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.tail == v || e.head == v)
            .count()
    }

    /// Number of kept edges with exactly one endpoint in `x`.
    pub fn cut_size(&self, x: VertexSet, keep: &[bool]) -> usize {
        self.edges
            .iter()
            .zip(keep)
            .filter(|(e, &k)| k && contains(x, e.tail) != contains(x, e.head))
            .count()
    }

    /// Connected components of the spanning subgraph on the kept edges,
    /// each sorted, listed by smallest vertex.
    pub fn components_of(&self, keep: &[bool]) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut uf = UnionFind::new(n);
        for (e, &k) in self.edges.iter().zip(keep) {
            if k {
                uf.union(e.tail, e.head);
            }
        }
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..n {
            by_root.entry(uf.find(v)).or_default().push(v);
        }
        let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
        comps.sort();
        comps
    }

    pub fn is_connected_on(&self, keep: &[bool]) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        let mut parts = self.vertex_count();
        for (e, &k) in self.edges.iter().zip(keep) {
            if k && uf.union(e.tail, e.head) {
                parts -= 1;
            }
        }
        parts == 1
    }

    /// Whether the subgraph induced on `x` by the kept edges is connected.
    /// The empty set counts as disconnected.
    pub fn induces_connected(&self, x: VertexSet, keep: &[bool]) -> bool {
        let n = self.vertex_count();
        let verts = members(x, n);
        let Some(&start) = verts.first() else {
            return false;
        };
        let mut uf = UnionFind::new(n);
        for (e, &k) in self.edges.iter().zip(keep) {
            if k && contains(x, e.tail) && contains(x, e.head) {
                uf.union(e.tail, e.head);
            }
        }
        let root = uf.find(start);
        verts.iter().all(|&v| uf.find(v) == root)
    }

    /// The spanning subgraph on the kept edges as a graph of its own, with
    /// names preserved. Fails if it is disconnected.
    pub fn spanning_subgraph(&self, keep: &[bool]) -> Result<(Graph, Vec<usize>)> {
        let map: Vec<usize> = (0..self.edge_count()).filter(|&e| keep[e]).collect();
        let g = Graph::with_edge_names(
            self.vertex_names.clone(),
            map.iter().map(|&e| self.edges[e]).collect(),
            map.iter().map(|&e| self.edge_names[e].clone()).collect(),
        )?;
        Ok((g, map))
    }

    pub fn oriented_label(&self, oe: OrientedEdge) -> String {
        if oe.forward {
            self.edge_names[oe.edge].clone()
        } else {
            format!("-{}", self.edge_names[oe.edge])
        }
    }
}

/// A subgraph given by vertex and edge indices of an ambient graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Graph {
    /// Components of the spanning subgraph on the kept edges, with their edges.
    pub fn component_subgraphs(&self, keep: &[bool]) -> Vec<Subgraph> {
        self.components_of(keep)
            .into_iter()
            .map(|vertices| {
                let edges = (0..self.edge_count())
                    .filter(|&e| keep[e] && vertices.contains(&self.edges[e].tail))
                    .collect();
                Subgraph { vertices, edges }
            })
            .collect()
    }
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::InvalidGraph(format!("duplicate {what} name {n:?}")));
        }
    }
    Ok(())
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns whether the two classes were distinct.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// A function on vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroCochain<S>(pub Vec<S>);

/// A function on reference-oriented edges; the value on a reversed edge is
/// the negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneCochain<S>(pub Vec<S>);

impl<S: Scalar> ZeroCochain<S> {
    pub fn zeros(n: usize) -> Self {
        ZeroCochain(vec![S::zero(); n])
    }

    pub fn dot(&self, other: &Self) -> S {
        dot(&self.0, &other.0)
    }

    pub fn sum(&self) -> S {
        self.0.iter().cloned().fold(S::zero(), |a, b| a + b)
    }

    /// Sum of the values over a vertex subset.
    pub fn sum_over(&self, x: VertexSet) -> S {
        self.0
            .iter()
            .enumerate()
            .filter(|(v, _)| contains(x, *v))
            .fold(S::zero(), |a, (_, b)| a + b.clone())
    }
}

impl<S: Scalar> OneCochain<S> {
    pub fn zeros(m: usize) -> Self {
        OneCochain(vec![S::zero(); m])
    }

    pub fn at(&self, oe: OrientedEdge) -> S {
        let v = self.0[oe.edge].clone();
        if oe.forward {
            v
        } else {
            -v
        }
    }

    pub fn dot(&self, other: &Self) -> S {
        dot(&self.0, &other.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

impl<S> ZeroCochain<S> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S> OneCochain<S> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `d(f)(e) = f(head) − f(tail)`.
pub fn apply_d<S: Scalar>(g: &Graph, f: &ZeroCochain<S>) -> OneCochain<S> {
    OneCochain(
        g.edges
            .iter()
            .map(|e| f.0[e.head].clone() - f.0[e.tail].clone())
            .collect(),
    )
}

/// `d*(α)(v) = Σ_{head(e)=v} α(e) − Σ_{tail(e)=v} α(e)`, the adjoint of `d`.
pub fn apply_d_star<S: Scalar>(g: &Graph, alpha: &OneCochain<S>) -> ZeroCochain<S> {
    let mut out = vec![S::zero(); g.vertex_count()];
    for (e, a) in g.edges.iter().zip(&alpha.0) {
        out[e.head] = out[e.head].clone() + a.clone();
        out[e.tail] = out[e.tail].clone() - a.clone();
    }
    ZeroCochain(out)
}

pub fn laplacian<S: Scalar>(g: &Graph, f: &ZeroCochain<S>) -> ZeroCochain<S> {
    apply_d_star(g, &apply_d(g, f))
}

/// `d(χ_X)`: `+1` on edges entering `X`, `−1` on edges leaving it.
pub fn cut_element(g: &Graph, x: VertexSet) -> OneCochain<i64> {
    OneCochain(
        g.edges
            .iter()
            .map(|e| contains(x, e.head) as i64 - contains(x, e.tail) as i64)
            .collect(),
    )
}

/// Oriented edges on which the cochain is positive.
pub fn positive_support(c: &OneCochain<i64>) -> Vec<OrientedEdge> {
    let mut out: Vec<OrientedEdge> = c
        .0
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0)
        .map(|(e, &v)| OrientedEdge { edge: e, forward: v > 0 })
        .collect();
    out.sort();
    out
}

/// A potential `f` with `d f = x` and `f(v₀) = 0`, if `x` is exact.
pub fn integrate<S: Scalar>(g: &Graph, x: &OneCochain<S>) -> Option<ZeroCochain<S>> {
    let n = g.vertex_count();
    let mut f: Vec<Option<S>> = vec![None; n];
    f[0] = Some(S::zero());
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        let fv = f[v].clone().expect("visited");
        for (i, e) in g.edges.iter().enumerate() {
            let (w, val) = if e.tail == v {
                (e.head, fv.clone() + x.0[i].clone())
            } else if e.head == v {
                (e.tail, fv.clone() - x.0[i].clone())
            } else {
                continue;
            };
            if f[w].is_none() {
                f[w] = Some(val);
                stack.push(w);
            }
        }
    }
    let f = ZeroCochain(f.into_iter().map(|v| v.expect("graph is connected")).collect());
    (apply_d(g, &f) == *x).then_some(f)
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(|V|={}, |E|={})", self.vertex_count(), self.edge_count())
    }
}
