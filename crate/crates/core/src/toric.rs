//! Normal cones of the Voronoi cell, cycle binomials, and orbit closures.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::cycles::{simple_cycles, undirected_cycles};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::{integrate, Graph, OneCochain, OrientedEdge, Subgraph, VertexSet};
use crate::lattice::enumerate_bonds;
use crate::linalg::rank;
use crate::polyhedron::{lp_feasible, LinearConstraint};
use crate::scalar::{q, Q};
use crate::voronoi::{CacOrientation, LevelVector};

/// The cone spanned by the bonds whose entering edges all lie in `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub sets: Vec<VertexSet>,
    pub generators: Vec<OneCochain<i64>>,
    pub rank: usize,
}

impl Cone {
    /// Exact membership: `x` is a nonnegative combination of the generators.
    pub fn contains(&self, x: &OneCochain<Q>) -> bool {
        let k = self.generators.len();
        if k == 0 {
            return x.0.iter().all(Zero::is_zero);
        }
        let mut cons: Vec<LinearConstraint> = (0..x.len())
            .map(|e| {
                let coeffs = self.generators.iter().map(|b| q(b.0[e])).collect();
                LinearConstraint::eq(coeffs, x.0[e].clone())
            })
            .collect();
        for i in 0..k {
            let mut c = vec![Q::zero(); k];
            c[i] = q(-1);
            cons.push(LinearConstraint::le(c, Q::zero()));
        }
        lp_feasible(k, &cons).is_some()
    }
}

pub fn normal_cone(g: &Graph, d: &CacOrientation) -> Result<Cone> {
    let mut sets = Vec::new();
    let mut generators = Vec::new();
    for b in enumerate_bonds(g)? {
        if b.positive_support().iter().all(|&oe| d.contains(oe)) {
            sets.push(b.set);
            generators.push(b.cochain);
        }
    }
    let rows: Vec<Vec<Q>> = generators.iter().map(|b| b.0.iter().map(|&v| q(v)).collect()).collect();
    Ok(Cone {
        rank: rank(&rows),
        sets,
        generators,
    })
}

/// Whether a rational edge function is a potential difference.
pub fn in_cut_space(g: &Graph, x: &OneCochain<Q>) -> bool {
    integrate(g, x).is_some()
}

/// The coordinate `x_{e,i}` when `plus`, else `x_{ē,i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub edge: usize,
    pub level: i64,
    pub plus: bool,
}

impl Var {
    pub fn label(&self, g: &Graph) -> String {
        format!(
            "x[{}{},{}]",
            if self.plus { "" } else { "-" },
            g.edge_name(self.edge),
            self.level
        )
    }
}

/// Sorted variables with positive exponents.
pub type Monomial = Vec<(Var, u32)>;

/// `lhs = coeff · rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial<E> {
    pub lhs: Monomial,
    pub rhs: Monomial,
    pub coeff: E,
}

pub(crate) fn eval_monomial<F: Field>(field: &F, m: &Monomial, value: &impl Fn(Var) -> F::Elem) -> F::Elem {
    m.iter().fold(field.one(), |acc, &(v, k)| {
        let x = field.pow(&value(v), k as i64).expect("nonnegative power");
        field.mul(&acc, &x)
    })
}

impl<E: Clone + PartialEq> Binomial<E> {
    pub fn holds<F: Field<Elem = E>>(&self, field: &F, value: impl Fn(Var) -> E) -> bool {
        let l = eval_monomial(field, &self.lhs, &value);
        let r = eval_monomial(field, &self.rhs, &value);
        l == field.mul(&self.coeff, &r)
    }
}

/// One binomial per undirected simple cycle of the kept subgraph, using the
/// canonical orientation. `b` is already extended to every edge.
pub fn cycle_binomials<F: Field>(
    g: &Graph,
    keep: &[bool],
    level: &LevelVector,
    field: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> Result<Vec<Binomial<F::Elem>>> {
    if let Some(e) = (0..g.edge_count()).find(|&e| keep[e] && !level.is_integral_at(e)) {
        return Err(Error::Validation(format!(
            "level on {} is not an integer",
            g.edge_name(e)
        )));
    }
    let mut out = Vec::new();
    for cyc in undirected_cycles(g, keep) {
        let mut lhs: Monomial = Vec::new();
        let mut rhs: Monomial = Vec::new();
        let mut coeff = field.one();
        for &oe in &cyc.edges {
            let lev = level.floor(oe.edge);
            lhs.push((Var { edge: oe.edge, level: lev, plus: oe.forward }, 1));
            rhs.push((Var { edge: oe.edge, level: lev, plus: !oe.forward }, 1));
            let s = oe.sign();
            let be = field.pow(&b[oe.edge], s).expect("b is a unit");
            let ae = field.pow(&a[oe.edge], s * lev).expect("a is a unit");
            coeff = field.mul(&coeff, &field.mul(&be, &ae));
        }
        lhs.sort();
        rhs.sort();
        out.push(Binomial { lhs, rhs, coeff });
    }
    Ok(out)
}

/// Extends an acyclic partial orientation to an acyclic orientation of every
/// edge: free edges follow a topological order of `A` with ties broken by
/// vertex index. Acyclicity of `A` is weaker than asking every cycle to meet
/// `A` in both directions or not at all, and is exactly what is needed.
pub fn complete_orientation(g: &Graph, a: &[OrientedEdge]) -> Result<Vec<OrientedEdge>> {
    let mut in_a: Vec<Option<bool>> = vec![None; g.edge_count()];
    for &oe in a {
        if oe.edge >= g.edge_count() {
            return Err(Error::Validation(format!("edge index {} out of range", oe.edge)));
        }
        match in_a[oe.edge] {
            Some(dir) if dir != oe.forward => {
                return Err(Error::Validation(format!(
                    "{} is oriented both ways",
                    g.edge_name(oe.edge)
                )))
            }
            _ => in_a[oe.edge] = Some(oe.forward),
        }
    }
    let n = g.vertex_count();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &oe in a {
        out[g.tail(oe)].push(g.head(oe));
        indeg[g.head(oe)] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut position = vec![usize::MAX; n];
    let mut next = 0;
    while let Some(v) = ready.pop_first() {
        position[v] = next;
        next += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    if next < n {
        let hits = |oe: &OrientedEdge| in_a[oe.edge] == Some(oe.forward);
        let witness = simple_cycles(g, &vec![true; g.edge_count()])
            .into_iter()
            .find(|c| c.edges.iter().all(hits))
            .expect("a leftover vertex lies on a directed cycle of A");
        return Err(Error::Hypothesis {
            cycle: witness.label(g),
            detail: "is a directed cycle of the partial orientation".into(),
        });
    }
    Ok((0..g.edge_count())
        .map(|e| match in_a[e] {
            Some(true) => OrientedEdge::forward(e),
            Some(false) => OrientedEdge::backward(e),
            None if position[g.edge(e).tail] < position[g.edge(e).head] => OrientedEdge::forward(e),
            None => OrientedEdge::backward(e),
        })
        .collect())
}

/// Whether a set of oriented edges has no directed cycle.
pub fn is_acyclic(g: &Graph, orientation: &[OrientedEdge]) -> bool {
    let n = g.vertex_count();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &oe in orientation {
        out[g.tail(oe)].push(g.head(oe));
        indeg[g.head(oe)] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}

/// Components of the graph without the edges of `D`, ordered so that every
/// edge of `D` points from an earlier component to a later one.
pub fn orbit_closure(g: &Graph, d: &CacOrientation) -> Result<Vec<Subgraph>> {
    let all = vec![true; g.edge_count()];
    let d = CacOrientation::from_edges(g, &all, d.edges.clone()).ok_or_else(|| {
        Error::Validation("not a coherent acyclic orientation of a cut subgraph".into())
    })?;
    let cut = d.edge_mask(g.edge_count());
    Ok(d.partition
        .into_iter()
        .map(|vertices| {
            let edges = (0..g.edge_count())
                .filter(|&e| !cut[e] && vertices.binary_search(&g.edge(e).tail).is_ok())
                .collect();
            Subgraph { vertices, edges }
        })
        .collect())
}
