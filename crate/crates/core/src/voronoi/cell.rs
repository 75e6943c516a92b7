//! Exact vertex and face enumeration for the Voronoi cell of the cut lattice.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::error::Result;
use crate::graph::{apply_d, apply_d_star, Graph, OneCochain, OrientedEdge, ZeroCochain};
use crate::lattice::{check_cap, enumerate_bonds, Bond};
use crate::linalg::{affine_rank, solve_square};
use crate::scalar::{q, Q};

use super::cac::CacPoset;

/// Tight-subset solving is `O(C(bonds, |V|-1))`; 5 vertices means at most
/// 30 bonds.
pub const CELL_CAP: usize = 5;

/// A face, recorded by its vertices and the bonds tight on all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub tight: Vec<usize>,
    pub dim: usize,
    /// Union of the positive supports of the tight bonds, sorted.
    pub orientation: Vec<OrientedEdge>,
}

/// The cell `{x ∈ im d : 2⟨x, β⟩ ≤ ‖β‖² for all bonds β}` in edge coordinates.
#[derive(Clone, Debug)]
pub struct CellGeometry {
    pub bonds: Vec<Bond>,
    pub vertices: Vec<OneCochain<Q>>,
    /// Sorted by dimension, then by vertex list.
    pub faces: Vec<Face>,
}

impl CellGeometry {
    pub fn dimension(&self) -> usize {
        self.faces.iter().map(|f| f.dim).max().unwrap_or(0)
    }

    /// Number of faces of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut fv = vec![0; self.dimension() + 1];
        for f in &self.faces {
            fv[f.dim] += 1;
        }
        fv
    }

    /// Vertices as points of `H_0` via `d*`.
    pub fn vertices_h0(&self, g: &Graph) -> Vec<ZeroCochain<Q>> {
        self.vertices.iter().map(|x| apply_d_star(g, x)).collect()
    }

    /// `F ⊆ F'` as vertex sets.
    pub fn face_leq(&self, i: usize, j: usize) -> bool {
        let outer = &self.faces[j].vertices;
        self.faces[i].vertices.iter().all(|v| outer.binary_search(v).is_ok())
    }

    /// For each face, the CAC element with the same oriented edge set.
    /// `None` unless this is a bijection.
    pub fn match_cac(&self, poset: &CacPoset) -> Option<Vec<usize>> {
        if poset.len() != self.faces.len() {
            return None;
        }
        let mut used = vec![false; poset.len()];
        let mut out = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            let i = poset.index_of(&f.orientation)?;
            if std::mem::replace(&mut used[i], true) {
                return None;
            }
            out.push(i);
        }
        Some(out)
    }
}

pub fn cell_geometry(g: &Graph) -> Result<CellGeometry> {
    check_cap(g, "cell geometry", CELL_CAP)?;
    let bonds = enumerate_bonds(g)?;
    let n = g.vertex_count();
    let dim = n - 1;
    // Coordinates: a potential with value 0 at the first vertex; x = d(potential).
    let rows: Vec<Vec<Q>> = bonds
        .iter()
        .map(|b| {
            let ds = apply_d_star(g, &b.cochain);
            ds.0[1..].iter().map(|&v| q(2 * v)).collect()
        })
        .collect();
    let rhs: Vec<Q> = bonds.iter().map(|b| q(b.norm_sq)).collect();

    let mut vertices: Vec<OneCochain<Q>> = Vec::new();
    let mut tight: Vec<u64> = Vec::new();
    let mut index: HashMap<Vec<Q>, usize> = HashMap::new();
    if dim == 0 {
        vertices.push(OneCochain::zeros(g.edge_count()));
        tight.push(0);
    }
    let mut choice = Vec::with_capacity(dim);
    for_each_combination(bonds.len(), dim, &mut choice, &mut |sel| {
        let a: Vec<Vec<Q>> = sel.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<Q> = sel.iter().map(|&i| rhs[i].clone()).collect();
        let Some(sol) = solve_square(&a, &b) else {
            return;
        };
        if index.contains_key(&sol) {
            return;
        }
        let lhs: Vec<Q> = rows
            .iter()
            .map(|r| r.iter().zip(&sol).fold(Q::zero(), |acc, (c, x)| acc + c * x))
            .collect();
        if lhs.iter().zip(&rhs).any(|(l, r)| l > r) {
            return;
        }
        let mask = lhs
            .iter()
            .zip(&rhs)
            .enumerate()
            .filter(|(_, (l, r))| l == r)
            .fold(0u64, |m, (i, _)| m | 1 << i);
        let mut pot = vec![Q::zero()];
        pot.extend(sol.iter().cloned());
        index.insert(sol, vertices.len());
        vertices.push(apply_d(g, &ZeroCochain(pot)));
        tight.push(mask);
    });

    // Every face is cut out by the bonds tight on all its vertices; these sets
    // are closed under intersection, generated by the vertex tight sets.
    let mut sets: BTreeSet<u64> = tight.iter().copied().collect();
    loop {
        let current: Vec<u64> = sets.iter().copied().collect();
        let before = sets.len();
        for &s in &current {
            for &t in &tight {
                sets.insert(s & t);
            }
        }
        if sets.len() == before {
            break;
        }
    }
    let mut by_vertices: HashMap<Vec<usize>, u64> = HashMap::new();
    for &s in &sets {
        let vs: Vec<usize> = (0..vertices.len()).filter(|&v| tight[v] & s == s).collect();
        let closed = vs.iter().fold(u64::MAX, |acc, &v| acc & tight[v]);
        by_vertices.insert(vs, closed);
    }
    let mut faces: Vec<Face> = by_vertices
        .into_iter()
        .map(|(vs, mask)| {
            let pts: Vec<Vec<Q>> = vs.iter().map(|&v| vertices[v].0.clone()).collect();
            let tight_idx: Vec<usize> = (0..bonds.len()).filter(|&i| mask >> i & 1 == 1).collect();
            let mut orientation: Vec<OrientedEdge> = tight_idx
                .iter()
                .flat_map(|&i| bonds[i].positive_support())
                .collect();
            orientation.sort();
            orientation.dedup();
            Face {
                dim: affine_rank(&pts),
                vertices: vs,
                tight: tight_idx,
                orientation,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    Ok(CellGeometry {
        bonds,
        vertices,
        faces,
    })
}

fn for_each_combination(n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        if k > 0 {
            visit(cur);
        }
        return;
    }
    let start = cur.last().map_or(0, |&i| i + 1);
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        for_each_combination(n, k, cur, visit);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_frac;
    use crate::voronoi::enumerate_cac;

    #[test]
    fn segment() {
        let c = cell_geometry(&Graph::path(2)).unwrap();
        let mut xs: Vec<Q> = c.vertices.iter().map(|v| v.0[0].clone()).collect();
        xs.sort();
        assert_eq!(xs, vec![q_frac(-1, 2), q_frac(1, 2)]);
        assert_eq!(c.f_vector(), vec![2, 1]);
    }

    #[test]
    fn hexagon() {
        let c = cell_geometry(&Graph::complete(3)).unwrap();
        assert_eq!(c.f_vector(), vec![6, 6, 1]);
        let m = c.match_cac(&enumerate_cac(&Graph::complete(3)).unwrap());
        assert!(m.is_some());
    }

    #[test]
    fn banana_segment() {
        let c = cell_geometry(&Graph::banana(2)).unwrap();
        assert_eq!(c.f_vector(), vec![2, 1]);
        for v in &c.vertices {
            assert_eq!(v.0[0], v.0[1]);
        }
    }

    #[test]
    fn full_cell_has_empty_orientation() {
        let c = cell_geometry(&Graph::cycle(4)).unwrap();
        let top = c.faces.last().unwrap();
        assert_eq!(top.dim, 3);
        assert!(top.orientation.is_empty());
        assert!(top.tight.is_empty());
    }
}
