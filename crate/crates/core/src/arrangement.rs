//! Points of the product of `P¹`-chains, the arrangement `Y` inside it, the
//! torus action, and two independent membership tests.

use crate::cycles::{cycle_space_with_tree, default_tree, simple_cycles, CycleSpace};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::{apply_d_star, Graph, OneCochain, ZeroCochain};
use crate::toric::{cycle_binomials, Monomial, Var};
use crate::voronoi::{active_subgraph, dee, solve_level_function, LevelVector, TilingParams};

/// Lengths, twisting, and the characters `a` (per edge) and `b` (per
/// fundamental cycle of `tree`) over a field.
#[derive(Clone, Debug)]
pub struct ArrangementConfig<F: Field> {
    pub graph: Graph,
    pub params: TilingParams,
    pub field: F,
    pub a: Vec<F::Elem>,
    /// One value per fundamental cycle, in the order of `cycles.fundamental`.
    pub b_cycles: Vec<F::Elem>,
    pub cycles: CycleSpace,
    /// The extension of `b` that is trivial on the tree.
    b_edge: Vec<F::Elem>,
}

impl<F: Field> ArrangementConfig<F> {
    pub fn new(
        graph: Graph,
        params: TilingParams,
        field: F,
        a: Vec<F::Elem>,
        b_cycles: Vec<F::Elem>,
        tree: Option<Vec<usize>>,
    ) -> Result<Self> {
        let tree = tree.unwrap_or_else(|| default_tree(&graph));
        let cycles = cycle_space_with_tree(&graph, &tree)?;
        if a.len() != graph.edge_count() {
            return Err(Error::Validation(format!(
                "a needs {} entries, got {}",
                graph.edge_count(),
                a.len()
            )));
        }
        if b_cycles.len() != cycles.rank() {
            return Err(Error::Validation(format!(
                "b needs {} entries (one per fundamental cycle), got {}",
                cycles.rank(),
                b_cycles.len()
            )));
        }
        if a.iter().chain(&b_cycles).any(|x| field.is_zero(x)) {
            return Err(Error::Validation("characters must take unit values".into()));
        }
        let mut b_edge = vec![field.one(); graph.edge_count()];
        for (fc, bv) in cycles.fundamental.iter().zip(&b_cycles) {
            b_edge[fc.edge] = bv.clone();
        }
        Ok(ArrangementConfig {
            graph,
            params,
            field,
            a,
            b_cycles,
            cycles,
            b_edge,
        })
    }

    /// Trivial characters.
    pub fn trivial(graph: Graph, params: TilingParams, field: F) -> Self {
        let a = vec![field.one(); graph.edge_count()];
        let rank = graph.cycle_rank();
        let b = vec![field.one(); rank];
        Self::new(graph, params, field, a, b, None).expect("trivial characters are valid")
    }

    pub fn b_edge(&self) -> &[F::Elem] {
        &self.b_edge
    }

    /// `b(γ) = Π b_e^{γ_e}` for a cycle `γ`.
    pub fn b_of(&self, gamma: &OneCochain<i64>) -> F::Elem {
        let f = &self.field;
        gamma.0.iter().zip(&self.b_edge).fold(f.one(), |acc, (&k, be)| {
            f.mul(&acc, &f.pow(be, k).expect("b is a unit"))
        })
    }

    /// `b_e a_e^level`.
    pub fn base_ratio(&self, e: usize, level: i64) -> F::Elem {
        let f = &self.field;
        f.mul(&self.b_edge[e], &f.pow(&self.a[e], level).expect("a is a unit"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeState<E> {
    /// The node joining levels `(doubled − 1)/2` and `(doubled + 1)/2`;
    /// `doubled` is odd.
    Node(i64),
    /// A point of the open component at an integer level, `ratio = x_e/x_ē ≠ 0`.
    Interior { level: i64, ratio: E },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPoint<E> {
    pub edges: Vec<EdgeState<E>>,
}

impl<E: Clone> RPoint<E> {
    pub fn level_vector(&self) -> LevelVector {
        LevelVector(
            self.edges
                .iter()
                .map(|s| match s {
                    EdgeState::Node(d) => *d,
                    EdgeState::Interior { level, .. } => 2 * level,
                })
                .collect(),
        )
    }

    /// `(x_{e,i} : x_{ē,i})` at this point.
    pub fn chain_coords<F: Field<Elem = E>>(&self, field: &F, e: usize, i: i64) -> (E, E) {
        let (zero, one) = (field.zero(), field.one());
        match &self.edges[e] {
            EdgeState::Interior { level, ratio } if i == *level => (ratio.clone(), one),
            EdgeState::Interior { level, .. } if i < *level => (zero, one),
            EdgeState::Interior { .. } => (one, zero),
            EdgeState::Node(d) if 2 * i < *d => (zero, one),
            EdgeState::Node(_) => (one, zero),
        }
    }

    pub fn coordinate<F: Field<Elem = E>>(&self, field: &F, v: Var) -> E {
        let (x, xbar) = self.chain_coords(field, v.edge, v.level);
        if v.plus {
            x
        } else {
            xbar
        }
    }
}

/// `p^n_f`: the node at half-integral levels, ratio `b_e a_e^level` otherwise.
pub fn base_point<F: Field>(cfg: &ArrangementConfig<F>, n: i64, f: &ZeroCochain<i64>) -> Result<RPoint<F::Elem>> {
    if n < 1 {
        return Err(Error::Validation("n must be positive".into()));
    }
    if f.len() != cfg.graph.vertex_count() {
        return Err(Error::Validation("f has the wrong length".into()));
    }
    let level = dee(&cfg.graph, &cfg.params, f, n);
    Ok(point_at_levels(cfg, &level))
}

fn point_at_levels<F: Field>(cfg: &ArrangementConfig<F>, level: &LevelVector) -> RPoint<F::Elem> {
    RPoint {
        edges: (0..level.len())
            .map(|e| {
                if level.is_integral_at(e) {
                    let l = level.floor(e);
                    EdgeState::Interior { level: l, ratio: cfg.base_ratio(e, l) }
                } else {
                    EdgeState::Node(level.doubled(e))
                }
            })
            .collect(),
    }
}

/// The torus action: interior ratios scale by `c(head)/c(tail)`.
pub fn act<F: Field>(cfg: &ArrangementConfig<F>, c: &[F::Elem], p: &RPoint<F::Elem>) -> Result<RPoint<F::Elem>> {
    let f = &cfg.field;
    if c.len() != cfg.graph.vertex_count() || p.edges.len() != cfg.graph.edge_count() {
        return Err(Error::Validation("character or point has the wrong length".into()));
    }
    if c.iter().any(|x| f.is_zero(x)) {
        return Err(Error::Validation("character values must be units".into()));
    }
    Ok(RPoint {
        edges: p
            .edges
            .iter()
            .enumerate()
            .map(|(e, s)| match s {
                EdgeState::Node(d) => EdgeState::Node(*d),
                EdgeState::Interior { level, ratio } => {
                    let ed = cfg.graph.edge(e);
                    let q = f.div(&c[ed.head], &c[ed.tail]).expect("unit");
                    EdgeState::Interior { level: *level, ratio: f.mul(ratio, &q) }
                }
            })
            .collect(),
    })
}

/// Whether `p` lies in the toric variety attached to `f`.
pub fn member_component<F: Field>(cfg: &ArrangementConfig<F>, p: &RPoint<F::Elem>, f: &ZeroCochain<i64>) -> bool {
    let level = dee(&cfg.graph, &cfg.params, f, 1);
    if !stratum_within(p, &level) {
        return false;
    }
    let active = active_subgraph(&cfg.graph, &level);
    let bins = cycle_binomials(&cfg.graph, &active.edges, &level, &cfg.field, &cfg.a, &cfg.b_edge)
        .expect("levels are integral on the active subgraph");
    bins.iter().all(|b| b.holds(&cfg.field, |v| p.coordinate(&cfg.field, v)))
}

/// The closed stratum at `level` contains `p`: an interior point needs an
/// equal integral level, a node may also sit next to an integral level.
fn stratum_within<E: Clone>(p: &RPoint<E>, level: &LevelVector) -> bool {
    p.edges.iter().enumerate().all(|(e, s)| {
        let d = level.doubled(e);
        match s {
            EdgeState::Interior { level: l, .. } => d == 2 * l,
            EdgeState::Node(pd) => d == *pd || (d % 2 == 0 && (d - pd).abs() == 1),
        }
    })
}

/// Integer ranges for `f(head) − f(tail)` compatible with the point's
/// stratum, per edge.
fn difference_bounds<E: Clone>(params: &TilingParams, p: &RPoint<E>) -> Vec<(i64, i64)> {
    p.edges
        .iter()
        .enumerate()
        .map(|(e, s)| {
            let (l, m) = (params.lengths[e], params.twist.0[e]);
            match s {
                EdgeState::Interior { level, .. } => (l * level - m, l * level - m),
                EdgeState::Node(d) => (l * (d - 1) / 2 - m, l * (d + 1) / 2 - m),
            }
        })
        .collect()
}

/// Searches normalized `f` with `|f(v)| ≤ window` and connected active
/// subgraph, in order of `max |f(v)|` then lexicographically, for a toric
/// variety containing `p`.
pub fn member_y<F: Field>(cfg: &ArrangementConfig<F>, p: &RPoint<F::Elem>, window: i64) -> Result<Option<ZeroCochain<i64>>> {
    let g = &cfg.graph;
    if p.edges.len() != g.edge_count() {
        return Err(Error::Validation("point has the wrong number of edges".into()));
    }
    let bounds = difference_bounds(&cfg.params, p);
    let order = bfs_order(g);
    let mut candidates = Vec::new();
    let mut f = vec![None; g.vertex_count()];
    f[0] = Some(0);
    let mut escaped = false;
    assign(g, &bounds, window, &order, 1, &mut f, &mut candidates, &mut escaped);
    candidates.sort_by_key(|f: &Vec<i64>| (f.iter().map(|v| v.abs()).max().unwrap_or(0), f.clone()));
    for c in candidates {
        let f = ZeroCochain(c);
        let level = dee(g, &cfg.params, &f, 1);
        if active_subgraph(g, &level).is_connected() && member_component(cfg, p, &f) {
            return Ok(Some(f));
        }
    }
    if escaped {
        return Err(Error::WindowTooSmall(format!(
            "the point's levels need potentials beyond window {window}"
        )));
    }
    Ok(None)
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.vertex_count()];
    let mut order = vec![0];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for ed in g.edges() {
            for (a, b) in [(ed.tail, ed.head), (ed.head, ed.tail)] {
                if a == v && !seen[b] {
                    seen[b] = true;
                    order.push(b);
                }
            }
        }
    }
    order
}

/// Depth-first assignment of `f` along `order`; each vertex after the first
/// has an assigned neighbour, so its range is finite.
#[allow(clippy::too_many_arguments)]
fn assign(
    g: &Graph,
    bounds: &[(i64, i64)],
    window: i64,
    order: &[usize],
    k: usize,
    f: &mut Vec<Option<i64>>,
    out: &mut Vec<Vec<i64>>,
    escaped: &mut bool,
) {
    if k == order.len() {
        out.push(f.iter().map(|x| x.expect("assigned")).collect());
        return;
    }
    let v = order[k];
    let (mut lo, mut hi) = (i64::MIN, i64::MAX);
    for (e, ed) in g.edges().iter().enumerate() {
        let (blo, bhi) = bounds[e];
        if ed.head == v {
            if let Some(t) = f[ed.tail] {
                lo = lo.max(t + blo);
                hi = hi.min(t + bhi);
            }
        } else if ed.tail == v {
            if let Some(h) = f[ed.head] {
                lo = lo.max(h - bhi);
                hi = hi.min(h - blo);
            }
        }
    }
    if lo <= hi && (lo < -window || hi > window) {
        *escaped = true;
    }
    for x in lo.max(-window)..=hi.min(window) {
        f[v] = Some(x);
        assign(g, bounds, window, order, k + 1, f, out, escaped);
    }
    f[v] = None;
}

/// `(P : Q)` for a pair `(α, γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaPoint<E> {
    pub alpha: OneCochain<i64>,
    pub gamma: OneCochain<i64>,
    pub p: E,
    pub q: E,
}

pub fn zeta_point<F: Field>(cfg: &ArrangementConfig<F>, alpha: &OneCochain<i64>, gamma: &OneCochain<i64>) -> Result<ZetaPoint<F::Elem>> {
    let g = &cfg.graph;
    let m = g.edge_count();
    if alpha.len() != m || gamma.len() != m {
        return Err(Error::Validation("alpha and gamma need one entry per edge".into()));
    }
    if apply_d_star(g, gamma).0.iter().any(|&v| v != 0) {
        return Err(Error::Validation("gamma is not a cycle".into()));
    }
    let f = &cfg.field;
    let s = zeta_exponent(&cfg.params, alpha, gamma);
    let (p, q) = match s.signum() {
        -1 => (f.one(), f.zero()),
        1 => (f.zero(), f.one()),
        _ => {
            let mut c = cfg.b_of(gamma);
            for e in 0..m {
                let ae = f.pow(&cfg.a[e], alpha.0[e] * gamma.0[e]).expect("a is a unit");
                c = f.mul(&c, &ae);
            }
            (f.one(), c)
        }
    };
    Ok(ZetaPoint { alpha: alpha.clone(), gamma: gamma.clone(), p, q })
}

/// `Σ_e (α_e γ_e ℓ_e − 𝔪_e γ_e)`.
pub fn zeta_exponent(params: &TilingParams, alpha: &OneCochain<i64>, gamma: &OneCochain<i64>) -> i64 {
    (0..alpha.len())
        .map(|e| alpha.0[e] * gamma.0[e] * params.lengths[e] - params.twist.0[e] * gamma.0[e])
        .sum()
}

/// The two monomials of the `(α, γ)` equation: the first pairs `x_{e,α_e}`
/// with positive `γ_e`, the second is its mirror.
pub fn zeta_monomials(alpha: &OneCochain<i64>, gamma: &OneCochain<i64>) -> (Monomial, Monomial) {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for e in 0..gamma.len() {
        let k = gamma.0[e];
        if k == 0 {
            continue;
        }
        let level = alpha.0[e];
        let pow = k.unsigned_abs() as u32;
        first.push((Var { edge: e, level, plus: k > 0 }, pow));
        second.push((Var { edge: e, level, plus: k < 0 }, pow));
    }
    first.sort();
    second.sort();
    (first, second)
}

/// `P · M1 = Q · M2` at `p`'s chain coordinates.
pub fn check_z_equation<F: Field>(
    cfg: &ArrangementConfig<F>,
    p: &RPoint<F::Elem>,
    alpha: &OneCochain<i64>,
    gamma: &OneCochain<i64>,
) -> Result<bool> {
    let z = zeta_point(cfg, alpha, gamma)?;
    let f = &cfg.field;
    let (m1, m2) = zeta_monomials(alpha, gamma);
    let value = |v: Var| p.coordinate(f, v);
    let lhs = f.mul(&z.p, &crate::toric::eval_monomial(f, &m1, &value));
    let rhs = f.mul(&z.q, &crate::toric::eval_monomial(f, &m2, &value));
    Ok(lhs == rhs)
}

/// All `(α, γ)` equations for simple cycles `γ` and `α_e` within `radius`
/// of the point's level (rounded down at nodes).
pub fn check_z_window<F: Field>(cfg: &ArrangementConfig<F>, p: &RPoint<F::Elem>, radius: i64) -> Result<bool> {
    let g = &cfg.graph;
    let m = g.edge_count();
    let base = p.level_vector();
    for cyc in simple_cycles(g, &vec![true; m]) {
        let gamma = cyc.cochain(m);
        let support = cyc.edge_indices();
        // Only α on the support of γ enters the equation.
        let mut alpha = OneCochain::zeros(m);
        if !alpha_search(cfg, p, &gamma, &support, &base, radius, 0, &mut alpha)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn alpha_search<F: Field>(
    cfg: &ArrangementConfig<F>,
    p: &RPoint<F::Elem>,
    gamma: &OneCochain<i64>,
    support: &[usize],
    base: &LevelVector,
    radius: i64,
    k: usize,
    alpha: &mut OneCochain<i64>,
) -> Result<bool> {
    if k == support.len() {
        return check_z_equation(cfg, p, alpha, gamma);
    }
    let e = support[k];
    let centre = base.floor(e);
    for a in centre - radius..=centre + radius {
        alpha.0[e] = a;
        if !alpha_search(cfg, p, gamma, support, base, radius, k + 1, alpha)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(n, f, c)` with `act(c, base_point(n, f)) = p`, or `None` when the level
/// vector is not of the form `dee(f, n)`.
#[allow(clippy::type_complexity)]
pub fn classify_orbit<F: Field>(
    cfg: &ArrangementConfig<F>,
    p: &RPoint<F::Elem>,
) -> Result<Option<(i64, ZeroCochain<i64>, Vec<F::Elem>)>> {
    let g = &cfg.graph;
    let fld = &cfg.field;
    if p.edges.len() != g.edge_count() {
        return Err(Error::Validation("point has the wrong number of edges".into()));
    }
    let level = p.level_vector();
    let Some((n, f)) = solve_level_function(g, &cfg.params, &level) else {
        return Ok(None);
    };
    let base = point_at_levels(cfg, &level);
    // Quotient q_e with c(head) = q_e · c(tail) on interior edges.
    let quotient = |e: usize| -> Option<F::Elem> {
        match (&p.edges[e], &base.edges[e]) {
            (EdgeState::Interior { ratio: r, .. }, EdgeState::Interior { ratio: b, .. }) => fld.div(r, b),
            _ => None,
        }
    };
    let nv = g.vertex_count();
    let mut c: Vec<Option<F::Elem>> = vec![None; nv];
    for root in 0..nv {
        if c[root].is_some() {
            continue;
        }
        c[root] = Some(fld.one());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let cv = c[v].clone().expect("visited");
            for (e, ed) in g.edges().iter().enumerate() {
                let Some(qe) = quotient(e) else { continue };
                if ed.tail == v && c[ed.head].is_none() {
                    c[ed.head] = Some(fld.mul(&cv, &qe));
                    stack.push(ed.head);
                } else if ed.head == v && c[ed.tail].is_none() {
                    c[ed.tail] = Some(fld.div(&cv, &qe).expect("unit"));
                    stack.push(ed.tail);
                }
            }
        }
    }
    let c: Vec<F::Elem> = c.into_iter().map(|x| x.expect("every vertex is reached")).collect();
    for (e, ed) in g.edges().iter().enumerate() {
        if let Some(qe) = quotient(e) {
            if fld.mul(&c[ed.tail], &qe) != c[ed.head] {
                return Err(Error::NotInArrangement(format!(
                    "ratios are inconsistent around {}",
                    g.edge_name(e)
                )));
            }
        }
    }
    Ok(Some((n, f, c)))
}
