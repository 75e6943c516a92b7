//! Recovering `(n, f)` from a level vector.

use num_traits::{One, Zero};

use crate::graph::{Graph, ZeroCochain};
use crate::polyhedron::{fourier_motzkin, LinearConstraint};
use crate::scalar::{half, lcm_denominators, q, to_i64, Q};

use super::{dee, LevelVector, TilingParams};

/// Some `(n, f)` with `dee(f, n) = alpha` and `f` zero at the first vertex,
/// or `None` if no such pair exists. Prefers the smallest values found by
/// elimination, so `n = 1` whenever an integral solution is nearby.
pub fn solve_level_function(
    g: &Graph,
    params: &TilingParams,
    alpha: &LevelVector,
) -> Option<(i64, ZeroCochain<i64>)> {
    let nv = g.vertex_count();
    let vars = nv - 1;
    // Unknown potential g with g(first) = 0; constraints on g(head) − g(tail).
    let row = |e: usize| -> Vec<Q> {
        let ed = g.edge(e);
        let mut r = vec![Q::zero(); vars];
        if ed.head > 0 {
            r[ed.head - 1] += Q::one();
        }
        if ed.tail > 0 {
            r[ed.tail - 1] -= Q::one();
        }
        r
    };
    let mut cons = Vec::new();
    for e in 0..g.edge_count() {
        let l = q(params.lengths[e]);
        let m = q(params.twist.0[e]);
        let a = half(alpha.doubled(e));
        if alpha.is_integral_at(e) {
            cons.push(LinearConstraint::eq(row(e), &a * &l - &m));
        } else {
            let lo = (&a - half(1)) * &l - &m;
            let hi = (&a + half(1)) * &l - &m;
            cons.push(LinearConstraint::lt(row(e), hi));
            let neg: Vec<Q> = row(e).into_iter().map(|c| -c).collect();
            cons.push(LinearConstraint::lt(neg, -lo));
        }
    }
    let sol = fourier_motzkin(vars, &cons)?;
    let n = lcm_denominators(&sol);
    let mut f = vec![0i64];
    for v in &sol {
        f.push(to_i64(&(v * Q::from_integer(n.clone())).to_integer())?);
    }
    let n = to_i64(&n)?;
    let f = ZeroCochain(f);
    debug_assert_eq!(&dee(g, params, &f, n), alpha);
    Some((n, f))
}
