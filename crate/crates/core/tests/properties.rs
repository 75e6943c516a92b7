//! Seeded property checks that cut across modules: level functions, normal
//! cones, cycle binomials on orbits, and orientation completion.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tortile::arrangement::{act, base_point, member_component, ArrangementConfig};
use tortile::cycles::simple_cycles;
use tortile::field::{Field, Rationals};
use tortile::graph::{apply_d, apply_d_star, integrate};
use tortile::scalar::{q, Q};
use tortile::toric::{complete_orientation, cycle_binomials, in_cut_space, normal_cone};
use tortile::voronoi::{active_subgraph, dee, enumerate_cac, LevelVector, TilingParams};
use tortile::{Graph, OneCochain, OrientedEdge, ZeroCochain};

fn theta() -> Graph {
    Graph::from_edge_list(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]).unwrap()
}

fn small_graphs() -> Vec<Graph> {
    vec![Graph::complete(3), Graph::cycle(4), Graph::banana(2), theta(), Graph::complete(4)]
}

fn random_params(g: &Graph, rng: &mut impl Rng) -> TilingParams {
    let m = g.edge_count();
    let lengths = (0..m).map(|_| rng.random_range(1..=3)).collect();
    let twist = (0..m).map(|_| rng.random_range(-2..=2)).collect();
    TilingParams::new(g, lengths, OneCochain(twist)).unwrap()
}

fn random_f(n: usize, range: i64, rng: &mut impl Rng) -> ZeroCochain<i64> {
    ZeroCochain((0..n).map(|_| rng.random_range(-range..=range)).collect())
}

/// Level of an oriented edge, doubled.
fn along(level: &LevelVector, oe: OrientedEdge) -> i64 {
    oe.sign() * level.doubled(oe.edge)
}

#[test]
fn coarsening_moves_levels_by_at_most_a_half() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in small_graphs() {
        for _ in 0..200 {
            let params = random_params(&g, &mut rng);
            let n = rng.random_range(1..=5);
            let f = random_f(g.vertex_count(), 12, &mut rng);
            let coarse = ZeroCochain(f.0.iter().map(|&x| x.div_euclid(n)).collect());
            let fine = dee(&g, &params, &f, n);
            let base = dee(&g, &params, &coarse, 1);
            for e in 0..g.edge_count() {
                let gap = (fine.doubled(e) - base.doubled(e)).abs();
                assert!(gap <= 1, "f={:?} n={n} e={e}", f.0);
                if fine.is_integral_at(e) {
                    assert_eq!(fine.doubled(e), base.doubled(e), "f={:?} n={n} e={e}", f.0);
                }
            }
        }
    }
}

#[test]
fn a_cycle_below_somewhere_is_above_elsewhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for g in small_graphs() {
        let cycles = simple_cycles(&g, &vec![true; g.edge_count()]);
        let mut checked = 0;
        while checked < 200 {
            let params = random_params(&g, &mut rng);
            let (n, p) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let d1 = dee(&g, &params, &random_f(g.vertex_count(), 8, &mut rng), n);
            let d2 = dee(&g, &params, &random_f(g.vertex_count(), 8, &mut rng), p);
            for c in &cycles {
                if !c.edges.iter().all(|oe| d2.is_integral_at(oe.edge)) {
                    continue;
                }
                checked += 1;
                let below = c.edges.iter().any(|&oe| along(&d1, oe) < along(&d2, oe));
                let above = c.edges.iter().any(|&oe| along(&d1, oe) > along(&d2, oe));
                assert!(!below || above, "cycle {} d1={d1:?} d2={d2:?}", c.label(&g));
            }
        }
    }
}

#[test]
fn level_differences_in_the_cycle_space_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for g in small_graphs() {
        let params = random_params(&g, &mut rng);
        let nv = g.vertex_count();
        let mut hits = 0;
        for _ in 0..3000 {
            let n = rng.random_range(1..=3);
            let (f1, f2) = (random_f(nv, 4, &mut rng), random_f(nv, 4, &mut rng));
            let (a, b) = (dee(&g, &params, &f1, n), dee(&g, &params, &f2, n));
            let diff = OneCochain(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect::<Vec<i64>>());
            if apply_d_star(&g, &diff).0.iter().all(|&v| v == 0) {
                hits += 1;
                assert!(diff.is_zero(), "f1={:?} f2={:?} n={n}", f1.0, f2.0);
            }
        }
        assert!(hits > 0);
    }
}

/// Cut-space vectors whose positive support lies in `D`, the oracle side of
/// normal-cone membership.
fn cone_oracle(g: &Graph, d: &[OrientedEdge], x: &OneCochain<Q>) -> bool {
    let support_ok = x.0.iter().enumerate().all(|(e, v)| {
        v.is_zero() || d.contains(&OrientedEdge { edge: e, forward: *v > Q::zero() })
    });
    support_ok && in_cut_space(g, x)
}

#[test]
fn normal_cones_are_cut_vectors_supported_on_the_orientation() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for g in small_graphs() {
        let poset = enumerate_cac(&g).unwrap();
        for d in &poset.elements {
            let cone = normal_cone(&g, d).unwrap();
            let mut inside = 0;
            for k in 0..100 {
                let x = if k % 2 == 0 && !cone.generators.is_empty() {
                    // A nonnegative combination of generators.
                    let mut x = vec![Q::zero(); g.edge_count()];
                    for b in &cone.generators {
                        let w = Q::new(rng.random_range(0..=4).into(), rng.random_range(1..=3).into());
                        for (xe, &be) in x.iter_mut().zip(&b.0) {
                            *xe += &w * q(be);
                        }
                    }
                    OneCochain(x)
                } else {
                    let f = ZeroCochain((0..g.vertex_count()).map(|_| q(rng.random_range(-3..=3))).collect());
                    apply_d(&g, &f)
                };
                let expect = cone_oracle(&g, &d.edges, &x);
                assert_eq!(cone.contains(&x), expect, "D={:?} x={x:?}", d.labels(&g));
                inside += expect as usize;
            }
            assert!(inside > 0 || cone.generators.is_empty());
        }
    }
}

#[test]
fn integral_cut_vectors_have_integral_potentials() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for g in small_graphs() {
        let cycles = simple_cycles(&g, &vec![true; g.edge_count()]);
        for _ in 0..100 {
            let f = ZeroCochain((0..g.vertex_count()).map(|_| q(rng.random_range(-5..=5))).collect());
            let mut x = apply_d(&g, &f);
            // A nonzero cycle is orthogonal to the cut space, so adding one leaves it.
            let perturbed = rng.random_bool(0.5);
            if perturbed {
                let c = cycles[rng.random_range(0..cycles.len())].cochain(g.edge_count());
                for (xe, ce) in x.0.iter_mut().zip(&c.0) {
                    *xe += q(*ce);
                }
            }
            match integrate(&g, &x) {
                Some(p) => {
                    assert!(!perturbed);
                    assert!(p.0.iter().all(|v| v.is_integer()));
                    assert_eq!(apply_d(&g, &p), x);
                }
                None => assert!(perturbed),
            }
        }
    }
}

fn random_config(g: &Graph, rng: &mut impl Rng) -> ArrangementConfig<Rationals> {
    let params = random_params(g, rng);
    let a = (0..g.edge_count()).map(|_| Rationals.random_unit(rng)).collect();
    let b = (0..g.cycle_rank()).map(|_| Rationals.random_unit(rng)).collect();
    ArrangementConfig::new(g.clone(), params, Rationals, a, b, None).unwrap()
}

#[test]
fn binomials_vanish_on_orbits_and_membership_is_torus_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for g in [Graph::complete(3), Graph::cycle(4), Graph::banana(2), theta()] {
        for _ in 0..50 {
            let cfg = random_config(&g, &mut rng);
            let n = rng.random_range(1..=4);
            let f = random_f(g.vertex_count(), 3, &mut rng);
            let c: Vec<Q> = (0..g.vertex_count()).map(|_| Rationals.random_unit(&mut rng)).collect();
            let p = act(&cfg, &c, &base_point(&cfg, n, &f).unwrap()).unwrap();
            let level = dee(&g, &cfg.params, &f, n);
            let active = active_subgraph(&g, &level);
            let bins = cycle_binomials(&g, &active.edges, &level, &Rationals, &cfg.a, cfg.b_edge()).unwrap();
            for b in &bins {
                assert!(b.holds(&Rationals, |v| p.coordinate(&Rationals, v)), "f={:?} n={n}", f.0);
            }
            if n == 1 && active.is_connected() {
                assert!(member_component(&cfg, &p, &f));
                let c2: Vec<Q> = (0..g.vertex_count()).map(|_| Rationals.random_unit(&mut rng)).collect();
                assert!(member_component(&cfg, &act(&cfg, &c2, &p).unwrap(), &f));
            }
        }
    }
}

#[test]
fn equal_levels_give_equal_base_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let g = Graph::complete(3);
    for _ in 0..20 {
        let cfg = random_config(&g, &mut rng);
        let mut seen: Vec<(LevelVector, _)> = Vec::new();
        for n in 1..=3 {
            for _ in 0..60 {
                let f = random_f(3, 4, &mut rng);
                let level = dee(&g, &cfg.params, &f, n);
                let p = base_point(&cfg, n, &f).unwrap();
                if let Some((_, other)) = seen.iter().find(|(l, _)| *l == level) {
                    assert_eq!(&p, other);
                } else {
                    seen.push((level, p));
                }
            }
        }
    }
}

/// Peels sources; true when every vertex goes.
fn acyclic(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut alive = vec![true; n];
    for _ in 0..n {
        match (0..n).find(|&v| alive[v] && !arcs.iter().any(|&(a, b)| b == v && alive[a])) {
            Some(v) => alive[v] = false,
            None => return false,
        }
    }
    true
}

#[test]
fn completed_orientations_extend_and_stay_acyclic() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for g in small_graphs() {
        let nv = g.vertex_count();
        for _ in 0..100 {
            // Orienting a random subset along a random vertex order keeps A acyclic.
            let mut order: Vec<usize> = (0..nv).collect();
            order.shuffle(&mut rng);
            let rank = |v: usize| order.iter().position(|&w| w == v).unwrap();
            let a: Vec<OrientedEdge> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|_| rng.random_bool(0.5))
                .map(|(e, ed)| OrientedEdge { edge: e, forward: rank(ed.tail) < rank(ed.head) })
                .collect();
            let full = complete_orientation(&g, &a).unwrap();
            assert!(a.iter().all(|oe| full.contains(oe)), "A={a:?} full={full:?}");
            let mut edges: Vec<usize> = full.iter().map(|oe| oe.edge).collect();
            edges.sort_unstable();
            assert_eq!(edges, (0..g.edge_count()).collect::<Vec<_>>());
            let arcs: Vec<(usize, usize)> = full.iter().map(|&oe| (g.tail(oe), g.head(oe))).collect();
            assert!(acyclic(nv, &arcs), "A={a:?} full={full:?}");
        }
    }
}
