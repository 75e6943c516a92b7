//! SVG pictures of tilings of rank at most two.
//!
//! A point `x` of `H_0` is drawn at `(x(v2), x(v3))`, or `(x(v2), 0)` in rank
//! one. Coordinates are the exact values rounded to six decimals; a group
//! transform makes the picture isometric without touching the numbers.

use std::cmp::Ordering;
use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, ZeroCochain};
use crate::polyhedron::{lp_feasible, LinearConstraint};
use crate::scalar::{q, Q};
use crate::voronoi::{h0_constraint, CoveringBound, Tile, TileCatalog, TilingParams};

/// `[x0, y0, x1, y1]` in drawing coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub x0: Q,
    pub y0: Q,
    pub x1: Q,
    pub y1: Q,
}

impl BoundingBox {
    pub fn parse(s: &str) -> Result<Self> {
        let v = crate::io::parse_rational_list(s)?;
        let [x0, y0, x1, y1] = <[Q; 4]>::try_from(v)
            .map_err(|_| Error::Parse(format!("bbox needs four numbers, got {s:?}")))?;
        Ok(BoundingBox { x0, y0, x1, y1 })
    }

    pub fn is_empty(&self) -> bool {
        self.x0 >= self.x1 || self.y0 >= self.y1
    }
}

/// Vertices in drawing coordinates.
pub type Polygon = Vec<(Q, Q)>;

/// Rounds half away from zero to six decimals.
pub fn fixed6(x: &Q) -> String {
    let scaled = x * q(1_000_000);
    let (num, den) = (scaled.numer().abs(), scaled.denom().clone());
    let mag = Integer::div_floor(&(num * BigInt::from(2) + &den), &(den * BigInt::from(2)));
    let sign = if scaled.is_negative() && !mag.is_zero() { "-" } else { "" };
    let (int, frac) = mag.div_rem(&BigInt::from(1_000_000));
    format!("{sign}{int}.{frac:0>6}")
}

/// Drawing coordinates of a point of `H_0`.
pub fn project(x: &ZeroCochain<Q>) -> (Q, Q) {
    let a = x.0.get(1).cloned().unwrap_or_else(Q::zero);
    let b = x.0.get(2).cloned().unwrap_or_else(Q::zero);
    (a, b)
}

fn cross(o: &(Q, Q), a: &(Q, Q), b: &(Q, Q)) -> Q {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Vertices of a convex polygon in counterclockwise order, starting from the
/// lowest-then-leftmost one. Collinear input is sorted along its line.
pub fn convex_order(mut pts: Polygon) -> Polygon {
    pts.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let pivot = pts[0].clone();
    let mut rest = pts.split_off(1);
    rest.sort_by(|a, b| match cross(&pivot, a, b).cmp(&Q::zero()) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => {
            let da = (&a.0 - &pivot.0).abs() + (&a.1 - &pivot.1).abs();
            let db = (&b.0 - &pivot.0).abs() + (&b.1 - &pivot.1).abs();
            da.cmp(&db)
        }
    });
    pts.extend(rest);
    pts
}

fn box_constraints(n: usize, bbox: &BoundingBox) -> Vec<LinearConstraint> {
    let unit = |v: usize, s: i64| {
        let mut c = vec![Q::zero(); n];
        c[v] = q(s);
        c
    };
    let mut out = vec![h0_constraint(n)];
    if n > 1 {
        out.push(LinearConstraint::le(unit(1, 1), bbox.x1.clone()));
        out.push(LinearConstraint::le(unit(1, -1), -bbox.x0.clone()));
    }
    if n > 2 {
        out.push(LinearConstraint::le(unit(2, 1), bbox.y1.clone()));
        out.push(LinearConstraint::le(unit(2, -1), -bbox.y0.clone()));
    }
    out
}

/// The window needed to see every tile meeting the box, from its corners.
fn required_window(g: &Graph, params: &TilingParams, bbox: &BoundingBox) -> i64 {
    let bound = CoveringBound::new(g, params);
    let n = g.vertex_count();
    let ys: Vec<&Q> = if n > 2 { vec![&bbox.y0, &bbox.y1] } else { vec![&bbox.y0] };
    let mut w = 0;
    for x in [&bbox.x0, &bbox.x1] {
        for &y in &ys {
            let mut p = vec![Q::zero(); n];
            if n > 1 {
                p[1] = x.clone();
            }
            if n > 2 {
                p[2] = y.clone();
            }
            p[0] = -p.iter().skip(1).fold(Q::zero(), |acc, v| acc + v);
            w = w.max(bound.window(&ZeroCochain(p)));
        }
    }
    w
}

/// Tiles meeting the box, ordered by `f`, with their polygons.
pub fn tiles_in_box(
    g: &Graph,
    params: &TilingParams,
    bbox: &BoundingBox,
    max_window: i64,
) -> Result<Vec<(Tile, Polygon)>> {
    let n = g.vertex_count();
    if n > 3 {
        return Err(Error::UnsupportedRank(n - 1));
    }
    if bbox.is_empty() {
        return Ok(Vec::new());
    }
    let window = required_window(g, params, bbox);
    if window > max_window {
        return Err(Error::WindowTooSmall(format!(
            "the box needs window {window}, limit is {max_window}"
        )));
    }
    let catalog = TileCatalog::new(g, params, window)?;
    let boxed = box_constraints(n, bbox);
    let mut out = Vec::new();
    for t in catalog.tiles() {
        let mut cons = t.constraints(n);
        cons.extend(boxed.iter().cloned());
        if lp_feasible(n, &cons).is_none() {
            continue;
        }
        let poly = convex_order(t.vertices(g)?.iter().map(project).collect());
        out.push((t.clone(), poly));
    }
    Ok(out)
}

/// One `<polygon>` per tile meeting the box, titled by `f`.
pub fn render_tiling(g: &Graph, params: &TilingParams, bbox: &BoundingBox, max_window: i64) -> Result<String> {
    let tiles = tiles_in_box(g, params, bbox, max_window)?;
    let scale = q(40);
    let rank2 = g.vertex_count() > 2;
    let w = (&bbox.x1 - &bbox.x0).abs();
    let h = if rank2 { (&bbox.y1 - &bbox.y0).abs() } else { Q::zero() };
    // Isometric view of the sum-zero plane: basis vectors at 60 degrees.
    let (skew, width) = if rank2 { ("0.5 -0.866025", &w + &h / q(2)) } else { ("0 -1", w) };
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}">"#,
        fixed6(&((width + q(2)) * &scale)),
        fixed6(&((&h + q(2)) * &scale)),
    );
    let _ = writeln!(svg, r#"<style>.tile {{ fill: #dde6f0; stroke: #223344; stroke-width: 0.02; }}</style>"#);
    let _ = writeln!(
        svg,
        r#"<g transform="translate({} {}) scale({}) matrix(1 0 {skew} 0 0) translate({} {})">"#,
        fixed6(&scale),
        fixed6(&((&h + q(1)) * &scale)),
        fixed6(&scale),
        fixed6(&-bbox.x0.clone()),
        fixed6(&if rank2 { -bbox.y0.clone() } else { Q::zero() }),
    );
    for (t, poly) in &tiles {
        let points: Vec<String> = poly.iter().map(|(x, y)| format!("{},{}", fixed6(x), fixed6(y))).collect();
        let label = t.f.0.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        let _ = writeln!(
            svg,
            r#"  <polygon class="tile" data-f="{label}" points="{}"><title>f=({label})</title></polygon>"#,
            points.join(" ")
        );
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::OneCochain;
    use crate::scalar::q_frac;

    fn bbox(a: i64, b: i64, c: i64, d: i64) -> BoundingBox {
        BoundingBox { x0: q(a), y0: q(b), x1: q(c), y1: q(d) }
    }

    #[test]
    fn six_digit_rounding() {
        assert_eq!(fixed6(&q_frac(1, 3)), "0.333333");
        assert_eq!(fixed6(&q_frac(2, 3)), "0.666667");
        assert_eq!(fixed6(&q_frac(-2, 3)), "-0.666667");
        assert_eq!(fixed6(&q(-4)), "-4.000000");
        assert_eq!(fixed6(&q_frac(1, 2_000_000)), "0.000001");
        assert_eq!(fixed6(&q_frac(-1, 2_000_000)), "-0.000001");
        assert_eq!(fixed6(&q_frac(-1, 3_000_000)), "0.000000");
    }

    #[test]
    fn strip_of_segments() {
        let g = Graph::path(2);
        let params = TilingParams::new(&g, vec![2], OneCochain(vec![0])).unwrap();
        let tiles = tiles_in_box(&g, &params, &bbox(-2, 0, 2, 1), 10).unwrap();
        for (t, poly) in &tiles {
            assert_eq!(poly.len(), 2, "tile {:?}", t.f);
        }
        let centres: Vec<Q> = tiles.iter().map(|(t, _)| t.center.0[1].clone()).collect();
        assert!(centres.iter().all(|c| c.is_integer()));
        assert!(centres.contains(&q(0)) && centres.contains(&q(2)));
    }

    #[test]
    fn honeycomb_patch() {
        let g = Graph::complete(3);
        let tiles = tiles_in_box(&g, &TilingParams::unit(&g), &bbox(-2, -2, 2, 2), 10).unwrap();
        assert!(tiles.len() >= 7);
        assert!(tiles.iter().all(|(_, poly)| poly.len() == 6));
        let svg = render_tiling(&g, &TilingParams::unit(&g), &bbox(-2, -2, 2, 2), 10).unwrap();
        assert_eq!(svg.matches("<polygon").count(), tiles.len());
        assert_eq!(svg, render_tiling(&g, &TilingParams::unit(&g), &bbox(-2, -2, 2, 2), 10).unwrap());
    }

    #[test]
    fn polygons_carry_the_exact_vertices() {
        let g = Graph::complete(3);
        let params = TilingParams::new(&g, vec![1, 2, 1], OneCochain(vec![0, 1, -1])).unwrap();
        let bb = bbox(-2, -1, 1, 2);
        let svg = render_tiling(&g, &params, &bb, 10).unwrap();
        let tiles = tiles_in_box(&g, &params, &bb, 10).unwrap();
        assert!(!tiles.is_empty());
        for (t, _) in &tiles {
            let label = t.f.0.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            let line = svg
                .lines()
                .find(|l| l.contains(&format!(r#"data-f="{label}""#)))
                .expect("one polygon per tile");
            let drawn: std::collections::BTreeSet<&str> =
                line.split(r#"points=""#).nth(1).unwrap().split('"').next().unwrap().split(' ').collect();
            let exact: std::collections::BTreeSet<String> = t
                .vertices(&g)
                .unwrap()
                .iter()
                .map(|v| {
                    let (x, y) = project(v);
                    format!("{},{}", fixed6(&x), fixed6(&y))
                })
                .collect();
            assert_eq!(drawn, exact.iter().map(String::as_str).collect(), "tile {label}");
        }
    }

    #[test]
    fn empty_box_and_rank_limit() {
        let g = Graph::complete(3);
        let svg = render_tiling(&g, &TilingParams::unit(&g), &bbox(1, 0, 1, 3), 10).unwrap();
        assert!(!svg.contains("<polygon"));
        let k4 = Graph::complete(4);
        assert_eq!(
            render_tiling(&k4, &TilingParams::unit(&k4), &bbox(0, 0, 1, 1), 10),
            Err(Error::UnsupportedRank(3))
        );
    }
}
