//! JSON formats for graphs, configurations, tiles, binomials, and points.
//!
//! Field elements and rationals travel as strings (`"p/q"` or an integer) so
//! nothing is rounded. Object keys are emitted in sorted order.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::arrangement::{ArrangementConfig, EdgeState, RPoint};
use crate::degeneration::{EquationKind, FiberAssignment, TEquation};
use crate::error::{Error, Result};
use crate::field::{Field, FieldChoice, PrimeField, Rationals};
use crate::graph::{members, Edge, Graph, OneCochain, ZeroCochain};
use crate::lattice::Bond;
use crate::scalar::{format_half, format_rational_short, parse_half, parse_rational, Q};
use crate::toric::{Binomial, Monomial};
use crate::voronoi::{CacOrientation, SharedFace, Tile, TilingParams};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<EdgeFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    tail: String,
    head: String,
    #[serde(default)]
    name: Option<String>,
}

/// `{"vertices": [...], "edges": [{"tail": .., "head": .., "name"?: ..}]}`;
/// file order fixes indices and reference orientations.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text)?;
    let index = |name: &str| {
        file.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {name:?}")))
    };
    let mut edges = Vec::with_capacity(file.edges.len());
    let mut names = Vec::with_capacity(file.edges.len());
    for (i, e) in file.edges.iter().enumerate() {
        edges.push(Edge { tail: index(&e.tail)?, head: index(&e.head)? });
        names.push(e.name.clone().unwrap_or_else(|| format!("e{}", i + 1)));
    }
    Graph::with_edge_names(file.vertices, edges, names)
}

pub fn graph_json(g: &Graph) -> Value {
    json!({
        "vertices": g.vertex_names(),
        "edges": g.edges().iter().enumerate().map(|(e, ed)| json!({
            "name": g.edge_name(e),
            "tail": g.vertex_name(ed.tail),
            "head": g.vertex_name(ed.head),
        })).collect::<Vec<_>>(),
    })
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    lengths: Option<Vec<i64>>,
    twist: Option<Vec<i64>>,
    a: Option<Vec<String>>,
    b: Option<Vec<String>>,
    field: Option<String>,
    tree: Option<Vec<String>>,
}

/// Everything read from a configuration file, before a field is fixed.
#[derive(Clone, Debug)]
pub struct RawConfig {
    pub params: TilingParams,
    pub a: Option<Vec<Q>>,
    pub b: Option<Vec<Q>>,
    pub field: FieldChoice,
    pub tree: Option<Vec<usize>>,
}

impl RawConfig {
    pub fn trivial(g: &Graph) -> Self {
        RawConfig {
            params: TilingParams::unit(g),
            a: None,
            b: None,
            field: FieldChoice::Rationals,
            tree: None,
        }
    }
}

/// `{"lengths", "twist", "a", "b", "field", "tree"}`, every key optional:
/// unit lengths, zero twist, trivial characters, `"q"`, greedy tree.
pub fn parse_config(g: &Graph, text: &str) -> Result<RawConfig> {
    let file: ConfigFile = serde_json::from_str(text)?;
    let m = g.edge_count();
    let params = TilingParams::new(
        g,
        file.lengths.unwrap_or_else(|| vec![1; m]),
        OneCochain(file.twist.unwrap_or_else(|| vec![0; m])),
    )?;
    let rationals = |xs: Option<Vec<String>>| -> Result<Option<Vec<Q>>> {
        xs.map(|v| v.iter().map(|s| parse_rational(s)).collect()).transpose()
    };
    let tree = file
        .tree
        .map(|names| {
            names
                .iter()
                .map(|n| g.edge_index(n).ok_or_else(|| Error::Validation(format!("unknown edge {n:?} in tree"))))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(RawConfig {
        params,
        a: rationals(file.a)?,
        b: rationals(file.b)?,
        field: file.field.as_deref().map(FieldChoice::parse).transpose()?.unwrap_or(FieldChoice::Rationals),
        tree,
    })
}

/// An arrangement configuration over whichever field was chosen.
#[derive(Clone, Debug)]
pub enum AnyConfig {
    Rational(ArrangementConfig<Rationals>),
    Prime(ArrangementConfig<PrimeField>),
}

/// Runs an expression with `$cfg` bound to the concrete configuration.
#[macro_export]
macro_rules! with_config {
    ($any:expr, $cfg:ident => $body:expr) => {
        match $any {
            $crate::io::AnyConfig::Rational($cfg) => $body,
            $crate::io::AnyConfig::Prime($cfg) => $body,
        }
    };
}

impl AnyConfig {
    pub fn build(g: &Graph, raw: &RawConfig) -> Result<Self> {
        match raw.field {
            FieldChoice::Rationals => Ok(AnyConfig::Rational(typed_config(g, raw, Rationals)?)),
            FieldChoice::Prime(p) => Ok(AnyConfig::Prime(typed_config(g, raw, PrimeField::new(p)?)?)),
        }
    }

    pub fn graph(&self) -> &Graph {
        with_config!(self, c => &c.graph)
    }

    pub fn params(&self) -> &TilingParams {
        with_config!(self, c => &c.params)
    }
}

fn typed_config<F: Field>(g: &Graph, raw: &RawConfig, field: F) -> Result<ArrangementConfig<F>> {
    let convert = |xs: &Option<Vec<Q>>, len: usize| -> Result<Vec<F::Elem>> {
        match xs {
            Some(v) => v.iter().map(|x| field.from_rational(x)).collect(),
            None => Ok(vec![field.one(); len]),
        }
    };
    let a = convert(&raw.a, g.edge_count())?;
    let b = convert(&raw.b, g.cycle_rank())?;
    ArrangementConfig::new(g.clone(), raw.params.clone(), field, a, b, raw.tree.clone())
}

/// Comma-separated integers.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {t:?}"))))
        .collect()
}

/// Comma-separated rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_rational).collect()
}

pub fn q_json(x: &Q) -> Value {
    Value::String(format_rational_short(x))
}

fn vertex_set_json(g: &Graph, set: u64) -> Value {
    json!(members(set, g.vertex_count())
        .into_iter()
        .map(|v| g.vertex_name(v))
        .collect::<Vec<_>>())
}

fn active_names(g: &Graph, mask: &[bool]) -> Vec<String> {
    (0..mask.len()).filter(|&e| mask[e]).map(|e| g.edge_name(e).to_string()).collect()
}

pub fn bond_json(g: &Graph, b: &Bond) -> Value {
    json!({
        "set": vertex_set_json(g, b.set),
        "cut": b.cochain.0,
        "norm_sq": b.norm_sq,
    })
}

pub fn cac_json(g: &Graph, d: &CacOrientation) -> Value {
    json!({
        "edges": d.labels(g),
        "partition": d.partition.iter().map(|part| {
            part.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

pub fn levels_json(level: &crate::voronoi::LevelVector) -> Value {
    json!(level.0.iter().map(|&d| format_half(d)).collect::<Vec<_>>())
}

pub fn tile_json(g: &Graph, t: &Tile) -> Value {
    json!({
        "f": t.f.0,
        "level": levels_json(&t.level),
        "active": active_names(g, &t.active),
        "center": t.center.0.iter().map(q_json).collect::<Vec<_>>(),
        "facets": t.facets.iter().map(|h| json!({
            "set": vertex_set_json(g, h.set),
            "bound": q_json(&h.bound),
        })).collect::<Vec<_>>(),
    })
}

pub fn shared_face_json(g: &Graph, s: &SharedFace) -> Value {
    json!({
        "alpha": levels_json(&s.alpha),
        "d1": s.d1.labels(g),
        "d2": s.d2.labels(g),
        "components": s.components.iter().map(|c| json!({
            "vertices": c.vertices.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>(),
            "edges": c.edges.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn monomial_json(g: &Graph, m: &Monomial) -> Value {
    let mut out = Vec::new();
    for (v, k) in m {
        for _ in 0..*k {
            out.push(json!([g.edge_name(v.edge), v.level, if v.plus { "+" } else { "-" }]));
        }
    }
    Value::Array(out)
}

pub fn binomial_json<F: Field>(g: &Graph, field: &F, b: &Binomial<F::Elem>) -> Value {
    json!({
        "lhs": monomial_json(g, &b.lhs),
        "rhs": monomial_json(g, &b.rhs),
        "coeff": field.format(&b.coeff),
    })
}

pub fn t_equation_json<F: Field>(g: &Graph, field: &F, eq: &TEquation<F::Elem>) -> Value {
    let kind = match &eq.kind {
        EquationKind::Edge { edge, i, j } => json!({"edge": g.edge_name(*edge), "i": i, "j": j}),
        EquationKind::Cycle { gamma, alpha } => json!({"gamma": gamma.0, "alpha": alpha.0}),
    };
    json!({
        "kind": kind,
        "lhs": monomial_json(g, &eq.lhs),
        "rhs": monomial_json(g, &eq.rhs),
        "coeff": field.format(&eq.coeff),
        "t_exp": eq.t_exp,
    })
}

pub fn point_json<F: Field>(g: &Graph, field: &F, p: &RPoint<F::Elem>) -> Value {
    json!(p
        .edges
        .iter()
        .enumerate()
        .map(|(e, s)| match s {
            EdgeState::Node(d) => json!({"edge": g.edge_name(e), "kind": "node", "level": format_half(*d)}),
            EdgeState::Interior { level, ratio } => json!({
                "edge": g.edge_name(e),
                "kind": "interior",
                "level": level,
                "ratio": field.format(ratio),
            }),
        })
        .collect::<Vec<_>>())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeStateFile {
    edge: String,
    kind: String,
    level: Value,
    #[serde(default)]
    ratio: Option<String>,
}

/// Inverse of [`point_json`]; edges may appear in any order but each once.
pub fn parse_point<F: Field>(g: &Graph, field: &F, text: &str) -> Result<RPoint<F::Elem>> {
    let items: Vec<EdgeStateFile> = serde_json::from_str(text)?;
    let mut edges: Vec<Option<EdgeState<F::Elem>>> = vec![None; g.edge_count()];
    for item in items {
        let e = g
            .edge_index(&item.edge)
            .ok_or_else(|| Error::Validation(format!("unknown edge {:?}", item.edge)))?;
        let level = match &item.level {
            Value::Number(n) => n
                .as_i64()
                .map(|v| 2 * v)
                .ok_or_else(|| Error::Parse(format!("bad level on {}", item.edge)))?,
            Value::String(s) => parse_half(s)?,
            _ => return Err(Error::Parse(format!("bad level on {}", item.edge))),
        };
        let state = match item.kind.as_str() {
            "node" if level % 2 != 0 => EdgeState::Node(level),
            "node" => return Err(Error::Validation(format!("node on {} needs a half-integer level", item.edge))),
            "interior" if level % 2 == 0 => {
                let ratio = item
                    .ratio
                    .as_deref()
                    .ok_or_else(|| Error::Parse(format!("interior point on {} needs a ratio", item.edge)))?;
                EdgeState::Interior { level: level / 2, ratio: field.parse_unit(ratio)? }
            }
            "interior" => return Err(Error::Validation(format!("interior point on {} needs an integer level", item.edge))),
            other => return Err(Error::Parse(format!("unknown kind {other:?}"))),
        };
        if edges[e].replace(state).is_some() {
            return Err(Error::Validation(format!("edge {} given twice", item.edge)));
        }
    }
    let edges = edges
        .into_iter()
        .enumerate()
        .map(|(e, s)| s.ok_or_else(|| Error::Validation(format!("edge {} missing", g.edge_name(e)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RPoint { edges })
}

pub fn assignment_json<F: Field>(g: &Graph, field: &F, a: &FiberAssignment<F::Elem>) -> Value {
    let map: serde_json::Map<String, Value> = (0..g.edge_count())
        .map(|e| {
            let levels: Vec<Value> = (-a.window[e]..=a.window[e])
                .map(|i| {
                    let (x, xbar) = a.get(e, i);
                    json!({"level": i, "x": field.format(x), "xbar": field.format(xbar)})
                })
                .collect();
            (g.edge_name(e).to_string(), Value::Array(levels))
        })
        .collect();
    Value::Object(map)
}

pub fn cochain_json(f: &ZeroCochain<i64>) -> Value {
    json!(f.0)
}

pub fn elems_json<F: Field>(field: &F, xs: &[F::Elem]) -> Value {
    json!(xs.iter().map(|x| field.format(x)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::base_point;
    use crate::scalar::q;

    const K3: &str = r#"{"vertices":["v1","v2","v3"],"edges":[
        {"tail":"v1","head":"v2"},{"tail":"v2","head":"v3"},{"tail":"v1","head":"v3"}]}"#;

    #[test]
    fn graph_file_matches_builder() {
        assert_eq!(parse_graph(K3).unwrap(), Graph::complete(3));
        assert!(matches!(
            parse_graph(r#"{"vertices":["a"],"edges":[{"tail":"a","head":"a"}]}"#),
            Err(Error::InvalidGraph(_))
        ));
        assert!(parse_graph(r#"{"vertices":["a"],"edges":[],"extra":1}"#).is_err());
    }

    #[test]
    fn config_defaults_and_field() {
        let g = Graph::complete(3);
        let raw = parse_config(&g, "{}").unwrap();
        assert_eq!(raw.params, TilingParams::unit(&g));
        let raw = parse_config(&g, r#"{"a":["2","1/3","1"],"b":["5"],"field":"fp:7"}"#).unwrap();
        let AnyConfig::Prime(cfg) = AnyConfig::build(&g, &raw).unwrap() else {
            panic!("expected a prime field");
        };
        assert_eq!(cfg.a, vec![2, 5, 1]);
        assert!(parse_config(&g, r#"{"lengths":[1,0,1]}"#).is_err());
        assert!(AnyConfig::build(&g, &parse_config(&g, r#"{"b":["1","2"]}"#).unwrap()).is_err());
    }

    #[test]
    fn point_round_trip() {
        let g = Graph::complete(3);
        let params = TilingParams::new(&g, vec![2, 1, 1], OneCochain(vec![0, 0, 0])).unwrap();
        let cfg = ArrangementConfig::new(g.clone(), params, Rationals, vec![q(2); 3], vec![q(1)], None).unwrap();
        let p = base_point(&cfg, 1, &ZeroCochain(vec![0, 1, 3])).unwrap();
        let text = point_json(&g, &Rationals, &p).to_string();
        assert!(text.contains(r#""kind":"node","level":"1/2""#));
        assert_eq!(parse_point(&g, &Rationals, &text).unwrap(), p);
        assert!(parse_point(&g, &Rationals, "[]").is_err());
    }
}
