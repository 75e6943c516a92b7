//! The `tortile` command line: one subcommand per computation, JSON out.
//!
//! Exit status is 0 on success, 1 for usage errors, 2 for invalid input and
//! 3 when a window or size limit is hit.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arrangement::{act, base_point, classify_orbit, member_y, zeta_exponent, zeta_point, ArrangementConfig};
use crate::cycles::simple_cycles;
use crate::degeneration::{evaluate_family, family_equations, solve_generic_fiber};
use crate::error::{Error, Result};
use crate::field::{Field, FieldChoice};
use crate::graph::{Graph, OneCochain, ZeroCochain};
use crate::io::{self, AnyConfig, RawConfig};
use crate::lattice::{enumerate_bonds, laplacian_lattice_index, spanning_tree_count};
use crate::render::{render_tiling, BoundingBox};
use crate::scalar::Q;
use crate::toric::cycle_binomials;
use crate::voronoi::{cell_geometry, enumerate_cac, locate_point, tiles_adjacent, CoveringBound, TileCatalog};
use crate::with_config;

#[derive(Parser, Debug)]
#[command(name = "tortile", version, about = "Twisted Voronoi tilings of graphs and their toric arrangements")]
pub struct Cli {
    /// Graph JSON file.
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Configuration JSON file: lengths, twist, a, b, field, tree.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Enumeration window; each command has its own default.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Drawing box `x0,y0,x1,y1` for `render`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub bbox: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `q` or `fp:P`; overrides the configuration file.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate the inputs and summarize them.
    Check,
    /// Spanning-tree count and the index of the Laplacian lattice.
    Trees,
    /// Bond elements of the graph.
    Bonds,
    /// Coherent acyclic orientations of cut subgraphs.
    Cac,
    /// Vertices and faces of the Voronoi cell.
    Cell,
    /// Every tile with `|f(v)| ≤ window`.
    Tiles,
    /// Tiles containing a point of `H_0`.
    Locate {
        /// Comma-separated rational coordinates summing to zero.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Intersection of two tiles, or every intersecting pair in the window.
    Adjacency {
        #[arg(long, allow_hyphen_values = true, requires = "f2")]
        f1: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "f1")]
        f2: Option<String>,
    },
    /// Cycle binomials of the toric variety of a tile.
    Ideal {
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
    },
    /// The base point of the orbit indexed by `(n, f)`, optionally moved by a character.
    Point {
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: i64,
        /// Character values per vertex, comma-separated.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "random_act")]
        act: Option<String>,
        /// Act by a character drawn from `--seed`.
        #[arg(long)]
        random_act: bool,
    },
    /// Membership in `Y` and orbit data of a point read from a JSON file.
    Orbit {
        #[arg(long)]
        point: PathBuf,
    },
    /// Points `(p : q)` of the cycle equations at one `α`.
    Zeta {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// A single cycle; all simple cycles when omitted.
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
    },
    /// A point of the general fiber of the degeneration, or its equations.
    Fiber {
        /// Nonzero parameter value; drawn from `--seed` when omitted.
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<String>,
        /// Print the family equations instead.
        #[arg(long)]
        equations: bool,
    },
    /// SVG picture of the tiling inside `--bbox` (rank at most two).
    Render,
}

/// `orbit` accepts the output of `point` as well as a bare point array.
fn unwrap_point_record(text: &str) -> String {
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(serde_json::Value::Object(mut obj)) if obj.contains_key("point") => {
            obj.remove("point").map(|p| p.to_string()).unwrap_or_default()
        }
        _ => text.to_owned(),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_capacity() {
        3
    } else {
        2
    }
}

/// Parses `args` (program name first), runs, and reports to the writers.
pub fn run_with(args: impl IntoIterator<Item = OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 1;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let Some(graph_path) = cli.graph.clone() else {
        let _ = writeln!(stderr, "error: --graph is required\n\nFor more information, try '--help'.");
        return 1;
    };
    let result = load(&cli, &graph_path).and_then(|(g, raw)| execute(&cli, &g, &raw));
    match result {
        Ok(text) => match &cli.out {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    2
                }
            },
            None => {
                let _ = stdout.write_all(text.as_bytes());
                0
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

fn load(cli: &Cli, graph_path: &PathBuf) -> Result<(Graph, RawConfig)> {
    let g = io::parse_graph(&read(graph_path)?)?;
    let mut raw = match &cli.config {
        Some(p) => io::parse_config(&g, &read(p)?)?,
        None => RawConfig::trivial(&g),
    };
    if let Some(f) = &cli.field {
        raw.field = FieldChoice::parse(f)?;
    }
    Ok((g, raw))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn vertex_ints(g: &Graph, s: Option<&str>) -> Result<ZeroCochain<i64>> {
    let v = match s {
        Some(s) => io::parse_int_list(s)?,
        None => vec![0; g.vertex_count()],
    };
    if v.len() != g.vertex_count() {
        return Err(Error::Validation(format!("expected {} vertex values, got {}", g.vertex_count(), v.len())));
    }
    Ok(ZeroCochain(v))
}

fn edge_ints(g: &Graph, s: Option<&str>) -> Result<OneCochain<i64>> {
    let v = match s {
        Some(s) => io::parse_int_list(s)?,
        None => vec![0; g.edge_count()],
    };
    if v.len() != g.edge_count() {
        return Err(Error::Validation(format!("expected {} edge values, got {}", g.edge_count(), v.len())));
    }
    Ok(OneCochain(v))
}

fn window_or(cli: &Cli, default: i64) -> Result<i64> {
    let w = cli.window.unwrap_or(default);
    if w < 0 {
        return Err(Error::Validation("window must be nonnegative".into()));
    }
    Ok(w)
}

fn execute(cli: &Cli, g: &Graph, raw: &RawConfig) -> Result<String> {
    let params = &raw.params;
    let value = match &cli.command {
        Command::Check => {
            let cfg = AnyConfig::build(g, raw)?;
            let (field, tree) = with_config!(&cfg, c => (
                c.field.name(),
                c.cycles.tree.iter().map(|&e| g.edge_name(e).to_string()).collect::<Vec<_>>(),
            ));
            json!({
                "graph": io::graph_json(g),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "cycle_rank": g.cycle_rank(),
                "lengths": params.lengths,
                "twist": params.twist.0,
                "field": field,
                "tree": tree,
            })
        }
        Command::Trees => json!({
            "spanning_trees": big(&spanning_tree_count(g)),
            "lattice_index": big(&laplacian_lattice_index(g)),
        }),
        Command::Bonds => json!(enumerate_bonds(g)?.iter().map(|b| io::bond_json(g, b)).collect::<Vec<_>>()),
        Command::Cac => json!(enumerate_cac(g)?.elements.iter().map(|d| io::cac_json(g, d)).collect::<Vec<_>>()),
        Command::Cell => {
            let cell = cell_geometry(g)?;
            json!({
                "dimension": cell.dimension(),
                "f_vector": cell.f_vector(),
                "vertices": cell.vertices_h0(g).iter().map(|x| x.0.iter().map(io::q_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "faces": cell.faces.iter().map(|f| json!({
                    "dim": f.dim,
                    "vertices": f.vertices,
                    "orientation": f.orientation.iter().map(|&oe| g.oriented_label(oe)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })
        }
        Command::Tiles => {
            let catalog = TileCatalog::new(g, params, window_or(cli, 2)?)?;
            json!({
                "window": catalog.window(),
                "tiles": catalog.tiles().iter().map(|t| io::tile_json(g, t)).collect::<Vec<_>>(),
            })
        }
        Command::Locate { point } => {
            let x: Vec<Q> = io::parse_rational_list(point)?;
            let x = ZeroCochain(x);
            if x.len() != g.vertex_count() {
                return Err(Error::Validation(format!("point needs {} coordinates", g.vertex_count())));
            }
            let window = match cli.window {
                Some(w) => w,
                None => CoveringBound::new(g, params).window(&x),
            };
            let tiles = locate_point(g, params, &x, window)?;
            json!({
                "window": window,
                "tiles": tiles.iter().map(|t| io::tile_json(g, t)).collect::<Vec<_>>(),
            })
        }
        Command::Adjacency { f1: Some(f1), f2: Some(f2) } => {
            let (f1, f2) = (vertex_ints(g, Some(f1))?, vertex_ints(g, Some(f2))?);
            let face = tiles_adjacent(g, params, &f1, &f2)?;
            json!({
                "f1": f1.0,
                "f2": f2.0,
                "adjacent": face.is_some(),
                "face": face.map(|s| io::shared_face_json(g, &s)),
            })
        }
        Command::Adjacency { .. } => {
            let catalog = TileCatalog::new(g, params, window_or(cli, 1)?)?;
            let tiles = catalog.tiles();
            let mut pairs = Vec::new();
            for i in 0..tiles.len() {
                for j in i + 1..tiles.len() {
                    if let Some(s) = tiles_adjacent(g, params, &tiles[i].f, &tiles[j].f)? {
                        pairs.push(json!({"f1": tiles[i].f.0, "f2": tiles[j].f.0, "face": io::shared_face_json(g, &s)}));
                    }
                }
            }
            json!({"window": catalog.window(), "pairs": pairs})
        }
        Command::Ideal { f } => {
            let f = vertex_ints(g, f.as_deref())?;
            let tile = crate::voronoi::build_tile(g, params, &f)?;
            let cfg = AnyConfig::build(g, raw)?;
            with_config!(&cfg, c => {
                let bs = cycle_binomials(g, &tile.active, &tile.level, &c.field, &c.a, c.b_edge())?;
                json!(bs.iter().map(|b| io::binomial_json(g, &c.field, b)).collect::<Vec<_>>())
            })
        }
        Command::Point { f, n, act: chars, random_act } => {
            let f = vertex_ints(g, f.as_deref())?;
            let cfg = AnyConfig::build(g, raw)?;
            with_config!(&cfg, c => point_command(c, &f, *n, chars.as_deref(), *random_act, cli.seed)?)
        }
        Command::Orbit { point } => {
            let text = unwrap_point_record(&read(point)?);
            let cfg = AnyConfig::build(g, raw)?;
            let window = window_or(cli, 6)?;
            with_config!(&cfg, c => {
                let p = io::parse_point(g, &c.field, &text)?;
                let member = member_y(c, &p, window)?;
                let orbit = classify_orbit(c, &p)?;
                json!({
                    "member": member.map(|f| f.0),
                    "orbit": orbit.map(|(n, f, ch)| json!({"n": n, "f": f.0, "c": io::elems_json(&c.field, &ch)})),
                })
            })
        }
        Command::Zeta { alpha, gamma } => {
            let alpha = edge_ints(g, alpha.as_deref())?;
            let gammas: Vec<OneCochain<i64>> = match gamma {
                Some(s) => vec![edge_ints(g, Some(s))?],
                None => simple_cycles(g, &vec![true; g.edge_count()])
                    .iter()
                    .map(|c| c.cochain(g.edge_count()))
                    .collect(),
            };
            let cfg = AnyConfig::build(g, raw)?;
            with_config!(&cfg, c => {
                let mut out = Vec::new();
                for gamma in &gammas {
                    let z = zeta_point(c, &alpha, gamma)?;
                    out.push(json!({
                        "gamma": gamma.0,
                        "alpha": alpha.0,
                        "exponent": zeta_exponent(&c.params, &alpha, gamma),
                        "p": c.field.format(&z.p),
                        "q": c.field.format(&z.q),
                    }));
                }
                json!(out)
            })
        }
        Command::Fiber { t0, equations } => {
            let window = vec![window_or(cli, 3)?; g.edge_count()];
            let cfg = AnyConfig::build(g, raw)?;
            with_config!(&cfg, c => fiber_command(c, t0.as_deref(), *equations, &window, cli.seed)?)
        }
        Command::Render => {
            let bbox = BoundingBox::parse(cli.bbox.as_deref().unwrap_or("-2,-2,2,2"))?;
            return render_tiling(g, params, &bbox, window_or(cli, 20)?);
        }
    };
    Ok(pretty(&value))
}

fn big(x: &num_bigint::BigInt) -> Value {
    // Counts beyond u64 are printed as strings.
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn parse_units<F: Field>(field: &F, s: &str, len: usize) -> Result<Vec<F::Elem>> {
    let v = s.split(',').map(|t| field.parse_unit(t)).collect::<Result<Vec<_>>>()?;
    if v.len() != len {
        return Err(Error::Validation(format!("expected {len} values, got {}", v.len())));
    }
    Ok(v)
}

fn point_command<F: Field>(
    cfg: &ArrangementConfig<F>,
    f: &ZeroCochain<i64>,
    n: i64,
    chars: Option<&str>,
    random_act: bool,
    seed: u64,
) -> Result<Value> {
    let g = &cfg.graph;
    let mut p = base_point(cfg, n, f)?;
    let c = match chars {
        Some(s) => Some(parse_units(&cfg.field, s, g.vertex_count())?),
        None if random_act => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Some((0..g.vertex_count()).map(|_| cfg.field.random_unit(&mut rng)).collect())
        }
        None => None,
    };
    if let Some(c) = &c {
        p = act(cfg, c, &p)?;
    }
    Ok(json!({
        "n": n,
        "f": f.0,
        "character": c.map(|c| io::elems_json(&cfg.field, &c)),
        "point": io::point_json(g, &cfg.field, &p),
    }))
}

fn fiber_command<F: Field>(cfg: &ArrangementConfig<F>, t0: Option<&str>, equations: bool, window: &[i64], seed: u64) -> Result<Value> {
    let g = &cfg.graph;
    let fld = &cfg.field;
    let eqs = family_equations(cfg, window)?;
    if equations {
        return Ok(json!(eqs.iter().map(|e| io::t_equation_json(g, fld, e)).collect::<Vec<_>>()));
    }
    let t0 = match t0 {
        Some(s) => fld.parse_unit(s)?,
        None => fld.random_unit(&mut ChaCha8Rng::seed_from_u64(seed)),
    };
    let a = solve_generic_fiber(cfg, &t0, window)?;
    Ok(json!({
        "t0": fld.format(&t0),
        "window": window,
        "satisfies_family": evaluate_family(cfg, &eqs, &a, &t0),
        "coordinates": io::assignment_json(g, fld, &a),
    }))
}
