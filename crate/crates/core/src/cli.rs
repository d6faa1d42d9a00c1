//! The `fano-mut` command-line tool.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::diophantine::{build_mutation_tree, derive_equation, descend_to_minimal, MutationTree, Solution, TreeBounds};
use crate::fwps::{edge_cones, one_step_targets, weights_of, FwpsInvariants, QuotientSingularity, WeightTriple};
use crate::lattice::{FanoPolygon, FanoPolygonLike, LatticePoint, Point2, WidthVector};
use crate::mutation::{enumerate_one_step, mutate_with_factor, Factor};
use crate::pell::{component_of, family_a1_fixed, family_a2_fixed, scan_components};
use crate::schema::{
    rational_text, AnalyzeDoc, ComponentDoc, DescentDoc, EnumerateDoc, EquationDoc, MutationDoc, PellRowDoc,
    PolygonDoc, SingularityDoc, TreeDoc, WeightTargetDoc, WeightsDoc,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "fano-mut", version, about = "Mutations of Fano polygons and fake weighted projective planes")]
pub struct Cli {
    /// Output format; `dot` is only available for `tree`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PolygonInput {
    /// JSON document `{"vertices": [["x","y"], ...]}`; `-` reads standard input.
    pub input: Option<String>,
    /// Inline vertices, e.g. `1,-1;-1,2;0,-1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub vertices: Option<String>,
}

#[derive(Debug, Args)]
pub struct WeightsInput {
    /// JSON document `{"weights": ["l0","l1","l2"], "mult": "n"}`; `-` reads standard input.
    pub input: Option<String>,
    /// Inline weights, e.g. `1,1,4`.
    #[arg(long, conflicts_with = "input")]
    pub weights: Option<String>,
    /// Multiplicity for inline weights.
    #[arg(long, requires = "weights")]
    pub mult: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    A1,
    A2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weights, multiplicity, degree and edge singularities of a Fano triangle.
    Analyze(PolygonInput),
    /// Mutate a Fano polygon with the given width vector and factor `conv{0, factor}`.
    Mutate {
        #[command(flatten)]
        input: PolygonInput,
        #[arg(long, allow_hyphen_values = true)]
        width: String,
        #[arg(long, allow_hyphen_values = true)]
        factor: String,
    },
    /// All one-step mutations up to unimodular equivalence.
    Enumerate {
        #[command(flatten)]
        input: PolygonInput,
        /// Keep only triangle outputs.
        #[arg(long)]
        triangles_only: bool,
    },
    /// Weight mutation at one sorted position, or every candidate if omitted.
    WeightsMutate {
        #[command(flatten)]
        input: WeightsInput,
        #[arg(long)]
        pivot: Option<usize>,
    },
    /// Descend to the minimal weights of the mutation component.
    Minimal(WeightsInput),
    /// Mutation tree rooted at the minimal weights (default depth 5).
    Tree {
        #[command(flatten)]
        input: WeightsInput,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: Option<u64>,
        #[arg(long)]
        max_height: Option<String>,
    },
    /// The Diophantine equation and solution attached to ordered weights.
    Diophantine(WeightsInput),
    /// Classify the cyclic quotient singularity `1/r(a, b)`.
    Tsing {
        #[arg(long)]
        r: String,
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "1")]
        b: String,
    },
    /// Families and components of `12x0x1x2 = 3x0^2+5x1^2+7x2^2`.
    Pell {
        #[arg(long, value_enum, conflicts_with_all = ["component", "scan"])]
        family: Option<Family>,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Component of the solution `a0,a1,a2`.
        #[arg(long, conflicts_with = "scan")]
        component: Option<String>,
        /// All components with `a1, a2` up to this bound.
        #[arg(long)]
        scan: Option<u64>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| anyhow!(e.to_string()))?;
    execute(&cli, stdin)
}

/// Runs a parsed command and returns the rendered document.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String> {
    if cli.format == Format::Dot && !matches!(cli.command, Command::Tree { .. }) {
        bail!("dot output is only available for the tree command");
    }
    let fmt = cli.format;
    match &cli.command {
        Command::Analyze(input) => analyze(&read_polygon(input, stdin)?, fmt),
        Command::Mutate { input, width, factor } => {
            let p = read_polygon(input, stdin)?;
            let [a, b] = parse_list::<2>(width, "width")?;
            let w = WidthVector::new(a, b)?;
            let [x, y] = parse_list::<2>(factor, "factor")?;
            let f = Factor::from_endpoint(w, &Point2::new(x, y))?;
            let out = mutate_with_factor(&p, &f)?;
            let doc = PolygonDoc::of(&out);
            render(&doc, fmt, || polygon_text(&out))
        }
        Command::Enumerate { input, triangles_only } => {
            let p = read_polygon(input, stdin)?;
            let found = enumerate_one_step(&p, *triangles_only);
            let doc = EnumerateDoc {
                mutations: found.iter().map(MutationDoc::new).collect(),
            };
            render(&doc, fmt, || {
                let mut s = format!("{} mutation(s)\n", found.len());
                for (m, d) in found.iter().zip(&doc.mutations) {
                    let e = m.factor.endpoint();
                    let _ = write!(s, "w=({}, {}) factor=({}, {}): {}", d.width[0], d.width[1], e.x, e.y, polygon_text(&m.polygon));
                }
                s
            })
        }
        Command::WeightsMutate { input, pivot } => {
            let (w, mult) = read_weights(input, stdin)?;
            let inv = FwpsInvariants::from_weights(WeightTriple::new(w[0].clone(), w[1].clone(), w[2].clone())?, mult);
            match pivot {
                Some(p) => {
                    let target = crate::fwps::mutate_weights(&inv.weights, *p)?;
                    let doc = WeightsDoc::new(&target, &inv.mult);
                    render(&doc, fmt, || format!("{target}\n"))
                }
                None => {
                    let targets = one_step_targets(&inv);
                    let doc: Vec<WeightTargetDoc> = targets.iter().map(WeightTargetDoc::from).collect();
                    render(&doc, fmt, || {
                        targets
                            .iter()
                            .map(|t| format!("pivot {}: {} T={} exact={}\n", t.pivot, t.weights, t.t_singular, t.exact))
                            .collect()
                    })
                }
            }
        }
        Command::Minimal(input) => {
            let (w, _) = read_weights(input, stdin)?;
            let path = descend_to_minimal(&WeightTriple::new(w[0].clone(), w[1].clone(), w[2].clone())?)?;
            let doc = DescentDoc::new(&path);
            render(&doc, fmt, || {
                let steps: Vec<String> = path.iter().map(|w| format!("{w} h={}", w.sum())).collect();
                format!("{}\n", steps.join(" -> "))
            })
        }
        Command::Tree { input, depth, max_height } => {
            let (w, _) = read_weights(input, stdin)?;
            let mut bounds = TreeBounds {
                max_depth: depth.map(|d| d as usize),
                max_height: max_height.as_deref().map(|h| parse_int(h, "max-height")).transpose()?,
            };
            if bounds.max_height.as_ref().is_some_and(|h| !h.is_positive()) {
                bail!("max-height must be positive");
            }
            if bounds.max_depth.is_none() && bounds.max_height.is_none() {
                bounds.max_depth = Some(5);
            }
            let tree = build_mutation_tree(&WeightTriple::new(w[0].clone(), w[1].clone(), w[2].clone())?, &bounds)?;
            match fmt {
                Format::Dot => Ok(tree.to_dot()),
                _ => render(&TreeDoc::from(&tree), fmt, || tree_text(&tree)),
            }
        }
        Command::Diophantine(input) => {
            let (w, _) = read_weights(input, stdin)?;
            let (eq, sol, general) = derive_equation(&w)?;
            let doc = EquationDoc::new(&w, &eq, &sol, &general);
            render(&doc, fmt, || {
                format!("{}\nsolution {}\ndegree {}\n", eq, sol, rational_text(&eq.degree_expression()))
            })
        }
        Command::Tsing { r, a, b } => {
            let s = QuotientSingularity::from_type(parse_int(r, "r")?, parse_int(a, "a")?, parse_int(b, "b")?)?;
            let doc = SingularityDoc::from(&s);
            render(&doc, fmt, || format!("{s} T={}\n", s.is_t_singularity()))
        }
        Command::Pell {
            family,
            count,
            component,
            scan,
        } => {
            if let Some(text) = component {
                let [a0, a1, a2] = parse_list::<3>(text, "component")?;
                let c = component_of(&Solution([a0, a1, a2]))?;
                return render(&ComponentDoc::from(&c), fmt, || format!("{c}\n"));
            }
            if let Some(bound) = scan {
                let comps = scan_components(*bound);
                let doc: Vec<ComponentDoc> = comps.iter().map(ComponentDoc::from).collect();
                return render(&doc, fmt, || comps.iter().map(|c| format!("{c}\n")).collect());
            }
            if *count == 0 {
                bail!("count must be positive");
            }
            let rows = match family.unwrap_or(Family::A1) {
                Family::A1 => family_a1_fixed(*count),
                Family::A2 => family_a2_fixed(*count),
            };
            let doc: Vec<PellRowDoc> = rows.iter().map(PellRowDoc::from).collect();
            render(&doc, fmt, || {
                rows.iter()
                    .map(|r| format!("n={} a0={} a1={} a2={} M={}\n", r.n, r.a0, r.a1, r.a2, r.m))
                    .collect()
            })
        }
    }
}

fn render<T: Serialize>(doc: &T, fmt: Format, text: impl FnOnce() -> String) -> Result<String> {
    match fmt {
        Format::Json => Ok(serde_json::to_string_pretty(doc)? + "\n"),
        Format::Text => Ok(text()),
        Format::Dot => bail!("dot output is only available for the tree command"),
    }
}

fn analyze(p: &FanoPolygon, fmt: Format) -> Result<String> {
    let t = p
        .as_triangle()
        .ok_or_else(|| anyhow!("analyze needs a triangle, got {} vertices", p.vertices().len()))?;
    let inv = weights_of(&t);
    let edges = edge_cones(&t);
    let targets = one_step_targets(&inv);
    let doc = AnalyzeDoc::new(t.vertices(), &inv, &edges, &targets);
    render(&doc, fmt, || {
        let mut s = String::new();
        let _ = writeln!(s, "vertices {}", points_text(t.vertices()));
        let _ = writeln!(s, "weights {} mult {} degree {}", inv.weights, inv.mult, doc.degree);
        for e in &edges {
            let _ = writeln!(
                s,
                "edge {}-{} length {} {} T={}",
                point_text(&e.edge.0),
                point_text(&e.edge.1),
                e.lattice_length,
                e.singularity,
                e.singularity.is_t_singularity()
            );
        }
        s
    })
}

fn tree_text(tree: &MutationTree) -> String {
    let mut s = String::new();
    for n in tree.nodes() {
        let mark = if n.truncated { " ..." } else { "" };
        let _ = writeln!(s, "{}{} h={}{}", "  ".repeat(n.depth), n.weights, n.height, mark);
    }
    s
}

fn point_text(p: &LatticePoint) -> String {
    format!("({}, {})", p.x, p.y)
}

fn points_text(ps: &[LatticePoint]) -> String {
    ps.iter().map(point_text).collect::<Vec<_>>().join(" ")
}

fn polygon_text(p: &FanoPolygon) -> String {
    format!("{}\n", points_text(p.vertices()))
}

fn read_source(input: Option<&str>, stdin: &mut dyn Read) -> Result<String> {
    match input {
        None | Some("-") => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).context("reading standard input")?;
            Ok(s)
        }
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
    }
}

fn read_polygon(input: &PolygonInput, stdin: &mut dyn Read) -> Result<FanoPolygon> {
    let points = match &input.vertices {
        Some(inline) => inline
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|pair| parse_list::<2>(pair, "vertex").map(|[x, y]| Point2::new(x, y)))
            .collect::<Result<Vec<_>>>()?,
        None => {
            let text = read_source(input.input.as_deref(), stdin)?;
            serde_json::from_str::<PolygonDoc>(&text).context("parsing polygon JSON")?.points()
        }
    };
    Ok(FanoPolygon::hull_of(&points)?)
}

/// Weights in the given order, and the multiplicity.
fn read_weights(input: &WeightsInput, stdin: &mut dyn Read) -> Result<([BigInt; 3], BigInt)> {
    let (w, mult) = match &input.weights {
        Some(inline) => {
            let mult = input.mult.as_deref().map(|m| parse_int(m, "mult")).transpose()?;
            (parse_list::<3>(inline, "weights")?, mult.unwrap_or_else(|| BigInt::from(1)))
        }
        None => {
            let text = read_source(input.input.as_deref(), stdin)?;
            let doc: WeightsDoc = serde_json::from_str(&text).context("parsing weights JSON")?;
            (doc.values(), doc.mult.0)
        }
    };
    if w.iter().any(|l| !l.is_positive()) || !mult.is_positive() {
        bail!("weights and multiplicity must be positive");
    }
    Ok((w, mult))
}

fn parse_int(s: &str, what: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|_| anyhow!("{what}: not an integer: {s:?}"))
}

fn parse_list<const N: usize>(s: &str, what: &str) -> Result<[BigInt; N]> {
    let parts: Vec<BigInt> = s.split(',').map(|p| parse_int(p, what)).collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<BigInt>| anyhow!("{what}: expected {N} integers, got {}", v.len()))
}
