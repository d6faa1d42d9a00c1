//! JSON documents read and written by the command-line tool.
//!
//! Integers are written as decimal strings. On input both strings and plain
//! JSON integers are accepted. Small indices (node ids, pivots, depths) stay
//! JSON numbers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::diophantine::{DiophantineEquation, GeneralDerivation, MutationTree, Solution};
use crate::fwps::{EdgeCone, FwpsInvariants, OneStepTarget, QuotientSingularity, WeightTriple};
use crate::lattice::{FanoPolygon, FanoPolygonLike, LatticeError, LatticePoint, Point2};
use crate::mutation::OneStepMutation;
use crate::pell::{weights_357, Component, PellRow};

/// An arbitrary-precision integer carried as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decimal(pub BigInt);

impl From<BigInt> for Decimal {
    fn from(n: BigInt) -> Self {
        Decimal(n)
    }
}

impl From<&BigInt> for Decimal {
    fn from(n: &BigInt) -> Self {
        Decimal(n.clone())
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(serde_json::Number),
        }
        let text = match Repr::deserialize(d)? {
            Repr::Text(s) => s,
            Repr::Number(n) => n.to_string(),
        };
        text.trim()
            .parse::<BigInt>()
            .map(Decimal)
            .map_err(|_| de::Error::custom(format!("not an integer: {text:?}")))
    }
}

fn point_doc(p: &LatticePoint) -> [Decimal; 2] {
    [Decimal::from(&p.x), Decimal::from(&p.y)]
}

fn weights_doc(w: &WeightTriple) -> [Decimal; 3] {
    w.as_array().clone().map(Decimal)
}

/// Rational as `"p"` or `"p/q"`.
pub fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `{"vertices": [["x", "y"], ...]}`, used for triangles and polygons alike.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonDoc {
    pub vertices: Vec<[Decimal; 2]>,
}

impl PolygonDoc {
    pub fn of<P: FanoPolygonLike>(p: &P) -> Self {
        PolygonDoc {
            vertices: p.vertices().iter().map(point_doc).collect(),
        }
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        self.vertices
            .iter()
            .map(|[x, y]| Point2::new(x.0.clone(), y.0.clone()))
            .collect()
    }

    pub fn to_polygon(&self) -> Result<FanoPolygon, LatticeError> {
        FanoPolygon::hull_of(&self.points())
    }
}

/// `{"weights": ["l0", "l1", "l2"], "mult": "n"}`; `mult` defaults to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightsDoc {
    pub weights: [Decimal; 3],
    #[serde(default = "one")]
    pub mult: Decimal,
}

fn one() -> Decimal {
    Decimal(BigInt::from(1))
}

impl WeightsDoc {
    pub fn new(w: &WeightTriple, mult: &BigInt) -> Self {
        WeightsDoc {
            weights: weights_doc(w),
            mult: mult.into(),
        }
    }

    pub fn values(&self) -> [BigInt; 3] {
        self.weights.clone().map(|d| d.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub r: Decimal,
    pub a: Decimal,
    pub t_singular: bool,
}

impl From<&QuotientSingularity> for SingularityDoc {
    fn from(s: &QuotientSingularity) -> Self {
        SingularityDoc {
            kind: s.to_string(),
            r: s.r().into(),
            a: s.a().into(),
            t_singular: s.is_t_singularity(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeDoc {
    pub opposite: usize,
    pub edge: [[Decimal; 2]; 2],
    pub lattice_length: Decimal,
    pub singularity: SingularityDoc,
}

impl From<&EdgeCone> for EdgeDoc {
    fn from(e: &EdgeCone) -> Self {
        EdgeDoc {
            opposite: e.opposite,
            edge: [point_doc(&e.edge.0), point_doc(&e.edge.1)],
            lattice_length: (&e.lattice_length).into(),
            singularity: (&e.singularity).into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightTargetDoc {
    pub pivot: usize,
    pub weights: [Decimal; 3],
    pub t_singular: bool,
    pub exact: bool,
}

impl From<&OneStepTarget> for WeightTargetDoc {
    fn from(t: &OneStepTarget) -> Self {
        WeightTargetDoc {
            pivot: t.pivot,
            weights: weights_doc(&t.weights),
            t_singular: t.t_singular,
            exact: t.exact,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeDoc {
    pub vertices: Vec<[Decimal; 2]>,
    pub weights: [Decimal; 3],
    /// Weight attached to each vertex, in vertex order.
    pub vertex_weights: [Decimal; 3],
    pub mult: Decimal,
    pub degree: String,
    pub well_formed: bool,
    pub edges: Vec<EdgeDoc>,
    pub weight_mutations: Vec<WeightTargetDoc>,
}

impl AnalyzeDoc {
    pub fn new(vertices: &[LatticePoint], inv: &FwpsInvariants, edges: &[EdgeCone], targets: &[OneStepTarget]) -> Self {
        AnalyzeDoc {
            vertices: vertices.iter().map(point_doc).collect(),
            weights: weights_doc(&inv.weights),
            vertex_weights: inv.vertex_weights.clone().map(Decimal),
            mult: (&inv.mult).into(),
            degree: rational_text(&inv.degree),
            well_formed: inv.weights.is_well_formed(),
            edges: edges.iter().map(EdgeDoc::from).collect(),
            weight_mutations: targets.iter().map(WeightTargetDoc::from).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationDoc {
    pub width: [Decimal; 2],
    pub factor: [Decimal; 2],
    pub vertices: Vec<[Decimal; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsDoc>,
}

impl MutationDoc {
    pub fn new(m: &OneStepMutation) -> Self {
        let w = m.factor.width();
        MutationDoc {
            width: [w.a().into(), w.b().into()],
            factor: point_doc(&m.factor.endpoint()),
            vertices: PolygonDoc::of(&m.polygon).vertices,
            weights: m.polygon.as_triangle().map(|t| {
                let inv = crate::fwps::weights_of(&t);
                WeightsDoc::new(&inv.weights, &inv.mult)
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerateDoc {
    pub mutations: Vec<MutationDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentStepDoc {
    pub weights: [Decimal; 3],
    pub height: Decimal,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentDoc {
    pub path: Vec<DescentStepDoc>,
    pub minimal: [Decimal; 3],
    pub steps: usize,
}

impl DescentDoc {
    pub fn new(path: &[WeightTriple]) -> Self {
        DescentDoc {
            path: path
                .iter()
                .map(|w| DescentStepDoc {
                    weights: weights_doc(w),
                    height: w.sum().into(),
                })
                .collect(),
            minimal: weights_doc(path.last().expect("descent path is nonempty")),
            steps: path.len() - 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeNodeDoc {
    pub index: usize,
    pub weights: [Decimal; 3],
    pub height: Decimal,
    pub depth: usize,
    pub parent: Option<usize>,
    pub pivot: Option<usize>,
    pub children: Vec<usize>,
    pub truncated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeDoc {
    pub root: [Decimal; 3],
    pub nodes: Vec<TreeNodeDoc>,
}

impl From<&MutationTree> for TreeDoc {
    fn from(t: &MutationTree) -> Self {
        TreeDoc {
            root: weights_doc(&t.root().weights),
            nodes: t
                .nodes()
                .iter()
                .enumerate()
                .map(|(index, n)| TreeNodeDoc {
                    index,
                    weights: weights_doc(&n.weights),
                    height: (&n.height).into(),
                    depth: n.depth,
                    parent: n.parent,
                    pivot: n.pivot,
                    children: n.children.clone(),
                    truncated: n.truncated,
                })
                .collect(),
        }
    }
}

fn solution_doc(s: &Solution) -> [Decimal; 3] {
    s.0.clone().map(Decimal)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationDoc {
    pub weights: [Decimal; 3],
    pub equation: String,
    pub m: Decimal,
    pub k: Decimal,
    pub c: [Decimal; 3],
    pub r: Decimal,
    pub degree: String,
    pub solution: [Decimal; 3],
    pub gcd: Decimal,
    pub s: Decimal,
    pub t: Decimal,
}

impl EquationDoc {
    pub fn new(weights: &[BigInt; 3], eq: &DiophantineEquation, sol: &Solution, g: &GeneralDerivation) -> Self {
        EquationDoc {
            weights: weights.clone().map(Decimal),
            equation: eq.to_string(),
            m: (&eq.m).into(),
            k: (&eq.k).into(),
            c: eq.c.clone().map(Decimal),
            r: (&eq.r).into(),
            degree: rational_text(&eq.degree_expression()),
            solution: solution_doc(sol),
            gcd: (&g.d).into(),
            s: (&g.s).into(),
            t: (&g.t).into(),
        }
    }
}

/// `{"n": i, "a0": ..., "a1": ..., "a2": ..., "M": ...}`.
#[derive(Clone, Debug, Serialize)]
pub struct PellRowDoc {
    pub n: usize,
    pub a0: Decimal,
    pub a1: Decimal,
    pub a2: Decimal,
    #[serde(rename = "M")]
    pub m: Decimal,
}

impl From<&PellRow> for PellRowDoc {
    fn from(r: &PellRow) -> Self {
        PellRowDoc {
            n: r.n,
            a0: (&r.a0).into(),
            a1: (&r.a1).into(),
            a2: (&r.a2).into(),
            m: (&r.m).into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentMemberDoc {
    pub solution: [Decimal; 3],
    pub weights: [Decimal; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentDoc {
    pub solutions: Vec<ComponentMemberDoc>,
}

impl From<&Component> for ComponentDoc {
    fn from(c: &Component) -> Self {
        ComponentDoc {
            solutions: c
                .solutions()
                .iter()
                .map(|s| ComponentMemberDoc {
                    solution: solution_doc(s),
                    weights: weights_357(s).map(Decimal),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_round_trip() {
        let doc: PolygonDoc = serde_json::from_str(r#"{"vertices": [["1", "-1"], [-1, 2], ["0", "-1"]]}"#).unwrap();
        assert_eq!(doc.points()[1], LatticePoint::from_ints(-1, 2));
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(text, r#"{"vertices":[["1","-1"],["-1","2"],["0","-1"]]}"#);
    }

    #[test]
    fn huge_integers_survive() {
        let doc: WeightsDoc =
            serde_json::from_str(r#"{"weights": ["123456789012345678901234567890", "1", "1"], "mult": "1"}"#).unwrap();
        assert_eq!(doc.values()[0].to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn rejects_non_integers() {
        assert!(serde_json::from_str::<WeightsDoc>(r#"{"weights": ["1.5", "1", "1"]}"#).is_err());
        assert!(serde_json::from_str::<WeightsDoc>(r#"{"weights": [1.5, 1, 1]}"#).is_err());
        let d: WeightsDoc = serde_json::from_str(r#"{"weights": [1, 1, 1]}"#).unwrap();
        assert_eq!(d.mult, one());
    }

    #[test]
    fn rationals() {
        assert_eq!(rational_text(&BigRational::new(144.into(), 105.into())), "48/35");
        assert_eq!(rational_text(&BigRational::from_integer(9.into())), "9");
    }
}
