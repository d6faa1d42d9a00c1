//! Invariants of fake weighted projective planes: weights, multiplicity,
//! cyclic quotient singularities of the cones over the edges, T-singularities
//! and the weight-level one-step mutation `λ0 -> (λ1 + λ2)^2 / λ0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{edge_lattice_length, is_primitive, FanoTriangle, LatticePoint, Point2};
use crate::mutation::enumerate_one_step;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FwpsError {
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("weights {0:?} are not coprime")]
    NotCoprime([BigInt; 3]),
    #[error("weights {0} are not well-formed")]
    NotWellFormed(WeightTriple),
    #[error("weight at pivot {pivot} of {weights} does not divide the squared sum of the others")]
    NotDivisible { pivot: usize, weights: WeightTriple },
    #[error("pivot {0} out of range")]
    PivotOutOfRange(usize),
    #[error("cone generators are parallel")]
    DegenerateCone,
    #[error("cone generator {0} is not primitive")]
    NonPrimitiveRay(LatticePoint),
    #[error("invalid singularity type: {0}")]
    InvalidSingularity(String),
}

/// Coprime positive weights, stored in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightTriple([BigInt; 3]);

impl WeightTriple {
    pub fn new(l0: BigInt, l1: BigInt, l2: BigInt) -> Result<Self, FwpsError> {
        Self::sorted_with_permutation([l0, l1, l2]).map(|(w, _)| w)
    }

    pub fn from_ints(l0: u64, l1: u64, l2: u64) -> Result<Self, FwpsError> {
        Self::new(l0.into(), l1.into(), l2.into())
    }

    /// Sorts the weights; `perm[i]` is the sorted position of input entry `i`.
    pub fn sorted_with_permutation(ws: [BigInt; 3]) -> Result<(Self, [usize; 3]), FwpsError> {
        if ws.iter().any(|l| !l.is_positive()) {
            return Err(FwpsError::NonPositiveWeight);
        }
        if !ws[0].gcd(&ws[1]).gcd(&ws[2]).is_one() {
            return Err(FwpsError::NotCoprime(ws));
        }
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| ws[i].cmp(&ws[j]).then(i.cmp(&j)));
        let mut perm = [0usize; 3];
        for (pos, &i) in order.iter().enumerate() {
            perm[i] = pos;
        }
        let sorted = order.map(|i| ws[i].clone());
        Ok((WeightTriple(sorted), perm))
    }

    pub fn as_array(&self) -> &[BigInt; 3] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &BigInt {
        &self.0[i]
    }

    pub fn index_of(&self, value: &BigInt) -> Option<usize> {
        self.0.iter().position(|l| l == value)
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn product(&self) -> BigInt {
        self.0.iter().product()
    }

    pub fn is_well_formed(&self) -> bool {
        is_well_formed(self)
    }
}

impl fmt::Display for WeightTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.0;
        write!(f, "({a}, {b}, {c})")
    }
}

/// True iff the weights are pairwise coprime.
pub fn is_well_formed(w: &WeightTriple) -> bool {
    let [a, b, c] = &w.0;
    a.gcd(b).is_one() && a.gcd(c).is_one() && b.gcd(c).is_one()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FwpsInvariants {
    pub weights: WeightTriple,
    /// `vertex_weights[i]` is the coefficient of the `i`-th triangle vertex in
    /// `λ0 v0 + λ1 v1 + λ2 v2 = 0`.
    pub vertex_weights: [BigInt; 3],
    pub mult: BigInt,
    pub degree: BigRational,
}

impl FwpsInvariants {
    /// Invariants from weights and multiplicity alone; vertex weights follow
    /// the sorted order.
    pub fn from_weights(weights: WeightTriple, mult: BigInt) -> Self {
        let degree = BigRational::new(weights.sum().pow(2), weights.product() * &mult);
        FwpsInvariants {
            vertex_weights: weights.as_array().clone(),
            weights,
            mult,
            degree,
        }
    }
}

/// Weights, multiplicity and degree of the fake weighted projective plane of `t`.
///
/// `λi = |det(vj, vk)| / g` with `g` the gcd of the three determinants, which
/// is also the index of the sublattice spanned by the vertices.
pub fn weights_of(t: &FanoTriangle) -> FwpsInvariants {
    let [v0, v1, v2] = t.vertex_array();
    let dets = [v1.cross(v2).abs(), v2.cross(v0).abs(), v0.cross(v1).abs()];
    let mult = dets[0].gcd(&dets[1]).gcd(&dets[2]);
    let vertex_weights = dets.map(|d| d / &mult);
    let weights = WeightTriple::new(vertex_weights[0].clone(), vertex_weights[1].clone(), vertex_weights[2].clone())
        .expect("barycentric weights are positive and coprime");
    let degree = BigRational::new(weights.sum().pow(2), weights.product() * &mult);
    FwpsInvariants {
        weights,
        vertex_weights,
        mult,
        degree,
    }
}

/// The Fano triangle of `P(λ0, λ1, λ2)` (multiplicity one), with vertices
/// `v0 = (x, -λ2)`, `v1 = (1, 0)`, `v2 = (c, λ0)` where `c = -λ1 / λ2 mod λ0`.
pub fn wps_triangle(w: &WeightTriple) -> Result<FanoTriangle, FwpsError> {
    if !w.is_well_formed() {
        return Err(FwpsError::NotWellFormed(w.clone()));
    }
    let [l0, l1, l2] = w.as_array();
    let c = if l0.is_one() {
        BigInt::zero()
    } else {
        let inv = l2.modinv(l0).expect("well-formed weights are coprime");
        (-(l1 * inv)).mod_floor(l0)
    };
    let x = -(l1 + l2 * &c) / l0;
    let v0 = Point2::new(x, -l2.clone());
    let v1 = Point2::new(BigInt::one(), BigInt::zero());
    let v2 = Point2::new(c, l0.clone());
    Ok(FanoTriangle::new(v0, v1, v2).expect("construction yields a Fano triangle"))
}

/// A cyclic quotient singularity `1/r(1, a)`.
///
/// `a` is stored as the smaller of the two equivalent presentations `a` and
/// `a^{-1} mod r`; `r = 1` is the smooth cone with `a = 0`. Equality ignores
/// the raw presentation.
#[derive(Clone, Debug)]
pub struct QuotientSingularity {
    r: BigInt,
    a: BigInt,
    raw: (BigInt, BigInt, BigInt),
}

impl PartialEq for QuotientSingularity {
    fn eq(&self, other: &Self) -> bool {
        (&self.r, &self.a) == (&other.r, &other.a)
    }
}

impl Eq for QuotientSingularity {}

impl std::hash::Hash for QuotientSingularity {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.r.hash(state);
        self.a.hash(state);
    }
}

impl PartialOrd for QuotientSingularity {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuotientSingularity {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.r, &self.a).cmp(&(&other.r, &other.a))
    }
}

impl QuotientSingularity {
    /// The singularity `1/r(a, b)`; requires `a` and `b` coprime to `r`.
    pub fn from_type(r: BigInt, a: BigInt, b: BigInt) -> Result<Self, FwpsError> {
        if !r.is_positive() {
            return Err(FwpsError::InvalidSingularity(format!("index {r} must be positive")));
        }
        let raw = (r.clone(), a.clone(), b.clone());
        if r.is_one() {
            return Ok(QuotientSingularity { r, a: BigInt::zero(), raw });
        }
        let inv = a
            .modinv(&r)
            .ok_or_else(|| FwpsError::InvalidSingularity(format!("{a} is not a unit mod {r}")))?;
        let a1 = (b * inv).mod_floor(&r);
        let a2 = a1
            .modinv(&r)
            .ok_or_else(|| FwpsError::InvalidSingularity(format!("1/{}({}, {}) is not isolated", raw.0, raw.1, raw.2)))?;
        Ok(QuotientSingularity { r, a: a1.min(a2), raw })
    }

    pub fn from_ints(r: u64, a: u64, b: u64) -> Result<Self, FwpsError> {
        Self::from_type(r.into(), a.into(), b.into())
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// `(r, a, b)` as given or computed, before normalization.
    pub fn raw(&self) -> &(BigInt, BigInt, BigInt) {
        &self.raw
    }

    pub fn is_smooth(&self) -> bool {
        self.r.is_one()
    }

    pub fn is_t_singularity(&self) -> bool {
        is_t_singularity(self)
    }
}

impl fmt::Display for QuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.r, self.a)
    }
}

/// The singularity of the cone spanned by primitive `u` and `v`.
///
/// A determinant-one map sends `u` to `(1, 0)` and `v` to `(p, ±r)`; after a
/// reflection `v = (p, r)`, and the cone is `1/r(1, -p mod r)`.
pub fn cone_singularity(u: &LatticePoint, v: &LatticePoint) -> Result<QuotientSingularity, FwpsError> {
    for g in [u, v] {
        if !is_primitive(g) {
            return Err(FwpsError::NonPrimitiveRay(g.clone()));
        }
    }
    let det = u.cross(v);
    if det.is_zero() {
        return Err(FwpsError::DegenerateCone);
    }
    let eg = u.x.extended_gcd(&u.y);
    let (mut s, mut t) = (eg.x, eg.y);
    if eg.gcd.is_negative() {
        s = -s;
        t = -t;
    }
    let p = &s * &v.x + &t * &v.y;
    let r = det.abs();
    let a = (-p).mod_floor(&r);
    QuotientSingularity::from_type(r, BigInt::one(), a)
}

/// `1/r(1, a)` is a T-singularity iff `r | (1 + a)^2`.
pub fn is_t_singularity(s: &QuotientSingularity) -> bool {
    (BigInt::one() + &s.a).pow(2).is_multiple_of(&s.r)
}

/// The weights `(λ1, λ2, (λ1 + λ2)^2 / λ0)` obtained by mutating at the
/// sorted position `pivot`.
pub fn mutate_weights(w: &WeightTriple, pivot: usize) -> Result<WeightTriple, FwpsError> {
    if pivot > 2 {
        return Err(FwpsError::PivotOutOfRange(pivot));
    }
    if !w.is_well_formed() {
        return Err(FwpsError::NotWellFormed(w.clone()));
    }
    let l0 = w.get(pivot);
    let (l1, l2) = (w.get((pivot + 1) % 3), w.get((pivot + 2) % 3));
    let sq = (l1 + l2).pow(2);
    if !sq.is_multiple_of(l0) {
        return Err(FwpsError::NotDivisible {
            pivot,
            weights: w.clone(),
        });
    }
    WeightTriple::new(l1.clone(), l2.clone(), sq / l0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneStepTarget {
    pub pivot: usize,
    pub weights: WeightTriple,
    /// Whether `1/λ0(λ1, λ2)` is a T-singularity.
    pub t_singular: bool,
    /// True when the plane has multiplicity one, where divisibility decides
    /// existence of the mutation. Otherwise the target is only a candidate.
    pub exact: bool,
}

/// Weight-level one-step mutation candidates at every divisible pivot.
pub fn one_step_targets(x: &FwpsInvariants) -> Vec<OneStepTarget> {
    let w = &x.weights;
    (0..3)
        .filter_map(|pivot| {
            let target = mutate_weights(w, pivot).ok()?;
            let cone = QuotientSingularity::from_type(
                w.get(pivot).clone(),
                w.get((pivot + 1) % 3).clone(),
                w.get((pivot + 2) % 3).clone(),
            )
            .ok()?;
            Some(OneStepTarget {
                pivot,
                weights: target,
                t_singular: cone.is_t_singularity(),
                exact: x.mult.is_one(),
            })
        })
        .collect()
}

/// The cone over one edge of a Fano triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCone {
    /// Index of the vertex opposite the edge.
    pub opposite: usize,
    pub edge: (LatticePoint, LatticePoint),
    pub singularity: QuotientSingularity,
    pub lattice_length: BigInt,
}

pub fn edge_cones(t: &FanoTriangle) -> Vec<EdgeCone> {
    let v = t.vertex_array();
    (0..3)
        .map(|i| {
            let (a, b) = (&v[(i + 1) % 3], &v[(i + 2) % 3]);
            EdgeCone {
                opposite: i,
                edge: (a.clone(), b.clone()),
                singularity: cone_singularity(a, b).expect("edges of a Fano triangle span cones"),
                lattice_length: edge_lattice_length(a, b),
            }
        })
        .collect()
}

/// Invariants of every triangle reachable by one geometric mutation, one per
/// isomorphism class.
pub fn geometric_targets(t: &FanoTriangle) -> Vec<FwpsInvariants> {
    enumerate_one_step(t, true)
        .into_iter()
        .map(|m| weights_of(&m.polygon.as_triangle().expect("filtered to triangles")))
        .collect()
}
