//! Exact plane lattice geometry for Fano polygons.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) and
//! exact fractions ([`BigRational`]). A polygon is always stored with its
//! vertices in counterclockwise order, starting from the lexicographically
//! smallest vertex, so two polygons are equal as point sets exactly when their
//! vertex lists compare equal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use thiserror::Error;

/// Coordinate types the generic geometry routines accept.
pub trait Scalar: Clone + Ord + Num + Signed + fmt::Debug {}
impl<T: Clone + Ord + Num + Signed + fmt::Debug> Scalar for T {}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

/// A point of the lattice `N = Z^2`.
pub type LatticePoint = Point2<BigInt>;
/// A point of `M_Q`, typically a vertex of a dual polygon.
pub type RationalPoint = Point2<BigRational>;

impl<T> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }
}

impl<T: Scalar> Point2<T> {
    pub fn cross(&self, other: &Self) -> T {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        Point2::new(self.x.clone() + other.x.clone(), self.y.clone() + other.y.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Point2::new(self.x.clone() - other.x.clone(), self.y.clone() - other.y.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Point2::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl LatticePoint {
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(BigInt::from(x), BigInt::from(y))
    }

    pub fn to_rational(&self) -> RationalPoint {
        Point2::new(
            BigRational::from_integer(self.x.clone()),
            BigRational::from_integer(self.y.clone()),
        )
    }

    /// The gcd of the absolute coordinates (zero for the origin).
    pub fn content(&self) -> BigInt {
        self.x.gcd(&self.y)
    }
}

impl<T: fmt::Display> fmt::Display for Point2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vertex {0} is not primitive")]
    NonPrimitiveVertex(LatticePoint),
    #[error("the origin is not in the strict interior of the polygon")]
    OriginNotInterior,
    #[error("width vector ({0}, {1}) is not primitive")]
    NonPrimitiveWidth(BigInt, BigInt),
    #[error("height {h} lies outside [{min}, {max}]")]
    HeightOutOfRange { h: BigInt, min: BigInt, max: BigInt },
    #[error("matrix is not unimodular")]
    NotUnimodular,
}

/// True iff `p` is nonzero and its coordinates are coprime.
pub fn is_primitive(p: &LatticePoint) -> bool {
    !p.is_origin() && p.content().is_one()
}

/// Number of lattice steps along the segment `[a, b]`, i.e. `|[a,b] ∩ N| - 1`.
pub fn edge_lattice_length(a: &LatticePoint, b: &LatticePoint) -> BigInt {
    b.sub(a).content()
}

/// A primitive element `w = (a, b)` of the dual lattice `M`, acting on `N` by
/// `w(x, y) = a*x + b*y`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WidthVector {
    a: BigInt,
    b: BigInt,
}

impl WidthVector {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self, LatticeError> {
        if (a.is_zero() && b.is_zero()) || !a.gcd(&b).is_one() {
            return Err(LatticeError::NonPrimitiveWidth(a, b));
        }
        Ok(WidthVector { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, LatticeError> {
        Self::new(BigInt::from(a), BigInt::from(b))
    }

    /// The primitive generator of the ray through a nonzero rational vector.
    pub fn primitive_along(u: &RationalPoint) -> Self {
        assert!(!u.is_origin(), "no ray through the origin");
        let den = u.x.denom().lcm(u.y.denom());
        let a = (u.x.clone() * BigRational::from_integer(den.clone())).to_integer();
        let b = (u.y.clone() * BigRational::from_integer(den)).to_integer();
        let g = a.gcd(&b);
        WidthVector { a: a / &g, b: b / &g }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn eval(&self, p: &LatticePoint) -> BigInt {
        &self.a * &p.x + &self.b * &p.y
    }

    pub fn eval_rational(&self, p: &RationalPoint) -> BigRational {
        BigRational::from_integer(self.a.clone()) * p.x.clone()
            + BigRational::from_integer(self.b.clone()) * p.y.clone()
    }

    pub fn as_rational_point(&self) -> RationalPoint {
        LatticePoint::new(self.a.clone(), self.b.clone()).to_rational()
    }

    pub fn negated(&self) -> Self {
        WidthVector { a: -&self.a, b: -&self.b }
    }

    /// The primitive lattice vector `f` with `w(f) = 0`, chosen so that
    /// `(f, w)` is a positively oriented pair: `f = (b, -a)`.
    pub fn kernel_generator(&self) -> LatticePoint {
        LatticePoint::new(self.b.clone(), -&self.a)
    }
}

impl fmt::Display for WidthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A 2x2 integer matrix of determinant ±1 acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unimodular {
    m: [[BigInt; 2]; 2],
}

impl Unimodular {
    pub fn new(m: [[BigInt; 2]; 2]) -> Result<Self, LatticeError> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.abs().is_one() {
            Ok(Unimodular { m })
        } else {
            Err(LatticeError::NotUnimodular)
        }
    }

    pub fn from_ints(m: [[i64; 2]; 2]) -> Result<Self, LatticeError> {
        Self::new(m.map(|row| row.map(BigInt::from)))
    }

    pub fn identity() -> Self {
        Unimodular {
            m: [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]],
        }
    }

    pub fn det(&self) -> BigInt {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn apply(&self, p: &LatticePoint) -> LatticePoint {
        Point2::new(
            &self.m[0][0] * &p.x + &self.m[0][1] * &p.y,
            &self.m[1][0] * &p.x + &self.m[1][1] * &p.y,
        )
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        let [[a, b], [c, d]] = &self.m;
        Unimodular {
            m: [[d * &det, -b * &det], [-c * &det, a * &det]],
        }
    }

    /// A determinant-one matrix sending `w` to the height function `(0, 1)`,
    /// i.e. the second coordinate of `apply(p)` equals `w(p)`.
    pub fn normalizing(w: &WidthVector) -> Self {
        let eg = w.a.extended_gcd(&w.b);
        let (mut s, mut t) = (eg.x, eg.y);
        if eg.gcd.is_negative() {
            s = -s;
            t = -t;
        }
        // s*a + t*b = 1, so det [[t, -s], [a, b]] = t*b + s*a = 1
        Unimodular {
            m: [[t, -s], [w.a.clone(), w.b.clone()]],
        }
    }
}

/// Monotone-chain convex hull. Returns the strictly convex vertex list in
/// counterclockwise order starting at the lexicographically smallest point.
pub fn convex_hull<T: Scalar>(points: &[Point2<T>]) -> Vec<Point2<T>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &Point2<T>, a: &Point2<T>, b: &Point2<T>| a.sub(o).cross(&b.sub(o));
    let mut lower: Vec<Point2<T>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2<T>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Rotates a cyclic vertex list so that it starts at its smallest element.
pub(crate) fn rotate_to_min<T: Ord + Clone>(v: &mut [T]) {
    if let Some((i, _)) = v.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)) {
        v.rotate_left(i);
    }
}

/// Twice the signed area of a polygon listed in order.
pub fn twice_area<T: Scalar>(vertices: &[Point2<T>]) -> T {
    let n = vertices.len();
    (0..n).fold(T::zero(), |acc, i| acc + vertices[i].cross(&vertices[(i + 1) % n]))
}

/// The polar dual `{u : u(v) >= -1}` of a counterclockwise polygon containing
/// the origin strictly. Each edge `[p, q]` contributes the vertex `u` with
/// `u(p) = u(q) = -1`.
pub fn polar_dual<T: Scalar>(vertices: &[Point2<T>], to_rational: impl Fn(&T) -> BigRational) -> RationalPolygon {
    let n = vertices.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let p = &vertices[i];
        let q = &vertices[(i + 1) % n];
        let det = to_rational(&p.cross(q));
        let ux = (to_rational(&p.y) - to_rational(&q.y)) / det.clone();
        let uy = (to_rational(&q.x) - to_rational(&p.x)) / det;
        out.push(Point2::new(ux, uy));
    }
    rotate_to_min(&mut out);
    RationalPolygon { vertices: out }
}

/// A convex polygon with rational vertices, counterclockwise from the
/// lexicographically smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolygon {
    vertices: Vec<RationalPoint>,
}

impl RationalPolygon {
    /// The convex hull of the given points.
    pub fn hull(points: &[RationalPoint]) -> Self {
        RationalPolygon { vertices: convex_hull(points) }
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn contains_origin_strictly(&self) -> bool {
        let n = self.vertices.len();
        n >= 3 && (0..n).all(|i| self.vertices[i].cross(&self.vertices[(i + 1) % n]).is_positive())
    }

    /// Polar dual; requires the origin in the strict interior.
    pub fn dual(&self) -> RationalPolygon {
        polar_dual(&self.vertices, |q| q.clone())
    }

    pub fn area(&self) -> BigRational {
        twice_area(&self.vertices) / BigRational::from_integer(BigInt::from(2))
    }

    /// The vertices, if all of them are lattice points.
    pub fn to_lattice(&self) -> Option<Vec<LatticePoint>> {
        self.vertices
            .iter()
            .map(|p| {
                (p.x.is_integer() && p.y.is_integer()).then(|| Point2::new(p.x.to_integer(), p.y.to_integer()))
            })
            .collect()
    }
}

/// `[h_min, h_max]`: the extreme values of a width vector over a polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightRange {
    pub h_min: BigInt,
    pub h_max: BigInt,
}

/// A lattice segment, possibly a single point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeSegment {
    pub start: LatticePoint,
    pub end: LatticePoint,
}

impl LatticeSegment {
    pub fn new(start: LatticePoint, end: LatticePoint) -> Self {
        LatticeSegment { start, end }
    }

    pub fn point(p: LatticePoint) -> Self {
        LatticeSegment { start: p.clone(), end: p }
    }

    pub fn lattice_length(&self) -> BigInt {
        edge_lattice_length(&self.start, &self.end)
    }
}

/// Lattice interval `[lo, hi]` of `x` values of the polygon (given in
/// coordinates where height is the `y` coordinate) on the line `y = h`.
pub(crate) fn slice_interval(vertices: &[LatticePoint], h: &BigInt) -> Option<(BigInt, BigInt)> {
    let n = vertices.len();
    let mut bounds: Option<(BigInt, BigInt)> = None;
    let mut push = |lo: BigInt, hi: BigInt| {
        bounds = Some(match bounds.take() {
            None => (lo, hi),
            Some((l, r)) => (l.min(lo), r.max(hi)),
        });
    };
    for i in 0..n {
        let p = &vertices[i];
        let q = &vertices[(i + 1) % n];
        let (ylo, yhi) = if p.y <= q.y { (&p.y, &q.y) } else { (&q.y, &p.y) };
        if h < ylo || h > yhi {
            continue;
        }
        if p.y == q.y {
            let (a, b) = if p.x <= q.x { (&p.x, &q.x) } else { (&q.x, &p.x) };
            push(a.clone(), b.clone());
            continue;
        }
        let mut den = &q.y - &p.y;
        let mut num = &p.x * &den + (&q.x - &p.x) * (h - &p.y);
        if den.is_negative() {
            den = -den;
            num = -num;
        }
        push(num.div_ceil(&den), num.div_floor(&den));
    }
    bounds.filter(|(lo, hi)| lo <= hi)
}

/// Shared behaviour of lattice polygons with the origin strictly inside.
pub trait FanoPolygonLike {
    /// Vertices, counterclockwise from the lexicographically smallest.
    fn vertices(&self) -> &[LatticePoint];

    fn to_fano_polygon(&self) -> FanoPolygon {
        FanoPolygon { vertices: self.vertices().to_vec() }
    }

    fn dual(&self) -> RationalPolygon {
        polar_dual(self.vertices(), |x| BigRational::from_integer(x.clone()))
    }

    fn height_range(&self, w: &WidthVector) -> HeightRange {
        let mut heights = self.vertices().iter().map(|v| w.eval(v));
        let first = heights.next().expect("polygon has vertices");
        let (h_min, h_max) = heights.fold((first.clone(), first), |(lo, hi), h| (lo.min(h.clone()), hi.max(h)));
        HeightRange { h_min, h_max }
    }

    /// `conv(H_{w,h} ∩ P ∩ N)` as a segment, or `None` when the slice holds no
    /// lattice point.
    fn height_slice(&self, w: &WidthVector, h: &BigInt) -> Result<Option<LatticeSegment>, LatticeError> {
        let range = self.height_range(w);
        if *h < range.h_min || *h > range.h_max {
            return Err(LatticeError::HeightOutOfRange {
                h: h.clone(),
                min: range.h_min,
                max: range.h_max,
            });
        }
        let t = Unimodular::normalizing(w);
        let normalized: Vec<_> = self.vertices().iter().map(|v| t.apply(v)).collect();
        let back = t.inverse();
        Ok(slice_interval(&normalized, h).map(|(lo, hi)| {
            LatticeSegment::new(
                back.apply(&Point2::new(lo, h.clone())),
                back.apply(&Point2::new(hi, h.clone())),
            )
        }))
    }

    /// `(-K_X)^2` of the toric surface of the spanning fan: twice the area of
    /// the dual polygon.
    fn degree(&self) -> BigRational {
        twice_area(self.dual().vertices())
    }

    /// Lattice points on the boundary plus interior, by brute force over the
    /// bounding box. Only meant for small polygons.
    fn lattice_points_brute_force(&self) -> Vec<LatticePoint> {
        let vs = self.vertices();
        let xmin = vs.iter().map(|v| v.x.clone()).min().unwrap();
        let xmax = vs.iter().map(|v| v.x.clone()).max().unwrap();
        let ymin = vs.iter().map(|v| v.y.clone()).min().unwrap();
        let ymax = vs.iter().map(|v| v.y.clone()).max().unwrap();
        let n = vs.len();
        let mut out = Vec::new();
        let mut x = xmin;
        while x <= xmax {
            let mut y = ymin.clone();
            while y <= ymax {
                let p = Point2::new(x.clone(), y.clone());
                if (0..n).all(|i| !vs[(i + 1) % n].sub(&vs[i]).cross(&p.sub(&vs[i])).is_negative()) {
                    out.push(p);
                }
                y += 1;
            }
            x += 1;
        }
        out
    }
}

/// A Fano triangle: primitive vertices, origin strictly interior.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FanoTriangle {
    vertices: [LatticePoint; 3],
}

impl FanoTriangle {
    pub fn new(v0: LatticePoint, v1: LatticePoint, v2: LatticePoint) -> Result<Self, LatticeError> {
        for v in [&v0, &v1, &v2] {
            if !is_primitive(v) {
                return Err(LatticeError::NonPrimitiveVertex(v.clone()));
            }
        }
        let dets = [v0.cross(&v1), v1.cross(&v2), v2.cross(&v0)];
        let mut vertices = if dets.iter().all(Signed::is_positive) {
            [v0, v1, v2]
        } else if dets.iter().all(Signed::is_negative) {
            [v0, v2, v1]
        } else {
            return Err(LatticeError::OriginNotInterior);
        };
        rotate_to_min(&mut vertices);
        Ok(FanoTriangle { vertices })
    }

    pub fn from_ints(v: [(i64, i64); 3]) -> Result<Self, LatticeError> {
        let [a, b, c] = v.map(|(x, y)| LatticePoint::from_ints(x, y));
        Self::new(a, b, c)
    }

    pub fn vertex_array(&self) -> &[LatticePoint; 3] {
        &self.vertices
    }

    pub fn transformed(&self, u: &Unimodular) -> Self {
        let [a, b, c] = &self.vertices;
        Self::new(u.apply(a), u.apply(b), u.apply(c)).expect("unimodular maps preserve Fano triangles")
    }

    pub fn to_polygon(&self) -> FanoPolygon {
        FanoPolygon { vertices: self.vertices.to_vec() }
    }
}

impl FanoPolygonLike for FanoTriangle {
    fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }
}

/// A convex lattice polygon with primitive vertices and the origin strictly
/// in its interior.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FanoPolygon {
    vertices: Vec<LatticePoint>,
}

impl FanoPolygon {
    /// Takes the convex hull of `points` and validates it.
    pub fn hull_of(points: &[LatticePoint]) -> Result<Self, LatticeError> {
        let vertices = convex_hull(points);
        if vertices.len() < 3 {
            return Err(LatticeError::OriginNotInterior);
        }
        if let Some(v) = vertices.iter().find(|v| !is_primitive(v)) {
            return Err(LatticeError::NonPrimitiveVertex(v.clone()));
        }
        let n = vertices.len();
        if !(0..n).all(|i| vertices[i].cross(&vertices[(i + 1) % n]).is_positive()) {
            return Err(LatticeError::OriginNotInterior);
        }
        Ok(FanoPolygon { vertices })
    }

    pub fn as_triangle(&self) -> Option<FanoTriangle> {
        match self.vertices.as_slice() {
            [a, b, c] => Some(FanoTriangle { vertices: [a.clone(), b.clone(), c.clone()] }),
            _ => None,
        }
    }

    pub fn transformed(&self, u: &Unimodular) -> Self {
        let pts: Vec<_> = self.vertices.iter().map(|v| u.apply(v)).collect();
        Self::hull_of(&pts).expect("unimodular maps preserve Fano polygons")
    }
}

impl FanoPolygonLike for FanoPolygon {
    fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }
}

impl From<&FanoTriangle> for FanoPolygon {
    fn from(t: &FanoTriangle) -> Self {
        t.to_polygon()
    }
}

impl fmt::Display for FanoTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.vertices;
        write!(f, "conv{{{a}, {b}, {c}}}")
    }
}

impl fmt::Display for FanoPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        write!(f, "conv{{{}}}", parts.join(", "))
    }
}
