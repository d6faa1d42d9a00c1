//! Combinatorial mutations of Fano polygons in the plane.
//!
//! A mutation is fixed by a primitive width vector `w`, a factor
//! `F = conv{0, length * f}` with `w(f) = 0`, and one lattice segment `G_h` for
//! each negative height. Internally every computation happens after a
//! unimodular change of basis that turns `w` into the height function
//! `(x, y) -> y`, so each slice of the polygon is an integer interval of `x`
//! values and all Minkowski operations are interval arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    is_primitive, slice_interval, FanoPolygon, FanoPolygonLike, HeightRange, LatticeError, LatticePoint,
    LatticeSegment, Point2, RationalPoint, RationalPolygon, Unimodular, WidthVector,
};
use crate::normal_form::NormalForm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MutationError {
    #[error("invalid factor: {0}")]
    InvalidFactor(String),
    #[error("invalid mutation data: {0}")]
    InvalidMutationData(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The segment `F = conv{0, length * f}` at height zero for `w`.
///
/// A zero length denotes the point factor, which leaves every polygon fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    w: WidthVector,
    f: LatticePoint,
    length: BigInt,
}

impl Factor {
    pub fn new(w: WidthVector, f: LatticePoint, length: BigInt) -> Result<Self, MutationError> {
        if !is_primitive(&f) {
            return Err(MutationError::InvalidFactor(format!("direction {f} is not primitive")));
        }
        if !w.eval(&f).is_zero() {
            return Err(MutationError::InvalidFactor(format!("direction {f} is not at height 0 for {w}")));
        }
        if length.is_negative() {
            return Err(MutationError::InvalidFactor(format!("negative length {length}")));
        }
        Ok(Factor { w, f, length })
    }

    /// The factor `conv{0, endpoint}`; the endpoint need not be primitive.
    pub fn from_endpoint(w: WidthVector, endpoint: &LatticePoint) -> Result<Self, MutationError> {
        if endpoint.is_origin() {
            let f = w.kernel_generator();
            return Self::new(w, f, BigInt::zero());
        }
        let length = endpoint.content();
        let f = Point2::new(&endpoint.x / &length, &endpoint.y / &length);
        Self::new(w, f, length)
    }

    pub fn point(w: WidthVector) -> Self {
        let f = w.kernel_generator();
        Factor { w, f, length: BigInt::zero() }
    }

    pub fn width(&self) -> &WidthVector {
        &self.w
    }

    pub fn direction(&self) -> &LatticePoint {
        &self.f
    }

    pub fn length(&self) -> &BigInt {
        &self.length
    }

    pub fn endpoint(&self) -> LatticePoint {
        self.f.scale(&self.length)
    }

    pub fn is_point(&self) -> bool {
        self.length.is_zero()
    }

    /// The same segment, taken with respect to `-w`. Mutating by it undoes a
    /// mutation by `self`.
    pub fn inverse(&self) -> Self {
        Factor {
            w: self.w.negated(),
            f: self.f.clone(),
            length: self.length.clone(),
        }
    }
}

/// `P` in coordinates where `w` is the second coordinate.
struct Normalized {
    to: Unimodular,
    back: Unimodular,
    vertices: Vec<LatticePoint>,
    range: HeightRange,
    /// `x` extent of `F` in normalized coordinates: `[0, length]` or `[-length, 0]`.
    factor_lo: BigInt,
    factor_hi: BigInt,
}

impl Normalized {
    fn new(p: &FanoPolygon, factor: &Factor) -> Self {
        let to = Unimodular::normalizing(factor.width());
        let back = to.inverse();
        let vertices: Vec<_> = p.vertices().iter().map(|v| to.apply(v)).collect();
        let range = p.height_range(factor.width());
        let end = to.apply(&factor.endpoint()).x;
        let (factor_lo, factor_hi) = if end.is_negative() { (end, BigInt::zero()) } else { (BigInt::zero(), end) };
        Normalized {
            to,
            back,
            vertices,
            range,
            factor_lo,
            factor_hi,
        }
    }

    /// `x` extent of `c * F` for `c >= 0`.
    fn scaled_factor(&self, c: &BigInt) -> (BigInt, BigInt) {
        (&self.factor_lo * c, &self.factor_hi * c)
    }

    fn vertex_xs_at(&self, h: &BigInt) -> Vec<BigInt> {
        self.vertices.iter().filter(|v| &v.y == h).map(|v| v.x.clone()).collect()
    }

    fn to_original(&self, x: BigInt, h: &BigInt) -> LatticePoint {
        self.back.apply(&Point2::new(x, h.clone()))
    }

    /// Checks `H_{w,h} ∩ V(P) ⊆ G + (-h)F ⊆ w_h(P)` for one negative height.
    fn check_height(&self, h: &BigInt, g: Option<(BigInt, BigInt)>) -> Result<(), MutationError> {
        let verts = self.vertex_xs_at(h);
        let slice = slice_interval(&self.vertices, h);
        match g {
            None => {
                if verts.is_empty() {
                    Ok(())
                } else {
                    Err(MutationError::InvalidMutationData(format!(
                        "empty G at height {h} cannot cover the vertices there"
                    )))
                }
            }
            Some((glo, ghi)) => {
                let (elo, ehi) = self.scaled_factor(&-h);
                let (lo, hi) = (glo + elo, ghi + ehi);
                let inside = slice.as_ref().is_some_and(|(slo, shi)| slo <= &lo && &hi <= shi);
                if !inside {
                    return Err(MutationError::InvalidMutationData(format!(
                        "G + (-h)F leaves the slice of P at height {h}"
                    )));
                }
                if verts.iter().any(|x| x < &lo || x > &hi) {
                    return Err(MutationError::InvalidMutationData(format!(
                        "G + (-h)F misses a vertex at height {h}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// A polygon together with a factor and a choice of `{G_h}` satisfying the
/// factor inclusions at every negative height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationData {
    source: FanoPolygon,
    factor: Factor,
    g_segments: BTreeMap<BigInt, Option<LatticeSegment>>,
}

impl MutationData {
    /// Validates an explicit choice of `G_h` (missing heights mean empty).
    pub fn new(
        source: FanoPolygon,
        factor: Factor,
        g_segments: BTreeMap<BigInt, Option<LatticeSegment>>,
    ) -> Result<Self, MutationError> {
        let norm = Normalized::new(&source, &factor);
        let w = factor.width();
        for h in g_segments.keys() {
            if h >= &BigInt::zero() || h < &norm.range.h_min {
                return Err(MutationError::InvalidMutationData(format!("G given at height {h}")));
            }
        }
        let mut h = norm.range.h_min.clone();
        while h.is_negative() {
            let g = match g_segments.get(&h).cloned().flatten() {
                None => None,
                Some(seg) => {
                    if w.eval(&seg.start) != h || w.eval(&seg.end) != h {
                        return Err(MutationError::InvalidMutationData(format!("G is not at height {h}")));
                    }
                    let a = norm.to.apply(&seg.start).x;
                    let b = norm.to.apply(&seg.end).x;
                    Some(if a <= b { (a, b) } else { (b, a) })
                }
            };
            norm.check_height(&h, g)?;
            h += 1;
        }
        Ok(MutationData {
            source,
            factor,
            g_segments,
        })
    }

    /// The data with `G_h = w_h(P) ⊖ (-h)F`, the largest valid choice.
    pub fn maximal(source: FanoPolygon, factor: Factor) -> Result<Self, MutationError> {
        let norm = Normalized::new(&source, &factor);
        let mut g_segments = BTreeMap::new();
        let mut h = norm.range.h_min.clone();
        while h.is_negative() {
            let (elo, ehi) = norm.scaled_factor(&-&h);
            let g = slice_interval(&norm.vertices, &h)
                .map(|(lo, hi)| (lo - elo, hi - ehi))
                .filter(|(lo, hi)| lo <= hi);
            norm.check_height(&h, g.clone())?;
            let seg = g.map(|(lo, hi)| LatticeSegment::new(norm.to_original(lo, &h), norm.to_original(hi, &h)));
            g_segments.insert(h.clone(), seg);
            h += 1;
        }
        Ok(MutationData {
            source,
            factor,
            g_segments,
        })
    }

    pub fn source(&self) -> &FanoPolygon {
        &self.source
    }

    pub fn factor(&self) -> &Factor {
        &self.factor
    }

    pub fn g_segments(&self) -> &BTreeMap<BigInt, Option<LatticeSegment>> {
        &self.g_segments
    }
}

/// `mut_w(P, F; {G_h}) = conv(⋃_{h<0} G_h ∪ ⋃_{h>=0} (w_h(P) + hF))`.
pub fn mutate(data: &MutationData) -> Result<FanoPolygon, MutationError> {
    let norm = Normalized::new(&data.source, &data.factor);
    let mut points = Vec::new();
    for seg in data.g_segments.values().flatten() {
        points.push(seg.start.clone());
        points.push(seg.end.clone());
    }
    let mut h = BigInt::zero();
    while h <= norm.range.h_max {
        if let Some((lo, hi)) = slice_interval(&norm.vertices, &h) {
            let (elo, ehi) = norm.scaled_factor(&h);
            points.push(norm.to_original(lo + elo, &h));
            points.push(norm.to_original(hi + ehi, &h));
        }
        h += 1;
    }
    Ok(FanoPolygon::hull_of(&points)?)
}

/// Mutation with the maximal choice of `{G_h}`.
pub fn mutate_with_factor<P: FanoPolygonLike>(p: &P, factor: &Factor) -> Result<FanoPolygon, MutationError> {
    mutate(&MutationData::maximal(p.to_fano_polygon(), factor.clone())?)
}

/// Primitive generators of the rays through the vertices of the dual polygon:
/// the only widths giving nontrivial mutations in dimension two.
pub fn admissible_widths<P: FanoPolygonLike>(p: &P) -> Vec<WidthVector> {
    let mut out: Vec<WidthVector> = Vec::new();
    for u in p.dual().vertices() {
        let w = WidthVector::primitive_along(u);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// All factors `conv{0, l*f}` of `P` with respect to `w`, `l >= 1`, where `f`
/// is [`WidthVector::kernel_generator`]. The opposite direction gives
/// translates of the same segments, so it is not listed separately.
pub fn find_factors<P: FanoPolygonLike>(p: &P, w: &WidthVector) -> Vec<(Factor, MutationData)> {
    let source = p.to_fano_polygon();
    let range = p.height_range(w);
    let to = Unimodular::normalizing(w);
    let normalized: Vec<_> = source.vertices().iter().map(|v| to.apply(v)).collect();
    let Some((lo, hi)) = slice_interval(&normalized, &range.h_min) else {
        return Vec::new();
    };
    let bound = (hi - lo) / -&range.h_min;
    let mut out = Vec::new();
    let mut length = BigInt::one();
    while length <= bound {
        let factor = Factor::new(w.clone(), w.kernel_generator(), length.clone()).expect("kernel generator is valid");
        if let Ok(data) = MutationData::maximal(source.clone(), factor.clone()) {
            out.push((factor, data));
        }
        length += 1;
    }
    out
}

fn dual_image(u: &RationalPoint, factor: &Factor) -> RationalPoint {
    let f = factor.direction().to_rational();
    let len = BigRational::from_integer(factor.length().clone());
    let uf = u.dot(&f) * len;
    let u_min = if uf.is_negative() { uf } else { BigRational::zero() };
    u.sub(&factor.width().as_rational_point().scale(&u_min))
}

/// The image of `P*` under `u -> u - u_min * w`, `u_min = min(u(0), u(l*f))`.
/// This map is linear on either side of the wall `u(f) = 0`, so the image is
/// the hull of the images of the dual vertices and of the wall crossings.
pub fn apply_dual_map<P: FanoPolygonLike>(p: &P, factor: &Factor) -> Result<RationalPolygon, MutationError> {
    if MutationData::maximal(p.to_fano_polygon(), factor.clone()).is_err() {
        return Err(MutationError::InvalidFactor(format!(
            "conv{{0, {}}} is not a factor with respect to {}",
            factor.endpoint(),
            factor.width()
        )));
    }
    let dual = p.dual();
    let vs = dual.vertices();
    let f = factor.direction().to_rational();
    let mut points = Vec::with_capacity(2 * vs.len());
    for i in 0..vs.len() {
        let a = &vs[i];
        let b = &vs[(i + 1) % vs.len()];
        points.push(dual_image(a, factor));
        let (fa, fb) = (a.dot(&f), b.dot(&f));
        if (fa.is_positive() && fb.is_negative()) || (fa.is_negative() && fb.is_positive()) {
            let t = fa.clone() / (fa - fb);
            let crossing = a.add(&b.sub(a).scale(&t));
            points.push(dual_image(&crossing, factor));
        }
    }
    Ok(RationalPolygon::hull(&points))
}

/// One mutation class found by [`enumerate_one_step`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneStepMutation {
    pub factor: Factor,
    pub polygon: FanoPolygon,
    pub normal_form: NormalForm,
}

/// Every nontrivial mutation of `P` over all admissible widths and factors,
/// one representative per unimodular class, sorted by normal form.
pub fn enumerate_one_step<P: FanoPolygonLike>(p: &P, triangles_only: bool) -> Vec<OneStepMutation> {
    let mut classes: BTreeMap<NormalForm, OneStepMutation> = BTreeMap::new();
    for w in admissible_widths(p) {
        for (factor, data) in find_factors(p, &w) {
            let polygon = mutate(&data).expect("mutations of Fano polygons are Fano");
            if triangles_only && polygon.vertices().len() != 3 {
                continue;
            }
            let normal_form = NormalForm::of(polygon.vertices());
            classes.entry(normal_form.clone()).or_insert(OneStepMutation {
                factor,
                polygon,
                normal_form,
            });
        }
    }
    classes.into_values().collect()
}
