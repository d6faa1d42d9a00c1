//! Unimodular normal forms of lattice polygons.
//!
//! Two polygons are `GL_2(Z)`-equivalent iff their normal forms agree. The
//! normal form is the lexicographically smallest row Hermite normal form of
//! the vertex matrix over every cyclic starting vertex and both orientations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::lattice::{LatticePoint, Point2};

/// Canonical representative of a polygon's unimodular equivalence class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm(Vec<LatticePoint>);

impl NormalForm {
    pub fn of(vertices: &[LatticePoint]) -> Self {
        let n = vertices.len();
        let mut best: Option<Vec<LatticePoint>> = None;
        for start in 0..n {
            for forward in [true, false] {
                let seq: Vec<LatticePoint> = (0..n)
                    .map(|i| {
                        let idx = if forward { (start + i) % n } else { (start + n - i) % n };
                        vertices[idx].clone()
                    })
                    .collect();
                let h = hermite_columns(&seq);
                if best.as_ref().is_none_or(|b| h < *b) {
                    best = Some(h);
                }
            }
        }
        NormalForm(best.unwrap_or_default())
    }

    pub fn columns(&self) -> &[LatticePoint] {
        &self.0
    }
}

pub fn unimodularly_equivalent(a: &[LatticePoint], b: &[LatticePoint]) -> bool {
    a.len() == b.len() && NormalForm::of(a) == NormalForm::of(b)
}

/// Row Hermite normal form of the `2 x n` matrix whose columns are `cols`,
/// under left multiplication by `GL_2(Z)`. Returned column by column.
pub fn hermite_columns(cols: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut r1: Vec<BigInt> = cols.iter().map(|c| c.x.clone()).collect();
    let mut r2: Vec<BigInt> = cols.iter().map(|c| c.y.clone()).collect();

    let Some(j) = (0..cols.len()).find(|&j| !(r1[j].is_zero() && r2[j].is_zero())) else {
        return cols.to_vec();
    };
    let (a, b) = (r1[j].clone(), r2[j].clone());
    let eg = a.extended_gcd(&b);
    let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
    if g.is_negative() {
        g = -g;
        s = -s;
        t = -t;
    }
    let (ag, bg) = (&a / &g, &b / &g);
    for i in 0..cols.len() {
        let x = &s * &r1[i] + &t * &r2[i];
        let y = &ag * &r2[i] - &bg * &r1[i];
        r1[i] = x;
        r2[i] = y;
    }

    if let Some(k) = (j + 1..cols.len()).find(|&k| !r2[k].is_zero()) {
        if r2[k].is_negative() {
            r2.iter_mut().for_each(|v| *v = -v.clone());
        }
        let q = r1[k].div_floor(&r2[k]);
        for i in 0..cols.len() {
            let v = &r1[i] - &q * &r2[i];
            r1[i] = v;
        }
    }

    r1.into_iter().zip(r2).map(|(x, y)| Point2::new(x, y)).collect()
}
