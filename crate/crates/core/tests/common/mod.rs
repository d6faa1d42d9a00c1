//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's geometry or arithmetic beyond constructing inputs.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fano_mutations::lattice::{FanoTriangle, LatticePoint};

fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn cross(p: (i64, i64), q: (i64, i64)) -> i64 {
    p.0 * q.1 - p.1 * q.0
}

/// Random Fano triangles with coordinates in `[-bound, bound]`, as plain
/// integer triples in the order they were drawn.
pub fn random_fano_triangles(seed: u64, count: usize, bound: i64) -> Vec<[(i64, i64); 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut draw = || loop {
            let p = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
            if gcd(p.0, p.1) == 1 {
                return p;
            }
        };
        let v = [draw(), draw(), draw()];
        let c = [cross(v[0], v[1]), cross(v[1], v[2]), cross(v[2], v[0])];
        if c.iter().all(|&x| x > 0) || c.iter().all(|&x| x < 0) {
            out.push(v);
        }
    }
    out
}

pub fn triangle(v: [(i64, i64); 3]) -> FanoTriangle {
    FanoTriangle::from_ints(v).expect("oracle produced a Fano triangle")
}

pub fn to_pairs(vs: &[LatticePoint]) -> Vec<(BigInt, BigInt)> {
    vs.iter().map(|p| (p.x.clone(), p.y.clone())).collect()
}

/// Fano check from scratch: primitive vertices, convex position and the
/// origin strictly inside, given vertices in cyclic order.
pub fn is_fano(vs: &[(BigInt, BigInt)]) -> bool {
    let n = vs.len();
    if n < 3 || vs.iter().any(|(x, y)| !x.gcd(y).eq(&BigInt::from(1))) {
        return false;
    }
    let turn = |i: usize| {
        let (a, b, c) = (&vs[i], &vs[(i + 1) % n], &vs[(i + 2) % n]);
        (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0)
    };
    let origin_side = |i: usize| {
        let (a, b) = (&vs[i], &vs[(i + 1) % n]);
        &a.0 * &b.1 - &a.1 * &b.0
    };
    let zero = BigInt::from(0);
    let ccw = (0..n).all(|i| turn(i) > zero) && (0..n).all(|i| origin_side(i) > zero);
    let cw = (0..n).all(|i| turn(i) < zero) && (0..n).all(|i| origin_side(i) < zero);
    ccw || cw
}

/// Degree as twice the area of the polar dual, with the dual vertex of edge
/// `[p, q]` solved from `u.p = u.q = -1` by Cramer's rule.
pub fn dual_degree(vs: &[(BigInt, BigInt)]) -> BigRational {
    let n = vs.len();
    let dual: Vec<(BigRational, BigRational)> = (0..n)
        .map(|i| {
            let (p, q) = (&vs[i], &vs[(i + 1) % n]);
            let det = &p.0 * &q.1 - &p.1 * &q.0;
            (
                BigRational::new(&q.1 - &p.1, -det.clone()),
                BigRational::new(&p.0 - &q.0, -det),
            )
        })
        .collect();
    let mut twice = BigRational::from_integer(0.into());
    for i in 0..n {
        let (a, b) = (&dual[i], &dual[(i + 1) % n]);
        twice += &a.0 * &b.1 - &a.1 * &b.0;
    }
    if twice < BigRational::from_integer(0.into()) {
        -twice
    } else {
        twice
    }
}

/// Sublattice index of the vertices of a triangle: gcd of the 2x2 minors.
pub fn triangle_mult(vs: &[(BigInt, BigInt)]) -> BigInt {
    let d = |i: usize, j: usize| &vs[i].0 * &vs[j].1 - &vs[i].1 * &vs[j].0;
    d(0, 1).gcd(&d(1, 2)).gcd(&d(0, 2))
}

/// Sorted solutions of `3xyz = x^2 + y^2 + z^2` with every entry at most
/// `bound`. For `x <= y <= z` a solution forces `xy <= z`, and `z` is a root
/// of `z^2 - 3xy z + x^2 + y^2`.
pub fn markov_triples(bound: u64) -> BTreeSet<[u64; 3]> {
    let mut out = BTreeSet::new();
    let b = bound as u128;
    let mut x = 1u128;
    while x * x <= b {
        let mut y = x;
        while x * y <= b {
            let Some(disc) = (9 * x * x * y * y).checked_sub(4 * (x * x + y * y)) else {
                y += 1;
                continue;
            };
            let s = disc.isqrt();
            if s * s == disc {
                for z2 in [3 * x * y - s, 3 * x * y + s] {
                    if z2 % 2 == 0 {
                        let z = z2 / 2;
                        if z >= y && z <= b && 3 * x * y * z == x * x + y * y + z * z {
                            out.insert([x as u64, y as u64, z as u64]);
                        }
                    }
                }
            }
            y += 1;
        }
        x += 1;
    }
    out
}

/// Normalized `(r, a)` with `a = min(a, a^{-1} mod r)`, `r = 1` giving `a = 0`.
pub fn normalize_cyclic(r: u64, a: u64) -> (u64, u64) {
    if r == 1 {
        return (1, 0);
    }
    let a = a % r;
    let eg = (a as i64).extended_gcd(&(r as i64));
    assert_eq!(eg.gcd, 1, "isolated type");
    let inv = eg.x.rem_euclid(r as i64) as u64;
    (r, a.min(inv))
}

/// Every isolated T-singularity `1/r(1, a)` with `r <= rmax`, as the set of
/// normalized types `1/(dn^2)(1, dnc - 1)` with `gcd(n, c) = 1`.
pub fn t_singularities(rmax: u64) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for n in 1..=rmax {
        for d in 1..=rmax {
            let r = d * n * n;
            if r > rmax {
                break;
            }
            for c in 1..=n {
                if n.gcd(&c) != 1 {
                    continue;
                }
                let a = (d * n * c + r - 1) % r;
                if r == 1 || a.gcd(&r) == 1 {
                    out.insert(normalize_cyclic(r, a));
                }
            }
        }
    }
    out
}
