//! The equation `12 x0 x1 x2 = 3 x0^2 + 5 x1^2 + 7 x2^2`.
//!
//! Mutation only ever moves `x0` (the other pivots never divide), so a
//! component is the root pair of the quadratic in `x0` with `x1, x2` fixed.
//! Its discriminant is `36 N^2` where
//! `5 a1^2 (a2^2 - 1) + 7 a2^2 (a1^2 - 1) = 3 N^2`, and the roots are
//! `2 a1 a2 ± N`. Fixing `a1 = 1` or `a2 = 1` turns this into a Pell equation,
//! giving two infinite families of minimal weights.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::diophantine::{derive_equation, exact_sqrt, verify_solution, DiophantineEquation, Solution};
use crate::fwps::WeightTriple;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PellError {
    #[error("{0} does not solve 12x0x1x2 = 3x0^2+5x1^2+7x2^2")]
    NotASolution(Solution),
    #[error("{0} is not primitive")]
    NotCoprime(Solution),
}

/// `12x0x1x2 = 3x0^2+5x1^2+7x2^2`, the equation of the weights `(12, 5, 7)`.
pub fn equation_357() -> DiophantineEquation {
    derive_equation(&[12, 5, 7].map(BigInt::from))
        .expect("positive weights")
        .0
}

fn coefficients() -> [BigInt; 3] {
    [3, 5, 7].map(BigInt::from)
}

/// Weights `(3 a0^2, 5 a1^2, 7 a2^2)` of a solution, in variable order.
pub fn weights_357(s: &Solution) -> [BigInt; 3] {
    let c = coefficients();
    [0, 1, 2].map(|i| &c[i] * s.0[i].pow(2))
}

/// `N >= 0` with `5 a1^2 (a2^2 - 1) + 7 a2^2 (a1^2 - 1) = 3 N^2`, if any.
pub fn condition_357(a1: &BigInt, a2: &BigInt) -> Option<BigInt> {
    let lhs = condition_lhs(a1, a2);
    if !lhs.is_multiple_of(&BigInt::from(3)) {
        return None;
    }
    exact_sqrt(&(lhs / 3))
}

fn condition_lhs(a1: &BigInt, a2: &BigInt) -> BigInt {
    let (s1, s2) = (a1 * a1, a2 * a2);
    5 * &s1 * (&s2 - 1) + 7 * &s2 * (&s1 - 1)
}

/// `3 x^2 - 12 a1 a2 x + 5 a1^2 + 7 a2^2 = 0` for fixed `a1, a2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSlice {
    pub a1: BigInt,
    pub a2: BigInt,
    pub discriminant: BigInt,
    /// `(smaller, larger)`; present iff the roots are rational, in which case
    /// they are positive integers.
    pub roots: Option<(BigInt, BigInt)>,
}

impl QuadraticSlice {
    pub fn solutions(&self) -> Vec<Solution> {
        match &self.roots {
            None => Vec::new(),
            Some((lo, hi)) => {
                let mut out = vec![Solution([lo.clone(), self.a1.clone(), self.a2.clone()])];
                if hi != lo {
                    out.push(Solution([hi.clone(), self.a1.clone(), self.a2.clone()]));
                }
                out
            }
        }
    }
}

pub fn solve_quadratic_357(a1: &BigInt, a2: &BigInt) -> QuadraticSlice {
    let discriminant = 12 * condition_lhs(a1, a2);
    let roots = condition_357(a1, a2).map(|n| {
        let centre = 2 * a1 * a2;
        (&centre - &n, centre + n)
    });
    QuadraticSlice {
        a1: a1.clone(),
        a2: a2.clone(),
        discriminant,
        roots,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    A1Fixed1,
    A2Fixed1,
}

/// One term of a family; always the smaller root of its component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellRow {
    pub n: usize,
    pub a0: BigInt,
    pub a1: BigInt,
    pub a2: BigInt,
    pub m: BigInt,
}

impl PellRow {
    pub fn solution(&self) -> Solution {
        Solution([self.a0.clone(), self.a1.clone(), self.a2.clone()])
    }
}

/// Linear recurrence `t(n+1) = c t(n) - t(n-1)` applied to `a0`, the free
/// variable and `M` simultaneously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellFamily {
    pub kind: FamilyKind,
    pub coefficient: BigInt,
    /// Two initial `(a0, free variable, M)` triples.
    pub seeds: [(BigInt, BigInt, BigInt); 2],
}

impl PellFamily {
    pub fn a1_fixed() -> Self {
        PellFamily {
            kind: FamilyKind::A1Fixed1,
            coefficient: 8.into(),
            seeds: [(2.into(), 1.into(), 0.into()), (3.into(), 4.into(), 1.into())],
        }
    }

    pub fn a2_fixed() -> Self {
        PellFamily {
            kind: FamilyKind::A2Fixed1,
            coefficient: 110.into(),
            seeds: [(2.into(), 1.into(), 0.into()), (26.into(), 55.into(), 12.into())],
        }
    }

    /// `D` in the Pell equation `a^2 - D M^2 = 1` for the free variable.
    pub fn pell_d(&self) -> BigInt {
        match self.kind {
            FamilyKind::A1Fixed1 => 15.into(),
            FamilyKind::A2Fixed1 => 21.into(),
        }
    }

    /// The factor relating `N` to `M`.
    fn n_per_m(&self) -> BigInt {
        match self.kind {
            FamilyKind::A1Fixed1 => 5.into(),
            FamilyKind::A2Fixed1 => 7.into(),
        }
    }

    fn row(&self, n: usize, (a0, x, m): &(BigInt, BigInt, BigInt)) -> PellRow {
        let (a1, a2) = match self.kind {
            FamilyKind::A1Fixed1 => (BigInt::one(), x.clone()),
            FamilyKind::A2Fixed1 => (x.clone(), BigInt::one()),
        };
        PellRow {
            n,
            a0: a0.clone(),
            a1,
            a2,
            m: m.clone(),
        }
    }

    /// The first `count` rows. Every row is checked against the Pell
    /// equation, the condition on `N` and the main equation.
    pub fn generate(&self, count: usize) -> Vec<PellRow> {
        let eq = equation_357();
        let mut terms: Vec<(BigInt, BigInt, BigInt)> = self.seeds.to_vec();
        while terms.len() < count {
            let k = terms.len();
            let (p, q) = (&terms[k - 1], &terms[k - 2]);
            let c = &self.coefficient;
            terms.push((c * &p.0 - &q.0, c * &p.1 - &q.1, c * &p.2 - &q.2));
        }
        terms.truncate(count);
        terms
            .iter()
            .enumerate()
            .map(|(n, t)| {
                let row = self.row(n, t);
                let free = &t.1;
                assert_eq!(free * free - self.pell_d() * &row.m * &row.m, BigInt::one());
                assert_eq!(condition_357(&row.a1, &row.a2), Some(self.n_per_m() * &row.m));
                assert!(verify_solution(&eq, &row.solution()));
                row
            })
            .collect()
    }
}

pub fn family_a1_fixed(count: usize) -> Vec<PellRow> {
    PellFamily::a1_fixed().generate(count)
}

pub fn family_a2_fixed(count: usize) -> Vec<PellRow> {
    PellFamily::a2_fixed().generate(count)
}

/// The solutions sharing `(a1, a2)`, in increasing order of `a0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    solutions: Vec<Solution>,
}

impl Component {
    pub fn solutions(&self) -> &[Solution] {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn minimal(&self) -> &Solution {
        &self.solutions[0]
    }

    pub fn contains(&self, s: &Solution) -> bool {
        self.solutions.contains(s)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.solutions.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn is_primitive(s: &Solution) -> bool {
    s.0[0].gcd(&s.0[1]).gcd(&s.0[2]).is_one()
}

pub fn component_of(s: &Solution) -> Result<Component, PellError> {
    if s.0.iter().any(|a| !a.is_positive()) || !verify_solution(&equation_357(), s) {
        return Err(PellError::NotASolution(s.clone()));
    }
    if !is_primitive(s) {
        return Err(PellError::NotCoprime(s.clone()));
    }
    let slice = solve_quadratic_357(&s.0[1], &s.0[2]);
    Ok(Component {
        solutions: slice.solutions(),
    })
}

/// Whether `(3 a0^2, 5 a1^2, 7 a2^2)` is pairwise coprime.
pub fn coprime_implies_well_formed_check(s: &Solution) -> bool {
    let w = weights_357(s);
    (0..3).all(|i| w[i].gcd(&w[(i + 1) % 3]).is_one())
}

/// Sorted weight triple of a solution.
pub fn weight_triple(s: &Solution) -> WeightTriple {
    let [a, b, c] = weights_357(s);
    WeightTriple::new(a, b, c).expect("solutions are positive")
}

/// Components with primitive solutions over `1 <= a1, a2 <= bound`, ordered by
/// `(a1, a2)`.
pub fn scan_components(bound: u64) -> Vec<Component> {
    let mut out = Vec::new();
    for a1 in 1..=bound {
        for a2 in 1..=bound {
            let slice = solve_quadratic_357(&a1.into(), &a2.into());
            let solutions: Vec<Solution> = slice.solutions().into_iter().filter(is_primitive).collect();
            if !solutions.is_empty() {
                out.push(Component { solutions });
            }
        }
    }
    out
}

/// Zero discriminant; only happens at `a1 = a2 = 1`.
pub fn is_double_root(slice: &QuadraticSlice) -> bool {
    slice.discriminant.is_zero()
}
