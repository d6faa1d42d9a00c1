//! Markov-type Diophantine equations attached to weight triples.
//!
//! Well-formed weights `λi = ci * ai^2` (with `ci` square-free) give a solution
//! `(a0, a1, a2)` of `m x0 x1 x2 = k (c0 x0^2 + c1 x1^2 + c2 x2^2)`, where
//! `(λ0 + λ1 + λ2)^2 / (λ0 λ1 λ2) = m^2 / (r k^2)`. Weight mutations act on
//! solutions by Vieta jumping in one coordinate, and height (the weight sum)
//! orients the resulting graph into a tree rooted at the minimal weights.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::fwps::{mutate_weights, FwpsError, WeightTriple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiophantineError {
    #[error("weights must be positive")]
    NonPositive,
    #[error("{0} does not solve the equation")]
    NotASolution(Solution),
    #[error("mutation at pivot {0} leaves the positive integers")]
    NonIntegral(usize),
    #[error("pivot {0} out of range")]
    PivotOutOfRange(usize),
    #[error(transparent)]
    Weights(#[from] FwpsError),
}

/// `n = c * a^2` with `c` square-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFreeDecomposition {
    pub c: BigInt,
    pub a: BigInt,
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Trial division by every `p` with `p^3` at most the remaining cofactor.
/// What is left then has at most two prime factors, so it is either `1`, a
/// prime square, or square-free.
pub fn square_free_decompose(n: &BigInt) -> SquareFreeDecomposition {
    assert!(n.is_positive(), "square-free decomposition needs n >= 1");
    let mut rest = n.clone();
    let mut c = BigInt::one();
    let mut a = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p * &p <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            a *= p.pow(e / 2);
            if e % 2 == 1 {
                c *= &p;
            }
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if !rest.is_one() {
        match exact_sqrt(&rest) {
            Some(s) => a *= s,
            None => c *= rest,
        }
    }
    SquareFreeDecomposition { c, a }
}

/// `m x0 x1 x2 = k (c0 x0^2 + c1 x1^2 + c2 x2^2)` together with the
/// square-free `r` of `m^2 / (r k^2)`; `gcd(m, k) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiophantineEquation {
    pub m: BigInt,
    pub k: BigInt,
    pub c: [BigInt; 3],
    pub r: BigInt,
}

impl DiophantineEquation {
    /// `m^2 / (r k^2)`.
    pub fn degree_expression(&self) -> BigRational {
        BigRational::new(self.m.pow(2), &self.r * self.k.pow(2))
    }

    /// `m^2 / (c0 c1 c2 k^2)`, the anticanonical degree for well-formed weights.
    pub fn degree(&self) -> BigRational {
        BigRational::new(self.m.pow(2), self.c.iter().product::<BigInt>() * self.k.pow(2))
    }

    /// `λi = ci ai^2`.
    pub fn weights_of(&self, s: &Solution) -> [BigInt; 3] {
        [0, 1, 2].map(|i| &self.c[i] * s.0[i].pow(2))
    }

    /// Up to a permutation of the variables.
    pub fn same_up_to_permutation(&self, other: &Self) -> bool {
        let mut a = self.c.clone();
        let mut b = other.c.clone();
        a.sort();
        b.sort();
        self.m == other.m && self.k == other.k && self.r == other.r && a == b
    }
}

fn monomial(coef: &BigInt, var: &str) -> String {
    if coef.is_one() {
        var.to_string()
    } else {
        format!("{coef}{var}")
    }
}

impl fmt::Display for DiophantineEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = monomial(&self.m, "x0x1x2");
        let terms: Vec<String> = (0..3).map(|i| monomial(&self.c[i], &format!("x{i}^2"))).collect();
        let rhs = terms.join("+");
        if self.k.is_one() {
            write!(f, "{lhs} = {rhs}")
        } else {
            write!(f, "{lhs} = {}({rhs})", self.k)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution(pub [BigInt; 3]);

impl Solution {
    pub fn from_ints(a0: u64, a1: u64, a2: u64) -> Self {
        Solution([a0.into(), a1.into(), a2.into()])
    }

    pub fn sorted(&self) -> Self {
        let mut v = self.0.clone();
        v.sort();
        Solution(v)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.0;
        write!(f, "({a}, {b}, {c})")
    }
}

/// The data `λi = d ci ai^2`, `c0 c1 c2 = g S^2`, `d r = h T^2` behind the
/// general equation `S m x0 x1 x2 = T k (c0 x0^2 + c1 x1^2 + c2 x2^2)`.
/// Comparing square-free parts forces `g = h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralDerivation {
    pub d: BigInt,
    pub s: BigInt,
    pub t: BigInt,
    pub g: BigInt,
}

impl GeneralDerivation {
    pub fn satisfied_by(&self, eq: &DiophantineEquation, x: &Solution) -> bool {
        let [x0, x1, x2] = &x.0;
        let lhs = &self.s * &eq.m * x0 * x1 * x2;
        let rhs = &self.t * &eq.k * (&eq.c[0] * x0 * x0 + &eq.c[1] * x1 * x1 + &eq.c[2] * x2 * x2);
        lhs == rhs
    }
}

/// Derives the equation for ordered weights. The returned solution is
/// `(d a0, d a1, d a2)`; for well-formed weights `d = S = T = 1`.
pub fn derive_equation(
    weights: &[BigInt; 3],
) -> Result<(DiophantineEquation, Solution, GeneralDerivation), DiophantineError> {
    if weights.iter().any(|l| !l.is_positive()) {
        return Err(DiophantineError::NonPositive);
    }
    let d = weights[0].gcd(&weights[1]).gcd(&weights[2]);
    let parts = weights.clone().map(|l| square_free_decompose(&(l / &d)));
    let sum: BigInt = weights.iter().sum();
    let product: BigInt = weights.iter().product();
    let degree = BigRational::new(sum.pow(2), product);
    let pq = degree.numer() * degree.denom();
    let sq = square_free_decompose(&pq);
    let ratio = BigRational::new(degree.numer().clone(), sq.a);
    let eq = DiophantineEquation {
        m: ratio.numer().clone(),
        k: ratio.denom().clone(),
        c: parts.clone().map(|p| p.c),
        r: sq.c,
    };
    let c_split = square_free_decompose(&eq.c.iter().product());
    let dr_split = square_free_decompose(&(&d * &eq.r));
    assert_eq!(c_split.c, dr_split.c, "square-free parts of c0c1c2 and dr agree");
    let general = GeneralDerivation {
        d: d.clone(),
        s: c_split.a,
        t: dr_split.a,
        g: c_split.c,
    };
    let solution = Solution(parts.map(|p| p.a * &d));
    Ok((eq, solution, general))
}

pub fn verify_solution(eq: &DiophantineEquation, s: &Solution) -> bool {
    let [a0, a1, a2] = &s.0;
    let lhs = &eq.m * a0 * a1 * a2;
    let rhs = &eq.k * (&eq.c[0] * a0 * a0 + &eq.c[1] * a1 * a1 + &eq.c[2] * a2 * a2);
    lhs == rhs
}

/// Replaces `a_pivot` by the other root of the equation viewed as a quadratic
/// in that variable: `(m/k) * a_j * a_l / c_pivot - a_pivot`.
pub fn mutate_solution(eq: &DiophantineEquation, s: &Solution, pivot: usize) -> Result<Solution, DiophantineError> {
    if pivot > 2 {
        return Err(DiophantineError::PivotOutOfRange(pivot));
    }
    if !verify_solution(eq, s) || s.0.iter().any(|a| !a.is_positive()) {
        return Err(DiophantineError::NotASolution(s.clone()));
    }
    let (j, l) = ((pivot + 1) % 3, (pivot + 2) % 3);
    let num = &eq.m * &s.0[j] * &s.0[l];
    let den = &eq.k * &eq.c[pivot];
    if !num.is_multiple_of(&den) {
        return Err(DiophantineError::NonIntegral(pivot));
    }
    let other = num / den - &s.0[pivot];
    if !other.is_positive() {
        return Err(DiophantineError::NonIntegral(pivot));
    }
    let mut out = s.0.clone();
    out[pivot] = other;
    Ok(Solution(out))
}

/// `λ0 + λ1 + λ2`.
pub fn height(w: &WeightTriple) -> BigInt {
    w.sum()
}

/// Weight mutations that lower the height, as `(pivot, target)`. There is
/// at most one. A mutation that keeps the height maps the weights to
/// themselves and does not count.
pub fn decreasing_pivots(w: &WeightTriple) -> Result<Vec<(usize, WeightTriple)>, DiophantineError> {
    neighbours(w, |h| h < height(w))
}

/// Height-increasing weight mutations, one per distinct target.
pub fn increasing_pivots(w: &WeightTriple) -> Result<Vec<(usize, WeightTriple)>, DiophantineError> {
    let mut out: Vec<(usize, WeightTriple)> = Vec::new();
    for (pivot, target) in neighbours(w, |h| h > height(w))? {
        if out.iter().all(|(_, t)| t != &target) {
            out.push((pivot, target));
        }
    }
    Ok(out)
}

fn neighbours(
    w: &WeightTriple,
    keep: impl Fn(BigInt) -> bool,
) -> Result<Vec<(usize, WeightTriple)>, DiophantineError> {
    if !w.is_well_formed() {
        return Err(FwpsError::NotWellFormed(w.clone()).into());
    }
    let mut out = Vec::new();
    for pivot in 0..3 {
        match mutate_weights(w, pivot) {
            Ok(target) => {
                if keep(height(&target)) {
                    out.push((pivot, target));
                }
            }
            Err(FwpsError::NotDivisible { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// Follows the height-decreasing mutation until none exists. The path starts
/// at `w` and ends at the minimal weights of its component.
pub fn descend_to_minimal(w: &WeightTriple) -> Result<Vec<WeightTriple>, DiophantineError> {
    let mut path = vec![w.clone()];
    loop {
        let current = path.last().expect("path is nonempty");
        match decreasing_pivots(current)?.into_iter().next() {
            Some((_, next)) => path.push(next),
            None => return Ok(path),
        }
    }
}

/// Expansion limits; expansion stops at whichever is hit first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeBounds {
    pub max_depth: Option<usize>,
    pub max_height: Option<BigInt>,
}

impl TreeBounds {
    pub fn depth(d: usize) -> Self {
        TreeBounds {
            max_depth: Some(d),
            max_height: None,
        }
    }

    pub fn height(h: impl Into<BigInt>) -> Self {
        TreeBounds {
            max_depth: None,
            max_height: Some(h.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub weights: WeightTriple,
    pub height: BigInt,
    pub depth: usize,
    pub parent: Option<usize>,
    /// Pivot, in the parent's sorted order, that produced this node.
    pub pivot: Option<usize>,
    pub children: Vec<usize>,
    /// Set when the bounds cut off at least one child.
    pub truncated: bool,
}

/// Weight triples reachable by one-step mutations, rooted at the minimal
/// weights. Node 0 is the root; nodes appear in breadth-first order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationTree {
    nodes: Vec<TreeNode>,
}

impl MutationTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph mutations {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let [a, b, c] = n.weights.as_array();
            let style = if n.truncated { ", style=dashed" } else { "" };
            out.push_str(&format!("  n{i} [label=\"{a},{b},{c} (h={})\"{style}];\n", n.height));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let (Some(p), Some(pivot)) = (n.parent, n.pivot) {
                out.push_str(&format!("  n{p} -> n{i} [label=\"{pivot}\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Descends to the minimal weights, then expands all height-increasing
/// mutations breadth first within `bounds`. Children are sorted.
pub fn build_mutation_tree(w: &WeightTriple, bounds: &TreeBounds) -> Result<MutationTree, DiophantineError> {
    let root = descend_to_minimal(w)?.pop().expect("path is nonempty");
    let mut nodes = vec![TreeNode {
        height: height(&root),
        weights: root.clone(),
        depth: 0,
        parent: None,
        pivot: None,
        children: Vec::new(),
        truncated: false,
    }];
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut children = increasing_pivots(&nodes[i].weights)?;
        if bounds.max_depth.is_some_and(|d| nodes[i].depth >= d) {
            nodes[i].truncated = !children.is_empty();
            continue;
        }
        if let Some(hmax) = &bounds.max_height {
            let before = children.len();
            children.retain(|(_, t)| &height(t) <= hmax);
            nodes[i].truncated = children.len() < before;
        }
        children.sort_by(|a, b| a.1.cmp(&b.1));
        for (pivot, target) in children {
            if !seen.insert(target.clone()) {
                continue;
            }
            let idx = nodes.len();
            nodes.push(TreeNode {
                height: height(&target),
                weights: target,
                depth: nodes[i].depth + 1,
                parent: Some(i),
                pivot: Some(pivot),
                children: Vec::new(),
                truncated: false,
            });
            nodes[i].children.push(idx);
            queue.push_back(idx);
        }
    }
    Ok(MutationTree { nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn wt(a: u64, b: u64, c: u64) -> WeightTriple {
        WeightTriple::from_ints(a, b, c).unwrap()
    }

    fn trial_division_sqfree(n: u64) -> (u64, u64) {
        let (mut c, mut a, mut rest, mut p) = (1, 1, n, 2);
        while rest > 1 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            a *= p.pow(e / 2);
            if e % 2 == 1 {
                c *= p;
            }
            p += 1;
        }
        (c, a)
    }

    #[test]
    fn square_free_examples() {
        assert_eq!(square_free_decompose(&big(12)), SquareFreeDecomposition { c: big(3), a: big(2) });
        assert_eq!(square_free_decompose(&big(1)), SquareFreeDecomposition { c: big(1), a: big(1) });
        assert_eq!(square_free_decompose(&big(169)), SquareFreeDecomposition { c: big(1), a: big(13) });
        for n in 1..3000u64 {
            let (c, a) = trial_division_sqfree(n);
            assert_eq!(square_free_decompose(&big(n as i64)), SquareFreeDecomposition { c: big(c as i64), a: big(a as i64) });
        }
        // a large prime square and a product of two large primes
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(999_983u64);
        assert_eq!(square_free_decompose(&(&p * &p * 7)).a, p.clone());
        assert_eq!(square_free_decompose(&(&p * &q)).c, &p * &q);
    }

    #[test]
    fn markov_equation_from_p2() {
        let (eq, sol, general) = derive_equation(&[big(1), big(1), big(1)]).unwrap();
        assert_eq!((eq.m.clone(), eq.k.clone()), (big(3), big(1)));
        assert_eq!(eq.c, [big(1), big(1), big(1)]);
        assert_eq!(sol, Solution::from_ints(1, 1, 1));
        assert_eq!(eq.to_string(), "3x0x1x2 = x0^2+x1^2+x2^2");
        assert_eq!((general.d, general.s, general.t), (big(1), big(1), big(1)));

        let (eq114, sol, _) = derive_equation(&[big(1), big(1), big(4)]).unwrap();
        assert_eq!(eq114, eq);
        assert_eq!(sol, Solution::from_ints(1, 1, 2));
    }

    #[test]
    fn equation_of_12_5_7() {
        let (eq, sol, _) = derive_equation(&[big(12), big(5), big(7)]).unwrap();
        assert_eq!(eq.to_string(), "12x0x1x2 = 3x0^2+5x1^2+7x2^2");
        assert_eq!(sol, Solution::from_ints(2, 1, 1));
        assert_eq!(eq.degree(), BigRational::new(big(144), big(105)));
        assert_eq!(eq.r, big(105));
    }

    #[test]
    fn general_derivation_for_non_well_formed_weights() {
        let (eq, sol, g) = derive_equation(&[big(2), big(2), big(2)]).unwrap();
        assert_eq!((g.d.clone(), g.s.clone(), g.t.clone(), g.g.clone()), (big(2), big(1), big(2), big(1)));
        assert!(g.satisfied_by(&eq, &sol));
        let (eq, sol, g) = derive_equation(&[big(2), big(2), big(1)]).unwrap();
        assert_eq!(g.s, big(2));
        assert!(g.satisfied_by(&eq, &sol));
        assert_eq!(derive_equation(&[big(0), big(1), big(1)]), Err(DiophantineError::NonPositive));
    }

    #[test]
    fn verification() {
        let (markov, _, _) = derive_equation(&[big(1), big(1), big(1)]).unwrap();
        assert!(verify_solution(&markov, &Solution::from_ints(1, 1, 1)));
        assert!(!verify_solution(&markov, &Solution::from_ints(1, 1, 3)));
        let (eq, _, _) = derive_equation(&[big(12), big(5), big(7)]).unwrap();
        assert!(verify_solution(&eq, &Solution::from_ints(3, 1, 4)));
    }

    #[test]
    fn solution_mutation() {
        let (markov, _, _) = derive_equation(&[big(1), big(1), big(1)]).unwrap();
        assert_eq!(
            mutate_solution(&markov, &Solution::from_ints(1, 1, 1), 0).unwrap(),
            Solution::from_ints(2, 1, 1)
        );
        assert_eq!(
            mutate_solution(&markov, &Solution::from_ints(1, 1, 2), 2).unwrap(),
            Solution::from_ints(1, 1, 1)
        );
        let (eq, _, _) = derive_equation(&[big(12), big(5), big(7)]).unwrap();
        let s = Solution::from_ints(2, 1, 1);
        assert_eq!(mutate_solution(&eq, &s, 1), Err(DiophantineError::NonIntegral(1)));
        assert_eq!(mutate_solution(&eq, &s, 0).unwrap(), s);
        assert!(matches!(
            mutate_solution(&eq, &Solution::from_ints(1, 1, 1), 0),
            Err(DiophantineError::NotASolution(_))
        ));
    }

    #[test]
    fn heights() {
        assert_eq!(height(&wt(1, 1, 1)), big(3));
        assert_eq!(height(&wt(1, 1, 4)), big(6));
        assert_eq!(height(&wt(12, 5, 7)), big(24));
    }

    #[test]
    fn descent() {
        assert_eq!(
            descend_to_minimal(&wt(1, 4, 25)).unwrap(),
            vec![wt(1, 4, 25), wt(1, 1, 4), wt(1, 1, 1)]
        );
        assert_eq!(descend_to_minimal(&wt(1, 1, 1)).unwrap(), vec![wt(1, 1, 1)]);
        assert_eq!(descend_to_minimal(&wt(12, 5, 7)).unwrap(), vec![wt(12, 5, 7)]);
        assert!(descend_to_minimal(&wt(2, 3, 4)).is_err());
    }

    #[test]
    fn small_trees() {
        let t = build_mutation_tree(&wt(1, 1, 1), &TreeBounds::depth(2)).unwrap();
        let ws: Vec<_> = t.nodes().iter().map(|n| n.weights.clone()).collect();
        assert_eq!(ws, vec![wt(1, 1, 1), wt(1, 1, 4), wt(1, 4, 25)]);
        assert!(t.nodes()[2].truncated);
        assert!(!t.nodes()[0].truncated);

        let t = build_mutation_tree(&wt(3, 5, 11), &TreeBounds::depth(10)).unwrap();
        assert_eq!(t.len(), 1);

        // starting from a non-minimal node still roots the tree at (1,1,1)
        let t = build_mutation_tree(&wt(1, 4, 25), &TreeBounds::height(40)).unwrap();
        assert_eq!(t.root().weights, wt(1, 1, 1));
        assert_eq!(t.len(), 3);
        assert!(t.nodes()[2].truncated);
    }

    #[test]
    fn dot_rendering() {
        let t = build_mutation_tree(&wt(1, 1, 1), &TreeBounds::depth(1)).unwrap();
        let dot = t.to_dot();
        assert!(dot.contains("n0 [label=\"1,1,1 (h=3)\"];"));
        assert!(dot.contains("n0 -> n1 [label=\"0\"];"));
    }
}
