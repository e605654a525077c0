//! Satisfying representations and the maps between vectors and integers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar_greedy::greedy_decompose;
use crate::sequences::{KBonacciContext, VecZ};

/// Distinct vector indices `i >= 1`, each standing for `X_{-i}`, kept ascending.
///
/// Serializes as an ascending integer array. The empty set represents `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds a set from indices in any order. Fails on duplicates or zero.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        let ok = indices.first().is_none_or(|&i| i >= 1) && indices.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::InvalidIndexSet(indices));
        }
        Ok(IndexSet(indices))
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        IndexSet(indices)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// `J`, the largest index; `0` for the empty set.
    pub fn max_index(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    /// True iff no `k` consecutive integers are present.
    pub fn is_satisfying(&self, k: usize) -> bool {
        longest_run(&self.0) < k
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Vec<usize> {
        s.0
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Longest run of consecutive integers in an ascending slice.
fn longest_run(sorted: &[usize]) -> usize {
    let mut best = 0;
    let mut run = 0;
    let mut prev: Option<usize> = None;
    for &i in sorted {
        run = match prev {
            Some(p) if p + 1 == i => run + 1,
            _ => 1,
        };
        best = best.max(run);
        prev = Some(i);
    }
    best
}

/// Scalar indices `>= 2` of a k-Zeckendorf representation, ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScalarIndexSet(pub(crate) Vec<usize>);

impl ScalarIndexSet {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid(&self, k: usize) -> bool {
        self.0.first().is_none_or(|&i| i >= 2)
            && self.0.windows(2).all(|w| w[0] < w[1])
            && longest_run(&self.0) < k
    }

    pub fn value(&self, ctx: &KBonacciContext) -> BigInt {
        let view = ctx.scalars(self.0.last().copied().unwrap_or(1));
        self.0.iter().map(|&i| view.get(i as i64)).sum()
    }
}

/// Nonnegative coefficients over vector indices, finite support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientVector {
    coeffs: BTreeMap<usize, u64>,
}

impl CoefficientVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(usize, u64)]) -> Self {
        let mut c = Self::new();
        for &(i, n) in pairs {
            c.add(i, n);
        }
        c
    }

    pub fn from_index_set(s: &IndexSet) -> Self {
        CoefficientVector { coeffs: s.indices().iter().map(|&i| (i, 1)).collect() }
    }

    /// Adds `n` copies of `X_{-i}`. Panics on `i == 0`.
    pub fn add(&mut self, i: usize, n: u64) {
        assert!(i >= 1, "vector index 0 is not a summand");
        if n > 0 {
            *self.coeffs.entry(i).or_insert(0) += n;
        }
    }

    /// Removes `n` copies of `X_{-i}`; panics if fewer are present.
    pub fn remove(&mut self, i: usize, n: u64) {
        let c = self.coeffs.get_mut(&i).expect("coefficient present");
        assert!(*c >= n);
        *c -= n;
        if *c == 0 {
            self.coeffs.remove(&i);
        }
    }

    pub fn get(&self, i: usize) -> u64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    pub fn total(&self) -> u64 {
        self.coeffs.values().sum()
    }

    pub fn max_index(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// Returns the index set if every coefficient is 0 or 1.
    pub fn to_index_set(&self) -> Option<IndexSet> {
        if self.coeffs.values().any(|&c| c > 1) {
            return None;
        }
        Some(IndexSet::from_sorted_unchecked(self.coeffs.keys().copied().collect()))
    }

    /// Nearly satisfying: coefficients in {0,1,2}, no `k` consecutive nonzero
    /// entries, and at most one maximal run of nonzero entries contains a 2.
    pub fn is_nsr(&self, k: usize) -> bool {
        if self.coeffs.values().any(|&c| c > 2) {
            return false;
        }
        let keys: Vec<usize> = self.coeffs.keys().copied().collect();
        if longest_run(&keys) >= k {
            return false;
        }
        let mut runs_with_two = 0;
        let mut run_has_two = false;
        let mut prev: Option<usize> = None;
        for (&i, &c) in &self.coeffs {
            if prev.is_some_and(|p| p + 1 != i) {
                runs_with_two += run_has_two as usize;
                run_has_two = false;
            }
            run_has_two |= c == 2;
            prev = Some(i);
        }
        runs_with_two += run_has_two as usize;
        runs_with_two <= 1
    }

    pub fn evaluate(&self, ctx: &KBonacciContext) -> VecZ {
        let view = ctx.vectors(self.max_index());
        let mut acc = vec![BigInt::zero(); ctx.dim()];
        for (&i, &c) in &self.coeffs {
            for (a, x) in acc.iter_mut().zip(view.get(i).entries()) {
                *a += x * c;
            }
        }
        VecZ::new(acc)
    }
}

/// Free-function form of [`IndexSet::is_satisfying`].
pub fn is_satisfying(s: &IndexSet, k: usize) -> bool {
    s.is_satisfying(k)
}

/// `sum X_{-i}` over the set.
pub fn evaluate_vector(ctx: &KBonacciContext, s: &IndexSet) -> Result<VecZ> {
    ctx.require_vectors()?;
    let view = ctx.vectors(s.max_index());
    let mut acc = VecZ::zero(ctx.dim());
    for &i in s.indices() {
        acc.add_assign(view.get(i));
    }
    ctx.charge((s.len() * ctx.dim()) as u64);
    Ok(acc)
}

/// `J(s)`: the largest index, `0` for the empty set.
pub fn max_index_j(s: &IndexSet) -> usize {
    s.max_index()
}

/// `S_n(v) = v . (x_{n-1}, ..., x_{n-(k-1)}) mod x_n`, in `[0, x_n)`.
pub fn project_sn(ctx: &KBonacciContext, v: &VecZ, n: i64) -> Result<BigInt> {
    ctx.check_vector(v)?;
    let k = ctx.k() as i64;
    if n < k - 2 {
        return Err(Error::IndexOutOfDomain { index: n, min: k - 2 });
    }
    let view = ctx.scalars(n.max(1) as usize);
    let mut dot = BigInt::zero();
    for (i, e) in v.entries().iter().enumerate() {
        dot += e * view.get(n - 1 - i as i64);
    }
    let modulus = view.get(n);
    ctx.charge(2 * v.dim() as u64 + 1);
    Ok(dot.mod_floor(modulus))
}

/// `f(s) = sum x_{i+1}` over the satisfying set `s`.
pub fn sr_to_integer_f(ctx: &KBonacciContext, s: &IndexSet) -> Result<BigInt> {
    if !s.is_satisfying(ctx.k()) {
        return Err(Error::NotSatisfying(s.indices().to_vec()));
    }
    let view = ctx.scalars(s.max_index() + 1);
    Ok(s.indices().iter().map(|&i| view.get(i as i64 + 1)).sum())
}

/// Inverse of [`sr_to_integer_f`]: scalar greedy, then every index shifted down by one.
pub fn integer_to_sr_f_inverse(ctx: &KBonacciContext, m: &BigInt) -> Result<IndexSet> {
    if m.is_negative() {
        return Err(Error::IndexOutOfDomain { index: -1, min: 0 });
    }
    let scalar = greedy_decompose(ctx, m)?;
    Ok(IndexSet::from_sorted_unchecked(scalar.indices().iter().map(|&l| l - 1).collect()))
}

/// Enumerates every satisfying set with max index `<= max_index`, ascending by value of `f`.
pub fn all_satisfying_upto(k: usize, max_index: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(k: usize, i: usize, run: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
        if i == 0 {
            let mut s = cur.clone();
            s.reverse();
            out.push(IndexSet::from_sorted_unchecked(s));
            return;
        }
        rec(k, i - 1, 0, cur, out);
        if run + 1 < k {
            cur.push(i);
            rec(k, i - 1, run + 1, cur, out);
            cur.pop();
        }
    }
    rec(k, max_index, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn satisfying_predicate() {
        assert!(set(&[1, 3, 4, 7]).is_satisfying(3));
        assert!(!set(&[1, 2, 3]).is_satisfying(3));
        assert!(IndexSet::empty().is_satisfying(3));
        assert!(set(&[1, 2, 3]).is_satisfying(4));
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(vec![0, 2]).is_err());
        assert!(IndexSet::new(vec![2, 2]).is_err());
        assert_eq!(IndexSet::new(vec![7, 1, 4]).unwrap().indices(), &[1, 4, 7]);
        let json = serde_json::to_string(&set(&[1, 3, 4, 7])).unwrap();
        assert_eq!(json, "[1,3,4,7]");
        let back: IndexSet = serde_json::from_str("[7,3]").unwrap();
        assert_eq!(back, set(&[3, 7]));
        assert!(serde_json::from_str::<IndexSet>("[0]").is_err());
    }

    #[test]
    fn evaluation_examples() {
        let ctx = KBonacciContext::new(3).unwrap();
        assert_eq!(evaluate_vector(&ctx, &set(&[1, 3, 4, 7])).unwrap(), VecZ::from_i64(&[7, 0]));
        assert_eq!(evaluate_vector(&ctx, &IndexSet::empty()).unwrap(), VecZ::from_i64(&[0, 0]));
        assert_eq!(evaluate_vector(&ctx, &set(&[2, 3, 6, 7])).unwrap(), VecZ::from_i64(&[2, -2]));
        assert_eq!(evaluate_vector(&ctx, &set(&[2])).unwrap(), VecZ::from_i64(&[0, 1]));
    }

    #[test]
    fn max_index_examples() {
        assert_eq!(max_index_j(&set(&[1, 3, 4, 7])), 7);
        assert_eq!(max_index_j(&IndexSet::empty()), 0);
        assert_eq!(max_index_j(&set(&[2])), 2);
    }

    #[test]
    fn projection_examples() {
        let ctx = KBonacciContext::new(3).unwrap();
        assert_eq!(project_sn(&ctx, &VecZ::from_i64(&[2, -2]), 19).unwrap(), 17808.into());
        assert_eq!(project_sn(&ctx, &VecZ::from_i64(&[3, 0]), 9).unwrap(), 51.into());
        assert_eq!(project_sn(&ctx, &VecZ::from_i64(&[0, 0]), 9).unwrap(), 0.into());
        assert!(project_sn(&ctx, &VecZ::from_i64(&[1, 0]), 0).is_err());
        assert!(project_sn(&ctx, &VecZ::from_i64(&[1, 0, 0]), 9).is_err());
    }

    #[test]
    fn bijection_f_examples() {
        let ctx = KBonacciContext::new(3).unwrap();
        assert_eq!(sr_to_integer_f(&ctx, &IndexSet::empty()).unwrap(), 0.into());
        assert_eq!(sr_to_integer_f(&ctx, &set(&[1])).unwrap(), 1.into());
        assert_eq!(sr_to_integer_f(&ctx, &set(&[1, 3, 4, 7])).unwrap(), 56.into());
        assert!(matches!(sr_to_integer_f(&ctx, &set(&[1, 2, 3])), Err(Error::NotSatisfying(_))));
        assert_eq!(integer_to_sr_f_inverse(&ctx, &0.into()).unwrap(), IndexSet::empty());
        assert_eq!(integer_to_sr_f_inverse(&ctx, &56.into()).unwrap(), set(&[1, 3, 4, 7]));
        assert_eq!(integer_to_sr_f_inverse(&ctx, &1.into()).unwrap(), set(&[1]));
    }

    #[test]
    fn nsr_predicate() {
        let k = 3;
        assert!(CoefficientVector::from_pairs(&[(1, 2), (2, 1), (5, 1)]).is_nsr(k));
        assert!(!CoefficientVector::from_pairs(&[(1, 2), (5, 2)]).is_nsr(k));
        assert!(!CoefficientVector::from_pairs(&[(1, 1), (2, 1), (3, 1)]).is_nsr(k));
        assert!(!CoefficientVector::from_pairs(&[(1, 3)]).is_nsr(k));
        assert!(CoefficientVector::from_pairs(&[(4, 2), (5, 2)]).is_nsr(k));
    }

    #[test]
    fn coefficient_evaluation_matches_index_set() {
        let ctx = KBonacciContext::new(4).unwrap();
        let s = set(&[1, 2, 5, 9]);
        assert_eq!(CoefficientVector::from_index_set(&s).evaluate(&ctx), evaluate_vector(&ctx, &s).unwrap());
        let c = CoefficientVector::from_pairs(&[(3, 2)]);
        let x3 = ctx.vector(3).unwrap();
        assert_eq!(c.evaluate(&ctx), &x3 + &x3);
    }
}
