//! Arbitrary-precision k-bonacci numbers and k-bonacci vectors.
//!
//! The scalar sequence is `x_n = 0` for `-(k-2) <= n <= 0`, `x_1 = 1` and
//! `x_n = x_{n-1} + ... + x_{n-k}`. The vector family lives in `Z^{k-1}`:
//! `X_0 = 0`, `X_{-i} = e_i` for `1 <= i <= k-1`, and deeper terms follow
//! from the same order-k recurrence solved for the most negative index.
//! Vectors are addressed by their depth `i`, meaning `X_{-i}`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{RwLock, RwLockReadGuard};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer vector with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VecZ(Vec<BigInt>);

/// Exact norms of a [`VecZ`]. The Euclidean norm is kept squared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Norms {
    pub l1: BigInt,
    pub linf: BigInt,
    pub l2_squared: BigInt,
}

impl VecZ {
    pub fn new(entries: Vec<BigInt>) -> Self {
        VecZ(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        VecZ(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        VecZ(vec![BigInt::zero(); dim])
    }

    /// The standard basis vector `e_i` (1-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i - 1] = BigInt::from(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn norms(&self) -> Norms {
        vector_norms(self)
    }

    pub fn l2_squared(&self) -> BigInt {
        self.0.iter().map(|e| e * e).sum()
    }

    /// Squared distance to `other` without allocating the difference.
    pub fn dist_squared(&self, other: &VecZ) -> BigInt {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }

    pub fn add_assign(&mut self, other: &VecZ) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &VecZ) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a -= b;
        }
    }

    /// Entries as `i128`, if they all fit.
    pub fn to_i128(&self) -> Option<Vec<i128>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(ToPrimitive::to_i128).collect()
    }
}

impl<'a> Add<&'a VecZ> for &'a VecZ {
    type Output = VecZ;
    fn add(self, rhs: &'a VecZ) -> VecZ {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<'a> Sub<&'a VecZ> for &'a VecZ {
    type Output = VecZ;
    fn sub(self, rhs: &'a VecZ) -> VecZ {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Neg for VecZ {
    type Output = VecZ;
    fn neg(self) -> VecZ {
        VecZ(self.0.into_iter().map(|e| -e).collect())
    }
}

impl fmt::Display for VecZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

pub fn vector_norms(v: &VecZ) -> Norms {
    let mut l1 = BigInt::zero();
    let mut linf = BigInt::zero();
    let mut l2_squared = BigInt::zero();
    for e in &v.0 {
        let a = e.abs();
        l2_squared += &a * &a;
        if a > linf {
            linf = a.clone();
        }
        l1 += a;
    }
    Norms { l1, linf, l2_squared }
}

/// Per-k cache of scalar terms `x_n` and vector terms `X_{-i}`.
///
/// Caches only grow. Extension takes a write lock, so a context can be
/// shared between threads; after warm-up all access is read-only.
///
/// The context also carries an operation counter. Every arbitrary-precision
/// addition, subtraction, comparison or multiplication performed by the
/// library on behalf of a context is charged to it, including cache growth.
#[derive(Debug)]
pub struct KBonacciContext {
    k: usize,
    scalars: RwLock<Vec<BigInt>>,
    vectors: RwLock<Vec<VecZ>>,
    ops: AtomicU64,
}

impl KBonacciContext {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::UnsupportedOrder { k, min: 2 });
        }
        // x_{-(k-2)} ..= x_0 are zero, then x_1 = 1.
        let mut scalars = vec![BigInt::zero(); k - 1];
        scalars.push(BigInt::from(1));
        let dim = k - 1;
        let mut vectors = vec![VecZ::zero(dim)];
        vectors.extend((1..k).map(|i| VecZ::basis(dim, i)));
        Ok(KBonacciContext {
            k,
            scalars: RwLock::new(scalars),
            vectors: RwLock::new(vectors),
            ops: AtomicU64::new(0),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Dimension of the vectors, `k - 1`.
    pub fn dim(&self) -> usize {
        self.k - 1
    }

    /// Smallest valid scalar index, `-(k-2)`.
    pub fn min_scalar_index(&self) -> i64 {
        -(self.k as i64 - 2)
    }

    pub fn ops(&self) -> u64 {
        self.ops.load(Ordering::Relaxed)
    }

    pub fn reset_ops(&self) {
        self.ops.store(0, Ordering::Relaxed);
    }

    pub(crate) fn charge(&self, n: u64) {
        self.ops.fetch_add(n, Ordering::Relaxed);
    }

    /// The scalar `x_n`.
    pub fn x(&self, n: i64) -> Result<BigInt> {
        if n < self.min_scalar_index() {
            return Err(Error::IndexOutOfDomain { index: n, min: self.min_scalar_index() });
        }
        Ok(self.scalars(n.max(1) as usize).get(n).clone())
    }

    /// The vector `X_{-depth}`.
    pub fn vector(&self, depth: i64) -> Result<VecZ> {
        self.require_vectors()?;
        if depth < 0 {
            return Err(Error::IndexOutOfDomain { index: depth, min: 0 });
        }
        Ok(self.vectors(depth as usize).get(depth as usize).clone())
    }

    pub fn require_vectors(&self) -> Result<()> {
        if self.k < 3 {
            return Err(Error::UnsupportedOrder { k: self.k, min: 3 });
        }
        Ok(())
    }

    /// Checks that `v` is a valid input vector for this context.
    pub fn check_vector(&self, v: &VecZ) -> Result<()> {
        self.require_vectors()?;
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { got: v.dim(), expected: self.dim() });
        }
        Ok(())
    }

    /// Read view of the scalar cache, extended to contain at least `x_upto`.
    pub fn scalars(&self, upto: usize) -> ScalarView<'_> {
        let offset = self.k - 2;
        let needed = upto + offset + 1;
        if self.scalars.read().unwrap().len() < needed {
            let mut cache = self.scalars.write().unwrap();
            let k = self.k;
            while cache.len() < needed {
                let n = cache.len();
                let next: BigInt = cache[n - k..].iter().sum();
                cache.push(next);
                self.charge(k as u64 - 1);
            }
        }
        ScalarView { cache: self.scalars.read().unwrap(), offset }
    }

    /// Read view of the scalar cache extended until its last term exceeds `value`.
    pub fn scalars_exceeding(&self, value: &BigInt) -> ScalarView<'_> {
        let mut upto = 2usize;
        loop {
            let view = self.scalars(upto);
            let top = view.max_index();
            if view.get(top) > value {
                return view;
            }
            upto = top as usize * 2;
        }
    }

    /// Read view of the vector cache, extended to contain at least `X_{-upto}`.
    pub fn vectors(&self, upto: usize) -> VectorView<'_> {
        if self.vectors.read().unwrap().len() <= upto {
            let mut cache = self.vectors.write().unwrap();
            let k = self.k;
            while cache.len() <= upto {
                let m = cache.len();
                let mut next = cache[m - k].clone();
                for j in 1..k {
                    next.sub_assign(&cache[m - j]);
                }
                cache.push(next);
                self.charge(((k - 1) * (k - 1)) as u64);
            }
        }
        VectorView { cache: self.vectors.read().unwrap() }
    }
}

pub struct ScalarView<'a> {
    cache: RwLockReadGuard<'a, Vec<BigInt>>,
    offset: usize,
}

impl ScalarView<'_> {
    pub fn get(&self, n: i64) -> &BigInt {
        &self.cache[(n + self.offset as i64) as usize]
    }

    /// Largest cached index.
    pub fn max_index(&self) -> i64 {
        self.cache.len() as i64 - 1 - self.offset as i64
    }

    /// Largest `n` in `[floor, hi]` with `x_n <= value`, by binary search.
    /// Returns `None` if `x_floor > value`. Comparisons are charged to `ctx`.
    pub fn max_index_le(&self, value: &BigInt, floor: i64, hi: i64, ctx: &KBonacciContext) -> Option<i64> {
        let (mut lo, mut hi) = (floor, hi);
        let mut found = None;
        let mut cmps = 0;
        while lo <= hi {
            let mid = lo + (hi - lo) / 2;
            cmps += 1;
            if self.get(mid) <= value {
                found = Some(mid);
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        ctx.charge(cmps);
        found
    }
}

pub struct VectorView<'a> {
    cache: RwLockReadGuard<'a, Vec<VecZ>>,
}

impl VectorView<'_> {
    pub fn get(&self, depth: usize) -> &VecZ {
        &self.cache[depth]
    }

    pub fn max_depth(&self) -> usize {
        self.cache.len() - 1
    }
}

/// `x_n` for order `k`.
pub fn kbonacci_number(ctx: &KBonacciContext, n: i64) -> Result<BigInt> {
    ctx.x(n)
}

/// `X_{-depth}` for the context's order.
pub fn kbonacci_vector(ctx: &KBonacciContext, depth: i64) -> Result<VecZ> {
    ctx.vector(depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(k: usize) -> KBonacciContext {
        KBonacciContext::new(k).unwrap()
    }

    #[test]
    fn tribonacci_values() {
        let c = ctx(3);
        assert_eq!(c.x(19).unwrap(), BigInt::from(35890));
        assert_eq!(c.x(13).unwrap(), BigInt::from(927));
        assert_eq!(c.x(0).unwrap(), BigInt::zero());
        assert_eq!(c.x(-1).unwrap(), BigInt::zero());
        assert!(matches!(c.x(-2), Err(Error::IndexOutOfDomain { .. })));
    }

    #[test]
    fn fibonacci_case() {
        let c = ctx(2);
        let fib: Vec<i64> = (0..=10).map(|n| i64::try_from(c.x(n).unwrap()).unwrap()).collect();
        assert_eq!(fib, vec![0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        assert!(c.x(-1).is_err());
        assert!(c.vector(1).is_err());
    }

    #[test]
    fn tribonacci_vectors() {
        let c = ctx(3);
        let expect = [(0, 0), (1, 0), (0, 1), (-1, -1), (2, 0), (-1, 2), (-2, -3), (5, 1)];
        for (d, (a, b)) in expect.iter().enumerate() {
            assert_eq!(c.vector(d as i64).unwrap(), VecZ::from_i64(&[*a, *b]), "depth {d}");
        }
        assert!(c.vector(-1).is_err());
    }

    #[test]
    fn recurrence_replay() {
        for k in 2..=5usize {
            let c = ctx(k);
            let view = c.scalars(60);
            for n in 2..=60i64 {
                let s: BigInt = (1..=k as i64).map(|j| view.get(n - j)).sum();
                assert_eq!(&s, view.get(n), "k={k} n={n}");
                assert!(n < 3 || view.get(n) > view.get(n - 1));
            }
        }
    }

    #[test]
    fn vector_forward_recurrence() {
        for k in 3..=5usize {
            let c = ctx(k);
            let view = c.vectors(40);
            let minus_ones = VecZ::from_i64(&vec![-1; k - 1]);
            assert_eq!(view.get(k), &minus_ones);
            for m in k..=40 {
                let mut s = VecZ::zero(k - 1);
                for j in 0..k {
                    s.add_assign(view.get(m - j));
                }
                assert_eq!(&s, view.get(m - k), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn norms() {
        let n = VecZ::from_i64(&[2, -2]).norms();
        assert_eq!((n.l1, n.linf, n.l2_squared), (4.into(), 2.into(), 8.into()));
        let n = VecZ::from_i64(&[0, 0]).norms();
        assert_eq!((n.l1, n.linf, n.l2_squared), (0.into(), 0.into(), 0.into()));
        let n = VecZ::from_i64(&[5, 1]).norms();
        assert_eq!((n.l1, n.linf, n.l2_squared), (6.into(), 5.into(), 26.into()));
    }

    #[test]
    fn cache_growth_is_charged() {
        let c = ctx(3);
        c.reset_ops();
        c.scalars(10);
        let after = c.ops();
        assert!(after > 0);
        c.scalars(10);
        assert_eq!(c.ops(), after);
    }
}
