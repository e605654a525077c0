//! Exact generating functions for the summand count on a layer.
//!
//! Words of length `n` with first bit `1` and no `k` consecutive ones are in
//! bijection with the layer `D_n \ D_{n-1}`, the number of ones being the
//! number of summands. With `N = x - x^k` and `V = (1-x) Delta_k(x)`:
//! `A_k = N/V` counts words, `B_k` sums the ones and `C_k` sums their squares.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A power series truncated after `x^order`, with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPowerSeries {
    coeffs: Vec<BigRational>,
}

impl RationalPowerSeries {
    pub fn zero(order: usize) -> Self {
        RationalPowerSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(1, 0, order)
    }

    /// `c x^power`, truncated.
    pub fn monomial(c: i64, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = BigRational::from_integer(c.into());
        }
        s
    }

    /// A polynomial given by integer coefficients, truncated.
    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, &c) in coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[i] = BigRational::from_integer(c.into());
        }
        s
    }

    pub fn from_rationals(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        RationalPowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `[x^n]`, zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, BigRational::zero());
        RationalPowerSeries { coeffs: c }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalPowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Division by a series with nonzero constant term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let order = self.order().min(other.order());
        let b0 = &other.coeffs[0];
        if b0.is_zero() {
            return Err(Error::DivisionByNonUnit);
        }
        let mut q: Vec<BigRational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for i in 1..=n {
                if !other.coeffs[i].is_zero() {
                    acc -= &other.coeffs[i] * &q[n - i];
                }
            }
            q.push(acc / b0);
        }
        Ok(RationalPowerSeries { coeffs: q })
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.order()), |acc, _| &acc * self)
    }
}

impl Add for &RationalPowerSeries {
    type Output = RationalPowerSeries;
    fn add(self, rhs: Self) -> RationalPowerSeries {
        let order = self.order().min(rhs.order());
        RationalPowerSeries { coeffs: (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl Sub for &RationalPowerSeries {
    type Output = RationalPowerSeries;
    fn sub(self, rhs: Self) -> RationalPowerSeries {
        let order = self.order().min(rhs.order());
        RationalPowerSeries { coeffs: (0..=order).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect() }
    }
}

impl Mul for &RationalPowerSeries {
    type Output = RationalPowerSeries;
    fn mul(self, rhs: Self) -> RationalPowerSeries {
        let order = self.order().min(rhs.order());
        let mut out = RationalPowerSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

impl Neg for &RationalPowerSeries {
    type Output = RationalPowerSeries;
    fn neg(self) -> RationalPowerSeries {
        RationalPowerSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

/// `Delta_k(x) = 1 - x - x^2 - ... - x^k`.
pub fn delta(k: usize, order: usize) -> RationalPowerSeries {
    let mut c = vec![-1i64; k + 1];
    c[0] = 1;
    RationalPowerSeries::from_integers(&c, order)
}

// Numerator and denominator of the fixed-first-bit generating function at
// y = 1, together with their first and second y-derivatives.
struct Parts {
    n0: RationalPowerSeries,
    n1: RationalPowerSeries,
    n2: RationalPowerSeries,
    v0: RationalPowerSeries,
    v1: RationalPowerSeries,
    v2: RationalPowerSeries,
}

fn parts(k: usize, order: usize) -> Parts {
    let o = order;
    let ki = k as i64;
    let m = |c: i64, p: usize| RationalPowerSeries::monomial(c, p, o);
    let one_minus_x = RationalPowerSeries::from_integers(&[1, -1], o);
    let d = delta(k, o);
    // sum_{r=1}^{k-1} r x^{r+1} and sum_{r=2}^{k-1} r(r-1) x^{r+1}
    let mut s1 = RationalPowerSeries::zero(o);
    let mut s2 = RationalPowerSeries::zero(o);
    for r in 1..k as i64 {
        s1 = &s1 + &m(r, r as usize + 1);
        if r >= 2 {
            s2 = &s2 + &m(r * (r - 1), r as usize + 1);
        }
    }
    let x = m(1, 1);
    let v0 = &one_minus_x * &d;
    let v1 = &-&(&x * &d) - &(&one_minus_x * &s1);
    let v2 = &(&one_minus_x * &-&s2) + &(&m(2, 1) * &s1);
    Parts {
        n0: &x - &m(1, k),
        n1: &x - &m(ki, k),
        n2: m(-ki * (ki - 1), k),
        v0,
        v1,
        v2,
    }
}

/// `A_k(x) = (x - x^k) / (1 - 2x + x^{k+1})`; `[x^n] A_k = |W_{n,k}|`.
pub fn series_a(k: usize, order: usize) -> RationalPowerSeries {
    let p = parts(k, order);
    p.n0.div(&p.v0).expect("V(0) = 1")
}

/// `B_k = (N' V - N V') / V^2`; `[x^n] B_k` is the total number of ones over `W_{n,k}`.
pub fn series_b(k: usize, order: usize) -> RationalPowerSeries {
    let p = parts(k, order);
    let num = &(&p.n1 * &p.v0) - &(&p.n0 * &p.v1);
    num.div(&p.v0.pow(2)).expect("V(0) = 1")
}

/// `C_k = (N'' V^2 - N V'' V - 2 N' V V' + 2 N V'^2) / V^3 + B_k`;
/// `[x^n] C_k` is the sum of squared one-counts over `W_{n,k}`.
pub fn series_c(k: usize, order: usize) -> RationalPowerSeries {
    let p = parts(k, order);
    let two = RationalPowerSeries::monomial(2, 0, order);
    let t1 = &p.n2 * &p.v0.pow(2);
    let t2 = &(&p.n0 * &p.v2) * &p.v0;
    let t3 = &(&(&two * &p.n1) * &p.v0) * &p.v1;
    let t4 = &(&two * &p.n0) * &p.v1.pow(2);
    let num = &(&(&t1 - &t2) - &t3) + &t4;
    let second = num.div(&p.v0.pow(3)).expect("V(0) = 1");
    &second + &series_b(k, order)
}

/// Exact first and second moments of the summand count, for `1 <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub k: usize,
    /// Index `n` holds `([x^n] A, [x^n] B, [x^n] C)`; index `0` is unused.
    pub a: Vec<BigInt>,
    pub b: Vec<BigInt>,
    pub c: Vec<BigInt>,
}

fn integer(r: &BigRational) -> BigInt {
    assert!(r.is_integer(), "counting series has integer coefficients");
    r.to_integer()
}

impl Moments {
    pub fn compute(k: usize, n_max: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::UnsupportedOrder { k, min: 2 });
        }
        let a = series_a(k, n_max);
        let b = series_b(k, n_max);
        let c = series_c(k, n_max);
        let ints = |s: &RationalPowerSeries| s.coeffs().iter().map(integer).collect();
        Ok(Moments { k, a: ints(&a), b: ints(&b), c: ints(&c) })
    }

    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }

    pub fn count(&self, n: usize) -> &BigInt {
        &self.a[n]
    }

    pub fn mean(&self, n: usize) -> BigRational {
        BigRational::new(self.b[n].clone(), self.a[n].clone())
    }

    pub fn variance(&self, n: usize) -> BigRational {
        let mean = self.mean(n);
        BigRational::new(self.c[n].clone(), self.a[n].clone()) - &mean * &mean
    }

    /// `mean(n)` for `0..=n_max`, with `0` at `n = 0`.
    pub fn means(&self) -> Vec<BigRational> {
        (0..=self.n_max())
            .map(|n| if n == 0 { BigRational::zero() } else { self.mean(n) })
            .collect()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::IndexOutOfDomain { index: n as i64, min: 1 });
    }
    Ok(())
}

pub fn exact_mean(k: usize, n: usize) -> Result<BigRational> {
    check_n(n)?;
    Ok(Moments::compute(k, n)?.mean(n))
}

pub fn exact_variance(k: usize, n: usize) -> Result<BigRational> {
    check_n(n)?;
    Ok(Moments::compute(k, n)?.variance(n))
}

/// `b[n][m]` = number of words in `W_{n,k}` with `m` ones, for `n, m <= n_max`,
/// read off `F^fix(x, y) = (1 - x) F(x, y) - 1` with
/// `F = (1 - (xy)^k) / (1 - x - xy + x^{k+1} y^k)`.
pub fn f_fix_coefficients(k: usize, n_max: usize) -> Vec<Vec<BigInt>> {
    let dim = n_max + 1;
    let zero = || vec![vec![BigInt::zero(); dim]; dim];
    // denominator d(x, y), with d[0][0] = 1
    let mut d = zero();
    d[0][0] = BigInt::one();
    if dim > 1 {
        d[1][0] -= 1;
        d[1][1] -= 1;
    }
    if k + 1 < dim {
        d[k + 1][k] += 1;
    }
    let mut num = zero();
    num[0][0] = BigInt::one();
    if k < dim {
        num[k][k] -= 1;
    }
    // F = num / d, solved coefficient by coefficient.
    let mut f = zero();
    for n in 0..dim {
        for m in 0..dim {
            let mut acc = num[n][m].clone();
            for i in 0..=n {
                for j in 0..=m {
                    if (i, j) != (0, 0) && !d[i][j].is_zero() {
                        acc -= &d[i][j] * &f[n - i][m - j];
                    }
                }
            }
            f[n][m] = acc;
        }
    }
    let mut fix = zero();
    for n in 0..dim {
        for m in 0..dim {
            fix[n][m] = f[n][m].clone() - if n >= 1 { f[n - 1][m].clone() } else { BigInt::zero() };
        }
    }
    fix[0][0] -= 1;
    fix
}

/// Word counts `b[n][m]` by direct enumeration of `W_{n,k}`.
pub fn enumerate_word_counts(k: usize, n_max: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; n_max + 1]; n_max + 1];
    for n in 1..=n_max {
        for w in 0u64..(1 << (n - 1)) {
            let word = w | (1 << (n - 1));
            if !has_run(word, k) {
                out[n][word.count_ones() as usize] += 1;
            }
        }
    }
    out
}

/// True iff `word` contains `k` consecutive one bits.
pub(crate) fn has_run(word: u64, k: usize) -> bool {
    (1..k).fold(word, |acc, s| acc & (word >> s)) != 0
}

/// True iff the closed form of `F^fix` matches word enumeration for `n, m <= bound`.
pub fn f_fix_bivariate_check(k: usize, n_max: usize, m_max: usize) -> bool {
    let dim = n_max.max(m_max);
    let closed = f_fix_coefficients(k, dim);
    let counted = enumerate_word_counts(k, n_max);
    (0..=n_max).all(|n| (0..=m_max).all(|m| closed[n][m] == BigInt::from(counted[n][m])))
}

/// One row of the moment table.
#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    pub n: usize,
    pub count: String,
    pub mean: f64,
    pub mean_exact: String,
    pub variance: f64,
    pub variance_exact: String,
}

pub fn moment_rows(m: &Moments) -> Vec<MomentRow> {
    use num_traits::ToPrimitive;
    (1..=m.n_max())
        .map(|n| {
            let mean = m.mean(n);
            let var = m.variance(n);
            MomentRow {
                n,
                count: m.count(n).to_string(),
                mean: mean.to_f64().unwrap_or(f64::NAN),
                mean_exact: mean.to_string(),
                variance: var.to_f64().unwrap_or(f64::NAN),
                variance_exact: var.to_string(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &RationalPowerSeries) -> Vec<i64> {
        use num_traits::ToPrimitive;
        s.coeffs().iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn division_example() {
        let one = RationalPowerSeries::one(5);
        let den = RationalPowerSeries::from_integers(&[1, -2, 0, 0, 1], 5);
        assert_eq!(ints(&one.div(&den).unwrap()), vec![1, 2, 4, 8, 15, 28]);
        let x = RationalPowerSeries::monomial(1, 1, 5);
        assert_eq!(one.div(&x), Err(Error::DivisionByNonUnit));
        assert_eq!(&den * &one, den);
    }

    #[test]
    fn delta_identity() {
        for k in 2..=6 {
            let lhs = &RationalPowerSeries::from_integers(&[1, -1], 12) * &delta(k, 12);
            let mut rhs = vec![0i64; k + 2];
            rhs[0] = 1;
            rhs[1] = -2;
            rhs[k + 1] = 1;
            assert_eq!(lhs, RationalPowerSeries::from_integers(&rhs, 12));
        }
    }

    #[test]
    fn series_examples() {
        assert_eq!(ints(&series_a(3, 5)), vec![0, 1, 2, 3, 6, 11]);
        assert_eq!(ints(&series_a(2, 3)), vec![0, 1, 1, 2]);
        let b = series_b(3, 5);
        assert_eq!(b.coeff(1), q(1, 1));
        assert_eq!(b.coeff(3), q(5, 1));
        assert_eq!(series_c(3, 5).coeff(3), q(9, 1));
    }

    #[test]
    fn moment_examples() {
        assert_eq!(exact_mean(3, 3).unwrap(), q(5, 3));
        assert_eq!(exact_variance(3, 3).unwrap(), q(2, 9));
        assert_eq!(exact_mean(3, 1).unwrap(), q(1, 1));
        assert_eq!(exact_variance(3, 1).unwrap(), q(0, 1));
        assert!(exact_mean(3, 0).is_err());
    }

    #[test]
    fn bivariate_examples() {
        assert!(f_fix_bivariate_check(3, 10, 10));
        assert!(f_fix_bivariate_check(2, 8, 8));
        assert_eq!(f_fix_coefficients(3, 4)[3][3], BigInt::zero());
    }
}
