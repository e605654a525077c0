use crate::error::{Error, Result};
use crate::representation::{CoefficientVector, IndexSet};
use crate::sequences::{KBonacciContext, VecZ};

#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    /// Maximum number of rewrites before giving up.
    pub budget: usize,
    /// Re-evaluate the vector after every rewrite and panic on a change.
    pub check_each_step: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { budget: 1_000_000, check_each_step: false }
    }
}

/// Lowest `i` with `c_i, ..., c_{i+k-1}` all nonzero.
fn lowest_full_run(c: &CoefficientVector, k: usize) -> Option<usize> {
    let mut start = 0;
    let mut len = 0;
    let mut prev = 0;
    for (i, _) in c.iter() {
        if len > 0 && prev + 1 == i {
            len += 1;
        } else {
            start = i;
            len = 1;
        }
        if len == k {
            return Some(start);
        }
        prev = i;
    }
    None
}

/// Rewrites nonnegative coefficients into the SR of the same vector.
///
/// Rules, tried in this order:
/// * a full run `c_i..c_{i+k-1} >= 1` (lowest first) loses one from each entry
///   and adds one at `i - 1`; at `i = 1` it simply vanishes since
///   `X_{-1} + ... + X_{-k} = 0`;
/// * the lowest `c_i >= 2` loses one and adds one at each of `i+1, ..., i+k`.
pub fn normalize(ctx: &KBonacciContext, c: CoefficientVector) -> Result<IndexSet> {
    normalize_with(ctx, c, NormalizeOptions::default())
}

pub fn normalize_with(ctx: &KBonacciContext, mut c: CoefficientVector, opts: NormalizeOptions) -> Result<IndexSet> {
    let k = ctx.k();
    let expected = opts.check_each_step.then(|| c.evaluate(ctx));
    for _ in 0..opts.budget {
        ctx.charge(c.iter().count() as u64);
        let doubled = c.iter().find(|&(_, n)| n >= 2).map(|(i, _)| i);
        if let Some(i) = lowest_full_run(&c, k) {
            for j in i..i + k {
                c.remove(j, 1);
            }
            if i >= 2 {
                c.add(i - 1, 1);
            }
        } else if let Some(i) = doubled {
            c.remove(i, 1);
            for j in i + 1..=i + k {
                c.add(j, 1);
            }
        } else {
            return Ok(c.to_index_set().expect("all coefficients are 0 or 1"));
        }
        ctx.charge(k as u64 + 1);
        if let Some(want) = &expected {
            assert_eq!(&c.evaluate(ctx), want, "rewrite changed the represented vector");
        }
    }
    Err(Error::NormalizationDiverged { budget: opts.budget })
}

/// SR of `v` by walking from `0` to `v` with basis steps.
///
/// If `v` has a positive coordinate (lowest such `i` first), `SR(v)` is
/// `SR(v - e_i)` plus `X_{-i}`. Otherwise `SR(v)` is `SR(v - X_{-k})` plus
/// `X_{-k}`, where `v - X_{-k}` raises every coordinate by one. Each added
/// term is followed by normalization.
pub fn reference_recursive_sr(ctx: &KBonacciContext, v: &VecZ) -> Result<IndexSet> {
    ctx.check_vector(v)?;
    let k = ctx.k();
    let mut cur: Vec<num_bigint::BigInt> = v.entries().to_vec();
    let mut path = Vec::new();
    loop {
        ctx.charge(cur.len() as u64);
        if let Some(i) = cur.iter().position(|e| e.sign() == num_bigint::Sign::Plus) {
            cur[i] -= 1;
            path.push(i + 1);
        } else if cur.iter().any(|e| e.sign() == num_bigint::Sign::Minus) {
            for e in cur.iter_mut() {
                *e += 1;
            }
            path.push(k);
        } else {
            break;
        }
        ctx.charge(cur.len() as u64);
    }

    let mut sr = IndexSet::empty();
    for &i in path.iter().rev() {
        let mut c = CoefficientVector::from_index_set(&sr);
        c.add(i, 1);
        sr = normalize(ctx, c)?;
    }
    Ok(sr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::evaluate_vector;

    fn ctx(k: usize) -> KBonacciContext {
        KBonacciContext::new(k).unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let c = ctx(3);
        let checked = NormalizeOptions { check_each_step: true, ..Default::default() };
        let run = |pairs: &[(usize, u64)]| normalize_with(&c, CoefficientVector::from_pairs(pairs), checked).unwrap();
        assert_eq!(run(&[(1, 1), (2, 1), (3, 1)]), IndexSet::empty());
        assert_eq!(run(&[(4, 1), (5, 1), (6, 1)]), set(&[3]));
        assert_eq!(run(&[(1, 2)]), set(&[4]));
        assert_eq!(run(&[]), IndexSet::empty());
    }

    #[test]
    fn normalize_budget() {
        let c = ctx(3);
        let opts = NormalizeOptions { budget: 1, check_each_step: false };
        let r = normalize_with(&c, CoefficientVector::from_pairs(&[(1, 5), (2, 3)]), opts);
        assert_eq!(r, Err(Error::NormalizationDiverged { budget: 1 }));
    }

    #[test]
    fn normalize_random_coefficients() {
        let checked = NormalizeOptions { check_each_step: true, ..Default::default() };
        for k in 3..=5 {
            let c = ctx(k);
            for seed in 0u64..300 {
                let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
                let mut pairs = Vec::new();
                for i in 1..=10 {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    pairs.push((i, s % 4));
                }
                let cv = CoefficientVector::from_pairs(&pairs);
                let want = cv.evaluate(&c);
                let sr = normalize_with(&c, cv, checked).unwrap();
                assert!(sr.is_satisfying(k));
                assert_eq!(evaluate_vector(&c, &sr).unwrap(), want);
            }
        }
    }

    #[test]
    fn reference_examples() {
        let c = ctx(3);
        assert_eq!(reference_recursive_sr(&c, &VecZ::from_i64(&[7, 0])).unwrap(), set(&[1, 3, 4, 7]));
        assert_eq!(reference_recursive_sr(&c, &VecZ::from_i64(&[0, 0])).unwrap(), IndexSet::empty());
        assert_eq!(reference_recursive_sr(&c, &VecZ::from_i64(&[0, -1])).unwrap(), set(&[1, 3]));
        assert_eq!(reference_recursive_sr(&c, &VecZ::from_i64(&[2, -2])).unwrap(), set(&[2, 3, 6, 7]));
    }
}
