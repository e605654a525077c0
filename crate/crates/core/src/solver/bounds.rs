use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{BoundStrategy, Decomposition, JBound};
use crate::error::{Error, Result};
use crate::representation::CoefficientVector;
use crate::sequences::{KBonacciContext, VecZ};

fn count(n: &BigInt) -> Result<u64> {
    n.to_u64().ok_or(Error::VectorTooLarge)
}

fn nonzero(ctx: &KBonacciContext, v: &VecZ) -> Result<()> {
    ctx.check_vector(v)?;
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// `v` as a combination of `e_1, ..., e_{k-1}` and `X_{-k} = (-1, ..., -1)`.
///
/// With a negative entry, the most negative entry `v_m` contributes `|v_m|`
/// copies of index `k` and each coordinate `i` contributes `v_i - v_m` copies
/// of index `i`. Otherwise `v_i` copies of index `i`.
pub fn small_steps_decomposition(ctx: &KBonacciContext, v: &VecZ) -> Result<Decomposition> {
    nonzero(ctx, v)?;
    let mut terms = CoefficientVector::new();
    residual_small_steps(ctx, v, &mut terms)?;
    Ok(Decomposition { terms, provenance: BoundStrategy::SmallSteps })
}

fn residual_small_steps(ctx: &KBonacciContext, v: &VecZ, terms: &mut CoefficientVector) -> Result<()> {
    let k = ctx.k();
    let most_negative = v.entries().iter().min().expect("k >= 3").clone();
    ctx.charge(v.dim() as u64);
    if most_negative.is_negative() {
        terms.add(k, count(&-&most_negative)?);
        for (i, e) in v.entries().iter().enumerate() {
            terms.add(i + 1, count(&(e - &most_negative))?);
        }
    } else {
        for (i, e) in v.entries().iter().enumerate() {
            terms.add(i + 1, count(e)?);
        }
    }
    ctx.charge(v.dim() as u64);
    Ok(())
}

/// The small-steps bound `j_ssb`.
///
/// `k * (|v_m| + sum (v_i - v_m))` when some entry is negative, otherwise
/// `k * sum v_i - 1`.
pub fn small_steps_bound(ctx: &KBonacciContext, v: &VecZ) -> Result<JBound> {
    nonzero(ctx, v)?;
    let k = BigInt::from(ctx.k());
    let most_negative = v.entries().iter().min().expect("k >= 3");
    let total: BigInt = v.entries().iter().sum();
    let value = if most_negative.is_negative() {
        let dim = BigInt::from(v.dim());
        &k * (-most_negative + total - dim * most_negative)
    } else {
        &k * total - 1
    };
    ctx.charge(2 * v.dim() as u64 + 2);
    Ok(JBound {
        value: value.to_usize().ok_or(Error::VectorTooLarge)?,
        strategy: BoundStrategy::SmallSteps,
    })
}

/// Full record of a large-steps run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargeStepsTrace {
    /// Depths `n_i` chosen by nearest-vector descent, in order.
    pub steps: Vec<usize>,
    /// `|v_i|_2^2` before each step, plus the value at the stopping point.
    pub norms_squared: Vec<BigInt>,
    /// The vector left when descent stopped; finished by small steps.
    pub residual: VecZ,
    pub decomposition: Decomposition,
    pub bound: JBound,
}

/// Consecutive out-of-range depths seen before the nearest-vector scan stops.
fn scan_window(k: usize) -> usize {
    2 * k
}

/// Nearest `X_{-n}` to `v` over `n >= 1`, ties to the smallest depth.
///
/// Only depths with `|X_{-n}|^2 <= 4 |v|^2` can move closer to `v` than the
/// origin, so the scan ends once `2k` consecutive depths exceed that radius.
fn nearest_vector(ctx: &KBonacciContext, v: &VecZ, v_norm2: &BigInt) -> Option<(usize, BigInt)> {
    let radius2 = v_norm2 * 4u32;
    let mut best: Option<(usize, BigInt)> = None;
    let mut outside = 0;
    let mut depth = 1;
    let mut upto = 32;
    loop {
        let view = ctx.vectors(upto);
        while depth <= upto {
            let x = view.get(depth);
            let norm2 = x.l2_squared();
            ctx.charge(2 * x.dim() as u64 + 1);
            if norm2 > radius2 {
                outside += 1;
                if outside >= scan_window(ctx.k()) && depth >= ctx.k() {
                    return best;
                }
            } else {
                outside = 0;
                let d2 = v.dist_squared(x);
                ctx.charge(3 * x.dim() as u64 + 1);
                if best.as_ref().is_none_or(|(_, b)| d2 < *b) {
                    best = Some((depth, d2));
                }
            }
            depth += 1;
        }
        drop(view);
        upto *= 2;
    }
}

/// Nearest-vector descent followed by small steps on the residual.
pub fn large_steps_trace(ctx: &KBonacciContext, v: &VecZ) -> Result<LargeStepsTrace> {
    nonzero(ctx, v)?;
    let mut cur = v.clone();
    let mut cur_norm2 = cur.l2_squared();
    let mut steps = Vec::new();
    let mut norms_squared = vec![cur_norm2.clone()];
    let mut terms = CoefficientVector::new();
    while !cur_norm2.is_zero() {
        let Some((depth, next_norm2)) = nearest_vector(ctx, &cur, &cur_norm2) else { break };
        ctx.charge(1);
        if next_norm2 >= cur_norm2 {
            break;
        }
        cur.sub_assign(ctx.vectors(depth).get(depth));
        ctx.charge(cur.dim() as u64);
        terms.add(depth, 1);
        steps.push(depth);
        cur_norm2 = next_norm2;
        norms_squared.push(cur_norm2.clone());
    }
    if !cur.is_zero() {
        residual_small_steps(ctx, &cur, &mut terms)?;
    }
    let decomposition = Decomposition { terms, provenance: BoundStrategy::LargeSteps };
    let bound = JBound { value: decomposition.term_bound(ctx.k()), strategy: BoundStrategy::LargeSteps };
    Ok(LargeStepsTrace { steps, norms_squared, residual: cur, decomposition, bound })
}

/// The large-steps decomposition and its bound `j_lsb = k(N-1) + max n_i`.
pub fn large_steps_decomposition(ctx: &KBonacciContext, v: &VecZ) -> Result<(Decomposition, JBound)> {
    large_steps_trace(ctx, v).map(|t| (t.decomposition, t.bound))
}
