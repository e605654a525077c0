//! The k-bonacci number greedy algorithm and a brute-force minimality oracle.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::representation::ScalarIndexSet;
use crate::sequences::KBonacciContext;

/// k-Zeckendorf representation of `m >= 0` as indices `>= 2`, ascending.
///
/// Each step takes the largest `x_l <= R` with `l >= 2`; `x_1` is never used.
pub fn greedy_decompose(ctx: &KBonacciContext, m: &BigInt) -> Result<ScalarIndexSet> {
    if m.is_negative() {
        return Err(Error::IndexOutOfDomain { index: -1, min: 0 });
    }
    if m.is_zero() {
        return Ok(ScalarIndexSet::default());
    }
    let view = ctx.scalars_exceeding(m);
    let mut rest = m.clone();
    let mut hi = view.max_index();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let l = view
            .max_index_le(&rest, 2, hi, ctx)
            .expect("x_2 = 1 bounds every positive remainder");
        rest -= view.get(l);
        ctx.charge(1);
        out.push(l as usize);
        hi = l - 1;
    }
    out.reverse();
    Ok(ScalarIndexSet(out))
}

/// Fewest terms in any `m = sum c_i x_i` with `c_i >= 0`, indices in
/// `[2, max_index]`, at most `budget` terms.
///
/// Exhaustive over multisets in nonincreasing index order, by increasing size.
/// `BudgetExhausted` means no representation exists within the bounds, which
/// makes the search inconclusive rather than a counterexample.
pub fn scalar_min_summands_bruteforce(
    ctx: &KBonacciContext,
    m: &BigInt,
    max_index: usize,
    budget: usize,
) -> Result<usize> {
    if m.is_negative() {
        return Err(Error::IndexOutOfDomain { index: -1, min: 0 });
    }
    if m.is_zero() {
        return Ok(0);
    }
    if max_index < 2 {
        return Err(Error::BudgetExhausted { budget });
    }
    let view = ctx.scalars(max_index);
    let coins: Vec<BigInt> = (2..=max_index as i64).rev().map(|i| view.get(i).clone()).collect();
    drop(view);

    fn exists(coins: &[BigInt], rest: &BigInt, left: usize) -> bool {
        if left == 0 {
            return rest.is_zero();
        }
        for (pos, coin) in coins.iter().enumerate() {
            if coin > rest {
                continue;
            }
            if coin * left < *rest {
                break;
            }
            if exists(&coins[pos..], &(rest - coin), left - 1) {
                return true;
            }
        }
        false
    }

    (1..=budget)
        .find(|&size| exists(&coins, m, size))
        .ok_or(Error::BudgetExhausted { budget })
}
