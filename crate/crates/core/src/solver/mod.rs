//! Finding the satisfying representation (SR) of a vector.
//!
//! Two fast strategies bound the maximal index `J(v)` from an arbitrary
//! k-bonacci decomposition of `v` and then run the vector greedy algorithm
//! (project to an integer, decompose it greedily, map the indices back).
//! The reference strategy walks from `0` to `v` one basis step at a time and
//! renormalizes after each step. A brute-force table serves as the oracle.

mod bounds;
mod brute;
mod reference;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bounds::{
    large_steps_decomposition, large_steps_trace, small_steps_bound, small_steps_decomposition,
    LargeStepsTrace,
};
pub use brute::{brute_force_sr, BruteForceTable};
pub use reference::{normalize, normalize_with, reference_recursive_sr, NormalizeOptions};

use crate::error::{Error, Result};
use crate::representation::{evaluate_vector, project_sn, CoefficientVector, IndexSet};
use crate::scalar_greedy::greedy_decompose;
use crate::sequences::{KBonacciContext, VecZ};

/// How a `j` bound was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStrategy {
    SmallSteps,
    LargeSteps,
}

impl fmt::Display for BoundStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundStrategy::SmallSteps => "small",
            BoundStrategy::LargeSteps => "large",
        })
    }
}

impl FromStr for BoundStrategy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "small" | "small_steps" => Ok(BoundStrategy::SmallSteps),
            "large" | "large_steps" => Ok(BoundStrategy::LargeSteps),
            other => Err(format!("unknown bound strategy `{other}` (expected small|large)")),
        }
    }
}

/// Any of the SR solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Small,
    Large,
    Reference,
    Brute,
}

impl Solver {
    pub const ALL: [Solver; 4] = [Solver::Small, Solver::Large, Solver::Reference, Solver::Brute];
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Small => "small",
            Solver::Large => "large",
            Solver::Reference => "reference",
            Solver::Brute => "brute",
        })
    }
}

impl FromStr for Solver {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "small" => Ok(Solver::Small),
            "large" => Ok(Solver::Large),
            "reference" => Ok(Solver::Reference),
            "brute" => Ok(Solver::Brute),
            other => Err(format!("unknown solver `{other}` (expected small|large|reference|brute)")),
        }
    }
}

/// A k-bonacci decomposition `v = sum X_{-n_i}` with repetition allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: CoefficientVector,
    pub provenance: BoundStrategy,
}

impl Decomposition {
    /// Number of terms `N`, counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.terms.total()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_index(&self) -> usize {
        self.terms.max_index()
    }

    pub fn evaluate(&self, ctx: &KBonacciContext) -> VecZ {
        self.terms.evaluate(ctx)
    }

    /// `k(N-1) + max n_i`, an upper bound on `J(v)`; `0` when empty.
    pub fn term_bound(&self, k: usize) -> usize {
        match self.len() {
            0 => 0,
            n => k * (n as usize - 1) + self.max_index(),
        }
    }
}

/// An upper bound `j >= J(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JBound {
    pub value: usize,
    pub strategy: BoundStrategy,
}

/// Vector greedy algorithm with a given `j`.
///
/// Projects with `S_{j+1}`, decomposes the residue greedily into scalar
/// indices `l >= 2` and maps each to the vector index `j + 1 - l`. Since the
/// scalar greedy never emits `l = 1`, the output can only be correct when
/// `j > J(v)`. The result is always checked by re-evaluation.
pub fn vector_greedy(ctx: &KBonacciContext, v: &VecZ, j: usize) -> Result<IndexSet> {
    ctx.check_vector(v)?;
    if j < 1 {
        return Err(Error::JBoundTooSmall { j });
    }
    let residue = project_sn(ctx, v, j as i64 + 1)?;
    let scalar = greedy_decompose(ctx, &residue)?;
    let mut indices: Vec<usize> = scalar.indices().iter().map(|&l| j + 1 - l).collect();
    indices.reverse();
    let s = IndexSet::new(indices).expect("distinct scalar indices map to distinct vector indices");
    if !s.is_satisfying(ctx.k()) || evaluate_vector(ctx, &s)? != *v {
        return Err(Error::JBoundTooSmall { j });
    }
    Ok(s)
}

/// The `j` bound from either strategy. Undefined for the zero vector.
pub fn j_bound(ctx: &KBonacciContext, v: &VecZ, strategy: BoundStrategy) -> Result<JBound> {
    match strategy {
        BoundStrategy::SmallSteps => small_steps_bound(ctx, v),
        BoundStrategy::LargeSteps => large_steps_decomposition(ctx, v).map(|(_, b)| b),
    }
}

/// The SR of `v` by a bound strategy followed by the vector greedy algorithm.
pub fn find_sr(ctx: &KBonacciContext, v: &VecZ, strategy: BoundStrategy) -> Result<IndexSet> {
    ctx.check_vector(v)?;
    if v.is_zero() {
        return Ok(IndexSet::empty());
    }
    let bound = j_bound(ctx, v, strategy)?;
    // `bound.value >= J(v)`, and the greedy step needs one index of headroom.
    vector_greedy(ctx, v, bound.value + 1)
}

/// The SR of `v` by the chosen solver. `brute_max_index` bounds the oracle search.
pub fn solve(ctx: &KBonacciContext, v: &VecZ, solver: Solver, brute_max_index: usize) -> Result<IndexSet> {
    match solver {
        Solver::Small => find_sr(ctx, v, BoundStrategy::SmallSteps),
        Solver::Large => find_sr(ctx, v, BoundStrategy::LargeSteps),
        Solver::Reference => reference_recursive_sr(ctx, v),
        Solver::Brute => brute_force_sr(ctx, v, brute_max_index),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(k: usize) -> KBonacciContext {
        KBonacciContext::new(k).unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn vector_greedy_examples() {
        let c = ctx(3);
        assert_eq!(vector_greedy(&c, &VecZ::from_i64(&[2, -2]), 18).unwrap(), set(&[2, 3, 6, 7]));
        assert_eq!(vector_greedy(&c, &VecZ::from_i64(&[3, 0]), 8).unwrap(), set(&[1, 4]));
        assert_eq!(vector_greedy(&c, &VecZ::from_i64(&[0, 0]), 5).unwrap(), IndexSet::empty());
    }

    #[test]
    fn vector_greedy_rejects_small_j() {
        let c = ctx(3);
        let v = VecZ::from_i64(&[7, 0]); // J = 7
        for j in 1..=7 {
            assert!(matches!(vector_greedy(&c, &v, j), Err(Error::JBoundTooSmall { .. })), "j={j}");
        }
        for j in 8..=30 {
            assert_eq!(vector_greedy(&c, &v, j).unwrap(), set(&[1, 3, 4, 7]));
        }
    }

    #[test]
    fn find_sr_examples() {
        let c = ctx(3);
        for s in [BoundStrategy::SmallSteps, BoundStrategy::LargeSteps] {
            assert_eq!(find_sr(&c, &VecZ::from_i64(&[7, 0]), s).unwrap(), set(&[1, 3, 4, 7]));
            assert_eq!(find_sr(&c, &VecZ::from_i64(&[0, 0]), s).unwrap(), IndexSet::empty());
            // Single k-bonacci vectors, where the bound can equal J exactly.
            for d in 1..=12 {
                let x = c.vector(d).unwrap();
                assert_eq!(find_sr(&c, &x, s).unwrap(), set(&[d as usize]), "depth {d}");
            }
        }
        let c4 = ctx(4);
        let v = VecZ::from_i64(&[1, 1, 1]);
        let oracle = brute_force_sr(&c4, &v, 16).unwrap();
        assert_eq!(find_sr(&c4, &v, BoundStrategy::SmallSteps).unwrap(), oracle);
        assert_eq!(find_sr(&c4, &v, BoundStrategy::LargeSteps).unwrap(), oracle);
    }

    #[test]
    fn dimension_and_order_checks() {
        let c = ctx(3);
        assert!(matches!(
            find_sr(&c, &VecZ::from_i64(&[1]), BoundStrategy::SmallSteps),
            Err(Error::DimensionMismatch { .. })
        ));
        let c2 = ctx(2);
        assert!(matches!(
            find_sr(&c2, &VecZ::from_i64(&[1]), BoundStrategy::SmallSteps),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn solver_names_round_trip() {
        for s in Solver::ALL {
            assert_eq!(s.to_string().parse::<Solver>().unwrap(), s);
        }
        assert!("fast".parse::<Solver>().is_err());
    }
}
