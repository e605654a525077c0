//! Bounded search for representations with fewer summands than the SR.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::representation::evaluate_vector;
use crate::sequences::{KBonacciContext, VecZ};
use crate::statistics::enumerate_layer;

/// Outcome of a bounded search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinSummands {
    /// Fewest summands among multisets within the bounds.
    Found(usize),
    /// No representation with at most `budget` summands and indices `<= max_index`.
    Inconclusive,
}

/// Sums of all multisets of depths in `[1, max_index]`, by multiset size,
/// for sizes up to `ceil(budget / 2)`.
#[derive(Debug)]
pub struct MinimalitySearch {
    max_index: usize,
    budget: usize,
    halves: Vec<HashSet<Vec<i128>>>,
}

impl MinimalitySearch {
    pub fn new(ctx: &KBonacciContext, max_index: usize, budget: usize) -> Result<Self> {
        ctx.require_vectors()?;
        let view = ctx.vectors(max_index);
        let basis: Vec<Vec<i128>> = (1..=max_index)
            .map(|d| view.get(d).to_i128().ok_or(Error::VectorTooLarge))
            .collect::<Result<_>>()?;
        drop(view);
        let half = budget.div_ceil(2);
        // layer[h] holds (sum, smallest usable basis position) for multisets of size h
        let mut frontier: Vec<(Vec<i128>, usize)> = vec![(vec![0; ctx.dim()], 0)];
        let mut halves = vec![frontier.iter().map(|(s, _)| s.clone()).collect::<HashSet<_>>()];
        for _ in 0..half {
            let mut next = Vec::new();
            for (sum, from) in &frontier {
                for (pos, b) in basis.iter().enumerate().skip(*from) {
                    let s: Vec<i128> = sum.iter().zip(b).map(|(a, b)| a + b).collect();
                    next.push((s, pos));
                }
            }
            ctx.charge((next.len() * ctx.dim()) as u64);
            halves.push(next.iter().map(|(s, _)| s.clone()).collect());
            frontier = next;
        }
        Ok(MinimalitySearch { max_index, budget, halves })
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Fewest summands for `v`, trying at most `limit.min(budget)` of them.
    pub fn min_summands_upto(&self, v: &VecZ, limit: usize) -> MinSummands {
        let Some(target) = v.to_i128() else { return MinSummands::Inconclusive };
        for size in 0..=limit.min(self.budget) {
            let (a, b) = (size.div_ceil(2), size / 2);
            let hit = self.halves[a].iter().any(|x| {
                let rest: Vec<i128> = target.iter().zip(x).map(|(t, x)| t - x).collect();
                self.halves[b].contains(&rest)
            });
            if hit {
                return MinSummands::Found(size);
            }
        }
        MinSummands::Inconclusive
    }

    pub fn min_summands(&self, v: &VecZ) -> MinSummands {
        self.min_summands_upto(v, self.budget)
    }
}

/// Fewest summands in `v = sum c_i X_{-i}` with `c_i >= 0`, indices in
/// `[1, max_index]` and at most `budget` summands.
pub fn vector_min_summands_bounded(
    ctx: &KBonacciContext,
    v: &VecZ,
    max_index: usize,
    budget: usize,
) -> Result<MinSummands> {
    ctx.check_vector(v)?;
    Ok(MinimalitySearch::new(ctx, max_index, budget)?.min_summands(v))
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchBound {
    pub max_index: usize,
    /// Largest multiset size searched for any vector.
    pub max_summands: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub v: VecZ,
    pub sr: Vec<usize>,
    pub smaller: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub layer: usize,
    pub bound: SearchBound,
    pub vectors_checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

/// For every `v` in `D_n`, searches for a representation with fewer than
/// `|SR(v)|` summands and indices `<= max_index`.
pub fn verify_layer_minimality(ctx: &KBonacciContext, n: usize, max_index: usize) -> Result<MinimalityReport> {
    ctx.require_vectors()?;
    let mut srs = Vec::new();
    for layer in 1..=n {
        srs.extend(enumerate_layer(ctx, layer)?);
    }
    let max_summands = srs.iter().map(|s| s.len()).max().unwrap_or(1).saturating_sub(1);
    let search = MinimalitySearch::new(ctx, max_index, max_summands)?;
    let mut counterexamples = Vec::new();
    for s in &srs {
        let v = evaluate_vector(ctx, s)?;
        if let MinSummands::Found(m) = search.min_summands_upto(&v, s.len() - 1) {
            counterexamples.push(Counterexample { v, sr: s.indices().to_vec(), smaller: m });
        }
    }
    Ok(MinimalityReport {
        layer: n,
        bound: SearchBound { max_index, max_summands },
        // the zero vector is minimal trivially
        vectors_checked: srs.len() + 1,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::project_sn;
    use crate::scalar_greedy::greedy_decompose;

    fn ctx(k: usize) -> KBonacciContext {
        KBonacciContext::new(k).unwrap()
    }

    #[test]
    fn examples() {
        let c = ctx(3);
        let run = |v: &[i64], m, b| vector_min_summands_bounded(&c, &VecZ::from_i64(v), m, b).unwrap();
        assert_eq!(run(&[2, 0], 10, 3), MinSummands::Found(1));
        assert_eq!(run(&[0, 0], 10, 3), MinSummands::Found(0));
        assert_eq!(run(&[7, 0], 12, 4), MinSummands::Found(4));
        assert_eq!(run(&[7, 0], 12, 3), MinSummands::Inconclusive);
    }

    #[test]
    fn small_layers_have_no_counterexamples() {
        let r = verify_layer_minimality(&ctx(3), 1, 5).unwrap();
        assert!(r.counterexamples.is_empty());
        let r = verify_layer_minimality(&ctx(3), 6, 10).unwrap();
        assert!(r.counterexamples.is_empty());
        assert_eq!(r.vectors_checked, 44);
    }

    #[test]
    fn summand_count_matches_scalar_side() {
        for k in 3..=4 {
            let c = ctx(k);
            for n in 1..=9 {
                for s in enumerate_layer(&c, n).unwrap() {
                    let v = evaluate_vector(&c, &s).unwrap();
                    let r = project_sn(&c, &v, n as i64 + 2).unwrap();
                    assert_eq!(greedy_decompose(&c, &r).unwrap().len(), s.len());
                }
            }
        }
    }
}
