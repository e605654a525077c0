use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::representation::IndexSet;
use crate::sequences::{KBonacciContext, VecZ};

/// Every satisfying index set with max index `<= max_index`, keyed by value.
///
/// Built by exhaustive enumeration with running sums, so any value reached
/// twice is recorded rather than overwritten.
#[derive(Debug)]
pub struct BruteForceTable {
    k: usize,
    max_index: usize,
    entries: HashMap<Vec<i128>, (IndexSet, usize)>,
    enumerated: usize,
}

impl BruteForceTable {
    pub fn build(ctx: &KBonacciContext, max_index: usize) -> Result<Self> {
        ctx.require_vectors()?;
        let view = ctx.vectors(max_index);
        let basis: Vec<Vec<i128>> = (0..=max_index)
            .map(|d| view.get(d).to_i128().ok_or(Error::VectorTooLarge))
            .collect::<Result<_>>()?;
        drop(view);

        let mut table = BruteForceTable { k: ctx.k(), max_index, entries: HashMap::new(), enumerated: 0 };
        let mut chosen = Vec::new();
        let mut sum = vec![0i128; ctx.dim()];
        table.walk(&basis, max_index, 0, &mut chosen, &mut sum);
        Ok(table)
    }

    // Decide index `i` (descending), with `run` ones directly above it.
    fn walk(&mut self, basis: &[Vec<i128>], i: usize, run: usize, chosen: &mut Vec<usize>, sum: &mut Vec<i128>) {
        if i == 0 {
            self.enumerated += 1;
            let entry = self.entries.entry(sum.clone()).or_insert_with(|| {
                let mut s = chosen.clone();
                s.reverse();
                (IndexSet::from_sorted_unchecked(s), 0)
            });
            entry.1 += 1;
            return;
        }
        self.walk(basis, i - 1, 0, chosen, sum);
        if run + 1 < self.k {
            chosen.push(i);
            sum.iter_mut().zip(&basis[i]).for_each(|(a, b)| *a += b);
            self.walk(basis, i - 1, run + 1, chosen, sum);
            sum.iter_mut().zip(&basis[i]).for_each(|(a, b)| *a -= b);
            chosen.pop();
        }
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// Number of index sets enumerated (equals `x_{max_index+2}`).
    pub fn enumerated(&self) -> usize {
        self.enumerated
    }

    /// Number of distinct vectors reached.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// Number of vectors reached by more than one index set.
    pub fn collisions(&self) -> usize {
        self.entries.values().filter(|(_, n)| *n > 1).count()
    }

    pub fn lookup(&self, v: &VecZ) -> Result<IndexSet> {
        let key = v.to_i128().ok_or(Error::NotFound { max_index: self.max_index })?;
        match self.entries.get(&key) {
            None => Err(Error::NotFound { max_index: self.max_index }),
            Some((s, 1)) => Ok(s.clone()),
            Some((_, n)) => Err(Error::MultipleFound { max_index: self.max_index, count: *n }),
        }
    }
}

/// The unique satisfying set with max index `<= max_index` evaluating to `v`.
pub fn brute_force_sr(ctx: &KBonacciContext, v: &VecZ, max_index: usize) -> Result<IndexSet> {
    ctx.check_vector(v)?;
    BruteForceTable::build(ctx, max_index)?.lookup(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = KBonacciContext::new(3).unwrap();
        let s = |v: &[i64], m| brute_force_sr(&c, &VecZ::from_i64(v), m).unwrap();
        assert_eq!(s(&[2, -2], 10), IndexSet::new(vec![2, 3, 6, 7]).unwrap());
        assert_eq!(s(&[0, 0], 5), IndexSet::empty());
        assert_eq!(s(&[-1, 2], 8), IndexSet::new(vec![5]).unwrap());
        assert!(matches!(
            brute_force_sr(&c, &VecZ::from_i64(&[2, -2]), 6),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn table_is_injective() {
        for (k, m) in [(3, 14), (4, 12), (5, 12)] {
            let c = KBonacciContext::new(k).unwrap();
            let t = BruteForceTable::build(&c, m).unwrap();
            assert_eq!(t.collisions(), 0);
            assert_eq!(t.distinct(), t.enumerated());
            assert_eq!(t.enumerated() as u64, u64::try_from(c.x(m as i64 + 2).unwrap()).unwrap());
        }
    }
}
