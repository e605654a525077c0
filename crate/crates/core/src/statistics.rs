//! Summand-count and gap statistics over a layer `D_n \ D_{n-1}`.
//!
//! An element of the layer is stored as a bitmask with bit `i-1` set for each
//! index `i`; bit `n-1` is always set. Read from the top bit down this is the
//! word in `W_{n,k}`, so increasing masks are lexicographic word order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::representation::{evaluate_vector, IndexSet};
use crate::sequences::{KBonacciContext, VecZ};
use crate::spectral::SpectralData;

/// Largest layer index the bitmask enumeration supports.
pub const MAX_LAYER: usize = 62;

/// Lexicographic iterator over the masks of one layer.
#[derive(Clone, Debug)]
pub struct LayerMasks {
    k: usize,
    next: u64,
    end: u64,
}

impl LayerMasks {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::UnsupportedOrder { k, min: 2 });
        }
        if !(1..=MAX_LAYER).contains(&n) {
            return Err(Error::IndexOutOfDomain { index: n as i64, min: 1 });
        }
        let mut it = LayerMasks { k, next: 1 << (n - 1), end: 1 << n };
        it.next = it.skip_invalid(it.next);
        Ok(it)
    }

    /// Smallest mask `>= m` with no `k` consecutive set bits.
    fn skip_invalid(&self, mut m: u64) -> u64 {
        loop {
            let runs = (1..self.k).fold(m, |acc, s| acc & (m >> s));
            if runs == 0 {
                return m;
            }
            // Lowest bit of the highest run; everything with this prefix is invalid.
            let p = 63 - runs.leading_zeros();
            m = ((m >> p) + 1) << p;
        }
    }
}

impl Iterator for LayerMasks {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.next >= self.end {
            return None;
        }
        let m = self.next;
        self.next = self.skip_invalid(m + 1);
        Some(m)
    }
}

pub fn mask_to_index_set(mask: u64) -> IndexSet {
    let v: Vec<usize> = (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
    IndexSet::from_sorted_unchecked(v)
}

/// Every satisfying index set with max index exactly `n`, in lexicographic word order.
pub fn enumerate_layer(ctx: &KBonacciContext, n: usize) -> Result<impl Iterator<Item = IndexSet>> {
    Ok(LayerMasks::new(ctx.k(), n)?.map(mask_to_index_set))
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Distribution of the summand count `K_n` on one layer.
#[derive(Clone, Debug, Serialize)]
pub struct LayerStats {
    pub n: usize,
    pub k: usize,
    pub count: u64,
    pub kappa_histogram: BTreeMap<usize, u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub mean: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub variance: BigRational,
    /// Standardized third central moment; `None` when the variance is zero.
    pub skewness: Option<f64>,
    /// Standardized fourth central moment minus three; `None` when the variance is zero.
    pub excess_kurtosis: Option<f64>,
}

impl LayerStats {
    pub fn from_histogram(k: usize, n: usize, hist: BTreeMap<usize, u64>) -> Self {
        let count: u64 = hist.values().sum();
        let total = BigRational::from_integer(count.into());
        let q = |x: usize| BigRational::from_integer(BigInt::from(x));
        let mean = hist.iter().map(|(&m, &c)| q(m) * BigRational::from_integer(c.into())).sum::<BigRational>() / &total;
        let central = |p: u32| -> BigRational {
            hist.iter()
                .map(|(&m, &c)| {
                    let d = q(m) - &mean;
                    num_traits::pow(d, p as usize) * BigRational::from_integer(c.into())
                })
                .sum::<BigRational>()
                / &total
        };
        let variance = central(2);
        let (skewness, excess_kurtosis) = if variance.is_zero() {
            (None, None)
        } else {
            let v = variance.to_f64().unwrap_or(f64::NAN);
            let m3 = central(3).to_f64().unwrap_or(f64::NAN);
            let m4 = central(4).to_f64().unwrap_or(f64::NAN);
            (Some(m3 / v.powf(1.5)), Some(m4 / (v * v) - 3.0))
        };
        LayerStats { n, k, count, kappa_histogram: hist, mean, variance, skewness, excess_kurtosis }
    }

    pub fn mean_f64(&self) -> f64 {
        self.mean.to_f64().unwrap_or(f64::NAN)
    }

    pub fn variance_f64(&self) -> f64 {
        self.variance.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn layer_stats(ctx: &KBonacciContext, n: usize) -> Result<LayerStats> {
    let mut hist = BTreeMap::new();
    for m in LayerMasks::new(ctx.k(), n)? {
        *hist.entry(m.count_ones() as usize).or_insert(0u64) += 1;
    }
    Ok(LayerStats::from_histogram(ctx.k(), n, hist))
}

/// Gaps `r_j - r_{j-1}` between consecutive summand indices over one layer.
#[derive(Clone, Debug, Serialize)]
pub struct GapHistogram {
    pub n: usize,
    pub k: usize,
    /// `counts[l]` for `0 <= l <= n-1`.
    pub counts: Vec<u64>,
    pub n_gaps: u64,
}

impl GapHistogram {
    /// Empirical `P_n(l)`; zero when no gaps were seen.
    pub fn probability(&self, l: usize) -> f64 {
        if self.n_gaps == 0 {
            return 0.0;
        }
        self.counts.get(l).copied().unwrap_or(0) as f64 / self.n_gaps as f64
    }

    /// `P_n(l+1) / P_n(l)`, if both are nonzero.
    pub fn decay_ratio(&self, l: usize) -> Option<f64> {
        let (a, b) = (self.probability(l), self.probability(l + 1));
        (a > 0.0 && b > 0.0).then(|| b / a)
    }
}

pub fn gap_histogram(ctx: &KBonacciContext, n: usize) -> Result<GapHistogram> {
    let mut counts = vec![0u64; n];
    let mut n_gaps = 0;
    for mut m in LayerMasks::new(ctx.k(), n)? {
        let mut prev = m.trailing_zeros();
        m &= m - 1;
        while m != 0 {
            let b = m.trailing_zeros();
            counts[(b - prev) as usize] += 1;
            n_gaps += 1;
            prev = b;
            m &= m - 1;
        }
    }
    Ok(GapHistogram { n, k: ctx.k(), counts, n_gaps })
}

/// Exact number of gaps of each length `l >= 2` over `W_{n,k}`, without enumeration.
///
/// A gap of length `l >= 2` at word positions `p, p+l` has only zeros between,
/// so it splits the word into a prefix that starts and ends with `1` and a
/// suffix starting with `1`; the count is `sum_p L(p) W(n-p-l+1)`. Entries
/// `0` and `1` of the result are left at zero.
pub fn gap_counts_transfer(k: usize, n: usize) -> Result<Vec<BigInt>> {
    if k < 2 {
        return Err(Error::UnsupportedOrder { k, min: 2 });
    }
    // state[r] = words so far (first bit 1) whose trailing run of ones is r
    let mut state = vec![BigInt::zero(); k];
    state[1] = BigInt::from(1);
    let mut ends_one = vec![BigInt::zero(); n + 1];
    let mut all = vec![BigInt::zero(); n + 1];
    for len in 1..=n {
        if len > 1 {
            let mut next = vec![BigInt::zero(); k];
            next[0] = state.iter().sum();
            next[1..k].clone_from_slice(&state[..k - 1]);
            state = next;
        }
        ends_one[len] = state[1..].iter().sum();
        all[len] = &ends_one[len] + &state[0];
    }
    let mut counts = vec![BigInt::zero(); n.max(1)];
    for l in 2..n {
        counts[l] = (1..=n - l).map(|p| &ends_one[p] * &all[n - p - l + 1]).sum();
    }
    Ok(counts)
}

/// The limiting gap law `P(l)` built from `lambda_1`, `a_1` and `C_Lek`.
pub fn limiting_gap_law(spectral: &SpectralData, l: usize) -> f64 {
    let (lam, a1, c) = (spectral.lambda1, spectral.a1, spectral.c_lek);
    match l {
        0 => 0.0,
        1 => (lam * (1.0 - 2.0 * a1) + a1) / (lam * c),
        _ => (lam - 1.0).powi(2) * (a1 / c) * lam.powi(-(l as i32)),
    }
}

/// Total mass of the limiting gap law, summed in closed form.
#[derive(Clone, Debug, Serialize)]
pub struct GapLawReport {
    pub total_mass: f64,
    /// `|total_mass - 1| <= tolerance`.
    pub normalized: bool,
    pub tolerance: f64,
}

pub fn gap_law_normalization(spectral: &SpectralData, tolerance: f64) -> GapLawReport {
    let lam = spectral.lambda1;
    // sum_{l>=2} lam^{-l} = 1 / (lam (lam - 1))
    let tail = (lam - 1.0).powi(2) * (spectral.a1 / spectral.c_lek) / (lam * (lam - 1.0));
    let total_mass = limiting_gap_law(spectral, 1) + tail;
    GapLawReport { total_mass, normalized: (total_mass - 1.0).abs() <= tolerance, tolerance }
}

/// One row of the gap table.
#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub l: usize,
    pub count: u64,
    pub probability: f64,
    pub limit: f64,
}

pub fn gap_rows(h: &GapHistogram, spectral: &SpectralData) -> Vec<GapRow> {
    (0..h.counts.len())
        .map(|l| GapRow {
            n: h.n,
            l,
            count: h.counts[l],
            probability: h.probability(l),
            limit: limiting_gap_law(spectral, l),
        })
        .collect()
}

/// One row of the per-layer moment table.
#[derive(Clone, Debug, Serialize)]
pub struct LayerRow {
    pub n: usize,
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
}

impl From<&LayerStats> for LayerRow {
    fn from(s: &LayerStats) -> Self {
        LayerRow {
            n: s.n,
            count: s.count,
            mean: s.mean_f64(),
            variance: s.variance_f64(),
            skewness: s.skewness,
            excess_kurtosis: s.excess_kurtosis,
        }
    }
}

/// Standardized moments across layers and whether they move toward the normal law.
#[derive(Clone, Debug, Serialize)]
pub struct GaussianDiagnostics {
    pub rows: Vec<LayerRow>,
    /// `|skewness|` at the last layer is below that at the first.
    pub skew_trend: bool,
    /// `|excess kurtosis|` at the last layer is below that at the first.
    pub kurtosis_trend: bool,
    /// Variance strictly increases from layer to layer.
    pub variance_increasing: bool,
}

pub fn gaussian_diagnostics(stats: &[LayerStats]) -> GaussianDiagnostics {
    let rows: Vec<LayerRow> = stats.iter().map(LayerRow::from).collect();
    let abs_at = |f: fn(&LayerRow) -> Option<f64>, r: Option<&LayerRow>| r.and_then(f).map(f64::abs);
    let trend = |f: fn(&LayerRow) -> Option<f64>| match (abs_at(f, rows.first()), abs_at(f, rows.last())) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    };
    GaussianDiagnostics {
        skew_trend: trend(|r| r.skewness),
        kurtosis_trend: trend(|r| r.excess_kurtosis),
        variance_increasing: stats.windows(2).all(|w| w[1].variance > w[0].variance),
        rows,
    }
}

/// Every vector of `D_n` with its maximal index `J`, layer by layer.
pub fn dn_points(ctx: &KBonacciContext, n: usize) -> Result<Vec<(VecZ, usize)>> {
    let mut out = vec![(VecZ::zero(ctx.dim()), 0)];
    ctx.require_vectors()?;
    for layer in 1..=n {
        for s in enumerate_layer(ctx, layer)? {
            out.push((evaluate_vector(ctx, &s)?, layer));
        }
    }
    Ok(out)
}
