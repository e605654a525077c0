//! Instrumented comparison of the SR strategies and j-bound growth checks.

use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::representation::IndexSet;
use crate::sequences::{KBonacciContext, VecZ};
use crate::solver::{find_sr, j_bound, large_steps_decomposition, reference_recursive_sr, small_steps_bound, BoundStrategy};

/// Strategies timed by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchStrategy {
    Small,
    Large,
    Reference,
}

impl BenchStrategy {
    pub const ALL: [BenchStrategy; 3] = [BenchStrategy::Small, BenchStrategy::Large, BenchStrategy::Reference];

    pub fn name(self) -> &'static str {
        match self {
            BenchStrategy::Small => "small",
            BenchStrategy::Large => "large",
            BenchStrategy::Reference => "reference",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SampleSpec {
    pub k: usize,
    pub norm_bound: i64,
    pub count: usize,
    pub seed: u64,
}

/// `count` nonzero vectors uniform on `[-norm_bound, norm_bound]^{k-1}`.
pub fn sample_vectors(spec: &SampleSpec) -> Result<Vec<VecZ>> {
    if spec.k < 3 {
        return Err(Error::UnsupportedOrder { k: spec.k, min: 3 });
    }
    if spec.norm_bound < 1 {
        return Err(Error::ZeroVector);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    while out.len() < spec.count {
        let e: Vec<i64> = (0..spec.k - 1).map(|_| rng.gen_range(-spec.norm_bound..=spec.norm_bound)).collect();
        if e.iter().any(|&x| x != 0) {
            out.push(VecZ::from_i64(&e));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub k: usize,
    pub v: VecZ,
    pub strategy: BenchStrategy,
    /// The j bound used; absent for the reference strategy.
    pub j: Option<usize>,
    pub sr_length: usize,
    pub op_count: u64,
    pub wall_ns: u128,
}

/// Runs one strategy on a fresh context so the operation count includes cache growth.
pub fn bench_one(k: usize, v: &VecZ, strategy: BenchStrategy) -> Result<(BenchRecord, IndexSet)> {
    let ctx = KBonacciContext::new(k)?;
    let start = Instant::now();
    let (sr, j) = match strategy {
        BenchStrategy::Small => {
            (find_sr(&ctx, v, BoundStrategy::SmallSteps)?, Some(j_bound(&ctx, v, BoundStrategy::SmallSteps)?.value))
        }
        BenchStrategy::Large => {
            (find_sr(&ctx, v, BoundStrategy::LargeSteps)?, Some(j_bound(&ctx, v, BoundStrategy::LargeSteps)?.value))
        }
        BenchStrategy::Reference => (reference_recursive_sr(&ctx, v)?, None),
    };
    let wall_ns = start.elapsed().as_nanos();
    let record = BenchRecord { k, v: v.clone(), strategy, j, sr_length: sr.len(), op_count: ctx.ops(), wall_ns };
    Ok((record, sr))
}

/// One record per (vector, strategy); fails if strategies disagree.
pub fn run_benchmark(spec: &SampleSpec, strategies: &[BenchStrategy]) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for v in sample_vectors(spec)? {
        let mut first: Option<(BenchStrategy, IndexSet)> = None;
        for &s in strategies {
            let (rec, sr) = bench_one(spec.k, &v, s)?;
            match &first {
                None => first = Some((s, sr)),
                Some((s0, sr0)) if *sr0 != sr => {
                    return Err(Error::StrategyMismatch {
                        v: v.to_string(),
                        detail: format!("{} gives {sr0}, {} gives {sr}", s0.name(), s.name()),
                    })
                }
                Some(_) => {}
            }
            out.push(rec);
        }
    }
    Ok(out)
}

/// CSV header for [`BenchRecord`] rows: `k, v1..v_{k-1}, strategy, j, sr_length, op_count, wall_ns`.
pub fn bench_csv_header(k: usize) -> Vec<String> {
    let mut h = vec!["k".to_string()];
    h.extend((1..k).map(|i| format!("v{i}")));
    h.extend(["strategy", "j", "sr_length", "op_count", "wall_ns"].map(String::from));
    h
}

pub fn bench_csv_row(r: &BenchRecord) -> Vec<String> {
    let mut row = vec![r.k.to_string()];
    row.extend(r.v.entries().iter().map(|e| e.to_string()));
    row.push(r.strategy.name().to_string());
    row.push(r.j.map(|j| j.to_string()).unwrap_or_default());
    row.push(r.sr_length.to_string());
    row.push(r.op_count.to_string());
    row.push(r.wall_ns.to_string());
    row
}

/// Which vectors a scatter check covers.
#[derive(Clone, Copy, Debug)]
pub enum ScatterDomain {
    /// Every nonzero `v` with `||v||_inf <= norm_bound`.
    Exhaustive,
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ScatterPoint {
    pub v: VecZ,
    pub norm_l2: f64,
    pub j_lsb: usize,
    pub bound: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScatterResult {
    pub points: Vec<ScatterPoint>,
    pub violations: Vec<VecZ>,
    /// Largest `j_lsb / (c ln ||v||_2 + d)`.
    pub max_ratio: f64,
}

fn all_vectors(dim: usize, b: i64) -> Vec<VecZ> {
    let mut out = Vec::new();
    let mut cur = vec![-b; dim];
    loop {
        if cur.iter().any(|&x| x != 0) {
            out.push(VecZ::from_i64(&cur));
        }
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
            i += 1;
        }
    }
}

/// Checks `j_lsb <= c ln ||v||_2 + d`.
pub fn jbound_scatter(k: usize, norm_bound: i64, domain: ScatterDomain, c: f64, d: f64) -> Result<ScatterResult> {
    let ctx = KBonacciContext::new(k)?;
    ctx.require_vectors()?;
    let vectors = match domain {
        ScatterDomain::Exhaustive => all_vectors(k - 1, norm_bound),
        ScatterDomain::Random { count, seed } => sample_vectors(&SampleSpec { k, norm_bound, count, seed })?,
    };
    let mut points = Vec::with_capacity(vectors.len());
    let mut violations = Vec::new();
    let mut max_ratio = 0.0f64;
    for v in vectors {
        let (_, jb) = large_steps_decomposition(&ctx, &v)?;
        let norm_l2 = v.l2_squared().to_f64().unwrap_or(f64::INFINITY).sqrt();
        let bound = c * norm_l2.ln() + d;
        let violated = jb.value as f64 > bound;
        max_ratio = max_ratio.max(jb.value as f64 / bound);
        if violated {
            violations.push(v.clone());
        }
        points.push(ScatterPoint { v, norm_l2, j_lsb: jb.value, bound, violated });
    }
    Ok(ScatterResult { points, violations, max_ratio })
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Median `j` of one bound strategy over a seeded sample.
pub fn median_j(spec: &SampleSpec, strategy: BoundStrategy) -> Result<f64> {
    let ctx = KBonacciContext::new(spec.k)?;
    let js = sample_vectors(spec)?
        .iter()
        .map(|v| match strategy {
            BoundStrategy::SmallSteps => small_steps_bound(&ctx, v).map(|b| b.value as f64),
            BoundStrategy::LargeSteps => large_steps_decomposition(&ctx, v).map(|(_, b)| b.value as f64),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(median(js))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Mean operation count of one strategy at each norm bound.
pub fn op_count_curve(k: usize, bounds: &[i64], count: usize, seed: u64, strategy: BenchStrategy) -> Result<Vec<(f64, f64)>> {
    bounds
        .iter()
        .map(|&b| {
            let spec = SampleSpec { k, norm_bound: b, count, seed };
            let recs = run_benchmark(&spec, &[strategy])?;
            let mean = recs.iter().map(|r| r.op_count as f64).sum::<f64>() / recs.len() as f64;
            Ok((b as f64, mean))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let spec = SampleSpec { k: 3, norm_bound: 20, count: 50, seed: 7 };
        let a = sample_vectors(&spec).unwrap();
        assert_eq!(a, sample_vectors(&spec).unwrap());
        assert!(a.iter().all(|v| !v.is_zero()));
        assert_ne!(a, sample_vectors(&SampleSpec { seed: 8, ..spec }).unwrap());
    }

    #[test]
    fn worked_example_records() {
        let v = VecZ::from_i64(&[2, -2]);
        let (small, sr) = bench_one(3, &v, BenchStrategy::Small).unwrap();
        let (large, _) = bench_one(3, &v, BenchStrategy::Large).unwrap();
        let (reference, _) = bench_one(3, &v, BenchStrategy::Reference).unwrap();
        assert_eq!((small.j, large.j, reference.j), (Some(18), Some(16), None));
        assert_eq!(sr.indices(), &[2, 3, 6, 7]);
        assert!(small.op_count > 0 && large.op_count > 0 && reference.op_count > 0);
    }

    #[test]
    fn strategies_agree_and_counts_repeat() {
        let spec = SampleSpec { k: 4, norm_bound: 6, count: 20, seed: 1 };
        let a = run_benchmark(&spec, &BenchStrategy::ALL).unwrap();
        let b = run_benchmark(&spec, &BenchStrategy::ALL).unwrap();
        assert_eq!(a.len(), 60);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!((x.op_count, x.j, x.sr_length), (y.op_count, y.j, y.sr_length));
        }
        for chunk in a.chunks(3) {
            assert!(chunk.iter().all(|r| r.sr_length == chunk[0].sr_length));
        }
        assert_eq!(bench_csv_header(4).len(), bench_csv_row(&a[0]).len());
    }

    #[test]
    fn scatter_small() {
        let r = jbound_scatter(3, 5, ScatterDomain::Exhaustive, 15.0, 10.0).unwrap();
        assert_eq!(r.points.len(), 120);
        assert!(r.violations.is_empty());
        let one = r.points.iter().find(|p| p.v == VecZ::from_i64(&[1, 0])).unwrap();
        assert_eq!(one.j_lsb, 1);
        assert_eq!(one.bound, 10.0);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(1.5))).collect();
        assert!((log_log_slope(&pts) - 1.5).abs() < 1e-12);
    }
}
