//! Exact distributions of the greedy summand count and of gap lengths.
//!
//! Two independent routes produce the summand-count distribution over
//! `[0, Z_N)`: a per-integer scan (the oracle) and an interval recursion
//! that splits `[0, x)` at the largest term below `x`. A third route applies
//! the generating-function recurrence `G_{N+1} = G_N + y (G_{N-1} + G_{N-2})`
//! verbatim; it is kept for comparison only and never feeds other results.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::greedy::{self, DecomposeError};
use crate::recurrence::SequenceTable;

/// Default cap on the number of integers an exhaustive scan may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

const SHARD: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("enumeration needs {needed} integers, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("distribution is empty")]
    EmptyDistribution,
    #[error("distribution has zero variance")]
    DegenerateDistribution,
    #[error("need at least 3 points for a slope fit, got {0}")]
    TooFewPoints(usize),
    #[error("need at least 3 nonzero bins in [{k_min}, {k_max}], got {found}")]
    TooFewBins {
        k_min: usize,
        k_max: usize,
        found: usize,
    },
    #[error("interval [Z_{0}, Z_{{{0}+1}}) is empty")]
    EmptyInterval(usize),
    #[error("generating-function recurrence requires coefficients 0,1,1")]
    WrongSpecShape,
    #[error("index {0} is outside the sequence table")]
    IndexOutOfTable(usize),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// Counts of `k(m)` for `m` in `[0, Z_N)`: the coefficients of `G_N(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandDistribution {
    pub n: usize,
    pub counts: BTreeMap<usize, BigUint>,
    pub total: BigUint,
}

impl SummandDistribution {
    pub fn from_counts(n: usize, counts: BTreeMap<usize, BigUint>) -> Self {
        let total = counts.values().sum();
        SummandDistribution { n, counts, total }
    }

    fn from_dense(n: usize, dense: &[BigUint]) -> Self {
        let counts = dense
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect();
        SummandDistribution::from_counts(n, counts)
    }

    /// `G_N(1)`.
    pub fn mass(&self) -> &BigUint {
        &self.total
    }

    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(&k).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionMethod {
    /// Greedy-decompose every integer in the interval.
    Enumerate { budget: u64 },
    /// Interval recursion on prefix counts.
    IntervalDp,
}

pub fn exact_summand_distribution(
    table: &SequenceTable,
    n: usize,
    method: DistributionMethod,
) -> Result<SummandDistribution, StatsError> {
    let bound = table.get(n).ok_or(StatsError::IndexOutOfTable(n))?;
    match method {
        DistributionMethod::Enumerate { budget } => {
            let size = bound.to_u64().filter(|&z| z <= budget).ok_or_else(|| {
                StatsError::BudgetExceeded {
                    needed: bound.to_string(),
                    budget,
                }
            })?;
            let dense = enumerate_counts(table, size)?;
            let dense: Vec<BigUint> = dense.into_iter().map(BigUint::from).collect();
            Ok(SummandDistribution::from_dense(n, &dense))
        }
        DistributionMethod::IntervalDp => {
            let mut dp = PrefixCounts::new(table);
            let dense = dp.counts_below(bound)?;
            Ok(SummandDistribution::from_dense(n, &dense))
        }
    }
}

/// Per-integer scan of `[0, size)`, sharded and merged in shard order.
fn enumerate_counts(table: &SequenceTable, size: u64) -> Result<Vec<u64>, StatsError> {
    let shards = size.div_ceil(SHARD);
    let partials: Vec<Result<Vec<u64>, DecomposeError>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut counts: Vec<u64> = Vec::new();
            for m in s * SHARD..((s + 1) * SHARD).min(size) {
                let k = greedy::summand_count_u64(table, m)?;
                if counts.len() <= k {
                    counts.resize(k + 1, 0);
                }
                counts[k] += 1;
            }
            Ok(counts)
        })
        .collect();
    let mut merged: Vec<u64> = Vec::new();
    for part in partials {
        let part = part?;
        if merged.len() < part.len() {
            merged.resize(part.len(), 0);
        }
        for (k, c) in part.into_iter().enumerate() {
            merged[k] += c;
        }
    }
    Ok(merged)
}

/// Memoized counts of `k(m)` over `[0, x)`.
///
/// For `x >= 2` let `n` be the largest index with `Z_n < x`. Every `m` in
/// `[Z_n, x)` has first summand `Z_n`, so
/// `counts[0, x) = counts[0, Z_n) + shift(counts[0, x - Z_n))`.
struct PrefixCounts<'a> {
    table: &'a SequenceTable,
    memo: HashMap<BigUint, Rc<Vec<BigUint>>>,
}

impl<'a> PrefixCounts<'a> {
    fn new(table: &'a SequenceTable) -> Self {
        PrefixCounts {
            table,
            memo: HashMap::new(),
        }
    }

    fn counts_below(&mut self, x: &BigUint) -> Result<Vec<BigUint>, StatsError> {
        Ok(self.get(x)?.as_ref().clone())
    }

    fn get(&mut self, x: &BigUint) -> Result<Rc<Vec<BigUint>>, StatsError> {
        if let Some(hit) = self.memo.get(x) {
            return Ok(Rc::clone(hit));
        }
        let result = if x.is_zero() {
            Vec::new()
        } else if x == &BigUint::from(1u32) {
            vec![BigUint::from(1u32)]
        } else {
            let below = x - 1u32;
            let n = self
                .table
                .largest_index_at_most(&below)
                .expect("Z_0 = 1 <= x - 1");
            if n == self.table.top_index() {
                return Err(DecomposeError::TableTooSmall {
                    largest: self.table.term(n).to_string(),
                    value: below.to_string(),
                }
                .into());
            }
            let zn = self.table.term(n).clone();
            let rest = x - &zn;
            if rest > zn {
                return Err(DecomposeError::RepeatedIndex { index: n }.into());
            }
            let head = self.get(&zn)?;
            let tail = self.get(&rest)?;
            let mut out: Vec<BigUint> = vec![BigUint::zero(); head.len().max(tail.len() + 1)];
            for (k, c) in head.iter().enumerate() {
                out[k] += c;
            }
            for (k, c) in tail.iter().enumerate() {
                out[k + 1] += c;
            }
            out
        };
        let result = Rc::new(result);
        self.memo.insert(x.clone(), Rc::clone(&result));
        Ok(result)
    }
}

/// Applies `G_{N+1}(y) = G_N(y) + y (G_{N-1}(y) + G_{N-2}(y))` from exact
/// seeds `G_0, G_1, G_2`. For `n < 3` the exact seed is returned.
///
/// The result's `total` is the recurrence's own `G_N(1)`; it is not forced
/// to equal `Z_N`.
pub fn gf_recurrence_distribution(
    table: &SequenceTable,
    n: usize,
) -> Result<SummandDistribution, StatsError> {
    if !table.spec().is_lagonacci_shaped() {
        return Err(StatsError::WrongSpecShape);
    }
    let seeds: Vec<Vec<BigUint>> = (0..3)
        .map(|i| {
            let z = table.get(i).ok_or(StatsError::IndexOutOfTable(i))?;
            PrefixCounts::new(table).counts_below(z)
        })
        .collect::<Result<_, _>>()?;
    if n < 3 {
        return Ok(SummandDistribution::from_dense(n, &seeds[n]));
    }
    let mut window: [Vec<BigUint>; 3] = [seeds[0].clone(), seeds[1].clone(), seeds[2].clone()];
    for _ in 3..=n {
        let [g2, g1, g0] = &window;
        let len = g0.len().max(g1.len() + 1).max(g2.len() + 1);
        let mut next = vec![BigUint::zero(); len];
        for (k, c) in g0.iter().enumerate() {
            next[k] += c;
        }
        for (k, c) in g1.iter().chain(std::iter::empty()).enumerate() {
            next[k + 1] += c;
        }
        for (k, c) in g2.iter().enumerate() {
            next[k + 1] += c;
        }
        window = [window[1].clone(), window[2].clone(), next];
    }
    Ok(SummandDistribution::from_dense(n, &window[2]))
}

/// Exact mean and variance of `K_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSummary {
    pub n_label: usize,
    pub mean: BigRational,
    pub variance: BigRational,
}

impl MomentSummary {
    pub fn mean_f64(&self) -> f64 {
        self.mean.to_f64().unwrap_or(f64::NAN)
    }

    pub fn variance_f64(&self) -> f64 {
        self.variance.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn moments(dist: &SummandDistribution) -> Result<MomentSummary, StatsError> {
    if dist.total.is_zero() {
        return Err(StatsError::EmptyDistribution);
    }
    let total = BigInt::from(dist.total.clone());
    let mut first = BigInt::zero();
    let mut second = BigInt::zero();
    for (&k, c) in &dist.counts {
        let c = BigInt::from(c.clone());
        let k = BigInt::from(k);
        first += &k * &c;
        second += &k * &k * &c;
    }
    let mean = BigRational::new(first, total.clone());
    let variance = BigRational::new(second, total) - &mean * &mean;
    Ok(MomentSummary {
        n_label: dist.n,
        mean,
        variance,
    })
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov-Smirnov distance between the standardized distribution and
/// `N(0, 1)`, taken over both sides of every jump.
pub fn ks_vs_gaussian(dist: &SummandDistribution) -> Result<f64, StatsError> {
    let summary = moments(dist)?;
    if summary.variance.is_zero() {
        return Err(StatsError::DegenerateDistribution);
    }
    let mean = summary.mean_f64();
    let sd = summary.variance_f64().sqrt();
    let mut cumulative = BigUint::zero();
    let mut sup: f64 = 0.0;
    for (&k, c) in &dist.counts {
        let phi = normal_cdf((k as f64 - mean) / sd);
        let before = ratio_f64(&cumulative, &dist.total);
        cumulative += c;
        let after = ratio_f64(&cumulative, &dist.total);
        sup = sup.max((before - phi).abs()).max((after - phi).abs());
    }
    Ok(sup)
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Ordinary least-squares line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub slope: f64,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub intercept: f64,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub r_squared: f64,
}

/// Least-squares fit of `ys` against `xs`. A perfect fit (including a
/// constant series) has `r_squared = 1`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let scale = ys.iter().map(|y| y.abs()).fold(1.0, f64::max);
    let r_squared = if ss_tot <= (f64::EPSILON * scale).powi(2) * n {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub mean_slope: f64,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub var_slope: f64,
}

/// Least-squares slopes of `E[K_N]` and `Var(K_N)` against `N`.
pub fn slope_fit(series: &[(usize, MomentSummary)]) -> Result<SlopeFit, StatsError> {
    if series.len() < 3 {
        return Err(StatsError::TooFewPoints(series.len()));
    }
    let xs: Vec<f64> = series.iter().map(|(n, _)| *n as f64).collect();
    let means: Vec<f64> = series.iter().map(|(_, m)| m.mean_f64()).collect();
    let vars: Vec<f64> = series.iter().map(|(_, m)| m.variance_f64()).collect();
    Ok(SlopeFit {
        mean_slope: linear_fit(&xs, &means).slope,
        var_slope: linear_fit(&xs, &vars).slope,
    })
}

/// Pooled gap lengths over the greedy decompositions of `[Z_N, Z_{N+1})`.
///
/// Only gaps whose lower summand index is at least `min_lower_index` are
/// counted; `0` keeps every gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapHistogram {
    pub n: usize,
    pub min_lower_index: usize,
    pub counts: BTreeMap<usize, u64>,
    pub total_gaps: u64,
}

impl GapHistogram {
    pub fn probability(&self, g: usize) -> f64 {
        if self.total_gaps == 0 {
            return f64::NAN;
        }
        self.counts.get(&g).copied().unwrap_or(0) as f64 / self.total_gaps as f64
    }
}

pub fn exact_gap_distribution(
    table: &SequenceTable,
    n: usize,
    budget: u64,
) -> Result<GapHistogram, StatsError> {
    exact_gap_distribution_from(table, n, budget, 0)
}

pub fn exact_gap_distribution_from(
    table: &SequenceTable,
    n: usize,
    budget: u64,
    min_lower_index: usize,
) -> Result<GapHistogram, StatsError> {
    let lo = table.get(n).ok_or(StatsError::IndexOutOfTable(n))?;
    let hi = table.get(n + 1).ok_or(StatsError::IndexOutOfTable(n + 1))?;
    if hi <= lo {
        return Err(StatsError::EmptyInterval(n));
    }
    let width = hi - lo;
    let (lo, width) = match (lo.to_u64(), width.to_u64().filter(|&w| w <= budget)) {
        (Some(lo), Some(w)) if hi.to_u64().is_some() => (lo, w),
        _ => {
            return Err(StatsError::BudgetExceeded {
                needed: width.to_string(),
                budget,
            })
        }
    };
    let shards = width.div_ceil(SHARD);
    let partials: Vec<Result<BTreeMap<usize, u64>, DecomposeError>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut counts = BTreeMap::new();
            let mut indices = Vec::new();
            for offset in s * SHARD..((s + 1) * SHARD).min(width) {
                greedy::greedy_indices_u64(table, lo + offset, &mut indices)?;
                for w in indices.windows(2) {
                    if w[1] >= min_lower_index {
                        *counts.entry(w[0] - w[1]).or_insert(0) += 1;
                    }
                }
            }
            Ok(counts)
        })
        .collect();
    let mut counts = BTreeMap::new();
    for part in partials {
        for (g, c) in part? {
            *counts.entry(g).or_insert(0) += c;
        }
    }
    let total_gaps = counts.values().sum();
    Ok(GapHistogram {
        n,
        min_lower_index,
        counts,
        total_gaps,
    })
}

/// Log-linear fit of `P(g = k)` over the nonzero bins in `[k_min, k_max]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    /// `-slope` of `log P(g = k)` against `k`.
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub rate: f64,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub r_squared: f64,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub intercept: f64,
    pub bins: Vec<usize>,
}

pub fn fit_geometric_decay(
    hist: &GapHistogram,
    k_min: usize,
    k_max: usize,
) -> Result<DecayFit, StatsError> {
    let bins: Vec<usize> = hist
        .counts
        .range(k_min..=k_max)
        .filter(|(_, &c)| c > 0)
        .map(|(&k, _)| k)
        .collect();
    if bins.len() < 3 {
        return Err(StatsError::TooFewBins {
            k_min,
            k_max,
            found: bins.len(),
        });
    }
    let xs: Vec<f64> = bins.iter().map(|&k| k as f64).collect();
    let ys: Vec<f64> = bins.iter().map(|&k| hist.probability(k).ln()).collect();
    let fit = linear_fit(&xs, &ys);
    Ok(DecayFit {
        rate: -fit.slope,
        r_squared: fit.r_squared,
        intercept: fit.intercept,
        bins,
    })
}

/// Mean of `P(g = k) λ^k` over the bins of a decay fit: the constant `C` in
/// `P(g = k) ≈ C λ^{-k}`.
pub fn geometric_constant(hist: &GapHistogram, fit: &DecayFit, lambda: f64) -> f64 {
    let values: Vec<f64> = fit
        .bins
        .iter()
        .map(|&k| hist.probability(k) * lambda.powi(k as i32))
        .collect();
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{generate_sequence, ValidatedSpec};
    use num_bigint::BigInt;

    fn table() -> SequenceTable {
        generate_sequence(&ValidatedSpec::lagonacci(), 120)
    }

    fn counts(pairs: &[(usize, u64)]) -> BTreeMap<usize, BigUint> {
        pairs.iter().map(|&(k, c)| (k, BigUint::from(c))).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    const ENUM: DistributionMethod = DistributionMethod::Enumerate {
        budget: DEFAULT_ENUMERATION_BUDGET,
    };

    #[test]
    fn small_distributions_by_enumeration() {
        let t = table();
        let d4 = exact_summand_distribution(&t, 4, ENUM).unwrap();
        assert_eq!(d4.counts, counts(&[(0, 1), (1, 3), (2, 1)]));
        let d1 = exact_summand_distribution(&t, 1, ENUM).unwrap();
        assert_eq!(d1.counts, counts(&[(0, 1), (1, 1)]));
        let d6 = exact_summand_distribution(&t, 6, ENUM).unwrap();
        assert_eq!(d6.counts, counts(&[(0, 1), (1, 5), (2, 2)]));
    }

    #[test]
    fn interval_dp_matches_enumeration() {
        let t = table();
        for n in 0..=26 {
            let a = exact_summand_distribution(&t, n, ENUM).unwrap();
            let b = exact_summand_distribution(&t, n, DistributionMethod::IntervalDp).unwrap();
            assert_eq!(a, b, "N = {n}");
            assert_eq!(&b.total, t.term(n));
            assert_eq!(b.count(0), BigUint::from(1u32));
        }
    }

    #[test]
    fn interval_dp_handles_large_indices() {
        let t = table();
        let d = exact_summand_distribution(&t, 110, DistributionMethod::IntervalDp).unwrap();
        assert_eq!(&d.total, t.term(110));
    }

    #[test]
    fn enumeration_respects_budget() {
        let t = table();
        let err = exact_summand_distribution(&t, 30, DistributionMethod::Enumerate { budget: 10 });
        assert!(matches!(err, Err(StatsError::BudgetExceeded { .. })));
    }

    #[test]
    fn gf_recurrence_single_step() {
        let t = table();
        // G_3 = G_2 + y (G_1 + G_0) = {0:1,1:2} + y({0:1,1:1} + {0:1})
        let g3 = gf_recurrence_distribution(&t, 3).unwrap();
        assert_eq!(g3.counts, counts(&[(0, 1), (1, 4), (2, 1)]));
        assert_eq!(g3.total, BigUint::from(6u32));
        assert_ne!(&g3.total, t.term(3));
    }

    #[test]
    fn gf_recurrence_mass_follows_its_own_recurrence() {
        let t = table();
        let mass: Vec<BigUint> = (0..12)
            .map(|n| gf_recurrence_distribution(&t, n).unwrap().total)
            .collect();
        for n in 2..11 {
            assert_eq!(mass[n + 1], &mass[n] + &mass[n - 1] + &mass[n - 2]);
        }
    }

    #[test]
    fn gf_recurrence_seed_passthrough_and_shape() {
        let t = table();
        let g2 = gf_recurrence_distribution(&t, 2).unwrap();
        assert_eq!(g2.counts, counts(&[(0, 1), (1, 2)]));
        let other = crate::recurrence::validate_spec(crate::recurrence::ZlrrSpec::new(
            vec![0, 0, 1, 1],
            [1u32, 2, 3, 4],
        ))
        .unwrap();
        let t2 = generate_sequence(&other, 20);
        assert_eq!(
            gf_recurrence_distribution(&t2, 5),
            Err(StatsError::WrongSpecShape)
        );
    }

    #[test]
    fn moment_examples() {
        let m = moments(&SummandDistribution::from_counts(
            4,
            counts(&[(0, 1), (1, 3), (2, 1)]),
        ))
        .unwrap();
        assert_eq!(m.mean, rat(1, 1));
        assert_eq!(m.variance, rat(2, 5));
        let m = moments(&SummandDistribution::from_counts(0, counts(&[(0, 1)]))).unwrap();
        assert_eq!(m.mean, rat(0, 1));
        assert_eq!(m.variance, rat(0, 1));
        let m = moments(&SummandDistribution::from_counts(
            6,
            counts(&[(0, 1), (1, 5), (2, 2)]),
        ))
        .unwrap();
        assert_eq!(m.mean, rat(9, 8));
        assert_eq!(m.variance, rat(23, 64));
        assert_eq!(
            moments(&SummandDistribution::from_counts(0, BTreeMap::new())),
            Err(StatsError::EmptyDistribution)
        );
    }

    #[test]
    fn ks_rejects_point_mass() {
        let d = SummandDistribution::from_counts(0, counts(&[(1, 7)]));
        assert_eq!(ks_vs_gaussian(&d), Err(StatsError::DegenerateDistribution));
    }

    #[test]
    fn ks_of_symmetric_two_point() {
        let d = SummandDistribution::from_counts(0, counts(&[(0, 1), (2, 1)]));
        // standardized support {-1, 1}; the sup is 1/2 - Phi(-1) on both jumps
        let left_limit_gap = normal_cdf(-1.0);
        assert!(
            (left_limit_gap - 0.158_655_253_931_457).abs() < 1e-12,
            "{left_limit_gap:e}"
        );
        let ks = ks_vs_gaussian(&d).unwrap();
        assert!((ks - (0.5 - left_limit_gap)).abs() < 1e-12);
    }

    #[test]
    fn slope_examples() {
        let mk = |n: usize, mean: i64| {
            let m = MomentSummary {
                n_label: n,
                mean: rat(mean, 1),
                variance: rat(3, 1),
            };
            (n, m)
        };
        let fit = slope_fit(&[mk(1, 1), mk(2, 2), mk(3, 3)]).unwrap();
        assert!((fit.mean_slope - 1.0).abs() < 1e-12);
        assert!(fit.var_slope.abs() < 1e-12);
        assert_eq!(slope_fit(&[mk(1, 1)]), Err(StatsError::TooFewPoints(1)));
    }

    #[test]
    fn gap_examples() {
        let t = table();
        let h5 = exact_gap_distribution(&t, 5, 1000).unwrap();
        assert_eq!(h5.counts, BTreeMap::from([(5, 1)]));
        assert_eq!(h5.total_gaps, 1);
        let h0 = exact_gap_distribution(&t, 0, 1000).unwrap();
        assert!(h0.counts.is_empty());
        assert_eq!(h0.total_gaps, 0);
        assert_eq!(
            exact_gap_distribution(&t, 2, 1000),
            Err(StatsError::EmptyInterval(2))
        );
    }

    #[test]
    fn gaps_are_positive() {
        let t = table();
        for n in [10, 20, 30] {
            let h = exact_gap_distribution(&t, n, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert!(h.counts.keys().all(|&g| g >= 1));
            assert_eq!(h.counts.values().sum::<u64>(), h.total_gaps);
        }
    }

    #[test]
    fn lower_index_filter_drops_boundary_gaps() {
        let t = table();
        let all = exact_gap_distribution(&t, 20, DEFAULT_ENUMERATION_BUDGET).unwrap();
        let inner = exact_gap_distribution_from(&t, 20, DEFAULT_ENUMERATION_BUDGET, 1).unwrap();
        assert!(inner.total_gaps < all.total_gaps);
        assert!(inner.counts.keys().all(|&g| g >= 5));
    }

    #[test]
    fn geometric_fit_examples() {
        let mk = |pairs: &[(usize, u64)]| GapHistogram {
            n: 0,
            min_lower_index: 0,
            counts: pairs.iter().copied().collect(),
            total_gaps: pairs.iter().map(|p| p.1).sum(),
        };
        let fit = fit_geometric_decay(&mk(&[(2, 64), (3, 32), (4, 16)]), 2, 8).unwrap();
        assert!((fit.rate - 2f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        let flat = fit_geometric_decay(&mk(&[(2, 5), (3, 5), (4, 5)]), 2, 8).unwrap();
        assert!(flat.rate.abs() < 1e-12);
        assert!(matches!(
            fit_geometric_decay(&mk(&[(2, 5), (3, 5)]), 2, 8),
            Err(StatsError::TooFewBins { found: 2, .. })
        ));
    }
}
