//! Microcanonical and canonical ensembles over greedy decompositions.
//!
//! The microcanonical ensemble is the uniform measure on `[Z_N, Z_{N+1})`.
//! The canonical ensemble is a renewal process on summand indices: starting
//! from a top index, successive index decrements are drawn independently
//! from a [`CanonicalLaw`].

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::greedy::{self, DecomposeError};
use crate::legal::{self, ForbiddenPattern, LegalError};
use crate::recurrence::{RootInfo, SequenceTable};

/// Samples per deterministic RNG chunk; chunk `c` uses stream `c`.
pub const SAMPLE_CHUNK: u64 = 65_536;
/// Interval width up to which micro expectations are computed exactly.
pub const DEFAULT_EXACT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnsembleError {
    #[error("interval [Z_{0}, Z_{{{0}+1}}) is empty")]
    EmptyInterval(usize),
    #[error("index {0} is outside the sequence table")]
    IndexOutOfTable(usize),
    #[error("exact scan over {needed} integers exceeds the budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("prefix must be nonempty and strictly decreasing")]
    BadPrefix,
    #[error("prefix starts at index {prefix_top} above N = {n}")]
    PrefixOutOfRange { prefix_top: usize, n: usize },
    #[error("window length {window} must be between 1 and N + 1 = {limit}")]
    WindowOutOfRange { window: usize, limit: usize },
    #[error("invalid canonical law: {0}")]
    BadLaw(String),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Legal(#[from] LegalError),
}

/// Uniform integer in `[0, bound)`, by rejection on the smallest power-of-two
/// cover of `bound`.
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = (bound - 1u32).bits();
    if bits == 0 {
        return BigUint::zero();
    }
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (words as u64 - 1);
    let top_mask = if top_bits == 32 {
        u32::MAX
    } else {
        (1u32 << top_bits) - 1
    };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        digits[words - 1] &= top_mask;
        let candidate = BigUint::from_slice(&digits);
        if &candidate < bound {
            return candidate;
        }
    }
}

fn interval(table: &SequenceTable, n: usize) -> Result<(BigUint, BigUint), EnsembleError> {
    let lo = table.get(n).ok_or(EnsembleError::IndexOutOfTable(n))?;
    let hi = table
        .get(n + 1)
        .ok_or(EnsembleError::IndexOutOfTable(n + 1))?;
    if hi <= lo {
        return Err(EnsembleError::EmptyInterval(n));
    }
    Ok((lo.clone(), hi - lo))
}

/// `count` integers drawn uniformly from `[Z_N, Z_{N+1})`.
pub fn sample_microcanonical(
    table: &SequenceTable,
    n: usize,
    seed: u64,
    count: usize,
) -> Result<Vec<BigUint>, EnsembleError> {
    let (lo, width) = interval(table, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| &lo + uniform_below(&mut rng, &width))
        .collect())
}

/// Law of index decrements: `min_gap` with probability `first_mass`, and
/// `min_gap + t` (`t ≥ 1`) with probability `(1 - first_mass)(1 - r) r^{t-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CanonicalLaw {
    pub min_gap: usize,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub first_mass: f64,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub ratio: f64,
}

impl CanonicalLaw {
    /// Geometric decrements from `min_gap` with ratio `1/λ`:
    /// `P(g) = (1 - 1/λ) λ^{-(g - min_gap)}`.
    pub fn geometric(lambda: f64, min_gap: usize) -> Result<Self, EnsembleError> {
        if lambda.is_nan() || lambda <= 1.0 || min_gap == 0 {
            return Err(EnsembleError::BadLaw(format!(
                "lambda {lambda}, min_gap {min_gap}"
            )));
        }
        let ratio = 1.0 / lambda;
        Ok(CanonicalLaw {
            min_gap,
            first_mass: 1.0 - ratio,
            ratio,
        })
    }

    /// Law adapted to a sequence: `min_gap` is the smallest gap the greedy
    /// algorithm can produce far from index 0, and every larger gap `g` gets
    /// weight `λ^{-g}`; the remaining mass sits on `min_gap`.
    pub fn from_table(table: &SequenceTable, info: &RootInfo) -> Result<Self, EnsembleError> {
        let min_gap = min_greedy_gap(table)
            .ok_or_else(|| EnsembleError::BadLaw("table too short to read gaps".into()))?;
        let lambda = info.lambda1;
        let tail = lambda.powi(-(min_gap as i32)) / (lambda - 1.0);
        if !(0.0..1.0).contains(&tail) {
            return CanonicalLaw::geometric(lambda, min_gap);
        }
        Ok(CanonicalLaw {
            min_gap,
            first_mass: 1.0 - tail,
            ratio: 1.0 / lambda,
        })
    }

    pub fn probability(&self, g: usize) -> f64 {
        match g.cmp(&self.min_gap) {
            std::cmp::Ordering::Less => 0.0,
            std::cmp::Ordering::Equal => self.first_mass,
            std::cmp::Ordering::Greater => {
                let t = (g - self.min_gap) as i32;
                (1.0 - self.first_mass) * (1.0 - self.ratio) * self.ratio.powi(t - 1)
            }
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        if u < self.first_mass {
            return self.min_gap;
        }
        // 1 - random() lies in (0, 1], so the log is finite.
        let v: f64 = 1.0 - rng.random::<f64>();
        self.min_gap + 1 + (v.ln() / self.ratio.ln()).floor() as usize
    }
}

/// Smallest possible gap `n - j` between the top summand `Z_n` and the next
/// one, read from exact integers near the top of the table.
fn min_greedy_gap(table: &SequenceTable) -> Option<usize> {
    let n = table.top_index().checked_sub(1)?;
    if n < table.strictly_increasing_from() + 2 {
        return None;
    }
    let step = table.term(n + 1) - table.term(n);
    if step <= BigUint::from(1u32) {
        return Some(n);
    }
    let j = table.largest_index_at_most(&(step - 1u32))?;
    Some(n - j)
}

/// Decreasing index pattern from `horizon` down to index 0.
pub fn sample_canonical<R: Rng + ?Sized>(
    law: &CanonicalLaw,
    horizon: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut pattern = vec![horizon];
    let mut index = horizon;
    loop {
        let g = law.draw(rng);
        match index.checked_sub(g) {
            Some(next) => {
                pattern.push(next);
                index = next;
            }
            None => return pattern,
        }
    }
}

pub fn sample_canonical_seeded(law: &CanonicalLaw, horizon: usize, seed: u64) -> Vec<usize> {
    sample_canonical(law, horizon, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixPattern {
    indices: Vec<usize>,
}

impl PrefixPattern {
    pub fn new(indices: Vec<usize>) -> Result<Self, EnsembleError> {
        if indices.is_empty() || indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(EnsembleError::BadPrefix);
        }
        Ok(PrefixPattern { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn terminal_index(&self) -> usize {
        *self.indices.last().expect("nonempty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleTag {
    Micro,
    Canonical,
}

impl fmt::Display for EnsembleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnsembleTag::Micro => "micro",
            EnsembleTag::Canonical => "canonical",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleEstimate {
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub value: f64,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub std_error: f64,
    pub n_samples: u64,
    pub ensemble_tag: EnsembleTag,
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrequencyMode {
    Exact { budget: u64 },
    Sampled { samples: u64, seed: u64 },
}

/// Fraction of `m` in `[Z_N, Z_{N+1})` whose greedy decomposition begins with
/// the given indices.
pub fn prefix_frequency(
    table: &SequenceTable,
    n: usize,
    prefix: &PrefixPattern,
    mode: FrequencyMode,
) -> Result<EnsembleEstimate, EnsembleError> {
    if prefix.indices[0] > n {
        return Err(EnsembleError::PrefixOutOfRange {
            prefix_top: prefix.indices[0],
            n,
        });
    }
    let (lo, width) = interval(table, n)?;
    let starts = |indices: &[usize]| indices.starts_with(&prefix.indices);
    match mode {
        FrequencyMode::Exact { budget } => {
            let (lo, w) = exact_range(&lo, &width, budget)?;
            let mut hits = 0u64;
            let mut indices = Vec::new();
            for m in lo..lo + w {
                greedy::greedy_indices_u64(table, m, &mut indices)?;
                hits += starts(&indices) as u64;
            }
            Ok(EnsembleEstimate {
                value: hits as f64 / w as f64,
                std_error: 0.0,
                n_samples: w,
                ensemble_tag: EnsembleTag::Micro,
                exact: true,
            })
        }
        FrequencyMode::Sampled { samples, seed } => {
            let moments = chunked(samples, seed, |rng, count| {
                let mut acc = Accumulator::default();
                for _ in 0..count {
                    let m = &lo + uniform_below(rng, &width);
                    let d = greedy::greedy_decompose(table, &m)?;
                    acc.push(starts(&d.indices) as u8 as f64);
                }
                Ok(acc)
            })?;
            Ok(moments.estimate(EnsembleTag::Micro))
        }
    }
}

fn exact_range(lo: &BigUint, width: &BigUint, budget: u64) -> Result<(u64, u64), EnsembleError> {
    match (lo.to_u64(), width.to_u64().filter(|&w| w <= budget)) {
        (Some(lo), Some(w)) if lo.checked_add(w).is_some() => Ok((lo, w)),
        _ => Err(EnsembleError::BudgetExceeded {
            needed: width.to_string(),
            budget,
        }),
    }
}

type Evaluator = Arc<dyn Fn(&[bool]) -> f64 + Send + Sync>;

/// Function of the presence window `bits[i] = (index top - i is a summand)`,
/// `i < window_length`, where `top` is the largest index of the ensemble.
#[derive(Clone)]
pub struct LocalStatistic {
    name: String,
    window_length: usize,
    evaluator: Evaluator,
}

impl fmt::Debug for LocalStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalStatistic")
            .field("name", &self.name)
            .field("window_length", &self.window_length)
            .finish()
    }
}

impl LocalStatistic {
    pub fn new<F>(name: impl Into<String>, window_length: usize, evaluator: F) -> Self
    where
        F: Fn(&[bool]) -> f64 + Send + Sync + 'static,
    {
        LocalStatistic {
            name: name.into(),
            window_length,
            evaluator: Arc::new(evaluator),
        }
    }

    pub fn constant(value: f64, window_length: usize) -> Self {
        LocalStatistic::new(format!("constant_{value}"), window_length, move |_| value)
    }

    /// Indicator that index `top - offset` is a summand.
    pub fn presence_at(offset: usize, window_length: usize) -> Self {
        LocalStatistic::new(format!("presence_{offset}"), window_length, move |bits| {
            bits[offset] as u8 as f64
        })
    }

    /// Indicator that two consecutive summands inside the window differ by at
    /// least `min` indices.
    pub fn gap_at_least(min: usize, window_length: usize) -> Self {
        LocalStatistic::new(format!("gap{min}"), window_length, move |bits| {
            let present: Vec<usize> = (0..bits.len()).filter(|&i| bits[i]).collect();
            present.windows(2).any(|w| w[1] - w[0] >= min) as u8 as f64
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    pub fn eval(&self, bits: &[bool]) -> f64 {
        (self.evaluator)(&bits[..self.window_length])
    }

    /// Evaluates every window twice with different trailing content and
    /// checks that the value depends only on the window (`window_length ≤ 20`).
    pub fn probe(&self) -> bool {
        let w = self.window_length;
        assert!(w <= 20, "probe is exhaustive in the window");
        (0u32..1 << w).all(|mask| {
            let mut bits: Vec<bool> = (0..w).map(|i| mask >> i & 1 == 1).collect();
            bits.extend([false; 4]);
            let a = self.eval(&bits);
            bits[w..].fill(true);
            let b = self.eval(&bits);
            a == b || (a.is_nan() && b.is_nan())
        })
    }
}

/// Window relative to `top` from decreasing summand indices.
fn window_bits(indices: &[usize], top: usize, window: usize, out: &mut Vec<bool>) {
    out.clear();
    out.resize(window, false);
    for &i in indices {
        if i > top {
            continue;
        }
        let offset = top - i;
        if offset >= window {
            break;
        }
        out[offset] = true;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ensemble {
    Micro { n: usize },
    Canonical { law: CanonicalLaw },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingBudget {
    /// Largest micro interval scanned exactly.
    pub exact_limit: u64,
    /// Samples when sampling is needed.
    pub samples: u64,
}

impl Default for SamplingBudget {
    fn default() -> Self {
        SamplingBudget {
            exact_limit: DEFAULT_EXACT_LIMIT,
            samples: 1_000_000,
        }
    }
}

/// Expectation of a local statistic: exact over small micro intervals,
/// sampled otherwise.
pub fn expectation_local(
    table: &SequenceTable,
    stat: &LocalStatistic,
    ensemble: &Ensemble,
    budget: SamplingBudget,
    seed: u64,
) -> Result<EnsembleEstimate, EnsembleError> {
    let w = stat.window_length;
    match ensemble {
        Ensemble::Micro { n } => {
            let n = *n;
            if w == 0 || w > n + 1 {
                return Err(EnsembleError::WindowOutOfRange {
                    window: w,
                    limit: n + 1,
                });
            }
            let (lo, width) = interval(table, n)?;
            if let Ok((lo, size)) = exact_range(&lo, &width, budget.exact_limit) {
                let shards = size.div_ceil(SAMPLE_CHUNK);
                let partial: Vec<Result<f64, DecomposeError>> = (0..shards)
                    .into_par_iter()
                    .map(|s| {
                        let mut indices = Vec::new();
                        let mut bits = Vec::new();
                        let mut sum = 0.0;
                        for m in lo + s * SAMPLE_CHUNK..lo + ((s + 1) * SAMPLE_CHUNK).min(size) {
                            greedy::greedy_indices_u64(table, m, &mut indices)?;
                            window_bits(&indices, n, w, &mut bits);
                            sum += stat.eval(&bits);
                        }
                        Ok(sum)
                    })
                    .collect();
                let mut total = 0.0;
                for p in partial {
                    total += p?;
                }
                return Ok(EnsembleEstimate {
                    value: total / size as f64,
                    std_error: 0.0,
                    n_samples: size,
                    ensemble_tag: EnsembleTag::Micro,
                    exact: true,
                });
            }
            let acc = chunked(budget.samples, seed, |rng, count| {
                let mut acc = Accumulator::default();
                let mut bits = Vec::new();
                for _ in 0..count {
                    let m = &lo + uniform_below(rng, &width);
                    let d = greedy::greedy_decompose(table, &m)?;
                    window_bits(&d.indices, n, w, &mut bits);
                    acc.push(stat.eval(&bits));
                }
                Ok(acc)
            })?;
            Ok(acc.estimate(EnsembleTag::Micro))
        }
        Ensemble::Canonical { law } => {
            if w == 0 {
                return Err(EnsembleError::WindowOutOfRange {
                    window: 0,
                    limit: 0,
                });
            }
            let acc = chunked(budget.samples, seed, |rng, count| {
                let mut acc = Accumulator::default();
                let mut bits = vec![false; w];
                for _ in 0..count {
                    bits.fill(false);
                    bits[0] = true;
                    let mut offset = 0;
                    loop {
                        offset += law.draw(rng);
                        if offset >= w {
                            break;
                        }
                        bits[offset] = true;
                    }
                    acc.push(stat.eval(&bits));
                }
                Ok(acc)
            })?;
            Ok(acc.estimate(EnsembleTag::Canonical))
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Accumulator {
    count: u64,
    sum: f64,
    sum_sq: f64,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: Accumulator) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    fn estimate(&self, tag: EnsembleTag) -> EnsembleEstimate {
        let n = self.count as f64;
        let mean = self.sum / n;
        let std_error = if self.count > 1 {
            let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            f64::NAN
        };
        EnsembleEstimate {
            value: mean,
            std_error,
            n_samples: self.count,
            ensemble_tag: tag,
            exact: false,
        }
    }
}

/// Runs `work` over fixed-size chunks, each with its own RNG stream, and merges
/// the results in chunk order so the outcome does not depend on scheduling.
fn chunked<F>(samples: u64, seed: u64, work: F) -> Result<Accumulator, EnsembleError>
where
    F: Fn(&mut ChaCha8Rng, u64) -> Result<Accumulator, DecomposeError> + Sync,
{
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Result<Accumulator, DecomposeError>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
            work(&mut rng, count)
        })
        .collect();
    let mut total = Accumulator::default();
    for part in parts {
        total.merge(part?);
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceResult {
    pub statistic: String,
    pub window_length: usize,
    pub n: usize,
    pub law: CanonicalLaw,
    pub micro: EnsembleEstimate,
    pub canonical: EnsembleEstimate,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub abs_diff: f64,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub combined_std_error: f64,
    pub within_three_se: bool,
}

/// Micro expectation at `N` against the canonical expectation.
pub fn compare_ensembles(
    table: &SequenceTable,
    stat: &LocalStatistic,
    n: usize,
    law: CanonicalLaw,
    budget: SamplingBudget,
    seed: u64,
) -> Result<EquivalenceResult, EnsembleError> {
    let micro = expectation_local(table, stat, &Ensemble::Micro { n }, budget, seed)?;
    let canonical = expectation_local(table, stat, &Ensemble::Canonical { law }, budget, seed)?;
    let abs_diff = (micro.value - canonical.value).abs();
    let combined_std_error = micro.std_error.hypot(canonical.std_error);
    let within_three_se = if combined_std_error > 0.0 {
        abs_diff <= 3.0 * combined_std_error
    } else {
        abs_diff <= 1e-12
    };
    Ok(EquivalenceResult {
        statistic: stat.name.clone(),
        window_length: stat.window_length,
        n,
        law,
        micro,
        canonical,
        abs_diff,
        combined_std_error,
        within_three_se,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationSample {
    pub sample_index: usize,
    #[serde(serialize_with = "crate::output::biguint_as_string")]
    pub value: BigUint,
    #[serde(serialize_with = "crate::output::biguint_as_string")]
    pub d: BigUint,
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub log_d_over_l: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub length: usize,
    pub seed: u64,
    pub samples: Vec<ConcentrationSample>,
    #[serde(serialize_with = "crate::output::opt_f64_as_f17")]
    pub mean: Option<f64>,
    #[serde(serialize_with = "crate::output::opt_f64_as_f17")]
    pub std_dev: Option<f64>,
    /// Sampled values with no legal decomposition; excluded from the moments.
    pub zero_count: usize,
    /// `log(2 / λ)`.
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub k_reference: f64,
    /// `log(ρ / λ)` with `ρ` the measured legal-string growth ratio.
    #[serde(serialize_with = "crate::output::f64_as_f17")]
    pub k_measured: f64,
}

/// Length at which the string growth ratio is read for `k_measured`.
pub const GROWTH_RATIO_LENGTH: usize = 25;

/// Samples `N` uniformly from `[Z_L, Z_{L+1})` and records `log d(N) / L`,
/// counting legal decompositions over `ε_0..ε_L`.
pub fn concentration_experiment(
    table: &SequenceTable,
    info: &RootInfo,
    length: usize,
    n_samples: usize,
    seed: u64,
    pattern: &ForbiddenPattern,
    node_budget: usize,
) -> Result<ConcentrationReport, EnsembleError> {
    let k_reference = (2.0 / info.lambda1).ln();
    let rho = legal::string_growth_ratio(GROWTH_RATIO_LENGTH, pattern);
    let k_measured = (rho / info.lambda1).ln();
    let values = if n_samples == 0 {
        Vec::new()
    } else {
        sample_microcanonical(table, length, seed, n_samples)?
    };
    let counts: Vec<Result<BigUint, LegalError>> = values
        .par_iter()
        .map(|v| legal::count_decompositions_with_budget(table, v, pattern, length, node_budget))
        .collect();
    let mut samples = Vec::with_capacity(values.len());
    for (i, (value, d)) in values.into_iter().zip(counts).enumerate() {
        let d = d?;
        let log_d_over_l = if d.is_zero() {
            f64::NEG_INFINITY
        } else {
            crate::recurrence::ln_biguint(&d) / length as f64
        };
        samples.push(ConcentrationSample {
            sample_index: i,
            value,
            d,
            log_d_over_l,
        });
    }
    let finite: Vec<f64> = samples
        .iter()
        .map(|s| s.log_d_over_l)
        .filter(|x| x.is_finite())
        .collect();
    let mean = (!finite.is_empty()).then(|| finite.iter().sum::<f64>() / finite.len() as f64);
    let std_dev = mean.filter(|_| finite.len() > 1).map(|m| {
        (finite.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (finite.len() - 1) as f64).sqrt()
    });
    Ok(ConcentrationReport {
        length,
        seed,
        zero_count: samples.len() - finite.len(),
        samples,
        mean,
        std_dev,
        k_reference,
        k_measured,
    })
}
