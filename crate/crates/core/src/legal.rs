//! Legal coefficient strings and legal decompositions.
//!
//! A coefficient string `ε_0 ε_1 … ε_{L-1}` is written with indices increasing
//! to the right and is legal when it contains no contiguous occurrence of the
//! forbidden pattern. A legal decomposition of `N` is a legal string over
//! `ε_0..ε_cap` whose selected terms sum to `N`; duplicate term values at
//! different indices count as different summands.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::recurrence::SequenceTable;

/// Cap on memoized search states in [`count_decompositions`].
pub const DEFAULT_NODE_BUDGET: usize = 20_000_000;
/// Cap on the value range of the histogram in [`total_decompositions`].
pub const DEFAULT_VALUE_BUDGET: u64 = 50_000_000;

const MAX_PATTERN_LEN: usize = 24;
const MAX_CAP: usize = 125;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LegalError {
    #[error("pattern must be a nonempty string of 0/1 of length at most {MAX_PATTERN_LEN}: {0:?}")]
    BadPattern(String),
    #[error("coefficient string must contain only 0/1: {0:?}")]
    BadString(String),
    #[error("search exceeded the budget of {0} states")]
    BudgetExceeded(usize),
    #[error("value range {needed} exceeds the budget {budget}")]
    ValueBudgetExceeded { needed: String, budget: u64 },
    #[error("index cap {0} is outside the supported range or the sequence table")]
    CapOutOfRange(usize),
    #[error("target or terms exceed 64-bit range")]
    TooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ForbiddenPattern {
    bits: Vec<bool>,
}

impl ForbiddenPattern {
    pub fn new(bits: Vec<bool>) -> Result<Self, LegalError> {
        if bits.is_empty() || bits.len() > MAX_PATTERN_LEN {
            return Err(LegalError::BadPattern(bits_to_string(&bits)));
        }
        Ok(ForbiddenPattern { bits })
    }

    /// The Lagonacci rule: `1100`.
    pub fn lagonacci() -> Self {
        ForbiddenPattern {
            bits: vec![true, true, false, false],
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Pattern as an integer with `bits[0]` in the most significant place.
    pub(crate) fn code(&self) -> u32 {
        self.bits.iter().fold(0, |acc, &b| acc << 1 | b as u32)
    }
}

impl FromStr for ForbiddenPattern {
    type Err = LegalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = parse_bits(s).ok_or_else(|| LegalError::BadPattern(s.to_string()))?;
        ForbiddenPattern::new(bits).map_err(|_| LegalError::BadPattern(s.to_string()))
    }
}

impl fmt::Display for ForbiddenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.bits))
    }
}

/// `ε_0..ε_{L-1}`; `bits[i]` means `Z_i` is used.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CoefficientString {
    pub bits: Vec<bool>,
}

impl FromStr for CoefficientString {
    type Err = LegalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_bits(s)
            .map(|bits| CoefficientString { bits })
            .ok_or_else(|| LegalError::BadString(s.to_string()))
    }
}

impl fmt::Display for CoefficientString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.bits))
    }
}

fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn is_legal(s: &CoefficientString, p: &ForbiddenPattern) -> bool {
    s.bits.len() < p.len() || !s.bits.windows(p.len()).any(|w| w == p.bits())
}

/// Number of legal strings of length `length`, by window-state DP.
pub fn count_legal_strings(length: usize, p: &ForbiddenPattern) -> BigUint {
    legal_string_counts(length, p).pop().expect("nonempty")
}

/// Legal-string counts for every length `0..=max_length`.
pub fn legal_string_counts(max_length: usize, p: &ForbiddenPattern) -> Vec<BigUint> {
    let k = p.len();
    let w = k - 1;
    let mask = (1u32 << w) - 1;
    let code = p.code();
    let mut out = Vec::with_capacity(max_length + 1);
    // Strings shorter than the pattern are all legal; track them exactly and
    // switch to window states once a full window is available.
    let mut states: Vec<BigUint> = Vec::new();
    for length in 0..=max_length {
        if length < k {
            out.push(BigUint::from(1u32) << length);
            if length == w {
                states = vec![BigUint::from(1u32); 1 << w];
            }
            continue;
        }
        let mut next = vec![BigUint::zero(); 1 << w];
        for (u, count) in states.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for b in 0..2u32 {
                let full = (u as u32) << 1 | b;
                if full == code {
                    continue;
                }
                next[(full & mask) as usize] += count;
            }
        }
        states = next;
        out.push(states.iter().sum());
    }
    out
}

/// Number of legal decompositions of `target` using indices `0..=cap`.
///
/// Legality is checked on the whole string `ε_0..ε_cap`. The search runs from
/// the top index down with memoization on (index, remainder, recent bits) and
/// prunes branches whose remainder exceeds the sum of all lower terms.
pub fn count_decompositions(
    table: &SequenceTable,
    target: &BigUint,
    p: &ForbiddenPattern,
    cap: usize,
) -> Result<BigUint, LegalError> {
    count_decompositions_with_budget(table, target, p, cap, DEFAULT_NODE_BUDGET)
}

pub fn count_decompositions_with_budget(
    table: &SequenceTable,
    target: &BigUint,
    p: &ForbiddenPattern,
    cap: usize,
    node_budget: usize,
) -> Result<BigUint, LegalError> {
    if cap > MAX_CAP || cap >= table.len() {
        return Err(LegalError::CapOutOfRange(cap));
    }
    let terms: Vec<u64> = (0..=cap)
        .map(|i| table.term_u64(i))
        .collect::<Option<_>>()
        .ok_or(LegalError::TooLarge)?;
    let mut prefix = Vec::with_capacity(terms.len());
    let mut acc: u128 = 0;
    for &t in &terms {
        acc += t as u128;
        prefix.push(acc);
    }
    let target = target.to_u64().ok_or(LegalError::TooLarge)?;
    let search = Search {
        terms: &terms,
        prefix: &prefix,
        code: p.code(),
        k: p.len(),
        first_bit: p.bits()[0],
        node_budget,
    };
    // The two choices for the top index are independent searches.
    let (with_top, without_top) = if target >= terms[cap] {
        rayon::join(
            || search.branch(cap, target, 1),
            || search.branch(cap, target, 0),
        )
    } else {
        (Ok(0), search.branch(cap, target, 0))
    };
    Ok(BigUint::from(with_top? + without_top?))
}

struct Search<'a> {
    terms: &'a [u64],
    prefix: &'a [u128],
    code: u32,
    k: usize,
    first_bit: bool,
    node_budget: usize,
}

/// Recent bits, most recent (lowest index) in the least significant place,
/// plus how many of them exist.
type Window = (u32, u8);

impl Search<'_> {
    fn branch(&self, i: usize, target: u64, bit: u32) -> Result<u128, LegalError> {
        if self.completes((0, 0), bit) {
            return Ok(0);
        }
        let rem = target - bit as u64 * self.terms[i];
        let window = self.push((0, 0), bit);
        if i == 0 {
            return Ok((rem == 0) as u128);
        }
        let mut memo = HashMap::new();
        self.solve(i - 1, rem, window, &mut memo)
    }

    fn push(&self, (bits, filled): Window, bit: u32) -> Window {
        let keep = (self.k - 1) as u32;
        let mask = if keep == 0 { 0 } else { (1u32 << keep) - 1 };
        let bits = (bits << 1 | bit) & mask;
        (bits, (filled + 1).min(keep as u8))
    }

    /// Placing `bit` at the current index completes the pattern when the
    /// current index is its lowest position.
    fn completes(&self, (bits, filled): Window, bit: u32) -> bool {
        if filled as usize + 1 < self.k {
            return false;
        }
        // `bits` holds ε_{i+k-1}..ε_{i+1} from high to low place; reading the
        // occurrence in increasing index order means ε_i comes first.
        let mut occurrence = bit;
        for j in 0..self.k - 1 {
            occurrence = occurrence << 1 | (bits >> j & 1);
        }
        occurrence == self.code
    }

    fn solve(
        &self,
        i: usize,
        rem: u64,
        window: Window,
        memo: &mut HashMap<(usize, u64, Window), u128>,
    ) -> Result<u128, LegalError> {
        if rem as u128 > self.prefix[i] {
            return Ok(0);
        }
        if rem == 0 && self.first_bit {
            // Only zeros remain, and a zero cannot start an occurrence.
            return Ok(1);
        }
        if let Some(&hit) = memo.get(&(i, rem, window)) {
            return Ok(hit);
        }
        if memo.len() >= self.node_budget {
            return Err(LegalError::BudgetExceeded(self.node_budget));
        }
        let mut total = 0u128;
        for bit in 0..2u32 {
            if bit == 1 && self.terms[i] > rem {
                continue;
            }
            if self.completes(window, bit) {
                continue;
            }
            let rem = rem - bit as u64 * self.terms[i];
            total += if i == 0 {
                (rem == 0) as u128
            } else {
                self.solve(i - 1, rem, self.push(window, bit), memo)?
            };
        }
        memo.insert((i, rem, window), total);
        Ok(total)
    }
}

/// Aggregate counts over all integers below `Z_L`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionCountReport {
    pub length: usize,
    /// Legal strings of length `L`.
    #[serde(serialize_with = "crate::output::biguint_as_string")]
    pub d_strings: BigUint,
    /// `Σ_{k < Z_L} d(k)`, strings over `ε_0..ε_{L-1}`.
    #[serde(serialize_with = "crate::output::biguint_as_string")]
    pub d_sum_d: BigUint,
    /// Same sum through [`count_decompositions`] per value, when small enough.
    #[serde(serialize_with = "serialize_opt_biguint")]
    pub d_sum_search: Option<BigUint>,
    #[serde(serialize_with = "crate::output::display_as_string")]
    pub average_d: BigRational,
    #[serde(serialize_with = "crate::output::biguint_as_string")]
    pub second_moment: BigUint,
    /// `D(l) / D(l-1)` for `l = 2..=L`, using `D(l) = Σ_{k < Z_l} d(k)`.
    #[serde(serialize_with = "crate::output::vec_f64_as_f17")]
    pub growth_ratio_series: Vec<f64>,
    /// `d(k)` for `k < Z_L`.
    #[serde(skip)]
    pub d_values: Vec<u128>,
}

fn serialize_opt_biguint<S: serde::Serializer>(
    x: &Option<BigUint>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => serializer.serialize_str(&v.to_string()),
        None => serializer.serialize_none(),
    }
}

impl DecompositionCountReport {
    pub fn average_d_f64(&self) -> f64 {
        self.average_d.to_f64().unwrap_or(f64::NAN)
    }
}

/// Value up to which [`total_decompositions`] cross-checks the histogram
/// against per-value searches.
pub const SEARCH_CROSS_CHECK_LIMIT: u64 = 2_000;

/// Histogram of string values over every legal string of length `L`,
/// accumulated index by index from `ε_0` upward.
pub fn total_decompositions(
    table: &SequenceTable,
    length: usize,
    p: &ForbiddenPattern,
    value_budget: u64,
) -> Result<DecompositionCountReport, LegalError> {
    if length == 0 || length >= table.len() || length > MAX_CAP {
        return Err(LegalError::CapOutOfRange(length));
    }
    let terms: Vec<u64> = (0..=length)
        .map(|i| table.term_u64(i))
        .collect::<Option<_>>()
        .ok_or(LegalError::TooLarge)?;
    let max_value: u64 = terms[..length].iter().sum();
    if max_value >= value_budget {
        return Err(LegalError::ValueBudgetExceeded {
            needed: max_value.to_string(),
            budget: value_budget,
        });
    }
    let k = p.len();
    let keep = k - 1;
    let mask = if keep == 0 { 0 } else { (1u32 << keep) - 1 };
    let code = p.code();
    // state: (recent bits with the newest in the low place, filled) -> value histogram
    let mut states: BTreeMap<(u32, usize), Vec<u128>> = BTreeMap::new();
    states.insert((0, 0), vec![1]);
    let mut d_sums: Vec<u128> = Vec::with_capacity(length);
    let mut hist = Vec::new();
    for (i, &z) in terms[..length].iter().enumerate() {
        let mut next: BTreeMap<(u32, usize), Vec<u128>> = BTreeMap::new();
        for (&(bits, filled), values) in &states {
            for bit in 0..2u32 {
                let full = bits << 1 | bit;
                if filled == keep && full == code {
                    continue;
                }
                let key = (full & mask, (filled + 1).min(keep));
                let shift = if bit == 1 { z as usize } else { 0 };
                let slot = next.entry(key).or_default();
                if slot.len() < values.len() + shift {
                    slot.resize(values.len() + shift, 0);
                }
                for (v, &c) in values.iter().enumerate() {
                    slot[v + shift] += c;
                }
            }
        }
        states = next;
        hist = merged(&states);
        let bound = terms[i + 1] as usize;
        d_sums.push(hist.iter().take(bound).sum());
    }
    let z_l = terms[length] as usize;
    let d_values: Vec<u128> = (0..z_l)
        .map(|v| hist.get(v).copied().unwrap_or(0))
        .collect();
    let d_sum_d: u128 = d_values.iter().sum();
    let second_moment: BigUint = d_values.iter().map(|&d| BigUint::from(d) * d).sum();
    let d_strings = count_legal_strings(length, p);
    let d_sum_search = if terms[length] <= SEARCH_CROSS_CHECK_LIMIT {
        let mut sum = BigUint::zero();
        for v in 0..terms[length] {
            sum += count_decompositions(table, &BigUint::from(v), p, length - 1)?;
        }
        Some(sum)
    } else {
        None
    };
    let growth_ratio_series = d_sums
        .windows(2)
        .map(|w| w[1] as f64 / w[0] as f64)
        .collect();
    Ok(DecompositionCountReport {
        length,
        d_strings,
        d_sum_d: BigUint::from(d_sum_d),
        d_sum_search,
        average_d: BigRational::new(BigInt::from(d_sum_d), BigInt::from(z_l)),
        second_moment,
        growth_ratio_series,
        d_values,
    })
}

fn merged(states: &BTreeMap<(u32, usize), Vec<u128>>) -> Vec<u128> {
    let len = states.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![0u128; len];
    for values in states.values() {
        for (v, &c) in values.iter().enumerate() {
            out[v] += c;
        }
    }
    out
}

/// `count(L) / count(L - 1)` for legal strings.
pub fn string_growth_ratio(length: usize, p: &ForbiddenPattern) -> f64 {
    let counts = legal_string_counts(length, p);
    let a = counts[length].to_f64().unwrap_or(f64::NAN);
    let b = counts[length.saturating_sub(1)]
        .to_f64()
        .unwrap_or(f64::NAN);
    a / b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{generate_sequence, ValidatedSpec};

    fn table() -> SequenceTable {
        generate_sequence(&ValidatedSpec::lagonacci(), 80)
    }

    fn s(text: &str) -> CoefficientString {
        text.parse().unwrap()
    }

    fn brute_count(length: usize, p: &ForbiddenPattern) -> u64 {
        (0u32..1 << length)
            .filter(|&mask| {
                let bits = (0..length).map(|i| mask >> i & 1 == 1).collect();
                is_legal(&CoefficientString { bits }, p)
            })
            .count() as u64
    }

    #[test]
    fn legality_examples() {
        let p = ForbiddenPattern::lagonacci();
        assert!(!is_legal(&s("1100"), &p));
        assert!(is_legal(&s(""), &p));
        assert!(!is_legal(&s("10101100"), &p));
        assert!(is_legal(&s("1010"), &p));
        assert!(is_legal(&s("0011"), &p));
    }

    #[test]
    fn pattern_parsing() {
        assert_eq!(
            "1100".parse::<ForbiddenPattern>().unwrap(),
            ForbiddenPattern::lagonacci()
        );
        assert!("".parse::<ForbiddenPattern>().is_err());
        assert!("1120".parse::<ForbiddenPattern>().is_err());
        assert_eq!(ForbiddenPattern::lagonacci().to_string(), "1100");
    }

    #[test]
    fn string_count_examples() {
        let p = ForbiddenPattern::lagonacci();
        assert_eq!(count_legal_strings(0, &p), BigUint::from(1u32));
        assert_eq!(count_legal_strings(4, &p), BigUint::from(15u32));
        assert_eq!(count_legal_strings(5, &p), BigUint::from(28u32));
        assert_eq!(count_legal_strings(6, &p), BigUint::from(52u32));
    }

    #[test]
    fn string_counts_match_brute_force() {
        for pattern in ["1100", "11", "1", "0", "101", "0110"] {
            let p: ForbiddenPattern = pattern.parse().unwrap();
            let dp = legal_string_counts(16, &p);
            for (length, count) in dp.iter().enumerate() {
                assert_eq!(
                    count,
                    &BigUint::from(brute_count(length, &p)),
                    "{pattern} L={length}"
                );
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let t = table();
        let p = ForbiddenPattern::lagonacci();
        let d = |n: u32, cap| count_decompositions(&t, &BigUint::from(n), &p, cap).unwrap();
        assert_eq!(d(0, 10), BigUint::from(1u32));
        assert_eq!(d(4, 10), BigUint::from(2u32));
        assert_eq!(d(3, 0), BigUint::zero());
    }

    fn oracle_counts(t: &SequenceTable, p: &ForbiddenPattern, cap: usize) -> HashMap<u64, u64> {
        let mut out = HashMap::new();
        for mask in 0u32..1 << (cap + 1) {
            let bits: Vec<bool> = (0..=cap).map(|i| mask >> i & 1 == 1).collect();
            if !is_legal(&CoefficientString { bits: bits.clone() }, p) {
                continue;
            }
            let value: u64 = (0..=cap)
                .filter(|&i| bits[i])
                .map(|i| t.term_u64(i).unwrap())
                .sum();
            *out.entry(value).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn search_matches_subset_enumeration() {
        let t = table();
        let p = ForbiddenPattern::lagonacci();
        for cap in [5, 9, 12] {
            let oracle = oracle_counts(&t, &p, cap);
            let top: u64 = (0..=cap).map(|i| t.term_u64(i).unwrap()).sum();
            for v in 0..=top + 2 {
                let got = count_decompositions(&t, &BigUint::from(v), &p, cap).unwrap();
                let want = oracle.get(&v).copied().unwrap_or(0);
                assert_eq!(got, BigUint::from(want), "cap {cap} value {v}");
            }
        }
    }

    #[test]
    fn search_respects_budget() {
        let t = table();
        let p = ForbiddenPattern::lagonacci();
        let err = count_decompositions_with_budget(&t, &BigUint::from(5000u32), &p, 30, 5);
        assert_eq!(err, Err(LegalError::BudgetExceeded(5)));
    }

    #[test]
    fn totals_small_lengths() {
        let t = table();
        let p = ForbiddenPattern::lagonacci();
        let r1 = total_decompositions(&t, 1, &p, DEFAULT_VALUE_BUDGET).unwrap();
        assert_eq!(r1.d_strings, BigUint::from(2u32));
        assert_eq!(r1.d_sum_d, BigUint::from(2u32));
        let r5 = total_decompositions(&t, 5, &p, DEFAULT_VALUE_BUDGET).unwrap();
        assert_eq!(r5.d_strings, BigUint::from(28u32));
        assert_eq!(r5.d_sum_search.as_ref(), Some(&r5.d_sum_d));
    }

    #[test]
    fn histogram_mass_equals_string_count() {
        let t = table();
        let p = ForbiddenPattern::lagonacci();
        for length in [3, 8, 14] {
            let oracle = oracle_counts(&t, &p, length - 1);
            let mass: u64 = oracle.values().sum();
            assert_eq!(count_legal_strings(length, &p), BigUint::from(mass));
            let r = total_decompositions(&t, length, &p, DEFAULT_VALUE_BUDGET).unwrap();
            for (v, &d) in r.d_values.iter().enumerate() {
                assert_eq!(d as u64, oracle.get(&(v as u64)).copied().unwrap_or(0));
            }
            assert_eq!(r.d_sum_search.as_ref(), Some(&r.d_sum_d));
        }
    }
}
