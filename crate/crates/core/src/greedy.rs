//! Greedy decompositions: repeatedly subtract the term with the largest index
//! not exceeding the remainder.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::recurrence::SequenceTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("table too small: largest cached term {largest} does not exceed {value}")]
    TableTooSmall { largest: String, value: String },
    /// The greedy choice would reuse an index that was already taken, so the
    /// summand indices would not strictly decrease.
    #[error("greedy step at index {index} is not strictly below the previous summand")]
    RepeatedIndex { index: usize },
}

/// Greedy summand indices of one integer, strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub indices: Vec<usize>,
    #[serde(serialize_with = "crate::output::biguint_as_string")]
    pub source_value: BigUint,
}

impl Decomposition {
    pub fn summand_count(&self) -> usize {
        self.indices.len()
    }

    pub fn gaps(&self) -> GapList {
        gap_list(self)
    }

    pub fn first_index(&self) -> Option<usize> {
        self.indices.first().copied()
    }
}

/// Differences `r_{j-1} - r_j` of consecutive summand indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapList {
    pub gaps: Vec<usize>,
}

pub fn greedy_decompose(
    table: &SequenceTable,
    m: &BigUint,
) -> Result<Decomposition, DecomposeError> {
    ensure_covers(table, m)?;
    if let Some(small) = m.to_u64() {
        if small < table.small_terms().last().copied().unwrap_or(0) {
            let mut indices = Vec::new();
            greedy_indices_u64(table, small, &mut indices)?;
            return Ok(Decomposition {
                indices,
                source_value: m.clone(),
            });
        }
    }
    let mut indices: Vec<usize> = Vec::new();
    let mut rem = m.clone();
    while !rem.is_zero() {
        // Z_0 = 1, so some index always qualifies.
        let j = table
            .largest_index_at_most(&rem)
            .expect("Z_0 = 1 bounds every positive remainder");
        if let Some(&prev) = indices.last() {
            if j >= prev {
                return Err(DecomposeError::RepeatedIndex { index: j });
            }
        }
        rem -= table.term(j);
        indices.push(j);
    }
    Ok(Decomposition {
        indices,
        source_value: m.clone(),
    })
}

fn ensure_covers(table: &SequenceTable, m: &BigUint) -> Result<(), DecomposeError> {
    let largest = table.terms().last().expect("tables are never empty");
    if largest <= m {
        return Err(DecomposeError::TableTooSmall {
            largest: largest.to_string(),
            value: m.to_string(),
        });
    }
    Ok(())
}

/// Greedy indices for a `u64` value, written into `out` (cleared first).
///
/// The caller guarantees that `m` is below the last `u64`-representable term.
pub(crate) fn greedy_indices_u64(
    table: &SequenceTable,
    m: u64,
    out: &mut Vec<usize>,
) -> Result<(), DecomposeError> {
    out.clear();
    let mut rem = m;
    let mut below = usize::MAX;
    while rem > 0 {
        let j = table
            .largest_small_index_below(rem, usize::MAX)
            .expect("Z_0 = 1 bounds every positive remainder");
        if j >= below {
            return Err(DecomposeError::RepeatedIndex { index: j });
        }
        rem -= table.small_terms()[j];
        out.push(j);
        below = j;
    }
    Ok(())
}

/// Summand count of a `u64` value; the fast path used by interval scans.
pub(crate) fn summand_count_u64(table: &SequenceTable, m: u64) -> Result<usize, DecomposeError> {
    let terms = table.small_terms();
    let mut rem = m;
    let mut below = usize::MAX;
    let mut k = 0;
    while rem > 0 {
        let j = table
            .largest_small_index_below(rem, usize::MAX)
            .expect("Z_0 = 1 bounds every positive remainder");
        if j >= below {
            return Err(DecomposeError::RepeatedIndex { index: j });
        }
        rem -= terms[j];
        below = j;
        k += 1;
    }
    Ok(k)
}

pub fn summand_count(d: &Decomposition) -> usize {
    d.indices.len()
}

pub fn gap_list(d: &Decomposition) -> GapList {
    GapList {
        gaps: d.indices.windows(2).map(|w| w[0] - w[1]).collect(),
    }
}

/// Outcome of checking the prefix property on `[Z_N, Z_{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixReport {
    pub n: usize,
    #[serde(serialize_with = "crate::output::biguint_as_string")]
    pub interval_len: BigUint,
    pub exhaustive: bool,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
}

impl PrefixReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Interval size up to which [`verify_prefix_property`] scans every integer.
pub const PREFIX_EXHAUSTIVE_LIMIT: u64 = 1_000_000;
const PREFIX_SAMPLES: u64 = 100_000;

/// Checks that every `m` in `[Z_N, Z_{N+1})` has first greedy summand `Z_N`
/// and a remainder below `Z_{N+1} - Z_N` that decomposes over indices `< N`.
pub fn verify_prefix_property(
    table: &SequenceTable,
    n: usize,
) -> Result<PrefixReport, DecomposeError> {
    let lo = table.term(n).clone();
    let hi = table
        .get(n + 1)
        .cloned()
        .ok_or_else(|| DecomposeError::TableTooSmall {
            largest: table.term(table.top_index()).to_string(),
            value: lo.to_string(),
        })?;
    let width = if hi > lo { &hi - &lo } else { BigUint::zero() };
    let mut report = PrefixReport {
        n,
        interval_len: width.clone(),
        exhaustive: true,
        checked: 0,
        passed: 0,
        failed: 0,
    };
    if width.is_zero() {
        return Ok(report);
    }
    let mut check = |m: &BigUint| -> Result<(), DecomposeError> {
        let d = greedy_decompose(table, m)?;
        let ok = d.first_index() == Some(n)
            && d.indices[1..].iter().all(|&i| i < n)
            && (m - &lo) < width;
        report.checked += 1;
        if ok {
            report.passed += 1;
        } else {
            report.failed += 1;
        }
        Ok(())
    };
    match width.to_u64().filter(|&w| w <= PREFIX_EXHAUSTIVE_LIMIT) {
        Some(w) => {
            for offset in 0..w {
                check(&(&lo + offset))?;
            }
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..PREFIX_SAMPLES {
                let offset = crate::ensemble::uniform_below(&mut rng, &width);
                check(&(&lo + offset))?;
            }
            report.exhaustive = false;
        }
    }
    Ok(report)
}
