//! Zero linear recurrences: validation, exact term generation and
//! dominant-root data for the characteristic polynomial.
//!
//! A recurrence of order `L` is `Z_{n+1} = c_1 Z_n + c_2 Z_{n-1} + ... + c_L Z_{n+1-L}`
//! with `c_1 = 0`. Terms are kept as [`BigUint`]; only the root data is
//! floating point.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::IntPolynomial;

/// Default absolute tolerance used when polishing the dominant root.
pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("recurrence has no coefficients")]
    EmptyRecurrence,
    #[error("leading coefficient c_1 must be 0, got {0}")]
    NonZeroLeadingCoefficient(u64),
    #[error("trailing coefficient c_L must be positive")]
    ZeroTrailingCoefficient,
    #[error("bad initial terms: {0}")]
    BadInitialTerms(String),
    #[error("sequence does not grow past {0} within {1} terms")]
    NonGrowing(String, usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("no real root greater than 1 was found")]
    NoDominantRoot,
    #[error(
        "dominant root {lambda1} is not separated from the remaining roots (modulus bound {bound})"
    )]
    AmbiguousDominance { lambda1: f64, bound: f64 },
}

/// Coefficients and initial terms of a recurrence, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZlrrSpec {
    coefficients: Vec<u64>,
    initial_terms: Vec<BigUint>,
}

impl ZlrrSpec {
    pub fn new<I, T>(coefficients: Vec<u64>, initial_terms: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigUint>,
    {
        ZlrrSpec {
            coefficients,
            initial_terms: initial_terms.into_iter().map(Into::into).collect(),
        }
    }

    /// `Z_{n+1} = Z_{n-1} + Z_{n-2}` with `Z_0, Z_1, Z_2 = 1, 2, 3`.
    pub fn lagonacci() -> Self {
        ZlrrSpec::new(vec![0, 1, 1], [1u32, 2, 3])
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn initial_terms(&self) -> &[BigUint] {
        &self.initial_terms
    }
}

impl fmt::Display for ZlrrSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.coefficients.iter().map(u64::to_string).collect();
        let init: Vec<String> = self.initial_terms.iter().map(BigUint::to_string).collect();
        write!(f, "coeffs={} init={}", coeffs.join(","), init.join(","))
    }
}

/// A [`ZlrrSpec`] that passed [`validate_spec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedSpec(ZlrrSpec);

impl ValidatedSpec {
    pub fn spec(&self) -> &ZlrrSpec {
        &self.0
    }

    pub fn lagonacci() -> Self {
        validate_spec(ZlrrSpec::lagonacci()).expect("built-in recurrence is valid")
    }

    /// True when the recurrence is exactly `Z_{n+1} = Z_{n-1} + Z_{n-2}`.
    pub fn is_lagonacci_shaped(&self) -> bool {
        self.0.coefficients == [0, 1, 1]
    }
}

impl std::ops::Deref for ValidatedSpec {
    type Target = ZlrrSpec;
    fn deref(&self) -> &ZlrrSpec {
        &self.0
    }
}

pub fn validate_spec(spec: ZlrrSpec) -> Result<ValidatedSpec, SpecError> {
    let (first, last) = match (spec.coefficients.first(), spec.coefficients.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(SpecError::EmptyRecurrence),
    };
    if first != 0 {
        return Err(SpecError::NonZeroLeadingCoefficient(first));
    }
    if last == 0 {
        return Err(SpecError::ZeroTrailingCoefficient);
    }
    if spec.initial_terms.len() < spec.order() {
        return Err(SpecError::BadInitialTerms(format!(
            "need at least {} initial terms, got {}",
            spec.order(),
            spec.initial_terms.len()
        )));
    }
    if !spec.initial_terms[0].is_one() {
        return Err(SpecError::BadInitialTerms(format!(
            "Z_0 must be 1, got {}",
            spec.initial_terms[0]
        )));
    }
    if let Some(pos) = spec.initial_terms.iter().position(Zero::is_zero) {
        return Err(SpecError::BadInitialTerms(format!(
            "initial terms must be positive, Z_{pos} = 0"
        )));
    }
    Ok(ValidatedSpec(spec))
}

/// Exact terms `Z_0..=Z_{n_max}` of a validated recurrence.
#[derive(Clone, Debug)]
pub struct SequenceTable {
    spec: ValidatedSpec,
    terms: Vec<BigUint>,
    strictly_increasing_from: usize,
    nondecreasing_from: usize,
    small: Vec<u64>,
}

pub fn generate_sequence(spec: &ValidatedSpec, n_max: usize) -> SequenceTable {
    let mut terms: Vec<BigUint> = spec.initial_terms.clone();
    terms.truncate(n_max + 1);
    while terms.len() <= n_max {
        let next = next_term(&terms, spec.coefficients());
        terms.push(next);
    }
    SequenceTable::from_terms(spec.clone(), terms)
}

fn next_term(terms: &[BigUint], coefficients: &[u64]) -> BigUint {
    let n = terms.len() - 1;
    coefficients
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| &terms[n - i] * c)
        .sum()
}

impl SequenceTable {
    fn from_terms(spec: ValidatedSpec, terms: Vec<BigUint>) -> Self {
        let last = terms.len().saturating_sub(1);
        let mut strictly_increasing_from = last;
        while strictly_increasing_from > 0
            && terms[strictly_increasing_from] > terms[strictly_increasing_from - 1]
        {
            strictly_increasing_from -= 1;
        }
        let mut nondecreasing_from = last;
        while nondecreasing_from > 0 && terms[nondecreasing_from] >= terms[nondecreasing_from - 1] {
            nondecreasing_from -= 1;
        }
        let small = terms.iter().map_while(ToPrimitive::to_u64).collect();
        SequenceTable {
            spec,
            terms,
            strictly_increasing_from,
            nondecreasing_from,
            small,
        }
    }

    /// Smallest table with a strictly increasing tail whose last term
    /// exceeds `bound`, extended by `margin` further terms.
    pub fn covering(
        spec: &ValidatedSpec,
        bound: &BigUint,
        margin: usize,
    ) -> Result<SequenceTable, SpecError> {
        const MAX_TERMS: usize = 1 << 20;
        let mut terms: Vec<BigUint> = spec.initial_terms.clone();
        loop {
            if terms.len() > MAX_TERMS {
                return Err(SpecError::NonGrowing(bound.to_string(), MAX_TERMS));
            }
            let increasing_tail = terms.len() > 2 * spec.order()
                && terms
                    .windows(2)
                    .rev()
                    .take(spec.order())
                    .all(|w| w[1] > w[0]);
            if increasing_tail && terms.last().is_some_and(|t| t > bound) {
                break;
            }
            let next = next_term(&terms, spec.coefficients());
            terms.push(next);
        }
        for _ in 0..margin {
            let next = next_term(&terms, spec.coefficients());
            terms.push(next);
        }
        Ok(SequenceTable::from_terms(spec.clone(), terms))
    }

    pub fn spec(&self) -> &ValidatedSpec {
        &self.spec
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    pub fn term(&self, n: usize) -> &BigUint {
        &self.terms[n]
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.terms.get(n)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn top_index(&self) -> usize {
        self.terms.len() - 1
    }

    /// Index after which every cached step strictly increases.
    pub fn strictly_increasing_from(&self) -> usize {
        self.strictly_increasing_from
    }

    /// Index after which every cached step is non-decreasing.
    pub fn nondecreasing_from(&self) -> usize {
        self.nondecreasing_from
    }

    /// Indices `n` with `Z_{n+1} = Z_n`.
    pub fn duplicate_indices(&self) -> Vec<usize> {
        self.terms
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == w[1])
            .map(|(i, _)| i)
            .collect()
    }

    /// Leading prefix of the table whose terms fit in a `u64`.
    pub fn small_terms(&self) -> &[u64] {
        &self.small
    }

    pub fn term_u64(&self, n: usize) -> Option<u64> {
        self.small.get(n).copied()
    }

    /// `Z_{n+1} - Z_n` as a signed integer.
    pub fn step(&self, n: usize) -> BigInt {
        BigInt::from(self.terms[n + 1].clone()) - BigInt::from(self.terms[n].clone())
    }

    /// Checks the recurrence identity at every cached index.
    pub fn satisfies_recurrence(&self) -> bool {
        let order = self.spec.order();
        (order..self.terms.len())
            .all(|n| self.terms[n] == next_term(&self.terms[..n], self.spec.coefficients()))
    }

    /// Largest index whose term is at most `value`, searching the whole table.
    pub fn largest_index_at_most(&self, value: &BigUint) -> Option<usize> {
        let start = self.nondecreasing_from;
        let tail = &self.terms[start..];
        let count = tail.partition_point(|t| t <= value);
        if count > 0 {
            return Some(start + count - 1);
        }
        (0..start).rev().find(|&i| &self.terms[i] <= value)
    }

    /// `u64` variant of [`largest_index_at_most`](Self::largest_index_at_most)
    /// restricted to indices below `below`. Valid only when the table's
    /// `u64` prefix contains a term greater than `value`.
    pub(crate) fn largest_small_index_below(&self, value: u64, below: usize) -> Option<usize> {
        let below = below.min(self.small.len());
        let start = self.nondecreasing_from.min(below);
        let tail = &self.small[start..below];
        let count = tail.partition_point(|&t| t <= value);
        if count > 0 {
            return Some(start + count - 1);
        }
        (0..start).rev().find(|&i| self.small[i] <= value)
    }

    pub fn characteristic_polynomial(&self) -> IntPolynomial {
        characteristic_polynomial(&self.spec)
    }
}

/// `x^L - c_1 x^{L-1} - ... - c_L`.
pub fn characteristic_polynomial(spec: &ZlrrSpec) -> IntPolynomial {
    let order = spec.order();
    let mut coefficients = vec![BigInt::zero(); order + 1];
    coefficients[order] = BigInt::one();
    for (i, &c) in spec.coefficients().iter().enumerate() {
        // c_{i+1} multiplies x^{L-1-i}
        coefficients[order - 1 - i] = -BigInt::from(c);
    }
    IntPolynomial::new(coefficients)
}

/// Dominant real root of a characteristic polynomial and derived constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootInfo {
    pub lambda1: f64,
    pub binet_a: f64,
    pub subdominant_modulus_bound: f64,
    pub tolerance: f64,
}

impl RootInfo {
    pub fn log_lambda(&self) -> f64 {
        self.lambda1.ln()
    }
}

pub fn dominant_root(poly: &IntPolynomial, tol: f64) -> Result<RootInfo, RootError> {
    let degree = poly.degree().ok_or(RootError::NoDominantRoot)?;
    if degree == 0 {
        return Err(RootError::NoDominantRoot);
    }
    let coeffs: Vec<f64> = poly
        .coefficients()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    let lead = coeffs[degree];
    let cauchy = 1.0
        + coeffs[..degree]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let derivative = poly.derivative();
    let p = |x: f64| poly.eval_f64(x);

    let lambda1 = if degree == 1 {
        -coeffs[0] / coeffs[1]
    } else {
        // Scan downward from the Cauchy bound for the first sign change.
        const GRID: usize = 4096;
        let hi_end = cauchy + 1.0;
        let width = (hi_end - 1.0) / GRID as f64;
        let mut hi = hi_end;
        let mut bracket = None;
        for step in 1..=GRID {
            let lo = hi_end - width * step as f64;
            let (plo, phi) = (p(lo), p(hi));
            if plo == 0.0 {
                bracket = Some((lo, lo));
                break;
            }
            if plo.signum() != phi.signum() {
                bracket = Some((lo, hi));
                break;
            }
            hi = lo;
        }
        let (mut lo, mut hi) = bracket.ok_or(RootError::NoDominantRoot)?;
        while hi - lo > tol.max(f64::EPSILON * hi) && lo < hi {
            let mid = 0.5 * (lo + hi);
            if p(mid) == 0.0 {
                lo = mid;
                hi = mid;
            } else if p(mid).signum() == p(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..8 {
            let d = derivative.eval_f64(x);
            if d == 0.0 {
                break;
            }
            let next = x - p(x) / d;
            if (next - x).abs() <= f64::EPSILON * x.abs() {
                x = next;
                break;
            }
            x = next;
        }
        x
    };

    if lambda1.is_nan() || lambda1 <= 1.0 {
        return Err(RootError::NoDominantRoot);
    }
    let dp = derivative.eval_f64(lambda1);
    let bound = deflated_modulus_bound(&coeffs, lambda1);
    if bound >= lambda1 - tol {
        return Err(RootError::AmbiguousDominance { lambda1, bound });
    }
    Ok(RootInfo {
        lambda1,
        binet_a: 1.0 / dp,
        subdominant_modulus_bound: bound,
        tolerance: tol,
    })
}

/// Upper bound on the moduli of the roots other than `root`.
///
/// Deflates by `x - root`, then tightens the Fujiwara bound with a few
/// Graeffe root-squaring steps: after `k` steps the bound `B` on the squared
/// roots gives `B^(1/2^k)` on the originals.
fn deflated_modulus_bound(coeffs: &[f64], root: f64) -> f64 {
    let degree = coeffs.len() - 1;
    if degree <= 1 {
        return 0.0;
    }
    // synthetic division, highest degree first
    let mut quotient = Vec::with_capacity(degree);
    let mut carry = 0.0;
    for &c in coeffs.iter().rev().take(degree) {
        carry = carry * root + c;
        quotient.push(carry);
    }
    quotient.reverse();
    let lead = *quotient.last().unwrap();
    let mut monic: Vec<f64> = quotient.iter().map(|c| c / lead).collect();

    let mut best = fujiwara_bound(&monic);
    for k in 1..=6 {
        monic = graeffe_step(&monic);
        let b = fujiwara_bound(&monic);
        best = best.min(b.powf(1.0 / f64::from(1u32 << k)));
    }
    best
}

/// Fujiwara bound for a monic polynomial (lowest degree first).
fn fujiwara_bound(monic: &[f64]) -> f64 {
    let n = monic.len() - 1;
    if n == 0 {
        return 0.0;
    }
    let mut best: f64 = 0.0;
    for j in 1..=n {
        let c = monic[n - j].abs();
        let c = if j == n { c / 2.0 } else { c };
        best = best.max(c.powf(1.0 / j as f64));
    }
    2.0 * best
}

/// One Graeffe step: returns the monic polynomial whose roots are the
/// squares of the roots of `monic`.
fn graeffe_step(monic: &[f64]) -> Vec<f64> {
    let n = monic.len() - 1;
    // q(x^2) = (-1)^n p(x) p(-x)
    let neg: Vec<f64> = monic
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
        .collect();
    let mut prod = vec![0.0; 2 * n + 1];
    for (i, a) in monic.iter().enumerate() {
        for (j, b) in neg.iter().enumerate() {
            prod[i + j] += a * b;
        }
    }
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let mut out: Vec<f64> = (0..=n).map(|i| sign * prod[2 * i]).collect();
    let lead = out[n];
    for c in &mut out {
        *c /= lead;
    }
    out
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits <= 1000 {
        return value.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top = (value >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `|Z_n - a λ^n| / λ^n`.
pub fn binet_residual(table: &SequenceTable, info: &RootInfo, n: usize) -> f64 {
    (normalized_term(table, info, n) - info.binet_a).abs()
}

/// `Z_n / λ^n`, the empirical leading coefficient at index `n`.
pub fn normalized_term(table: &SequenceTable, info: &RootInfo, n: usize) -> f64 {
    (ln_biguint(table.term(n)) - n as f64 * info.lambda1.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lagonacci_table(n_max: usize) -> SequenceTable {
        generate_sequence(&ValidatedSpec::lagonacci(), n_max)
    }

    #[test]
    fn lagonacci_validates() {
        assert!(validate_spec(ZlrrSpec::lagonacci()).is_ok());
    }

    #[test]
    fn fibonacci_is_not_a_zero_recurrence() {
        let err = validate_spec(ZlrrSpec::new(vec![1, 1], [1u32, 2])).unwrap_err();
        assert_eq!(err, SpecError::NonZeroLeadingCoefficient(1));
    }

    #[test]
    fn initial_term_must_be_one() {
        let err = validate_spec(ZlrrSpec::new(vec![0, 1, 1], [2u32, 3, 4])).unwrap_err();
        assert!(matches!(err, SpecError::BadInitialTerms(_)));
        let err = validate_spec(ZlrrSpec::new(vec![0, 1, 1], [1u32, 2])).unwrap_err();
        assert!(matches!(err, SpecError::BadInitialTerms(_)));
    }

    #[test]
    fn trailing_coefficient_must_be_positive() {
        let err = validate_spec(ZlrrSpec::new(vec![0, 1, 0], [1u32, 2, 3])).unwrap_err();
        assert_eq!(err, SpecError::ZeroTrailingCoefficient);
        assert_eq!(
            validate_spec(ZlrrSpec::new(vec![], [1u32])).unwrap_err(),
            SpecError::EmptyRecurrence
        );
    }

    #[test]
    fn lagonacci_terms() {
        let table = lagonacci_table(12);
        let expected: Vec<BigUint> = [1u32, 2, 3, 3, 5, 6, 8, 11, 14, 19, 25, 33, 44]
            .iter()
            .map(|&v| BigUint::from(v))
            .collect();
        assert_eq!(table.terms(), expected.as_slice());
        assert_eq!(table.strictly_increasing_from(), 3);
        assert_eq!(table.nondecreasing_from(), 0);
        assert_eq!(table.duplicate_indices(), vec![2]);
    }

    #[test]
    fn initial_terms_only() {
        let table = lagonacci_table(2);
        assert_eq!(table.len(), 3);
        assert_eq!(table.term(2), &BigUint::from(3u32));
    }

    #[test]
    fn order_four_recurrence_matches_direct_oracle() {
        let spec = validate_spec(ZlrrSpec::new(vec![0, 0, 1, 1], [1u32, 2, 3, 4])).unwrap();
        let table = generate_sequence(&spec, 6);
        let z: Vec<u64> = table.terms().iter().map(|t| t.to_u64().unwrap()).collect();
        // Z_{n+1} = Z_{n-2} + Z_{n-3}
        assert_eq!(z, vec![1, 2, 3, 4, 3, 5, 7]);
        assert!(table.satisfies_recurrence());
    }

    #[test]
    fn recurrence_identity_holds_on_long_table() {
        let table = lagonacci_table(400);
        assert!(table.satisfies_recurrence());
        assert!(table.term(400).bits() > 150);
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(
            characteristic_polynomial(&ZlrrSpec::lagonacci()).to_string(),
            "x^3 - x - 1"
        );
        assert_eq!(
            characteristic_polynomial(&ZlrrSpec::new(vec![0, 1], [1u32, 2])).to_string(),
            "x^2 - 1"
        );
        assert_eq!(
            characteristic_polynomial(&ZlrrSpec::new(vec![0, 0, 1, 1], [1u32, 2, 3, 4]))
                .to_string(),
            "x^4 - x - 1"
        );
    }

    #[test]
    fn plastic_ratio() {
        let info = dominant_root(&IntPolynomial::new([-1, -1, 0, 1]), 1e-12).unwrap();
        assert!((info.lambda1 - 1.3247180).abs() < 1e-6);
        assert!((info.binet_a - 0.234487).abs() < 1e-5);
        assert!(info.subdominant_modulus_bound < info.lambda1);
        let p = IntPolynomial::new([-1, -1, 0, 1]);
        let dp = p.derivative().eval_f64(info.lambda1).abs();
        assert!(p.eval_f64(info.lambda1).abs() <= 1e-12 * dp);
    }

    #[test]
    fn linear_polynomial_root_is_exact() {
        let info = dominant_root(&IntPolynomial::new([-2, 1]), 1e-12).unwrap();
        assert_eq!(info.lambda1, 2.0);
        assert_eq!(info.subdominant_modulus_bound, 0.0);
    }

    #[test]
    fn golden_ratio_against_bisection_oracle() {
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid - mid - 1.0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let info = dominant_root(&IntPolynomial::new([-1, -1, 1]), 1e-12).unwrap();
        assert!((info.lambda1 - lo).abs() < 1e-12);
        assert!((info.lambda1 - 1.6180340).abs() < 1e-6);
    }

    #[test]
    fn unit_root_is_not_dominant() {
        assert_eq!(
            dominant_root(&IntPolynomial::new([-1, 0, 1]), 1e-12),
            Err(RootError::NoDominantRoot)
        );
    }

    #[test]
    fn symmetric_roots_are_ambiguous() {
        // x^2 - 4 has roots +-2
        assert!(matches!(
            dominant_root(&IntPolynomial::new([-4, 0, 1]), 1e-12),
            Err(RootError::AmbiguousDominance { .. })
        ));
    }

    #[test]
    fn binet_residual_at_zero() {
        let table = lagonacci_table(50);
        let info = dominant_root(&table.characteristic_polynomial(), 1e-12).unwrap();
        let r0 = binet_residual(&table, &info, 0);
        assert!((r0 - (1.0 - 0.234487)).abs() < 1e-5);
    }

    #[test]
    fn binet_residual_is_non_increasing_on_decades() {
        let table = lagonacci_table(50);
        let info = dominant_root(&table.characteristic_polynomial(), 1e-12).unwrap();
        let r: Vec<f64> = [10, 20, 30, 40]
            .iter()
            .map(|&n| binet_residual(&table, &info, n))
            .collect();
        assert!(r.windows(2).all(|w| w[1] <= w[0]), "{r:?}");
        assert!(r[3] < r[0]);
    }

    #[test]
    fn doubling_recurrence_residual_pattern() {
        // Z_{n+1} = 2 Z_{n-1}: roots +-sqrt(2), so dominance is ambiguous.
        let spec = validate_spec(ZlrrSpec::new(vec![0, 2], [1u32, 2])).unwrap();
        let table = generate_sequence(&spec, 20);
        assert_eq!(table.term(20), &BigUint::from(1024u32));
        assert!(matches!(
            dominant_root(&table.characteristic_polynomial(), 1e-12),
            Err(RootError::AmbiguousDominance { .. })
        ));
    }

    #[test]
    fn covering_table_exceeds_bound() {
        let bound = BigUint::from(10u32).pow(30);
        let table = SequenceTable::covering(&ValidatedSpec::lagonacci(), &bound, 2).unwrap();
        assert!(table.terms().last().unwrap() > &bound);
        assert!(table.satisfies_recurrence());
    }

    #[test]
    fn covering_rejects_bounded_sequences() {
        let spec = validate_spec(ZlrrSpec::new(vec![0, 1], [1u32, 2])).unwrap();
        assert!(matches!(
            SequenceTable::covering(&spec, &BigUint::from(5u32), 0),
            Err(SpecError::NonGrowing(..))
        ));
    }

    #[test]
    fn largest_index_prefers_later_duplicates() {
        let table = lagonacci_table(20);
        assert_eq!(table.largest_index_at_most(&BigUint::from(3u32)), Some(3));
        assert_eq!(table.largest_index_at_most(&BigUint::from(0u32)), None);
        assert_eq!(table.largest_small_index_below(3, 3), Some(2));
        assert_eq!(table.largest_small_index_below(22, 99), Some(9));
    }

    #[test]
    fn ln_of_large_integer() {
        let v = BigUint::from(3u32).pow(2000);
        assert!((ln_biguint(&v) - 2000.0 * 3f64.ln()).abs() < 1e-9 * 2000.0);
    }
}
