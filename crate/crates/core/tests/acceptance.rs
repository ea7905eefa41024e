//! Acceptance suite: one PASS/FAIL line per criterion, with wall time.
//!
//! Runs as a plain binary (`harness = false`) so the lines always print.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use zlrr::ensemble::{self, CanonicalLaw, LocalStatistic, SamplingBudget, DEFAULT_EXACT_LIMIT};
use zlrr::greedy::greedy_decompose;
use zlrr::legal::{self, ForbiddenPattern, DEFAULT_NODE_BUDGET};
use zlrr::matrix::{self, TransferMatrix};
use zlrr::poly::IntPolynomial;
use zlrr::recurrence::{
    self, generate_sequence, SequenceTable, ValidatedSpec, DEFAULT_ROOT_TOLERANCE,
};
use zlrr::stats::{self, DistributionMethod, DEFAULT_ENUMERATION_BUDGET};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lagonacci(n: usize) -> SequenceTable {
    generate_sequence(&ValidatedSpec::lagonacci(), n)
}

fn c01_sequence() -> Outcome {
    let expected: [u64; 13] = [1, 2, 3, 3, 5, 6, 8, 11, 14, 19, 25, 33, 44];
    // Direct recurrence, written out independently of the library.
    let mut direct = vec![1u64, 2, 3];
    while direct.len() < 13 {
        let n = direct.len();
        direct.push(direct[n - 2] + direct[n - 3]);
    }
    let table = lagonacci(12);
    let got: Vec<u64> = (0..=12).map(|i| table.term_u64(i).unwrap()).collect();
    ensure(
        got == expected && direct == expected,
        format!("Z_0..Z_12 = {got:?}"),
    )
}

fn c02_roots() -> Outcome {
    let poly = IntPolynomial::new([-1i64, -1, 0, 1]);
    let info =
        recurrence::dominant_root(&poly, DEFAULT_ROOT_TOLERANCE).map_err(|e| e.to_string())?;
    let ok = (info.lambda1 - 1.324718).abs() <= 1e-5 && (info.binet_a - 0.234487).abs() <= 1e-5;
    ensure(
        ok,
        format!(
            "lambda1 = {:.9}, binet_a = {:.9}",
            info.lambda1, info.binet_a
        ),
    )
}

fn c03_greedy_soundness() -> Outcome {
    const LIMIT: u64 = 1_000_000;
    let table = SequenceTable::covering(&ValidatedSpec::lagonacci(), &BigUint::from(LIMIT), 2)
        .map_err(|e| e.to_string())?;
    let terms: Vec<u64> = (0..table.len())
        .map(|i| table.term_u64(i).unwrap())
        .collect();
    let bad: Vec<u64> = (0..=LIMIT)
        .into_par_iter()
        .filter(|&m| match greedy_decompose(&table, &BigUint::from(m)) {
            Ok(d) => {
                let sum: u64 = d.indices.iter().map(|&i| terms[i]).sum();
                sum != m || d.indices.windows(2).any(|w| w[0] <= w[1])
            }
            Err(_) => true,
        })
        .collect();
    ensure(
        bad.is_empty(),
        format!(
            "{} integers checked, {} failures (first: {:?})",
            LIMIT + 1,
            bad.len(),
            bad.first()
        ),
    )
}

fn c04_distribution_oracle() -> Outcome {
    let table = lagonacci(60);
    for n in 0..=30 {
        let dp = stats::exact_summand_distribution(&table, n, DistributionMethod::IntervalDp)
            .map_err(|e| e.to_string())?;
        let en = stats::exact_summand_distribution(
            &table,
            n,
            DistributionMethod::Enumerate {
                budget: DEFAULT_ENUMERATION_BUDGET,
            },
        )
        .map_err(|e| e.to_string())?;
        if dp != en {
            return Err(format!(
                "N = {n}: dp {:?} vs enumeration {:?}",
                dp.counts, en.counts
            ));
        }
    }
    Ok("N = 0..30 identical".into())
}

fn c05_mass() -> Outcome {
    let table = lagonacci(60);
    for n in 0..=40 {
        let dist = stats::exact_summand_distribution(&table, n, DistributionMethod::IntervalDp)
            .map_err(|e| e.to_string())?;
        let sum: BigUint = dist.counts.values().sum();
        if &sum != table.term(n) || &dist.total != table.term(n) {
            return Err(format!("N = {n}: sum {sum}, Z_N {}", table.term(n)));
        }
    }
    Ok("N = 0..40 sum to Z_N".into())
}

fn c06_clt_trend() -> Outcome {
    let table = lagonacci(60);
    let ks = |n| -> Result<f64, String> {
        let dist = stats::exact_summand_distribution(&table, n, DistributionMethod::IntervalDp)
            .map_err(|e| e.to_string())?;
        stats::ks_vs_gaussian(&dist).map_err(|e| e.to_string())
    };
    let (k10, k40) = (ks(10)?, ks(40)?);
    ensure(
        k40 < 0.2 && k40 < k10,
        format!("KS(10) = {k10:.6}, KS(40) = {k40:.6}"),
    )
}

fn c07_moment_linearity() -> Outcome {
    let table = lagonacci(60);
    let mut means = BTreeMap::new();
    for n in 20..=40 {
        let dist = stats::exact_summand_distribution(&table, n, DistributionMethod::IntervalDp)
            .map_err(|e| e.to_string())?;
        means.insert(
            n,
            stats::moments(&dist).map_err(|e| e.to_string())?.mean_f64(),
        );
    }
    let slope = |lo: usize| {
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            means.range(lo..).map(|(&n, &m)| (n as f64, m)).unzip();
        stats::linear_fit(&xs, &ys).slope
    };
    let (s20, s25) = (slope(20), slope(25));
    ensure(
        (s20 - s25).abs() < 0.01,
        format!(
            "slope[20,40] = {s20:.6}, slope[25,40] = {s25:.6} (stated 0.288675, formula 0.177009)"
        ),
    )
}

fn c08_gap_decay() -> Outcome {
    let table = lagonacci(60);
    let info =
        recurrence::dominant_root(&table.characteristic_polynomial(), DEFAULT_ROOT_TOLERANCE)
            .map_err(|e| e.to_string())?;
    let pooled = stats::exact_gap_distribution(&table, 35, DEFAULT_ENUMERATION_BUDGET)
        .map_err(|e| e.to_string())?;
    let fit = stats::fit_geometric_decay(&pooled, 2, 8).map_err(|e| e.to_string())?;
    // Diagnostic only: the same fit without gaps that end at index 0.
    let inner = stats::exact_gap_distribution_from(&table, 35, DEFAULT_ENUMERATION_BUDGET, 1)
        .map_err(|e| e.to_string())?;
    let inner_fit = stats::fit_geometric_decay(&inner, 2, 8).map_err(|e| e.to_string())?;
    let soft = (fit.rate - info.log_lambda()).abs() <= 0.1;
    ensure(
        fit.r_squared > 0.98 && fit.rate > 0.0,
        format!(
            "pooled R^2 = {:.6}, rate = {:.6} vs log lambda1 = {:.6} (soft check {}); bins {:?}; \
             lower index >= 1: R^2 = {:.6}, rate = {:.6}",
            fit.r_squared,
            fit.rate,
            info.log_lambda(),
            if soft { "within 0.1" } else { "outside 0.1" },
            fit.bins,
            inner_fit.r_squared,
            inner_fit.rate
        ),
    )
}

fn c09_legal_strings() -> Outcome {
    let p = ForbiddenPattern::lagonacci();
    let dp = legal::legal_string_counts(20, &p);
    for (length, count) in dp.iter().enumerate() {
        let brute = (0u32..1 << length)
            .filter(|mask| {
                let text: String = (0..length)
                    .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
                    .collect();
                !text.contains("1100")
            })
            .count();
        if count != &BigUint::from(brute) {
            return Err(format!("L = {length}: dp {count}, brute force {brute}"));
        }
    }
    ensure(
        dp[4] == BigUint::from(15u32) && dp[5] == BigUint::from(28u32),
        format!("L = 0..20 agree; L=4 -> {}, L=5 -> {}", dp[4], dp[5]),
    )
}

fn c10_transfer_matrix() -> Outcome {
    for n in 1..=6 {
        let identity: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let t = TransferMatrix::new(identity).map_err(|e| e.to_string())?;
        // (x - 1)^n by repeated multiplication.
        let mut coeffs: Vec<i64> = vec![1];
        for _ in 0..n {
            let mut next = vec![0i64; coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k] -= c;
                next[k + 1] += c;
            }
            coeffs = next;
        }
        if matrix::char_poly_exact(&t) != IntPolynomial::new(coeffs) {
            return Err(format!("identity {n}x{n}"));
        }
    }
    for lower in [
        vec![-1i64, -1, 0],
        vec![3, 0, -2, 5],
        vec![0, 0, 0, 0, 2, 1, -1, -2],
    ] {
        let t = TransferMatrix::companion(&lower).map_err(|e| e.to_string())?;
        let mut want = lower.clone();
        want.push(1);
        if matrix::char_poly_exact(&t) != IntPolynomial::new(want) {
            return Err(format!("companion {lower:?}"));
        }
    }
    let t = matrix::paper_matrix();
    let ones = vec![1i64; t.dim()];
    let twos = vec![2i64; t.dim()];
    if t.apply(&ones) != twos {
        return Err(format!("T*1 = {:?}", t.apply(&ones)));
    }
    let perron = matrix::perron_eigenvalue(&t, matrix::DEFAULT_PERRON_TOLERANCE)
        .map_err(|e| e.to_string())?;
    let report = matrix::char_poly_report(&t);
    ensure(
        (perron - 2.0).abs() <= 1e-9,
        format!(
            "perron = {perron:.12}; char poly {} vs {} -> {}",
            report.text,
            report.reference_text,
            if report.matches_reference {
                "match"
            } else {
                "mismatch"
            }
        ),
    )
}

fn c11_decomposition_counts() -> Outcome {
    let table = lagonacci(40);
    let p = ForbiddenPattern::lagonacci();
    let d0 =
        legal::count_decompositions(&table, &BigUint::zero(), &p, 0).map_err(|e| e.to_string())?;
    let cap4 = table.largest_index_at_most(&BigUint::from(4u32)).unwrap();
    let d4 = legal::count_decompositions(&table, &BigUint::from(4u32), &p, cap4)
        .map_err(|e| e.to_string())?;
    if d0 != BigUint::from(1u32) || d4 != BigUint::from(2u32) {
        return Err(format!("d(0) = {d0}, d(4) = {d4}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let targets: Vec<(usize, u64)> = (0..100)
        .map(|_| {
            let cap = rng.random_range(0..=20usize);
            let top: u64 = (0..=cap).map(|i| table.term_u64(i).unwrap()).sum();
            (cap, rng.random_range(0..=top))
        })
        .collect();
    let mut oracles: BTreeMap<usize, BTreeMap<u64, u64>> = BTreeMap::new();
    for &(cap, _) in &targets {
        oracles.entry(cap).or_insert_with(|| {
            let terms: Vec<u64> = (0..=cap).map(|i| table.term_u64(i).unwrap()).collect();
            let mut hist = BTreeMap::new();
            for mask in 0u32..1 << (cap + 1) {
                let text: String = (0..=cap)
                    .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
                    .collect();
                if text.contains("1100") {
                    continue;
                }
                let value: u64 = (0..=cap)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| terms[i])
                    .sum();
                *hist.entry(value).or_insert(0) += 1;
            }
            hist
        });
    }
    for &(cap, target) in &targets {
        let got = legal::count_decompositions(&table, &BigUint::from(target), &p, cap)
            .map_err(|e| e.to_string())?;
        let want = oracles[&cap].get(&target).copied().unwrap_or(0);
        if got != BigUint::from(want) {
            return Err(format!(
                "cap {cap}, N = {target}: search {got}, subsets {want}"
            ));
        }
    }
    Ok(format!(
        "d(0) = 1, d(4) = 2; 100 random targets agree ({} caps)",
        oracles.len()
    ))
}

fn c12_ensembles() -> Outcome {
    let table = lagonacci(200);
    let info =
        recurrence::dominant_root(&table.characteristic_polynomial(), DEFAULT_ROOT_TOLERANCE)
            .map_err(|e| e.to_string())?;
    let law = CanonicalLaw::from_table(&table, &info).map_err(|e| e.to_string())?;
    let stat = LocalStatistic::gap_at_least(2, 8);
    let budget = SamplingBudget {
        exact_limit: DEFAULT_EXACT_LIMIT,
        samples: 1_000_000,
    };
    let r = ensemble::compare_ensembles(&table, &stat, 25, law, budget, 1)
        .map_err(|e| e.to_string())?;
    ensure(
        r.micro.exact && r.canonical.n_samples == 1_000_000 && r.within_three_se,
        format!(
            "micro = {:.6} (exact), canonical = {:.6} +- {:.6}, |diff| = {:.6} ({:.2} se)",
            r.micro.value,
            r.canonical.value,
            r.canonical.std_error,
            r.abs_diff,
            r.abs_diff / r.combined_std_error
        ),
    )
}

fn c13_concentration() -> Outcome {
    let table = lagonacci(200);
    let info =
        recurrence::dominant_root(&table.characteristic_polynomial(), DEFAULT_ROOT_TOLERANCE)
            .map_err(|e| e.to_string())?;
    let p = ForbiddenPattern::lagonacci();
    let run =
        |l| ensemble::concentration_experiment(&table, &info, l, 200, 1, &p, DEFAULT_NODE_BUDGET);
    let a = run(20).map_err(|e| e.to_string())?;
    let b = run(30).map_err(|e| e.to_string())?;
    let (sa, sb) = (a.std_dev.unwrap_or(f64::NAN), b.std_dev.unwrap_or(f64::NAN));
    ensure(
        sb < sa,
        format!(
            "sd(20) = {sa:.6}, sd(30) = {sb:.6}; mean(20) = {:.6}, mean(30) = {:.6} vs log(2/lambda1) = {:.6}",
            a.mean.unwrap_or(f64::NAN),
            b.mean.unwrap_or(f64::NAN),
            a.k_reference
        ),
    )
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zlrr"))
}

fn run_binary(args: &[&str], workers: &str) -> Result<Vec<u8>, String> {
    let out = binary()
        .args(args)
        .env("ZLRR_WORKERS", workers)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn c14_report() -> Outcome {
    let raw = run_binary(&["report"], "4")?;
    let json: serde_json::Value = serde_json::from_slice(&raw).map_err(|e| e.to_string())?;
    let entries = json["entries"].as_array().ok_or("no entries array")?;
    let mut missing = Vec::new();
    for name in [
        "C1_value",
        "C1_formula",
        "C2",
        "gap_p0",
        "gap_p1",
        "gap_C",
        "alpha",
        "K",
    ] {
        let entry = entries.iter().find(|e| e["quantity"] == name);
        let ok = entry.is_some_and(|e| {
            let has_ref = e["paper_ref"].as_str().is_some_and(|s| !s.is_empty());
            let computed = !e["computed_value"].is_null() || e["verdict"] == "incomparable";
            has_ref && computed
        });
        if !ok {
            missing.push(name);
        }
    }
    let verdicts: Vec<String> = entries
        .iter()
        .map(|e| {
            format!(
                "{}={}",
                e["quantity"].as_str().unwrap_or("?"),
                e["verdict"].as_str().unwrap_or("?")
            )
        })
        .collect();
    ensure(
        missing.is_empty(),
        format!(
            "{} entries, missing/incomplete {missing:?}; {}",
            entries.len(),
            verdicts.join(" ")
        ),
    )
}

fn c15_determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let config = dir.join("run.conf");
    std::fs::write(&config, "seed = 7\nenum_budget = 100000000\n").map_err(|e| e.to_string())?;
    let config = config.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["seq", "--n", "60"],
        vec!["decompose", "--m", "123456789"],
        vec!["stats", "--n-min", "10", "--n-max", "40"],
        vec!["gaps", "--n", "35"],
        vec!["dtotal", "--length", "18"],
        vec!["matrix", "--source", "paper", "--charpoly", "--perron"],
        vec!["ensemble", "compare", "--n", "40", "--samples", "50000"],
        vec![
            "ensemble",
            "concentrate",
            "--length",
            "20",
            "--samples",
            "40",
        ],
        vec!["report"],
    ];
    for cmd in &commands {
        let mut args = vec!["--config", config];
        args.extend(cmd);
        let first = run_binary(&args, "4")?;
        let second = run_binary(&args, "4")?;
        let serial = run_binary(&args, "1")?;
        if first != second || first != serial {
            return Err(format!("{cmd:?} differs between runs"));
        }
    }
    Ok(format!(
        "{} commands byte-identical across repeats and worker counts",
        commands.len()
    ))
}

fn main() {
    let criteria: Vec<(&str, u64, Check)> = vec![
        ("sequence exactness", 1, c01_sequence),
        ("root constants", 1, c02_roots),
        ("greedy soundness", 60, c03_greedy_soundness),
        (
            "distribution oracle equivalence",
            30,
            c04_distribution_oracle,
        ),
        ("mass conservation", 60, c05_mass),
        ("CLT trend", 60, c06_clt_trend),
        ("moment linearity", 60, c07_moment_linearity),
        ("gap decay", 60, c08_gap_decay),
        ("legal-string oracle", 10, c09_legal_strings),
        ("transfer-matrix algebra", 5, c10_transfer_matrix),
        ("d(N) oracle equivalence", 60, c11_decomposition_counts),
        ("ensemble equivalence", 120, c12_ensembles),
        ("concentration trend", 180, c13_concentration),
        ("discrepancy report completeness", 60, c14_report),
        ("determinism", 120, c15_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (pass, detail) = match outcome {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; over the {limit} s limit")),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name} [{:.2}s]: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 15 criteria passed", 15 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
