//! The `symspec verify` invariant suite: exhaustive re-checks of every
//! identity and inequality the library is built on, over all symmetric
//! functions up to a requested n.
//!
//! Each check reports how many cases it covered, the worst margin it saw
//! (for inequality checks), and the first counterexample as a level string
//! if anything failed. Exact statements are compared with rational
//! arithmetic; only the reported margins are floats.

use crate::bounds::{bias_upper_bound, l1_upper_bound, noise_inequality_report, r_lower_bound};
use crate::error::{Error, Result};
use crate::exact::{binomial_row, exact_int, format_exact, log2_rational, rational_to_f64, Exact};
use crate::function::SymmetricFunction;
use crate::pdt::{build_pdt, eval_pdt, l1_size_certificate, leaf_count};
use crate::spectrum::{brute_force_spectrum, level_spectrum, spectral_norm, spectral_summary};
use crate::structure::{derivative_energy, r_functional, r_parameters};
use num::{BigInt, BigRational, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// Exhaustive identity checks are capped here (corpus size 2^(n+1)).
pub const VERIFY_N_CAP: usize = 12;

/// Outcome of one checked statement.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Individual cases covered (functions, inputs, or indicators,
    /// whichever the statement quantifies over).
    pub cases: u64,
    /// Smallest slack observed, for inequality checks; omitted for exact
    /// equalities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<f64>,
    pub pass: bool,
    /// First violating function, as a level string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

// Shared accumulator: counts cases, tracks the minimum margin and the
// first counterexample in iteration order.
struct Acc {
    cases: u64,
    worst: Option<f64>,
    counterexample: Option<String>,
}

impl Acc {
    fn new() -> Self {
        Acc {
            cases: 0,
            worst: None,
            counterexample: None,
        }
    }

    fn case(&mut self, margin: Option<f64>, ok: bool, f: &SymmetricFunction) {
        self.cases += 1;
        if let Some(m) = margin {
            self.worst = Some(self.worst.map_or(m, |w| w.min(m)));
        }
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(f.pattern_string());
        }
    }

    fn finish(self, name: &str, detail: impl Into<String>) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            cases: self.cases,
            worst_margin: self.worst,
            pass: self.counterexample.is_none(),
            counterexample: self.counterexample,
            detail: detail.into(),
        }
    }
}

fn for_all(n_max: usize, mut body: impl FnMut(&SymmetricFunction)) {
    for n in 1..=n_max {
        for f in SymmetricFunction::enumerate(n) {
            body(&f);
        }
    }
}

fn check_parseval(n_max: usize) -> CheckResult {
    let mut acc = Acc::new();
    for_all(n_max, |f| {
        let defect = spectral_summary(f).parseval_defect;
        acc.case(None, defect.is_zero(), f);
    });
    acc.finish(
        "parseval_defect_zero",
        "sum_k C(n,k) f_k^2 equals 1 exactly for every function",
    )
}

fn check_energy_identity(n_max: usize) -> CheckResult {
    let mut acc = Acc::new();
    for_all(n_max, |f| {
        let energy = derivative_energy(f);
        let r = r_functional(&level_spectrum(f));
        acc.case(None, energy == exact_int(8) * &r, f);
    });
    acc.finish(
        "derivative_energy_identity",
        "total pairwise derivative energy equals 8 R(f) exactly",
    )
}

fn check_norm_window_bound(n_max: usize) -> (CheckResult, CheckResult) {
    let mut bounded = Acc::new();
    let mut small = Acc::new();
    let mut max_small_norm = BigRational::zero();
    for_all(n_max, |f| {
        let rep = r_parameters(f);
        let l1 = spectral_norm(&level_spectrum(f));
        if rep.r >= 1 {
            let bound = l1_upper_bound(f.n(), rep.r)
                .expect("1 <= r <= n/2 is always in the bound's domain");
            let margin = bound - log2_rational(&l1);
            bounded.case(Some(margin), margin >= 0.0, f);
        } else {
            if l1 > max_small_norm {
                max_small_norm = l1.clone();
            }
            let margin = 8.0 - rational_to_f64(&l1);
            small.case(Some(margin), l1 <= exact_int(8), f);
        }
    });
    (
        bounded.finish(
            "spectral_norm_window_bound",
            "log2 of the spectral norm is at most 2 r log2(n/r) + 3 whenever r >= 1",
        ),
        small.finish(
            "small_radius_norm_cap",
            format!(
                "functions with r <= 1 keep spectral norm at most 8 \
                 (largest observed: {})",
                format_exact(&max_small_norm)
            ),
        ),
    )
}

fn check_r_lower_bound(n_max: usize) -> CheckResult {
    let mut acc = Acc::new();
    for_all(n_max, |f| {
        let rep = r_parameters(f);
        // Theorem scope: a pattern that fits within half the cube, with
        // both radii positive. Parity patterns are included through the
        // parity twist, which preserves R and turns them into constants.
        if rep.clamped || rep.r0 == 0 || rep.r1 == 0 {
            return;
        }
        let bound = r_lower_bound(f.n(), rep.r0, rep.r1)
            .expect("radii are positive here");
        let r = r_functional(&level_spectrum(f));
        let margin = rational_to_f64(&(&r - &bound));
        acc.case(Some(margin), r >= bound, f);
    });
    acc.finish(
        "window_r_lower_bound",
        "R(f) is at least the window lower bound for every fitted pattern",
    )
}

fn check_r_lower_equality_maj3() -> CheckResult {
    let maj3 = SymmetricFunction::majority(3).expect("n = 3 is valid");
    let r = r_functional(&level_spectrum(&maj3));
    let bound = r_lower_bound(3, 1, 1).expect("radii 1,1 valid");
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    let ok = r == bound && r == three_halves;
    CheckResult {
        name: "window_r_lower_equality_maj3".into(),
        cases: 1,
        worst_margin: Some(0.0),
        pass: ok,
        counterexample: if ok {
            None
        } else {
            Some(maj3.pattern_string())
        },
        detail: "majority of 3 attains the window lower bound: both sides 3/2".into(),
    }
}

fn check_noise_margins(n_max: usize) -> CheckResult {
    let mut acc = Acc::new();
    for_all(n_max, |f| {
        for c in [1usize, 4] {
            if c > f.n() {
                continue;
            }
            let rep = noise_inequality_report(f, &exact_int(c as i64))
                .expect("1 <= c <= n enforced above");
            let margin = rep
                .forward_margin
                .min(rep.reflected_margin)
                .min(rep.combined_margin);
            acc.case(Some(margin), rep.all_nonnegative(), f);
        }
    });
    acc.finish(
        "noise_damping_margins",
        "forward, reflected, and combined noise inequalities hold at c in {1, 4}",
    )
}

fn check_bias_bound(n_max: usize) -> CheckResult {
    let mut acc = Acc::new();
    for_all(n_max, |f| {
        let rep = r_parameters(f);
        if rep.clamped || rep.pattern.is_parity_type() {
            return;
        }
        let g = if rep.pattern == crate::structure::Pattern::MinusOne {
            f.negated()
        } else {
            f.clone()
        };
        let weights = spectral_summary(&g).level_weights;
        let off_empty: Exact = weights[1..].iter().sum();
        let bound = bias_upper_bound(f.n(), rep.r0, rep.r1);
        let margin = rational_to_f64(&(&bound - &off_empty));
        acc.case(Some(margin), off_empty <= bound, f);
    });
    acc.finish(
        "window_bias_bound",
        "off-empty Fourier weight of constant-pattern functions is within the \
         window bias bound",
    )
}

fn check_pdt_agreement(n_max: usize) -> CheckResult {
    let mut acc = Acc::new();
    for n in 1..=n_max {
        let corpus: Vec<SymmetricFunction> = SymmetricFunction::enumerate(n).collect();
        let violations: Vec<String> = corpus
            .par_iter()
            .filter_map(|f| {
                let tree = build_pdt(f);
                let mut bits = vec![false; n];
                for x in 0u64..(1 << n) {
                    for (j, b) in bits.iter_mut().enumerate() {
                        *b = (x >> j) & 1 == 1;
                    }
                    let got = eval_pdt(&tree, &bits).expect("input length matches n");
                    if got != f.levels()[x.count_ones() as usize] {
                        return Some(f.pattern_string());
                    }
                }
                None
            })
            .collect();
        acc.cases += (corpus.len() as u64) << n;
        if acc.counterexample.is_none() {
            acc.counterexample = violations.into_iter().next();
        }
    }
    acc.finish(
        "pdt_evaluation_agreement",
        "the pruned parity decision tree reproduces f on every input",
    )
}

fn check_pdt_sizes(n_max: usize) -> (CheckResult, CheckResult) {
    let mut leaf_bound = Acc::new();
    let mut norm_size = Acc::new();
    for_all(n_max, |f| {
        let tree = build_pdt(f);
        let count = leaf_count(&tree);
        let rep = r_parameters(f);
        let row = binomial_row(f.n());
        let four_bound = BigInt::from(4) * (&row[rep.r0] + &row[rep.r1]);
        leaf_bound.case(None, count.leaves <= four_bound, f);
        let l1 = spectral_norm(&level_spectrum(f));
        let leaves_exact = Exact::from_integer(count.leaves.clone());
        let margin = rational_to_f64(&(&leaves_exact - &l1));
        norm_size.case(Some(margin), l1 <= leaves_exact, f);
    });
    (
        leaf_bound.finish(
            "pdt_leaf_bound",
            "leaf count never exceeds 4 (C(n,r0) + C(n,r1))",
        ),
        norm_size.finish(
            "pdt_norm_within_size",
            "the spectral norm never exceeds the leaf count",
        ),
    )
}

fn check_pdt_indicators(n_max: usize) -> CheckResult {
    let cap = n_max.min(10);
    let mut acc = Acc::new();
    for n in 1..=cap {
        let corpus: Vec<SymmetricFunction> = SymmetricFunction::enumerate(n).collect();
        let results: Vec<(u64, Option<String>)> = corpus
            .par_iter()
            .map(|f| {
                let tree = build_pdt(f);
                let cert = l1_size_certificate(f, &tree)
                    .expect("tree built from f has matching n");
                let bad = if cert.indicators_unit {
                    None
                } else {
                    Some(f.pattern_string())
                };
                (cert.indicators_checked as u64, bad)
            })
            .collect();
        for (checked, bad) in results {
            acc.cases += checked;
            if acc.counterexample.is_none() {
                acc.counterexample = bad;
            }
        }
    }
    acc.finish(
        "pdt_leaf_indicators_unit",
        "every leaf subcube indicator has spectral norm exactly 1",
    )
}

fn check_oracle_agreement(n_max: usize) -> CheckResult {
    let cap = n_max.min(8);
    let mut acc = Acc::new();
    for_all(cap, |f| {
        let table = f.truth_table(cap).expect("n <= 8 is far below the cap");
        let brute = brute_force_spectrum(&table).expect("table is a power of two");
        let spec = level_spectrum(f);
        let ok = brute
            .iter()
            .enumerate()
            .all(|(mask, v)| *v == spec.coeffs[mask.count_ones() as usize]);
        acc.case(None, ok, f);
    });
    acc.finish(
        "oracle_spectrum_agreement",
        "the level-collapsed spectrum matches the brute-force transform on \
         every subset",
    )
}

/// Run the suite up to n_max (1..=12). `inject_fault` appends a check that
/// deliberately fails, for testing failure handling end to end.
pub fn run_verify(n_max: usize, inject_fault: bool) -> Result<VerifyReport> {
    if n_max == 0 || n_max > VERIFY_N_CAP {
        return Err(Error::OutOfRange(format!(
            "verify covers 1 <= n_max <= {VERIFY_N_CAP}, got {n_max}"
        )));
    }

    let mut checks = Vec::new();
    checks.push(check_parseval(n_max));
    checks.push(check_energy_identity(n_max));
    let (bounded, small) = check_norm_window_bound(n_max);
    checks.push(bounded);
    checks.push(small);
    checks.push(check_r_lower_bound(n_max));
    if n_max >= 3 {
        checks.push(check_r_lower_equality_maj3());
    }
    checks.push(check_noise_margins(n_max));
    checks.push(check_bias_bound(n_max));
    checks.push(check_pdt_agreement(n_max));
    let (leaf_bound, norm_size) = check_pdt_sizes(n_max);
    checks.push(leaf_bound);
    checks.push(norm_size);
    checks.push(check_pdt_indicators(n_max));
    checks.push(check_oracle_agreement(n_max));

    if inject_fault {
        checks.push(CheckResult {
            name: "injected_fault".into(),
            cases: 1,
            worst_margin: Some(-1.0),
            pass: false,
            counterexample: None,
            detail: "deliberate failure requested via --inject-fault (self-test)".into(),
        });
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        n_max,
        pass,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_through_n6() {
        let report = run_verify(6, false).unwrap();
        assert!(report.pass);
        for check in &report.checks {
            assert!(check.pass, "check {} failed: {:?}", check.name, check);
            assert!(check.cases > 0, "check {} covered nothing", check.name);
            if let Some(m) = check.worst_margin {
                assert!(m >= 0.0, "check {} margin {m}", check.name);
            }
        }
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        for expected in [
            "parseval_defect_zero",
            "derivative_energy_identity",
            "spectral_norm_window_bound",
            "small_radius_norm_cap",
            "window_r_lower_bound",
            "window_r_lower_equality_maj3",
            "noise_damping_margins",
            "window_bias_bound",
            "pdt_evaluation_agreement",
            "pdt_leaf_bound",
            "pdt_norm_within_size",
            "pdt_leaf_indicators_unit",
            "oracle_spectrum_agreement",
        ] {
            assert!(names.contains(&expected), "missing check {expected}");
        }
    }

    #[test]
    fn equality_check_needs_n3() {
        let report = run_verify(2, false).unwrap();
        assert!(report.pass);
        assert!(!report
            .checks
            .iter()
            .any(|c| c.name == "window_r_lower_equality_maj3"));
    }

    #[test]
    fn bounds_on_n_max() {
        assert!(run_verify(0, false).is_err());
        assert!(run_verify(13, false).is_err());
    }

    #[test]
    fn injected_fault_fails_suite() {
        let report = run_verify(2, true).unwrap();
        assert!(!report.pass);
        let fault = report
            .checks
            .iter()
            .find(|c| c.name == "injected_fault")
            .unwrap();
        assert!(!fault.pass);
        // All genuine checks still pass.
        assert!(report
            .checks
            .iter()
            .filter(|c| c.name != "injected_fault")
            .all(|c| c.pass));
    }

    #[test]
    fn report_serializes() {
        let report = run_verify(2, false).unwrap();
        let value: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(value["n_max"], 2);
        assert_eq!(value["pass"], true);
        assert!(value["checks"].as_array().unwrap().len() >= 10);
    }
}
