//! Closed-form bounds, inequality suites, and the empirical growth envelope
//! for the spectral norm of symmetric functions.
//!
//! Everything with two rational sides is compared exactly; comparisons that
//! involve entropies or square roots run in f64 log space with a documented
//! 1e-12 absolute slack.

use crate::error::{Error, Result};
use crate::exact::{
    binomial, binomial_row, exact_int, exact_ratio, log2_bigint, pow2, rational_to_f64, Exact,
};
use crate::function::SymmetricFunction;
use crate::spectrum::{level_char_sums, level_spectrum, spectral_norm, LevelSpectrum};
use crate::structure::{r_functional, r_parameters};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Absolute slack for float comparisons of log-space quantities.
const LOG_SLACK: f64 = 1e-12;

/// Binary entropy h(a) = -a log2 a - (1-a) log2(1-a), with h(0) = h(1) = 0.
pub fn binary_entropy(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange(format!(
            "binary entropy needs alpha in [0, 1], got {alpha}"
        )));
    }
    if alpha == 0.0 || alpha == 1.0 {
        return Ok(0.0);
    }
    Ok(-alpha * alpha.log2() - (1.0 - alpha) * (1.0 - alpha).log2())
}

/// Upper bound on log2 of the spectral norm in terms of the deviation
/// radius: 2 r log2(n/r) + 3. Defined for 1 <= r <= n; the r = 0 case is a
/// constant-norm regime handled separately.
pub fn l1_upper_bound(n: usize, r: usize) -> Result<f64> {
    if r == 0 || r > n {
        return Err(Error::OutOfRange(format!(
            "norm bound needs 1 <= r <= n, got r = {r}, n = {n}"
        )));
    }
    Ok(2.0 * r as f64 * (n as f64 / r as f64).log2() + 3.0)
}

fn radius_term(n: usize, r: usize) -> BigInt {
    BigInt::from(((n - r + 1) * (n - r)) as u64) * binomial(n, r - 1)
}

/// Lower bound on the weighted quadratic functional R(f):
/// ((n-r0+1)(n-r0) C(n,r0-1) + (n-r1+1)(n-r1) C(n,r1-1)) / 2^n.
/// Both radii must be >= 1 (the formula indexes C(n, r-1)).
pub fn r_lower_bound(n: usize, r0: usize, r1: usize) -> Result<Exact> {
    if r0 == 0 || r1 == 0 || r0 > n || r1 > n {
        return Err(Error::OutOfRange(format!(
            "R bound needs 1 <= r0, r1 <= n, got r0 = {r0}, r1 = {r1}, n = {n}"
        )));
    }
    Ok(BigRational::new(
        radius_term(n, r0) + radius_term(n, r1),
        pow2(n),
    ))
}

/// Upper bound on the off-empty Fourier weight of a function that is
/// constantly +1 on levels r0..=n-r1:
/// 4 (sum_{s<r0} C(n,s) + sum_{s<r1} C(n,s)) / 2^n.
pub fn bias_upper_bound(n: usize, r0: usize, r1: usize) -> Exact {
    let row = binomial_row(n);
    let mut sum = BigInt::zero();
    for s in 0..r0.min(n + 1) {
        sum += &row[s];
    }
    for s in 0..r1.min(n + 1) {
        sum += &row[s];
    }
    BigRational::new(BigInt::from(4) * sum, pow2(n))
}

/// Pass flags for the four standard binomial-coefficient estimates at a
/// given cut alpha.
#[derive(Debug, Clone, Serialize)]
pub struct BinomialEstimateReport {
    pub n: usize,
    pub alpha: f64,
    /// Whether alpha * n is an integer; the first two estimates only apply
    /// then.
    pub alpha_n_integral: bool,
    /// sum_{k<=an} C(n,k) <= 2^{n h(a)}.
    pub prefix_sum_holds: Option<bool>,
    /// 2^{n h(a)} / (n+1) <= C(n, an).
    pub point_lower_holds: Option<bool>,
    /// 2^{n h(a)} / (n(n+1)) <= C(n, floor(an)) <= 2^{n h(a)}.
    pub floor_bounds_hold: bool,
    /// C(n, floor(n/2 + c sqrt(n))) >= C 2^n / sqrt(n) for c in {1, 2},
    /// with C the constant fitted this run.
    pub central_lower_holds: bool,
    /// min over c in {1, 2} of C(n, idx(c)) sqrt(n) / 2^n.
    pub fitted_constant: f64,
}

impl BinomialEstimateReport {
    /// All applicable estimates hold.
    pub fn all_hold(&self) -> bool {
        self.prefix_sum_holds.unwrap_or(true)
            && self.point_lower_holds.unwrap_or(true)
            && self.floor_bounds_hold
            && self.central_lower_holds
    }
}

/// Evaluate the four binomial estimates at cut alpha in [0, 1/2].
/// Comparisons run in log space with 1e-12 slack.
pub fn binomial_estimate_checks(n: usize, alpha: &Exact) -> Result<BinomialEstimateReport> {
    if n == 0 || alpha < &BigRational::zero() || alpha > &exact_ratio(1, 2) {
        return Err(Error::OutOfRange(format!(
            "estimates need n >= 1 and alpha in [0, 1/2], got n = {n}, alpha = {alpha}"
        )));
    }
    let alpha_f = rational_to_f64(alpha);
    let nh = n as f64 * binary_entropy(alpha_f)?;
    let row = binomial_row(n);
    let alpha_n = alpha * BigRational::from_integer(BigInt::from(n));
    let integral = alpha_n.is_integer();
    let floor_idx = alpha_n
        .floor()
        .to_integer()
        .to_usize()
        .expect("floor(alpha n) fits usize for alpha <= 1/2");

    let (prefix_sum_holds, point_lower_holds) = if integral {
        let mut prefix = BigInt::zero();
        for k in 0..=floor_idx {
            prefix += &row[k];
        }
        let prefix_ok = log2_bigint(&prefix) <= nh + LOG_SLACK;
        let point_ok = nh - ((n + 1) as f64).log2() <= log2_bigint(&row[floor_idx]) + LOG_SLACK;
        (Some(prefix_ok), Some(point_ok))
    } else {
        (None, None)
    };

    let log_floor = log2_bigint(&row[floor_idx]);
    let floor_bounds_hold = nh - ((n * (n + 1)) as f64).log2() <= log_floor + LOG_SLACK
        && log_floor <= nh + LOG_SLACK;

    let mut fitted_constant = f64::INFINITY;
    for c in [1.0f64, 2.0] {
        let idx = ((n as f64 / 2.0 + c * (n as f64).sqrt()).floor() as usize).min(n);
        let ratio = (log2_bigint(&row[idx]) - n as f64 + 0.5 * (n as f64).log2()).exp2();
        fitted_constant = fitted_constant.min(ratio);
    }

    Ok(BinomialEstimateReport {
        n,
        alpha: alpha_f,
        alpha_n_integral: integral,
        prefix_sum_holds,
        point_lower_holds,
        floor_bounds_hold,
        central_lower_holds: fitted_constant > 0.0,
        fitted_constant,
    })
}

/// One function's position against the norm-growth benchmark
/// r log2(n/r): the ratio log2 |f-hat|_1 / benchmark, defined when r > 1.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeRecord {
    pub n: usize,
    /// Level-pattern encoding of the function.
    pub function_id: String,
    pub r: usize,
    pub log_l1: f64,
    /// r log2(n/r); 0.0 when r = 0.
    pub benchmark: f64,
    /// log_l1 / benchmark, defined only when r > 1.
    pub ratio: Option<f64>,
}

/// Envelope position of one function.
pub fn envelope_ratio(f: &SymmetricFunction) -> EnvelopeRecord {
    let n = f.n();
    let rep = r_parameters(f);
    let sums = level_char_sums(f);
    let row = binomial_row(n);
    let mut l1_num = BigInt::zero();
    for k in 0..=n {
        l1_num += &row[k] * sums[k].abs();
    }
    let log_l1 = log2_bigint(&l1_num) - n as f64;
    let benchmark = if rep.r >= 1 {
        rep.r as f64 * (n as f64 / rep.r as f64).log2()
    } else {
        0.0
    };
    let ratio = if rep.r > 1 {
        Some(log_l1 / benchmark)
    } else {
        None
    };
    EnvelopeRecord {
        n,
        function_id: f.pattern_string(),
        r: rep.r,
        log_l1,
        benchmark,
        ratio,
    }
}

/// Noise-damped quadratic functional
/// sum_k C(n,k) k (n-k) coeff_k^2 rho^k, exact for rational rho in [0, 1].
pub fn noise_weighted_sum(spec: &LevelSpectrum, rho: &Exact) -> Exact {
    let n = spec.n;
    let row = binomial_row(n);
    let mut acc = BigRational::zero();
    let mut rho_pow = BigRational::one();
    for k in 0..=n {
        if k > 0 {
            rho_pow *= rho;
        }
        if k == 0 || k == n {
            continue;
        }
        let c = &spec.coeffs[k];
        if c.is_zero() {
            continue;
        }
        let scale = &row[k] * BigInt::from((k * (n - k)) as u64);
        acc += BigRational::from_integer(scale) * c * c * &rho_pow;
    }
    acc
}

/// Both sides and margins of the three noise-damping inequalities at
/// rho = 1 - c/n. With N(g, rho) the noise-damped functional:
///
/// * forward:   8 N(f, rho) <= (4/sqrt(pi c)) * 8 R(f)
/// * reflected: N(f*parity, rho) <= (4/sqrt(pi c)) * R(f)
///   (the parity twist turns rho^k into rho^{n-k})
/// * combined:  R(f) - N(f, rho) - N(f*parity, rho)
///              >= (1 - 8/sqrt(pi c)) * R(f)
///
/// Margins are oriented so that nonnegative means the inequality holds.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseReport {
    pub n: usize,
    pub c: f64,
    pub rho: f64,
    pub forward_lhs: f64,
    pub forward_rhs: f64,
    pub forward_margin: f64,
    pub reflected_lhs: f64,
    pub reflected_rhs: f64,
    pub reflected_margin: f64,
    pub combined_lhs: f64,
    pub combined_rhs: f64,
    pub combined_margin: f64,
}

impl NoiseReport {
    pub fn all_nonnegative(&self) -> bool {
        self.forward_margin >= 0.0
            && self.reflected_margin >= 0.0
            && self.combined_margin >= 0.0
    }
}

/// Evaluate the noise-damping inequalities for f at parameter c in [1, n].
pub fn noise_inequality_report(f: &SymmetricFunction, c: &Exact) -> Result<NoiseReport> {
    let n = f.n();
    if c < &BigRational::one() || c > &exact_int(n as i64) {
        return Err(Error::OutOfRange(format!(
            "noise parameter must lie in [1, n], got c = {c}, n = {n}"
        )));
    }
    let rho = BigRational::one() - c / exact_int(n as i64);
    let spec = level_spectrum(f);
    let twisted = level_spectrum(&f.times_parity());
    let r = r_functional(&spec);
    let forward = noise_weighted_sum(&spec, &rho);
    let reflected = noise_weighted_sum(&twisted, &rho);

    let r_f = rational_to_f64(&r);
    let damp = 4.0 / (std::f64::consts::PI * rational_to_f64(c)).sqrt();
    let forward_lhs = 8.0 * rational_to_f64(&forward);
    let forward_rhs = damp * 8.0 * r_f;
    let reflected_lhs = rational_to_f64(&reflected);
    let reflected_rhs = damp * r_f;
    let combined_lhs = rational_to_f64(&(&r - &forward - &reflected));
    let combined_rhs = (1.0 - 2.0 * damp) * r_f;
    Ok(NoiseReport {
        n,
        c: rational_to_f64(c),
        rho: rational_to_f64(&rho),
        forward_lhs,
        forward_rhs,
        forward_margin: forward_rhs - forward_lhs,
        reflected_lhs,
        reflected_rhs,
        reflected_margin: reflected_rhs - reflected_lhs,
        combined_lhs,
        combined_rhs,
        combined_margin: combined_lhs - combined_rhs,
    })
}

/// Empirical constant in the mid-slice entropy inequality: the ratio
/// (h(1/2 - sqrt(4a - 6a^2 + 4a^3)/2) + h(a) - 1) / ((1 - 2a) a log2(1/a))
/// at a = alpha0 in (0, 1/2). Positive throughout the open interval.
pub fn entropy_claim_gap(alpha0: f64) -> Result<f64> {
    if !(alpha0 > 0.0 && alpha0 < 0.5) {
        return Err(Error::OutOfRange(format!(
            "gap needs alpha0 strictly inside (0, 1/2), got {alpha0}"
        )));
    }
    let s = (4.0 * alpha0 - 6.0 * alpha0 * alpha0 + 4.0 * alpha0.powi(3)).sqrt();
    let lhs = binary_entropy(0.5 - 0.5 * s)? + binary_entropy(alpha0)? - 1.0;
    Ok(lhs / ((1.0 - 2.0 * alpha0) * alpha0 * (1.0 / alpha0).log2()))
}

/// Monomial sparsity against the norm-based budget (2n/eps^2) |f-hat|_1^2.
#[derive(Debug, Clone)]
pub struct MonomialReport {
    pub n: usize,
    /// Exact support size: sum of C(n,k) over levels with nonzero
    /// coefficient.
    pub monomial_count: BigInt,
    /// (2n / eps^2) * l1^2, exact.
    pub bound: Exact,
    /// Whether the full support fits under the budget. The budget governs
    /// approximate representations, so an exact support may exceed it
    /// (the 11-variable conjunction at eps = 1/3 does); this is reported,
    /// not asserted.
    pub within_bound: bool,
}

/// Sparsity report for f at accuracy eps in (0, 1).
pub fn monomial_report(f: &SymmetricFunction, epsilon: &Exact) -> Result<MonomialReport> {
    if epsilon <= &BigRational::zero() || epsilon >= &BigRational::one() {
        return Err(Error::OutOfRange(format!(
            "accuracy must lie strictly inside (0, 1), got {epsilon}"
        )));
    }
    let n = f.n();
    let spec = level_spectrum(f);
    let row = binomial_row(n);
    let mut count = BigInt::zero();
    for k in 0..=n {
        if !spec.coeffs[k].is_zero() {
            count += &row[k];
        }
    }
    let l1 = spectral_norm(&spec);
    let bound = exact_int(2 * n as i64) / (epsilon * epsilon) * &l1 * &l1;
    let within_bound = BigRational::from_integer(count.clone()) <= bound;
    Ok(MonomialReport {
        n,
        monomial_count: count,
        bound,
        within_bound,
    })
}
