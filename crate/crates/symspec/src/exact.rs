//! Exact arithmetic: arbitrary-precision rationals, cached binomial rows, and
//! Krawtchouk values.
//!
//! Everything here is exact; conversions to f64 are explicit and confined to
//! the `log2_*` / `to_f64_*` helpers used by reporting layers.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Exact scalar: arbitrary-precision rational. Arithmetic on these never
/// rounds; equality is mathematical equality.
pub type Exact = BigRational;

/// Exact value of an integer.
pub fn exact_int(v: i64) -> Exact {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact p/q. Panics if q = 0 (caller bug, not user input).
pub fn exact_ratio(p: i64, q: i64) -> Exact {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// 2^n as a BigInt.
pub fn pow2(n: usize) -> BigInt {
    BigInt::one() << n
}

// Binomial rows are cached after first use; the cache is internally
// synchronized so sweep workers can share it.
static BINOMIAL_ROWS: OnceLock<RwLock<HashMap<usize, Arc<Vec<BigInt>>>>> = OnceLock::new();

/// Row n of Pascal's triangle: [C(n,0), ..., C(n,n)]. Cached.
pub fn binomial_row(n: usize) -> Arc<Vec<BigInt>> {
    let cache = BINOMIAL_ROWS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(row) = cache.read().unwrap().get(&n) {
        return Arc::clone(row);
    }
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    for k in 0..=n {
        row.push(c.clone());
        if k < n {
            // C(n,k+1) = C(n,k) * (n-k) / (k+1), exact division
            c = c * BigInt::from((n - k) as u64) / BigInt::from((k + 1) as u64);
        }
    }
    let row = Arc::new(row);
    cache.write().unwrap().insert(n, Arc::clone(&row));
    row
}

/// C(n, k); zero when k > n.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    binomial_row(n)[k].clone()
}

/// C(n, k) as a BigUint; zero when k > n.
pub fn binomial_unsigned(n: usize, k: usize) -> BigUint {
    binomial(n, k).to_biguint().expect("binomial is nonnegative")
}

// One Krawtchouk table per n, filled on demand. Each table is the full
// (n+1) x (n+1) grid; only small n reach this path (the spectrum engine has
// its own streaming recurrence for large n).
static KRAWTCHOUK_TABLES: OnceLock<RwLock<HashMap<usize, Arc<Vec<Vec<BigInt>>>>>> =
    OnceLock::new();

/// Full Krawtchouk table for a given n: table[k][m] holds the degree-k value
/// at point m. Computed by the three-term recurrence in k with exact integer
/// division:
///   (k+1) K_{k+1}(m) = (n - 2m) K_k(m) - (n - k + 1) K_{k-1}(m),
/// anchored at K_0(m) = 1, K_1(m) = n - 2m.
pub fn krawtchouk_table(n: usize) -> Arc<Vec<Vec<BigInt>>> {
    let cache = KRAWTCHOUK_TABLES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().unwrap().get(&n) {
        return Arc::clone(t);
    }
    let ni = n as i64;
    let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    table.push(vec![BigInt::one(); n + 1]);
    if n >= 1 {
        table.push((0..=ni).map(|m| BigInt::from(ni - 2 * m)).collect());
        for k in 1..n {
            let mut next = Vec::with_capacity(n + 1);
            for m in 0..=n {
                let t = BigInt::from(ni - 2 * m as i64) * &table[k][m]
                    - BigInt::from(ni - k as i64 + 1) * &table[k - 1][m];
                let (q, r) = num::Integer::div_rem(&t, &BigInt::from(k as i64 + 1));
                debug_assert!(r.is_zero(), "recurrence division must be exact");
                next.push(q);
            }
            table.push(next);
        }
    }
    let table = Arc::new(table);
    cache.write().unwrap().insert(n, Arc::clone(&table));
    table
}

/// Degree-k Krawtchouk value at point m for parameter n:
///   K_k(m) = sum_j (-1)^j C(m, j) C(n-m, k-j).
/// Equivalently the coefficient pattern summing chi over weight-k points
/// against a fixed set of size m; K_0 = 1, K_n(m) = (-1)^m.
pub fn krawtchouk(n: usize, k: usize, m: usize) -> Result<BigInt> {
    if k > n || m > n {
        return Err(Error::OutOfRange(format!(
            "krawtchouk indices k = {k}, m = {m} must lie in 0..={n}"
        )));
    }
    Ok(krawtchouk_table(n)[k][m].clone())
}

/// Defining-sum evaluation, used to spot-check the recurrence.
pub fn krawtchouk_by_sum(n: usize, k: usize, m: usize) -> Result<BigInt> {
    if k > n || m > n {
        return Err(Error::OutOfRange(format!(
            "krawtchouk indices k = {k}, m = {m} must lie in 0..={n}"
        )));
    }
    let mut acc = BigInt::zero();
    for j in 0..=k.min(m) {
        let term = binomial(m, j) * binomial(n - m, k - j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// log2 of a positive BigInt, accurate to ~1 ulp: exponent from the bit
/// length, mantissa from the top 53 bits.
pub fn log2_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "log2 of non-positive integer");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().log2() + shift as f64
}

/// log2 of a positive rational.
pub fn log2_rational(x: &Exact) -> f64 {
    assert!(x.is_positive(), "log2 of non-positive rational");
    log2_bigint(x.numer()) - log2_bigint(x.denom())
}

/// Nearest-f64 value of a rational (to within ~2 ulp), safe for operands far
/// outside the f64 exponent range (returns 0 or +/-inf at the extremes).
pub fn rational_to_f64(x: &Exact) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    let (num, den) = (x.numer().abs(), x.denom().clone());
    let log = log2_bigint(&num) - log2_bigint(&den);
    if log > 1030.0 {
        return sign * f64::INFINITY;
    }
    if log < -1080.0 {
        return 0.0;
    }
    // Truncate both operands to their top 64 bits and track the dropped
    // exponents; each truncation perturbs by < 2^-63 relative.
    let nb = num.bits();
    let db = den.bits();
    let ns = nb.saturating_sub(64);
    let ds = db.saturating_sub(64);
    let tn: BigInt = &num >> ns;
    let td: BigInt = &den >> ds;
    let v = tn.to_f64().unwrap() / td.to_f64().unwrap();
    sign * v * (2f64).powi(ns as i32 - ds as i32)
}

/// Render a rational as `p/q` (or `p` when integral): the exact-value wire
/// format used in CSV/JSON output.
pub fn format_exact(x: &Exact) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(7, 0), BigInt::from(1));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(10, 5), BigInt::from(252));
    }

    #[test]
    fn binomial_row_matches_pointwise() {
        let row = binomial_row(12);
        for k in 0..=12usize {
            assert_eq!(row[k], binomial(12, k));
        }
        // Pascal identity across cached rows
        for n in 1..=12usize {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn krawtchouk_examples() {
        for n in 1..=8usize {
            for m in 0..=n {
                assert_eq!(krawtchouk(n, 0, m).unwrap(), BigInt::one());
                let expect = if m % 2 == 0 { 1 } else { -1 };
                assert_eq!(krawtchouk(n, n, m).unwrap(), BigInt::from(expect));
            }
        }
        // Direct evaluation over the C(3,1) = 3 weight-1 points of a fixed
        // 2-set: two points meet it once (-1 each), one misses (+1).
        assert_eq!(krawtchouk(3, 2, 1).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn krawtchouk_recurrence_matches_defining_sum() {
        for n in 0..=20usize {
            for k in 0..=n {
                for m in 0..=n {
                    assert_eq!(
                        krawtchouk(n, k, m).unwrap(),
                        krawtchouk_by_sum(n, k, m).unwrap(),
                        "n={n} k={k} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn krawtchouk_reflection() {
        for n in 1..=20usize {
            for k in 0..=n {
                for m in 0..=n {
                    let lhs = krawtchouk(n, k, n - m).unwrap();
                    let rhs = krawtchouk(n, k, m).unwrap();
                    let rhs = if k % 2 == 0 { rhs } else { -rhs };
                    assert_eq!(lhs, rhs, "n={n} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn krawtchouk_out_of_range() {
        assert!(krawtchouk(4, 5, 0).is_err());
        assert!(krawtchouk(4, 0, 5).is_err());
    }

    #[test]
    fn log2_helpers_accurate() {
        let x = BigInt::from(1) << 100;
        assert!((log2_bigint(&x) - 100.0).abs() < 1e-12);
        let r = exact_ratio(755, 128);
        assert!((log2_rational(&r) - (755f64 / 128f64).log2()).abs() < 1e-12);
    }

    #[test]
    fn rational_to_f64_extremes() {
        assert_eq!(rational_to_f64(&exact_int(0)), 0.0);
        assert_eq!(rational_to_f64(&exact_ratio(-3, 2)), -1.5);
        let huge = BigRational::from_integer(BigInt::one() << 2000);
        assert_eq!(rational_to_f64(&huge), f64::INFINITY);
        let tiny = BigRational::new(BigInt::one(), BigInt::one() << 2000);
        assert_eq!(rational_to_f64(&tiny), 0.0);
        let v = BigRational::new(BigInt::from(1) << 200, (BigInt::from(1) << 199) * 3);
        assert!((rational_to_f64(&v) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn format_exact_forms() {
        assert_eq!(format_exact(&exact_int(7)), "7");
        assert_eq!(format_exact(&exact_ratio(-3, 2)), "-3/2");
        assert_eq!(format_exact(&exact_ratio(4, 2)), "2");
    }
}
