//! Independent cross-check of the l1-approximation LP.
//!
//! The oracle enumerates candidate vertices of the feasible region
//! directly: every subset of n+1 constraints drawn from the 2(n+1) window
//! inequalities and the n+1 sign hyperplanes a_k = 0 is intersected by
//! exact Gaussian elimination, filtered for feasibility, and scored with
//! the weighted objective. On each closed orthant the objective is linear
//! and the region is a bounded polytope, so the global minimum is attained
//! at one of these points. Constraint coefficients are recomputed here from
//! the defining sum; nothing is shared with the simplex implementation
//! except the public entry point under test.

use num::{BigInt, BigRational, One, Signed, Zero};
use symspec::exact::{exact_int, exact_ratio, Exact};
use symspec::function::SymmetricFunction;
use symspec::lp::approx_spectral_norm;
use symspec::spectrum::{level_spectrum, spectral_norm};

fn local_binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// K_k(m) = sum_j (-1)^j C(m,j) C(n-m, k-j): the level-k character sum
/// evaluated on inputs of weight m.
fn local_krawtchouk(n: i64, k: i64, m: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let term = local_binomial(m, j) * local_binomial(n - m, k - j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Solve the square system by exact Gaussian elimination; None when the
/// chosen constraints are not independent.
fn solve_square(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let d = a.len();
    for col in 0..d {
        let pivot = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..d {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..d {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
            let sub = &factor * &b[col];
            b[r] -= sub;
        }
    }
    Some((0..d).map(|r| &b[r] / &a[r][r]).collect())
}

/// Minimum of sum_k C(n,k)|a_k| over |sum_k a_k K_k(m) - f(m)| <= eps.
fn oracle_min_norm(f: &SymmetricFunction, eps: &Exact) -> Exact {
    let n = f.n();
    let d = n + 1;
    let kraw: Vec<Vec<BigRational>> = (0..d)
        .map(|m| {
            (0..d)
                .map(|k| {
                    BigRational::from_integer(local_krawtchouk(n as i64, k as i64, m as i64))
                })
                .collect()
        })
        .collect();
    let weights: Vec<BigRational> = (0..d)
        .map(|k| BigRational::from_integer(local_binomial(n as i64, k as i64)))
        .collect();
    let target: Vec<BigRational> = (0..d)
        .map(|m| exact_int(f.levels()[m] as i64))
        .collect();

    let feasible = |a: &[BigRational]| -> bool {
        (0..d).all(|m| {
            let v: BigRational = (0..d).map(|k| &a[k] * &kraw[m][k]).sum();
            (v - &target[m]).abs() <= *eps
        })
    };
    let objective = |a: &[BigRational]| -> BigRational {
        (0..d).map(|k| &weights[k] * a[k].abs()).sum()
    };

    // Constraint index c: c < d is a_c = 0; d <= c < 2d is the upper window
    // row at m = c - d; 2d <= c < 3d is the lower row at m = c - 2d.
    let total = 3 * d;
    assert!(total <= 16, "oracle is exponential; keep n tiny");
    let mut best: Option<BigRational> = None;
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != d {
            continue;
        }
        let mut rows = Vec::with_capacity(d);
        let mut rhs = Vec::with_capacity(d);
        for c in 0..total {
            if mask >> c & 1 == 0 {
                continue;
            }
            if c < d {
                let mut row = vec![BigRational::zero(); d];
                row[c] = BigRational::one();
                rows.push(row);
                rhs.push(BigRational::zero());
            } else {
                let m = (c - d) % d;
                rows.push(kraw[m].clone());
                rhs.push(if c < 2 * d {
                    &target[m] + eps
                } else {
                    &target[m] - eps
                });
            }
        }
        if let Some(a) = solve_square(rows, rhs) {
            if feasible(&a) {
                let obj = objective(&a);
                if best.as_ref().is_none_or(|b| obj < *b) {
                    best = Some(obj);
                }
            }
        }
    }
    best.expect("the exact spectrum is always feasible")
}

#[test]
fn frozen_approximation_values() {
    let maj3 = SymmetricFunction::majority(3).unwrap();
    let third = exact_ratio(1, 3);
    assert_eq!(oracle_min_norm(&maj3, &third), exact_ratio(4, 3));
    assert_eq!(approx_spectral_norm(&maj3, &third).unwrap(), exact_ratio(4, 3));

    let parity3 = SymmetricFunction::parity(3).unwrap();
    assert_eq!(oracle_min_norm(&parity3, &third), exact_ratio(2, 3));
    assert_eq!(
        approx_spectral_norm(&parity3, &third).unwrap(),
        exact_ratio(2, 3)
    );
}

#[test]
fn oracle_matches_simplex_exhaustively() {
    for n in 1..=3usize {
        for f in SymmetricFunction::enumerate(n) {
            for eps in [exact_ratio(1, 10), exact_ratio(1, 3)] {
                let by_simplex = approx_spectral_norm(&f, &eps).unwrap();
                let by_vertices = oracle_min_norm(&f, &eps);
                assert_eq!(
                    by_simplex,
                    by_vertices,
                    "n={n} f={} eps={eps}",
                    f.pattern_string()
                );
            }
        }
    }
}

#[test]
fn zero_accuracy_recovers_the_exact_norm() {
    for n in 1..=3usize {
        for f in SymmetricFunction::enumerate(n) {
            let norm = spectral_norm(&level_spectrum(&f));
            assert_eq!(oracle_min_norm(&f, &exact_int(0)), norm);
            assert_eq!(approx_spectral_norm(&f, &exact_int(0)).unwrap(), norm);
        }
    }
}
