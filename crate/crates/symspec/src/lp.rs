//! Exact computation of the approximate spectral norm via linear
//! programming.
//!
//! The approximate norm at accuracy eps is the least spectral norm among
//! real-valued g with |f(x) - g(x)| <= eps everywhere. Averaging a feasible
//! g over all coordinate permutations keeps it feasible (each permuted copy
//! is, and the constraint set is convex) without raising the norm, so the
//! optimum is attained at a symmetric g and the whole problem collapses to
//! n+1 level coefficients. That reduction is validated against an
//! unrestricted LP over all 2^n characters for small n.
//!
//! Absolute values are linearized by splitting each coefficient into a
//! nonnegative pair, and the LP is solved by a dense two-phase simplex over
//! exact rationals with Bland's anti-cycling rule, so results are exact and
//! bit-for-bit deterministic.

use crate::error::{Error, Result};
use crate::exact::{binomial_row, exact_int, krawtchouk_table, rational_to_f64, Exact};
use crate::function::SymmetricFunction;
use crate::spectrum::{level_spectrum, spectral_norm};
use num::{BigRational, One, Signed, Zero};

/// Hard cap on simplex pivots across both phases.
pub const SIMPLEX_ITERATION_CAP: usize = 1_000_000;

/// A minimization LP in the form: minimize objective . x subject to
/// row . x <= rhs for every row, x >= 0.
#[derive(Debug, Clone)]
pub struct LpInstance {
    /// Number of input variables of the source function.
    pub n: usize,
    pub epsilon: Exact,
    /// One cost per structural variable; variables are split pairs laid out
    /// as all plus-parts then all minus-parts.
    pub objective: Vec<Exact>,
    /// Constraint rows as (coefficients, rhs), meaning coeffs . x <= rhs.
    pub rows: Vec<(Vec<Exact>, Exact)>,
    pub var_names: Vec<String>,
    pub row_names: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

/// Solver output. `level_coeffs` pairs the split variables back into signed
/// coefficients (length = objective.len() / 2).
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub optimum: Exact,
    pub level_coeffs: Vec<Exact>,
}

/// Symmetry-reduced instance: minimize sum_k C(n,k) (a_k+ + a_k-) subject
/// to f(m) - eps <= sum_k (a_k+ - a_k-) K_k(m) <= f(m) + eps for every
/// weight m, where K_k(m) is the level-k character sum at weight m.
pub fn build_symmetric_l1_lp(f: &SymmetricFunction, epsilon: &Exact) -> Result<LpInstance> {
    if epsilon < &BigRational::zero() {
        return Err(Error::OutOfRange(format!(
            "approximation accuracy must be nonnegative, got {epsilon}"
        )));
    }
    let n = f.n();
    let width = n + 1;
    let row_binom = binomial_row(n);
    let kraw = krawtchouk_table(n);

    let mut objective = Vec::with_capacity(2 * width);
    let mut var_names = Vec::with_capacity(2 * width);
    for half in ["p", "m"] {
        for k in 0..=n {
            objective.push(BigRational::from_integer(row_binom[k].clone()));
            var_names.push(format!("a{half}{k}"));
        }
    }

    let mut rows = Vec::with_capacity(2 * width);
    let mut row_names = Vec::with_capacity(2 * width);
    for m in 0..=n {
        let fm = exact_int(f.levels()[m] as i64);
        let mut up = Vec::with_capacity(2 * width);
        for k in 0..=n {
            up.push(BigRational::from_integer(kraw[k][m].clone()));
        }
        for k in 0..=n {
            up.push(BigRational::from_integer(-&kraw[k][m]));
        }
        let lo: Vec<Exact> = up.iter().map(|c| -c).collect();
        rows.push((up, &fm + epsilon));
        row_names.push(format!("up{m}"));
        rows.push((lo, epsilon - &fm));
        row_names.push(format!("lo{m}"));
    }

    Ok(LpInstance {
        n,
        epsilon: epsilon.clone(),
        objective,
        rows,
        var_names,
        row_names,
    })
}

/// Unrestricted instance over all 2^n characters, from an explicit truth
/// table: minimize sum_S (c_S+ + c_S-) subject to
/// |sum_S (c_S+ - c_S-) chi_S(x) - f(x)| <= eps at every point x.
/// Exponentially large; intended for validating the symmetry reduction at
/// small n.
pub fn build_unrestricted_l1_lp(table: &[i8], epsilon: &Exact) -> Result<LpInstance> {
    if epsilon < &BigRational::zero() {
        return Err(Error::OutOfRange(format!(
            "approximation accuracy must be nonnegative, got {epsilon}"
        )));
    }
    let len = table.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;

    let mut objective = Vec::with_capacity(2 * len);
    let mut var_names = Vec::with_capacity(2 * len);
    for half in ["p", "m"] {
        for s in 0..len {
            objective.push(BigRational::one());
            var_names.push(format!("c{half}{s}"));
        }
    }

    let mut rows = Vec::with_capacity(2 * len);
    let mut row_names = Vec::with_capacity(2 * len);
    for x in 0..len {
        let fx = exact_int(table[x] as i64);
        let mut up = Vec::with_capacity(2 * len);
        for s in 0..len {
            let sign = if (s & x).count_ones() % 2 == 0 { 1 } else { -1 };
            up.push(exact_int(sign));
        }
        for s in 0..len {
            let sign = if (s & x).count_ones() % 2 == 0 { -1 } else { 1 };
            up.push(exact_int(sign));
        }
        let lo: Vec<Exact> = up.iter().map(|c| -c).collect();
        rows.push((up, &fx + epsilon));
        row_names.push(format!("up{x}"));
        rows.push((lo, epsilon - &fx));
        row_names.push(format!("lo{x}"));
    }

    Ok(LpInstance {
        n,
        epsilon: epsilon.clone(),
        objective,
        rows,
        var_names,
        row_names,
    })
}

// Dense rational simplex tableau in canonical form: basis columns are unit
// vectors and the cost row holds reduced costs.
struct Tableau {
    rows: Vec<Vec<Exact>>,
    cost: Vec<Exact>,
    basis: Vec<usize>,
    pivots_left: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
    OutOfPivots,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone().recip();
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut r[col], BigRational::zero());
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            r[col] = BigRational::zero();
        }
        if !self.cost[col].is_zero() {
            let factor = std::mem::replace(&mut self.cost[col], BigRational::zero());
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.cost[col] = BigRational::zero();
        }
        self.basis[row] = col;
    }

    // Bland's rule: entering column is the lowest index with negative
    // reduced cost; leaving row is the tightest ratio, ties broken by the
    // lowest basis index. `eligible` masks out columns that may not enter.
    fn run(&mut self, eligible: &[bool]) -> PhaseOutcome {
        let rhs = self.width() - 1;
        loop {
            let entering = (0..rhs).find(|&j| eligible[j] && self.cost[j].is_negative());
            let Some(col) = entering else {
                return PhaseOutcome::Optimal;
            };
            let mut leaving: Option<(usize, Exact)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][rhs] / &self.rows[i][col];
                let better = match &leaving {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return PhaseOutcome::Unbounded;
            };
            if self.pivots_left == 0 {
                return PhaseOutcome::OutOfPivots;
            }
            self.pivots_left -= 1;
            self.pivot(row, col);
        }
    }
}

/// Solve an instance exactly. Statuses are reported, never guessed: an
/// iteration-limited run says so instead of returning a wrong optimum.
/// Unbounded instances (impossible for the builders here, whose objectives
/// are nonnegative) are an error.
pub fn solve_lp(inst: &LpInstance) -> Result<LpSolution> {
    let nv = inst.objective.len();
    let m = inst.rows.len();
    // Columns: structural | one slack/surplus per row | artificials | rhs.
    let mut artificial_of_row: Vec<Option<usize>> = vec![None; m];
    let mut n_art = 0usize;
    for (i, (_, rhs)) in inst.rows.iter().enumerate() {
        if rhs.is_negative() {
            artificial_of_row[i] = Some(n_art);
            n_art += 1;
        }
    }
    let width = nv + m + n_art + 1;
    let rhs_col = width - 1;

    let mut rows = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    for (i, (coeffs, rhs)) in inst.rows.iter().enumerate() {
        let mut row = vec![BigRational::zero(); width];
        let flip = rhs.is_negative();
        for (j, c) in coeffs.iter().enumerate() {
            row[j] = if flip { -c } else { c.clone() };
        }
        // Slack for a kept <= row; surplus for a flipped (>=) row.
        row[nv + i] = if flip {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        row[rhs_col] = if flip { -rhs } else { rhs.clone() };
        if let Some(a) = artificial_of_row[i] {
            row[nv + m + a] = BigRational::one();
            basis[i] = nv + m + a;
        } else {
            basis[i] = nv + i;
        }
        rows.push(row);
    }

    let mut tableau = Tableau {
        rows,
        cost: vec![BigRational::zero(); width],
        basis,
        pivots_left: SIMPLEX_ITERATION_CAP,
    };

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        for a in 0..n_art {
            tableau.cost[nv + m + a] = BigRational::one();
        }
        for i in 0..m {
            if tableau.basis[i] >= nv + m {
                let row = tableau.rows[i].clone();
                for (v, p) in tableau.cost.iter_mut().zip(&row) {
                    *v -= p;
                }
            }
        }
        let eligible = vec![true; width - 1];
        match tableau.run(&eligible) {
            PhaseOutcome::Optimal => {}
            PhaseOutcome::Unbounded => return Err(Error::LpUnbounded),
            PhaseOutcome::OutOfPivots => {
                return Ok(LpSolution {
                    status: LpStatus::IterationLimit,
                    optimum: BigRational::zero(),
                    level_coeffs: vec![BigRational::zero(); nv / 2],
                });
            }
        }
        // cost[rhs] = -objective; infeasible iff some artificial mass
        // remains.
        if tableau.cost[rhs_col].is_negative() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                optimum: BigRational::zero(),
                level_coeffs: vec![BigRational::zero(); nv / 2],
            });
        }
        // Drive any degenerate basic artificial out of the basis.
        for i in 0..m {
            if tableau.basis[i] >= nv + m {
                if let Some(col) = (0..nv + m).find(|&j| !tableau.rows[i][j].is_zero()) {
                    if tableau.pivots_left == 0 {
                        return Ok(LpSolution {
                            status: LpStatus::IterationLimit,
                            optimum: BigRational::zero(),
                            level_coeffs: vec![BigRational::zero(); nv / 2],
                        });
                    }
                    tableau.pivots_left -= 1;
                    tableau.pivot(i, col);
                }
                // An all-zero row is a redundant constraint; its artificial
                // stays basic at value zero and is simply never eligible
                // again.
            }
        }
    }

    // Phase 2: original objective, artificial columns frozen.
    let mut cost = vec![BigRational::zero(); width];
    cost[..nv].clone_from_slice(&inst.objective);
    for i in 0..m {
        let b = tableau.basis[i];
        if !cost[b].is_zero() {
            let factor = std::mem::replace(&mut cost[b], BigRational::zero());
            let row = tableau.rows[i].clone();
            for (v, p) in cost.iter_mut().zip(&row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            cost[b] = BigRational::zero();
        }
    }
    tableau.cost = cost;
    let mut eligible = vec![false; width - 1];
    for e in eligible.iter_mut().take(nv + m) {
        *e = true;
    }
    match tableau.run(&eligible) {
        PhaseOutcome::Optimal => {}
        PhaseOutcome::Unbounded => return Err(Error::LpUnbounded),
        PhaseOutcome::OutOfPivots => {
            return Ok(LpSolution {
                status: LpStatus::IterationLimit,
                optimum: BigRational::zero(),
                level_coeffs: vec![BigRational::zero(); nv / 2],
            });
        }
    }

    let mut values = vec![BigRational::zero(); nv];
    for (i, &b) in tableau.basis.iter().enumerate() {
        if b < nv {
            values[b] = tableau.rows[i][rhs_col].clone();
        }
    }
    let optimum = -tableau.cost[rhs_col].clone();
    let half = nv / 2;
    let level_coeffs = (0..half).map(|k| &values[k] - &values[half + k]).collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        optimum,
        level_coeffs,
    })
}

/// Exact feasibility check of level coefficients against f at accuracy eps:
/// |sum_k c_k K_k(m) - f(m)| <= eps at every weight m.
pub fn verify_level_feasibility(
    f: &SymmetricFunction,
    epsilon: &Exact,
    level_coeffs: &[Exact],
) -> bool {
    let n = f.n();
    if level_coeffs.len() != n + 1 {
        return false;
    }
    let kraw = krawtchouk_table(n);
    for m in 0..=n {
        let mut v = BigRational::zero();
        for k in 0..=n {
            if !level_coeffs[k].is_zero() {
                v += &level_coeffs[k] * BigRational::from_integer(kraw[k][m].clone());
            }
        }
        let diff = (v - exact_int(f.levels()[m] as i64)).abs();
        if &diff > epsilon {
            return false;
        }
    }
    true
}

/// The approximate spectral norm of f at accuracy eps, exact. The returned
/// optimum's coefficients are re-verified feasible before it is accepted.
pub fn approx_spectral_norm(f: &SymmetricFunction, epsilon: &Exact) -> Result<Exact> {
    let inst = build_symmetric_l1_lp(f, epsilon)?;
    let sol = solve_lp(&inst)?;
    match sol.status {
        LpStatus::Optimal => {
            if !verify_level_feasibility(f, epsilon, &sol.level_coeffs) {
                return Err(Error::Invalid(
                    "solver returned an infeasible optimum".into(),
                ));
            }
            Ok(sol.optimum)
        }
        LpStatus::Infeasible => Err(Error::Invalid(
            "norm approximation LP reported infeasible, which cannot happen".into(),
        )),
        LpStatus::IterationLimit => Err(Error::Invalid(format!(
            "simplex hit the {SIMPLEX_ITERATION_CAP}-pivot cap"
        ))),
    }
}

/// Norm-vs-approximate-norm comparison for one function.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub log_l1: f64,
    /// Exact approximate norm at accuracy 1/3, as a decimal string "p/q".
    pub approx_norm: String,
    pub log_l1_approx: f64,
    /// log_l1 / log_l1_approx; None when the approximate norm is <= 1.
    pub ratio: Option<f64>,
    /// ratio divided by log2 n (the growth comparison suppresses
    /// polylogarithmic factors).
    pub normalized_ratio: Option<f64>,
}

/// Compare log2 of the exact and 1/3-approximate spectral norms.
pub fn conjecture_ratio(f: &SymmetricFunction) -> Result<ConjectureReport> {
    let n = f.n();
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "norm comparison needs n >= 2, got {n}"
        )));
    }
    let l1 = spectral_norm(&level_spectrum(f));
    let approx = approx_spectral_norm(f, &crate::exact::exact_ratio(1, 3))?;
    let log_l1 = crate::exact::log2_rational(&l1);
    let log_l1_approx = if approx.is_zero() {
        f64::NEG_INFINITY
    } else {
        crate::exact::log2_rational(&approx)
    };
    let (ratio, normalized_ratio) = if approx > BigRational::one() {
        let r = log_l1 / log_l1_approx;
        (Some(r), Some(r / (n as f64).log2()))
    } else {
        (None, None)
    };
    Ok(ConjectureReport {
        n,
        log_l1,
        approx_norm: crate::exact::format_exact(&approx),
        log_l1_approx,
        ratio,
        normalized_ratio,
    })
}

/// Render an instance in LP text interchange format (coefficients as
/// shortest round-trip decimals; intended for cross-checks at 1e-9 relative
/// tolerance, since rational values are not representable exactly).
pub fn to_lp_format(inst: &LpInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "\\ l1 approximation instance, n = {}, eps = {}\n",
        inst.n,
        crate::exact::format_exact(&inst.epsilon)
    ));
    out.push_str("Minimize\n obj:");
    let mut first = true;
    for (j, c) in inst.objective.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        push_term(&mut out, c, &inst.var_names[j], &mut first);
    }
    out.push_str("\nSubject To\n");
    for (i, (coeffs, rhs)) in inst.rows.iter().enumerate() {
        out.push_str(&format!(" {}:", inst.row_names[i]));
        let mut first = true;
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            push_term(&mut out, c, &inst.var_names[j], &mut first);
        }
        out.push_str(&format!(" <= {}\n", rational_to_f64(rhs)));
    }
    out.push_str("End\n");
    out
}

fn push_term(out: &mut String, c: &Exact, name: &str, first: &mut bool) {
    let v = rational_to_f64(c);
    if *first {
        out.push_str(&format!(" {v} {name}"));
        *first = false;
    } else if v.is_sign_negative() {
        out.push_str(&format!(" - {} {name}", -v));
    } else {
        out.push_str(&format!(" + {v} {name}"));
    }
}
