//! Structural parameters of a symmetric function: how far its level pattern
//! is from one of the four "simple" patterns (the constants and the two
//! signed parities), plus the weighted quadratic functional and the
//! derivative-energy identity tied to it.

use crate::exact::{binomial, binomial_row, exact_int, pow2, Exact};
use crate::function::SymmetricFunction;
use crate::spectrum::LevelSpectrum;
use num::{BigInt, BigRational, Zero};
use serde::Serialize;
use std::fmt;

/// The four reference level patterns a symmetric function is compared
/// against. Listed in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pattern {
    #[serde(rename = "+1")]
    PlusOne,
    #[serde(rename = "-1")]
    MinusOne,
    #[serde(rename = "+parity")]
    PlusParity,
    #[serde(rename = "-parity")]
    MinusParity,
}

pub const ALL_PATTERNS: [Pattern; 4] = [
    Pattern::PlusOne,
    Pattern::MinusOne,
    Pattern::PlusParity,
    Pattern::MinusParity,
];

impl Pattern {
    /// Expected level value at weight k.
    pub fn level_value(self, k: usize) -> i8 {
        let parity: i8 = if k % 2 == 0 { 1 } else { -1 };
        match self {
            Pattern::PlusOne => 1,
            Pattern::MinusOne => -1,
            Pattern::PlusParity => parity,
            Pattern::MinusParity => -parity,
        }
    }

    /// Whether a residual against this pattern needs a parity factor.
    pub fn is_parity_type(self) -> bool {
        matches!(self, Pattern::PlusParity | Pattern::MinusParity)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pattern::PlusOne => "+1",
            Pattern::MinusOne => "-1",
            Pattern::PlusParity => "+parity",
            Pattern::MinusParity => "-parity",
        };
        f.write_str(s)
    }
}

/// Deviation radii of one function against one pattern.
///
/// With mid = ceil(n/2): r0 = 1 + the largest mismatched level below mid
/// (0 when the low half matches), and r1 = n + 1 - the smallest mismatched
/// level at or above mid (0 when the high half matches). The fit is usable
/// only when both 2 r0 < n and 2 r1 < n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternFit {
    pub pattern: Pattern,
    pub r0: usize,
    pub r1: usize,
    pub valid: bool,
}

impl PatternFit {
    pub fn max_radius(&self) -> usize {
        self.r0.max(self.r1)
    }
}

/// Fit of a single pattern.
pub fn pattern_fit(f: &SymmetricFunction, pattern: Pattern) -> PatternFit {
    let n = f.n();
    let mid = n.div_ceil(2);
    let mut r0 = 0usize;
    let mut r1 = 0usize;
    for k in 0..mid {
        if f.levels()[k] != pattern.level_value(k) {
            r0 = k + 1;
        }
    }
    for k in (mid..=n).rev() {
        if f.levels()[k] != pattern.level_value(k) {
            r1 = n + 1 - k;
        }
    }
    PatternFit {
        pattern,
        r0,
        r1,
        valid: 2 * r0 < n && 2 * r1 < n,
    }
}

/// Chosen pattern and radii for one function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureReport {
    pub n: usize,
    pub pattern: Pattern,
    pub r0: usize,
    pub r1: usize,
    /// max(r0, r1); floor(n/2) when clamped.
    pub r: usize,
    /// True when no pattern fits with both radii strictly below n/2. The
    /// radii are then clamped to floor(n/2) and `pattern` is the first
    /// pattern agreeing with f on the middle window.
    pub clamped: bool,
}

/// Best pattern fit: minimize max(r0, r1), then r0 + r1, then pattern order.
pub fn r_parameters(f: &SymmetricFunction) -> StructureReport {
    let n = f.n();
    let mut best: Option<PatternFit> = None;
    for p in ALL_PATTERNS {
        let fit = pattern_fit(f, p);
        if !fit.valid {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                (fit.max_radius(), fit.r0 + fit.r1) < (b.max_radius(), b.r0 + b.r1)
            }
        };
        if better {
            best = Some(fit);
        }
    }
    match best {
        Some(fit) => StructureReport {
            n,
            pattern: fit.pattern,
            r0: fit.r0,
            r1: fit.r1,
            r: fit.max_radius(),
            clamped: false,
        },
        None => {
            let r = n / 2;
            // Clamped radii leave the window [r, n-r] (one level for even n,
            // two for odd); some pattern always matches f there.
            let window = r..=(n - r);
            let pattern = ALL_PATTERNS
                .into_iter()
                .find(|p| window.clone().all(|k| f.levels()[k] == p.level_value(k)))
                .expect("a two-level window always matches one of four patterns");
            StructureReport {
                n,
                pattern,
                r0: r,
                r1: r,
                r,
                clamped: true,
            }
        }
    }
}

/// Boundary radii from sign changes between consecutive levels.
///
/// With V = { i : f(i) != f(i+1) } and mid = ceil(n/2): t0 = 1 + the largest
/// boundary below mid (0 if none), t1 = n - the smallest boundary at or
/// above mid (0 if none).
pub fn paturi_t(f: &SymmetricFunction) -> (usize, usize) {
    let n = f.n();
    let mid = n.div_ceil(2);
    let mut t0 = 0usize;
    let mut t1 = 0usize;
    for i in 0..n {
        if f.levels()[i] != f.levels()[i + 1] {
            if i < mid {
                t0 = i + 1;
            } else if t1 == 0 {
                t1 = n - i;
            }
        }
    }
    (t0, t1)
}

/// Weighted quadratic functional R(f) = sum_k C(n,k) k (n-k) coeff_k^2.
pub fn r_functional(spec: &LevelSpectrum) -> Exact {
    let n = spec.n;
    let row = binomial_row(n);
    let mut acc = BigRational::zero();
    for (k, c) in spec.coeffs.iter().enumerate() {
        if k == 0 || k == n || c.is_zero() {
            continue;
        }
        let scale = &row[k] * BigInt::from((k * (n - k)) as u64);
        acc += BigRational::from_integer(scale) * c * c;
    }
    acc
}

/// Average squared double-step difference, scaled:
/// n (n-1) / 2 * 2^-(n-2) * sum_m C(n-2,m) (f(m+2) - f(m))^2.
///
/// Equals 8 R(f) for every symmetric Boolean function; zero when n < 2.
pub fn derivative_energy(f: &SymmetricFunction) -> Exact {
    let n = f.n();
    if n < 2 {
        return exact_int(0);
    }
    let mut sum = BigInt::zero();
    for m in 0..=(n - 2) {
        let d = (f.levels()[m + 2] - f.levels()[m]) as i64;
        if d != 0 {
            sum += binomial(n - 2, m) * BigInt::from(d * d);
        }
    }
    let scale = BigInt::from((n * (n - 1)) as u64);
    BigRational::new(scale * sum, BigInt::from(2) * pow2(n - 2))
}
