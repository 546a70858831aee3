//! The level-value representation of a symmetric Boolean function.

use crate::error::{Error, Result};

/// A symmetric function f: {0,1}^n -> {-1,+1}, stored as its value on each
/// Hamming weight. Invariants: n >= 1, `levels.len() == n + 1`, every entry
/// is +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricFunction {
    n: usize,
    levels: Vec<i8>,
}

impl SymmetricFunction {
    /// Build from per-level values; `levels[k]` is f on weight-k inputs.
    pub fn from_levels(levels: Vec<i8>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::TooFewLevels(levels.len()));
        }
        for &v in &levels {
            if v != 1 && v != -1 {
                return Err(Error::BadLevelValue(v as i64));
            }
        }
        Ok(Self { n: levels.len() - 1, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[i8] {
        &self.levels
    }

    /// Value on inputs of Hamming weight k.
    pub fn at_weight(&self, k: usize) -> Result<i8> {
        self.levels
            .get(k)
            .copied()
            .ok_or(Error::LevelOutOfRange { index: k, n: self.n })
    }

    /// Canonical level string, e.g. `+--+` for maj on 3 bits.
    pub fn pattern_string(&self) -> String {
        self.levels
            .iter()
            .map(|&v| if v > 0 { '+' } else { '-' })
            .collect()
    }

    /// Pointwise negation -f.
    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            levels: self.levels.iter().map(|&v| -v).collect(),
        }
    }

    /// Pointwise product with the full parity character: level k picks up
    /// (-1)^k. Spectral levels of the product are those of f reversed.
    pub fn times_parity(&self) -> Self {
        Self {
            n: self.n,
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(k, &v)| if k % 2 == 0 { v } else { -v })
                .collect(),
        }
    }

    /// Full truth table of length 2^n with `x` encoded so bit i of the index
    /// is x_{i+1}; refuses n above `cap` to keep the oracle honest about its
    /// exponential cost.
    pub fn truth_table(&self, cap: usize) -> Result<Vec<i8>> {
        if self.n > cap {
            return Err(Error::OracleCapExceeded { n: self.n, cap });
        }
        let size = 1usize << self.n;
        Ok((0..size)
            .map(|x| self.levels[(x as u64).count_ones() as usize])
            .collect())
    }

    /// All 2^(n+1) symmetric functions on n variables, in lexicographic order
    /// of their level strings ('+' sorts before '-').
    pub fn enumerate(n: usize) -> impl Iterator<Item = SymmetricFunction> {
        assert!(n >= 1 && n < 62, "enumeration index must fit in u64");
        (0u64..1u64 << (n + 1)).map(move |idx| {
            let levels = (0..=n)
                .map(|j| if (idx >> (n - j)) & 1 == 0 { 1 } else { -1 })
                .collect();
            SymmetricFunction { n, levels }
        })
    }

    // Named families. Output encoding is b -> (-1)^b, so logical TRUE is -1.

    /// Majority: +1 iff |x| > n/2; ties (even n, |x| = n/2) go to -1.
    pub fn majority(n: usize) -> Result<Self> {
        Self::from_levels((0..=n).map(|k| if 2 * k > n { 1 } else { -1 }).collect())
    }

    /// AND of all bits: -1 exactly when |x| = n.
    pub fn and_all(n: usize) -> Result<Self> {
        Self::from_levels((0..=n).map(|k| if k == n { -1 } else { 1 }).collect())
    }

    /// OR of all bits: -1 exactly when |x| >= 1.
    pub fn or_all(n: usize) -> Result<Self> {
        Self::from_levels((0..=n).map(|k| if k == 0 { 1 } else { -1 }).collect())
    }

    /// Parity character: level k carries (-1)^k.
    pub fn parity(n: usize) -> Result<Self> {
        Self::from_levels((0..=n).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect())
    }

    /// -1 exactly when |x| is divisible by m (m >= 1).
    pub fn weight_mod(m: usize, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::OutOfRange("mod family needs m >= 1".into()));
        }
        Self::from_levels((0..=n).map(|k| if k % m == 0 { -1 } else { 1 }).collect())
    }

    /// Threshold: +1 iff |x| >= t (t in 0..=n+1; t = n+1 gives constant -1).
    pub fn threshold(t: usize, n: usize) -> Result<Self> {
        if t > n + 1 {
            return Err(Error::OutOfRange(format!(
                "threshold t = {t} out of range 0..={}",
                n + 1
            )));
        }
        Self::from_levels((0..=n).map(|k| if k >= t { 1 } else { -1 }).collect())
    }

    /// -1 exactly at level k: the single-level-flipped family.
    pub fn flipped_level(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::LevelOutOfRange { index: k, n });
        }
        Self::from_levels((0..=n).map(|j| if j == k { -1 } else { 1 }).collect())
    }

    /// Seeded pseudorandom level pattern. The generator is splitmix64 with
    /// the standard constants (increment 0x9E3779B97F4A7C15, mixers
    /// 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB, shifts 30/27/31); level k is
    /// set from the low bit of the (k+1)-th output. Fixed across platforms.
    pub fn seeded_random(seed: u64, n: usize) -> Result<Self> {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        Self::from_levels((0..=n).map(|_| if next() & 1 == 0 { 1 } else { -1 }).collect())
    }
}
