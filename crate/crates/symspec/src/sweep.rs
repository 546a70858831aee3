//! Sweep driver: analyze a whole corpus of functions at one n and emit a
//! CSV stream with an envelope-ratio summary footer.
//!
//! Three corpora are supported: `exhaustive` (every level pattern, capped
//! at n = 16), `families` (one row per named family), and `random` (100
//! seeded pseudorandom patterns). Row order is fixed — lexicographic level
//! pattern for exhaustive mode, declaration order otherwise — and workers
//! write into their precomputed row slots, so parallel runs are
//! byte-identical to serial ones.

use crate::analysis::{analyze, csv_row, format_float, AnalysisOptions, Numeric, CSV_HEADER};
use crate::dsl::parse_to_function;
use crate::error::{Error, Result};
use crate::function::SymmetricFunction;
use rayon::prelude::*;
use std::fmt;

/// Largest n accepted in exhaustive mode (2^(n+1) functions).
pub const EXHAUSTIVE_N_CAP: usize = 16;

/// Number of functions in a random-mode sweep (seeds 0..100).
pub const RANDOM_SWEEP_COUNT: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Families,
    Random,
}

impl std::str::FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SweepMode::Exhaustive),
            "families" => Ok(SweepMode::Families),
            "random" => Ok(SweepMode::Random),
            other => Err(Error::OutOfRange(format!(
                "unknown sweep mode '{other}' (expected exhaustive, families, or random)"
            ))),
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            SweepMode::Exhaustive => "exhaustive",
            SweepMode::Families => "families",
            SweepMode::Random => "random",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub n: usize,
    pub mode: SweepMode,
    /// Worker threads for row computation; must be >= 1.
    pub workers: usize,
    /// Exact-arithmetic threshold passed through to row analysis.
    pub exact_limit: usize,
    /// Emitted as a leading comment line when present; omit for
    /// byte-reproducible output.
    pub generated_at: Option<String>,
}

/// A finished sweep: the CSV text plus the footer aggregates.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub text: String,
    pub rows: usize,
    /// Smallest envelope ratio over rows with r > 1, if any.
    pub min_ratio: Option<f64>,
    /// Largest envelope ratio over rows with r > 1, if any.
    pub max_ratio: Option<f64>,
}

/// The named-family specs swept at a given n, in row order.
pub fn family_specs(n: usize) -> Vec<String> {
    let mut out = vec![
        format!("maj:{n}"),
        format!("and:{n}"),
        format!("or:{n}"),
        format!("parity:{n}"),
        format!("mod:3:{n}"),
        format!("threshold:{}:{n}", n.div_ceil(2)),
        format!("g:1:{n}"),
    ];
    if n >= 2 {
        out.push(format!("g:2:{n}"));
    }
    out
}

fn corpus(n: usize, mode: SweepMode) -> Result<Vec<(String, SymmetricFunction)>> {
    if n == 0 {
        return Err(Error::OutOfRange("sweep requires n >= 1".into()));
    }
    match mode {
        SweepMode::Exhaustive => {
            if n > EXHAUSTIVE_N_CAP {
                return Err(Error::OutOfRange(format!(
                    "exhaustive sweeps enumerate 2^(n+1) functions and are capped at \
                     n = {EXHAUSTIVE_N_CAP}; got n = {n}. Use --mode random or \
                     --mode families for larger n"
                )));
            }
            Ok(SymmetricFunction::enumerate(n)
                .map(|f| (f.pattern_string(), f))
                .collect())
        }
        SweepMode::Families => family_specs(n)
            .into_iter()
            .map(|id| Ok((id.clone(), parse_to_function(&id)?)))
            .collect(),
        SweepMode::Random => Ok((0..RANDOM_SWEEP_COUNT)
            .map(|seed| {
                let f = SymmetricFunction::seeded_random(seed, n)
                    .expect("n >= 1 checked above");
                (format!("random:{seed}:{n}"), f)
            })
            .collect()),
    }
}

/// Run a sweep and render the full CSV document.
pub fn run_sweep(opts: &SweepOptions) -> Result<SweepOutput> {
    if opts.workers == 0 {
        return Err(Error::OutOfRange("worker count must be >= 1".into()));
    }
    let items = corpus(opts.n, opts.mode)?;
    let row_opts = AnalysisOptions {
        epsilon: None,
        exact_limit: opts.exact_limit,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::Invalid(format!("worker pool: {e}")))?;
    let rendered: Result<Vec<(String, Option<f64>)>> = pool.install(|| {
        items
            .par_iter()
            .map(|(id, f)| {
                let row = analyze(f, id, &row_opts)?;
                let ratio = match row.envelope_ratio {
                    Some(Numeric::Float(v)) => Some(v),
                    _ => None,
                };
                Ok((csv_row(&row), ratio))
            })
            .collect()
    });
    let rendered = rendered?;

    let mut min_ratio: Option<f64> = None;
    let mut max_ratio: Option<f64> = None;
    for (_, ratio) in &rendered {
        if let Some(v) = ratio {
            min_ratio = Some(min_ratio.map_or(*v, |m| m.min(*v)));
            max_ratio = Some(max_ratio.map_or(*v, |m| m.max(*v)));
        }
    }

    let mut text = String::new();
    if let Some(ts) = &opts.generated_at {
        text.push_str("# generated_at: ");
        text.push_str(ts);
        text.push('\n');
    }
    text.push_str(CSV_HEADER);
    text.push('\n');
    for (line, _) in &rendered {
        text.push_str(line);
        text.push('\n');
    }
    text.push_str(&format!("# functions: {}\n", rendered.len()));
    let fmt_ratio = |r: Option<f64>| r.map_or("none".to_string(), format_float);
    text.push_str(&format!("# min_envelope_ratio: {}\n", fmt_ratio(min_ratio)));
    text.push_str(&format!("# max_envelope_ratio: {}\n", fmt_ratio(max_ratio)));

    Ok(SweepOutput {
        text,
        rows: rendered.len(),
        min_ratio,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn options(n: usize, mode: SweepMode, workers: usize) -> SweepOptions {
        SweepOptions {
            n,
            mode,
            workers,
            exact_limit: crate::DEFAULT_EXACT_LIMIT,
            generated_at: None,
        }
    }

    #[test]
    fn exhaustive_row_count_and_order() {
        let out = run_sweep(&options(3, SweepMode::Exhaustive, 1)).unwrap();
        assert_eq!(out.rows, 16);
        let lines: Vec<&str> = out.text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("1,++++,3,"));
        assert!(lines[2].starts_with("1,+++-,3,"));
        assert!(lines[16].starts_with("1,----,3,"));
        assert_eq!(lines[17], "# functions: 16");
        assert!(lines[18].starts_with("# min_envelope_ratio: "));
        assert!(lines[19].starts_with("# max_envelope_ratio: "));
    }

    #[test]
    fn exhaustive_cap_enforced() {
        let err = run_sweep(&options(17, SweepMode::Exhaustive, 1)).unwrap_err();
        assert!(err.to_string().contains("capped at n = 16"));
    }

    #[test]
    fn parallel_output_matches_serial() {
        let serial = run_sweep(&options(6, SweepMode::Exhaustive, 1)).unwrap();
        let parallel = run_sweep(&options(6, SweepMode::Exhaustive, 4)).unwrap();
        assert_eq!(serial.text, parallel.text);
    }

    #[test]
    fn families_rows() {
        let out = run_sweep(&options(8, SweepMode::Families, 2)).unwrap();
        assert_eq!(out.rows, 8);
        assert!(out.text.contains("\n1,maj:8,8,"));
        assert!(out.text.contains("\n1,threshold:4:8,8,"));
        assert!(out.text.contains("\n1,g:2:8,8,"));
        // n = 1 drops the g:2 row.
        let small = run_sweep(&options(1, SweepMode::Families, 1)).unwrap();
        assert_eq!(small.rows, 7);
    }

    #[test]
    fn random_mode_is_deterministic() {
        let a = run_sweep(&options(5, SweepMode::Random, 3)).unwrap();
        let b = run_sweep(&options(5, SweepMode::Random, 1)).unwrap();
        assert_eq!(a.rows, 100);
        assert_eq!(a.text, b.text);
        assert!(a.text.contains("1,random:0:5,5,"));
        assert!(a.text.contains("1,random:99:5,5,"));
    }

    #[test]
    fn footer_ratios_appear_when_defined() {
        // At n = 4 the clamped patterns carry r = 2 > 1, so ratios exist.
        let out = run_sweep(&options(4, SweepMode::Exhaustive, 1)).unwrap();
        let (min, max) = (out.min_ratio.unwrap(), out.max_ratio.unwrap());
        assert!(min > 0.0 && min.is_finite());
        assert!(max >= min && max.is_finite());
        assert!(out
            .text
            .contains(&format!("# min_envelope_ratio: {}", format_float(min))));
    }

    #[test]
    fn timestamp_line_is_optional() {
        let mut opts = options(2, SweepMode::Exhaustive, 1);
        opts.generated_at = Some("2026-01-01T00:00:00Z".into());
        let stamped = run_sweep(&opts).unwrap();
        assert!(stamped
            .text
            .starts_with("# generated_at: 2026-01-01T00:00:00Z\n"));
        opts.generated_at = None;
        let bare = run_sweep(&opts).unwrap();
        assert!(bare.text.starts_with(CSV_HEADER));
        assert_eq!(stamped.text.lines().count(), bare.text.lines().count() + 1);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("exhaustive".parse::<SweepMode>().unwrap(), SweepMode::Exhaustive);
        assert_eq!("families".parse::<SweepMode>().unwrap(), SweepMode::Families);
        assert_eq!("random".parse::<SweepMode>().unwrap(), SweepMode::Random);
        assert!("all".parse::<SweepMode>().is_err());
    }
}
