//! The per-function analysis row emitted by the CLI: structure parameters,
//! norms, bound margins, decision-tree size, and (on request) the exact
//! approximate spectral norm.
//!
//! Every measured quantity is tagged with its provenance: `exact` values are
//! rational strings ("p" or "p/q"), `float` values are shortest round-trip
//! decimals. Which side a field lands on is decided by the exact-arithmetic
//! threshold (default [`crate::DEFAULT_EXACT_LIMIT`], overridable through
//! the `SYMSPEC_EXACT_LIMIT` environment variable): above it the norm
//! aggregates come from the float path, whose inputs are still exact
//! integers.

use crate::error::Result;
use crate::exact::{format_exact, log2_rational, rational_to_f64, Exact};
use crate::function::SymmetricFunction;
use crate::lp::approx_spectral_norm;
use crate::pdt::{build_pdt, leaf_count};
use crate::spectrum::{float_summary, level_spectrum, spectral_norm};
use crate::structure::{paturi_t, r_functional, r_parameters};
use serde::Serialize;

/// Bumped on any change to the row's field set or meanings.
pub const SCHEMA_VERSION: u32 = 1;

/// A numeric value carrying its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Numeric {
    /// Exact rational, serialized as "p" or "p/q".
    Exact(String),
    /// Double-precision value from the float path (or an inherently
    /// floating-point quantity such as a logarithm).
    Float(f64),
}

impl Numeric {
    pub fn from_exact(v: &Exact) -> Self {
        Numeric::Exact(format_exact(v))
    }

    pub fn from_bigint(v: &num::BigInt) -> Self {
        Numeric::Exact(v.to_string())
    }

    /// CSV cell encoding: rationals as "p/q", floats as shortest
    /// round-trip decimals that keep a decimal point or exponent, so the
    /// two provenances stay distinguishable in flat files.
    pub fn csv_cell(&self) -> String {
        match self {
            Numeric::Exact(s) => s.clone(),
            Numeric::Float(v) => format_float(*v),
        }
    }
}

/// Shortest decimal that round-trips to the same f64. Uses the debug form,
/// which always keeps a '.' or exponent ("3.0", never "3").
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

/// Knobs for [`analyze`].
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Accuracy at which to compute the approximate spectral norm; `None`
    /// skips the linear program entirely.
    pub epsilon: Option<Exact>,
    /// Largest n analyzed on the exact rational path.
    pub exact_limit: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            epsilon: None,
            exact_limit: crate::DEFAULT_EXACT_LIMIT,
        }
    }
}

/// One function's full analysis. Field order is the CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisRow {
    pub schema_version: u32,
    pub function_id: String,
    pub n: usize,
    pub r0: usize,
    pub r1: usize,
    pub r: usize,
    /// True when no pattern fits within half the cube and the radii were
    /// clamped to floor(n/2) around a fallback pattern.
    pub clamped: bool,
    pub t0: usize,
    pub t1: usize,
    pub l1_norm: Numeric,
    /// log2 of the spectral norm; inherently float.
    pub log_l1: Numeric,
    /// Level-weighted quadratic functional sum_k C(n,k) k (n-k) f_k^2.
    pub r_functional: Numeric,
    /// log_l1 / (r log2(n/r)), defined only when r > 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_ratio: Option<Numeric>,
    /// Leaves of the pruned parity decision tree (doubled when the tree
    /// computes the parity-twisted residual).
    pub pdt_leaves: Numeric,
    /// 2 r log2(n/r) + 3 - log_l1; nonnegative iff the norm bound holds.
    /// Undefined when r = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1_upper_margin: Option<Numeric>,
    /// r_functional minus its window lower bound; needs r0, r1 >= 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_lower_margin: Option<Numeric>,
    /// Echo of the requested approximation accuracy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    /// Exact approximate spectral norm at that accuracy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx_norm: Option<Numeric>,
}

/// Fixed CSV header, one column per [`AnalysisRow`] field.
pub const CSV_HEADER: &str = "schema_version,function_id,n,r0,r1,r,clamped,t0,t1,\
l1_norm,log_l1,r_functional,envelope_ratio,pdt_leaves,l1_upper_margin,\
r_lower_margin,epsilon,approx_norm";

/// Analyze one function under the given options.
pub fn analyze(f: &SymmetricFunction, id: &str, opts: &AnalysisOptions) -> Result<AnalysisRow> {
    let n = f.n();
    let rep = r_parameters(f);
    let (t0, t1) = paturi_t(f);

    let (l1_norm, log_l1, r_value, exact_r, r_float) = if n <= opts.exact_limit {
        let spec = level_spectrum(f);
        let l1 = spectral_norm(&spec);
        let big_r = r_functional(&spec);
        let log_l1 = log2_rational(&l1);
        let r_float = rational_to_f64(&big_r);
        (
            Numeric::from_exact(&l1),
            log_l1,
            Numeric::from_exact(&big_r),
            Some(big_r),
            r_float,
        )
    } else {
        let fs = float_summary(f);
        (
            Numeric::Float(fs.l1_norm),
            fs.log2_l1,
            Numeric::Float(fs.r_functional),
            None,
            fs.r_functional,
        )
    };

    let envelope_ratio = if rep.r > 1 {
        let benchmark = rep.r as f64 * (n as f64 / rep.r as f64).log2();
        Some(Numeric::Float(log_l1 / benchmark))
    } else {
        None
    };

    let l1_upper_margin = if rep.r >= 1 {
        let bound = crate::bounds::l1_upper_bound(n, rep.r)?;
        Some(Numeric::Float(bound - log_l1))
    } else {
        None
    };

    // The window lower bound applies to the function's residual (f, -f, or
    // the parity twist), all of which share the same r_functional value.
    let r_lower_margin = if rep.r0 >= 1 && rep.r1 >= 1 {
        let bound = crate::bounds::r_lower_bound(n, rep.r0, rep.r1)?;
        Some(match &exact_r {
            Some(big_r) => Numeric::from_exact(&(big_r - &bound)),
            None => Numeric::Float(r_float - rational_to_f64(&bound)),
        })
    } else {
        None
    };

    let tree = build_pdt(f);
    let leaves = leaf_count(&tree).leaves;

    let (epsilon, approx_norm) = match &opts.epsilon {
        Some(eps) => {
            let value = approx_spectral_norm(f, eps)?;
            (
                Some(format_exact(eps)),
                Some(Numeric::from_exact(&value)),
            )
        }
        None => (None, None),
    };

    Ok(AnalysisRow {
        schema_version: SCHEMA_VERSION,
        function_id: id.to_string(),
        n,
        r0: rep.r0,
        r1: rep.r1,
        r: rep.r,
        clamped: rep.clamped,
        t0,
        t1,
        l1_norm,
        log_l1: Numeric::Float(log_l1),
        r_functional: r_value,
        envelope_ratio,
        pdt_leaves: Numeric::from_bigint(&leaves),
        l1_upper_margin,
        r_lower_margin,
        epsilon,
        approx_norm,
    })
}

fn option_cell(v: &Option<Numeric>) -> String {
    v.as_ref().map(Numeric::csv_cell).unwrap_or_default()
}

/// Render one CSV data line matching [`CSV_HEADER`]. Cell values never
/// contain commas or quotes (ids come from the spec DSL), so no escaping
/// is involved.
pub fn csv_row(row: &AnalysisRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        row.schema_version,
        row.function_id,
        row.n,
        row.r0,
        row.r1,
        row.r,
        row.clamped,
        row.t0,
        row.t1,
        row.l1_norm.csv_cell(),
        row.log_l1.csv_cell(),
        row.r_functional.csv_cell(),
        option_cell(&row.envelope_ratio),
        row.pdt_leaves.csv_cell(),
        option_cell(&row.l1_upper_margin),
        option_cell(&row.r_lower_margin),
        row.epsilon.clone().unwrap_or_default(),
        option_cell(&row.approx_norm),
    )
}

/// JSON document for one row, with an optional generation timestamp merged
/// in ahead of the row fields.
#[derive(Debug, Serialize)]
pub struct AnalysisDocument<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    #[serde(flatten)]
    pub row: &'a AnalysisRow,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_ratio;

    fn row_for(id: &str, opts: &AnalysisOptions) -> AnalysisRow {
        let f = crate::dsl::parse_to_function(id).unwrap();
        analyze(&f, id, opts).unwrap()
    }

    #[test]
    fn majority_of_three_row() {
        let row = row_for("maj:3", &AnalysisOptions::default());
        assert_eq!(row.n, 3);
        assert_eq!((row.r0, row.r1, row.r), (1, 1, 1));
        assert!(!row.clamped);
        assert_eq!(row.l1_norm, Numeric::Exact("2".into()));
        assert_eq!(row.log_l1, Numeric::Float(1.0));
        assert_eq!(row.r_functional, Numeric::Exact("3/2".into()));
        // Equality instance of the window lower bound.
        assert_eq!(row.r_lower_margin, Some(Numeric::Exact("0".into())));
        assert_eq!(row.pdt_leaves, Numeric::Exact("8".into()));
        assert!(row.envelope_ratio.is_none()); // r = 1
        let Some(Numeric::Float(margin)) = row.l1_upper_margin else {
            panic!("margin expected for r = 1");
        };
        let expected = 2.0 * 3.0_f64.log2() + 3.0 - 1.0;
        assert!((margin - expected).abs() < 1e-12);
        assert!(row.approx_norm.is_none());
    }

    #[test]
    fn parity_row_has_no_bound_margins() {
        let row = row_for("parity:8", &AnalysisOptions::default());
        assert_eq!((row.r0, row.r1, row.r), (0, 0, 0));
        assert_eq!(row.l1_norm, Numeric::Exact("1".into()));
        assert_eq!(row.log_l1, Numeric::Float(0.0));
        assert!(row.l1_upper_margin.is_none());
        assert!(row.r_lower_margin.is_none());
        assert!(row.envelope_ratio.is_none());
        assert_eq!(row.pdt_leaves, Numeric::Exact("2".into()));
    }

    #[test]
    fn single_flipped_level_norm() {
        let row = row_for("g:1:4", &AnalysisOptions::default());
        assert_eq!(row.l1_norm, Numeric::Exact("3".into()));
    }

    #[test]
    fn requested_accuracy_adds_exact_approx_norm() {
        let opts = AnalysisOptions {
            epsilon: Some(exact_ratio(1, 3)),
            ..Default::default()
        };
        let row = row_for("maj:3", &opts);
        assert_eq!(row.epsilon.as_deref(), Some("1/3"));
        assert_eq!(row.approx_norm, Some(Numeric::Exact("4/3".into())));
    }

    #[test]
    fn float_path_tracks_exact_path() {
        let exact = row_for("maj:9", &AnalysisOptions::default());
        let opts = AnalysisOptions {
            exact_limit: 4,
            ..Default::default()
        };
        let float = row_for("maj:9", &opts);
        let Numeric::Exact(l1) = &exact.l1_norm else {
            panic!()
        };
        let Numeric::Float(l1_f) = float.l1_norm else {
            panic!()
        };
        let l1_exact: f64 = {
            let parts: Vec<&str> = l1.split('/').collect();
            let p: f64 = parts[0].parse().unwrap();
            let q: f64 = parts.get(1).map_or(1.0, |s| s.parse().unwrap());
            p / q
        };
        assert!((l1_f - l1_exact).abs() / l1_exact < 1e-9);
        // 315/32
        let Numeric::Float(rf) = float.r_functional else {
            panic!()
        };
        assert!((rf - 9.84375).abs() < 1e-9);
        // Structure fields are integer scans, identical on both paths.
        assert_eq!(
            (exact.r0, exact.r1, exact.r, exact.t0, exact.t1),
            (float.r0, float.r1, float.r, float.t0, float.t1)
        );
        assert_eq!(exact.pdt_leaves, float.pdt_leaves);
    }

    #[test]
    fn csv_layout() {
        assert_eq!(CSV_HEADER.split(',').count(), 18);
        let opts = AnalysisOptions {
            epsilon: Some(exact_ratio(1, 3)),
            ..Default::default()
        };
        let line = csv_row(&row_for("maj:3", &opts));
        assert_eq!(line.split(',').count(), 18);
        assert!(line.starts_with("1,maj:3,3,1,1,1,false,2,0,2,1.0,3/2,"));
        assert!(line.ends_with(",1/3,4/3"));
        // Empty cells where margins are undefined.
        let parity = csv_row(&row_for("parity:4", &AnalysisOptions::default()));
        assert!(parity.contains(",,"));
    }

    #[test]
    fn json_provenance_tags() {
        let row = row_for("maj:3", &AnalysisOptions::default());
        let doc = AnalysisDocument {
            generated_at: None,
            row: &row,
        };
        let value: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(value["l1_norm"]["exact"], "2");
        assert_eq!(value["log_l1"]["float"], 1.0);
        assert_eq!(value["r_functional"]["exact"], "3/2");
        assert!(value.get("generated_at").is_none());
        assert!(value.get("approx_norm").is_none());

        let stamped = AnalysisDocument {
            generated_at: Some("2026-01-01T00:00:00Z".into()),
            row: &row,
        };
        let value: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&stamped).unwrap()).unwrap();
        assert_eq!(value["generated_at"], "2026-01-01T00:00:00Z");
    }

    #[test]
    fn float_cells_keep_a_decimal_marker() {
        assert_eq!(format_float(3.0), "3.0");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(1e300), "1e300");
    }
}
