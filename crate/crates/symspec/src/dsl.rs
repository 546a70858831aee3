//! The function-specification mini-language used by the CLI.
//!
//! A spec is either a named family (`maj:7`, `mod:3:12`, `random:42:16`, ...)
//! or a literal level string over `+`/`-` read bottom level first, so
//! `"+--+"` is the n = 3 function with f = +1 at weights 0 and 3. Parsing is
//! deterministic, errors carry the byte position of the offending segment,
//! and `format(parse(s))` is canonical: it round-trips to the same function.

use crate::error::{Error, Result};
use crate::function::SymmetricFunction;
use std::fmt;

/// A parsed, validated function specification. Converting to a
/// [`SymmetricFunction`] cannot fail once a spec has been parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionSpec {
    /// `maj:n` — +1 iff |x| > n/2 (even-n ties go to -1).
    Majority(usize),
    /// `and:n` — -1 exactly at |x| = n.
    And(usize),
    /// `or:n` — -1 iff |x| >= 1.
    Or(usize),
    /// `parity:n` — (-1)^|x|.
    Parity(usize),
    /// `mod:m:n` — -1 iff |x| ≡ 0 (mod m).
    Mod { modulus: usize, n: usize },
    /// `threshold:t:n` — +1 iff |x| >= t.
    Threshold { t: usize, n: usize },
    /// `g:k:n` — -1 exactly at |x| = k.
    FlippedLevel { k: usize, n: usize },
    /// `random:seed:n` — level signs drawn from a seeded splitmix64 stream.
    Random { seed: u64, n: usize },
    /// A raw level pattern such as `+--+`.
    Literal(String),
}

impl FunctionSpec {
    /// Instantiate the function. Parsed specs always satisfy the
    /// constructors' preconditions.
    pub fn to_function(&self) -> SymmetricFunction {
        let built = match *self {
            FunctionSpec::Majority(n) => SymmetricFunction::majority(n),
            FunctionSpec::And(n) => SymmetricFunction::and_all(n),
            FunctionSpec::Or(n) => SymmetricFunction::or_all(n),
            FunctionSpec::Parity(n) => SymmetricFunction::parity(n),
            FunctionSpec::Mod { modulus, n } => SymmetricFunction::weight_mod(modulus, n),
            FunctionSpec::Threshold { t, n } => SymmetricFunction::threshold(t, n),
            FunctionSpec::FlippedLevel { k, n } => SymmetricFunction::flipped_level(k, n),
            FunctionSpec::Random { seed, n } => SymmetricFunction::seeded_random(seed, n),
            FunctionSpec::Literal(ref s) => SymmetricFunction::from_levels(
                s.bytes().map(|b| if b == b'+' { 1 } else { -1 }).collect(),
            ),
        };
        built.expect("parser validates every constructor precondition")
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FunctionSpec::Majority(n) => write!(out, "maj:{n}"),
            FunctionSpec::And(n) => write!(out, "and:{n}"),
            FunctionSpec::Or(n) => write!(out, "or:{n}"),
            FunctionSpec::Parity(n) => write!(out, "parity:{n}"),
            FunctionSpec::Mod { modulus, n } => write!(out, "mod:{modulus}:{n}"),
            FunctionSpec::Threshold { t, n } => write!(out, "threshold:{t}:{n}"),
            FunctionSpec::FlippedLevel { k, n } => write!(out, "g:{k}:{n}"),
            FunctionSpec::Random { seed, n } => write!(out, "random:{seed}:{n}"),
            FunctionSpec::Literal(ref s) => out.write_str(s),
        }
    }
}

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

// One colon-separated segment with its byte offset in the original text.
fn segments(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, b) in text.bytes().enumerate() {
        if b == b':' {
            out.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &text[start..]));
    out
}

fn parse_number<T: std::str::FromStr>(seg: (usize, &str), what: &str) -> Result<T> {
    let (pos, text) = seg;
    if text.is_empty() {
        return Err(parse_error(pos, format!("missing {what}")));
    }
    text.parse::<T>()
        .map_err(|_| parse_error(pos, format!("invalid {what} '{text}'")))
}

fn parse_n(seg: (usize, &str)) -> Result<usize> {
    let n: usize = parse_number(seg, "variable count")?;
    if n == 0 {
        return Err(parse_error(seg.0, "n must be at least 1"));
    }
    Ok(n)
}

/// Parse a spec string. Errors carry the byte offset of the offending
/// segment within `text`.
pub fn parse_function_spec(text: &str) -> Result<FunctionSpec> {
    if text.is_empty() {
        return Err(parse_error(0, "empty function spec"));
    }
    if text.starts_with(['+', '-']) {
        for (i, b) in text.bytes().enumerate() {
            if b != b'+' && b != b'-' {
                return Err(parse_error(
                    i,
                    format!("level strings use only '+' and '-', found {:?}", b as char),
                ));
            }
        }
        if text.len() < 2 {
            return Err(parse_error(0, "level string needs at least 2 levels (n >= 1)"));
        }
        return Ok(FunctionSpec::Literal(text.to_string()));
    }

    let segs = segments(text);
    let name = segs[0].1;
    let arity = |want: usize| -> Result<()> {
        if segs.len() - 1 == want {
            Ok(())
        } else {
            Err(parse_error(
                segs[0].0,
                format!(
                    "family '{name}' takes {want} argument{}, got {}",
                    if want == 1 { "" } else { "s" },
                    segs.len() - 1
                ),
            ))
        }
    };

    match name {
        "maj" => {
            arity(1)?;
            Ok(FunctionSpec::Majority(parse_n(segs[1])?))
        }
        "and" => {
            arity(1)?;
            Ok(FunctionSpec::And(parse_n(segs[1])?))
        }
        "or" => {
            arity(1)?;
            Ok(FunctionSpec::Or(parse_n(segs[1])?))
        }
        "parity" => {
            arity(1)?;
            Ok(FunctionSpec::Parity(parse_n(segs[1])?))
        }
        "mod" => {
            arity(2)?;
            let modulus: usize = parse_number(segs[1], "modulus")?;
            let n = parse_n(segs[2])?;
            if modulus == 0 {
                return Err(parse_error(segs[1].0, "modulus must be at least 1"));
            }
            Ok(FunctionSpec::Mod { modulus, n })
        }
        "threshold" => {
            arity(2)?;
            let t: usize = parse_number(segs[1], "threshold")?;
            let n = parse_n(segs[2])?;
            if t > n + 1 {
                return Err(parse_error(
                    segs[1].0,
                    format!("threshold {t} exceeds n + 1 = {}", n + 1),
                ));
            }
            Ok(FunctionSpec::Threshold { t, n })
        }
        "g" => {
            arity(2)?;
            let k: usize = parse_number(segs[1], "level index")?;
            let n = parse_n(segs[2])?;
            if k > n {
                return Err(parse_error(
                    segs[1].0,
                    format!("level index {k} out of range for n = {n}"),
                ));
            }
            Ok(FunctionSpec::FlippedLevel { k, n })
        }
        "random" => {
            arity(2)?;
            let seed: u64 = parse_number(segs[1], "seed")?;
            let n = parse_n(segs[2])?;
            Ok(FunctionSpec::Random { seed, n })
        }
        _ => Err(parse_error(
            segs[0].0,
            format!(
                "unknown function family '{name}' (expected maj, and, or, parity, \
                 mod, threshold, g, random, or a +/- level string)"
            ),
        )),
    }
}

/// Parse and instantiate in one step.
pub fn parse_to_function(text: &str) -> Result<SymmetricFunction> {
    Ok(parse_function_spec(text)?.to_function())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(text: &str) -> Vec<i8> {
        parse_to_function(text).unwrap().levels().to_vec()
    }

    #[test]
    fn named_families() {
        assert_eq!(levels("parity:4"), vec![1, -1, 1, -1, 1]);
        assert_eq!(levels("g:1:4"), vec![1, -1, 1, 1, 1]);
        assert_eq!(levels("maj:3"), vec![-1, -1, 1, 1]);
        assert_eq!(levels("and:2"), vec![1, 1, -1]);
        assert_eq!(levels("or:2"), vec![1, -1, -1]);
        assert_eq!(levels("mod:3:6"), vec![-1, 1, 1, -1, 1, 1, -1]);
        assert_eq!(levels("threshold:2:3"), vec![-1, -1, 1, 1]);
    }

    #[test]
    fn majority_even_ties_to_minus_one() {
        assert_eq!(levels("maj:4"), vec![-1, -1, -1, 1, 1]);
    }

    #[test]
    fn literal_patterns() {
        assert_eq!(levels("+--+"), vec![1, -1, -1, 1]);
        assert_eq!(levels("-+"), vec![-1, 1]);
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(levels("random:42:8"), levels("random:42:8"));
        assert_ne!(levels("random:42:8"), levels("random:43:8"));
    }

    #[test]
    fn round_trip_is_canonical() {
        for text in [
            "maj:3", "and:4", "or:5", "parity:4", "mod:3:6", "threshold:2:5",
            "g:1:4", "random:42:8", "+--+",
        ] {
            let spec = parse_function_spec(text).unwrap();
            assert_eq!(spec.to_string(), text);
            let again = parse_function_spec(&spec.to_string()).unwrap();
            assert_eq!(again, spec);
            assert_eq!(
                again.to_function().levels(),
                spec.to_function().levels()
            );
        }
    }

    fn position_of_error(text: &str) -> usize {
        match parse_function_spec(text) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("expected parse error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn error_positions() {
        assert_eq!(position_of_error(""), 0);
        assert_eq!(position_of_error("majority:3"), 0); // unknown family name
        assert_eq!(position_of_error("maj:x"), 4); // bad number
        assert_eq!(position_of_error("maj:0"), 4); // n = 0
        assert_eq!(position_of_error("maj:"), 4); // missing argument
        assert_eq!(position_of_error("maj:3:4"), 0); // arity
        assert_eq!(position_of_error("mod:0:5"), 4); // zero modulus
        assert_eq!(position_of_error("threshold:7:5"), 10); // t > n + 1
        assert_eq!(position_of_error("g:5:4"), 2); // k > n
        assert_eq!(position_of_error("+-x+"), 2); // bad level char
        assert_eq!(position_of_error("+"), 0); // n = 0 literal
        assert_eq!(position_of_error("random:-1:4"), 7); // negative seed
    }

    #[test]
    fn threshold_boundaries() {
        // t = 0 is constantly +1; t = n + 1 is constantly -1.
        assert_eq!(levels("threshold:0:3"), vec![1, 1, 1, 1]);
        assert_eq!(levels("threshold:4:3"), vec![-1, -1, -1, -1]);
    }
}
