//! Line-delimited coefficient files for exact streams.
//!
//! One JSON object per line: `{"n": <int>, "re": "<decimal or p/q>", "im":
//! "<decimal or p/q>"}`. Lines must be sorted by strictly increasing n;
//! absent indices are zero. Exact streams round-trip through this format
//! without loss.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde_json::Value;

use crate::exact::{parse_rational, rational_to_string, RationalComplex};
use crate::mp::Prec;

use super::stream::CoefficientStream;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: indices must be sorted strictly increasing")]
    Unsorted { line: usize },
}

fn parse_part(v: &Value, line: usize, field: &str) -> Result<num_rational::BigRational, FileError> {
    let text = match v {
        Value::String(s) => s.clone(),
        // Integer literals are exact; reject floats, which are not.
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(_) => {
            return Err(FileError::Malformed {
                line,
                msg: format!("{field}: non-integer JSON numbers are inexact; quote the value"),
            })
        }
        _ => {
            return Err(FileError::Malformed { line, msg: format!("{field}: expected a string") })
        }
    };
    parse_rational(&text).ok_or_else(|| FileError::Malformed {
        line,
        msg: format!("{field}: cannot parse {text:?} as decimal or p/q"),
    })
}

/// Read a coefficient file into an exact stream.
pub fn read_coefficient_file(path: &Path, prec: Prec) -> Result<CoefficientStream, FileError> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut map: BTreeMap<usize, RationalComplex> = BTreeMap::new();
    let mut last_n: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let obj: Value = serde_json::from_str(trimmed).map_err(|e| FileError::Malformed {
            line: line_no,
            msg: format!("invalid JSON: {e}"),
        })?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| FileError::Malformed { line: line_no, msg: "missing n".into() })?
            as usize;
        if let Some(prev) = last_n {
            if n <= prev {
                return Err(FileError::Unsorted { line: line_no });
            }
        }
        last_n = Some(n);
        let re = match obj.get("re") {
            Some(v) => parse_part(v, line_no, "re")?,
            None => num_rational::BigRational::from_integer(0.into()),
        };
        let im = match obj.get("im") {
            Some(v) => parse_part(v, line_no, "im")?,
            None => num_rational::BigRational::from_integer(0.into()),
        };
        map.insert(n, RationalComplex::new(re, im));
    }
    let max_n = map.keys().next_back().copied().unwrap_or(0);
    let mut table = vec![RationalComplex::zero(); max_n + 1];
    for (n, c) in map {
        table[n] = c;
    }
    let label = format!("file:{}", path.display());
    Ok(CoefficientStream::from_exact_table(table, label, prec))
}

/// Write the first `n_max + 1` coefficients of an exact stream. Zero
/// coefficients are omitted (absent indices read back as zero).
pub fn write_coefficient_file(
    s: &CoefficientStream,
    n_max: usize,
    out: &mut dyn Write,
) -> Result<(), FileError> {
    for n in 0..=n_max {
        let c = match s.coeff_exact(n) {
            Some(c) => c,
            None => {
                return Err(FileError::Malformed {
                    line: 0,
                    msg: format!("stream {} is not exact", s.label()),
                })
            }
        };
        if c.is_zero() {
            continue;
        }
        writeln!(
            out,
            "{{\"n\": {}, \"re\": \"{}\", \"im\": \"{}\"}}",
            n,
            rational_to_string(&c.re),
            rational_to_string(&c.im)
        )?;
    }
    Ok(())
}

/// Working precision from the ZEROSCOPE_PREC_BITS environment variable,
/// when set and valid.
pub fn precision_from_env() -> Option<Result<Prec, String>> {
    let raw = std::env::var("ZEROSCOPE_PREC_BITS").ok()?;
    match raw.trim().parse::<u32>() {
        Ok(bits) if bits >= 64 => Some(Ok(Prec(bits))),
        Ok(bits) => Some(Err(format!("ZEROSCOPE_PREC_BITS={bits} is below the 64-bit minimum"))),
        Err(_) => Some(Err(format!("ZEROSCOPE_PREC_BITS={raw:?} is not a positive integer"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_exact_file() {
        let dir = std::env::temp_dir().join("zeroscope-file-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("coeffs.jsonl");
        std::fs::write(
            &path,
            concat!(
                "{\"n\": 0, \"re\": \"1\", \"im\": \"0\"}\n",
                "{\"n\": 2, \"re\": \"-3/4\", \"im\": \"1/3\"}\n",
                "{\"n\": 5, \"re\": \"0.125\", \"im\": \"-2\"}\n",
            ),
        )
        .unwrap();
        let s = read_coefficient_file(&path, Prec(96)).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.coeff_exact(0).unwrap(), RationalComplex::from_int(1));
        assert!(s.coeff_exact(1).unwrap().is_zero());
        assert_eq!(
            s.coeff_exact(2).unwrap(),
            RationalComplex::new(
                num_rational::BigRational::new((-3).into(), 4.into()),
                num_rational::BigRational::new(1.into(), 3.into())
            )
        );
        let mut buf = Vec::new();
        write_coefficient_file(&s, 5, &mut buf).unwrap();
        let path2 = dir.join("coeffs2.jsonl");
        std::fs::write(&path2, &buf).unwrap();
        let s2 = read_coefficient_file(&path2, Prec(96)).unwrap();
        for n in 0..=6 {
            assert_eq!(s.coeff_exact(n).unwrap(), s2.coeff_exact(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn unsorted_and_malformed_inputs_error() {
        let dir = std::env::temp_dir().join("zeroscope-file-test");
        std::fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.jsonl");
        std::fs::write(&bad, "{\"n\": 3, \"re\": \"1\"}\n{\"n\": 1, \"re\": \"1\"}\n").unwrap();
        assert!(matches!(
            read_coefficient_file(&bad, Prec(64)),
            Err(FileError::Unsorted { line: 2 })
        ));
        let bad2 = dir.join("bad2.jsonl");
        std::fs::write(&bad2, "{\"n\": 0, \"re\": 1.5}\n").unwrap();
        assert!(matches!(
            read_coefficient_file(&bad2, Prec(64)),
            Err(FileError::Malformed { line: 1, .. })
        ));
        let bad3 = dir.join("bad3.jsonl");
        std::fs::write(&bad3, "not json\n").unwrap();
        assert!(read_coefficient_file(&bad3, Prec(64)).is_err());
    }
}
