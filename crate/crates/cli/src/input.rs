//! Parsing of command-line values: rationals `p/q`, comma-separated vectors,
//! weights and ideals given inline, as JSON, or as a path to a JSON file.

use std::path::Path;

use plurival_core::lattice::Rational;
use plurival_core::toric::project_direction;
use plurival_core::{DiagonalZhouWeight, Error, Exponent, MonomialIdeal, Result, ToricWeight};
use serde_json::Value;

/// Inline JSON, a path to a JSON file, or the raw shorthand text.
enum Source {
    Json(Value),
    Text(String),
}

fn source(raw: &str) -> Result<Source> {
    let trimmed = raw.trim();
    let json_text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Some(trimmed.to_string())
    } else if trimmed.ends_with(".json") || Path::new(trimmed).is_file() {
        Some(
            std::fs::read_to_string(trimmed)
                .map_err(|e| Error::Validation(format!("cannot read {trimmed}: {e}")))?,
        )
    } else {
        None
    };
    match json_text {
        Some(t) => serde_json::from_str(&t)
            .map(Source::Json)
            .map_err(|e| Error::Validation(format!("invalid JSON input: {e}"))),
        None => Ok(Source::Text(trimmed.to_string())),
    }
}

fn from_json<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Validation(format!("invalid {what}: {e}")))
}

pub fn rational(raw: &str) -> Result<Rational> {
    raw.parse()
}

pub fn rationals(raw: &str) -> Result<Vec<Rational>> {
    raw.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(str::parse)
        .collect()
}

pub fn exponent(raw: &str) -> Result<Exponent> {
    match source(raw)? {
        Source::Json(v) => from_json(v, "exponent"),
        Source::Text(t) => t.parse(),
    }
}

/// `c:β;β'` shorthand, `{"pieces": .., "scale": ..}`, or a JSON file.
pub fn weight(raw: &str) -> Result<ToricWeight> {
    match source(raw)? {
        Source::Json(v) => from_json(v, "weight"),
        Source::Text(t) => t.parse(),
    }
}

/// `1,0;0,2` shorthand, `{"dim": .., "generators": ..}`, or a JSON file.
pub fn ideal(raw: &str) -> Result<MonomialIdeal> {
    match source(raw)? {
        Source::Json(v) => from_json(v, "ideal"),
        Source::Text(t) => {
            let gens = t
                .split(';')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    let e: Exponent = p.parse()?;
                    e.to_u32()
                        .ok_or_else(|| Error::Validation(format!("ideal generator {e} must be integral")))
                })
                .collect::<Result<Vec<_>>>()?;
            let dim = gens
                .first()
                .map(Vec::len)
                .ok_or_else(|| Error::Validation("ideal needs at least one generator".into()))?;
            MonomialIdeal::new(dim, gens)
        }
    }
}

/// Diagonal direction `a`, optionally rescaled onto `Σ 1/a_j = 1`.
pub fn direction(raw: &str, project: bool) -> Result<Vec<Rational>> {
    let a = match source(raw)? {
        Source::Json(v) => {
            let w: DiagonalZhouWeight = from_json(v, "diagonal weight")?;
            w.a().to_vec()
        }
        Source::Text(t) => rationals(&t)?,
    };
    if project {
        project_direction(&a)
    } else {
        DiagonalZhouWeight::new(a.clone())?;
        Ok(a)
    }
}

/// `lo:hi` inclusive range of positive integers.
pub fn int_range(raw: &str) -> Result<Vec<u32>> {
    let bad = || Error::Validation(format!("cannot parse range {raw:?}; expected lo:hi"));
    let (lo, hi) = match raw.split_once(':') {
        Some((a, b)) => (a.trim().parse::<u32>().map_err(|_| bad())?, b.trim().parse::<u32>().map_err(|_| bad())?),
        None => {
            let v = raw.trim().parse::<u32>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// `a:b` rational interval.
pub fn interval(raw: &str) -> Result<(Rational, Rational)> {
    let (a, b) = raw
        .split_once(':')
        .ok_or_else(|| Error::Validation(format!("cannot parse range {raw:?}; expected a:b")))?;
    let (a, b) = (rational(a)?, rational(b)?);
    if a >= b {
        return Err(Error::Validation(format!("empty range {raw:?}")));
    }
    Ok((a, b))
}

/// `lo:hi:geometric` (doubling) or `lo:hi:k` (k evenly spaced nodes).
pub fn t_grid(raw: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = raw.split(':').collect();
    let bad = || Error::Validation(format!("cannot parse grid {raw:?}; expected lo:hi:geometric or lo:hi:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = rational(parts[0])?;
    let hi = rational(parts[1])?;
    if !lo.is_positive() || lo >= hi {
        return Err(Error::Validation(format!("grid {raw:?} needs 0 < lo < hi")));
    }
    if parts[2].trim() == "geometric" {
        return Ok(plurival_core::integral::geometric_grid(&lo, &hi, 2));
    }
    let k: i64 = parts[2].trim().parse().map_err(|_| bad())?;
    if k < 2 {
        return Err(bad());
    }
    let step = (&hi - &lo) / Rational::from_integer(k - 1);
    Ok((0..k).map(|i| &lo + &step * Rational::from_integer(i)).collect())
}

/// `lo:hi:count` of moduli for a product grid.
pub fn modulus_grid(raw: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = raw.split(':').collect();
    let bad = || Error::Validation(format!("cannot parse grid {raw:?}; expected lo:hi:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Ok((lo, hi, count))
}

pub fn moduli(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Validation(format!("cannot parse modulus {s:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use plurival_core::lattice::q;

    #[test]
    fn shorthand_inputs() {
        let w = weight("3/2:2,0;0,3").unwrap();
        assert_eq!(w.scale(), &q(3, 2));
        let w2 = weight(r#"{"pieces":[["2","0"],["0","3"]],"scale":"3/2"}"#).unwrap();
        assert!(w.germ_eq(&w2));
        assert_eq!(ideal("1,0;0,2").unwrap().generators().len(), 2);
        assert!(direction("2/1,3/1", false).is_err());
        assert_eq!(direction("1,1", true).unwrap(), vec![q(2, 1), q(2, 1)]);
        assert_eq!(int_range("1:4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(t_grid("1:32:geometric").unwrap().len(), 6);
        assert_eq!(t_grid("1:3:3").unwrap(), vec![q(1, 1), q(2, 1), q(3, 1)]);
    }
}
