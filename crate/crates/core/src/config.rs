//! Flat `key = value` root-datum files.
//!
//! ```text
//! # simply connected B2
//! rank = 2
//! simple_roots = 2,-2; -1,2
//! simple_coroots = 1,0; 0,1
//! ```
//!
//! A file may instead hold `name = <preset>`.

use std::path::Path;

use thiserror::Error;

use crate::root_datum::{preset, Coweight, RootDatum, RootDatumError, RootDatumSpec, Weight};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("duplicate key `{0}`")]
    Duplicate(String),
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("bad integer `{0}`")]
    BadInteger(String),
    #[error(transparent)]
    Datum(#[from] RootDatumError),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Comma-separated integers, e.g. `3,1,0` or `-1, 2`.
pub fn parse_vector(s: &str) -> Result<Vec<i64>, ConfigError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse().map_err(|_| ConfigError::BadInteger(t.to_string()))
        })
        .collect()
}

fn parse_vectors(s: &str) -> Result<Vec<Vec<i64>>, ConfigError> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(';').map(parse_vector).collect()
}

pub fn parse_datum_spec(text: &str) -> Result<RootDatumSpec, ConfigError> {
    let (mut name, mut rank, mut roots, mut coroots) = (None, None, None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        let (key, value) = (key.trim(), value.trim());
        let slot = match key {
            "name" => &mut name,
            "rank" => &mut rank,
            "simple_roots" => &mut roots,
            "simple_coroots" => &mut coroots,
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: i + 1,
                    key: key.to_string(),
                })
            }
        };
        if slot.replace(value.to_string()).is_some() {
            return Err(ConfigError::Duplicate(key.to_string()));
        }
    }
    if let Some(n) = name {
        if rank.is_none() && roots.is_none() && coroots.is_none() {
            return Ok(preset(&n)?);
        }
        // An explicit datum may carry a display name.
        name = Some(n);
    }
    let rank_str = rank.ok_or(ConfigError::Missing("rank"))?;
    let rank: usize = rank_str
        .parse()
        .map_err(|_| ConfigError::BadInteger(rank_str.clone()))?;
    let roots = parse_vectors(&roots.ok_or(ConfigError::Missing("simple_roots"))?)?;
    let coroots = parse_vectors(&coroots.ok_or(ConfigError::Missing("simple_coroots"))?)?;
    Ok(RootDatumSpec {
        name,
        rank,
        simple_roots: roots.into_iter().map(Weight).collect(),
        simple_coroots: coroots.into_iter().map(Coweight).collect(),
    })
}

/// Serializes in the same format.
pub fn format_datum_spec(spec: &RootDatumSpec) -> String {
    let join = |vs: Vec<&[i64]>| {
        vs.iter()
            .map(|v| v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let mut out = String::new();
    if let Some(n) = &spec.name {
        out.push_str(&format!("name = {n}\n"));
    }
    out.push_str(&format!("rank = {}\n", spec.rank));
    out.push_str(&format!(
        "simple_roots = {}\n",
        join(spec.simple_roots.iter().map(|w| w.coords()).collect())
    ));
    out.push_str(&format!(
        "simple_coroots = {}\n",
        join(spec.simple_coroots.iter().map(|w| w.coords()).collect())
    ));
    out
}

/// A path to a datum file if one exists, otherwise a preset name.
pub fn load_datum(arg: &str) -> Result<RootDatum, ConfigError> {
    let path = Path::new(arg);
    let spec = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: arg.to_string(),
            source,
        })?;
        parse_datum_spec(&text)?
    } else {
        preset(arg)?
    };
    Ok(RootDatum::new(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_matches_preset() {
        let text = "# simply connected B2\nrank = 2\nsimple_roots = 2,-2; -1,2\nsimple_coroots = 1,0; 0,1\n";
        let spec = parse_datum_spec(text).unwrap();
        let b2sc = preset("B2sc").unwrap();
        assert_eq!(spec.simple_roots, b2sc.simple_roots);
        assert_eq!(spec.simple_coroots, b2sc.simple_coroots);
    }

    #[test]
    fn round_trip() {
        for name in ["A2", "G2sc", "GL3"] {
            let spec = preset(name).unwrap();
            assert_eq!(parse_datum_spec(&format_datum_spec(&spec)).unwrap(), spec);
        }
    }

    #[test]
    fn name_only() {
        assert_eq!(parse_datum_spec("name = C2").unwrap(), preset("C2").unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_datum_spec("rank 2"),
            Err(ConfigError::Syntax { line: 1 })
        ));
        assert!(matches!(
            parse_datum_spec("rank = 1\nfoo = 2"),
            Err(ConfigError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            parse_datum_spec("rank = 1"),
            Err(ConfigError::Missing("simple_roots"))
        ));
        assert!(matches!(
            parse_datum_spec("rank = 1\nrank = 1"),
            Err(ConfigError::Duplicate(_))
        ));
        assert!(matches!(parse_vector("1,x"), Err(ConfigError::BadInteger(_))));
        let bad = parse_datum_spec("rank = 1\nsimple_roots = 1\nsimple_coroots = 3").unwrap();
        assert!(RootDatum::new(bad).is_err());
    }
}
