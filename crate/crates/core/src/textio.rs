//! Shared line-oriented text format: a `tamedyn 1` header, then one record
//! per line as a keyword followed by `key=value` fields. Blank lines and
//! lines starting with `#` are skipped.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cbspace::CBSpace;
use crate::ordinal::Ordinal;
use crate::rational::{fmt_q, parse_q, Rational};

pub const HEADER: &str = "tamedyn 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Bad { line: usize, msg: String },
    #[error("missing `{HEADER}` header")]
    MissingHeader,
}

pub fn bad(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Bad { line, msg: msg.into() }
}

/// Content lines after the header, with 1-based line numbers.
pub fn body_lines(text: &str) -> Result<Vec<(usize, &str)>, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, h)) if h == HEADER => Ok(lines.collect()),
        _ => Err(FormatError::MissingHeader),
    }
}

/// Splits `key=value` tokens; bare tokens are returned positionally.
pub fn fields(tokens: &[&str]) -> (Vec<String>, BTreeMap<String, String>) {
    let mut bare = Vec::new();
    let mut kv = BTreeMap::new();
    for t in tokens {
        match t.split_once('=') {
            Some((k, v)) => {
                kv.insert(k.to_string(), v.to_string());
            }
            None => bare.push(t.to_string()),
        }
    }
    (bare, kv)
}

pub fn need<'a>(kv: &'a BTreeMap<String, String>, key: &str, line: usize) -> Result<&'a str, FormatError> {
    kv.get(key).map(String::as_str).ok_or_else(|| bad(line, format!("missing field {key}")))
}

/// `l/r` with integer endpoints, or `a/b/c/d` for the fractions `a/b`
/// and `c/d`.
pub fn parse_interval(s: &str) -> Option<(Rational, Rational)> {
    let parts: Vec<&str> = s.split('/').collect();
    match parts.len() {
        2 => Some((parse_q(parts[0])?, parse_q(parts[1])?)),
        4 => Some((
            parse_q(&format!("{}/{}", parts[0], parts[1]))?,
            parse_q(&format!("{}/{}", parts[2], parts[3]))?,
        )),
        _ => None,
    }
}

pub fn format_interval(l: &Rational, r: &Rational) -> String {
    if l.is_integer() && r.is_integer() {
        format!("{}/{}", l.numer(), r.numer())
    } else {
        format!("{}/{}", fmt_q(l), fmt_q(r))
    }
}

pub fn write_space(space: &CBSpace) -> String {
    let (l, r) = space.interval();
    format!("{HEADER}\nspace seed={} interval={}\n", space.seed(), format_interval(l, r))
}

pub fn read_space(text: &str) -> Result<CBSpace, FormatError> {
    for (line, l) in body_lines(text)? {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens.first() != Some(&"space") {
            continue;
        }
        let (_, kv) = fields(&tokens[1..]);
        let seed: Ordinal = need(&kv, "seed", line)?
            .parse()
            .map_err(|e| bad(line, format!("{e}")))?;
        let (lo, hi) = match kv.get("interval") {
            Some(iv) => parse_interval(iv).ok_or_else(|| bad(line, format!("bad interval {iv}")))?,
            None => (crate::rational::zero(), crate::rational::one()),
        };
        return CBSpace::on_interval(seed, lo, hi).map_err(|e| bad(line, e.to_string()));
    }
    Err(bad(text.lines().count(), "no space record"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn intervals() {
        assert_eq!(parse_interval("0/1"), Some((q(0, 1), q(1, 1))));
        assert_eq!(parse_interval("1/4/1/2"), Some((q(1, 4), q(1, 2))));
        assert_eq!(parse_interval("1/2/3"), None);
        assert_eq!(format_interval(&q(1, 4), &q(1, 2)), "1/4/1/2");
    }

    #[test]
    fn space_round_trip() {
        let s = CBSpace::on_interval("w*2+1".parse().unwrap(), q(1, 3), q(1, 2)).unwrap();
        assert_eq!(read_space(&write_space(&s)).unwrap(), s);
        assert!(matches!(read_space("space seed=1"), Err(FormatError::MissingHeader)));
    }
}
