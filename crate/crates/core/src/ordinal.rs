//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is a strictly decreasing list of `(exponent, coefficient)`
//! terms, `w^e1*c1 + w^e2*c2 + ...`, where every exponent is itself an
//! ordinal in normal form. The empty list is zero.
//!
//! The text syntax uses `w` for omega:
//!
//! ```text
//! ord  := term ('+' term)*
//! term := 'w' ('^' '(' ord ')' | '^' nat)? ('*' nat)? | nat
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("ordinal syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("{0} has no predecessor")]
    NoPredecessor(Ordinal),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from(1u64)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `w^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![(e, 1)] }
    }

    /// `w^e * c`; zero when `c == 0`.
    pub fn monomial(e: Ordinal, c: u64) -> Self {
        if c == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(e, c)] }
        }
    }

    /// Builds an ordinal from arbitrary terms, normalising by ordinal addition
    /// from left to right.
    pub fn from_terms(terms: impl IntoIterator<Item = (Ordinal, u64)>) -> Self {
        terms
            .into_iter()
            .fold(Ordinal::zero(), |acc, (e, c)| acc.add(&Ordinal::monomial(e, c)))
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Finite ordinals report their value.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if !e.is_zero())
    }

    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some((lead_exp, lead_coef)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut merged = *lead_coef;
        for (e, c) in &self.terms {
            match e.cmp(lead_exp) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                Ordering::Equal => merged = merged.checked_add(*c).expect("ordinal coefficient overflow"),
                Ordering::Less => break,
            }
        }
        terms.push((lead_exp.clone(), merged));
        terms.extend(other.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    pub fn predecessor(&self) -> Result<Ordinal, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NoPredecessor(self.clone()));
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a term");
        if last.1 == 1 {
            terms.pop();
        } else {
            last.1 -= 1;
        }
        Ok(Ordinal { terms })
    }

    /// Splits `self` as `limit + n` with `limit` zero or a limit ordinal.
    pub fn split_limit_plus_finite(&self) -> (Ordinal, u64) {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => (
                Ordinal {
                    terms: self.terms[..self.terms.len() - 1].to_vec(),
                },
                *c,
            ),
            _ => (self.clone(), 0),
        }
    }

    pub fn parity(&self) -> Parity {
        if self.split_limit_plus_finite().1 % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The `n`-th element of the canonical fundamental sequence of a limit
    /// ordinal:
    ///
    /// * `(g + w^(e+1))[n] = g + w^e * (n+1)` for `e > 0`,
    /// * `(g + w)[n] = g + n`,
    /// * `(g + w^l)[n] = g + w^(l[n])` for limit `l`.
    pub fn fundamental_sequence(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        let (last_exp, last_coef) = self.terms.last().cloned().expect("limit has a term");
        let mut prefix = self.terms[..self.terms.len() - 1].to_vec();
        if last_coef > 1 {
            prefix.push((last_exp.clone(), last_coef - 1));
        }
        let prefix = Ordinal { terms: prefix };
        let tail = if last_exp.is_successor() {
            let e = last_exp.predecessor()?;
            if e.is_zero() {
                Ordinal::from(n)
            } else {
                Ordinal::monomial(e, n + 1)
            }
        } else {
            Ordinal::omega_pow(last_exp.fundamental_sequence(n)?)
        };
        Ok(prefix.add(&tail))
    }

    /// Least `n` with `beta < self[n]`, for a limit `self` and `beta < self`.
    pub fn fundamental_index_above(&self, beta: &Ordinal) -> Result<u64, OrdinalError> {
        let mut n = 0;
        loop {
            if self.fundamental_sequence(n)? > *beta {
                return Ok(n);
            }
            n += 1;
        }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::monomial(Ordinal::zero(), n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for ((ea, ca), (eb, cb)) in self.terms.iter().zip(&other.terms) {
            match ea.cmp(eb).then(ca.cmp(cb)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            f.write_str("w")?;
            match e.as_finite() {
                Some(1) => {}
                Some(k) => write!(f, "^{k}")?,
                None => write!(f, "^({e})")?,
            }
            if *c != 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let ord = p.ord()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(ord)
    }
}

pub fn parse_ordinal(text: &str) -> Result<Ordinal, OrdinalError> {
    text.parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> OrdinalError {
        OrdinalError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| OrdinalError::Syntax {
                pos: start,
                msg: "natural number out of range".into(),
            })
    }

    fn ord(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        if !self.eat(b'w') {
            return Ok(Ordinal::from(self.nat()?));
        }
        let exp = if self.eat(b'^') {
            if self.eat(b'(') {
                let e = self.ord()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                e
            } else {
                Ordinal::from(self.nat()?)
            }
        } else {
            Ordinal::one()
        };
        let coef = if self.eat(b'*') { self.nat()? } else { 1 };
        Ok(Ordinal::monomial(exp, coef))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn parses_literals() {
        assert_eq!(o("0"), Ordinal::zero());
        assert_eq!(o("w+3").to_string(), "w+3");
        assert_eq!(o("w^2*2+w+1").to_string(), "w^2*2+w+1");
        assert_eq!(o("w^(w+1)*3").to_string(), "w^(w+1)*3");
        assert_eq!(o(" w ^ 2 * 2 + 1 ").to_string(), "w^2*2+1");
    }

    #[test]
    fn non_cnf_order_is_normalized() {
        assert_eq!(o("1+w"), o("w"));
        assert_eq!(o("w+w^2"), o("w^2"));
        assert_eq!(o("w+w"), o("w*2"));
        assert_eq!(o("w^0"), o("1"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match "w+".parse::<Ordinal>() {
            Err(OrdinalError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!("w^(2".parse::<Ordinal>().is_err());
        assert!("x".parse::<Ordinal>().is_err());
        assert!("w 3".parse::<Ordinal>().is_err());
    }

    #[test]
    fn comparisons() {
        assert!(o("w*2") > o("w+5"));
        assert_eq!(o("w").cmp(&o("w")), Ordering::Equal);
        assert!(o("w^2+1") < o("w^2+w"));
        assert!(o("w^(w)") > o("w^5*9"));
    }

    #[test]
    fn addition() {
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(o("w").add(&o("1")), o("w+1"));
        assert_eq!(o("w*2+1").add(&o("w")), o("w*3"));
        assert_eq!(o("w^2+w").add(&o("w^2")), o("w^2*2"));
    }

    #[test]
    fn split_and_parity() {
        assert_eq!(o("w+3").split_limit_plus_finite(), (o("w"), 3));
        assert_eq!(o("5").split_limit_plus_finite(), (o("0"), 5));
        assert_eq!(o("w^2*2").split_limit_plus_finite(), (o("w^2*2"), 0));
        assert_eq!(o("0").parity(), Parity::Even);
        assert_eq!(o("w").parity(), Parity::Even);
        assert_eq!(o("w+3").parity(), Parity::Odd);
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(o("w").fundamental_sequence(5).unwrap(), o("5"));
        assert_eq!(o("w*2").fundamental_sequence(3).unwrap(), o("w+3"));
        assert_eq!(o("w^2").fundamental_sequence(3).unwrap(), o("w*4"));
        assert_eq!(o("w^(w)").fundamental_sequence(2).unwrap(), o("w^2"));
        assert!(matches!(o("w+1").fundamental_sequence(0), Err(OrdinalError::NotLimit(_))));
        assert!(o("0").fundamental_sequence(0).is_err());
    }

    #[test]
    fn limits_and_predecessors() {
        assert!(o("w^2").is_limit());
        assert!(!o("w+1").is_limit());
        assert!(!o("0").is_limit());
        assert_eq!(o("w+1").predecessor().unwrap(), o("w"));
        assert!(o("w").predecessor().is_err());
        assert!(o("0").predecessor().is_err());
    }
}
