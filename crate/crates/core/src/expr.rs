//! Text form of diagonal sums: `P[j,k] (+) P[j,k] (+) ...`.
//!
//! Whitespace is ignored everywhere. An empty (or all-blank) input is the
//! empty sum.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::proj_monoid::ProjClass;

pub const GRAMMAR: &str = "\
expr  := ''                      (empty sum, the zero class)
       | term ( '(+)' term )*
term  := 'P' '[' int ',' int ']'  (level j, multiplicity k)
int   := '-'? digit+
whitespace is ignored";

/// One parsed `P[j,k]` term before validation against an ambient `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTerm {
    pub j: i64,
    pub k: BigInt,
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => {
                Err(self.err(format!("expected '{}', found '{}'", c as char, got as char)))
            }
            None => Err(self.err(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        let mut digits = String::new();
        if self.peek() == Some(b'-') {
            digits.push('-');
            self.pos += 1;
        }
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c as char);
            self.pos += 1;
        }
        digits
            .parse::<BigInt>()
            .map_err(|_| self.err("expected an integer"))
    }

    fn term(&mut self) -> Result<RawTerm> {
        self.expect(b'P')?;
        self.expect(b'[')?;
        let start = self.pos;
        let j = self.int()?;
        let j = i64::try_from(&j).map_err(|_| Error::Parse {
            pos: start,
            msg: "level out of range".into(),
        })?;
        self.expect(b',')?;
        let k = self.int()?;
        self.expect(b']')?;
        Ok(RawTerm { j, k })
    }

    fn plus(&mut self) -> Result<()> {
        self.expect(b'(')?;
        self.expect(b'+')?;
        self.expect(b')')
    }
}

pub fn parse_terms(src: &str) -> Result<Vec<RawTerm>> {
    let mut cur = Cursor {
        src: src.as_bytes(),
        pos: 0,
    };
    let mut terms = Vec::new();
    if cur.peek().is_none() {
        return Ok(terms);
    }
    terms.push(cur.term()?);
    while cur.peek().is_some() {
        cur.plus()?;
        terms.push(cur.term()?);
    }
    Ok(terms)
}

/// Parses and validates every term against the ambient index `n`.
pub fn parse_sum(n: u32, src: &str) -> Result<Vec<ProjClass>> {
    parse_terms(src)?
        .into_iter()
        .map(|t| ProjClass::validate(n as i64, t.j, t.k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums() {
        let t = parse_terms("P[3,1] (+) P[1,2] (+) P[1,1]").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[1], RawTerm { j: 1, k: 2.into() });
        let compact = parse_terms("P[3,1](+)P[1,2]").unwrap();
        let spaced = parse_terms("  P [ 3 , 1 ]  ( + )\tP[1 ,2]\n").unwrap();
        assert_eq!(compact, spaced);
    }

    #[test]
    fn empty_is_empty_sum() {
        assert!(parse_terms("").unwrap().is_empty());
        assert!(parse_terms("   ").unwrap().is_empty());
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "P[1]",
            "P[1,2",
            "Q[1,2]",
            "P[1,2] + P[0,1]",
            "P[1,2] (+)",
            "P[a,1]",
        ] {
            assert!(
                matches!(parse_terms(bad), Err(Error::Parse { .. })),
                "{bad} should not parse"
            );
        }
    }

    #[test]
    fn validation_is_separate_from_syntax() {
        assert!(parse_terms("P[2,0]").is_ok());
        assert!(matches!(
            parse_sum(2, "P[2,0]"),
            Err(Error::InvalidClass { .. })
        ));
        assert!(matches!(
            parse_sum(2, "P[-1,3]"),
            Err(Error::InvalidClass { .. })
        ));
        let big = parse_sum(1, "P[0,100000000000000000000000]").unwrap();
        assert_eq!(big[0].k().to_string(), "100000000000000000000000");
    }
}
