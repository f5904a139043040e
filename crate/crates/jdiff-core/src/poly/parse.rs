//! Polynomial text grammar: parsing and canonical printing.
//!
//! Grammar: terms joined by `+`/`-`; a term is coefficient and variable
//! factors joined by `*`, with `^` for exponents.  Coefficients are
//! integers or `a/b` fractions; variables match `[A-Za-z][A-Za-z0-9_]*`.
//! Canonical serialization sorts terms descending under the chosen order
//! (grevlex for `Display`) and round-trips through the parser.

use super::{MonOrder, Poly, Rat, VarSet};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(BigInt),
    Ident(String),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' | '−' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                let n = s.parse::<BigInt>().map_err(|e| {
                    Error::Parse(format!("bad integer `{s}`: {e}"))
                })?;
                toks.push(Tok::Int(n));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_')
                {
                    i += 1;
                }
                toks.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character `{other}` at byte {i}"
                )))
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    vars: &'a VarSet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// term := factor (`*` factor)* ; factor := INT [`/` INT] | IDENT [`^` INT]
    fn parse_term(&mut self) -> Result<(Vec<u32>, Rat)> {
        let mut coeff = Rat::one();
        let mut exp = vec![0u32; self.vars.len()];
        let mut any = false;
        loop {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.bump();
                    let mut c = Rat::from_integer(n);
                    if let Some(Tok::Slash) = self.peek() {
                        self.bump();
                        match self.bump().cloned() {
                            Some(Tok::Int(d)) => {
                                if d.is_zero() {
                                    return Err(Error::Parse(
                                        "zero denominator in coefficient".into(),
                                    ));
                                }
                                c /= Rat::from_integer(d);
                            }
                            _ => {
                                return Err(Error::Parse(
                                    "expected integer after `/`".into(),
                                ))
                            }
                        }
                    }
                    coeff *= c;
                    any = true;
                }
                Some(Tok::Ident(name)) => {
                    self.bump();
                    let idx = self.vars.index(&name).ok_or_else(|| {
                        Error::Parse(format!("unknown variable `{name}`"))
                    })?;
                    let mut e: u32 = 1;
                    if let Some(Tok::Caret) = self.peek() {
                        self.bump();
                        match self.bump().cloned() {
                            Some(Tok::Int(n)) => {
                                e = u32::try_from(&n).map_err(|_| {
                                    Error::Parse(format!(
                                        "exponent `{n}` out of range"
                                    ))
                                })?;
                            }
                            _ => {
                                return Err(Error::Parse(
                                    "expected integer exponent after `^`".into(),
                                ))
                            }
                        }
                    }
                    exp[idx] = exp[idx].checked_add(e).ok_or_else(|| {
                        Error::Parse("exponent overflow".into())
                    })?;
                    any = true;
                }
                _ => break,
            }
            // Optional `*` between factors.
            if let Some(Tok::Star) = self.peek() {
                self.bump();
                // A `*` must be followed by another factor.
                match self.peek() {
                    Some(Tok::Int(_)) | Some(Tok::Ident(_)) => {}
                    _ => {
                        return Err(Error::Parse(
                            "dangling `*` in term".into(),
                        ))
                    }
                }
            }
        }
        if !any {
            return Err(Error::Parse("empty term".into()));
        }
        Ok((exp, coeff))
    }

    fn parse_poly(&mut self) -> Result<Poly> {
        let mut terms: Vec<(Vec<u32>, Rat)> = Vec::new();
        let mut first = true;
        while self.peek().is_some() {
            // Sign prefix (possibly repeated).
            let mut neg = false;
            loop {
                match self.peek() {
                    Some(Tok::Plus) => {
                        self.bump();
                    }
                    Some(Tok::Minus) => {
                        self.bump();
                        neg = !neg;
                    }
                    _ => break,
                }
            }
            if self.peek().is_none() {
                if first && !neg && terms.is_empty() {
                    break;
                }
                return Err(Error::Parse("trailing sign".into()));
            }
            let (e, mut c) = self.parse_term()?;
            if neg {
                c = -c;
            }
            terms.push((e, c));
            first = false;
        }
        Ok(Poly::from_terms(self.vars, terms))
    }
}

impl Poly {
    /// Parse a polynomial over the given variables.
    pub fn parse(src: &str, vars: &VarSet) -> Result<Poly> {
        let toks = tokenize(src)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty polynomial text".into()));
        }
        let mut p = Parser { toks: &toks, pos: 0, vars };
        let poly = p.parse_poly()?;
        if p.pos != toks.len() {
            return Err(Error::Parse(format!(
                "unconsumed input at token {}",
                p.pos
            )));
        }
        Ok(poly)
    }

    /// Canonical text under the given order (descending terms).
    pub fn to_string_ord(&self, ord: MonOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.sorted_terms(ord).into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let is_const = e.iter().all(|&x| x == 0);
            let coeff_is_one = mag.is_one();
            let mut factors: Vec<String> = Vec::new();
            if !coeff_is_one || is_const {
                if mag.denom().is_one() {
                    factors.push(mag.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", mag.numer(), mag.denom()));
                }
            }
            for (i, &x) in e.iter().enumerate() {
                if x == 1 {
                    factors.push(self.vars.name(i).to_string());
                } else if x > 1 {
                    factors.push(format!("{}^{}", self.vars.name(i), x));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_ord(MonOrder::GrevLex))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratq};
    use super::*;

    fn vs(names: &[&str]) -> VarSet {
        VarSet::new(names).unwrap()
    }

    #[test]
    fn parse_examples() {
        let v = vs(&["X", "Y"]);
        let p = Poly::parse("X - Y", &v).unwrap();
        assert_eq!(p.to_string(), "X - Y");
        let q = Poly::parse("3*X^2*Y - 1/2*Y + 4", &v).unwrap();
        assert_eq!(q.coeff(&[2, 1]), rat(3));
        assert_eq!(q.coeff(&[0, 1]), ratq(-1, 2));
        assert_eq!(q.coeff(&[0, 0]), rat(4));
        // Implicit coefficient and repeated factors.
        let r = Poly::parse("X*X*Y^2", &v).unwrap();
        assert_eq!(r.coeff(&[2, 2]), rat(1));
        // Signs collapse.
        let s = Poly::parse("-X - -Y", &v).unwrap();
        assert_eq!(s, Poly::parse("Y - X", &v).unwrap());
    }

    #[test]
    fn parse_errors() {
        let v = vs(&["x"]);
        assert!(Poly::parse("", &v).is_err());
        assert!(Poly::parse("x +", &v).is_err());
        assert!(Poly::parse("y", &v).is_err());
        assert!(Poly::parse("x^", &v).is_err());
        assert!(Poly::parse("2*", &v).is_err());
        assert!(Poly::parse("1/0", &v).is_err());
        assert!(Poly::parse("x$", &v).is_err());
    }

    #[test]
    fn display_round_trips() {
        let v = vs(&["y1", "dy1", "ddy1"]);
        for src in [
            "y1^2*dy1 - 3/2*ddy1 + 4",
            "-y1 + dy1",
            "7",
            "0",
            "-1/3*y1*dy1*ddy1",
        ] {
            let p = Poly::parse(src, &v).unwrap();
            let s = p.to_string();
            let q = Poly::parse(&s, &v).unwrap();
            assert_eq!(p, q, "round trip failed for `{src}` -> `{s}`");
        }
    }

    #[test]
    fn display_sorts_descending_under_order() {
        let v = vs(&["x", "y"]);
        let p = Poly::parse("y^3 + x*y + x^2", &v).unwrap();
        // grevlex: y^3 (deg 3) first, then x^2 vs x*y: x^2 has less of the
        // last variable, so x^2 > x*y.
        assert_eq!(p.to_string(), "y^3 + x^2 + x*y");
        // lex: x^2 > x*y > y^3.
        assert_eq!(p.to_string_ord(MonOrder::Lex), "x^2 + x*y + y^3");
    }
}
