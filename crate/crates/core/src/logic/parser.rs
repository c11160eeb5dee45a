//! Recursive-descent parser for scLTL.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! or     := and ('|' and)*
//! and    := until ('&' until)*
//! until  := unary ('U' until)?          -- right associative
//! unary  := '!' atom | 'X' unary | 'F' unary | 'F<=' n unary | 'G<=' n unary
//!         | 'true' | atom | '(' or ')'
//! ```

use super::formula::Formula;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    Not,
    And,
    Or,
    Next,
    Until,
    Eventually,
    Globally,
    Le,
    Minus,
    Num(u64),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let done = t.0 == Tok::End;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        self.pos += 1;
        let tok = match c {
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' => Tok::Minus,
            b'<' => {
                if self.src.get(self.pos) == Some(&b'=') {
                    self.pos += 1;
                    Tok::Le
                } else {
                    return Err(Error::Syntax { pos: start, msg: "expected `<=`".into() });
                }
            }
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n = s
                    .parse()
                    .map_err(|_| Error::Syntax { pos: start, msg: format!("bound `{s}` out of range") })?;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match s {
                    "true" => Tok::True,
                    "X" => Tok::Next,
                    "U" => Tok::Until,
                    "F" => Tok::Eventually,
                    "G" => Tok::Globally,
                    _ => Tok::Ident(s.to_string()),
                }
            }
            other => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{}`", other as char) })
            }
        };
        Ok((tok, start))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    atoms: &'a [String],
}

/// Parse a formula over the given ordered atom list. Bounded sugar is kept.
pub fn parse_scltl(text: &str, atoms: &[String]) -> Result<Formula> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, at: 0, atoms };
    let f = p.or()?;
    match p.peek() {
        Tok::End => Ok(f),
        _ => Err(p.unexpected("end of input")),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            t => format!("{t:?}"),
        };
        Error::Syntax { pos: self.pos(), msg: format!("expected {wanted}, found {found}") }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Until {
            self.bump();
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn bound(&mut self) -> Result<u32> {
        if *self.peek() != Tok::Le {
            return Err(self.unexpected("`<=`"));
        }
        self.bump();
        let pos = self.pos();
        match self.bump().0 {
            Tok::Num(n) => u32::try_from(n).map_err(|_| Error::Syntax { pos, msg: "bound too large".into() }),
            Tok::Minus => Err(Error::Syntax { pos, msg: "bound must be non-negative".into() }),
            _ => Err(Error::Syntax { pos, msg: "expected a bound".into() }),
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                match self.unary()? {
                    Formula::Atom(i) => Ok(Formula::NegAtom(i)),
                    _ => Err(Error::NegatedNonAtom { pos }),
                }
            }
            Tok::Next => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Eventually => {
                self.bump();
                if *self.peek() == Tok::Le {
                    let n = self.bound()?;
                    Ok(Formula::bounded_eventually(n, self.unary()?))
                } else {
                    Ok(Formula::eventually(self.unary()?))
                }
            }
            Tok::Globally => {
                self.bump();
                let n = self.bound()?;
                Ok(Formula::bounded_always(n, self.unary()?))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(name) => {
                self.bump();
                match self.atoms.iter().position(|a| *a == name) {
                    Some(i) => Ok(Formula::Atom(i)),
                    None => Err(Error::UnknownAtom { name, pos }),
                }
            }
            Tok::LParen => {
                self.bump();
                let f = self.or()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(f)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_eventually() {
        let f = parse_scltl("F a", &atoms(&["a"])).unwrap();
        assert_eq!(f, Formula::eventually(Formula::atom(0)));
    }

    #[test]
    fn until_with_negated_atom() {
        let f = parse_scltl("a U (b & !c)", &atoms(&["a", "b", "c"])).unwrap();
        let want = Formula::until(Formula::atom(0), Formula::and(Formula::atom(1), Formula::not_atom(2)));
        assert_eq!(f, want);
    }

    #[test]
    fn bounded_always_is_kept_then_expanded() {
        let f = parse_scltl("F (G<=3 k)", &atoms(&["k"])).unwrap();
        assert_eq!(f, Formula::eventually(Formula::bounded_always(3, Formula::atom(0))));
        let k = Formula::atom(0);
        let x = |f: Formula| Formula::next(f);
        let want = Formula::eventually(Formula::and(
            k.clone(),
            Formula::and(x(k.clone()), Formula::and(x(x(k.clone())), x(x(x(k))))),
        ));
        assert_eq!(f.expand_bounded(), want);
    }

    #[test]
    fn precedence_and_associativity() {
        let a = atoms(&["a", "b", "c"]);
        // & binds tighter than |
        assert_eq!(
            parse_scltl("a | b & c", &a).unwrap(),
            Formula::or(Formula::atom(0), Formula::and(Formula::atom(1), Formula::atom(2)))
        );
        // U binds tighter than &
        assert_eq!(
            parse_scltl("a & b U c", &a).unwrap(),
            Formula::and(Formula::atom(0), Formula::until(Formula::atom(1), Formula::atom(2)))
        );
        // U is right associative
        assert_eq!(
            parse_scltl("a U b U c", &a).unwrap(),
            Formula::until(Formula::atom(0), Formula::until(Formula::atom(1), Formula::atom(2)))
        );
        // unary binds tightest
        assert_eq!(
            parse_scltl("X a U b", &a).unwrap(),
            Formula::until(Formula::next(Formula::atom(0)), Formula::atom(1))
        );
    }

    #[test]
    fn negation_of_non_atom_rejected() {
        let err = parse_scltl("a & !(a | b)", &atoms(&["a", "b"])).unwrap_err();
        assert!(matches!(err, Error::NegatedNonAtom { pos: 4 }), "{err:?}");
        assert!(matches!(parse_scltl("!true", &atoms(&["a"])), Err(Error::NegatedNonAtom { .. })));
        assert!(matches!(parse_scltl("!!a", &atoms(&["a"])), Err(Error::NegatedNonAtom { .. })));
    }

    #[test]
    fn negated_parenthesized_atom_is_fine() {
        assert_eq!(parse_scltl("!(a)", &atoms(&["a"])).unwrap(), Formula::not_atom(0));
    }

    #[test]
    fn unknown_atom_reports_position() {
        let err = parse_scltl("F  zz", &atoms(&["a"])).unwrap_err();
        match err {
            Error::UnknownAtom { name, pos } => {
                assert_eq!(name, "zz");
                assert_eq!(pos, 3);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        let a = atoms(&["a", "b"]);
        for bad in ["", "a &", "(a", "a b", "G a", "F<= a", "a < b", "a # b", "F<=-1 a"] {
            assert!(matches!(parse_scltl(bad, &a), Err(Error::Syntax { .. })), "{bad:?} should not parse");
        }
    }
}
