//! Symbolic words over the generator families.
//!
//! ```text
//! expr  := term ('*' term)*
//! term  := unary ('^' unary)*        a ^ g  is  g·a·g⁻¹, left-associative
//! unary := '~' unary | atom
//! atom  := s<i> | e<i> | r<i> | cycles | '(' expr ')'
//! ```
//!
//! `cycles` is one or more cycle-notation groups such as `(0 1 2)(3 4)`; a
//! `(` starts a cycle group when the next non-blank character is a digit or
//! `)`.

use std::fmt;

use thiserror::Error;

use crate::perm::{parse_cycle_list, Perm, PermError};
use crate::wreath::{Params, WreathError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("malformed word at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Sigma(usize),
    Eta(usize),
    Rho(usize),
    Cycles(Vec<Vec<usize>>),
    Mul(Box<Expr>, Box<Expr>),
    /// `Conj(a, g)` is `^g a`.
    Conj(Box<Expr>, Box<Expr>),
    Inv(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, params: &Params) -> Result<Perm, WordError> {
        Ok(match self {
            Expr::Sigma(i) => params.sigma(*i)?,
            Expr::Eta(i) => params.eta(*i)?,
            Expr::Rho(i) => params.rho(*i)?,
            Expr::Cycles(c) => Perm::from_cycles(params.degree(), c)?,
            Expr::Mul(a, b) => a.eval(params)?.mul(&b.eval(params)?),
            Expr::Conj(a, g) => a.eval(params)?.conj(&g.eval(params)?),
            Expr::Inv(a) => a.eval(params)?.inverse(),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sigma(i) => write!(f, "s{i}"),
            Expr::Eta(i) => write!(f, "e{i}"),
            Expr::Rho(i) => write!(f, "r{i}"),
            Expr::Cycles(c) if c.is_empty() => write!(f, "()"),
            Expr::Cycles(c) => {
                for cycle in c {
                    let pts: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
                    write!(f, "({})", pts.join(" "))?;
                }
                Ok(())
            }
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Conj(a, g) => write!(f, "({a} ^ {g})"),
            Expr::Inv(a) => write!(f, "~{a}"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    depth: usize,
}

const MAX_NESTING: usize = 256;

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, WordError> {
        Err(WordError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn enter(&mut self) -> Result<(), WordError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.err("nesting too deep");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, WordError> {
        self.enter()?;
        let mut acc = self.term()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.term()?));
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, WordError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            acc = Expr::Conj(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, WordError> {
        if self.peek() == Some(b'~') {
            self.pos += 1;
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Inv(Box::new(inner)));
        }
        self.atom()
    }

    fn starts_cycles(&self) -> bool {
        let rest = &self.bytes[self.pos + 1..];
        match rest.iter().find(|b| !b.is_ascii_whitespace()) {
            Some(b) => b.is_ascii_digit() || *b == b')',
            None => false,
        }
    }

    fn atom(&mut self) -> Result<Expr, WordError> {
        match self.peek() {
            Some(b'(') if self.starts_cycles() => self.cycles(),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c @ (b's' | b'e' | b'r')) => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return self.err("expected a level after the generator letter");
                }
                let level = self.src[start..self.pos]
                    .parse::<usize>()
                    .or_else(|_| self.err("level out of range"))?;
                Ok(match c {
                    b's' => Expr::Sigma(level),
                    b'e' => Expr::Eta(level),
                    _ => Expr::Rho(level),
                })
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn cycles(&mut self) -> Result<Expr, WordError> {
        let start = self.pos;
        while self.peek() == Some(b'(') && self.starts_cycles() {
            match self.src[self.pos..].find(')') {
                Some(off) => self.pos += off + 1,
                None => return self.err("unclosed cycle"),
            }
        }
        let text = &self.src[start..self.pos];
        let cycles = parse_cycle_list(text).map_err(|e| match e {
            PermError::Malformed { pos, msg } => WordError::Parse {
                pos: start + pos,
                msg,
            },
            other => WordError::Perm(other),
        })?;
        Ok(Expr::Cycles(cycles))
    }
}

pub fn parse_word(text: &str) -> Result<Expr, WordError> {
    let mut parser = Parser {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return parser.err("trailing input");
    }
    Ok(expr)
}

pub fn eval_word(text: &str, params: &Params) -> Result<Perm, WordError> {
    parse_word(text)?.eval(params)
}

/// `;`-separated list of words; empty pieces are skipped.
pub fn parse_generators(text: &str, params: &Params) -> Result<Vec<Perm>, WordError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(';') {
        if !piece.trim().is_empty() {
            let perm = eval_word(piece, params).map_err(|e| match e {
                WordError::Parse { pos, msg } => WordError::Parse {
                    pos: offset + pos,
                    msg,
                },
                other => other,
            })?;
            out.push(perm);
        }
        offset += piece.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p3() -> Params {
        Params::new(3, 3).unwrap()
    }

    #[test]
    fn generator_atoms() {
        let pr = p3();
        assert_eq!(eval_word("s2", &pr).unwrap().format_cycles(), "(0 1 2)");
        assert_eq!(
            eval_word("r2", &pr).unwrap().format_cycles(),
            "(3 4 5)(6 7 8)"
        );
        assert_eq!(eval_word("e2", &pr).unwrap(), pr.eta(2).unwrap());
        assert!(eval_word("s3", &pr).is_err());
        assert!(eval_word("r0", &pr).is_err());
    }

    #[test]
    fn conjugation_convention() {
        let pr = p3();
        assert_eq!(
            eval_word("s2 ^ s0", &pr).unwrap().format_cycles(),
            "(9 10 11)"
        );
        let w = eval_word("s2 ^ (s0*s0*s1*s1)", &pr).unwrap();
        assert_eq!(w.format_cycles(), "(24 25 26)");
        // Left-associative: (a ^ g) ^ h = ^h(^g a).
        let a = eval_word("s2 ^ s1 ^ s0", &pr).unwrap();
        let b = eval_word("s2 ^ (s0 * s1)", &pr).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_word("s1 * s2 ^ s0").unwrap(),
            Expr::Mul(
                Box::new(Expr::Sigma(1)),
                Box::new(Expr::Conj(
                    Box::new(Expr::Sigma(2)),
                    Box::new(Expr::Sigma(0))
                ))
            )
        );
        assert_eq!(
            parse_word("~s1 ^ s0").unwrap(),
            Expr::Conj(
                Box::new(Expr::Inv(Box::new(Expr::Sigma(1)))),
                Box::new(Expr::Sigma(0))
            )
        );
    }

    #[test]
    fn cycle_literals() {
        let pr = p3();
        assert_eq!(
            eval_word("(0 3 6)(1 4 7)(2 5 8)", &pr).unwrap(),
            pr.sigma(1).unwrap()
        );
        assert!(eval_word("()", &pr).unwrap().is_identity());
        assert_eq!(
            eval_word("(0 1 2) * ( 0 1 2 )", &pr).unwrap(),
            pr.sigma(2).unwrap().pow(2)
        );
        assert_eq!(eval_word("((0 1 2))", &pr).unwrap(), pr.sigma(2).unwrap());
        assert!(eval_word("(0 1 27)", &pr).is_err());
        assert!(eval_word("(0 1", &pr).is_err());
    }

    #[test]
    fn errors() {
        for bad in [
            "", "s", "s1 *", "* s1", "(s1", "s1)", "x1", "s1 s2", "~", "s1 ^",
        ] {
            assert!(parse_word(bad).is_err(), "{bad:?}");
        }
        let deep = "(".repeat(10_000) + "s0" + &")".repeat(10_000);
        assert!(parse_word(&deep).is_err());
        let deep = "~".repeat(10_000) + "s0";
        assert!(parse_word(&deep).is_err());
    }

    #[test]
    fn generator_lists() {
        let pr = p3();
        let gens = parse_generators("s0; s1 ;; (0 1 2)", &pr).unwrap();
        assert_eq!(
            gens,
            vec![
                pr.sigma(0).unwrap(),
                pr.sigma(1).unwrap(),
                pr.sigma(2).unwrap()
            ]
        );
        assert!(parse_generators("", &pr).unwrap().is_empty());
        match parse_generators("s0; s1 *", &pr) {
            Err(WordError::Parse { pos, .. }) => assert!(pos >= 4),
            other => panic!("{other:?}"),
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0usize..3).prop_map(Expr::Sigma),
            (0usize..3).prop_map(Expr::Eta),
            (1usize..3).prop_map(Expr::Rho),
            Just(Expr::Cycles(vec![vec![0, 1, 2]])),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Conj(Box::new(a), Box::new(b))),
                inner.prop_map(|a| Expr::Inv(Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trip(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse_word(&text).unwrap(), e);
        }

        #[test]
        fn parser_never_panics(s in "[se r0-9()~*^ ;]{0,40}") {
            let _ = parse_generators(&s, &p3());
        }
    }
}
