//! The CLI expression language: a small recursive-descent parser with byte
//! offsets and expected-token sets, plus a rendering that round-trips.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] INT)*
//! atom   := INT ['/' INT] | 'al' | 's' | 'z'
//!         | FAMILY ['*'] '[' index ']'
//!         | CALL '(' expr (',' expr)* ')'
//!         | '(' expr ')'
//! index  := ['-'] INT ['/' INT]
//! ```
//!
//! Rational literals are decimal-free (`p` or `p/q`); basis indices are
//! integers or half-odd fractions `p/2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::density::{Family, HalfInt};
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallName {
    Bracket,
    Dot,
    Jprod,
    C2,
    C1L,
    C1J,
    Pair,
    Coad,
}

impl CallName {
    pub const ALL: [CallName; 8] = [
        CallName::Bracket,
        CallName::Dot,
        CallName::Jprod,
        CallName::C2,
        CallName::C1L,
        CallName::C1J,
        CallName::Pair,
        CallName::Coad,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CallName::Bracket => "bracket",
            CallName::Dot => "dot",
            CallName::Jprod => "jprod",
            CallName::C2 => "c2",
            CallName::C1L => "C1L",
            CallName::C1J => "C1J",
            CallName::Pair => "pair",
            CallName::Coad => "coad",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            CallName::C1L | CallName::C1J => 1,
            _ => 2,
        }
    }

    fn parse(name: &str) -> Option<CallName> {
        CallName::ALL.iter().copied().find(|c| c.name() == name)
    }
}

/// Abstract syntax of the expression language.
///
/// Invariant: literals are non-negative (the parser emits `Neg` nodes for
/// leading minus signs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom { family: Family, index: HalfInt },
    Lit(Rational),
    Alpha,
    SqrtTwo,
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(CallName, Vec<Expr>),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at byte {offset}: expected {}, found {found}", expected.join(" | "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{}", n),
            Tok::Ident(s) => write!(f, "{}", s),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            let start = lx.pos;
            let Some(&c) = lx.src.get(lx.pos) else {
                out.push((Tok::End, start));
                return Ok(out);
            };
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'[' => {
                    lx.pos += 1;
                    Tok::LBracket
                }
                b']' => {
                    lx.pos += 1;
                    Tok::RBracket
                }
                b',' => {
                    lx.pos += 1;
                    Tok::Comma
                }
                b'0'..=b'9' => {
                    let mut end = lx.pos;
                    while end < lx.src.len() && lx.src[end].is_ascii_digit() {
                        end += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[lx.pos..end]).expect("ascii digits");
                    lx.pos = end;
                    Tok::Int(text.parse().expect("digits"))
                }
                c if c.is_ascii_alphabetic() => {
                    let mut end = lx.pos;
                    while end < lx.src.len()
                        && (lx.src[end].is_ascii_alphanumeric() || lx.src[end] == b'_')
                    {
                        end += 1;
                    }
                    let text =
                        std::str::from_utf8(&lx.src[lx.pos..end]).expect("ascii ident");
                    lx.pos = end;
                    Tok::Ident(text.to_string())
                }
                other => {
                    return Err(ParseError {
                        offset: start,
                        expected: vec!["token".to_string()],
                        found: format!("{:?}", char::from(other)),
                    })
                }
            };
            out.push((tok, start));
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(&[what])
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.parse_unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.parse_unary()?;
            Ok(Expr::Neg(Box::new(inner)))
        } else {
            self.parse_power()
        }
    }

    fn parse_power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.parse_atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let neg = if *self.peek() == Tok::Minus {
                self.bump();
                true
            } else {
                false
            };
            let Tok::Int(n) = self.peek().clone() else {
                return self.err(&["integer exponent"]);
            };
            self.bump();
            let mag: i64 = n
                .try_into()
                .map_err(|_| ParseError {
                    offset: self.offset(),
                    expected: vec!["small integer exponent".to_string()],
                    found: "oversized exponent".to_string(),
                })?;
            base = Expr::Pow(Box::new(base), if neg { -mag } else { mag });
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(_) => {
                let r = self.parse_rational_tail()?;
                Ok(Expr::Lit(r))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(call) = CallName::parse(&name) {
                    if *self.peek2() == Tok::LParen {
                        self.bump();
                        self.bump();
                        let mut args = vec![self.parse_expr()?];
                        while *self.peek() == Tok::Comma {
                            self.bump();
                            args.push(self.parse_expr()?);
                        }
                        self.expect(Tok::RParen, "')'")?;
                        if args.len() != call.arity() {
                            return Err(ParseError {
                                offset: self.offset(),
                                expected: vec![format!(
                                    "{} argument(s) to {}",
                                    call.arity(),
                                    call.name()
                                )],
                                found: format!("{} argument(s)", args.len()),
                            });
                        }
                        return Ok(Expr::Call(call, args));
                    }
                }
                if let Some(family) = Family::parse(&name) {
                    self.bump();
                    // A `*` immediately before `[` selects the dual family.
                    let family = if *self.peek() == Tok::Star && *self.peek2() == Tok::LBracket
                    {
                        self.bump();
                        match Family::parse(&format!("{}*", name)) {
                            Some(f) => f,
                            None => return self.err(&["primal family before '*'"]),
                        }
                    } else {
                        family
                    };
                    self.expect(Tok::LBracket, "'['")?;
                    let index = self.parse_index()?;
                    self.expect(Tok::RBracket, "']'")?;
                    if family.integer_indexed() != index.is_integer() {
                        return Err(ParseError {
                            offset: self.offset(),
                            expected: vec![if family.integer_indexed() {
                                format!("integer index for {}", family.name())
                            } else {
                                format!("half-odd index p/2 for {}", family.name())
                            }],
                            found: index.to_string(),
                        });
                    }
                    return Ok(Expr::Atom { family, index });
                }
                match name.as_str() {
                    "al" => {
                        self.bump();
                        Ok(Expr::Alpha)
                    }
                    "s" => {
                        self.bump();
                        Ok(Expr::SqrtTwo)
                    }
                    "z" => {
                        self.bump();
                        Ok(Expr::Z)
                    }
                    _ => self.err(&[
                        "rational literal",
                        "al",
                        "s",
                        "z",
                        "basis atom like V[2] or phi[5/2]",
                        "call like c2(..)",
                        "'('",
                    ]),
                }
            }
            _ => self.err(&[
                "rational literal",
                "al",
                "s",
                "z",
                "basis atom",
                "call",
                "'-'",
                "'('",
            ]),
        }
    }

    /// `INT ['/' INT]`, non-negative.
    fn parse_rational_tail(&mut self) -> Result<Rational, ParseError> {
        let Tok::Int(num) = self.bump() else { unreachable!("caller checked") };
        if *self.peek() == Tok::Slash {
            self.bump();
            let Tok::Int(den) = self.peek().clone() else {
                return self.err(&["denominator"]);
            };
            if den.is_zero() {
                return self.err(&["nonzero denominator"]);
            }
            self.bump();
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn parse_index(&mut self) -> Result<HalfInt, ParseError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        if !matches!(self.peek(), Tok::Int(_)) {
            return self.err(&["index integer"]);
        }
        let r = self.parse_rational_tail()?;
        let r = if neg { -r } else { r };
        let twice = &r * Rational::from_integer(2.into());
        if !twice.is_integer() {
            return Err(ParseError {
                offset: self.offset(),
                expected: vec!["integer or half-odd index p/2".to_string()],
                found: r.to_string(),
            });
        }
        let twice: i64 = twice.to_integer().try_into().map_err(|_| ParseError {
            offset: self.offset(),
            expected: vec!["small index".to_string()],
            found: "oversized index".to_string(),
        })?;
        Ok(HalfInt::from_twice(twice))
    }
}

/// Parses an expression; the full input must be consumed.
pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let toks = Lexer::tokens(input)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.parse_expr()?;
    if *p.peek() != Tok::End {
        return p.err(&["end of input", "'+'", "'-'", "'*'", "'^'"]);
    }
    Ok(e)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({})", e)
    } else {
        write!(f, "{}", e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom { family, index } => write!(f, "{}[{}]", family.name(), index),
            Expr::Lit(r) => {
                debug_assert!(!r.is_negative());
                write!(f, "{}", r)
            }
            Expr::Alpha => write!(f, "al"),
            Expr::SqrtTwo => write!(f, "s"),
            Expr::Z => write!(f, "z"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                fmt_child(f, x, 3)
            }
            Expr::Add(l, r) => {
                fmt_child(f, l, 1)?;
                write!(f, " + ")?;
                fmt_child(f, r, 2)
            }
            Expr::Sub(l, r) => {
                fmt_child(f, l, 1)?;
                write!(f, " - ")?;
                fmt_child(f, r, 2)
            }
            Expr::Mul(l, r) => {
                fmt_child(f, l, 2)?;
                write!(f, "*")?;
                fmt_child(f, r, 3)
            }
            Expr::Pow(b, e) => {
                fmt_child(f, b, 5)?;
                if *e < 0 {
                    write!(f, "^-{}", -e)
                } else {
                    write!(f, "^{}", e)
                }
            }
            Expr::Call(name, args) => {
                write!(f, "{}(", name.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", a)?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(f: Family, twice: i64) -> Expr {
        Expr::Atom { family: f, index: HalfInt::from_twice(twice) }
    }

    #[test]
    fn parses_calls() {
        assert_eq!(
            parse("bracket(V[0], V[1])").unwrap(),
            Expr::Call(
                CallName::Bracket,
                vec![atom(Family::V, 0), atom(Family::V, 2)]
            )
        );
        assert_eq!(
            parse("c2(phi[5/2], phi[-5/2])").unwrap(),
            Expr::Call(CallName::C2, vec![atom(Family::Phi, 5), atom(Family::Phi, -5)])
        );
    }

    #[test]
    fn parses_scalar_combination() {
        // 2*al*G[-1] + G[0]
        let e = parse("2*al*G[-1] + G[0]").unwrap();
        let expect = Expr::Add(
            Box::new(Expr::Mul(
                Box::new(Expr::Mul(
                    Box::new(Expr::Lit(crate::scalar::rat_int(2))),
                    Box::new(Expr::Alpha),
                )),
                Box::new(atom(Family::G, -2)),
            )),
            Box::new(atom(Family::G, 0)),
        );
        assert_eq!(e, expect);
    }

    #[test]
    fn parses_duals_and_powers() {
        assert_eq!(parse("V*[-2]").unwrap(), atom(Family::VDual, -4));
        assert_eq!(
            parse("(z^2 - al^2)^-1").unwrap(),
            Expr::Pow(
                Box::new(Expr::Sub(
                    Box::new(Expr::Pow(Box::new(Expr::Z), 2)),
                    Box::new(Expr::Pow(Box::new(Expr::Alpha), 2)),
                )),
                -1
            )
        );
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "V[1/2]",      // parity
            "phi[2]",      // parity
            "c2(V[0])",    // arity
            "1.5",         // decimals
            "V[",          // truncation
            "bogus[1]",    // unknown family
            "1/0",         // zero denominator
            "",            // empty
            "V[2] V[3]",   // trailing garbage
        ] {
            let r = parse(bad);
            assert!(r.is_err(), "{:?} should fail, got {:?}", bad, r);
        }
        let err = parse("c2(V[0], )").unwrap_err();
        assert!(err.offset > 0);
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn unary_minus_binds_tighter_than_mul() {
        // -2*V[0] is (-2) * V[0]
        let e = parse("-2*V[0]").unwrap();
        assert_eq!(
            e,
            Expr::Mul(
                Box::new(Expr::Neg(Box::new(Expr::Lit(crate::scalar::rat_int(2))))),
                Box::new(atom(Family::V, 0)),
            )
        );
    }

    #[test]
    fn render_round_trip() {
        for src in [
            "bracket(V[0], V[1])",
            "c2(phi[5/2], phi[-5/2])",
            "2*al*G[-1] + G[0]",
            "-(V[1] + V[2])",
            "pair(V*[0], V[0])",
            "(z^2 - al^2)^-1",
            "z*(z^2 - al^2)^-1",
            "1/2*s + 3",
            "coad(e[0], eps*[0])",
            "--3",
            "C1J(G[3])",
        ] {
            let ast = parse(src).unwrap();
            let rendered = ast.to_string();
            let reparsed = parse(&rendered)
                .unwrap_or_else(|e| panic!("re-parsing {:?} failed: {}", rendered, e));
            assert_eq!(reparsed, ast, "{:?} -> {:?}", src, rendered);
        }
    }
}
