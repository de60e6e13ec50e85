//! Expression grammar for series arithmetic.
//!
//! Precedence, low to high: sum and difference, product (explicit `*`,
//! juxtaposition is an error), unary minus, `x^k` and `D^j(...)`, atoms.
//! Both `x^-3` and `x^(-3)` parse. Identifiers resolve against ring
//! symbols first, then session bindings. `D^j` applies the derivation
//! coefficientwise.

use pdo_core::series::{Series, SeriesRing};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character '{ch}' at position {pos}")]
    Lexical { ch: char, pos: usize },
    #[error("integer overflow at position {pos}")]
    IntOverflow { pos: usize },
    #[error("exponent overflow at position {pos}")]
    ExponentOverflow { pos: usize },
    #[error("unbalanced parentheses at position {pos}")]
    Unbalanced { pos: usize },
    #[error("expected {what} at position {pos}")]
    Expected { what: &'static str, pos: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected trailing input at position {pos}")]
    Trailing { pos: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown identifier '{name}' at position {pos}")]
    UnknownIdent { name: String, pos: usize },
    #[error("integer literal at position {pos} means that multiple of 1, but this ring has no identity")]
    IntLiteralNonunital { pos: usize },
    #[error("a bare power of x needs an identity coefficient, but this ring has none")]
    BareXNonunital,
    #[error("x exponent overflow")]
    DegreeOverflow,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Element { name: String, pos: usize },
    Int { value: i64, pos: usize },
    XPow { exp: i64 },
    Sum(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Delta { order: u32, arg: Box<Expr> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

/// Tokens with 1-based character positions.
fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let pos = i + 1;
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                toks.push((Tok::Plus, pos));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, pos));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, pos));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, pos));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, pos));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, pos));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, pos));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value: i64 = text
                    .parse()
                    .map_err(|_| ParseError::IntOverflow { pos })?;
                toks.push((Tok::Int(value), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            }
            ch => return Err(ParseError::Lexical { ch, pos }),
        }
    }
    Ok(toks)
}

pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(lex(input)?);
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

/// Comma-separated expressions, at least one.
pub fn parse_expr_list(input: &str) -> Result<Vec<Expr>, ParseError> {
    let mut p = Parser::new(lex(input)?);
    let mut out = vec![p.expr()?];
    while p.eat(&Tok::Comma) {
        out.push(p.expr()?);
    }
    p.end()?;
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn new(toks: Vec<(Tok, usize)>) -> Parser {
        Parser { toks, at: 0 }
    }

    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.at)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek().map(|(t, _)| t) == Some(want) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some((_, pos)) => Err(ParseError::Trailing { pos: *pos }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Sum(lhs.into(), self.term()?.into());
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Diff(lhs.into(), self.term()?.into());
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Star) {
            lhs = Expr::Prod(lhs.into(), self.unary()?.into());
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            Ok(Expr::Neg(self.unary()?.into()))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.next().ok_or(ParseError::Eof)?;
        match tok {
            Tok::Int(value) => Ok(Expr::Int { value, pos }),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen(pos)?;
                Ok(e)
            }
            Tok::Ident(name) if name == "x" => {
                if self.eat(&Tok::Caret) {
                    Ok(Expr::XPow {
                        exp: self.exponent()?,
                    })
                } else {
                    Ok(Expr::XPow { exp: 1 })
                }
            }
            Tok::Ident(name) if name == "D" && matches!(self.peek(), Some((Tok::Caret, _))) => {
                self.next();
                let (jt, jpos) = self.next().ok_or(ParseError::Eof)?;
                let order = match jt {
                    Tok::Int(v) if u32::try_from(v).is_ok() => v as u32,
                    Tok::Int(_) => return Err(ParseError::ExponentOverflow { pos: jpos }),
                    _ => {
                        return Err(ParseError::Expected {
                            what: "a nonnegative integer",
                            pos: jpos,
                        })
                    }
                };
                let (lp, lpos) = self.next().ok_or(ParseError::Eof)?;
                if lp != Tok::LParen {
                    return Err(ParseError::Expected {
                        what: "'('",
                        pos: lpos,
                    });
                }
                let arg = self.expr()?;
                self.expect_rparen(lpos)?;
                Ok(Expr::Delta {
                    order,
                    arg: arg.into(),
                })
            }
            Tok::Ident(name) => Ok(Expr::Element { name, pos }),
            _ => Err(ParseError::Expected {
                what: "an expression",
                pos,
            }),
        }
    }

    /// Integer exponent: `3`, `-3`, `(3)`, `(-3)`.
    fn exponent(&mut self) -> Result<i64, ParseError> {
        let (tok, pos) = self.next().ok_or(ParseError::Eof)?;
        match tok {
            Tok::Int(v) => Ok(v),
            Tok::Minus => match self.next() {
                Some((Tok::Int(v), _)) => Ok(-v),
                Some((_, p)) => Err(ParseError::Expected {
                    what: "an integer exponent",
                    pos: p,
                }),
                None => Err(ParseError::Eof),
            },
            Tok::LParen => {
                let neg = self.eat(&Tok::Minus);
                let v = match self.next() {
                    Some((Tok::Int(v), _)) => v,
                    Some((_, p)) => {
                        return Err(ParseError::Expected {
                            what: "an integer exponent",
                            pos: p,
                        })
                    }
                    None => return Err(ParseError::Eof),
                };
                self.expect_rparen(pos)?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(ParseError::Expected {
                what: "an integer exponent",
                pos,
            }),
        }
    }

    fn expect_rparen(&mut self, open_pos: usize) -> Result<(), ParseError> {
        match self.next() {
            Some((Tok::RParen, _)) => Ok(()),
            Some((_, pos)) => Err(ParseError::Unbalanced { pos }),
            None => Err(ParseError::Unbalanced { pos: open_pos }),
        }
    }
}

/// `x^k` is kept symbolic until it meets a coefficient, so `x*a` works in
/// rings without identity.
enum Value {
    Ser(Series),
    XPow(i64),
}

pub fn eval_expr(
    sr: &SeriesRing,
    bindings: &BTreeMap<String, Series>,
    e: &Expr,
) -> Result<Series, EvalError> {
    match eval(sr, bindings, e)? {
        Value::Ser(f) => Ok(f),
        Value::XPow(k) => sr.x_power(k).map_err(|_| EvalError::BareXNonunital),
    }
}

fn eval(
    sr: &SeriesRing,
    bindings: &BTreeMap<String, Series>,
    e: &Expr,
) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Element { name, pos } => {
            if let Some(a) = sr.ring().lookup_symbol(name) {
                Value::Ser(sr.embed_scalar(a).expect("symbol is in range"))
            } else if let Some(f) = bindings.get(name) {
                Value::Ser(f.clone())
            } else {
                return Err(EvalError::UnknownIdent {
                    name: name.clone(),
                    pos: *pos,
                });
            }
        }
        Expr::Int { value, pos } => {
            let one = sr
                .ring()
                .one()
                .ok_or(EvalError::IntLiteralNonunital { pos: *pos })?;
            let a = sr.ring().int_scale(*value, one);
            Value::Ser(sr.embed_scalar(a).expect("element is in range"))
        }
        Expr::XPow { exp } => Value::XPow(*exp),
        Expr::Sum(a, b) => Value::Ser(sr.add(
            &eval_expr(sr, bindings, a)?,
            &eval_expr(sr, bindings, b)?,
        )),
        Expr::Diff(a, b) => Value::Ser(sr.sub(
            &eval_expr(sr, bindings, a)?,
            &eval_expr(sr, bindings, b)?,
        )),
        Expr::Prod(a, b) => match (eval(sr, bindings, a)?, eval(sr, bindings, b)?) {
            (Value::XPow(j), Value::XPow(k)) => {
                Value::XPow(j.checked_add(k).ok_or(EvalError::DegreeOverflow)?)
            }
            (Value::XPow(k), Value::Ser(f)) => Value::Ser(sr.x_mul(k, &f)),
            (Value::Ser(f), Value::XPow(k)) => Value::Ser(sr.shift(&f, k)),
            (Value::Ser(f), Value::Ser(g)) => Value::Ser(sr.mul(&f, &g)),
        },
        Expr::Neg(a) => Value::Ser(sr.neg(&eval_expr(sr, bindings, a)?)),
        Expr::Delta { order, arg } => {
            let mut f = eval_expr(sr, bindings, arg)?;
            for _ in 0..*order {
                f = sr.delta_series(&f);
            }
            Value::Ser(f)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pdo_core::ring::{make_truncated_poly, make_zn, Derivation};
    use pdo_core::series::PrecisionPolicy;
    use pdo_core::FiniteRing;
    use std::sync::Arc;

    fn el(name: &str, pos: usize) -> Expr {
        Expr::Element {
            name: name.to_string(),
            pos,
        }
    }

    #[test]
    fn precedence_and_power_forms() {
        assert_eq!(
            parse_expr("a*x^2 + x^-1").unwrap(),
            Expr::Sum(
                Expr::Prod(el("a", 1).into(), Expr::XPow { exp: 2 }.into()).into(),
                Expr::XPow { exp: -1 }.into(),
            )
        );
        assert_eq!(parse_expr("x^-3").unwrap(), parse_expr("x^(-3)").unwrap());
        assert_eq!(parse_expr("x").unwrap(), Expr::XPow { exp: 1 });
        // Unary minus binds tighter than the product.
        assert_eq!(
            parse_expr("-a*x").unwrap(),
            Expr::Prod(
                Expr::Neg(el("a", 2).into()).into(),
                Expr::XPow { exp: 1 }.into()
            )
        );
    }

    #[test]
    fn delta_application_form() {
        assert_eq!(
            parse_expr("D^2(a*x)").unwrap(),
            Expr::Delta {
                order: 2,
                arg: Expr::Prod(el("a", 5).into(), Expr::XPow { exp: 1 }.into()).into(),
            }
        );
        // Without a caret, D is an ordinary identifier.
        assert_eq!(parse_expr("D").unwrap(), el("D", 1));
        assert_eq!(
            parse_expr("D^2 a").unwrap_err(),
            ParseError::Expected {
                what: "'('",
                pos: 5
            }
        );
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse_expr("a*x^2 +").unwrap_err(), ParseError::Eof);
        assert_eq!(
            parse_expr("(a + b").unwrap_err(),
            ParseError::Unbalanced { pos: 1 }
        );
        assert_eq!(
            parse_expr("a $ b").unwrap_err(),
            ParseError::Lexical { ch: '$', pos: 3 }
        );
        assert_eq!(
            parse_expr("99999999999999999999").unwrap_err(),
            ParseError::IntOverflow { pos: 1 }
        );
        assert_eq!(
            parse_expr("a b").unwrap_err(),
            ParseError::Trailing { pos: 3 }
        );
        assert_eq!(
            parse_expr("a, b").unwrap_err(),
            ParseError::Trailing { pos: 2 }
        );
        assert_eq!(parse_expr_list("a, 1").unwrap().len(), 2);
    }

    fn dual_session() -> (pdo_core::SeriesRing, BTreeMap<String, Series>) {
        let ring = make_truncated_poly(2, &[2], 4096).unwrap();
        // d/da on c0 + c1*a is c1.
        let delta = Derivation::from_table(Arc::clone(&ring), vec![0, 0, 1, 1]).unwrap();
        let sr = pdo_core::SeriesRing::new(ring, delta, PrecisionPolicy::default()).unwrap();
        (sr, BTreeMap::new())
    }

    #[test]
    fn eval_matches_commutation_rules() {
        let (sr, binds) = dual_session();
        let show = |src: &str| {
            sr.display(&eval_expr(&sr, &binds, &parse_expr(src).unwrap()).unwrap())
        };
        assert_eq!(show("x*a"), "a*x + 1");
        assert_eq!(show("x^-1 * x"), "1");
        assert_eq!(show("x^-1 * a"), "a*x^-1 + x^-2");
        assert_eq!(show("D^1(a*x^2)"), "x^2");
        assert_eq!(show("a - a"), "0");
        assert_eq!(show("-(a*x)"), "a*x");
        assert_eq!(show("(a + 1)*(a + 1)"), "1");
    }

    #[test]
    fn unknown_identifiers_carry_positions() {
        let (sr, binds) = dual_session();
        let e = parse_expr("a + bogus").unwrap();
        assert_eq!(
            eval_expr(&sr, &binds, &e).unwrap_err(),
            EvalError::UnknownIdent {
                name: "bogus".to_string(),
                pos: 5
            }
        );
    }

    #[test]
    fn nonunital_rings_reject_integers_and_bare_x() {
        // {0, 2} inside Z4: an order-2 ring with zero multiplication.
        let ring = Arc::new(
            FiniteRing::from_add_mul(2, vec![0, 1, 1, 0], vec![0, 0, 0, 0]).unwrap(),
        );
        let delta = Derivation::zero(Arc::clone(&ring));
        let sr = pdo_core::SeriesRing::new(ring, delta, PrecisionPolicy::default()).unwrap();
        let binds = BTreeMap::new();
        assert_eq!(
            eval_expr(&sr, &binds, &parse_expr("1").unwrap()).unwrap_err(),
            EvalError::IntLiteralNonunital { pos: 1 }
        );
        assert_eq!(
            eval_expr(&sr, &binds, &parse_expr("x^2").unwrap()).unwrap_err(),
            EvalError::BareXNonunital
        );
        // x times a series still works: the power never stands alone.
        let f = eval_expr(&sr, &binds, &parse_expr("x*(x^-1)").unwrap());
        assert!(f.is_err(), "x*(x^-1) still ends as a bare power");
    }

    #[test]
    fn bindings_resolve_after_symbols() {
        let ring = make_zn(4, 4096).unwrap();
        let delta = Derivation::zero(Arc::clone(&ring));
        let sr = pdo_core::SeriesRing::new(ring, delta, PrecisionPolicy::default()).unwrap();
        let mut binds = BTreeMap::new();
        let f = eval_expr(&sr, &binds, &parse_expr("2*x + 1").unwrap()).unwrap();
        binds.insert("f".to_string(), f.clone());
        let g = eval_expr(&sr, &binds, &parse_expr("f*f").unwrap()).unwrap();
        assert_eq!(sr.display(&g), "1");
    }
}
