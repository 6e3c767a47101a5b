//! Text syntax for polynomials.
//!
//! Accepts `+ - * / ^` with parentheses and implicit multiplication
//! (`3x`, `2(x+1)`).  Variables come from the caller's ring; the identifier
//! `t` denotes the generator of an extension coefficient field.  Division is
//! scalar only: the divisor must evaluate to a nonzero constant.

use super::MPoly;
use crate::field::{FieldDescriptor, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fmt;

/// A syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parse a polynomial over `field` in the ring with the given variables.
pub fn parse_poly(input: &str, field: &FieldDescriptor, vars: &[&str]) -> Result<MPoly, ParseError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0, field, vars, input_len: input.len() };
    let poly = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        let (_, at) = &parser.tokens[parser.pos];
        return Err(err(*at, "unexpected trailing input"));
    }
    Ok(poly)
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError { position, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let at = i;
        match bytes[i] {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => { out.push((Token::Plus, at)); i += 1 }
            b'-' => { out.push((Token::Minus, at)); i += 1 }
            b'*' => { out.push((Token::Star, at)); i += 1 }
            b'/' => { out.push((Token::Slash, at)); i += 1 }
            b'^' => { out.push((Token::Caret, at)); i += 1 }
            b'(' => { out.push((Token::LParen, at)); i += 1 }
            b')' => { out.push((Token::RParen, at)); i += 1 }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[at..i].parse().expect("digits parse as an integer");
                out.push((Token::Int(n), at));
            }
            c if c.is_ascii_alphabetic() => {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'\'') {
                    i += 1;
                }
                out.push((Token::Ident(input[at..i].to_string()), at));
            }
            c => return Err(err(at, format!("unexpected character {:?}", c as char))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    field: &'a FieldDescriptor,
    vars: &'a [&'a str],
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.input_len, |(_, at)| *at)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Token::Slash) => {
                    let at = self.here();
                    self.bump();
                    let divisor = self.unary()?;
                    if !divisor.is_constant() {
                        return Err(err(at, "division by a non-constant polynomial"));
                    }
                    let zeros = vec![0u32; self.vars.len()];
                    let c = divisor.coeff(&zeros);
                    let inv = c
                        .inv()
                        .map_err(|_| err(at, "division by zero"))?;
                    acc = acc.mul_scalar(&inv);
                }
                // adjacency means multiplication: 3x, x y, 2(x+1)
                Some(Token::Int(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some(Token::Int(n)) => {
                    let e = n
                        .to_u32()
                        .ok_or_else(|| err(at, "exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(err(at, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Token::Int(n)) => Ok(self.constant(self.integer_scalar(&n))),
            Some(Token::Ident(name)) => {
                if let Some(ix) = self.vars.iter().position(|&v| v == name) {
                    Ok(MPoly::variable(self.field.clone(), self.vars, ix))
                } else if name == "t" {
                    match self.field.generator() {
                        Some(g) => Ok(self.constant(g)),
                        None => Err(err(
                            at,
                            "the coefficient generator t needs an extension field",
                        )),
                    }
                } else {
                    Err(err(at, format!("unknown variable {name:?}")))
                }
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(err(self.here(), "expected a closing parenthesis")),
                }
            }
            _ => Err(err(at, "expected a number, variable, or parenthesis")),
        }
    }

    fn constant(&self, c: Scalar) -> MPoly {
        MPoly::constant(self.field.clone(), self.vars, c)
    }

    fn integer_scalar(&self, n: &BigInt) -> Scalar {
        match self.field {
            FieldDescriptor::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            FieldDescriptor::Finite(k) => {
                let p = BigInt::from(k.characteristic());
                let r = ((n % &p) + &p) % &p;
                self.field.integer(r.to_i64().expect("reduced residue fits"))
            }
        }
    }
}
