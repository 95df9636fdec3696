//! Recursive-descent parser for polynomial coordinate formulas.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' INTEGER)?
//! atom  := INTEGER | IDENT | '(' expr ')'
//! ```
//!
//! Integers are reduced mod `p`; the identifier `a` denotes the generator of
//! the base field `F_q` and is only available when `q` is not prime.

use thiserror::Error;

use crate::field::{EmbeddingMap, Field, FieldElement};

/// Polynomial over the base field. Subtraction and negation are encoded as
/// multiplication by the constant `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Const(FieldElement),
    Var(usize),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u64),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("`a` at position {position} needs a non-prime base field")]
    GeneratorInPrimeField { position: usize },
    #[error("exponent at position {position} must be a positive integer")]
    BadExponent { position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    field: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.here(),
            message: message.into(),
        }
    }

    fn minus_one(&self) -> PolyExpr {
        PolyExpr::Const(self.field.neg(self.field.one()))
    }

    fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    let neg = PolyExpr::Mul(Box::new(self.minus_one()), Box::new(rhs));
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(neg));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PolyExpr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(PolyExpr::Mul(Box::new(self.minus_one()), Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<PolyExpr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let position = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.pos += 1;
                let k: u64 = digits
                    .parse()
                    .map_err(|_| ParseError::BadExponent { position })?;
                if k == 0 {
                    return Err(ParseError::BadExponent { position });
                }
                Ok(PolyExpr::Pow(Box::new(base), k))
            }
            Some(Tok::Minus) => Err(ParseError::BadExponent { position }),
            _ => Err(self.syntax("expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<PolyExpr, ParseError> {
        let position = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.pos += 1;
                let p = self.field.characteristic();
                let r = digits
                    .bytes()
                    .fold(0u64, |acc, b| ((acc as u128 * 10 + (b - b'0') as u128) % p as u128) as u64);
                let c = self.field.element(r).expect("residue below p");
                Ok(PolyExpr::Const(c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(PolyExpr::Var(i))
                } else if name == "a" {
                    if self.field.degree() == 1 {
                        Err(ParseError::GeneratorInPrimeField { position })
                    } else {
                        Ok(PolyExpr::Const(self.field.generator()))
                    }
                } else {
                    Err(ParseError::UnknownIdentifier { name, position })
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(self.syntax(format!("unexpected {}", describe(&t)))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(s) | Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

/// Parses `text` over the base field `field` with the given variable names.
pub fn parse_polynomial(text: &str, vars: &[String], field: &Field) -> Result<PolyExpr, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        vars,
        field,
    };
    let expr = parser.expr()?;
    if parser.pos != parser.toks.len() {
        let t = parser.toks[parser.pos].1.clone();
        return Err(parser.syntax(format!("unexpected {}", describe(&t))));
    }
    Ok(expr)
}

/// A polynomial with its constants already mapped into the working field.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Const(u64),
    Var(usize),
    Add(Box<Compiled>, Box<Compiled>),
    Mul(Box<Compiled>, Box<Compiled>),
    Pow(Box<Compiled>, u64),
}

impl Compiled {
    pub(crate) fn new(expr: &PolyExpr, embed: &EmbeddingMap) -> Compiled {
        match expr {
            PolyExpr::Const(c) => Compiled::Const(embed.apply(*c).index()),
            PolyExpr::Var(i) => Compiled::Var(*i),
            PolyExpr::Add(l, r) => {
                Compiled::Add(Box::new(Self::new(l, embed)), Box::new(Self::new(r, embed)))
            }
            PolyExpr::Mul(l, r) => {
                Compiled::Mul(Box::new(Self::new(l, embed)), Box::new(Self::new(r, embed)))
            }
            PolyExpr::Pow(b, k) => Compiled::Pow(Box::new(Self::new(b, embed)), *k),
        }
    }

    pub(crate) fn eval(&self, field: &Field, point: &[u64]) -> u64 {
        match self {
            Compiled::Const(c) => *c,
            Compiled::Var(i) => point[*i],
            Compiled::Add(l, r) => field.add_raw(l.eval(field, point), r.eval(field, point)),
            Compiled::Mul(l, r) => field.mul_raw(l.eval(field, point), r.eval(field, point)),
            Compiled::Pow(b, k) => field.pow_raw(b.eval(field, point), *k),
        }
    }
}

/// Value of `expr` at `point`, with base-field constants sent through `embed`.
pub fn eval_poly(expr: &PolyExpr, point: &[FieldElement], embed: &EmbeddingMap) -> FieldElement {
    let working = embed.target();
    let raw: Vec<u64> = point.iter().map(|c| {
        assert_eq!(c.field_order(), working.order(), "coordinate outside the working field");
        c.index()
    }).collect();
    let v = Compiled::new(expr, embed).eval(working, &raw);
    working.element(v).expect("arithmetic stays in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{build_field, embed_subfield, DEFAULT_FIELD_CAP};

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn boxed(e: PolyExpr) -> Box<PolyExpr> {
        Box::new(e)
    }

    #[test]
    fn parses_sum_of_product() {
        let f2 = build_field(2, 1, DEFAULT_FIELD_CAP).unwrap();
        let e = parse_polynomial("x*y + 1", &vars(&["x", "y"]), &f2).unwrap();
        assert_eq!(
            e,
            PolyExpr::Add(
                boxed(PolyExpr::Mul(boxed(PolyExpr::Var(0)), boxed(PolyExpr::Var(1)))),
                boxed(PolyExpr::Const(f2.one()))
            )
        );
    }

    #[test]
    fn parses_generator_power() {
        let f4 = build_field(2, 2, DEFAULT_FIELD_CAP).unwrap();
        let e = parse_polynomial("(x + a)^2", &vars(&["x"]), &f4).unwrap();
        assert_eq!(
            e,
            PolyExpr::Pow(
                boxed(PolyExpr::Add(
                    boxed(PolyExpr::Var(0)),
                    boxed(PolyExpr::Const(f4.generator()))
                )),
                2
            )
        );
    }

    #[test]
    fn rejects_double_star() {
        let f2 = build_field(2, 1, DEFAULT_FIELD_CAP).unwrap();
        let err = parse_polynomial("x**2", &vars(&["x"]), &f2).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                position: 2,
                message: "unexpected `*`".into()
            }
        );
    }

    #[test]
    fn error_cases() {
        let f2 = build_field(2, 1, DEFAULT_FIELD_CAP).unwrap();
        let v = vars(&["x"]);
        assert!(matches!(
            parse_polynomial("x + z", &v, &f2),
            Err(ParseError::UnknownIdentifier { position: 4, .. })
        ));
        assert_eq!(
            parse_polynomial("x + a", &v, &f2),
            Err(ParseError::GeneratorInPrimeField { position: 4 })
        );
        assert_eq!(
            parse_polynomial("x^0", &v, &f2),
            Err(ParseError::BadExponent { position: 2 })
        );
        assert_eq!(
            parse_polynomial("x^-1", &v, &f2),
            Err(ParseError::BadExponent { position: 2 })
        );
        assert!(matches!(parse_polynomial("(x + 1", &v, &f2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_polynomial("", &v, &f2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x 1", &v, &f2), Err(ParseError::Syntax { position: 2, .. })));
    }

    #[test]
    fn evaluates_over_f2() {
        let f2 = build_field(2, 1, DEFAULT_FIELD_CAP).unwrap();
        let embed = embed_subfield(&f2, &f2).unwrap();
        let v = vars(&["x", "y"]);
        let e = parse_polynomial("x*y+1", &v, &f2).unwrap();
        let (zero, one) = (f2.zero(), f2.one());
        assert_eq!(eval_poly(&e, &[one, one], &embed), zero);
        assert_eq!(eval_poly(&e, &[zero, one], &embed), one);
        let c = parse_polynomial("1", &v, &f2).unwrap();
        assert_eq!(eval_poly(&c, &[zero, zero], &embed), one);
    }

    #[test]
    fn integers_reduce_and_subtraction_works() {
        let f5 = build_field(5, 1, DEFAULT_FIELD_CAP).unwrap();
        let embed = embed_subfield(&f5, &f5).unwrap();
        let v = vars(&["x"]);
        let e = parse_polynomial("-x^2 - 12 + 100000000000000000000007", &v, &f5).unwrap();
        let x = f5.element(3).unwrap();
        // -9 - 12 + 7 = -14 = 1 mod 5
        assert_eq!(eval_poly(&e, &[x], &embed), f5.one());
    }

    #[test]
    fn base_constants_are_embedded() {
        let f4 = build_field(2, 2, DEFAULT_FIELD_CAP).unwrap();
        let f16 = build_field(2, 4, DEFAULT_FIELD_CAP).unwrap();
        let embed = embed_subfield(&f4, &f16).unwrap();
        let e = parse_polynomial("a^2 + a + 1", &vars(&["x"]), &f4).unwrap();
        assert_eq!(eval_poly(&e, &[f16.zero()], &embed), f16.zero());
    }
}
