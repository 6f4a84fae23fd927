//! Polynomial expressions in `t` with named rational parameters.
//!
//! Accepted syntax: integers, identifiers, `+ - * / ^`, parentheses and
//! implicit multiplication (`3t^2`, `2(t+1)`, `a t^7`). Division is only
//! allowed by a nonzero constant, so `1/2*t` and `t^5/3` are fine.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::RatPoly;

/// The variable of every expression.
pub const VARIABLE: &str = "t";

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Number(BigInt),
    Var,
    Param(String),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
}

/// A parsed expression; parameters are bound at evaluation time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyExpr {
    source: String,
    root: Node,
}

impl PolyExpr {
    pub fn parse(source: &str) -> Result<Self> {
        let tokens = tokenize(source)?;
        let mut parser = Parser { tokens, pos: 0, end: source.len() };
        let root = parser.expr()?;
        if let Some((at, tok)) = parser.tokens.get(parser.pos) {
            return Err(parse_error(*at, format!("unexpected {tok:?}")));
        }
        Ok(Self { source: source.trim().to_string(), root })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn parameters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect(&self.root, &mut out);
        out
    }

    pub fn eval(&self, bindings: &BTreeMap<String, BigRational>) -> Result<RatPoly> {
        eval(&self.root, bindings)
    }
}

fn collect(node: &Node, out: &mut BTreeSet<String>) {
    match node {
        Node::Param(name) => {
            out.insert(name.clone());
        }
        Node::Neg(a) | Node::Pow(a, _) => collect(a, out),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            collect(a, out);
            collect(b, out);
        }
        Node::Number(_) | Node::Var => {}
    }
}

fn eval(node: &Node, bindings: &BTreeMap<String, BigRational>) -> Result<RatPoly> {
    Ok(match node {
        Node::Number(n) => RatPoly::constant(BigRational::from_integer(n.clone())),
        Node::Var => RatPoly::x(),
        Node::Param(name) => RatPoly::constant(
            bindings.get(name).cloned().ok_or_else(|| Error::UnboundParameter(name.clone()))?,
        ),
        Node::Neg(a) => -&eval(a, bindings)?,
        Node::Add(a, b) => eval(a, bindings)? + eval(b, bindings)?,
        Node::Sub(a, b) => eval(a, bindings)? - eval(b, bindings)?,
        Node::Mul(a, b) => eval(a, bindings)? * eval(b, bindings)?,
        Node::Div(a, b) => {
            let d = eval(b, bindings)?;
            match d.degree() {
                None => return Err(Error::DivisionByZero),
                Some(0) => eval(a, bindings)?.scale(&(BigRational::from_integer(1.into()) / d.coeff(0))),
                Some(_) => {
                    return Err(Error::InvalidParameter {
                        name: "expression".into(),
                        reason: "division by a non-constant polynomial".into(),
                    })
                }
            }
        }
        Node::Pow(a, k) => eval(a, bindings)?.pow(*k),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Number(BigInt),
    Ident(String),
    Op(char),
}

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
            }
            out.push((i, Token::Number(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
            }
            out.push((i, Token::Ident(s)));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            chars.next();
        } else {
            return Err(parse_error(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(i, _)| *i)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Token::Number(_) | Token::Ident(_) | Token::Op('('))) {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            Ok(Node::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.at();
        match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Token::Number(n)) => {
                self.pos += 1;
                let k = u32::try_from(n).ok().filter(|&k| k <= 64).ok_or_else(|| parse_error(at, "exponent too large"))?;
                Ok(Node::Pow(Box::new(base), k))
            }
            _ => Err(parse_error(at, "expected a non-negative integer exponent")),
        }
    }

    fn primary(&mut self) -> Result<Node> {
        let at = self.at();
        let tok = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        match tok {
            Some(Token::Number(n)) => Ok(Node::Number(n)),
            Some(Token::Ident(name)) if name == VARIABLE => Ok(Node::Var),
            Some(Token::Ident(name)) => Ok(Node::Param(name)),
            Some(Token::Op('(')) => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(parse_error(self.at(), "expected `)`"));
                }
                Ok(inner)
            }
            Some(tok) => Err(parse_error(at, format!("unexpected {tok:?}"))),
            None => Err(parse_error(at, "unexpected end of input")),
        }
    }
}

/// Parses `name=value` with a rational value.
pub fn parse_binding(s: &str) -> Result<(String, BigRational)> {
    let (name, value) = s.split_once('=').ok_or_else(|| parse_error(0, "expected name=value"))?;
    let name = name.trim();
    if name.is_empty() || name == VARIABLE {
        return Err(parse_error(0, format!("invalid parameter name `{name}`")));
    }
    let value = crate::cyclotomic::parse_rational(value)
        .ok_or_else(|| parse_error(name.len() + 1, format!("invalid rational `{}`", value.trim())))?;
    Ok((name.to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(src: &str, binds: &[(&str, BigRational)]) -> Result<RatPoly> {
        let b = binds.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        PolyExpr::parse(src)?.eval(&b)
    }

    #[test]
    fn parses_basic_forms() {
        assert_eq!(poly("t^5 + 1", &[]).unwrap(), RatPoly::from_ints(&[1, 0, 0, 0, 0, 1]));
        assert_eq!(poly("-t^2+3", &[]).unwrap(), RatPoly::from_ints(&[3, 0, -1]));
        assert_eq!(poly("3t^2 - 2(t+1)", &[]).unwrap(), RatPoly::from_ints(&[-2, -2, 3]));
        assert_eq!(poly("1/2*t", &[]).unwrap(), RatPoly::monomial(q(1, 2), 1));
        assert_eq!(poly("t^4/2", &[]).unwrap(), RatPoly::monomial(q(1, 2), 4));
    }

    #[test]
    fn binds_parameters() {
        let e = PolyExpr::parse("β t^10 + t^5 + γ").unwrap();
        assert_eq!(e.parameters().into_iter().collect::<Vec<_>>(), vec!["β", "γ"]);
        let p = poly("a*t^7 + b", &[("a", q(2, 1)), ("b", q(-1, 3))]).unwrap();
        assert_eq!(p.coeff(7), q(2, 1));
        assert_eq!(p.coeff(0), q(-1, 3));
        assert_eq!(poly("a t", &[]), Err(Error::UnboundParameter("a".into())));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(PolyExpr::parse("t^"), Err(Error::Parse { .. })));
        assert!(matches!(PolyExpr::parse("(t+1"), Err(Error::Parse { .. })));
        assert!(matches!(PolyExpr::parse("t $ 2"), Err(Error::Parse { position: 2, .. })));
        assert!(poly("1/t", &[]).is_err());
        assert_eq!(poly("1/(t-t)", &[]), Err(Error::DivisionByZero));
    }

    #[test]
    fn bindings() {
        assert_eq!(parse_binding("alpha=-3/4").unwrap(), ("alpha".into(), q(-3, 4)));
        assert!(parse_binding("t=1").is_err());
        assert!(parse_binding("a=x").is_err());
    }
}
