//! Infix parser for the closed-form expression language used on the CLI.
//!
//! Grammar: literals `a`, `bj`, `a+bj`; the variable `z`; operators
//! `+ - * / ^` with integer exponents; `exp(...)`. Operations on two
//! literal constants fold into a single constant at parse time, which makes
//! the printed form of any constant re-parse to the identical node and
//! gives the bit-exact parse -> print -> parse round trip.

use super::expr::{HoloExpr, Node};
use crate::cnum::{CEps, Eps};
use crate::error::Error;
use crate::Result;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    NumJ(f64),
    J,
    Z,
    Exp,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse { line: 1, msg: msg.into() }
}

/// Normalize -0.0 to +0.0 so folded constants print and re-parse to the same
/// bits. Adding +0.0 leaves every other value untouched.
fn canon(c: CEps) -> CEps {
    CEps::new(c.re + 0.0, c.im + 0.0, c.eps)
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    if d.is_ascii_digit() || d == '.' {
                        i += 1;
                    } else if (d == 'e' || d == 'E')
                        && i + 1 < bytes.len()
                        && {
                            let n = bytes[i + 1] as char;
                            n.is_ascii_digit() || n == '+' || n == '-'
                        }
                    {
                        i += 2;
                    } else {
                        break;
                    }
                }
                let text = &input[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| err(format!("bad number literal `{text}` at byte {start}")))?;
                if i < bytes.len() && bytes[i] as char == 'j' {
                    i += 1;
                    toks.push((start, Tok::NumJ(v)));
                } else {
                    toks.push((start, Tok::Num(v)));
                }
            }
            'j' => {
                toks.push((i, Tok::J));
                i += 1;
            }
            'z' => {
                toks.push((i, Tok::Z));
                i += 1;
            }
            'e' if input[i..].starts_with("exp") => {
                toks.push((i, Tok::Exp));
                i += 3;
            }
            other => return Err(err(format!("unexpected character `{other}` at byte {i}"))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    eps: Eps,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Arc<Node>> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek() {
            let op = match op {
                Tok::Plus => Node::Add as fn(Arc<Node>, Arc<Node>) -> Node,
                Tok::Minus => Node::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = self.fold(op, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Arc<Node>> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek() {
            let op = match op {
                Tok::Star => Node::Mul as fn(Arc<Node>, Arc<Node>) -> Node,
                Tok::Slash => Node::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = self.fold(op, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Arc<Node>> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(match inner.as_ref() {
                Node::Const(c) => Arc::new(Node::Const(canon(-*c))),
                _ => Arc::new(Node::Sub(Arc::new(Node::Const(CEps::zero(self.eps))), inner)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Arc<Node>> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                self.pos += 1;
                true
            } else {
                false
            };
            let n = match self.next() {
                Some(Tok::Num(v)) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => v as i32,
                other => return Err(err(format!("exponent must be an integer, got {other:?}"))),
            };
            let n = if neg { -n } else { n };
            return Ok(match base.as_ref() {
                Node::Const(c) => match c.powi(n) {
                    Ok(v) if v.is_finite() => Arc::new(Node::Const(canon(v))),
                    _ => Arc::new(Node::IntPow(base, n)),
                },
                _ => Arc::new(Node::IntPow(base, n)),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Arc<Node>> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Arc::new(Node::Const(CEps::real(v, self.eps)))),
            Some(Tok::NumJ(v)) => Ok(Arc::new(Node::Const(CEps::new(0.0, v, self.eps)))),
            Some(Tok::J) => Ok(Arc::new(Node::Const(CEps::j(self.eps)))),
            Some(Tok::Z) => Ok(Arc::new(Node::Var)),
            Some(Tok::Exp) => {
                if !matches!(self.next(), Some(Tok::LParen)) {
                    return Err(err("expected `(` after exp"));
                }
                let inner = self.expr()?;
                if !matches!(self.next(), Some(Tok::RParen)) {
                    return Err(err("unclosed exp("));
                }
                Ok(match inner.as_ref() {
                    Node::Const(c) if c.exp().is_finite() => Arc::new(Node::Const(canon(c.exp()))),
                    _ => Arc::new(Node::Exp(inner)),
                })
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if !matches!(self.next(), Some(Tok::RParen)) {
                    return Err(err("unclosed parenthesis"));
                }
                Ok(inner)
            }
            other => Err(err(format!("expected an operand, got {other:?}"))),
        }
    }

    fn fold(&self, op: fn(Arc<Node>, Arc<Node>) -> Node, a: Arc<Node>, b: Arc<Node>) -> Result<Arc<Node>> {
        if let (Node::Const(x), Node::Const(y)) = (a.as_ref(), b.as_ref()) {
            let node = op(a.clone(), b.clone());
            let v = match node {
                Node::Add(..) => Some(*x + *y),
                Node::Sub(..) => Some(*x - *y),
                Node::Mul(..) => Some(*x * *y),
                // only fold divisions that are actually defined
                Node::Div(..) => x.try_div(*y).ok(),
                _ => None,
            };
            if let Some(v) = v.filter(|v| v.is_finite()) {
                return Ok(Arc::new(Node::Const(canon(v))));
            }
        }
        Ok(Arc::new(op(a, b)))
    }
}

/// Parse an expression in the CLI grammar over the given algebra.
pub fn parse_expr(input: &str, eps: Eps) -> Result<HoloExpr> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(err("empty expression"));
    }
    let mut p = Parser { toks: &toks, pos: 0, eps };
    let root = p.expr()?;
    if p.pos != toks.len() {
        let (byte, tok) = &toks[p.pos];
        return Err(err(format!("trailing input at byte {byte}: {tok:?}")));
    }
    // Wrap through the public constructors to keep the eps tag consistent.
    Ok(rebuild(root, eps))
}

fn rebuild(root: Arc<Node>, eps: Eps) -> HoloExpr {
    fn go(node: &Node, eps: Eps) -> HoloExpr {
        match node {
            Node::Var => HoloExpr::var(eps),
            Node::Const(c) => HoloExpr::constant(*c),
            Node::Add(a, b) => go(a, eps).add(go(b, eps)).expect("same eps"),
            Node::Sub(a, b) => go(a, eps).sub(go(b, eps)).expect("same eps"),
            Node::Mul(a, b) => go(a, eps).mul(go(b, eps)).expect("same eps"),
            Node::Div(a, b) => go(a, eps).div(go(b, eps)).expect("same eps"),
            Node::IntPow(a, n) => go(a, eps).pow(*n),
            Node::Exp(a) => go(a, eps).exp(),
        }
    }
    go(&root, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roundtrip(src: &str) {
        let e1 = parse_expr(src, Eps::Elliptic).unwrap();
        let printed = e1.to_string();
        let e2 = parse_expr(&printed, Eps::Elliptic).unwrap();
        assert!(
            e1.structurally_eq(&e2),
            "round trip broke: `{src}` -> `{printed}` -> `{e2}`"
        );
    }

    #[test]
    fn parses_and_evaluates() {
        let f = parse_expr("z^2 + 2*z + 1", Eps::Elliptic).unwrap();
        let v = f.eval(CEps::real(2.0, Eps::Elliptic)).unwrap();
        assert_eq!(v.re, 9.0);
    }

    #[test]
    fn literal_forms() {
        for (src, re, im) in [
            ("1.5", 1.5, 0.0),
            ("2j", 0.0, 2.0),
            ("j", 0.0, 1.0),
            ("1+2j", 1.0, 2.0),
            ("-3j", 0.0, -3.0),
            ("(-1+2j)", -1.0, 2.0),
            ("1e-3", 1e-3, 0.0),
        ] {
            let f = parse_expr(src, Eps::Elliptic).unwrap();
            let v = f.eval(CEps::zero(Eps::Elliptic)).unwrap();
            assert_eq!((v.re, v.im), (re, im), "literal `{src}`");
        }
    }

    #[test]
    fn rejects_malformed_input() {
        for src in ["", "z +", "exp(z", "z^1.5", "q", "1..2"] {
            assert!(parse_expr(src, Eps::Elliptic).is_err(), "`{src}` should fail");
        }
    }

    #[test]
    fn print_parse_roundtrip_on_fixed_corpus() {
        for src in [
            "z",
            "j/z",
            "z + z^2",
            "2*z + 1/z",
            "(1+2j)*z - 3j",
            "exp(0.5*z)/(1+exp(z))",
            "-z^3",
            "1/(1+1j*exp((0.3333333333333333)*z))",
            "z^-2",
        ] {
            roundtrip(src);
        }
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            Just("z".to_string()),
            (-5.0..5.0f64).prop_map(|v| format!("{v}")),
            (-5.0..5.0f64).prop_map(|v| format!("{v}j")),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})+({b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})-({b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/({b})")),
                (inner.clone(), 0u32..4).prop_map(|(a, n)| format!("({a})^{n}")),
                inner.prop_map(|a| format!("exp({a})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip_random(src in arb_expr()) {
            if let Ok(e1) = parse_expr(&src, Eps::Elliptic) {
                let printed = e1.to_string();
                let e2 = parse_expr(&printed, Eps::Elliptic).unwrap();
                prop_assert!(e1.structurally_eq(&e2), "`{}` -> `{}`", src, printed);
            }
        }
    }
}
