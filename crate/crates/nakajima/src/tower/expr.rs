//! A small expression grammar for defining relations and map images in
//! text form: `+ − * / ^` with integer exponents, parentheses, integer
//! literals, and named atoms (the base variable `x`, tower generators, and
//! scenario constants such as `c`, `a`, `omega`). Multiplication is always
//! explicit — `x*y`, never `xy` — so multi-letter names stay unambiguous.
//!
//! Parsing and evaluation are separate: a parsed [`Expr`] can be inspected
//! for the identifiers it mentions (to enforce triangularity of relation
//! lists) before any arithmetic happens.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{Tower, TowerElem, TowerError};

/// Exponents are capped to keep pathological inputs from materializing
/// astronomically large normal forms; every catalog relation uses ≤ 3.
const MAX_EXPONENT: i64 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error in expression: {0}")]
    Syntax(String),
    #[error("unknown identifier '{0}'")]
    UnknownIdent(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let mut it = src.chars().peekable();
    while let Some(&ch) = it.peek() {
        match ch {
            c if c.is_whitespace() => {
                it.next();
            }
            '+' => {
                it.next();
                out.push(Tok::Plus);
            }
            '-' | '−' => {
                it.next();
                out.push(Tok::Minus);
            }
            '*' => {
                it.next();
                out.push(Tok::Star);
            }
            '/' => {
                it.next();
                out.push(Tok::Slash);
            }
            '^' => {
                it.next();
                out.push(Tok::Caret);
            }
            '(' => {
                it.next();
                out.push(Tok::LParen);
            }
            ')' => {
                it.next();
                out.push(Tok::RParen);
            }
            c if c.is_ascii_digit() => {
                let mut n: i64 = 0;
                while let Some(d) = it.peek().and_then(|c| c.to_digit(10)) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as i64))
                        .ok_or_else(|| ExprError::Syntax("integer literal overflows".into()))?;
                    it.next();
                }
                out.push(Tok::Num(n));
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&c) = it.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(name));
            }
            other => {
                return Err(ExprError::Syntax(format!("unexpected character '{}'", other)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ExprError> {
        match self.bump() {
            Some(got) if got == t => Ok(()),
            Some(got) => Err(ExprError::Syntax(format!("expected {:?}, found {:?}", t, got))),
            None => Err(ExprError::Syntax(format!("expected {:?} at end of input", t))),
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.product()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.product()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        if e.abs() > MAX_EXPONENT {
            return Err(ExprError::Syntax(format!(
                "exponent {} exceeds the supported range ±{}",
                e, MAX_EXPONENT
            )));
        }
        Ok(Expr::Pow(Box::new(base), e))
    }

    /// After `^`: an integer, optionally negated, optionally parenthesized.
    fn exponent(&mut self) -> Result<i64, ExprError> {
        let paren = matches!(self.peek(), Some(Tok::LParen));
        if paren {
            self.bump();
        }
        let neg = matches!(self.peek(), Some(Tok::Minus));
        if neg {
            self.bump();
        }
        let n = match self.bump() {
            Some(Tok::Num(n)) => n,
            other => {
                return Err(ExprError::Syntax(format!(
                    "exponent must be an integer literal, found {:?}",
                    other
                )));
            }
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Int(n)),
            Some(Tok::Ident(name)) => Ok(Expr::Ident(name)),
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(other) => Err(ExprError::Syntax(format!("unexpected token {:?}", other))),
            None => Err(ExprError::Syntax("unexpected end of input".into())),
        }
    }
}

/// Parse an expression string into a tree without evaluating it.
pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ExprError::Syntax("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::Syntax(format!(
            "trailing input after expression: {:?}",
            p.toks[p.pos]
        )));
    }
    Ok(e)
}

/// All identifiers the expression mentions (deduplicated, sorted).
pub fn idents(expr: &Expr) -> BTreeSet<&str> {
    fn walk<'a>(e: &'a Expr, out: &mut BTreeSet<&'a str>) {
        match e {
            Expr::Int(_) => {}
            Expr::Ident(name) => {
                out.insert(name);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => walk(a, out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(expr, &mut out);
    out
}

/// Evaluate the tree in a tower, resolving identifiers through `vars`.
pub fn eval_expr(
    expr: &Expr,
    tower: &Tower,
    vars: &HashMap<String, TowerElem>,
) -> Result<TowerElem, ExprError> {
    match expr {
        Expr::Int(n) => Ok(tower.from_int(*n)),
        Expr::Ident(name) => vars
            .get(name)
            .cloned()
            .ok_or_else(|| ExprError::UnknownIdent(name.clone())),
        Expr::Neg(a) => Ok(eval_expr(a, tower, vars)?.neg()),
        Expr::Add(a, b) => Ok(eval_expr(a, tower, vars)?.add(&eval_expr(b, tower, vars)?)),
        Expr::Sub(a, b) => Ok(eval_expr(a, tower, vars)?.sub(&eval_expr(b, tower, vars)?)),
        Expr::Mul(a, b) => Ok(eval_expr(a, tower, vars)?.mul(&eval_expr(b, tower, vars)?)),
        Expr::Div(a, b) => {
            let num = eval_expr(a, tower, vars)?;
            let den = eval_expr(b, tower, vars)?;
            Ok(num.div(&den)?)
        }
        Expr::Pow(a, e) => {
            let base = eval_expr(a, tower, vars)?;
            if *e >= 0 {
                Ok(base.pow(*e as u64))
            } else {
                Ok(base.inv()?.pow(e.unsigned_abs()))
            }
        }
    }
}

/// Parse and evaluate in one step.
pub fn eval_str(
    src: &str,
    tower: &Tower,
    vars: &HashMap<String, TowerElem>,
) -> Result<TowerElem, ExprError> {
    eval_expr(&parse_expr(src)?, tower, vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn base3() -> (Tower, HashMap<String, TowerElem>) {
        let fq = Fq::new(3, 1).unwrap();
        let tower = Tower::base(&fq);
        let mut vars = HashMap::new();
        vars.insert("x".to_string(), tower.x());
        vars.insert("c".to_string(), tower.one());
        (tower, vars)
    }

    #[test]
    fn arithmetic_and_precedence() {
        let (tower, vars) = base3();
        let x = tower.x();
        let cases = [
            ("2*x + 3*x", x.scale(&tower.fq().from_int(5))),
            ("x^2 - x*x", tower.zero()),
            ("-x^2 + 1", tower.one().sub(&x.mul(&x))),
            ("(x+1)^2", x.mul(&x).add(&x.scale(&tower.fq().from_int(2))).add(&tower.one())),
            ("x/x", tower.one()),
            ("x^-1 * x", tower.one()),
            ("x^(-1) * x", tower.one()),
        ];
        for (src, want) in cases {
            assert_eq!(eval_str(src, &tower, &vars).unwrap(), want, "{}", src);
        }
    }

    #[test]
    fn defining_function_of_the_double_pole_curve() {
        let (tower, vars) = base3();
        let got = eval_str("c/(x^3 - x)", &tower, &vars).unwrap();
        let want = tower
            .one()
            .div(&tower.x().pow(3).sub(&tower.x()))
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn generators_resolve_through_vars() {
        let fq = Fq::new(3, 1).unwrap();
        let base = Tower::base(&fq);
        let phi = base.one().div(&base.x().pow(3).sub(&base.x())).unwrap();
        let tower = base.extend(&phi).unwrap();
        let mut vars = HashMap::new();
        vars.insert("x".to_string(), tower.x());
        vars.insert("y".to_string(), tower.gen(1));
        let got = eval_str("x*y^3 - x^3*y", &tower, &vars).unwrap();
        let x = tower.x();
        let y = tower.gen(1);
        assert_eq!(got, x.mul(&y.pow(3)).sub(&x.pow(3).mul(&y)));
        // y³ reduces through the defining relation: y³ = y + φ.
        let y3 = eval_str("y^3", &tower, &vars).unwrap();
        assert_eq!(y3, y.add(&tower.phi(1)));
    }

    #[test]
    fn identifier_inventory() {
        let e = parse_expr("x*y^3 - c/(x^3 - x) + omega").unwrap();
        let names: Vec<&str> = idents(&e).into_iter().collect();
        assert_eq!(names, vec!["c", "omega", "x", "y"]);
    }

    #[test]
    fn unknown_identifier_is_reported_by_name() {
        let (tower, vars) = base3();
        assert_eq!(
            eval_str("q + 1", &tower, &vars).unwrap_err(),
            ExprError::UnknownIdent("q".to_string())
        );
    }

    #[test]
    fn syntax_errors() {
        for src in ["", "x +", "(x", "x)", "x ^ y", "x^65", "x # y", "2x"] {
            assert!(
                matches!(parse_expr(src), Err(ExprError::Syntax(_))),
                "expected syntax error for {:?}",
                src
            );
        }
    }

    #[test]
    fn division_by_zero_surfaces_the_tower_error() {
        let (tower, vars) = base3();
        assert!(matches!(
            eval_str("1/(x - x)", &tower, &vars),
            Err(ExprError::Tower(TowerError::NotInvertible))
        ));
    }

    #[test]
    fn unicode_minus_is_accepted() {
        let (tower, vars) = base3();
        let got = eval_str("x − x", &tower, &vars).unwrap();
        assert!(got.is_zero());
    }
}
