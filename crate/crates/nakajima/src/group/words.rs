//! Words in named generators, for checking presentations against concrete
//! groups. A word is a juxtaposition of terms; each term is a generator
//! name, a parenthesised word, or either raised to an integer power:
//!
//! ```text
//! a^9        c a c^-1 = a b^-1        (a b)^3        g1 g2^-1 g1
//! ```
//!
//! Generator names are a letter followed by optional digits (`a`, `g1`),
//! so `ab` is the product a·b. An `=` turns the line into the relator
//! lhs·rhs⁻¹. Exponents require the caret: `a^3`, never `a3` (that is a
//! generator name).

use std::collections::HashMap;

use super::{FiniteGroup, GroupError};

/// Parsed word over named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Gen(String),
    Pow(Box<Word>, i64),
    Seq(Vec<Word>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(i64),
    Caret,
    LParen,
    RParen,
    Equals,
}

fn lex(s: &str) -> Result<Vec<Token>, GroupError> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            '=' => {
                chars.next();
                out.push(Token::Equals);
            }
            c if c.is_ascii_alphabetic() => {
                chars.next();
                let mut name = c.to_string();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(name));
            }
            c if c.is_ascii_digit() || c == '-' => {
                chars.next();
                let mut lit = c.to_string();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        lit.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let v: i64 = lit
                    .parse()
                    .map_err(|_| GroupError::WordSyntax(format!("bad integer {:?}", lit)))?;
                out.push(Token::Int(v));
            }
            other => {
                return Err(GroupError::WordSyntax(format!(
                    "unexpected character {:?}",
                    other
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// word := term+ (stops at `)`, `=`, or end)
    fn word(&mut self) -> Result<Word, GroupError> {
        let mut terms = Vec::new();
        while let Some(tok) = self.peek() {
            match tok {
                Token::RParen | Token::Equals => break,
                _ => terms.push(self.term()?),
            }
        }
        match terms.len() {
            0 => Err(GroupError::WordSyntax("empty word".into())),
            1 => Ok(terms.pop().expect("length checked")),
            _ => Ok(Word::Seq(terms)),
        }
    }

    /// term := atom ('^' int)?
    fn term(&mut self) -> Result<Word, GroupError> {
        let atom = match self.next() {
            Some(Token::Ident(name)) => Word::Gen(name.clone()),
            Some(Token::LParen) => {
                let inner = self.word()?;
                match self.next() {
                    Some(Token::RParen) => inner,
                    _ => return Err(GroupError::WordSyntax("unclosed parenthesis".into())),
                }
            }
            other => {
                return Err(GroupError::WordSyntax(format!(
                    "expected a generator or '(', found {:?}",
                    other
                )))
            }
        };
        if self.peek() == Some(&Token::Caret) {
            self.next();
            match self.next() {
                Some(&Token::Int(e)) => Ok(Word::Pow(Box::new(atom), e)),
                other => Err(GroupError::WordSyntax(format!(
                    "expected an integer exponent, found {:?}",
                    other
                ))),
            }
        } else {
            Ok(atom)
        }
    }
}

/// Parse a relator line. `lhs = rhs` becomes lhs·rhs⁻¹; a bare word is
/// itself the relator.
pub fn parse_relator(s: &str) -> Result<Word, GroupError> {
    let toks = lex(s)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let lhs = p.word()?;
    match p.next() {
        None => Ok(lhs),
        Some(Token::Equals) => {
            let rhs = p.word()?;
            if p.peek().is_some() {
                return Err(GroupError::WordSyntax("trailing tokens after relation".into()));
            }
            Ok(Word::Seq(vec![lhs, Word::Pow(Box::new(rhs), -1)]))
        }
        Some(other) => Err(GroupError::WordSyntax(format!(
            "trailing token {:?}",
            other
        ))),
    }
}

/// Evaluate a word in `g` under the given generator assignment.
pub fn eval_word(
    g: &FiniteGroup,
    word: &Word,
    env: &HashMap<String, u32>,
) -> Result<u32, GroupError> {
    match word {
        Word::Gen(name) => env
            .get(name)
            .copied()
            .ok_or_else(|| GroupError::UnknownGenerator(name.clone())),
        Word::Pow(base, e) => {
            let b = eval_word(g, base, env)?;
            Ok(g.pow(b, *e))
        }
        Word::Seq(parts) => {
            let mut acc = g.identity();
            for part in parts {
                acc = g.mul(acc, eval_word(g, part, env)?);
            }
            Ok(acc)
        }
    }
}

/// Outcome of checking a presentation against a concrete group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationReport {
    /// Relators that did not evaluate to the identity.
    pub failed_relators: Vec<String>,
    /// Whether the images generate the whole group.
    pub generates: bool,
}

impl PresentationReport {
    pub fn holds(&self) -> bool {
        self.failed_relators.is_empty() && self.generates
    }
}

/// Check that the named images satisfy every relator and generate `g`.
pub fn presentation_check(
    g: &FiniteGroup,
    relators: &[&str],
    images: &[(&str, u32)],
) -> Result<PresentationReport, GroupError> {
    let mut env = HashMap::new();
    for &(name, img) in images {
        if img as u64 >= g.order() {
            return Err(GroupError::ImageNotInGroup(img as u64));
        }
        env.insert(name.to_string(), img);
    }
    let mut failed = Vec::new();
    for &r in relators {
        let word = parse_relator(r)?;
        if eval_word(g, &word, &env)? != g.identity() {
            failed.push(r.to_string());
        }
    }
    let span = g.span(&images.iter().map(|&(_, i)| i).collect::<Vec<_>>());
    Ok(PresentationReport {
        failed_relators: failed,
        generates: span.len() as u64 == g.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c6() -> FiniteGroup {
        // C6 as residues; p = 2 is irrelevant for word evaluation.
        let gens = vec![("a".to_string(), 1u64)];
        FiniteGroup::closure(2, &gens, 0u64, |a, b| (a + b) % 6, 16)
            .unwrap()
            .group
    }

    #[test]
    fn words_parse_and_evaluate() {
        let g = c6();
        let env: HashMap<String, u32> = [("a".to_string(), 1u32)].into();
        let cases = [
            ("a^6", 0u32),
            ("a^-1", 5),
            ("a a", 2),
            ("(a^2)^2", 4),
            ("a^2 = a a", 0),
        ];
        for (text, want) in cases {
            let w = parse_relator(text).unwrap();
            assert_eq!(eval_word(&g, &w, &env).unwrap(), want, "word {:?}", text);
        }
    }

    #[test]
    fn juxtaposed_names_are_products_and_digits_extend_names() {
        let w = parse_relator("ab").unwrap();
        assert_eq!(
            w,
            Word::Seq(vec![Word::Gen("a".into()), Word::Gen("b".into())])
        );
        let w = parse_relator("g1 g2^-1").unwrap();
        assert_eq!(
            w,
            Word::Seq(vec![
                Word::Gen("g1".into()),
                Word::Pow(Box::new(Word::Gen("g2".into())), -1),
            ])
        );
    }

    #[test]
    fn syntax_errors_are_reported() {
        for bad in ["", "a^", "(a", "a )", "a = b = c", "a^b", "#"] {
            assert!(
                matches!(parse_relator(bad), Err(GroupError::WordSyntax(_))),
                "expected syntax error for {:?}",
                bad
            );
        }
    }

    #[test]
    fn unknown_generators_and_bad_images_error() {
        let g = c6();
        let w = parse_relator("z^2").unwrap();
        let env = HashMap::new();
        assert_eq!(
            eval_word(&g, &w, &env).unwrap_err(),
            GroupError::UnknownGenerator("z".into())
        );
        assert_eq!(
            presentation_check(&g, &["a^6"], &[("a", 99)]).unwrap_err(),
            GroupError::ImageNotInGroup(99)
        );
    }

    #[test]
    fn presentation_check_reports_failures_and_generation() {
        let g = c6();
        // a ↦ 1 satisfies a^6 and generates.
        let ok = presentation_check(&g, &["a^6"], &[("a", 1)]).unwrap();
        assert!(ok.holds());
        // a ↦ 2 satisfies a^6 = 1 but only generates the subgroup {0,2,4}.
        let sub = presentation_check(&g, &["a^6"], &[("a", 2)]).unwrap();
        assert!(!sub.holds());
        assert!(sub.failed_relators.is_empty());
        assert!(!sub.generates);
        // A relator that fails is named.
        let bad = presentation_check(&g, &["a^2"], &[("a", 1)]).unwrap();
        assert_eq!(bad.failed_relators, vec!["a^2".to_string()]);
    }
}
