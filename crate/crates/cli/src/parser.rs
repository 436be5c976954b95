//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace-insensitive, no implicit multiplication):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | atom ('^' natural)?
//! atom     := rational | variable | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! `/` exists only inside rational literals; variables are exactly the names
//! of the supplied variable set. Errors carry 1-based line/column and the
//! set of token kinds that would have been accepted.

use std::fmt;

use num_bigint::BigInt;
use qfrob_core::{Polynomial, Rational, VarSet};
use thiserror::Error;

/// Upper bound on literal exponents; large powers are meaningless here and
/// would only stall the exact kernel.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: found {}, expected {}",
            self.line,
            self.col,
            self.found,
            self.expected.join(" | ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                '+' => {
                    self.bump();
                    Tok::Plus
                }
                '-' => {
                    self.bump();
                    Tok::Minus
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '/' => {
                    self.bump();
                    Tok::Slash
                }
                '^' => {
                    self.bump();
                    Tok::Caret
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                c if c.is_ascii_digit() => {
                    let mut s = String::new();
                    while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                        s.push(self.bump().unwrap());
                    }
                    Tok::Int(s)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while matches!(self.chars.peek(), Some(d) if d.is_ascii_alphanumeric() || *d == '_')
                    {
                        s.push(self.bump().unwrap());
                    }
                    Tok::Ident(s)
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        found: format!("`{other}`"),
                        expected: vec!["integer".into(), "variable".into(), "operator".into()],
                    })
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser<'v> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    vars: &'v VarSet,
}

impl<'v> Parser<'v> {
    fn peek(&self) -> &(Tok, usize, usize) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (tok, line, col) = self.peek();
        ParseError {
            line: *line,
            col: *col,
            found: tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().0 == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if self.peek().0 == Tok::Minus {
            self.bump();
            let f = self.factor()?;
            return Ok(-&f);
        }
        let base = self.atom()?;
        if self.peek().0 == Tok::Caret {
            self.bump();
            let (tok, line, col) = self.bump();
            match tok {
                Tok::Int(s) => {
                    let exp: u32 =
                        s.parse()
                            .ok()
                            .filter(|e| *e <= MAX_EXPONENT)
                            .ok_or_else(|| ParseError {
                                line,
                                col,
                                found: format!("integer `{s}`"),
                                expected: vec![format!("exponent at most {MAX_EXPONENT}")],
                            })?;
                    return Ok(base.pow(exp));
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        found: other.describe(),
                        expected: vec!["non-negative integer exponent".into()],
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let (tok, line, col) = self.bump();
        match tok {
            Tok::Int(s) => {
                let num: BigInt = s.parse().expect("digits");
                // a following `/` makes this a rational literal
                if self.peek().0 == Tok::Slash {
                    self.bump();
                    let (dtok, dline, dcol) = self.bump();
                    match dtok {
                        Tok::Int(d) => {
                            let den: BigInt = d.parse().expect("digits");
                            if den == BigInt::from(0) {
                                return Err(ParseError {
                                    line: dline,
                                    col: dcol,
                                    found: "`0`".into(),
                                    expected: vec!["positive denominator".into()],
                                });
                            }
                            Ok(Polynomial::constant(self.vars, Rational::new(num, den)))
                        }
                        other => Err(ParseError {
                            line: dline,
                            col: dcol,
                            found: other.describe(),
                            expected: vec!["positive integer denominator".into()],
                        }),
                    }
                } else {
                    Ok(Polynomial::constant(self.vars, Rational::from_integer(num)))
                }
            }
            Tok::Ident(name) => match self.vars.index_of(&name) {
                Some(idx) => Ok(Polynomial::var(self.vars, idx)),
                None => Err(ParseError {
                    line,
                    col,
                    found: format!("identifier `{name}`"),
                    expected: self.vars.names().iter().map(|n| format!("`{n}`")).collect(),
                }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let (tok, line, col) = self.bump();
                if tok != Tok::RParen {
                    return Err(ParseError {
                        line,
                        col,
                        found: tok.describe(),
                        expected: vec!["`)`".into()],
                    });
                }
                Ok(inner)
            }
            other => Err(ParseError {
                line,
                col,
                found: other.describe(),
                expected: vec![
                    "integer".into(),
                    "variable".into(),
                    "`(`".into(),
                    "`-`".into(),
                ],
            }),
        }
    }
}

/// Parse an expression over the given variables into canonical form.
pub fn parse_expression(text: &str, vars: &VarSet) -> Result<Polynomial, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    let mut parser = Parser { toks, pos: 0, vars };
    let poly = parser.expr()?;
    if parser.peek().0 != Tok::Eof {
        return Err(parser.error(&["`+`", "`-`", "`*`", "`^`", "end of input"]));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfrob_core::{rat, ratio};

    fn vars() -> VarSet {
        VarSet::coords(2)
    }

    #[test]
    fn grammar_examples() {
        let p = parse_expression("u1^2*u2 - 3/2*u2", &vars()).unwrap();
        assert_eq!(p.coeff(&[2, 1]), rat(1));
        assert_eq!(p.coeff(&[0, 1]), ratio(-3, 2));
        assert_eq!(p.num_terms(), 2);

        let q = parse_expression("((u1))", &vars()).unwrap();
        assert_eq!(q, Polynomial::var(&vars(), 0));
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let err = parse_expression("u1 u2", &vars()).unwrap_err();
        assert_eq!((err.line, err.col), (1, 4));
        assert!(err.found.contains("u2"));
    }

    #[test]
    fn unknown_variable_is_rejected_with_alternatives() {
        let err = parse_expression("u3 + 1", &vars()).unwrap_err();
        assert_eq!(err.expected, vec!["`u1`".to_string(), "`u2`".to_string()]);
    }

    #[test]
    fn unary_minus_and_powers() {
        let p = parse_expression("-u1^2 + (-u2)^2", &vars()).unwrap();
        assert_eq!(p.coeff(&[2, 0]), rat(-1));
        assert_eq!(p.coeff(&[0, 2]), rat(1));
    }

    #[test]
    fn rational_literals() {
        let p = parse_expression("2/4 + 1/4", &vars()).unwrap();
        assert_eq!(p, Polynomial::constant(&vars(), ratio(3, 4)));
        assert!(parse_expression("1/0", &vars()).is_err());
        // `/` is not a general operator
        assert!(parse_expression("(1)/2", &vars()).is_err());
        assert!(parse_expression("u1/2", &vars()).is_err());
    }

    #[test]
    fn positions_track_lines() {
        let err = parse_expression("u1 +\n &", &vars()).unwrap_err();
        assert_eq!((err.line, err.col), (2, 2));
    }

    #[test]
    fn oversized_exponents_are_rejected() {
        assert!(parse_expression("u1^4096", &vars()).is_ok());
        assert!(parse_expression("u1^4097", &vars()).is_err());
        assert!(parse_expression("u1^4000000000", &vars()).is_err());
    }

    #[test]
    fn float_literals_are_rejected() {
        assert!(parse_expression("1.5", &vars()).is_err());
    }
}
