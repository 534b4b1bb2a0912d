//! Recursive-descent parser for polynomial input.
//!
//! ```text
//! expr   := sign? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := rational | var | '(' expr ')'
//! ```
//! Variables are h1..h<arity>. Products must be written with '*'.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Var(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(q) => format!("number {q}"),
        Tok::Var(v) => format!("'{v}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        let syntax = |message: String| Error::Syntax { line: l0, column: c0, message };
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            col += 1;
            k += 1;
            continue;
        }
        let start = k;
        if c.is_ascii_digit() {
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let num: String = chars[start..k].iter().collect();
            let mut value = Rational::from_integer(num.parse::<BigInt>().map_err(|e| syntax(e.to_string()))?);
            if k < chars.len() && chars[k] == '/' {
                let d0 = k + 1;
                k = d0;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                if k == d0 {
                    return Err(Error::Syntax { line, column: col + (d0 - start), message: "expected a denominator".into() });
                }
                let den: BigInt = chars[d0..k].iter().collect::<String>().parse().map_err(|e: num_bigint::ParseBigIntError| syntax(e.to_string()))?;
                if den == BigInt::from(0) {
                    return Err(syntax("zero denominator".into()));
                }
                value /= Rational::from_integer(den);
            }
            out.push(Spanned { tok: Tok::Num(value), line: l0, column: c0 });
        } else if c.is_ascii_alphabetic() || c == '_' {
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Spanned { tok: Tok::Var(chars[start..k].iter().collect()), line: l0, column: c0 });
        } else {
            return Err(syntax(format!("unexpected character '{c}'")));
        }
        col += k - start;
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    arity: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Spanned, message: String) -> Error {
        Error::Syntax { line: at.line, column: at.column, message }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek().tok {
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match &t.tok {
            Tok::Num(q) if q.is_integer() => {
                let e: u32 = q.to_integer().try_into().map_err(|_| self.error(&t, "exponent too large".into()))?;
                Ok(base.pow(e))
            }
            other => Err(self.error(&t, format!("expected a natural exponent, found {}", describe(other)))),
        }
    }

    fn base(&mut self) -> Result<Polynomial> {
        let t = self.bump();
        match &t.tok {
            Tok::Num(q) => Ok(Polynomial::constant(self.arity, q.clone())),
            Tok::Var(name) => {
                let index = name
                    .strip_prefix('h')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= self.arity && !name[1..].starts_with('0'));
                match index {
                    Some(i) => Ok(Polynomial::var(self.arity, i - 1)),
                    None => Err(Error::UnknownVariable { name: name.clone(), line: t.line, column: t.column }),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(self.error(&close, format!("expected ')', found {}", describe(&close.tok))));
                }
                Ok(inner)
            }
            other => Err(self.error(&t, format!("expected a number, variable or '(', found {}", describe(other)))),
        }
    }
}

/// Parses a polynomial in h1..h<arity>.
pub fn parse_poly(src: &str, arity: usize) -> Result<Polynomial> {
    let mut p = Parser { toks: lex(src)?, pos: 0, arity };
    let out = p.expr()?;
    let end = p.peek().clone();
    if end.tok != Tok::End {
        let hint = match end.tok {
            Tok::Var(_) | Tok::Num(_) | Tok::LParen => " (products need '*')",
            _ => "",
        };
        return Err(p.error(&end, format!("unexpected {}{hint}", describe(&end.tok))));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    #[test]
    fn basics() {
        let p = parse_poly("h1^3 + h2^3", 2).unwrap();
        assert_eq!(p, &Polynomial::var(2, 0).pow(3) + &Polynomial::var(2, 1).pow(3));
        assert!(parse_poly("(h1+h2)^2 - h1^2 - 2*h1*h2 - h2^2", 2).unwrap().is_zero());
        assert_eq!(parse_poly("-1/3*h1", 1).unwrap(), Polynomial::var(1, 0).scale(&ratio(-1, 3)));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_poly("h1 h2", 2), Err(Error::Syntax { line: 1, column: 4, .. })));
        assert!(matches!(parse_poly("h3", 2), Err(Error::UnknownVariable { column: 1, .. })));
        assert!(matches!(parse_poly("h1 +\n  x", 2), Err(Error::UnknownVariable { line: 2, column: 3, .. })));
        assert!(matches!(parse_poly("(h1", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("h1^h2", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", 2), Err(Error::Syntax { .. })));
    }
}
