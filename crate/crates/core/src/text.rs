//! Tokenizer and expression parser for field elements and polynomials.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'|'/'] factor)*        juxtaposition multiplies
//! factor := atom ['^' integer] | '-' factor
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! The name `u` denotes the generator of `K` unless it is declared as a
//! polynomial variable. Division is only allowed by nonzero constants.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::exactnum::{ExactError, Nf, Rational};
use crate::mpoly::MPoly;

#[derive(Clone, Debug, PartialEq)]
pub enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
    Comma,
    Eq,
}

pub fn tokenize(s: &str) -> Result<Vec<Token>, ExactError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Num(digits.parse().expect("ascii digits")));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
            continue;
        }
        let tok = match c {
            '+' => Token::Plus,
            '-' | '\u{2212}' => Token::Minus,
            '*' | '\u{b7}' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' | '[' => Token::LParen,
            ')' | ']' => Token::RParen,
            '.' => Token::Dot,
            ',' => Token::Comma,
            '=' => Token::Eq,
            other => return Err(ExactError::Parse(format!("unexpected character `{other}`"))),
        };
        out.push(tok);
        i += 1;
    }
    Ok(out)
}

struct PolyParser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> PolyParser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T, ExactError> {
        Err(ExactError::Parse(format!("{msg} at token {}", self.pos)))
    }

    fn expr(&mut self) -> Result<MPoly<Nf>, ExactError> {
        let mut acc = MPoly::zero(self.vars);
        let mut sign_neg = match self.peek() {
            Some(Token::Plus) => {
                self.pos += 1;
                false
            }
            Some(Token::Minus) => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if sign_neg { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Token::Plus) => sign_neg = false,
                Some(Token::Minus) => sign_neg = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::LParen)
        )
    }

    fn term(&mut self) -> Result<MPoly<Nf>, ExactError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    let c = constant_value(&f)
                        .ok_or_else(|| ExactError::Parse("division by a non-constant".into()))?;
                    acc = acc.scale(&c.inv()?);
                }
                _ if self.starts_factor() => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly<Nf>, ExactError> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.next() {
                Some(Token::Num(n)) => n
                    .to_u32()
                    .ok_or_else(|| ExactError::Parse("exponent too large".into()))?,
                _ => return self.err("expected integer exponent"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly<Nf>, ExactError> {
        match self.next() {
            Some(Token::Num(n)) => Ok(MPoly::constant(
                self.vars,
                Nf::from_rational(Rational::from_integer(n)),
            )),
            Some(Token::Ident(name)) => {
                if self.vars.contains(&name.as_str()) {
                    Ok(MPoly::var(self.vars, &name).expect("declared variable"))
                } else if name == "u" {
                    Ok(MPoly::constant(self.vars, Nf::u()))
                } else {
                    Err(ExactError::Parse(format!("unknown name `{name}`")))
                }
            }
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => self.err("expected `)`"),
                }
            }
            _ => self.err("expected a number, name or `(`"),
        }
    }
}

fn constant_value(p: &MPoly<Nf>) -> Option<Nf> {
    if p.is_zero() {
        return Some(Nf::zero());
    }
    match p.total_degree() {
        Some(0) => Some(p.coefficient(&vec![0; p.nvars()])),
        _ => None,
    }
}

/// Parses a polynomial in the given variables with coefficients in `K`.
pub fn parse_poly(s: &str, vars: &[&str]) -> Result<MPoly<Nf>, ExactError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(ExactError::Parse("empty expression".into()));
    }
    let mut p = PolyParser { toks, pos: 0, vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a polynomial, choosing the variable list from the names used:
/// `X,Y,Z,T` or `x,y,z` when the names fit, otherwise first-appearance order.
pub fn parse_poly_auto(s: &str) -> Result<MPoly<Nf>, ExactError> {
    let mut names: Vec<String> = Vec::new();
    for t in tokenize(s)? {
        if let Token::Ident(n) = t {
            if n != "u" && !names.contains(&n) {
                names.push(n);
            }
        }
    }
    let fits = |set: &[&str]| names.iter().all(|n| set.contains(&n.as_str()));
    let vars: Vec<String> = if fits(&["X", "Y", "Z", "T"]) {
        ["X", "Y", "Z", "T"].iter().map(|s| s.to_string()).collect()
    } else if fits(&["x", "y", "z"]) {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    } else {
        names
    };
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    parse_poly(s, &refs)
}

pub fn parse_field_element(s: &str) -> Result<Nf, ExactError> {
    let p = parse_poly(s, &[])?;
    constant_value(&p).ok_or_else(|| ExactError::Parse("not a constant".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_field_elements() {
        let x: Nf = "1/7 + 5/7*u + 3/7*u^2".parse().unwrap();
        assert_eq!(x.coeffs()[1], Rational::new(5.into(), 7.into()));
        assert_eq!(parse_field_element("u^3 + u^2 - 1").unwrap(), Nf::zero());
        assert_eq!(parse_field_element("1/u").unwrap(), Nf::from_ints(0, 1, 1));
        assert!(parse_field_element("X").is_err());
        assert_eq!(
            parse_field_element("1/(u - u)"),
            Err(ExactError::DivisionByZero)
        );
    }

    #[test]
    fn juxtaposition_and_powers() {
        let vars = ["x", "y", "z"];
        let a = parse_poly("2x^2 y - -z", &vars).unwrap();
        let b = parse_poly("2*x^2*y + z", &vars).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn auto_variable_detection() {
        assert_eq!(
            parse_poly_auto("X*T").unwrap().vars(),
            vec!["X", "Y", "Z", "T"]
        );
        assert_eq!(
            parse_poly_auto("z^2 + x^3 + y^6").unwrap().vars(),
            vec!["x", "y", "z"]
        );
        assert_eq!(parse_poly_auto("a + b").unwrap().vars(), vec!["a", "b"]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_poly("X +", &["X"]).is_err());
        assert!(parse_poly("X / X", &["X"]).is_err());
        assert!(parse_poly("(X", &["X"]).is_err());
        assert!(parse_poly("X $", &["X"]).is_err());
    }
}
