//! Text format for lattice declarations and class queries.
//!
//! Declarations are line based; `#` starts a comment:
//!
//! ```text
//! basis H E1 E2 E3 E4 R
//! H.H = 5
//! E1.E1 = -1
//! H.R = 1
//! canonical K = H - E1 - E2 - E3 - E4
//! let D = 3K - R
//! ```
//!
//! `canonical = EXPR` sets the canonical class without naming it, for
//! lattices where it is already a basis class. Undeclared pairings are zero. Queries accepted by [`Declarations::eval`]:
//!
//! ```text
//! EXPR               the class, written in the basis
//! EXPR . EXPR        intersection number
//! EXPR ^ 2           self-intersection of the whole expression
//! genus(EXPR)        arithmetic genus by adjunction
//! EXPR == EXPR       coefficientwise equality
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{adjunction_genus, class_equal, pair, DeclaredLattice, DivError, DivisorClass};
use crate::exactnum::Rational;
use crate::text::{tokenize, Token};

/// Declarations for the minimal surface, shipped with the tool.
pub const GODEAUX_LAT: &str = include_str!("../../data/godeaux.lat");

#[derive(Clone, Debug)]
pub struct Declarations {
    pub lattice: DeclaredLattice,
    pub aliases: BTreeMap<String, DivisorClass>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Number(Rational),
    Class(DivisorClass),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(q) => write!(f, "{q}"),
            Value::Class(d) => write!(f, "{d}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

fn perr(line: usize, message: impl Into<String>) -> DivError {
    DivError::Parse {
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_declarations(src: &str) -> Result<Declarations, DivError> {
    let mut names: Option<Vec<String>> = None;
    let mut gram: Vec<Vec<Rational>> = Vec::new();
    // (line, alias name, expression, is canonical)
    let mut defs: Vec<(usize, String, String, bool)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let ln = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match head {
            "basis" => {
                if names.is_some() {
                    return Err(perr(ln, "second `basis` line"));
                }
                let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if list.is_empty() {
                    return Err(perr(ln, "empty basis"));
                }
                gram = vec![vec![Rational::zero(); list.len()]; list.len()];
                names = Some(list);
            }
            "canonical" if rest.trim_start().starts_with('=') => {
                let expr = rest.trim_start()[1..].trim().to_string();
                defs.push((ln, String::new(), expr, true));
            }
            "canonical" | "let" => {
                let (name, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| perr(ln, "expected `NAME = EXPR`"))?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(perr(ln, format!("bad name `{name}`")));
                }
                defs.push((
                    ln,
                    name.to_string(),
                    expr.trim().to_string(),
                    head == "canonical",
                ));
            }
            _ => {
                let names = names
                    .as_ref()
                    .ok_or_else(|| perr(ln, "`basis` must come first"))?;
                let (lhs, value) = line
                    .split_once('=')
                    .ok_or_else(|| perr(ln, "expected `A.B = value`"))?;
                let (a, b) = lhs
                    .split_once('.')
                    .ok_or_else(|| perr(ln, "expected `A.B = value`"))?;
                let idx = |n: &str| {
                    names
                        .iter()
                        .position(|x| x == n.trim())
                        .ok_or_else(|| perr(ln, format!("`{}` is not a basis class", n.trim())))
                };
                let (i, j) = (idx(a)?, idx(b)?);
                let v = parse_number(value.trim())
                    .ok_or_else(|| perr(ln, format!("bad number `{}`", value.trim())))?;
                gram[i][j] = v.clone();
                gram[j][i] = v;
            }
        }
    }
    let names = names.ok_or_else(|| perr(0, "no `basis` line"))?;
    let mut aliases: BTreeMap<String, Vec<Rational>> = BTreeMap::new();
    let mut canonical = None;
    for (ln, name, expr, is_canonical) in &defs {
        if !name.is_empty() && (names.contains(name) || aliases.contains_key(name)) {
            return Err(perr(*ln, format!("`{name}` is already defined")));
        }
        let v = eval_vector(expr, &names, &aliases).map_err(|m| perr(*ln, m))?;
        if *is_canonical {
            if canonical.is_some() {
                return Err(perr(*ln, "second `canonical` line"));
            }
            canonical = Some(v.clone());
        }
        if !name.is_empty() {
            aliases.insert(name.clone(), v);
        }
    }
    let mut lattice = DeclaredLattice::new(names, gram)?;
    if let Some(k) = canonical {
        lattice = lattice.with_canonical(&lattice.class(k)?)?;
    }
    let aliases = aliases
        .into_iter()
        .map(|(n, v)| Ok((n, lattice.class(v)?)))
        .collect::<Result<_, DivError>>()?;
    Ok(Declarations { lattice, aliases })
}

fn parse_number(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b.trim()),
        None => (false, s),
    };
    let q = match body.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Rational::new(n.trim().parse().ok()?, d)
        }
        None => Rational::from_integer(body.parse().ok()?),
    };
    Some(if neg { -q } else { q })
}

struct ExprParser<'a> {
    toks: Vec<Token>,
    pos: usize,
    names: &'a [String],
    aliases: &'a BTreeMap<String, Vec<Rational>>,
}

type Vector = Vec<Rational>;

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Vector, String> {
        let mut acc = vec![Rational::zero(); self.names.len()];
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            for (a, b) in acc.iter_mut().zip(t) {
                if negate {
                    *a -= b;
                } else {
                    *a += b;
                }
            }
            match self.peek() {
                Some(Token::Plus) => negate = false,
                Some(Token::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn coefficient(&mut self) -> Result<Option<Rational>, String> {
        let Some(Token::Num(n)) = self.peek().cloned() else {
            return Ok(None);
        };
        self.pos += 1;
        let mut q = Rational::from_integer(n);
        if let Some(Token::Slash) = self.peek() {
            self.pos += 1;
            match self.bump() {
                Some(Token::Num(d)) if !d.is_zero() => q /= Rational::from_integer(d),
                _ => return Err("expected a nonzero denominator".into()),
            }
        }
        Ok(Some(q))
    }

    fn term(&mut self) -> Result<Vector, String> {
        let coeff = self.coefficient()?;
        if coeff.is_some() {
            if let Some(Token::Star) = self.peek() {
                self.pos += 1;
            }
            if !matches!(self.peek(), Some(Token::Ident(_)) | Some(Token::LParen)) {
                return Err("a bare number is not a class".into());
            }
        }
        let v = self.atom()?;
        let k = coeff.unwrap_or_else(Rational::one);
        Ok(v.into_iter().map(|c| c * &k).collect())
    }

    fn atom(&mut self) -> Result<Vector, String> {
        match self.bump() {
            Some(Token::Ident(name)) => {
                if let Some(i) = self.names.iter().position(|n| *n == name) {
                    let mut v = vec![Rational::zero(); self.names.len()];
                    v[i] = Rational::one();
                    Ok(v)
                } else if let Some(v) = self.aliases.get(&name) {
                    Ok(v.clone())
                } else {
                    Err(format!("unknown class `{name}`"))
                }
            }
            Some(Token::LParen) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(v),
                    _ => Err("expected `)`".into()),
                }
            }
            _ => Err("expected a class name or `(`".into()),
        }
    }
}

fn eval_vector(
    src: &str,
    names: &[String],
    aliases: &BTreeMap<String, Vector>,
) -> Result<Vector, String> {
    let toks = tokenize(src).map_err(|e| e.to_string())?;
    let mut p = ExprParser {
        toks,
        pos: 0,
        names,
        aliases,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("unexpected input at token {}", p.pos + 1));
    }
    Ok(v)
}

impl Declarations {
    pub fn parse(src: &str) -> Result<Self, DivError> {
        parse_declarations(src)
    }

    /// The shipped declarations for the minimal surface.
    pub fn godeaux() -> Self {
        parse_declarations(GODEAUX_LAT).expect("shipped declarations parse")
    }

    fn vector_aliases(&self) -> BTreeMap<String, Vector> {
        self.aliases
            .iter()
            .map(|(k, v)| (k.clone(), v.coeffs().to_vec()))
            .collect()
    }

    pub fn class(&self, expr: &str) -> Result<DivisorClass, DivError> {
        let v = eval_vector(expr, self.lattice.names(), &self.vector_aliases())
            .map_err(|m| perr(0, m))?;
        self.lattice.class(v)
    }

    pub fn eval(&self, query: &str) -> Result<Value, DivError> {
        let q = query.trim();
        if let Some(inner) = q.strip_prefix("genus") {
            let inner = inner.trim();
            if inner.starts_with('(') && inner.ends_with(')') {
                let d = self.class(&inner[1..inner.len() - 1])?;
                return Ok(Value::Number(adjunction_genus(&d)?));
            }
        }
        if let Some((a, b)) = q.split_once("==") {
            return Ok(Value::Bool(class_equal(&self.class(a)?, &self.class(b)?)?));
        }
        if let Some(base) = q.strip_suffix("^2").or_else(|| q.strip_suffix("^ 2")) {
            let d = self.class(base)?;
            return Ok(Value::Number(d.square()));
        }
        if let Some((a, b)) = split_top_level_dot(q) {
            return Ok(Value::Number(pair(&self.class(a)?, &self.class(b)?)?));
        }
        Ok(Value::Class(self.class(q)?))
    }
}

/// Splits at the single `.` outside parentheses, if any.
fn split_top_level_dot(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '.' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;

    fn num(d: &Declarations, q: &str) -> Rational {
        match d.eval(q).unwrap() {
            Value::Number(x) => x,
            other => panic!("{q} gave {other}"),
        }
    }

    #[test]
    fn shipped_lattice_numbers() {
        let d = Declarations::godeaux();
        assert_eq!(num(&d, "(3K-R).(3K-R)"), rat_int(0));
        assert_eq!(num(&d, "K^2"), rat_int(1));
        assert_eq!(num(&d, "genus(3K - R)"), rat_int(2));
        assert_eq!(num(&d, "genus(G)"), rat_int(3));
        assert_eq!(num(&d, "genus(P)"), rat_int(5));
        assert_eq!(num(&d, "P.D"), rat_int(2));
        assert_eq!(num(&d, "1/2 D . G"), rat_int(4));
        assert_eq!(d.eval("D == 3K - R").unwrap(), Value::Bool(true));
        assert_eq!(
            d.eval("3K - R").unwrap().to_string(),
            "3*H - 3*E1 - 3*E2 - 3*E3 - 3*E4 - R"
        );
    }

    #[test]
    fn declaration_errors() {
        assert!(matches!(
            parse_declarations("H.H = 1"),
            Err(DivError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_declarations("basis A\nA.B = 1"),
            Err(DivError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_declarations("basis A\nA.A = x"),
            Err(DivError::Parse { .. })
        ));
        assert!(matches!(
            parse_declarations("basis A\nlet A = A"),
            Err(DivError::Parse { .. })
        ));
        assert!(matches!(
            parse_declarations("# nothing"),
            Err(DivError::Parse { .. })
        ));
        let unnamed = parse_declarations("basis K A\nK.K = 1\ncanonical = K").unwrap();
        assert_eq!(
            unnamed.lattice.canonical().unwrap(),
            unnamed.lattice.basis("K").unwrap()
        );
    }

    #[test]
    fn query_errors() {
        let d = Declarations::godeaux();
        assert!(d.eval("Q").is_err());
        assert!(d.eval("3").is_err());
        assert!(d.eval("(K").is_err());
        let bare = parse_declarations("basis A\nA.A = -2").unwrap();
        assert_eq!(bare.eval("genus(A)"), Err(DivError::MissingCanonical));
    }

    #[test]
    fn rational_coefficients() {
        let d = parse_declarations("basis C1 C2\nC1.C1 = -2\nC2.C2 = -2\nlet L = 1/2 (C1 + C2)")
            .unwrap();
        assert_eq!(num(&d, "L^2"), rat_int(-1));
        assert_eq!(num(&d, "-1/2 C1 . C1"), rat_int(1));
    }
}
