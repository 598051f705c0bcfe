//! Integer Laurent polynomials in x1, ..., xn with a canonical text form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    n: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(n: usize) -> Self {
        LaurentPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigInt::one())
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn monomial(exponents: Vec<i64>, c: impl Into<BigInt>) -> Self {
        let n = exponents.len();
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        LaurentPolynomial { n, terms }
    }

    /// The variable x_{i+1}.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[i64]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    /// Adds `c·x^e` in place.
    pub fn add_term(&mut self, exponents: Vec<i64>, c: &BigInt) {
        debug_assert_eq!(exponents.len(), self.n);
        let entry = self.terms.entry(exponents).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        LaurentPolynomial { n: self.n, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// Multiplies by x^shift.
    pub fn shift(&self, shift: &[i64]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPolynomial { n: self.n, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Inverse of a unit, i.e. of ±x^e.
    pub fn inverse(&self) -> Option<Self> {
        let mut it = self.terms.iter();
        let (e, c) = it.next()?;
        if it.next().is_some() || c.abs() != BigInt::one() {
            return None;
        }
        Some(Self::monomial(e.iter().map(|x| -x).collect(), c.clone()))
    }

    /// Parses the canonical form and the usual infix notation.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens, pos: 0, n };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in `{s}`")));
        }
        Ok(out)
    }

    fn check_n(&self, other: &Self) {
        assert_eq!(self.n, other.n, "Laurent polynomials in different numbers of variables");
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        self.check_n(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_insert_with(BigInt::zero) += c;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&-BigInt::one())
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        self + &-other
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        self.check_n(other);
        let mut terms: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let g: Vec<i64> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                *terms.entry(g).or_insert_with(BigInt::zero) += c * d;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        LaurentPolynomial { n: self.n, terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, other: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn write_monomial(f: &mut fmt::Formatter<'_>, exps: &[i64]) -> std::result::Result<bool, fmt::Error> {
    let mut wrote = false;
    for (i, &k) in exps.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if wrote {
            write!(f, "*")?;
        }
        if k == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, k)?;
        }
        wrote = true;
    }
    Ok(wrote)
}

fn write_term(f: &mut fmt::Formatter<'_>, exps: &[i64], c: &BigInt, first: bool) -> fmt::Result {
    let constant = exps.iter().all(|&k| k == 0);
    let mag = c.abs();
    match (c.is_negative(), first) {
        (true, _) => write!(f, "-")?,
        (false, false) => write!(f, "+")?,
        (false, true) => {}
    }
    if constant {
        return write!(f, "{mag}");
    }
    if !mag.is_one() {
        write!(f, "{mag}*")?;
    }
    write_monomial(f, exps).map(|_| ())
}

impl fmt::Display for LaurentPolynomial {
    /// Numerator terms in descending exponent order, followed by the common
    /// monomial denominator written with negative exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().expect("one term");
            return write_term(f, e, c, true);
        }
        let low: Vec<i64> =
            (0..self.n).map(|i| self.terms.keys().map(|e| e[i]).min().unwrap_or(0).min(0)).collect();
        let fraction = low.iter().any(|&k| k < 0);
        if fraction {
            write!(f, "(")?;
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let lifted: Vec<i64> = e.iter().zip(&low).map(|(a, b)| a - b).collect();
            write_term(f, &lifted, c, k == 0)?;
        }
        if fraction {
            write!(f, ")*")?;
            write_monomial(f, &low)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(match c {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    '^' => Token::Caret,
                    '(' => Token::Open,
                    _ => Token::Close,
                });
                i += 1;
            }
            'x' | 'X' => {
                i += 1;
                if i < chars.len() && chars[i] == '_' {
                    i += 1;
                }
                let d = digits(&mut i);
                let k: usize = d.parse().map_err(|_| Error::Parse(format!("variable without index in `{s}`")))?;
                if k == 0 {
                    return Err(Error::Parse("variables are numbered from 1".into()));
                }
                out.push(Token::Var(k - 1));
            }
            c if c.is_ascii_digit() => {
                let d = digits(&mut i);
                out.push(Token::Int(d.parse().expect("digits")));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Token::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Token::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Token::Star) {
                acc = &acc * &self.unary()?;
            } else if self.eat(&Token::Slash) {
                let d = self.unary()?;
                let inv = d.inverse().ok_or_else(|| Error::Parse(format!("cannot divide by `{d}`")))?;
                acc = &acc * &inv;
            } else if matches!(self.peek(), Some(Token::Open | Token::Var(_) | Token::Int(_))) {
                acc = &acc * &self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPolynomial> {
        if self.eat(&Token::Minus) {
            return Ok(-&self.unary()?);
        }
        if self.eat(&Token::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<LaurentPolynomial> {
        let base = self.atom()?;
        if !self.eat(&Token::Caret) {
            return Ok(base);
        }
        let negative = self.eat(&Token::Minus);
        let k = match self.tokens.get(self.pos) {
            Some(Token::Int(k)) => {
                let k = u32::try_from(k).map_err(|_| Error::Parse("exponent too large".into()))?;
                self.pos += 1;
                k
            }
            _ => return Err(Error::Parse("expected an integer exponent".into())),
        };
        if negative {
            let inv = base.inverse().ok_or_else(|| Error::Parse(format!("cannot invert `{base}`")))?;
            Ok(inv.pow(k))
        } else {
            Ok(base.pow(k))
        }
    }

    fn atom(&mut self) -> Result<LaurentPolynomial> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(c)) => {
                self.pos += 1;
                Ok(LaurentPolynomial::constant(self.n, c))
            }
            Some(Token::Var(i)) => {
                self.pos += 1;
                if i >= self.n {
                    return Err(Error::Parse(format!("variable x{} exceeds {} variables", i + 1, self.n)));
                }
                Ok(LaurentPolynomial::variable(self.n, i))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Token::Close) {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, 3).unwrap()
    }

    #[test]
    fn inverse_cancels() {
        assert_eq!(&p("x1") * &p("x1^-1"), p("1"));
        assert_eq!(&p("(x1+x3)/x2") * &p("x2"), p("x1+x3"));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(p("(1+x2)/x1").to_string(), "(x2+1)*x1^-1");
        assert_eq!(p("(x2^2+x2+1)/x3").to_string(), "(x2^2+x2+1)*x3^-1");
        assert_eq!(p("3/x1").to_string(), "3*x1^-1");
        assert_eq!(p("x1 - x1").to_string(), "0");
        assert_eq!(p("-x2*x1 + 2").to_string(), "-x1*x2+2");
        assert_eq!(p("(x1+x3+x2x3)/(x1x2)").to_string(), "(x1+x2*x3+x3)*x1^-1*x2^-1");
        assert_eq!(p("-1").to_string(), "-1");
    }

    #[test]
    fn round_trip() {
        for s in ["(x2+1)*x1^-1", "(x1^2*x2^2+2*x1*x3-x3^2)*x1^-1*x2^-2*x3^-1", "-x3^-2", "7", "x1+x2"] {
            let q = p(s);
            assert_eq!(q.to_string(), s);
            assert_eq!(p(&q.to_string()), q);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LaurentPolynomial::parse("1/(1+x1)", 1).is_err());
        assert!(LaurentPolynomial::parse("x4", 3).is_err());
        assert!(LaurentPolynomial::parse("(x1", 3).is_err());
        assert!(LaurentPolynomial::parse("x1 ? 2", 3).is_err());
    }
}
