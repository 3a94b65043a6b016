//! Exact arithmetic foundation: arbitrary-precision rationals and sparse
//! multivariate polynomials in named symbolic parameters.
//!
//! `ParamPoly` is the universal coefficient type of the engine. A polynomial
//! with no parameters is a plain rational; parameter universes merge by name
//! union, so numeric and symbolic runs share one code path. No floating point
//! appears anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{One, Pow, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rational = num::BigRational;

/// Map from parameter name to its rational value.
pub type Assignment = BTreeMap<String, Rational>;

/// Parse a rational literal such as `-3` or `5/2`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    Rational::from_str(text.trim()).map_err(|e| Error::Parse {
        context: text.to_string(),
        reason: e.to_string(),
    })
}

/// Build an assignment from `name=value` pairs in rational literal syntax.
pub fn parse_assignment(pairs: &[String]) -> Result<Assignment> {
    let mut map = Assignment::new();
    for pair in pairs {
        for item in pair.split(',').filter(|s| !s.trim().is_empty()) {
            let (name, value) = item.split_once('=').ok_or_else(|| Error::Parse {
                context: item.to_string(),
                reason: "expected name=value".to_string(),
            })?;
            map.insert(name.trim().to_string(), parse_rational(value)?);
        }
    }
    Ok(map)
}

/// Sparse multivariate polynomial over the rationals in named parameters.
///
/// Canonical form: parameter names are sorted and every listed parameter
/// occurs in at least one term, exponent vectors have one entry per
/// parameter, and no stored coefficient is zero. Two values are equal iff
/// their canonical term maps are equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    params: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(Rational::from(BigInt::from(value)))
    }

    pub fn from_rational(value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Vec::new(), value);
        }
        ParamPoly {
            params: Vec::new(),
            terms,
        }
    }

    /// The polynomial consisting of a single parameter.
    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rational::one());
        ParamPoly {
            params: vec![name.to_string()],
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parameters occurring in this polynomial, sorted.
    pub fn parameters(&self) -> &[String] {
        &self.params
    }

    /// Returns the value as a plain rational if no parameters occur.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.params.is_empty() {
            Some(
                self.terms
                    .get(&Vec::new())
                    .cloned()
                    .unwrap_or_else(Rational::zero),
            )
        } else {
            None
        }
    }

    /// Drops zero terms and parameters that no longer occur.
    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.params.len())
            .map(|i| self.terms.keys().any(|e| e[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let params: Vec<String> = self
            .params
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(p, _)| p.clone())
            .collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(e, c)| {
                let e: Vec<u32> = e
                    .into_iter()
                    .zip(&used)
                    .filter(|(_, &u)| u)
                    .map(|(x, _)| x)
                    .collect();
                (e, c)
            })
            .collect();
        ParamPoly { params, terms }
    }

    /// Re-expresses `self` over the given parameter universe, which must be a
    /// sorted superset of `self.params`.
    fn embed(&self, params: &[String]) -> BTreeMap<Vec<u32>, Rational> {
        let positions: Vec<usize> = self
            .params
            .iter()
            .map(|p| params.iter().position(|q| q == p).expect("superset"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut exp = vec![0u32; params.len()];
                for (src, &dst) in positions.iter().enumerate() {
                    exp[dst] = e[src];
                }
                (exp, c.clone())
            })
            .collect()
    }

    fn merged_params(&self, other: &Self) -> Vec<String> {
        let mut params = self.params.clone();
        for p in &other.params {
            if !params.contains(p) {
                params.push(p.clone());
            }
        }
        params.sort();
        params
    }

    pub fn add(&self, other: &Self) -> Self {
        let params = self.merged_params(other);
        let mut terms = self.embed(&params);
        for (e, c) in other.embed(&params) {
            let entry = terms.entry(e).or_insert_with(Rational::zero);
            *entry += c;
        }
        ParamPoly { params, terms }.normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ParamPoly {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let params = self.merged_params(other);
        let lhs = self.embed(&params);
        let rhs = other.embed(&params);
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &lhs {
            for (eb, cb) in &rhs {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(exp).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        ParamPoly { params, terms }.normalize()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        ParamPoly {
            params: self.params.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
        .normalize()
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = ParamPoly::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation. Every parameter occurring in `self` must be assigned.
    pub fn eval(&self, assignment: &Assignment) -> Result<Rational> {
        let values: Vec<&Rational> = self
            .params
            .iter()
            .map(|p| {
                assignment
                    .get(p)
                    .ok_or_else(|| Error::MissingParameter(p.clone()))
            })
            .collect::<Result<_>>()?;
        let mut total = Rational::zero();
        for (exp, coef) in &self.terms {
            let mut term = coef.clone();
            for (value, &e) in values.iter().zip(exp) {
                if e > 0 {
                    term *= (*value).clone().pow(BigInt::from(e));
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes the given parameters, keeping the rest symbolic.
    pub fn subst(&self, assignment: &Assignment) -> Self {
        let mut result = ParamPoly::zero();
        for (exp, coef) in &self.terms {
            let mut term = ParamPoly::from_rational(coef.clone());
            for (param, &e) in self.params.iter().zip(exp) {
                if e == 0 {
                    continue;
                }
                match assignment.get(param) {
                    Some(value) => {
                        term = term
                            .scale(&value.clone().pow(BigInt::from(e)));
                    }
                    None => term = term.mul(&ParamPoly::var(param).pow(e)),
                }
            }
            result = result.add(&term);
        }
        result
    }

    /// Substitutes parameters by polynomials; unlisted parameters stay
    /// symbolic.
    pub fn subst_poly(&self, map: &BTreeMap<String, ParamPoly>) -> Self {
        let mut result = ParamPoly::zero();
        for (exp, coef) in &self.terms {
            let mut term = ParamPoly::from_rational(coef.clone());
            for (param, &e) in self.params.iter().zip(exp) {
                if e == 0 {
                    continue;
                }
                let factor = map
                    .get(param)
                    .cloned()
                    .unwrap_or_else(|| ParamPoly::var(param));
                term = term.mul(&factor.pow(e));
            }
            result = result.add(&term);
        }
        result
    }

    /// Terms in graded-lexicographic order (highest degree first), each as
    /// (coefficient, list of (parameter, exponent) with exponent > 0).
    fn ordered_terms(&self) -> Vec<(&Rational, Vec<(&str, u32)>)> {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        keys.into_iter()
            .map(|e| {
                let monomial: Vec<(&str, u32)> = self
                    .params
                    .iter()
                    .zip(e)
                    .filter(|(_, &x)| x > 0)
                    .map(|(p, &x)| (p.as_str(), x))
                    .collect();
                (&self.terms[e], monomial)
            })
            .collect()
    }
}

impl serde::Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ParamPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (coef, monomial)) in self.ordered_terms().into_iter().enumerate() {
            let negative = coef.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coef.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || monomial.is_empty() {
                parts.push(mag.to_string());
            }
            for (name, exp) in monomial {
                if exp == 1 {
                    parts.push(name.to_string());
                } else {
                    parts.push(format!("{name}^{exp}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for ParamPoly {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut parser = PolyParser {
            tokens: &tokens,
            pos: 0,
            text,
        };
        let poly = parser.expr()?;
        parser.expect_end()?;
        Ok(poly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Int(BigInt::from_str(&digits).unwrap()));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        ident.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Ident(ident));
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '/' => {
                chars.next();
                tokens.push(Token::Slash);
            }
            '^' => {
                chars.next();
                tokens.push(Token::Caret);
            }
            '(' => {
                chars.next();
                tokens.push(Token::LParen);
            }
            ')' => {
                chars.next();
                tokens.push(Token::RParen);
            }
            other => {
                return Err(Error::Parse {
                    context: text.to_string(),
                    reason: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(tokens)
}

struct PolyParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    text: &'a str,
}

impl<'a> PolyParser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            context: self.text.to_string(),
            reason: reason.into(),
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    fn expr(&mut self) -> Result<ParamPoly> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                negate = true;
                self.bump();
            }
            Some(Token::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ParamPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Token::Slash) => {
                    self.bump();
                    let f = self.factor()?;
                    let value = f
                        .as_rational()
                        .filter(|v| !v.is_zero())
                        .ok_or_else(|| self.err("division only by a nonzero constant"))?;
                    acc = acc.scale(&value.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ParamPoly> {
        let mut base = self.atom()?;
        while let Some(Token::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Token::Int(e)) => {
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| self.err("exponent out of range"))?;
                    base = base.pow(e);
                }
                _ => return Err(self.err("expected integer exponent after `^`")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamPoly> {
        match self.bump().cloned() {
            Some(Token::Int(n)) => Ok(ParamPoly::from_rational(Rational::from(n))),
            Some(Token::Ident(name)) => Ok(ParamPoly::var(&name)),
            Some(Token::Minus) => Ok(self.atom()?.neg()),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(self.err("expected `)`")),
                }
            }
            other => Err(self.err(format!("unexpected token {other:?}"))),
        }
    }
}
