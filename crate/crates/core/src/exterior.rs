//! Exterior-algebra combinatorics shared by the multivector and form sides:
//! multi-indices, wedge products with permutation signs, ordered basis
//! enumeration, the natural pairing Λᵖ𝔪* × Λᵖ𝔪 → scalars, and contraction
//! against the top form.
//!
//! Basis ordering everywhere is lexicographic on sorted multi-indices, the
//! ordering behind every matrix the engine prints.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::scalars::{tokenize, Assignment, ParamPoly, Token};
use crate::{Error, Result};

/// Strictly increasing list of 1-based basis indices. The empty list denotes
/// the scalar (degree-0) slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Builds a multi-index from strictly increasing indices.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse {
                context: format!("{indices:?}"),
                reason: "multi-index must be strictly increasing".to_string(),
            });
        }
        Ok(MultiIndex(indices))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(vec![i])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Indices of 1..=n not contained in `self`.
    pub fn complement(&self, n: usize) -> MultiIndex {
        MultiIndex((1..=n).filter(|i| !self.0.contains(i)).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Merges index lists into one sorted multi-index, tracking the permutation
/// sign. Returns `None` when an index repeats.
pub fn merge_indices(parts: &[&[usize]]) -> Option<(i8, MultiIndex)> {
    let mut seq: Vec<usize> = Vec::new();
    for part in parts {
        seq.extend_from_slice(part);
    }
    let mut sign = 1i8;
    // insertion sort, counting transpositions
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j - 1] > seq[j] {
            seq.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if seq.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, MultiIndex(seq)))
}

/// Which superalgebra an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Multivectors Λ•𝔪, generators y1..yn.
    Tangent,
    /// Forms Λ•𝔪*, generators z1..zn.
    Cotangent,
}

impl Space {
    pub fn generator_letter(self) -> char {
        match self {
            Space::Tangent => 'y',
            Space::Cotangent => 'z',
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Tangent => write!(f, "tangent"),
            Space::Cotangent => write!(f, "cotangent"),
        }
    }
}

/// All C(n,k) strictly increasing k-subsets of 1..=n in lexicographic order.
/// Empty when k > n.
pub fn basis_enum(n: usize, k: usize) -> Vec<MultiIndex> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![MultiIndex::empty()];
    }
    (1..=n).combinations(k).map(MultiIndex).collect()
}

/// A (possibly inhomogeneous) element of Λ•𝔪 or Λ•𝔪*, stored as a sparse map
/// from multi-index to coefficient. No zero coefficients are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    space: Space,
    dim: usize,
    terms: BTreeMap<MultiIndex, ParamPoly>,
}

impl ExteriorElement {
    pub fn zero(space: Space, dim: usize) -> Self {
        ExteriorElement {
            space,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The constant 1, a degree-0 element.
    pub fn scalar_one(space: Space, dim: usize) -> Self {
        Self::zero(space, dim).with_term(MultiIndex::empty(), ParamPoly::one())
    }

    /// The i-th generator (1-based).
    pub fn generator(space: Space, dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        Ok(Self::zero(space, dim).with_term(MultiIndex::single(i), ParamPoly::one()))
    }

    /// Basis monomial for the given multi-index.
    pub fn monomial(space: Space, dim: usize, idx: MultiIndex) -> Result<Self> {
        if let Some(&max) = idx.indices().last() {
            if max > dim {
                return Err(Error::IndexOutOfRange { index: max, dim });
            }
        }
        Ok(Self::zero(space, dim).with_term(idx, ParamPoly::one()))
    }

    fn with_term(mut self, idx: MultiIndex, coef: ParamPoly) -> Self {
        self.add_term(idx, coef);
        self
    }

    pub(crate) fn add_term(&mut self, idx: MultiIndex, coef: ParamPoly) {
        if coef.is_zero() {
            return;
        }
        let updated = match self.terms.get(&idx) {
            Some(existing) => existing.add(&coef),
            None => coef,
        };
        if updated.is_zero() {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, updated);
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> ParamPoly {
        self.terms.get(idx).cloned().unwrap_or_else(ParamPoly::zero)
    }

    /// Exterior degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        self.terms
            .keys()
            .map(|i| i.degree())
            .dedup()
            .collect()
    }

    /// The degree when homogeneous (zero elements count as homogeneous of any
    /// degree and return `None`).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let degrees = self.degrees();
        match degrees.as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ExteriorElement {
            space: self.space,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &ParamPoly) -> Self {
        let mut out = Self::zero(self.space, self.dim);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.mul(factor));
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                expected: self.space.to_string(),
                got: other.space.to_string(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DegreeMismatch(format!(
                "ambient dimensions differ: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Wedge product. Bilinear; zero on colliding indices, otherwise the sign
    /// of the sorting permutation times the merged multi-index.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.space, self.dim);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((sign, idx)) = merge_indices(&[ia.indices(), ib.indices()]) {
                    let mut c = ca.mul(cb);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.add_term(idx, c);
                }
            }
        }
        Ok(out)
    }

    /// Substitutes parameters in every coefficient.
    pub fn subst(&self, assignment: &Assignment) -> Self {
        let mut out = Self::zero(self.space, self.dim);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.subst(assignment));
        }
        out
    }

    /// The homogeneous component of the given exterior degree.
    pub fn component(&self, degree: usize) -> Self {
        ExteriorElement {
            space: self.space,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.degree() == degree)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Natural pairing ⟨ω, u⟩ of a form against a multivector, normalized by
/// ⟨z_I, y_I⟩ = 1. Inhomogeneous inputs pair degree by degree.
pub fn pairing(omega: &ExteriorElement, u: &ExteriorElement) -> ParamPoly {
    debug_assert_eq!(omega.space(), Space::Cotangent);
    debug_assert_eq!(u.space(), Space::Tangent);
    let mut total = ParamPoly::zero();
    for (idx, c) in &omega.terms {
        if let Some(d) = u.terms.get(idx) {
            total = total.add(&c.mul(d));
        }
    }
    total
}

/// Contraction against the standard volume form: a degree-m multivector maps
/// to an (n−m)-form, y_I ↦ ε(I, Iᶜ) z_{Iᶜ} with ε the sign of the permutation
/// (I, Iᶜ) of (1..n), extended linearly.
pub fn contract_volume(u: &ExteriorElement) -> Result<ExteriorElement> {
    if u.space() != Space::Tangent {
        return Err(Error::SpaceMismatch {
            expected: Space::Tangent.to_string(),
            got: u.space().to_string(),
        });
    }
    let n = u.dim();
    let mut out = ExteriorElement::zero(Space::Cotangent, n);
    for (idx, c) in &u.terms {
        if idx.indices().iter().any(|&i| i > n) {
            return Err(Error::DegreeMismatch(format!(
                "index exceeds ambient dimension {n}"
            )));
        }
        let comp = idx.complement(n);
        let (sign, _) = merge_indices(&[idx.indices(), comp.indices()])
            .expect("complement is disjoint");
        let coef = if sign < 0 { c.neg() } else { c.clone() };
        out.add_term(comp, coef);
    }
    Ok(out)
}

/// Inverse of [`contract_volume`]: z_J ↦ ε(Jᶜ, J) y_{Jᶜ}.
pub fn expand_volume(omega: &ExteriorElement) -> Result<ExteriorElement> {
    if omega.space() != Space::Cotangent {
        return Err(Error::SpaceMismatch {
            expected: Space::Cotangent.to_string(),
            got: omega.space().to_string(),
        });
    }
    let n = omega.dim();
    let mut out = ExteriorElement::zero(Space::Tangent, n);
    for (idx, c) in &omega.terms {
        let comp = idx.complement(n);
        let (sign, _) = merge_indices(&[comp.indices(), idx.indices()])
            .expect("complement is disjoint");
        let coef = if sign < 0 { c.neg() } else { c.clone() };
        out.add_term(comp, coef);
    }
    Ok(out)
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let letter = self.space.generator_letter();
        let mut first = true;
        for (idx, coef) in &self.terms {
            let rendered = render_term(coef, idx, letter);
            if first {
                write!(f, "{rendered}")?;
                first = false;
            } else if let Some(rest) = rendered.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {rendered}")?;
            }
        }
        Ok(())
    }
}

fn render_term(coef: &ParamPoly, idx: &MultiIndex, letter: char) -> String {
    let monomial = idx
        .indices()
        .iter()
        .map(|i| format!("{letter}{i}"))
        .join("^");
    let coef_str = coef.to_string();
    let is_sum = coef_str.contains(" + ") || coef_str.contains(" - ");
    if monomial.is_empty() {
        return if is_sum {
            format!("({coef_str})")
        } else {
            coef_str
        };
    }
    if is_sum {
        format!("({coef_str})*{monomial}")
    } else if coef_str == "1" {
        monomial
    } else if coef_str == "-1" {
        format!("-{monomial}")
    } else {
        format!("{coef_str}*{monomial}")
    }
}

/// Parses the element literal syntax, e.g. `c1*y1^y2 + c4*y2^y3` or `z1^z3`.
/// `^` is the wedge between generators and the power on scalar factors.
pub fn parse_element(text: &str, space: Space, dim: usize) -> Result<ExteriorElement> {
    let tokens = tokenize(text)?;
    let mut parser = ElementParser {
        tokens: &tokens,
        pos: 0,
        text,
        space,
        dim,
    };
    let element = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse {
            context: text.to_string(),
            reason: "trailing input".to_string(),
        });
    }
    Ok(element)
}

struct ElementParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    text: &'a str,
    space: Space,
    dim: usize,
}

impl<'a> ElementParser<'a> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            context: self.text.to_string(),
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<ExteriorElement> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Token::Plus) => {
                self.pos += 1;
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
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExteriorElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.wedge(&f)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    let scalar = f
                        .coefficient(&MultiIndex::empty())
                        .as_rational()
                        .filter(|v| !num::traits::Zero::is_zero(v))
                        .ok_or_else(|| self.err("division only by a nonzero constant"))?;
                    if f.degrees() != vec![0] {
                        return Err(self.err("division only by a constant"));
                    }
                    acc = acc.scale(&ParamPoly::from_rational(scalar.recip()));
                }
                _ => return Ok(acc),
            }
        }
    }

    /// A chain of atoms joined by `^`: `^ <integer>` is a power of the chain
    /// so far, `^ <atom>` a wedge factor.
    fn factor(&mut self) -> Result<ExteriorElement> {
        let mut acc = self.atom()?;
        while let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            if let Some(Token::Int(n)) = self.peek() {
                let n = n.clone();
                self.pos += 1;
                let e: u32 = n
                    .try_into()
                    .map_err(|_| self.err("exponent out of range"))?;
                let base = acc.clone();
                let mut powered = ExteriorElement::scalar_one(self.space, self.dim);
                for _ in 0..e {
                    powered = powered.wedge(&base)?;
                }
                acc = powered;
            } else {
                let f = self.atom()?;
                acc = acc.wedge(&f)?;
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<ExteriorElement> {
        match self.bump() {
            Some(Token::Int(n)) => Ok(ExteriorElement::zero(self.space, self.dim).with_term(
                MultiIndex::empty(),
                ParamPoly::from_rational(num::BigRational::from(n)),
            )),
            Some(Token::Ident(name)) => {
                if let Some(index) = parse_generator(&name) {
                    let (letter, i) = index;
                    let wanted = self.space.generator_letter();
                    if letter != wanted {
                        return Err(Error::SpaceMismatch {
                            expected: format!("{} (generators {wanted}1..)", self.space),
                            got: format!("generator {name}"),
                        });
                    }
                    ExteriorElement::generator(self.space, self.dim, i)
                } else {
                    Ok(ExteriorElement::zero(self.space, self.dim)
                        .with_term(MultiIndex::empty(), ParamPoly::var(&name)))
                }
            }
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

/// Recognizes generator names `y3` / `z12`.
fn parse_generator(name: &str) -> Option<(char, usize)> {
    let mut chars = name.chars();
    let letter = chars.next()?;
    if letter != 'y' && letter != 'z' {
        return None;
    }
    let rest: String = chars.collect();
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok().map(|i| (letter, i))
}

/// JSON form `{"space":"tangent","terms":[{"idx":[1,2],"c":"c1"}]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ElementJson {
    pub space: Space,
    pub terms: Vec<ElementTermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ElementTermJson {
    pub idx: Vec<usize>,
    pub c: String,
}

impl ExteriorElement {
    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| ElementTermJson {
                    idx: i.indices().to_vec(),
                    c: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ElementJson, dim: usize) -> Result<Self> {
        let mut out = ExteriorElement::zero(json.space, dim);
        for term in &json.terms {
            let idx = MultiIndex::new(term.idx.clone())?;
            if let Some(&max) = idx.indices().last() {
                if max > dim {
                    return Err(Error::IndexOutOfRange { index: max, dim });
                }
            }
            out.add_term(idx, term.c.parse()?);
        }
        Ok(out)
    }
}
