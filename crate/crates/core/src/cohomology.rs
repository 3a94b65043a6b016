//! Matrix representations of graded operators, exact rank over the rationals,
//! Betti sequences, the d∘d residual check, and the alternating-sum verifier.
//!
//! Matrices use the row = domain layout: `entries[r][c]` is the coefficient of
//! `codomain[c]` in the image of `domain[r]`. Rank is computed by
//! fraction-free (Bareiss) elimination over exact integers after clearing
//! denominators, so no rational blowup and no floating point.

use num::bigint::BigInt;
use num::traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exterior::{basis_enum, ExteriorElement, MultiIndex, Space};
use crate::scalars::{Assignment, ParamPoly, Rational};
use crate::{Error, Result};

/// Matrix of a graded linear map in fixed ordered bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorMatrix {
    pub label: String,
    pub domain_degree: i64,
    pub codomain_degree: i64,
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
    /// Row r, column c: coefficient of `codomain[c]` in the image of `domain[r]`.
    pub entries: Vec<Vec<ParamPoly>>,
}

impl OperatorMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(self.codomain.len(), |r| r.len())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }

    pub fn entry(&self, row: usize, col: usize) -> &ParamPoly {
        &self.entries[row][col]
    }

    /// Transposed matrix with swapped bases.
    pub fn transpose(&self, label: impl Into<String>) -> OperatorMatrix {
        let entries = (0..self.cols())
            .map(|c| (0..self.rows()).map(|r| self.entries[r][c].clone()).collect())
            .collect();
        OperatorMatrix {
            label: label.into(),
            domain_degree: self.codomain_degree,
            codomain_degree: self.domain_degree,
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entries,
        }
    }

    /// Composition in domain-to-codomain order: `self` first, then `other`.
    pub fn multiply(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch(format!(
                "{} ({}x{}) then {} ({}x{})",
                self.label,
                self.rows(),
                self.cols(),
                other.label,
                other.rows(),
                other.cols()
            )));
        }
        let entries = (0..self.rows())
            .map(|r| {
                (0..other.cols())
                    .map(|c| {
                        let mut acc = ParamPoly::zero();
                        for k in 0..self.cols() {
                            acc = acc.add(&self.entries[r][k].mul(&other.entries[k][c]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(OperatorMatrix {
            label: format!("{}*{}", self.label, other.label),
            domain_degree: self.domain_degree,
            codomain_degree: other.codomain_degree,
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            entries,
        })
    }

    pub fn subst(&self, assignment: &Assignment) -> OperatorMatrix {
        OperatorMatrix {
            label: self.label.clone(),
            domain_degree: self.domain_degree,
            codomain_degree: self.codomain_degree,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.subst(assignment)).collect())
                .collect(),
        }
    }

    /// Exact rank over the rationals after substituting the assignment.
    pub fn rank(&self, assignment: &Assignment) -> Result<usize> {
        let mut numeric: Vec<Vec<Rational>> = Vec::with_capacity(self.rows());
        for row in &self.entries {
            numeric.push(row.iter().map(|e| e.eval(assignment)).collect::<Result<_>>()?);
        }
        Ok(rational_rank(numeric))
    }

    /// Nonzero entries rendered as `(row, col) = value`, for residual reports.
    pub fn nonzero_entries(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    out.push(format!("({}, {}) = {}", r + 1, c + 1, e));
                }
            }
        }
        out
    }
}

/// Builds the matrix of a graded operator on the exterior algebra by applying
/// it to each domain basis monomial and reading coefficients in the
/// lexicographic codomain basis.
pub fn operator_matrix<F>(
    label: impl Into<String>,
    space: Space,
    dim: usize,
    domain_degree: usize,
    codomain_degree: usize,
    op: F,
) -> Result<OperatorMatrix>
where
    F: Fn(&ExteriorElement) -> Result<ExteriorElement>,
{
    let label = label.into();
    let domain_basis = basis_enum(dim, domain_degree);
    let codomain_basis = basis_enum(dim, codomain_degree);
    let letter = space.generator_letter();
    let render = |idx: &MultiIndex| -> String {
        if idx.degree() == 0 {
            "1".to_string()
        } else {
            idx.indices()
                .iter()
                .map(|i| format!("{letter}{i}"))
                .collect::<Vec<_>>()
                .join("^")
        }
    };
    let mut entries = Vec::with_capacity(domain_basis.len());
    for idx in &domain_basis {
        let monomial = ExteriorElement::monomial(space, dim, idx.clone())?;
        let image = op(&monomial)?;
        for d in image.degrees() {
            if d != codomain_degree {
                return Err(Error::ShapeMismatch(format!(
                    "{label}: image of {} has degree {d}, expected {codomain_degree}",
                    render(idx)
                )));
            }
        }
        entries.push(codomain_basis.iter().map(|c| image.coefficient(c)).collect());
    }
    Ok(OperatorMatrix {
        label,
        domain_degree: domain_degree as i64,
        codomain_degree: codomain_degree as i64,
        domain: domain_basis.iter().map(&render).collect(),
        codomain: codomain_basis.iter().map(&render).collect(),
        entries,
    })
}

/// Rank of a rational matrix: clear denominators per row, then fraction-free
/// elimination over integers.
pub fn rational_rank(matrix: Vec<Vec<Rational>>) -> usize {
    let integral: Vec<Vec<BigInt>> = matrix
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, e| {
                num::integer::lcm(acc, e.denom().clone())
            });
            row.into_iter()
                .map(|e| e.numer() * (&lcm / e.denom()))
                .collect()
        })
        .collect();
    bareiss_rank(integral)
}

/// One-step Bareiss elimination with row and column pivoting. Every division
/// is exact.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&t % &prev).is_zero());
                m[i][j] = t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        rank += 1;
        r += 1;
    }
    rank
}

/// Per-degree report of a graded complex: dimensions, outgoing ranks, Betti
/// numbers, and both alternating sums of the invariance theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    /// Operator degree in the superalgebra grading.
    pub p: i64,
    /// Grades of the chain spaces, consecutive integers.
    pub degrees: Vec<i64>,
    pub dims: Vec<usize>,
    /// Rank of the outgoing map at each position.
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
    #[serde(rename = "altBettiSum")]
    pub alt_betti_sum: i64,
    #[serde(rename = "altDimSum")]
    pub alt_dim_sum: i64,
    /// Matrix label of the outgoing map at each position.
    pub labels: Vec<String>,
}

/// Outcome of the alternating-sum comparison (Betti side vs dimension side).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltSumCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

/// Groups values by the half-open grade windows k|p| ≤ i < (k+1)|p| anchored
/// at 0 (negative k included) and alternates the window sums.
fn alternating_window_sum(grades: &[i64], values: &[usize], p: i64) -> i64 {
    let width = p.abs().max(1);
    let mut total = 0i64;
    for (&g, &v) in grades.iter().zip(values) {
        let k = g.div_euclid(width);
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        total += sign * v as i64;
    }
    total
}

/// Betti numbers of a graded complex given one outgoing matrix per chain
/// space (spaces at consecutive grades, operator of grade degree `p`).
///
/// The composition of consecutive maps must vanish after substitution;
/// otherwise `NotAComplex` is returned with the offending residual.
pub fn betti_sequence(
    matrices: &[OperatorMatrix],
    grades: &[i64],
    p: i64,
    assignment: &Assignment,
) -> Result<BettiReport> {
    assert_eq!(matrices.len(), grades.len(), "one matrix per chain space");
    let substituted: Vec<OperatorMatrix> =
        matrices.iter().map(|m| m.subst(assignment)).collect();
    for (i, residual) in compose_consecutive(&substituted, p)? {
        if !residual.is_zero() {
            return Err(Error::NotAComplex {
                degree: grades[i],
                residual: format!(
                    "{}: {}",
                    residual.label,
                    residual.nonzero_entries().join(", ")
                ),
            });
        }
    }
    let dims: Vec<usize> = substituted.iter().map(|m| m.rows()).collect();
    let mut ranks = Vec::with_capacity(substituted.len());
    for m in &substituted {
        ranks.push(m.rank(assignment)?);
    }
    let len = matrices.len() as i64;
    let betti: Vec<usize> = (0..matrices.len())
        .map(|i| {
            let incoming = i as i64 - p;
            let rank_in = if (0..len).contains(&incoming) {
                ranks[incoming as usize]
            } else {
                0
            };
            dims[i]
                .checked_sub(ranks[i] + rank_in)
                .expect("rank bound within dimension")
        })
        .collect();
    let alt_betti_sum = alternating_window_sum(grades, &betti, p);
    let alt_dim_sum = alternating_window_sum(grades, &dims, p);
    Ok(BettiReport {
        p,
        degrees: grades.to_vec(),
        dims,
        ranks,
        betti,
        alt_betti_sum,
        alt_dim_sum,
        labels: matrices.iter().map(|m| m.label.clone()).collect(),
    })
}

fn compose_consecutive(
    matrices: &[OperatorMatrix],
    p: i64,
) -> Result<Vec<(usize, OperatorMatrix)>> {
    let len = matrices.len() as i64;
    let mut out = Vec::new();
    for i in 0..matrices.len() {
        let next = i as i64 + p;
        if (0..len).contains(&next) {
            out.push((i, matrices[i].multiply(&matrices[next as usize])?));
        }
    }
    Ok(out)
}

/// The matrices of op∘op at each degree, symbolically when no assignment is
/// given. Nonzero residuals are data here, unlike in `betti_sequence`.
pub fn d_squared_check(
    matrices: &[OperatorMatrix],
    p: i64,
    assignment: Option<&Assignment>,
) -> Result<Vec<OperatorMatrix>> {
    let substituted: Vec<OperatorMatrix> = match assignment {
        Some(a) => matrices.iter().map(|m| m.subst(a)).collect(),
        None => matrices.to_vec(),
    };
    Ok(compose_consecutive(&substituted, p)?
        .into_iter()
        .map(|(_, m)| m)
        .collect())
}

/// Recomputes both sides of the alternating-sum identity from a report.
pub fn alternating_sum_check(report: &BettiReport) -> AltSumCheck {
    let lhs = alternating_window_sum(&report.degrees, &report.betti, report.p);
    let rhs = alternating_window_sum(&report.degrees, &report.dims, report.p);
    AltSumCheck {
        lhs,
        rhs,
        equal: lhs == rhs,
    }
}
