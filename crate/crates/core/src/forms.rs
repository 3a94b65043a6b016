//! The form-side superalgebra: the Chevalley–Eilenberg differential d on
//! Λ•𝔪*, the super bracket [α,β] = (−1)ᵃ d(α∧β), and the coboundary
//! operators d_φ.
//!
//! On generators d zᵏ = −Σ_{i<j} cᵏᵢⱼ zᵢ∧zⱼ, extended as an odd derivation;
//! d² = 0 is equivalent to the Jacobi identity. The superalgebra grade of an
//! a-form is a + 1, the positive-grade variant of the form grading (the
//! identity map is an isomorphism onto the negative-grade one).

use crate::cohomology::{operator_matrix, OperatorMatrix};
use crate::exterior::{merge_indices, ExteriorElement, MultiIndex, Space};
use crate::liealg::LieAlgebra;
use crate::{Error, Result};

fn check_cotangent(algebra: &LieAlgebra, e: &ExteriorElement) -> Result<()> {
    if e.space() != Space::Cotangent {
        return Err(Error::SpaceMismatch {
            expected: Space::Cotangent.to_string(),
            got: e.space().to_string(),
        });
    }
    if e.dim() != algebra.dim() {
        return Err(Error::DegreeMismatch(format!(
            "element lives in dimension {}, algebra has {}",
            e.dim(),
            algebra.dim()
        )));
    }
    Ok(())
}

/// Superalgebra grade of a homogeneous a-form: a + 1.
pub fn grade(degree: usize) -> i64 {
    degree as i64 + 1
}

/// d zᵏ as a 2-form.
fn generator_differential(algebra: &LieAlgebra, k: usize) -> ExteriorElement {
    let mut out = ExteriorElement::zero(Space::Cotangent, algebra.dim());
    for (&(i, j), rhs) in algebra.bracket_pairs() {
        for (target, c) in rhs {
            if *target == k {
                out.add_term(MultiIndex::new(vec![i, j]).unwrap(), c.neg());
            }
        }
    }
    out
}

/// The Chevalley–Eilenberg differential, an odd derivation with
/// d(scalar) = 0.
pub fn ce_d(algebra: &LieAlgebra, alpha: &ExteriorElement) -> Result<ExteriorElement> {
    check_cotangent(algebra, alpha)?;
    let mut out = ExteriorElement::zero(Space::Cotangent, algebra.dim());
    for (idx, coef) in alpha.terms() {
        let indices = idx.indices();
        for (r, &zr) in indices.iter().enumerate() {
            let dz = generator_differential(algebra, zr);
            let before = &indices[..r];
            let after = &indices[r + 1..];
            let positional = if r % 2 == 0 { 1i8 } else { -1i8 };
            for (pair, c) in dz.terms() {
                let Some((merge_sign, merged)) =
                    merge_indices(&[before, pair.indices(), after])
                else {
                    continue;
                };
                let mut term = coef.mul(c);
                if positional * merge_sign < 0 {
                    term = term.neg();
                }
                out.add_term(merged, term);
            }
        }
    }
    Ok(out)
}

/// The super bracket [α, β] = (−1)ᵃ d(α∧β) for homogeneous α of degree a.
pub fn form_bracket(
    algebra: &LieAlgebra,
    alpha: &ExteriorElement,
    beta: &ExteriorElement,
) -> Result<ExteriorElement> {
    check_cotangent(algebra, alpha)?;
    check_cotangent(algebra, beta)?;
    let a = if alpha.is_zero() {
        0
    } else {
        alpha
            .homogeneous_degree()
            .ok_or_else(|| Error::InhomogeneousLeftArgument(alpha.degrees()))?
    };
    let d = ce_d(algebra, &alpha.wedge(beta)?)?;
    Ok(if a % 2 == 1 { d.neg() } else { d })
}

/// The coboundary d_φ(U) = (−1)ᵖ d(φ∧U) for homogeneous φ of degree p;
/// raises form degree by p + 1.
pub fn d_phi(
    algebra: &LieAlgebra,
    phi: &ExteriorElement,
    u: &ExteriorElement,
) -> Result<ExteriorElement> {
    form_bracket(algebra, phi, u)
}

/// Matrices of the Chevalley–Eilenberg differential on Λ⁰..Λⁿ.
pub fn ce_matrices(algebra: &LieAlgebra) -> Result<Vec<OperatorMatrix>> {
    let n = algebra.dim();
    (0..=n)
        .map(|j| {
            operator_matrix(
                format!("d({},{})", j, j + 1),
                Space::Cotangent,
                n,
                j,
                j + 1,
                |u| ce_d(algebra, u),
            )
        })
        .collect()
}

/// Matrices of d_φ on Λ⁰..Λⁿ for homogeneous φ of degree p; the form degree
/// rises by p + 1 at every stage.
pub fn dphi_matrices(
    algebra: &LieAlgebra,
    phi: &ExteriorElement,
) -> Result<Vec<OperatorMatrix>> {
    let p = if phi.is_zero() {
        0
    } else {
        phi.homogeneous_degree()
            .ok_or_else(|| Error::InhomogeneousLeftArgument(phi.degrees()))?
    };
    let n = algebra.dim();
    (0..=n)
        .map(|j| {
            operator_matrix(
                format!("A({},{})", j, j + p + 1),
                Space::Cotangent,
                n,
                j,
                j + p + 1,
                |u| d_phi(algebra, phi, u),
            )
        })
        .collect()
}

/// Grades 1..n+1 of the form chain Λ⁰..Λⁿ.
pub fn form_grades(n: usize) -> Vec<i64> {
    (0..=n).map(grade).collect()
}
