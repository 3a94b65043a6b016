//! The dual coboundary operator δ defined by ⟨Ω, d_π U⟩ = ⟨δΩ, U⟩, its
//! matrices, compositions with the Chevalley–Eilenberg differential, and
//! double-complex reports.
//!
//! With the pairing normalized by ⟨z_I, y_I⟩ = 1, the matrix of δ at form
//! degree p is the transpose of the matrix of d_π at multivector degree
//! p − p₀ + 1. The defining summation formula is kept as `apply_dual_def`,
//! a cross-check guarding the pairing convention. Anticommutator residuals
//! of δ with d are reported, never asserted zero: both vanishing and
//! non-vanishing behavior occurs.

use serde::{Deserialize, Serialize};

use crate::cohomology::{betti_sequence, BettiReport, OperatorMatrix};
use crate::exterior::{basis_enum, pairing, ExteriorElement, Space};
use crate::forms::{ce_matrices, form_grades};
use crate::liealg::LieAlgebra;
use crate::scalars::Assignment;
use crate::schouten::{d_pi, dpi_matrices};
use crate::{Error, Result};

/// Matrices of δ at form degrees 0..n. δ maps Λᵖ𝔪* → Λ^{p−p₀+1}𝔪* for a
/// homogeneous p₀-vector π; degrees with no counterpart carry a zero matrix.
pub fn dual_operator(
    algebra: &LieAlgebra,
    pi: &ExteriorElement,
) -> Result<Vec<OperatorMatrix>> {
    let p0 = pi
        .homogeneous_degree()
        .filter(|&d| d >= 2)
        .ok_or_else(|| {
            Error::DegreeMismatch(
                "pi must be homogeneous of degree at least 2".to_string(),
            )
        })?;
    let n = algebra.dim();
    let dpi = dpi_matrices(algebra, pi)?;
    let form_labels = |degree: i64| -> Vec<String> {
        if degree < 0 {
            return Vec::new();
        }
        basis_enum(n, degree as usize)
            .iter()
            .map(|idx| {
                if idx.degree() == 0 {
                    "1".to_string()
                } else {
                    idx.indices()
                        .iter()
                        .map(|i| format!("z{i}"))
                        .collect::<Vec<_>>()
                        .join("^")
                }
            })
            .collect()
    };
    let mut out = Vec::with_capacity(n + 1);
    for p in 0..=n {
        let q = p as i64 - p0 as i64 + 1;
        let label = format!("delta({p},{q})");
        if q >= 1 {
            // transpose of d_pi at multivector degree q, relabeled to z's
            let source = &dpi[(q - 1) as usize];
            let mut m = source.transpose(label);
            m.domain = m.domain.iter().map(|s| s.replace('y', "z")).collect();
            m.codomain = m.codomain.iter().map(|s| s.replace('y', "z")).collect();
            out.push(m);
        } else {
            let domain = form_labels(p as i64);
            let codomain = form_labels(q);
            let entries = vec![vec![crate::scalars::ParamPoly::zero(); codomain.len()]; domain.len()];
            out.push(OperatorMatrix {
                label,
                domain_degree: p as i64,
                codomain_degree: q,
                domain,
                codomain,
                entries,
            });
        }
    }
    Ok(out)
}

/// The defining formula δΩ = Σ_U ⟨Ω, d_π U⟩ Dual U evaluated element-wise.
pub fn apply_dual_def(
    algebra: &LieAlgebra,
    pi: &ExteriorElement,
    omega: &ExteriorElement,
) -> Result<ExteriorElement> {
    let p0 = pi
        .homogeneous_degree()
        .filter(|&d| d >= 2)
        .ok_or_else(|| {
            Error::DegreeMismatch(
                "pi must be homogeneous of degree at least 2".to_string(),
            )
        })?;
    let n = algebra.dim();
    let mut out = ExteriorElement::zero(Space::Cotangent, n);
    for p in omega.degrees() {
        let q = p as i64 - p0 as i64 + 1;
        if q < 1 {
            continue;
        }
        let component = omega.component(p);
        for idx in basis_enum(n, q as usize) {
            let u = ExteriorElement::monomial(Space::Tangent, n, idx.clone())?;
            let coef = pairing(&component, &d_pi(algebra, pi, &u)?);
            let dual_u = ExteriorElement::monomial(Space::Cotangent, n, idx)?;
            out = out.add(&dual_u.scale(&coef))?;
        }
    }
    Ok(out)
}

/// Pairwise products of chains: each matrix of `first` composed with the
/// matrix of `second` whose domain degree equals its codomain degree.
pub fn compose(
    first: &[OperatorMatrix],
    second: &[OperatorMatrix],
) -> Result<Vec<OperatorMatrix>> {
    let mut out = Vec::new();
    for f in first {
        if let Some(s) = second
            .iter()
            .find(|s| s.domain_degree == f.codomain_degree)
        {
            out.push(f.multiply(s)?);
        }
    }
    Ok(out)
}

/// Double-complex data: Betti tables for d and δ plus all composition
/// residuals. Betti tables are present only when the assignment makes the
/// matrices fully numeric; residual matrices stay symbolic otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoubleComplexReport {
    #[serde(rename = "bettiD")]
    pub betti_d: Option<BettiReport>,
    #[serde(rename = "bettiDelta")]
    pub betti_delta: Option<BettiReport>,
    pub delta_squared: Vec<OperatorMatrix>,
    pub anticommutator_residuals: AnticommutatorResiduals,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnticommutatorResiduals {
    pub d_delta: Vec<OperatorMatrix>,
    pub delta_d: Vec<OperatorMatrix>,
}

/// Builds the full double-complex report for a homogeneous π of degree p₀:
/// the CE complex, the δ complex, δ∘δ, and both anticommutator families,
/// all after substituting the (possibly partial) assignment.
pub fn double_complex_report(
    algebra: &LieAlgebra,
    pi: &ExteriorElement,
    assignment: &Assignment,
) -> Result<DoubleComplexReport> {
    let n = algebra.dim();
    let p0 = pi
        .homogeneous_degree()
        .filter(|&d| d >= 2)
        .ok_or_else(|| {
            Error::DegreeMismatch(
                "pi must be homogeneous of degree at least 2".to_string(),
            )
        })? as i64;
    let d_chain: Vec<OperatorMatrix> = ce_matrices(algebra)?
        .into_iter()
        .map(|m| m.subst(assignment))
        .collect();
    let delta_chain: Vec<OperatorMatrix> = dual_operator(algebra, pi)?
        .into_iter()
        .map(|m| m.subst(assignment))
        .collect();
    let grades = form_grades(n);

    let betti_d = match betti_sequence(&d_chain, &grades, 1, assignment) {
        Ok(report) => Some(report),
        Err(Error::MissingParameter(_)) => None,
        Err(e) => return Err(e),
    };
    // chains are indexed by domain degree 0..=n; a composite whose second
    // factor leaves the chain is the zero map through the zero space
    let basis_at = |t: i64| -> Vec<String> {
        if (0..=n as i64).contains(&t) {
            d_chain[t as usize].domain.clone()
        } else {
            Vec::new()
        }
    };
    let compose_all = |first: &[OperatorMatrix],
                       second: &[OperatorMatrix],
                       family: &str|
     -> Result<Vec<OperatorMatrix>> {
        let step = second[0].codomain_degree - second[0].domain_degree;
        (0..=n)
            .map(|p| {
                let f = &first[p];
                let q = f.codomain_degree;
                let mut m = if (0..=n as i64).contains(&q) {
                    f.multiply(&second[q as usize])?
                } else {
                    let codomain = basis_at(q + step);
                    OperatorMatrix {
                        label: String::new(),
                        domain_degree: f.domain_degree,
                        codomain_degree: q + step,
                        domain: f.domain.clone(),
                        codomain: codomain.clone(),
                        entries: vec![
                            vec![crate::scalars::ParamPoly::zero(); codomain.len()];
                            f.domain.len()
                        ],
                    }
                };
                m.label = format!("{family}({p})");
                Ok(m)
            })
            .collect()
    };
    let delta_squared = compose_all(&delta_chain, &delta_chain, "delta∘delta")?;
    let betti_delta = if delta_squared.iter().all(|m| m.is_zero()) {
        match betti_sequence(&delta_chain, &grades, 1 - p0, assignment) {
            Ok(report) => Some(report),
            Err(Error::MissingParameter(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let d_delta = compose_all(&delta_chain, &d_chain, "d∘delta")?;
    let delta_d = compose_all(&d_chain, &delta_chain, "delta∘d")?;
    Ok(DoubleComplexReport {
        betti_d,
        betti_delta,
        delta_squared,
        anticommutator_residuals: AnticommutatorResiduals { d_delta, delta_d },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::alternating_sum_check;
    use crate::exterior::parse_element;
    use crate::liealg::tests::{TYPE1, TYPE2};
    use crate::liealg::parse_algebra;
    use crate::scalars::parse_assignment;

    fn tan(dim: usize, text: &str) -> ExteriorElement {
        parse_element(text, Space::Tangent, dim).unwrap()
    }

    fn cot(dim: usize, text: &str) -> ExteriorElement {
        parse_element(text, Space::Cotangent, dim).unwrap()
    }

    fn poisson_pi() -> ExteriorElement {
        tan(4, "c1*y1^y2 + c2*y1^y3 + c3*y1^y4 + c4*y2^y3")
    }

    #[test]
    fn dual_vanishes_on_one_forms_and_the_top_form() {
        let alg = parse_algebra(TYPE1).unwrap();
        let pi = poisson_pi();
        for text in ["z1", "z2", "z3", "z4", "z1^z2^z3^z4"] {
            assert!(apply_dual_def(&alg, &pi, &cot(4, text)).unwrap().is_zero());
        }
    }

    #[test]
    fn dual_images_on_two_forms() {
        let alg = parse_algebra(TYPE1).unwrap();
        let pi = poisson_pi();
        // the adjoint of d_pi(y4) = c2 y1^y2 + c4 y1^y3 puts c2 (not c4) on z4
        assert_eq!(
            apply_dual_def(&alg, &pi, &cot(4, "z1^z2")).unwrap(),
            cot(4, "-c3*z3 + c2*z4")
        );
        assert_eq!(
            apply_dual_def(&alg, &pi, &cot(4, "z1^z3")).unwrap(),
            cot(4, "c4*z4")
        );
        for text in ["z1^z4", "z2^z3", "z2^z4", "z3^z4"] {
            assert!(apply_dual_def(&alg, &pi, &cot(4, text)).unwrap().is_zero());
        }
    }

    #[test]
    fn dual_images_on_three_forms() {
        let alg = parse_algebra(TYPE1).unwrap();
        let pi = poisson_pi();
        assert_eq!(
            apply_dual_def(&alg, &pi, &cot(4, "z1^z2^z3")).unwrap(),
            cot(4, "c4*z2^z4 - c2*z3^z4")
        );
        assert_eq!(
            apply_dual_def(&alg, &pi, &cot(4, "z1^z2^z4")).unwrap(),
            cot(4, "-c3*z3^z4")
        );
        assert!(apply_dual_def(&alg, &pi, &cot(4, "z1^z3^z4")).unwrap().is_zero());
        assert!(apply_dual_def(&alg, &pi, &cot(4, "z2^z3^z4")).unwrap().is_zero());
    }

    /// The transpose construction agrees entry-wise with the defining
    /// summation formula.
    #[test]
    fn matrix_construction_matches_the_defining_formula() {
        for (table, pi) in [
            (TYPE1, poisson_pi()),
            (TYPE2, tan(4, "C1*y1^y2 + C2*y1^y3 + C3*y1^y4 + C4*y2^y3 + C5*y2^y4 + C6*y3^y4")),
        ] {
            let alg = parse_algebra(table).unwrap();
            let deltas = dual_operator(&alg, &pi).unwrap();
            for p in 0..=4usize {
                let m = &deltas[p];
                let domain = basis_enum(4, p);
                for (r, idx) in domain.iter().enumerate() {
                    let omega =
                        ExteriorElement::monomial(Space::Cotangent, 4, idx.clone()).unwrap();
                    let image = apply_dual_def(&alg, &pi, &omega).unwrap();
                    let q = m.codomain_degree;
                    if q < 1 {
                        assert!(image.is_zero());
                        continue;
                    }
                    for (c, target) in basis_enum(4, q as usize).iter().enumerate() {
                        assert_eq!(m.entry(r, c), &image.coefficient(target));
                    }
                }
            }
        }
    }

    /// ⟨Ω, d_π U⟩ = ⟨δΩ, U⟩ symbolically on every basis pair of compatible
    /// degrees.
    #[test]
    fn adjointness_on_all_basis_pairs() {
        let alg = parse_algebra(TYPE1).unwrap();
        let pi = poisson_pi();
        // p = 1 pairs against scalars, which are outside the multivector
        // superalgebra, so the adjointness statement starts at p = 2
        for p in 2..=4usize {
            for omega_idx in basis_enum(4, p) {
                let omega =
                    ExteriorElement::monomial(Space::Cotangent, 4, omega_idx).unwrap();
                let delta_omega = apply_dual_def(&alg, &pi, &omega).unwrap();
                for u_idx in basis_enum(4, p - 1) {
                    let u = ExteriorElement::monomial(Space::Tangent, 4, u_idx).unwrap();
                    let lhs = pairing(&omega, &d_pi(&alg, &pi, &u).unwrap());
                    let rhs = pairing(&delta_omega, &u);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn delta_squares_to_zero_when_dpi_does() {
        let alg = parse_algebra(TYPE1).unwrap();
        let deltas = dual_operator(&alg, &poisson_pi()).unwrap();
        for m in compose(&deltas, &deltas).unwrap() {
            assert!(m.is_zero(), "nonzero delta^2: {:?}", m.nonzero_entries());
        }
    }

    #[test]
    fn double_complex_table_tracks_the_two_by_two_rank() {
        let alg = parse_algebra(TYPE1).unwrap();
        let pi = poisson_pi();
        // assignments realizing r = 0, 1, 2 of [[c2, c3], [c4, 0]]
        let cases = [
            ("c1=1,c2=0,c3=0,c4=0", 0usize),
            ("c1=0,c2=1,c3=0,c4=0", 1),
            ("c1=0,c2=0,c3=1,c4=1", 2),
        ];
        for (text, r) in cases {
            let assignment = parse_assignment(&[text.to_string()]).unwrap();
            let report = double_complex_report(&alg, &pi, &assignment).unwrap();
            let delta = report.betti_delta.expect("numeric assignment");
            assert_eq!(delta.dims, vec![1, 4, 6, 4, 1]);
            assert_eq!(delta.ranks, vec![0, 0, r, r, 0]);
            assert_eq!(
                delta.betti,
                vec![1, 4 - r, 2 * (3 - r), 4 - r, 1],
                "betti at r = {r}"
            );
            assert!(alternating_sum_check(&delta).equal);
            // both anticommutator families vanish on this table
            for m in report
                .anticommutator_residuals
                .d_delta
                .iter()
                .chain(&report.anticommutator_residuals.delta_d)
            {
                assert!(m.is_zero());
            }
        }
    }

    #[test]
    fn anticommutators_vanish_symbolically_on_the_nilpotent_table() {
        let alg = parse_algebra(TYPE1).unwrap();
        let report =
            double_complex_report(&alg, &poisson_pi(), &Assignment::new()).unwrap();
        assert!(report.betti_delta.is_none());
        for m in report
            .anticommutator_residuals
            .d_delta
            .iter()
            .chain(&report.anticommutator_residuals.delta_d)
        {
            assert!(m.is_zero());
        }
        for m in &report.delta_squared {
            assert!(m.is_zero());
        }
    }

    #[test]
    fn abelian_dual_is_zero_and_betti_equals_dims() {
        let alg = LieAlgebra::abelian(4);
        let pi = tan(4, "y1^y2 + y3^y4");
        let report = double_complex_report(&alg, &pi, &Assignment::new()).unwrap();
        let delta = report.betti_delta.expect("no parameters anywhere");
        assert_eq!(delta.ranks, vec![0; 5]);
        assert_eq!(delta.betti, delta.dims);
    }

    /// Case 1 of the parametric table: a = −1, C3 = C6 = 0. δ∘δ = 0 while
    /// δ∘d and d∘δ are nonzero in specific stages.
    #[test]
    fn compositions_on_the_parametric_table_case_one() {
        let alg = parse_algebra(TYPE2).unwrap();
        let pi = tan(
            4,
            "C1*y1^y2 + C2*y1^y3 + C3*y1^y4 + C4*y2^y3 + C5*y2^y4 + C6*y3^y4",
        );
        let assignment = parse_assignment(&["a=-1,C3=0,C6=0".to_string()]).unwrap();
        let report = double_complex_report(&alg, &pi, &assignment).unwrap();
        for m in &report.delta_squared {
            assert!(m.is_zero(), "delta^2 residual: {:?}", m.nonzero_entries());
        }

        let find = |mats: &[OperatorMatrix], degree: i64| -> OperatorMatrix {
            mats.iter()
                .find(|m| m.domain_degree == degree)
                .expect("degree present")
                .clone()
        };
        let image = |m: &OperatorMatrix, source: &str, target_degree: usize| -> ExteriorElement {
            let row = m.domain.iter().position(|d| d == source).unwrap();
            let mut out = ExteriorElement::zero(Space::Cotangent, 4);
            for (c, idx) in basis_enum(4, target_degree).iter().enumerate() {
                out.add_term(idx.clone(), m.entry(row, c).clone());
            }
            out
        };

        // d∘δ on 2-forms: nonzero exactly on z1^z2 and z2^z3
        let d_delta_2 = find(&report.anticommutator_residuals.d_delta, 2);
        assert_eq!(image(&d_delta_2, "z1^z2", 2), cot(4, "-C5*z1^z4"));
        assert_eq!(image(&d_delta_2, "z2^z3", 2), cot(4, "C5*z3^z4"));
        for source in ["z1^z3", "z1^z4", "z2^z4", "z3^z4"] {
            assert!(image(&d_delta_2, source, 2).is_zero());
        }
        // d∘δ vanishes on 1-forms, 3-forms, and the top form
        for degree in [1i64, 3, 4] {
            assert!(find(&report.anticommutator_residuals.d_delta, degree).is_zero());
        }

        // δ∘d on 1-forms: [0, -C5 z4, 0, 0]
        let delta_d_1 = find(&report.anticommutator_residuals.delta_d, 1);
        assert_eq!(image(&delta_d_1, "z2", 1), cot(4, "-C5*z4"));
        for source in ["z1", "z3", "z4"] {
            assert!(image(&delta_d_1, source, 1).is_zero());
        }
        // δ∘d on 3-forms: [C5 z1^z3^z4, 0, 0, 0]
        let delta_d_3 = find(&report.anticommutator_residuals.delta_d, 3);
        assert_eq!(image(&delta_d_3, "z1^z2^z3", 3), cot(4, "C5*z1^z3^z4"));
        for source in ["z1^z2^z4", "z1^z3^z4", "z2^z3^z4"] {
            assert!(image(&delta_d_3, source, 3).is_zero());
        }
        // δ∘d vanishes on 2-forms and the top form
        for degree in [2i64, 4] {
            assert!(find(&report.anticommutator_residuals.delta_d, degree).is_zero());
        }
    }
}
