//! The Schouten bracket on Λ•𝔪 with constant coefficients, the Poisson
//! residual [π,π], and the coboundary operator d_π = [π,·].
//!
//! The bracket is the literal bilinear extension of its value on decomposable
//! monomials,
//!
//! ```text
//! [X1∧…∧Xr, Y1∧…∧Ys] = Σ (−1)^{i+j} [Xi,Yj] ∧ (X's without Xi) ∧ (Y's without Yj),
//! ```
//!
//! with the superalgebra grading grade(Λʲ) = j − 1. Degree-0 scalars are not
//! part of the multivector superalgebra, so they are rejected rather than
//! treated as zero.

use crate::cohomology::{operator_matrix, OperatorMatrix};
use crate::exterior::{merge_indices, ExteriorElement, Space};
use crate::liealg::LieAlgebra;
use crate::{Error, Result};

fn check_tangent(algebra: &LieAlgebra, e: &ExteriorElement) -> Result<()> {
    if e.space() != Space::Tangent {
        return Err(Error::SpaceMismatch {
            expected: Space::Tangent.to_string(),
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
    if e.degrees().first() == Some(&0) {
        return Err(Error::DegreeMismatch(
            "degree-0 scalars are not part of the multivector superalgebra".to_string(),
        ));
    }
    Ok(())
}

/// Superalgebra grade of a homogeneous j-vector: j − 1.
pub fn grade(degree: usize) -> i64 {
    degree as i64 - 1
}

/// The Schouten bracket [A, B], bilinear over the coefficients.
pub fn schouten_bracket(
    algebra: &LieAlgebra,
    a: &ExteriorElement,
    b: &ExteriorElement,
) -> Result<ExteriorElement> {
    check_tangent(algebra, a)?;
    check_tangent(algebra, b)?;
    let mut out = ExteriorElement::zero(Space::Tangent, algebra.dim());
    for (ia, ca) in a.terms() {
        for (ib, cb) in b.terms() {
            let coef = ca.mul(cb);
            let xs = ia.indices();
            let ys = ib.indices();
            for (r, &xi) in xs.iter().enumerate() {
                for (s, &yj) in ys.iter().enumerate() {
                    let lie = algebra.bracket_basis(xi, yj);
                    if lie.is_zero() {
                        continue;
                    }
                    let rest_x: Vec<usize> = xs
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != r)
                        .map(|(_, &v)| v)
                        .collect();
                    let rest_y: Vec<usize> = ys
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != s)
                        .map(|(_, &v)| v)
                        .collect();
                    // positions are 1-based in the sign (−1)^{i+j}
                    let positional = if (r + s) % 2 == 0 { 1i8 } else { -1i8 };
                    for (k, ck) in lie.terms() {
                        let Some((merge_sign, idx)) =
                            merge_indices(&[k.indices(), &rest_x, &rest_y])
                        else {
                            continue;
                        };
                        let mut c = coef.mul(ck);
                        if positional * merge_sign < 0 {
                            c = c.neg();
                        }
                        out.add_term(idx, c);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The coboundary d_π(U) = [π, U]. For π of degree p₀ this maps degree m to
/// degree m + p₀ − 1.
pub fn d_pi(
    algebra: &LieAlgebra,
    pi: &ExteriorElement,
    u: &ExteriorElement,
) -> Result<ExteriorElement> {
    if !pi.is_zero() && pi.homogeneous_degree().is_none() {
        return Err(Error::DegreeMismatch(format!(
            "pi must be homogeneous, got degrees {:?}",
            pi.degrees()
        )));
    }
    schouten_bracket(algebra, pi, u)
}

/// The Poisson residual [π, π]; its nonzero coefficients are the Poisson
/// condition system.
pub fn poisson_residual(algebra: &LieAlgebra, pi: &ExteriorElement) -> Result<ExteriorElement> {
    schouten_bracket(algebra, pi, pi)
}

/// Matrices of d_π on Λ¹..Λⁿ, one outgoing matrix per chain space, in the
/// lexicographic bases. The superalgebra grades of the chain spaces are
/// 0..n−1 and the operator has grade degree deg(π) − 1.
pub fn dpi_matrices(algebra: &LieAlgebra, pi: &ExteriorElement) -> Result<Vec<OperatorMatrix>> {
    let step = pi.homogeneous_degree().ok_or_else(|| {
        Error::DegreeMismatch("pi must be homogeneous".to_string())
    })?;
    let n = algebra.dim();
    (1..=n)
        .map(|m| {
            operator_matrix(
                format!("A({},{})", m, m + step - 1),
                Space::Tangent,
                n,
                m,
                m + step - 1,
                |u| d_pi(algebra, pi, u),
            )
        })
        .collect()
}

/// Grades 0..n−1 of the multivector chain Λ¹..Λⁿ.
pub fn tangent_grades(n: usize) -> Vec<i64> {
    (1..=n).map(|m| grade(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::parse_element;
    use crate::liealg::parse_algebra;
    use crate::scalars::ParamPoly;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const TYPE1: &str = r#"{
        "dim": 4,
        "brackets": [
            {"i":2, "j":4, "rhs": [{"k":1, "c":"1"}]},
            {"i":3, "j":4, "rhs": [{"k":2, "c":"1"}]}
        ],
        "parameters": []
    }"#;

    fn type1() -> LieAlgebra {
        parse_algebra(TYPE1).unwrap()
    }

    fn tan(text: &str) -> ExteriorElement {
        parse_element(text, Space::Tangent, 4).unwrap()
    }

    /// The six-parameter 2-vector on the 4-dimensional fixture.
    fn general_pi() -> ExteriorElement {
        tan("c1*y1^y2 + c2*y1^y3 + c3*y1^y4 + c4*y2^y3 + c5*y2^y4 + c6*y3^y4")
    }

    /// The Poisson family (c5 = c6 = 0).
    fn poisson_pi() -> ExteriorElement {
        tan("c1*y1^y2 + c2*y1^y3 + c3*y1^y4 + c4*y2^y3")
    }

    #[test]
    fn bracket_of_a_single_vector_with_itself_vanishes() {
        let alg = type1();
        let y1 = tan("y1");
        assert!(schouten_bracket(&alg, &y1, &y1).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_a_square_term() {
        let alg = type1();
        let u = tan("y2^y4");
        assert_eq!(
            schouten_bracket(&alg, &u, &u).unwrap(),
            tan("2*y1^y2^y4")
        );
    }

    /// Sign-convention calibration: the symbolic [π,π]/2 expansion must be
    /// reproduced term for term before any other fixture is trusted.
    #[test]
    fn poisson_residual_of_the_general_two_vector() {
        let alg = type1();
        let residual = poisson_residual(&alg, &general_pi()).unwrap();
        let half = residual.scale(&"1/2".parse::<ParamPoly>().unwrap());
        let expected = tan(
            "(c4*c5 - c2*c6)*y1^y2^y3 + (c5^2 - c3*c6)*y1^y2^y4 \
             + c5*c6*y1^y3^y4 + c6^2*y2^y3^y4",
        );
        assert_eq!(half, expected);
    }

    #[test]
    fn poisson_residual_vanishes_on_the_solution_family() {
        let alg = type1();
        assert!(poisson_residual(&alg, &poisson_pi()).unwrap().is_zero());
    }

    #[test]
    fn poisson_residual_vanishes_on_abelian_algebras() {
        let alg = LieAlgebra::abelian(4);
        let pi = general_pi();
        assert!(poisson_residual(&alg, &pi).unwrap().is_zero());
    }

    #[test]
    fn coboundary_on_generators() {
        let alg = type1();
        let pi = poisson_pi();
        assert!(d_pi(&alg, &pi, &tan("y1")).unwrap().is_zero());
        assert!(d_pi(&alg, &pi, &tan("y2")).unwrap().is_zero());
        assert_eq!(d_pi(&alg, &pi, &tan("y3")).unwrap(), tan("-c3*y1^y2"));
        assert_eq!(
            d_pi(&alg, &pi, &tan("y4")).unwrap(),
            tan("c2*y1^y2 + c4*y1^y3")
        );
    }

    #[test]
    fn coboundary_on_two_vectors() {
        let alg = type1();
        let pi = poisson_pi();
        assert_eq!(
            d_pi(&alg, &pi, &tan("y2^y4")).unwrap(),
            tan("c4*y1^y2^y3")
        );
        assert_eq!(
            d_pi(&alg, &pi, &tan("y3^y4")).unwrap(),
            tan("-c2*y1^y2^y3 - c3*y1^y2^y4")
        );
        for text in ["y1^y2", "y1^y3", "y1^y4", "y2^y3"] {
            assert!(d_pi(&alg, &pi, &tan(text)).unwrap().is_zero());
        }
    }

    #[test]
    fn coboundary_rejects_scalars() {
        let alg = type1();
        let pi = poisson_pi();
        assert!(matches!(
            d_pi(&alg, &pi, &tan("1")),
            Err(Error::DegreeMismatch(_))
        ));
    }

    fn random_homogeneous(rng: &mut ChaCha8Rng, alg: &LieAlgebra, degree: usize) -> ExteriorElement {
        let n = alg.dim();
        let basis = crate::exterior::basis_enum(n, degree);
        let mut out = ExteriorElement::zero(Space::Tangent, n);
        for idx in basis {
            let c = rng.gen_range(-2i64..=2);
            if c != 0 {
                let monomial = ExteriorElement::monomial(Space::Tangent, n, idx).unwrap();
                out = out.add(&monomial.scale(&ParamPoly::from_int(c))).unwrap();
            }
        }
        out
    }

    #[test]
    fn graded_antisymmetry_on_random_elements() {
        let algebras = [type1(), parse_algebra(crate::liealg::tests::TYPE2).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let alg = &algebras[rng.gen_range(0..algebras.len())];
            let da = rng.gen_range(1..=4);
            let db = rng.gen_range(1..=4);
            let a = random_homogeneous(&mut rng, alg, da);
            let b = random_homogeneous(&mut rng, alg, db);
            let ab = schouten_bracket(alg, &a, &b).unwrap();
            let ba = schouten_bracket(alg, &b, &a).unwrap();
            let sign = (grade(da) * grade(db)) % 2 != 0;
            let flipped = if sign { ba.neg() } else { ba };
            assert!(ab.add(&flipped).unwrap().is_zero(), "[A,B] + (-1)^(ab)[B,A] != 0");
        }
    }

    #[test]
    fn super_jacobi_on_random_triples() {
        let algebras = [type1(), parse_algebra(crate::liealg::tests::TYPE2).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let alg = &algebras[rng.gen_range(0..algebras.len())];
            let (dx, dy, dz) = loop {
                let t = (
                    rng.gen_range(1..=3),
                    rng.gen_range(1..=3),
                    rng.gen_range(1..=3),
                );
                if t.0 + t.1 + t.2 <= 5 {
                    break t;
                }
            };
            let x = random_homogeneous(&mut rng, alg, dx);
            let y = random_homogeneous(&mut rng, alg, dy);
            let z = random_homogeneous(&mut rng, alg, dz);
            let (gx, gy, gz) = (grade(dx), grade(dy), grade(dz));
            let sgn = |e: i64| if e.rem_euclid(2) == 0 { 1 } else { -1 };
            let term = |first: &ExteriorElement, second: &ExteriorElement, third: &ExteriorElement, s: i64| {
                let inner = schouten_bracket(alg, first, second).unwrap();
                let outer = schouten_bracket(alg, &inner, third).unwrap();
                if s < 0 {
                    outer.neg()
                } else {
                    outer
                }
            };
            let total = term(&x, &y, &z, sgn(gx * gz))
                .add(&term(&y, &z, &x, sgn(gy * gx)))
                .unwrap()
                .add(&term(&z, &x, &y, sgn(gz * gy)))
                .unwrap();
            assert!(total.is_zero(), "super Jacobi fails");
        }
    }

    /// 2[π,[π,U]] = [[π,π],U] for every 2-vector π, Poisson or not.
    #[test]
    fn halved_square_identity_holds_without_poisson_condition() {
        let alg = type1();
        let pi = general_pi();
        let pipi = poisson_residual(&alg, &pi).unwrap();
        assert!(!pipi.is_zero());
        for m in 1..=4usize {
            for idx in crate::exterior::basis_enum(4, m) {
                let u = ExteriorElement::monomial(Space::Tangent, 4, idx).unwrap();
                let lhs = schouten_bracket(&alg, &pi, &schouten_bracket(&alg, &pi, &u).unwrap())
                    .unwrap()
                    .scale(&ParamPoly::from_int(2));
                let rhs = schouten_bracket(&alg, &pipi, &u).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn squared_coboundary_vanishes_for_poisson_tensors() {
        let alg = type1();
        let pi = poisson_pi();
        for m in 1..=4usize {
            for idx in crate::exterior::basis_enum(4, m) {
                let u = ExteriorElement::monomial(Space::Tangent, 4, idx).unwrap();
                let once = d_pi(&alg, &pi, &u).unwrap();
                if once.is_zero() {
                    continue;
                }
                assert!(d_pi(&alg, &pi, &once).unwrap().is_zero());
            }
        }
    }
}
