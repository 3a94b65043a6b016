//! Finite-dimensional Lie algebras given by structure constants, with axiom
//! checking at the polynomial level.
//!
//! Structure constants are parameter polynomials, so parametric families are
//! first class and the Jacobi identity is verified identically in the
//! parameters, not at sample points. Basis indices are 1-based in all I/O.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exterior::{ExteriorElement, MultiIndex, Space};
use crate::scalars::ParamPoly;
use crate::{Error, Result};

/// A Lie algebra over the rationals (with optional symbolic parameters),
/// described by the brackets [yᵢ, yⱼ] = Σₖ cᵏᵢⱼ yₖ for i < j. Absent pairs
/// mean a zero bracket.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    name: Option<String>,
    basis_names: Vec<String>,
    parameters: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, ParamPoly)>>,
}

/// One Jacobi violation: the triple and the nonzero residual
/// [[yᵢ,yⱼ],yₖ] + [[yⱼ,yₖ],yᵢ] + [[yₖ,yᵢ],yⱼ].
#[derive(Debug, Clone)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub residual: ExteriorElement,
}

/// Result of [`LieAlgebra::validate`]; empty iff the table satisfies the
/// axioms identically in all parameters.
#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub violations: Vec<JacobiViolation>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "all axioms hold");
        }
        for v in &self.violations {
            writeln!(
                f,
                "Jacobi fails on ({}, {}, {}): residual {}",
                v.triple.0, v.triple.1, v.triple.2, v.residual
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct AlgebraJson {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    brackets: Vec<BracketJson>,
    #[serde(default)]
    parameters: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    rhs: Vec<RhsJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RhsJson {
    k: usize,
    c: String,
}

/// Parses the algebra file format.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    let json: AlgebraJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: "algebra file".to_string(),
        reason: e.to_string(),
    })?;
    if json.dim == 0 {
        return Err(Error::Parse {
            context: "algebra file".to_string(),
            reason: "dimension must be positive".to_string(),
        });
    }
    let mut brackets = BTreeMap::new();
    for entry in &json.brackets {
        for &index in &[entry.i, entry.j] {
            if index == 0 || index > json.dim {
                return Err(Error::IndexOutOfRange {
                    index,
                    dim: json.dim,
                });
            }
        }
        if entry.i >= entry.j {
            return Err(Error::Parse {
                context: format!("bracket ({}, {})", entry.i, entry.j),
                reason: "pairs must satisfy i < j".to_string(),
            });
        }
        let mut rhs: Vec<(usize, ParamPoly)> = Vec::new();
        for term in &entry.rhs {
            if term.k == 0 || term.k > json.dim {
                return Err(Error::IndexOutOfRange {
                    index: term.k,
                    dim: json.dim,
                });
            }
            let coef: ParamPoly = term.c.parse()?;
            for p in coef.parameters() {
                if !json.parameters.iter().any(|q| q == p) {
                    return Err(Error::Parse {
                        context: format!("bracket ({}, {})", entry.i, entry.j),
                        reason: format!("parameter `{p}` is not declared"),
                    });
                }
            }
            if !coef.is_zero() {
                rhs.push((term.k, coef));
            }
        }
        if brackets.insert((entry.i, entry.j), rhs).is_some() {
            return Err(Error::Parse {
                context: format!("bracket ({}, {})", entry.i, entry.j),
                reason: "duplicate pair".to_string(),
            });
        }
    }
    Ok(LieAlgebra {
        dim: json.dim,
        name: json.name,
        basis_names: (1..=json.dim).map(|i| format!("y{i}")).collect(),
        parameters: json.parameters,
        brackets,
    })
}

/// Reads and parses an algebra file from disk.
pub fn parse_algebra_file(path: impl AsRef<Path>) -> Result<LieAlgebra> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_algebra(&text)
}

impl LieAlgebra {
    /// An abelian algebra of the given dimension (every bracket zero).
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            name: None,
            basis_names: (1..=dim).map(|i| format!("y{i}")).collect(),
            parameters: Vec::new(),
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn bracket_pairs(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<(usize, ParamPoly)>)> {
        self.brackets.iter()
    }

    /// [yᵢ, yⱼ] for arbitrary i, j (antisymmetry implied).
    pub fn bracket_basis(&self, i: usize, j: usize) -> ExteriorElement {
        let mut out = ExteriorElement::zero(Space::Tangent, self.dim);
        if i == j {
            return out;
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        if let Some(rhs) = self.brackets.get(&(a, b)) {
            for (k, c) in rhs {
                let coef = if flip { c.neg() } else { c.clone() };
                out.add_term(MultiIndex::single(*k), coef);
            }
        }
        out
    }

    /// Bilinear extension of the bracket to degree-1 elements.
    pub fn bracket(&self, x: &ExteriorElement, y: &ExteriorElement) -> Result<ExteriorElement> {
        for e in [x, y] {
            if e.space() != Space::Tangent {
                return Err(Error::SpaceMismatch {
                    expected: Space::Tangent.to_string(),
                    got: e.space().to_string(),
                });
            }
            if !e.is_zero() && e.homogeneous_degree() != Some(1) {
                return Err(Error::DegreeMismatch(format!(
                    "bracket arguments must have degree 1, got degrees {:?}",
                    e.degrees()
                )));
            }
        }
        let mut out = ExteriorElement::zero(Space::Tangent, self.dim);
        for (ix, cx) in x.terms() {
            for (iy, cy) in y.terms() {
                let base = self.bracket_basis(ix.indices()[0], iy.indices()[0]);
                out = out.add(&base.scale(&cx.mul(cy)))?;
            }
        }
        Ok(out)
    }

    /// Checks the Jacobi identity on every triple i < j < k as a polynomial
    /// identity. Violations are data, not errors.
    pub fn validate(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        for i in 1..=self.dim {
            for j in (i + 1)..=self.dim {
                for k in (j + 1)..=self.dim {
                    let residual = self.jacobi_residual(i, j, k);
                    if !residual.is_zero() {
                        report.violations.push(JacobiViolation {
                            triple: (i, j, k),
                            residual,
                        });
                    }
                }
            }
        }
        report
    }

    /// [[yᵢ,yⱼ],yₖ] + [[yⱼ,yₖ],yᵢ] + [[yₖ,yᵢ],yⱼ].
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> ExteriorElement {
        let gen = |m| ExteriorElement::generator(Space::Tangent, self.dim, m).unwrap();
        let term = |a: usize, b: usize, c: usize| {
            self.bracket(&self.bracket_basis(a, b), &gen(c)).unwrap()
        };
        term(i, j, k)
            .add(&term(j, k, i))
            .unwrap()
            .add(&term(k, i, j))
            .unwrap()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exterior::parse_element;

    pub(crate) const TYPE1: &str = r#"{
        "dim": 4, "name": "Type1",
        "brackets": [
            {"i":2, "j":4, "rhs": [{"k":1, "c":"1"}]},
            {"i":3, "j":4, "rhs": [{"k":2, "c":"1"}]}
        ],
        "parameters": []
    }"#;

    pub(crate) const TYPE2: &str = r#"{
        "dim": 4, "name": "Type2",
        "brackets": [
            {"i":1, "j":4, "rhs": [{"k":1, "c":"a"}]},
            {"i":2, "j":4, "rhs": [{"k":2, "c":"1"}]},
            {"i":3, "j":4, "rhs": [{"k":2, "c":"1"}, {"k":3, "c":"1"}]}
        ],
        "parameters": ["a"]
    }"#;

    pub(crate) const TYPE12: &str = r#"{
        "dim": 4, "name": "Type12",
        "brackets": [
            {"i":1, "j":3, "rhs": [{"k":1, "c":"1"}]},
            {"i":1, "j":4, "rhs": [{"k":2, "c":"-1"}]},
            {"i":2, "j":3, "rhs": [{"k":2, "c":"1"}]},
            {"i":2, "j":4, "rhs": [{"k":1, "c":"1"}]}
        ],
        "parameters": []
    }"#;

    pub(crate) const TYPE8: &str = r#"{
        "dim": 5, "name": "Type8",
        "brackets": [
            {"i":2, "j":5, "rhs": [{"k":1, "c":"1"}]},
            {"i":3, "j":5, "rhs": [{"k":3, "c":"1"}]},
            {"i":4, "j":5, "rhs": [{"k":4, "c":"u"}]}
        ],
        "parameters": ["u"]
    }"#;

    fn tan(algebra: &LieAlgebra, text: &str) -> ExteriorElement {
        parse_element(text, Space::Tangent, algebra.dim()).unwrap()
    }

    #[test]
    fn parses_the_degree_one_nilpotent_table() {
        let alg = parse_algebra(TYPE1).unwrap();
        assert_eq!(alg.dim(), 4);
        assert_eq!(alg.bracket_pairs().count(), 2);
        assert_eq!(alg.bracket_basis(2, 4), tan(&alg, "y1"));
        assert_eq!(alg.bracket_basis(4, 2), tan(&alg, "-y1"));
    }

    #[test]
    fn empty_bracket_list_is_abelian() {
        let alg = parse_algebra(r#"{"dim":3,"brackets":[],"parameters":[]}"#).unwrap();
        assert_eq!(alg.dim(), 3);
        assert!(alg.bracket_basis(1, 2).is_zero());
        assert!(alg.validate().is_valid());
    }

    #[test]
    fn parses_a_parametric_five_dimensional_table() {
        let alg = parse_algebra(TYPE8).unwrap();
        assert_eq!(alg.dim(), 5);
        assert_eq!(alg.parameters(), ["u"]);
        assert_eq!(alg.bracket_basis(4, 5), tan(&alg, "u*y4"));
    }

    #[test]
    fn rejects_duplicates_and_bad_indices() {
        let dup = r#"{"dim":3,"brackets":[
            {"i":1,"j":2,"rhs":[{"k":3,"c":"1"}]},
            {"i":1,"j":2,"rhs":[{"k":3,"c":"2"}]}
        ],"parameters":[]}"#;
        assert!(matches!(parse_algebra(dup), Err(Error::Parse { .. })));
        let oob = r#"{"dim":3,"brackets":[{"i":1,"j":5,"rhs":[{"k":1,"c":"1"}]}],"parameters":[]}"#;
        assert!(matches!(
            parse_algebra(oob),
            Err(Error::IndexOutOfRange { index: 5, dim: 3 })
        ));
        let undeclared =
            r#"{"dim":3,"brackets":[{"i":1,"j":2,"rhs":[{"k":1,"c":"t"}]}],"parameters":[]}"#;
        assert!(matches!(parse_algebra(undeclared), Err(Error::Parse { .. })));
    }

    #[test]
    fn fixture_tables_satisfy_jacobi() {
        for text in [TYPE1, TYPE2, TYPE8, TYPE12] {
            let alg = parse_algebra(text).unwrap();
            let report = alg.validate();
            assert!(report.is_valid(), "unexpected violations: {report}");
        }
    }

    #[test]
    fn jacobi_violation_is_detected_with_residual() {
        let broken = r#"{"dim":3,"brackets":[
            {"i":1,"j":2,"rhs":[{"k":3,"c":"1"}]},
            {"i":1,"j":3,"rhs":[{"k":1,"c":"1"}]}
        ],"parameters":[]}"#;
        let alg = parse_algebra(broken).unwrap();
        let report = alg.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].triple, (1, 2, 3));
        assert_eq!(report.violations[0].residual, tan(&alg, "-y3"));
    }

    #[test]
    fn bracket_examples() {
        let type1 = parse_algebra(TYPE1).unwrap();
        let y = |i| ExteriorElement::generator(Space::Tangent, 4, i).unwrap();
        assert_eq!(type1.bracket(&y(2), &y(4)).unwrap(), tan(&type1, "y1"));
        assert!(type1.bracket(&y(1), &y(1)).unwrap().is_zero());

        let type2 = parse_algebra(TYPE2).unwrap();
        assert_eq!(type2.bracket(&y(1), &y(4)).unwrap(), tan(&type2, "a*y1"));
        assert!(type2.validate().is_valid());
    }

    #[test]
    fn bracket_rejects_higher_degrees() {
        let alg = parse_algebra(TYPE1).unwrap();
        let two = tan(&alg, "y1^y2");
        let one = tan(&alg, "y3");
        assert!(matches!(
            alg.bracket(&two, &one),
            Err(Error::DegreeMismatch(_))
        ));
    }

    #[test]
    fn bracket_antisymmetry_on_all_basis_pairs() {
        for text in [TYPE1, TYPE2, TYPE8] {
            let alg = parse_algebra(text).unwrap();
            for i in 1..=alg.dim() {
                for j in 1..=alg.dim() {
                    let ab = alg.bracket_basis(i, j);
                    let ba = alg.bracket_basis(j, i);
                    assert!(ab.add(&ba).unwrap().is_zero());
                }
            }
        }
    }
}
