//! Serde document types for algebroids, representations, connections and
//! gauge maps, with conversion into the domain types.
//!
//! Polynomials are written as strings in the grammar of
//! [`parse_polynomial`]; conversion errors name the offending field.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebroid::{AlgebroidError, AlgebroidSpec};
use crate::cartan::{CartanError, ConnectionForm, GaugeMap, LForm};
use crate::exactpoly::{parse_polynomial, PolyError, PolyMatrix, Polynomial, Rational};
use crate::kuranishi::{KuranishiError, QMatrix, RepSpec, ScalarField, CQ};

/// Default cap on the total degree of input polynomials.
pub const DEFAULT_DEGREE_CAP: u32 = 12;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{path}: {source}")]
    Polynomial {
        path: String,
        #[source]
        source: PolyError,
    },
    #[error("{path}: total degree {degree} exceeds the cap of {cap}")]
    DegreeCap { path: String, degree: u32, cap: u32 },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Kuranishi(#[from] KuranishiError),
}

impl DocumentError {
    /// Whether the error is a malformed document rather than a failed
    /// mathematical check.
    pub fn is_parse_error(&self) -> bool {
        match self {
            DocumentError::Polynomial { .. }
            | DocumentError::DegreeCap { .. }
            | DocumentError::Shape(_) => true,
            DocumentError::Algebroid(e) => !matches!(e, AlgebroidError::Rejected { .. }),
            DocumentError::Cartan(e) => !matches!(e, CartanError::NotInverse(_)),
            DocumentError::Kuranishi(e) => matches!(
                e,
                KuranishiError::Dimension(_)
                    | KuranishiError::NotLieAlgebra(_)
                    | KuranishiError::ComplexEntryInRealRep
            ),
        }
    }
}

struct PolyReader {
    num_vars: usize,
    cap: u32,
}

impl PolyReader {
    fn poly(&self, text: &str, path: impl Fn() -> String) -> Result<Polynomial, DocumentError> {
        let p = parse_polynomial(text, self.num_vars).map_err(|source| DocumentError::Polynomial {
            path: path(),
            source,
        })?;
        if p.total_degree() > self.cap {
            return Err(DocumentError::DegreeCap {
                path: path(),
                degree: p.total_degree(),
                cap: self.cap,
            });
        }
        Ok(p)
    }

    fn matrix(&self, rows: &[Vec<String>], m: usize, path: &str) -> Result<PolyMatrix, DocumentError> {
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(DocumentError::Shape(format!("{path}: expected a {m}×{m} matrix")));
        }
        let mut out = Vec::with_capacity(m);
        for (i, row) in rows.iter().enumerate() {
            let mut r = Vec::with_capacity(m);
            for (j, s) in row.iter().enumerate() {
                r.push(self.poly(s, || format!("{path}[{i}][{j}]"))?);
            }
            out.push(r);
        }
        Ok(PolyMatrix::from_rows(out, self.num_vars))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidDoc {
    pub num_vars: usize,
    pub rank: usize,
    pub anchor: Vec<Vec<String>>,
    #[serde(default)]
    pub bracket: Vec<BracketDoc>,
}

impl AlgebroidDoc {
    pub fn to_spec(&self, degree_cap: u32) -> Result<AlgebroidSpec, DocumentError> {
        let reader = PolyReader {
            num_vars: self.num_vars,
            cap: degree_cap,
        };
        if self.anchor.len() != self.rank {
            return Err(DocumentError::Shape(format!(
                "anchor: expected {} rows, found {}",
                self.rank,
                self.anchor.len()
            )));
        }
        let mut anchor = Vec::with_capacity(self.rank);
        for (i, row) in self.anchor.iter().enumerate() {
            if row.len() != self.num_vars {
                return Err(DocumentError::Shape(format!(
                    "anchor[{i}]: expected {} entries, found {}",
                    self.num_vars,
                    row.len()
                )));
            }
            let mut r = Vec::with_capacity(row.len());
            for (j, s) in row.iter().enumerate() {
                r.push(reader.poly(s, || format!("anchor[{i}][{j}]"))?);
            }
            anchor.push(r);
        }
        let mut brackets = Vec::with_capacity(self.bracket.len());
        for (n, b) in self.bracket.iter().enumerate() {
            if b.coeffs.len() != self.rank {
                return Err(DocumentError::Shape(format!(
                    "bracket[{n}].coeffs: expected {} entries, found {}",
                    self.rank,
                    b.coeffs.len()
                )));
            }
            let mut c = Vec::with_capacity(self.rank);
            for (k, s) in b.coeffs.iter().enumerate() {
                c.push(reader.poly(s, || format!("bracket[{n}].coeffs[{k}]"))?);
            }
            brackets.push(((b.i, b.j), c));
        }
        Ok(AlgebroidSpec::new(self.num_vars, self.rank, anchor, brackets)?)
    }

    /// Document describing `spec`.
    pub fn from_spec(spec: &AlgebroidSpec) -> Self {
        AlgebroidDoc {
            num_vars: spec.num_vars(),
            rank: spec.rank(),
            anchor: spec
                .anchor()
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect(),
            bracket: spec
                .brackets()
                .iter()
                .map(|(&(i, j), c)| BracketDoc {
                    i,
                    j,
                    coeffs: c.iter().map(ToString::to_string).collect(),
                })
                .collect(),
        }
    }
}

/// A matrix entry: a rational string, or `[re, im]` for a complex entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryDoc {
    Real(String),
    Complex([String; 2]),
}

fn parse_rational(text: &str, path: &str) -> Result<Rational, DocumentError> {
    let p = parse_polynomial(text, 0).map_err(|source| DocumentError::Polynomial {
        path: path.to_string(),
        source,
    })?;
    Ok(p.as_constant().expect("polynomials in zero variables are constants"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDoc {
    pub lie_algebra: AlgebroidDoc,
    #[serde(rename = "dim_V")]
    pub dim_v: usize,
    #[serde(default = "default_field")]
    pub scalar_field: ScalarField,
    pub rho: Vec<Vec<Vec<EntryDoc>>>,
}

fn default_field() -> ScalarField {
    ScalarField::Real
}

impl RepDoc {
    pub fn to_rep(&self, degree_cap: u32) -> Result<RepSpec, DocumentError> {
        let algebra = self.lie_algebra.to_spec(degree_cap)?;
        let m = self.dim_v;
        let mut rho = Vec::with_capacity(self.rho.len());
        for (n, mat) in self.rho.iter().enumerate() {
            if mat.len() != m || mat.iter().any(|r| r.len() != m) {
                return Err(DocumentError::Shape(format!("rho[{n}]: expected a {m}×{m} matrix")));
            }
            let mut rows = Vec::with_capacity(m);
            for (i, row) in mat.iter().enumerate() {
                let mut r = Vec::with_capacity(m);
                for (j, e) in row.iter().enumerate() {
                    let path = format!("rho[{n}][{i}][{j}]");
                    r.push(match e {
                        EntryDoc::Real(s) => CQ::new(parse_rational(s, &path)?, Rational::zero()),
                        EntryDoc::Complex([re, im]) => {
                            CQ::new(parse_rational(re, &path)?, parse_rational(im, &path)?)
                        }
                    });
                }
                rows.push(r);
            }
            rho.push(QMatrix::from_rows(rows)?);
        }
        Ok(RepSpec::new(algebra, rho, self.scalar_field)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaComponentDoc {
    pub basis_index: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionDoc {
    #[serde(rename = "dim_E")]
    pub dim_e: usize,
    pub alpha: Vec<AlphaComponentDoc>,
}

impl ConnectionDoc {
    pub fn to_connection(&self, spec: &AlgebroidSpec, degree_cap: u32) -> Result<ConnectionForm, DocumentError> {
        let reader = PolyReader {
            num_vars: spec.num_vars(),
            cap: degree_cap,
        };
        let m = self.dim_e;
        if m == 0 {
            return Err(DocumentError::Shape("dim_E must be at least 1".into()));
        }
        let mut comps = Vec::with_capacity(self.alpha.len());
        for (n, c) in self.alpha.iter().enumerate() {
            if c.basis_index >= spec.rank() {
                return Err(DocumentError::Shape(format!(
                    "alpha[{n}].basis_index: {} is not below the rank {}",
                    c.basis_index,
                    spec.rank()
                )));
            }
            comps.push((vec![c.basis_index], reader.matrix(&c.matrix, m, &format!("alpha[{n}].matrix"))?));
        }
        let alpha = LForm::from_components(spec.rank(), spec.num_vars(), 1, (m, m), comps)?;
        Ok(ConnectionForm::new(alpha)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeDoc {
    pub phi: Vec<Vec<String>>,
    pub phi_inv: Vec<Vec<String>>,
}

impl GaugeDoc {
    pub fn to_gauge(&self, num_vars: usize, degree_cap: u32) -> Result<GaugeMap, DocumentError> {
        let reader = PolyReader {
            num_vars,
            cap: degree_cap,
        };
        let m = self.phi.len();
        let phi = reader.matrix(&self.phi, m, "phi")?;
        let phi_inv = reader.matrix(&self.phi_inv, m, "phi_inv")?;
        Ok(GaugeMap::new(phi, phi_inv)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson_doc() -> AlgebroidDoc {
        AlgebroidDoc {
            num_vars: 2,
            rank: 2,
            anchor: vec![vec!["0".into(), "x0".into()], vec!["-x0".into(), "0".into()]],
            bracket: vec![BracketDoc {
                i: 0,
                j: 1,
                coeffs: vec!["1".into(), "0".into()],
            }],
        }
    }

    #[test]
    fn algebroid_round_trip() {
        let spec = poisson_doc().to_spec(DEFAULT_DEGREE_CAP).unwrap();
        assert!(spec.validate().is_valid());
        assert_eq!(AlgebroidDoc::from_spec(&spec), poisson_doc());
    }

    #[test]
    fn errors_name_the_field() {
        let mut doc = poisson_doc();
        doc.anchor[1][0] = "-x0 +".into();
        let err = doc.to_spec(DEFAULT_DEGREE_CAP).unwrap_err();
        assert!(err.is_parse_error());
        assert!(err.to_string().starts_with("anchor[1][0]"), "{err}");
        doc.anchor[1][0] = "x0^13".into();
        assert!(matches!(
            doc.to_spec(DEFAULT_DEGREE_CAP),
            Err(DocumentError::DegreeCap { degree: 13, .. })
        ));
    }

    #[test]
    fn complex_entries() {
        let doc = RepDoc {
            lie_algebra: AlgebroidDoc {
                num_vars: 0,
                rank: 1,
                anchor: vec![vec![]],
                bracket: vec![],
            },
            dim_v: 1,
            scalar_field: ScalarField::Complex,
            rho: vec![vec![vec![EntryDoc::Complex(["0".into(), "1/2".into()])]]],
        };
        let rep = doc.to_rep(DEFAULT_DEGREE_CAP).unwrap();
        assert!(!rep.rho()[0].is_real());
        let real = RepDoc {
            scalar_field: ScalarField::Real,
            ..doc
        };
        assert!(real.to_rep(DEFAULT_DEGREE_CAP).unwrap_err().is_parse_error());
    }
}
