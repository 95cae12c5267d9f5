use crate::exactpoly::{PolyMatrix, Polynomial, Rational};

use super::{AlgebroidError, AlgebroidSpec, SectionExpr};

/// Parameters for the standard algebroid constructions.
#[derive(Debug, Clone)]
pub enum ExampleKind {
    /// `TM` over ℝⁿ with the identity anchor.
    Tangent { num_vars: usize },
    /// A Lie algebra as an algebroid over a point; brackets `[e_i, e_j]`, `i < j`.
    LieAlgebra {
        rank: usize,
        brackets: Vec<((usize, usize), Vec<Rational>)>,
    },
    /// Rank one algebroid `L_X` with anchor `X`.
    VectorField { field: Vec<Polynomial> },
    /// Action algebroid of an infinitesimal action `ζ`; `fields[i] = ζ(e_i)`.
    Action {
        algebra: AlgebroidSpec,
        fields: Vec<Vec<Polynomial>>,
    },
    /// `TM ⊕ ℝ` twisted by a closed 2-form; entries `ω(∂_i, ∂_j)`, `i < j`.
    TwoForm {
        num_vars: usize,
        form: Vec<((usize, usize), Polynomial)>,
    },
    /// Cotangent algebroid of a bivector; entries `π(dx_i, dx_j)`, `i < j`.
    Poisson {
        num_vars: usize,
        bivector: Vec<((usize, usize), Polynomial)>,
    },
    /// Deformation of `base` by a Nijenhuis tensor; `N e_i = Σ_k tensor[k][i] e_k`.
    Nijenhuis {
        base: AlgebroidSpec,
        tensor: PolyMatrix,
    },
    /// `TM ⊕ (M × 𝔤)` with componentwise brackets.
    TrivialProduct {
        num_vars: usize,
        algebra: AlgebroidSpec,
    },
}

fn rejected(reason: impl Into<String>, residual: Vec<Polynomial>) -> AlgebroidError {
    AlgebroidError::Rejected {
        reason: reason.into(),
        residual,
    }
}

fn vector_field_bracket(x: &[Polynomial], y: &[Polynomial]) -> Vec<Polynomial> {
    let n = x.len();
    (0..n)
        .map(|l| {
            let mut acc = Polynomial::zero(x[l].num_vars());
            for j in 0..n {
                acc = &acc + &(&x[j] * &y[l].partial(j).unwrap());
                acc = &acc - &(&y[j] * &x[l].partial(j).unwrap());
            }
            acc
        })
        .collect()
}

fn antisymmetric(
    n: usize,
    entries: &[((usize, usize), Polynomial)],
) -> Result<Vec<Vec<Polynomial>>, AlgebroidError> {
    let mut m = vec![vec![Polynomial::zero(n); n]; n];
    for ((i, j), p) in entries {
        let (i, j) = (*i, *j);
        if i >= j || j >= n {
            return Err(AlgebroidError::BadPair { i, j });
        }
        if p.num_vars() != n {
            return Err(AlgebroidError::Dimension("entry variables".into()));
        }
        m[i][j] = p.clone();
        m[j][i] = -p;
    }
    Ok(m)
}

fn lift_constants(algebra: &AlgebroidSpec, n: usize, offset: usize, rank: usize) -> Vec<((usize, usize), Vec<Polynomial>)> {
    algebra
        .brackets()
        .iter()
        .map(|(&(i, j), c)| {
            let mut v = vec![Polynomial::zero(n); rank];
            for (k, ck) in c.iter().enumerate() {
                v[offset + k] = ck.extend_vars(n);
            }
            ((offset + i, offset + j), v)
        })
        .collect()
}

fn finish(spec: AlgebroidSpec) -> Result<AlgebroidSpec, AlgebroidError> {
    let report = spec.validate();
    if let Some(f) = report.anchor_failures.first() {
        return Err(rejected(
            format!("anchor morphism fails on ({}, {})", f.i, f.j),
            f.residual.clone(),
        ));
    }
    if let Some(f) = report.jacobi_failures.first() {
        return Err(rejected(
            format!("Jacobi identity fails on {:?}", f.triple),
            f.residual.clone(),
        ));
    }
    Ok(spec)
}

fn require_point_algebra(algebra: &AlgebroidSpec) -> Result<(), AlgebroidError> {
    if algebra.num_vars() != 0 {
        return Err(AlgebroidError::Dimension(
            "the Lie algebra must live over a point".into(),
        ));
    }
    finish(algebra.clone()).map(|_| ())
}

/// Builds one of the standard example algebroids and validates it.
pub fn construct_example(kind: &ExampleKind) -> Result<AlgebroidSpec, AlgebroidError> {
    match kind {
        ExampleKind::Tangent { num_vars } => {
            let n = *num_vars;
            let anchor = PolyMatrix::identity(n, n);
            let rows = (0..n).map(|i| (0..n).map(|j| anchor[(i, j)].clone()).collect()).collect();
            finish(AlgebroidSpec::new(n, n, rows, [])?)
        }
        ExampleKind::LieAlgebra { rank, brackets } => {
            let b = brackets.iter().map(|(pair, c)| {
                (*pair, c.iter().map(|x| Polynomial::constant(0, x.clone())).collect())
            });
            finish(AlgebroidSpec::new(0, *rank, vec![Vec::new(); *rank], b)?)
        }
        ExampleKind::VectorField { field } => {
            let n = field.len();
            finish(AlgebroidSpec::new(n, 1, vec![field.clone()], [])?)
        }
        ExampleKind::Action { algebra, fields } => {
            require_point_algebra(algebra)?;
            let r = algebra.rank();
            if fields.len() != r {
                return Err(AlgebroidError::Dimension(format!("need {r} vector fields")));
            }
            let n = fields[0].len();
            if fields.iter().any(|f| f.len() != n || f.iter().any(|p| p.num_vars() != n)) {
                return Err(AlgebroidError::Dimension("vector field shape".into()));
            }
            // ζ must intertwine brackets. A left action gives an anti-homomorphism,
            // which is a homomorphism from the opposite algebra.
            let mismatch = |sign: i64| -> Option<Vec<Polynomial>> {
                for i in 0..r {
                    for j in (i + 1)..r {
                        let lhs = vector_field_bracket(&fields[i], &fields[j]);
                        let c = algebra.structure(i, j);
                        let res: Vec<Polynomial> = (0..n)
                            .map(|l| {
                                let mut acc = lhs[l].clone();
                                for (k, ck) in c.iter().enumerate() {
                                    let t = &ck.extend_vars(n) * &fields[k][l];
                                    acc = if sign > 0 { &acc - &t } else { &acc + &t };
                                }
                                acc
                            })
                            .collect();
                        if res.iter().any(|p| !p.is_zero()) {
                            return Some(res);
                        }
                    }
                }
                None
            };
            let sign = match mismatch(1) {
                None => 1,
                Some(res) => match mismatch(-1) {
                    None => -1,
                    Some(_) => return Err(rejected("ζ is not a Lie algebra homomorphism", res)),
                },
            };
            let brackets = lift_constants(algebra, n, 0, r).into_iter().map(|(pair, c)| {
                let c = if sign > 0 { c } else { c.into_iter().map(|p| -p).collect() };
                (pair, c)
            });
            finish(AlgebroidSpec::new(n, r, fields.clone(), brackets)?)
        }
        ExampleKind::TwoForm { num_vars, form } => {
            let n = *num_vars;
            let omega = antisymmetric(n, form)?;
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        let d = &(&omega[j][k].partial(i).unwrap() + &omega[k][i].partial(j).unwrap())
                            + &omega[i][j].partial(k).unwrap();
                        if !d.is_zero() {
                            return Err(rejected(format!("dω ≠ 0 on ({i}, {j}, {k})"), vec![d]));
                        }
                    }
                }
            }
            let r = n + 1;
            let mut anchor = vec![vec![Polynomial::zero(n); n]; r];
            for (i, row) in anchor.iter_mut().enumerate().take(n) {
                row[i] = Polynomial::one(n);
            }
            let mut brackets = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut c = vec![Polynomial::zero(n); r];
                    c[n] = omega[i][j].clone();
                    brackets.push(((i, j), c));
                }
            }
            finish(AlgebroidSpec::new(n, r, anchor, brackets)?)
        }
        ExampleKind::Poisson { num_vars, bivector } => {
            let n = *num_vars;
            let pi = antisymmetric(n, bivector)?;
            if n >= 3 {
                for i in 0..n {
                    for j in (i + 1)..n {
                        for k in (j + 1)..n {
                            let mut s = Polynomial::zero(n);
                            for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                                for l in 0..n {
                                    s = &s + &(&pi[a][l] * &pi[b][c].partial(l).unwrap());
                                }
                            }
                            if !s.is_zero() {
                                return Err(rejected(
                                    format!("bivector fails the Jacobi condition on ({i}, {j}, {k})"),
                                    vec![s],
                                ));
                            }
                        }
                    }
                }
            }
            // a(dx_i) = Σ_j π(dx_i, dx_j) ∂_j,  [dx_i, dx_j] = d π(dx_i, dx_j)
            let mut brackets = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let c: Vec<Polynomial> = (0..n).map(|k| pi[i][j].partial(k).unwrap()).collect();
                    brackets.push(((i, j), c));
                }
            }
            finish(AlgebroidSpec::new(n, n, pi, brackets)?)
        }
        ExampleKind::Nijenhuis { base, tensor } => {
            finish(base.clone())?;
            let r = base.rank();
            let n = base.num_vars();
            if tensor.shape() != (r, r) || tensor.num_vars() != n {
                return Err(AlgebroidError::Dimension(format!("tensor must be {r}×{r}")));
            }
            let apply = |s: &SectionExpr| -> SectionExpr {
                SectionExpr::new(
                    (0..r)
                        .map(|k| {
                            let mut acc = Polynomial::zero(n);
                            for i in 0..r {
                                acc = &acc + &(&tensor[(k, i)] * &s.components[i]);
                            }
                            acc
                        })
                        .collect(),
                )
            };
            let br = |a: &SectionExpr, b: &SectionExpr| base.section_bracket_unchecked(a, b);
            let basis = |i| SectionExpr::basis(r, n, i);
            let mut brackets = Vec::new();
            for i in 0..r {
                for j in (i + 1)..r {
                    let (ei, ej) = (basis(i), basis(j));
                    let (ni, nj) = (apply(&ei), apply(&ej));
                    let torsion = br(&ni, &nj)
                        .sub(&apply(&br(&ni, &ej)))
                        .sub(&apply(&br(&ei, &nj)))
                        .add(&apply(&apply(&br(&ei, &ej))));
                    if !torsion.is_zero() {
                        return Err(rejected(
                            format!("Nijenhuis torsion nonzero on ({i}, {j})"),
                            torsion.components,
                        ));
                    }
                    let c = br(&ni, &ej).add(&br(&ei, &nj)).sub(&apply(&br(&ei, &ej)));
                    brackets.push(((i, j), c.components));
                }
            }
            let anchor = (0..r).map(|i| base.anchor_field(&apply(&basis(i)))).collect();
            finish(AlgebroidSpec::new(n, r, anchor, brackets)?)
        }
        ExampleKind::TrivialProduct { num_vars, algebra } => {
            require_point_algebra(algebra)?;
            let n = *num_vars;
            let r = n + algebra.rank();
            let mut anchor = vec![vec![Polynomial::zero(n); n]; r];
            for (i, row) in anchor.iter_mut().enumerate().take(n) {
                row[i] = Polynomial::one(n);
            }
            finish(AlgebroidSpec::new(n, r, anchor, lift_constants(algebra, n, n, r))?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, parse_polynomial};

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    fn aff1() -> AlgebroidSpec {
        construct_example(&ExampleKind::LieAlgebra {
            rank: 2,
            brackets: vec![((0, 1), vec![int(0), int(1)])],
        })
        .unwrap()
    }

    #[test]
    fn poisson_bracket_and_anchor() {
        let spec = construct_example(&ExampleKind::Poisson {
            num_vars: 2,
            bivector: vec![((0, 1), p("x0", 2))],
        })
        .unwrap();
        assert_eq!(spec.anchor()[0], vec![p("0", 2), p("x0", 2)]);
        assert_eq!(spec.anchor()[1], vec![p("-x0", 2), p("0", 2)]);
        assert_eq!(spec.structure(0, 1), &[p("1", 2), p("0", 2)]);
    }

    #[test]
    fn poisson_jacobi_checked_in_three_dims() {
        // linear bivector of so(3)*: {x0, x1} = x2 and cyclic
        let ok = construct_example(&ExampleKind::Poisson {
            num_vars: 3,
            bivector: vec![
                ((0, 1), p("x2", 3)),
                ((1, 2), p("x0", 3)),
                ((0, 2), p("-x1", 3)),
            ],
        });
        assert!(ok.is_ok());
        let bad = construct_example(&ExampleKind::Poisson {
            num_vars: 3,
            bivector: vec![((0, 1), p("x0", 3)), ((0, 2), p("-1", 3))],
        });
        assert!(matches!(bad, Err(AlgebroidError::Rejected { .. })));
    }

    #[test]
    fn constant_nijenhuis_on_tangent_plane() {
        let base = construct_example(&ExampleKind::Tangent { num_vars: 2 }).unwrap();
        let tensor = PolyMatrix::from_rows(vec![vec![p("1", 2), p("0", 2)], vec![p("0", 2), p("2", 2)]], 2);
        let spec = construct_example(&ExampleKind::Nijenhuis { base, tensor }).unwrap();
        assert!(spec.brackets().is_empty());
        assert_eq!(spec.anchor()[1], vec![p("0", 2), p("2", 2)]);
    }

    #[test]
    fn nijenhuis_torsion_rejected() {
        let base = construct_example(&ExampleKind::Tangent { num_vars: 2 }).unwrap();
        // diag(x1, x0): torsion (x1 − x0)(∂0 + ∂1)
        let tensor = PolyMatrix::from_rows(vec![vec![p("x1", 2), p("0", 2)], vec![p("0", 2), p("x0", 2)]], 2);
        let res = construct_example(&ExampleKind::Nijenhuis { base, tensor });
        assert!(matches!(res, Err(AlgebroidError::Rejected { .. })), "{res:?}");
    }

    #[test]
    fn unipotent_nijenhuis_has_a_bracket() {
        let base = construct_example(&ExampleKind::Tangent { num_vars: 2 }).unwrap();
        let tensor = PolyMatrix::from_rows(vec![vec![p("1", 2), p("0", 2)], vec![p("x1", 2), p("1", 2)]], 2);
        let spec = construct_example(&ExampleKind::Nijenhuis { base, tensor }).unwrap();
        assert_eq!(spec.anchor()[0], vec![p("1", 2), p("x1", 2)]);
        assert_eq!(spec.structure(0, 1), &[p("0", 2), p("-1", 2)]);
    }

    #[test]
    fn aff1_action_on_the_line() {
        let spec = construct_example(&ExampleKind::Action {
            algebra: aff1(),
            fields: vec![vec![p("x0", 1)], vec![p("1", 1)]],
        })
        .unwrap();
        assert_eq!(spec.anchor(), &[vec![p("x0", 1)], vec![p("1", 1)]]);
        // the given ζ reverses brackets, so the opposite algebra acts
        assert_eq!(spec.structure(0, 1), &[p("0", 1), p("-1", 1)]);
        assert!(spec.validate().is_valid());
    }

    #[test]
    fn non_homomorphic_action_rejected() {
        let res = construct_example(&ExampleKind::Action {
            algebra: aff1(),
            fields: vec![vec![p("x0^2", 1)], vec![p("1", 1)]],
        });
        assert!(matches!(res, Err(AlgebroidError::Rejected { .. })));
    }

    #[test]
    fn two_form_and_product() {
        let spec = construct_example(&ExampleKind::TwoForm {
            num_vars: 2,
            form: vec![((0, 1), p("x0*x1 + 1", 2))],
        })
        .unwrap();
        assert_eq!(spec.rank(), 3);
        assert_eq!(spec.structure(0, 1)[2], p("x0*x1 + 1", 2));

        let not_closed = construct_example(&ExampleKind::TwoForm {
            num_vars: 3,
            form: vec![((0, 1), p("x2", 3))],
        });
        assert!(matches!(not_closed, Err(AlgebroidError::Rejected { .. })));

        let prod = construct_example(&ExampleKind::TrivialProduct {
            num_vars: 1,
            algebra: aff1(),
        })
        .unwrap();
        assert_eq!(prod.rank(), 3);
        assert_eq!(prod.structure(1, 2), &[p("0", 1), p("0", 1), p("1", 1)]);
    }

    #[test]
    fn vector_field_is_valid() {
        let spec = construct_example(&ExampleKind::VectorField {
            field: vec![p("x1", 2), p("-x0", 2)],
        })
        .unwrap();
        assert_eq!(spec.rank(), 1);
    }
}
