//! Flat twists `D_φ = d + φ` of the invariant complex.

use std::fmt;

use num_traits::One;

use crate::cohomology::{verdicts, VerdictReport};
use crate::complex::{BiDifferentialComplex, ComplexError};
use crate::exterior::{Form, Monomial};
use crate::linalg::Matrix;
use crate::presentation::{monomial_operator, GradedOperator, LieAlgebraPresentation};
use crate::scalar::Scalar;
use crate::symplectic::SymplecticOperators;

/// A connection form: an `r×r` matrix of 1-forms acting on a trivial
/// rank-`r` bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistConnection {
    pub label: String,
    pub rank: usize,
    /// `phi[a][b]`, row `a`, column `b`.
    pub phi: Vec<Vec<Form>>,
}

impl TwistConnection {
    pub fn rank_one(label: impl Into<String>, phi: Form) -> Self {
        TwistConnection { label: label.into(), rank: 1, phi: vec![vec![phi]] }
    }

    pub fn trivial(label: impl Into<String>, rank: usize) -> Self {
        TwistConnection { label: label.into(), rank, phi: vec![vec![Form::zero(); rank]; rank] }
    }
}

/// Nonzero entries of `dφ + φ∧φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessDiagnostic {
    pub label: String,
    pub residue: Vec<(usize, usize, Form)>,
}

impl fmt::Display for FlatnessDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "twist {} is not flat:", self.label)?;
        for (a, b, form) in &self.residue {
            write!(f, " (dφ+φ∧φ)[{},{}] = {};", a + 1, b + 1, form.to_expr())?;
        }
        Ok(())
    }
}

impl std::error::Error for FlatnessDiagnostic {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistError {
    #[error("{0}")]
    NotFlat(FlatnessDiagnostic),
    #[error("connection entries must be 1-forms over the generators (twist {0})")]
    Malformed(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

pub fn validate_flat(p: &LieAlgebraPresentation, t: &TwistConnection) -> Result<(), TwistError> {
    let r = t.rank;
    let shaped = t.phi.len() == r && t.phi.iter().all(|row| row.len() == r);
    let one_forms =
        t.phi.iter().flatten().all(|f| f.is_zero() || (f.homogeneous_degree() == Some(1) && f.max_index() <= p.n));
    if !shaped || !one_forms {
        return Err(TwistError::Malformed(t.label.clone()));
    }
    let mut residue = Vec::new();
    for a in 0..r {
        for b in 0..r {
            let mut f = p.d(&t.phi[a][b]);
            for c in 0..r {
                f = &f + &t.phi[a][c].wedge(&t.phi[c][b]);
            }
            if !f.is_zero() {
                residue.push((a, b, f));
            }
        }
    }
    if residue.is_empty() {
        Ok(())
    } else {
        Err(TwistError::NotFlat(FlatnessDiagnostic { label: t.label.clone(), residue }))
    }
}

/// `D_φ` on `∧•g* ⊗ K^r`; basis vector `m ⊗ v_b` has index `pos(m)·r + b`.
pub fn twisted_differential(
    p: &LieAlgebraPresentation,
    ops: &SymplecticOperators,
    t: &TwistConnection,
) -> GradedOperator {
    let r = t.rank;
    let basis = &ops.basis;
    let top = basis.n();
    let blocks = (0..=top)
        .map(|k| {
            let d = monomial_operator(basis, k, (k < top).then_some(k + 1), |m| p.d_monomial(m));
            let mut out = d.kron_identity(r);
            if k == top {
                return out;
            }
            for a in 0..r {
                for b in 0..r {
                    let phi = &t.phi[a][b];
                    if phi.is_zero() {
                        continue;
                    }
                    let wedge = monomial_operator(basis, k, Some(k + 1), |m: Monomial| {
                        phi.wedge(&Form::monomial(m, Scalar::one()))
                    });
                    for i in 0..wedge.rows() {
                        for j in 0..wedge.cols() {
                            let v = wedge.get(i, j);
                            if !num_traits::Zero::is_zero(v) {
                                out.add_to(i * r + a, j * r + b, v);
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    GradedOperator { shift: 1, blocks }
}

/// The twisted complex `(∧•g* ⊗ K^r, D_φ, D_φ^Λ)`. Also checks
/// `D_φ^Λ = (−1)^{k+1} ⋆ D_φ ⋆` in every degree.
pub fn twisted_complex(
    p: &LieAlgebraPresentation,
    ops: &SymplecticOperators,
    t: &TwistConnection,
) -> Result<BiDifferentialComplex, TwistError> {
    validate_flat(p, t)?;
    let d = twisted_differential(p, ops, t);
    let c = BiDifferentialComplex::symplectic(&d, ops, t.rank)?;
    let top = ops.dim();
    let star: Vec<Matrix> = ops.star.iter().map(|m| m.kron_identity(t.rank)).collect();
    for k in 1..=top {
        let sign = Scalar::from_integer(if k % 2 == 0 { -1 } else { 1 });
        let via_star = (&(&star[top - k + 1] * d.block(top - k)) * &star[k]).scale(&sign);
        if c.debar[k] != via_star {
            return Err(ComplexError::StarIdentity { degree: k as i64 }.into());
        }
    }
    Ok(c)
}

/// Twisted Lefschetz, Brylinski and `D_φD_φ^Λ`-lemma verdicts; Lefschetz
/// injectivity and surjectivity are reported separately.
pub fn twisted_verdicts(c: &BiDifferentialComplex) -> VerdictReport {
    verdicts(c)
}
