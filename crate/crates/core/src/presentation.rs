//! Lie algebras given by the differentials of their dual generators, and the
//! Chevalley–Eilenberg complex they induce.

use std::fmt;

use num_traits::One;

use crate::exterior::{Form, GradedBasis, Monomial};
use crate::linalg::Matrix;
use crate::parse::{parse_structure_equations, ParseError};
use crate::poly::ParamForm;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    Rational,
    Gaussian,
}

/// `d e^k` for each generator `e^1..e^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebraPresentation {
    pub name: String,
    pub n: usize,
    pub field_tag: FieldTag,
    pub d_of_generator: Vec<Form>,
}

impl LieAlgebraPresentation {
    pub fn new(name: impl Into<String>, d_of_generator: Vec<Form>) -> Self {
        let gaussian = d_of_generator.iter().any(|f| f.terms().any(|(_, c)| !c.is_real()));
        LieAlgebraPresentation {
            name: name.into(),
            n: d_of_generator.len(),
            field_tag: if gaussian { FieldTag::Gaussian } else { FieldTag::Rational },
            d_of_generator,
        }
    }

    /// The abelian algebra of dimension `n`.
    pub fn abelian(n: usize) -> Self {
        Self::new(format!("{n}g1"), vec![Form::zero(); n])
    }

    /// `d` on one monomial via the graded Leibniz rule.
    pub fn d_monomial(&self, m: Monomial) -> Form {
        let indices = m.indices();
        let mut out = Form::zero();
        for (pos, &g) in indices.iter().enumerate() {
            let dg = &self.d_of_generator[g - 1];
            if dg.is_zero() {
                continue;
            }
            let left = Monomial::from_sorted(&indices[..pos]).expect("sorted");
            let right = Monomial::from_sorted(&indices[pos + 1..]).expect("sorted");
            let mut term = Form::monomial(left, Scalar::one()).wedge(dg);
            term = term.wedge(&Form::monomial(right, Scalar::one()));
            if pos % 2 == 1 {
                term = -&term;
            }
            out = &out + &term;
        }
        out
    }

    pub fn d(&self, form: &Form) -> Form {
        let mut out = Form::zero();
        for (m, c) in form.terms() {
            out = &out + &self.d_monomial(*m).scale(c);
        }
        out
    }
}

/// Presentation with coefficients polynomial in named parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricPresentation {
    pub name: String,
    pub params: Vec<String>,
    pub d_of_generator: Vec<ParamForm>,
}

impl ParametricPresentation {
    pub fn n(&self) -> usize {
        self.d_of_generator.len()
    }

    pub fn instantiate(&self, values: &[Scalar]) -> LieAlgebraPresentation {
        assert_eq!(values.len(), self.params.len(), "one value per parameter");
        LieAlgebraPresentation::new(
            self.name.clone(),
            self.d_of_generator.iter().map(|f| f.instantiate(values)).collect(),
        )
    }
}

/// Parses structure equations without parameters.
pub fn parse_structure(text: &str, n: usize) -> Result<LieAlgebraPresentation, ParseError> {
    let eqs = parse_structure_equations(text, n, &[])?;
    Ok(LieAlgebraPresentation::new("", eqs.iter().map(|f| f.instantiate(&[])).collect()))
}

pub fn parse_parametric_structure(
    text: &str,
    n: usize,
    params: &[String],
) -> Result<ParametricPresentation, ParseError> {
    Ok(ParametricPresentation {
        name: String::new(),
        params: params.to_vec(),
        d_of_generator: parse_structure_equations(text, n, params)?,
    })
}

/// Matrix of a linear map on the exterior algebra, given on monomials, from
/// degree `k` to degree `target`.
pub fn monomial_operator(
    basis: &GradedBasis,
    k: usize,
    target: Option<usize>,
    mut f: impl FnMut(Monomial) -> Form,
) -> Matrix {
    let cols = basis.dim(k);
    let Some(t) = target.filter(|&t| t <= basis.n()) else {
        return Matrix::zeros(0, cols);
    };
    let mut m = Matrix::zeros(basis.dim(t), cols);
    for (j, mono) in basis.degree(k).iter().enumerate() {
        for (image, c) in f(*mono).terms() {
            debug_assert_eq!(image.degree(), t, "operator leaves its target degree");
            let i = basis.index_of(*image).expect("image within basis");
            m.set(i, j, c.clone());
        }
    }
    m
}

/// One matrix per source degree `0..=n`; block `k` maps `∧^k` to
/// `∧^{k+shift}` (zero-row blocks where the target is out of range).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedOperator {
    pub shift: i32,
    pub blocks: Vec<Matrix>,
}

impl GradedOperator {
    pub fn from_monomials(basis: &GradedBasis, shift: i32, mut f: impl FnMut(Monomial) -> Form) -> Self {
        let blocks = (0..=basis.n())
            .map(|k| {
                let t = k as i64 + shift as i64;
                let target = (t >= 0).then_some(t as usize);
                monomial_operator(basis, k, target, &mut f)
            })
            .collect();
        GradedOperator { shift, blocks }
    }

    pub fn block(&self, k: usize) -> &Matrix {
        &self.blocks[k]
    }
}

/// The Chevalley–Eilenberg differential in the lexicographic monomial basis.
pub fn ce_differential(p: &LieAlgebraPresentation) -> GradedOperator {
    let basis = GradedBasis::new(p.n);
    ce_differential_in(p, &basis)
}

pub fn ce_differential_in(p: &LieAlgebraPresentation, basis: &GradedBasis) -> GradedOperator {
    GradedOperator::from_monomials(basis, 1, |m| p.d_monomial(m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationDiagnostic {
    /// `d e^k` is not a 2-form, or refers to a generator above `n`.
    Malformed { generator: usize, form: Form },
    /// `d(d e^k) ≠ 0`.
    NotNilpotent { generator: usize, residue: Form },
}

impl fmt::Display for PresentationDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationDiagnostic::Malformed { generator, form } => {
                write!(f, "d e{generator} = {} is not a 2-form over the generators", form.to_expr())
            }
            PresentationDiagnostic::NotNilpotent { generator, residue } => {
                write!(f, "d² ≠ 0 at generator e{generator}: d(d e{generator}) = {}", residue.to_expr())
            }
        }
    }
}

/// Checks `d∘d = 0` on every generator; returns every failure found.
pub fn validate_presentation(p: &LieAlgebraPresentation) -> Result<(), Vec<PresentationDiagnostic>> {
    let mut problems = Vec::new();
    for (k, form) in p.d_of_generator.iter().enumerate() {
        let well_formed = form.is_zero() || (form.homogeneous_degree() == Some(2) && form.max_index() <= p.n);
        if !well_formed {
            problems.push(PresentationDiagnostic::Malformed { generator: k + 1, form: form.clone() });
        }
    }
    if problems.is_empty() {
        for (k, form) in p.d_of_generator.iter().enumerate() {
            let residue = p.d(form);
            if !residue.is_zero() {
                problems.push(PresentationDiagnostic::NotNilpotent { generator: k + 1, residue });
            }
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}

/// True when every block of `d∘d` vanishes.
pub fn squares_to_zero(d: &GradedOperator) -> bool {
    d.blocks.windows(2).all(|w| (&w[1] * &w[0]).is_zero())
}
