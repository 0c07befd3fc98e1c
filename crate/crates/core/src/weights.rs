//! Character-weighted presentations, the subcomplex of lattice-trivial
//! weights, and the untwisted nilpotent model.

use num_traits::{One, Zero};

use crate::complex::{BiDifferentialComplex, ComplexError, LefschetzData};
use crate::exterior::{Form, GradedBasis, Monomial};
use crate::linalg::Matrix;
use crate::presentation::{validate_presentation, GradedOperator, LieAlgebraPresentation};
use crate::scalar::Scalar;
use crate::symplectic::{commutator_with_lambda, SymplecticOperators, SymplecticStructure};

/// A basic character with its logarithmic derivative, a closed 1-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub name: String,
    pub derivative: Form,
}

/// Integer exponents over the declared basic characters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharacterWeight {
    pub exponents: Vec<i64>,
}

impl CharacterWeight {
    pub fn trivial(m: usize) -> Self {
        CharacterWeight { exponents: vec![0; m] }
    }

    pub fn add(&self, other: &CharacterWeight) -> CharacterWeight {
        CharacterWeight { exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect() }
    }

    /// `Σ_j exponent_j · λ_j`.
    pub fn derivative(&self, characters: &[Character]) -> Form {
        let mut out = Form::zero();
        for (e, c) in self.exponents.iter().zip(characters) {
            if *e != 0 {
                out = &out + &c.derivative.scale(&Scalar::from_integer(*e));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPresentation {
    pub base: LieAlgebraPresentation,
    pub characters: Vec<Character>,
    pub weight_of_generator: Vec<CharacterWeight>,
    /// Rows of `M`; a weight `w` is lattice-trivial iff `M·w = 0`.
    pub gamma_matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("character {name} has non-closed derivative: d = {residue}")]
    CharacterNotClosed { name: String, residue: String },
    #[error("weight data malformed: {0}")]
    Malformed(String),
    #[error("weighted differential does not square to zero on {monomial}: {residue}")]
    NotNilpotent { monomial: String, residue: String },
    #[error("omega is not lattice-trivial: monomial {0} has nontrivial weight")]
    OmegaNotTrivial(String),
    #[error("subcomplex not closed under {which}: {monomial} maps outside")]
    NotClosed { which: &'static str, monomial: String },
    #[error("untwisted differential: {0}")]
    Untwist(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl WeightedPresentation {
    /// Zero weights on every generator, no characters.
    pub fn unweighted(base: LieAlgebraPresentation) -> Self {
        let n = base.n;
        WeightedPresentation {
            base,
            characters: Vec::new(),
            weight_of_generator: vec![CharacterWeight::default(); n],
            gamma_matrix: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), WeightError> {
        let m = self.characters.len();
        if self.weight_of_generator.len() != self.base.n {
            return Err(WeightError::Malformed("one weight per generator".into()));
        }
        if self.weight_of_generator.iter().any(|w| w.exponents.len() != m)
            || self.gamma_matrix.iter().any(|row| row.len() != m)
        {
            return Err(WeightError::Malformed(format!("exponent vectors must have {m} entries")));
        }
        for c in &self.characters {
            let residue = self.base.d(&c.derivative);
            if !residue.is_zero() || !(c.derivative.is_zero() || c.derivative.homogeneous_degree() == Some(1)) {
                return Err(WeightError::CharacterNotClosed { name: c.name.clone(), residue: residue.to_expr() });
            }
        }
        Ok(())
    }

    pub fn weight_of(&self, m: Monomial) -> CharacterWeight {
        m.indices()
            .iter()
            .fold(CharacterWeight::trivial(self.characters.len()), |acc, &i| acc.add(&self.weight_of_generator[i - 1]))
    }

    pub fn is_gamma_trivial(&self, w: &CharacterWeight) -> bool {
        self.gamma_matrix.iter().all(|row| row.iter().zip(&w.exponents).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    /// `d_w(x_I) = λ_I ∧ x_I + d x_I`.
    pub fn d_weighted_monomial(&self, m: Monomial) -> Form {
        let lambda = self.weight_of(m).derivative(&self.characters);
        &lambda.wedge(&Form::monomial(m, Scalar::one())) + &self.base.d_monomial(m)
    }
}

/// The weighted differential on the full exterior algebra, checked to
/// square to zero.
pub fn weighted_differential(wp: &WeightedPresentation, basis: &GradedBasis) -> Result<GradedOperator, WeightError> {
    wp.validate()?;
    let d = GradedOperator::from_monomials(basis, 1, |m| wp.d_weighted_monomial(m));
    for k in 0..basis.n() {
        let sq = d.block(k + 1) * d.block(k);
        if let Some(j) = (0..sq.cols()).find(|&j| (0..sq.rows()).any(|i| !sq.get(i, j).is_zero())) {
            let m = basis.degree(k)[j];
            let residue = basis.from_vector(k + 2, &sq.column(j));
            return Err(WeightError::NotNilpotent { monomial: m.short_label(), residue: residue.to_expr() });
        }
    }
    Ok(d)
}

fn restrict_operator(
    op: &GradedOperator,
    keep: &[Vec<usize>],
    basis: &GradedBasis,
    which: &'static str,
) -> Result<Vec<Matrix>, WeightError> {
    let top = keep.len() - 1;
    let mut blocks = Vec::with_capacity(keep.len());
    for k in 0..=top {
        let t = k as i64 + op.shift as i64;
        let m = op.block(k);
        let rows: &[usize] = if t < 0 || t as usize > top { &[] } else { &keep[t as usize] };
        for &j in &keep[k] {
            for i in 0..m.rows() {
                if !m.get(i, j).is_zero() && !rows.contains(&i) {
                    return Err(WeightError::NotClosed { which, monomial: basis.degree(k)[j].short_label() });
                }
            }
        }
        let mut out = Matrix::zeros(rows.len(), keep[k].len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in keep[k].iter().enumerate() {
                out.set(a, b, m.get(i, j).clone());
            }
        }
        blocks.push(out);
    }
    Ok(blocks)
}

/// Indices, per degree, of the monomials with lattice-trivial weight.
pub fn gamma_trivial_monomials(wp: &WeightedPresentation, basis: &GradedBasis) -> Vec<Vec<usize>> {
    (0..=basis.n())
        .map(|k| {
            basis
                .degree(k)
                .iter()
                .enumerate()
                .filter(|(_, m)| wp.is_gamma_trivial(&wp.weight_of(**m)))
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

/// `(A_Γ, d_w, [d_w, Λ])`: the span of lattice-trivial monomials.
pub fn gamma_subcomplex(
    wp: &WeightedPresentation,
    s: &SymplecticStructure,
    ops: &SymplecticOperators,
) -> Result<BiDifferentialComplex, WeightError> {
    wp.validate()?;
    for m in s.omega().terms().map(|(m, _)| *m) {
        if !wp.is_gamma_trivial(&wp.weight_of(m)) {
            return Err(WeightError::OmegaNotTrivial(m.short_label()));
        }
    }
    let basis = &ops.basis;
    let d = weighted_differential(wp, basis)?;
    let keep = gamma_trivial_monomials(wp, basis);
    let del = restrict_operator(&d, &keep, basis, "d")?;
    let lambda = restrict_operator(&ops.lambda, &keep, basis, "Λ")?;
    let l = restrict_operator(&ops.l, &keep, basis, "L")?;
    let del = GradedOperator { shift: 1, blocks: del };
    let debar = commutator_with_lambda(&del, &GradedOperator { shift: -2, blocks: lambda });
    let labels = keep
        .iter()
        .enumerate()
        .map(|(k, idx)| idx.iter().map(|&i| basis.degree(k)[i].short_label()).collect())
        .collect();
    let c = BiDifferentialComplex {
        min_degree: 0,
        dims: keep.iter().map(Vec::len).collect(),
        del: del.blocks,
        debar: debar.blocks,
        labels: Some(labels),
        lefschetz: Some(LefschetzData { middle: ops.n_half, l }),
    };
    c.validate()?;
    Ok(c)
}

/// The presentation with `d_u e_k = d e_k + λ_k ∧ e_k`.
pub fn untwist(wp: &WeightedPresentation) -> Result<LieAlgebraPresentation, WeightError> {
    wp.validate()?;
    let d = (1..=wp.base.n)
        .map(|k| {
            let lambda = wp.weight_of_generator[k - 1].derivative(&wp.characters);
            &wp.base.d_of_generator[k - 1] + &lambda.wedge(&Form::generator(k))
        })
        .collect();
    let p = LieAlgebraPresentation::new(format!("{}~u", wp.base.name), d);
    validate_presentation(&p)
        .map_err(|errs| WeightError::Untwist(errs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")))?;
    Ok(p)
}
