//! Symplectic forms on a Lie algebra and the operators they induce:
//! `L`, `Λ`, `H`, `⋆_ω`, `d^Λ`, and the primitive decomposition.
//!
//! Sign conventions. The Poisson bivector `π` has Gram matrix equal to the
//! inverse of the Gram matrix of `ω` and `Λ = −ι_π`; with the contraction
//! convention of [`interior_product`] this gives `[Λ, L] = H` with
//! `H = n − k` on `k`-forms. The volume form is `ωⁿ/n!`, the normalisation
//! under which `⋆_ω` is an involution.

use num_traits::{One, Zero};

use crate::exterior::{interior_product, Bivector, Form, GradedBasis, Monomial};
use crate::linalg::{determinant, kernel, solve, Matrix, Subspace};
use crate::presentation::{GradedOperator, LieAlgebraPresentation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymplecticError {
    #[error("symplectic form needs an even-dimensional algebra, got dimension {0}")]
    OddDimension(usize),
    #[error("omega must be a 2-form over e1..e{n}")]
    NotTwoForm { n: usize },
    #[error("not closed: d omega = {0}")]
    NotClosed(String),
    #[error("degenerate: Gram rank {rank} of {dim}")]
    Degenerate { rank: usize, dim: usize },
}

#[derive(Debug, Clone)]
pub struct SymplecticStructure {
    omega: Form,
    dim: usize,
    n_half: usize,
    gram: Matrix,
    pi: Bivector,
    omega_top: Form,
    volume: Form,
}

/// `ω(X_i, X_j)` as an antisymmetric matrix.
pub fn gram_matrix(omega: &Form, dim: usize) -> Matrix {
    let mut g = Matrix::zeros(dim, dim);
    for (m, c) in omega.terms() {
        let idx = m.indices();
        let (i, j) = (idx[0] - 1, idx[1] - 1);
        g.set(i, j, c.clone());
        g.set(j, i, -c);
    }
    g
}

pub fn build_symplectic(p: &LieAlgebraPresentation, omega: &Form) -> Result<SymplecticStructure, SymplecticError> {
    let dim = p.n;
    if dim % 2 == 1 {
        return Err(SymplecticError::OddDimension(dim));
    }
    if !(omega.is_zero() || omega.homogeneous_degree() == Some(2)) || omega.max_index() > dim {
        return Err(SymplecticError::NotTwoForm { n: dim });
    }
    let d_omega = p.d(omega);
    if !d_omega.is_zero() {
        return Err(SymplecticError::NotClosed(d_omega.to_expr()));
    }
    let gram = gram_matrix(omega, dim);
    let rank = gram.rank();
    if rank < dim {
        return Err(SymplecticError::Degenerate { rank, dim });
    }
    let inv = crate::linalg::inverse(&gram).expect("full rank");
    let mut pi = Bivector::zero();
    for i in 0..dim {
        for j in i + 1..dim {
            pi.add_term(i + 1, j + 1, inv.get(i, j));
        }
    }
    let n_half = dim / 2;
    let omega_top = omega.wedge_power(n_half);
    let factorial: Scalar = (1..=n_half as i64).map(Scalar::from_integer).product();
    let volume = omega_top.scale(&factorial.inv().expect("nonzero"));
    Ok(SymplecticStructure { omega: omega.clone(), dim, n_half, gram, pi, omega_top, volume })
}

impl SymplecticStructure {
    pub fn omega(&self) -> &Form {
        &self.omega
    }

    /// Dimension `2n` of the underlying space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_half(&self) -> usize {
        self.n_half
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn pi(&self) -> &Bivector {
        &self.pi
    }

    /// `ωⁿ`.
    pub fn omega_top(&self) -> &Form {
        &self.omega_top
    }

    /// `ωⁿ/n!`.
    pub fn volume(&self) -> &Form {
        &self.volume
    }

    pub fn lefschetz_l(&self, a: &Form) -> Form {
        self.omega.wedge(a)
    }

    pub fn dual_lefschetz_lambda(&self, a: &Form) -> Form {
        -&interior_product(&self.pi, a)
    }

    /// `(ω⁻¹)^k(e^I, e^J) = det(π(e^{i_a}, e^{j_b}))` on two monomials of
    /// equal degree.
    pub fn pairing(&self, a: Monomial, b: Monomial) -> Scalar {
        let (ia, ib) = (a.indices(), b.indices());
        if ia.len() != ib.len() {
            return Scalar::zero();
        }
        if ia.is_empty() {
            return Scalar::one();
        }
        let rows: Vec<Vec<Scalar>> = ia.iter().map(|&i| ib.iter().map(|&j| self.pi.pair(i, j)).collect()).collect();
        determinant(&Matrix::from_rows(rows))
    }
}

pub fn lefschetz_l(s: &SymplecticStructure, a: &Form) -> Form {
    s.lefschetz_l(a)
}

pub fn dual_lefschetz_lambda(s: &SymplecticStructure, a: &Form) -> Form {
    s.dual_lefschetz_lambda(a)
}

/// Multiplies the degree-`k` part of `a` by `n − k`.
pub fn weight_h(a: &Form, n_half: usize) -> Form {
    let mut out = Form::zero();
    for (m, c) in a.terms() {
        let w = Scalar::from_integer(n_half as i64 - m.degree() as i64);
        out.add_term(*m, &(c * &w));
    }
    out
}

/// Matrices of `L`, `Λ`, `H` and `⋆_ω` in the lexicographic monomial basis.
#[derive(Debug, Clone)]
pub struct SymplecticOperators {
    pub basis: GradedBasis,
    pub n_half: usize,
    pub l: GradedOperator,
    pub lambda: GradedOperator,
    /// Block `k` maps `∧^k` to `∧^{2n−k}`.
    pub star: Vec<Matrix>,
}

impl SymplecticOperators {
    pub fn new(s: &SymplecticStructure) -> Self {
        let basis = GradedBasis::new(s.dim);
        let l = GradedOperator::from_monomials(&basis, 2, |m| s.lefschetz_l(&Form::monomial(m, Scalar::one())));
        let lambda =
            GradedOperator::from_monomials(&basis, -2, |m| s.dual_lefschetz_lambda(&Form::monomial(m, Scalar::one())));
        let star = (0..=s.dim).map(|k| star_block(s, &basis, k)).collect();
        SymplecticOperators { basis, n_half: s.n_half, l, lambda, star }
    }

    pub fn dim(&self) -> usize {
        self.basis.n()
    }

    pub fn h_block(&self, k: usize) -> Matrix {
        Matrix::identity(self.basis.dim(k)).scale(&Scalar::from_integer(self.n_half as i64 - k as i64))
    }

    /// `L^j` from degree `k` to degree `k + 2j`.
    pub fn l_power(&self, k: usize, j: usize) -> Matrix {
        let mut m = Matrix::identity(self.basis.dim(k));
        for step in 0..j {
            let from = k + 2 * step;
            if from > self.dim() {
                return Matrix::zeros(0, self.basis.dim(k));
            }
            m = self.l.block(from) * &m;
        }
        m
    }

    pub fn star_form(&self, a: &Form) -> Form {
        let mut out = Form::zero();
        for k in 0..=self.dim() {
            let part = a.component(k);
            if part.is_zero() {
                continue;
            }
            let v = self.star[k].apply(&self.basis.to_vector(&part, k));
            out = &out + &self.basis.from_vector(self.dim() - k, &v);
        }
        out
    }
}

/// Solves `α∧⋆β = (ω⁻¹)^k(α, β)·vol` for every basis pair in degree `k`.
fn star_block(s: &SymplecticStructure, basis: &GradedBasis, k: usize) -> Matrix {
    let top = basis.degree(s.dim)[0];
    let vol = s.volume.coefficient(top);
    let source = basis.degree(k);
    let target = basis.degree(s.dim - k);
    let mut wedge = Matrix::zeros(source.len(), target.len());
    for (i, a) in source.iter().enumerate() {
        for (j, g) in target.iter().enumerate() {
            if let Some((negative, _)) = a.wedge(*g) {
                wedge.set(i, j, if negative { -Scalar::one() } else { Scalar::one() });
            }
        }
    }
    let mut rhs = Matrix::zeros(source.len(), source.len());
    for (i, a) in source.iter().enumerate() {
        for (j, b) in source.iter().enumerate() {
            let p = s.pairing(*a, *b);
            if !p.is_zero() {
                rhs.set(i, j, &p * &vol);
            }
        }
    }
    solve(&wedge, &rhs).expect("wedge pairing is non-degenerate")
}

pub fn symplectic_star(s: &SymplecticStructure, a: &Form) -> Form {
    SymplecticOperators::new(s).star_form(a)
}

/// `d^Λ = dΛ − Λd`, block `k` mapping `∧^k` to `∧^{k−1}`.
pub fn d_lambda(ops: &SymplecticOperators, d: &GradedOperator) -> GradedOperator {
    commutator_with_lambda(d, &ops.lambda)
}

/// `[D, Λ] = DΛ − ΛD` for any degree +1 operator `D` and degree −2
/// operator `Λ` on the same graded space.
pub fn commutator_with_lambda(d: &GradedOperator, lambda: &GradedOperator) -> GradedOperator {
    let top = d.blocks.len() - 1;
    let blocks = (0..=top)
        .map(|k| {
            let cols = d.block(k).cols();
            if k == 0 {
                return Matrix::zeros(0, cols);
            }
            let mut m = Matrix::zeros(d.block(k - 1).cols(), cols);
            if k >= 2 {
                m = &m + &(d.block(k - 2) * lambda.block(k));
            }
            if k < top {
                m = &m - &(lambda.block(k + 1) * d.block(k));
            }
            m
        })
        .collect();
    GradedOperator { shift: -1, blocks }
}

/// `a = Σ_j L^j p_j` with every `p_j` primitive (`Λ p_j = 0`); only the
/// nonzero components are returned, ordered by `j`.
pub fn primitive_decomposition(ops: &SymplecticOperators, a: &Form) -> Vec<(usize, Form)> {
    let Some(k) = a.homogeneous_degree() else {
        assert!(a.is_zero(), "primitive decomposition needs a homogeneous form");
        return Vec::new();
    };
    let mut columns = Vec::new();
    let mut owners = Vec::new();
    for j in 0..=k / 2 {
        let m = k - 2 * j;
        if m > ops.n_half {
            continue;
        }
        let primitives: Subspace = kernel(ops.lambda.block(m));
        let lift = ops.l_power(m, j);
        for b in primitives.basis() {
            columns.push(lift.apply(b));
            owners.push((j, m, b.clone()));
        }
    }
    let target = ops.basis.to_vector(a, k);
    let system = Matrix::from_columns(target.len(), &columns);
    let rhs = Matrix::from_columns(target.len(), &[target]);
    let coeffs = solve(&system, &rhs).expect("Lefschetz decomposition exists");
    let mut out: Vec<(usize, Form)> = Vec::new();
    for (idx, (j, m, b)) in owners.iter().enumerate() {
        let c = coeffs.get(idx, 0);
        if c.is_zero() {
            continue;
        }
        let piece = ops.basis.from_vector(*m, b).scale(c);
        match out.iter_mut().find(|(jj, _)| jj == j) {
            Some((_, f)) => *f = &*f + &piece,
            None => out.push((*j, piece)),
        }
    }
    out.retain(|(_, f)| !f.is_zero());
    out
}
