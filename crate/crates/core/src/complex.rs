//! Bounded bi-differential graded complexes `(A•, ∂, ∂̄)` with `∂` of degree
//! +1 and `∂̄` of degree −1, stored as one matrix per degree.

use std::fmt;

use crate::linalg::Matrix;
use crate::presentation::{ce_differential_in, GradedOperator, LieAlgebraPresentation};
use crate::scalar::Scalar;
use crate::symplectic::{commutator_with_lambda, SymplecticOperators, SymplecticStructure};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{which}² ≠ 0 starting in degree {degree}")]
    NotDifferential { which: &'static str, degree: i64 },
    #[error("∂∂̄ + ∂̄∂ ≠ 0 in degree {degree}")]
    NotAnticommuting { degree: i64 },
    #[error("subcomplex not closed under {which}: basis vector {label} in degree {degree} maps outside")]
    NotClosed { which: &'static str, degree: i64, label: String },
    #[error("twisted identity D^Λ = (−1)^(k+1) ⋆D⋆ fails in degree {degree}")]
    StarIdentity { degree: i64 },
    #[error("raw complex: {0}")]
    Syntax(String),
}

/// Lefschetz operator carried by complexes of symplectic origin: `l[k]`
/// maps degree `k` to `k + 2`, and `middle` is `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzData {
    pub middle: usize,
    pub l: Vec<Matrix>,
}

impl LefschetzData {
    /// `L^j` on degree `k` as a matrix into degree `k + 2j`.
    pub fn power(&self, dims: &[usize], k: usize, j: usize) -> Matrix {
        let mut m = Matrix::identity(dims[k]);
        for step in 0..j {
            m = &self.l[k + 2 * step] * &m;
        }
        m
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BiDifferentialComplex {
    /// Degree of index 0; only used for labelling.
    pub min_degree: i64,
    pub dims: Vec<usize>,
    /// `del[k]`: `A^k → A^{k+1}`.
    pub del: Vec<Matrix>,
    /// `debar[k]`: `A^k → A^{k−1}`.
    pub debar: Vec<Matrix>,
    pub labels: Option<Vec<Vec<String>>>,
    pub lefschetz: Option<LefschetzData>,
}

impl fmt::Debug for BiDifferentialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiDifferentialComplex {{ min_degree: {}, dims: {:?} }}", self.min_degree, self.dims)
    }
}

impl BiDifferentialComplex {
    /// Checks shapes, `∂² = ∂̄² = 0` and anticommutation.
    pub fn new(dims: Vec<usize>, del: Vec<Matrix>, debar: Vec<Matrix>) -> Result<Self, ComplexError> {
        let c = BiDifferentialComplex { min_degree: 0, dims, del, debar, labels: None, lefschetz: None };
        c.validate()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    fn dim_at(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            self.dims.get(k as usize).copied().unwrap_or(0)
        }
    }

    /// `∂: A^k → A^{k+1}`, including the zero maps at the boundary.
    pub fn del_from(&self, k: i64) -> Matrix {
        if k < 0 || k as usize >= self.len() {
            return Matrix::zeros(self.dim_at(k + 1), self.dim_at(k));
        }
        self.del[k as usize].clone()
    }

    /// `∂̄: A^k → A^{k−1}`.
    pub fn debar_from(&self, k: i64) -> Matrix {
        if k < 0 || k as usize >= self.len() {
            return Matrix::zeros(self.dim_at(k - 1), self.dim_at(k));
        }
        self.debar[k as usize].clone()
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        let top = self.len();
        if self.del.len() != top || self.debar.len() != top {
            return Err(ComplexError::Shape("one ∂ and one ∂̄ block per degree".into()));
        }
        for k in 0..top as i64 {
            let (d, b) = (&self.del[k as usize], &self.debar[k as usize]);
            if d.rows() != self.dim_at(k + 1) || d.cols() != self.dim_at(k) {
                return Err(ComplexError::Shape(format!("∂ block {k} is {}x{}", d.rows(), d.cols())));
            }
            if b.rows() != self.dim_at(k - 1) || b.cols() != self.dim_at(k) {
                return Err(ComplexError::Shape(format!("∂̄ block {k} is {}x{}", b.rows(), b.cols())));
            }
        }
        for k in 0..top as i64 {
            let degree = k + self.min_degree;
            if !(&self.del_from(k + 1) * &self.del_from(k)).is_zero() {
                return Err(ComplexError::NotDifferential { which: "∂", degree });
            }
            if !(&self.debar_from(k - 1) * &self.debar_from(k)).is_zero() {
                return Err(ComplexError::NotDifferential { which: "∂̄", degree });
            }
            let a = &self.del_from(k - 1) * &self.debar_from(k);
            let b = &self.debar_from(k + 1) * &self.del_from(k);
            if !(&a + &b).is_zero() {
                return Err(ComplexError::NotAnticommuting { degree });
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != top || labels.iter().zip(&self.dims).any(|(l, &d)| l.len() != d) {
                return Err(ComplexError::Shape("one label per basis vector".into()));
            }
        }
        Ok(())
    }

    /// `(∧•g* ⊗ K^r, D, [D, Λ])` for a differential `D` acting on the
    /// fiber-tensored space, with `Λ` and `L` acting on the form factor.
    pub fn symplectic(d: &GradedOperator, ops: &SymplecticOperators, rank: usize) -> Result<Self, ComplexError> {
        let top = ops.dim();
        let lambda =
            GradedOperator { shift: -2, blocks: ops.lambda.blocks.iter().map(|m| m.kron_identity(rank)).collect() };
        let debar = commutator_with_lambda(d, &lambda);
        let mut labels = Vec::new();
        for k in 0..=top {
            let mut row = Vec::new();
            for m in ops.basis.degree(k) {
                for a in 0..rank {
                    row.push(if rank == 1 { m.short_label() } else { format!("{}⊗v{}", m.short_label(), a + 1) });
                }
            }
            labels.push(row);
        }
        let c = BiDifferentialComplex {
            min_degree: 0,
            dims: (0..=top).map(|k| ops.basis.dim(k) * rank).collect(),
            del: d.blocks.clone(),
            debar: debar.blocks,
            labels: Some(labels),
            lefschetz: Some(LefschetzData {
                middle: ops.n_half,
                l: ops.l.blocks.iter().map(|m| m.kron_identity(rank)).collect(),
            }),
        };
        c.validate()?;
        Ok(c)
    }

    /// The invariant complex `(∧•g*, d, d^Λ)` of a symplectic Lie algebra.
    pub fn from_presentation(p: &LieAlgebraPresentation, ops: &SymplecticOperators) -> Result<Self, ComplexError> {
        let d = ce_differential_in(p, &ops.basis);
        Self::symplectic(&d, ops, 1)
    }

    /// Restriction to coordinate subspaces: `keep[k]` lists the retained
    /// basis indices of degree `k`, which must span a subcomplex.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<Self, ComplexError> {
        assert_eq!(keep.len(), self.len());
        let label = |k: usize, j: usize| self.labels.as_ref().map_or_else(|| format!("#{j}"), |l| l[k][j].clone());
        let check = |m: &Matrix, k: usize, target: Option<usize>, which: &'static str| {
            let Some(t) = target else { return Ok(()) };
            for &j in &keep[k] {
                for i in 0..m.rows() {
                    if !num_traits::Zero::is_zero(m.get(i, j)) && !keep[t].contains(&i) {
                        return Err(ComplexError::NotClosed {
                            which,
                            degree: k as i64 + self.min_degree,
                            label: label(k, j),
                        });
                    }
                }
            }
            Ok(())
        };
        let top = self.len();
        for k in 0..top {
            check(&self.del[k], k, (k + 1 < top).then_some(k + 1), "∂")?;
            check(&self.debar[k], k, k.checked_sub(1), "∂̄")?;
            if let Some(lf) = &self.lefschetz {
                check(&lf.l[k], k, (k + 2 < top).then_some(k + 2), "L")?;
            }
        }
        let sub = |m: &Matrix, rows: &[usize], cols: &[usize]| {
            let mut out = Matrix::zeros(rows.len(), cols.len());
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    out.set(i, j, m.get(r, c).clone());
                }
            }
            out
        };
        let empty: Vec<usize> = Vec::new();
        let rows_of = |t: Option<usize>| t.map_or(&empty, |t| &keep[t]);
        let del = (0..top).map(|k| sub(&self.del[k], rows_of((k + 1 < top).then_some(k + 1)), &keep[k])).collect();
        let debar = (0..top).map(|k| sub(&self.debar[k], rows_of(k.checked_sub(1)), &keep[k])).collect();
        let lefschetz = self.lefschetz.as_ref().map(|lf| LefschetzData {
            middle: lf.middle,
            l: (0..top).map(|k| sub(&lf.l[k], rows_of((k + 2 < top).then_some(k + 2)), &keep[k])).collect(),
        });
        let labels = self
            .labels
            .as_ref()
            .map(|l| (0..top).map(|k| keep[k].iter().map(|&j| l[k][j].clone()).collect()).collect());
        let c = BiDifferentialComplex {
            min_degree: self.min_degree,
            dims: keep.iter().map(Vec::len).collect(),
            del,
            debar,
            labels,
            lefschetz,
        };
        c.validate()?;
        Ok(c)
    }
}

/// Builds the invariant symplectic complex of `p` with respect to `s`.
pub fn symplectic_complex(
    p: &LieAlgebraPresentation,
    s: &SymplecticStructure,
) -> Result<BiDifferentialComplex, ComplexError> {
    BiDifferentialComplex::from_presentation(p, &SymplecticOperators::new(s))
}

/// Reads a raw complex:
///
/// ```text
/// # comment
/// min_degree 0
/// dims 1 2 1
/// del 0
///   1
///   0
/// debar 2
///   0 1
/// ```
///
/// `del k` is followed by the row-major entries of `A^k → A^{k+1}` and
/// `debar k` by those of `A^k → A^{k−1}`; omitted blocks are zero. Entries
/// are whitespace-separated exact scalars such as `3`, `-1/2`, `1/2+3/4i`.
pub fn parse_raw_complex(text: &str) -> Result<BiDifferentialComplex, ComplexError> {
    let syntax = |msg: String| ComplexError::Syntax(msg);
    let mut tokens = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace).peekable();
    let mut min_degree = 0i64;
    let mut dims: Option<Vec<usize>> = None;
    let mut del: Vec<Option<Matrix>> = Vec::new();
    let mut debar: Vec<Option<Matrix>> = Vec::new();
    while let Some(tok) = tokens.next() {
        match tok {
            "min_degree" => {
                let v = tokens.next().ok_or_else(|| syntax("min_degree needs a value".into()))?;
                min_degree = v.parse().map_err(|_| syntax(format!("bad min_degree `{v}`")))?;
            }
            "dims" => {
                let mut ds = Vec::new();
                while let Some(t) = tokens.peek() {
                    match t.parse::<usize>() {
                        Ok(d) => {
                            ds.push(d);
                            tokens.next();
                        }
                        Err(_) => break,
                    }
                }
                del = vec![None; ds.len()];
                debar = vec![None; ds.len()];
                dims = Some(ds);
            }
            "del" | "debar" => {
                let ds = dims.as_ref().ok_or_else(|| syntax("`dims` must come first".into()))?;
                let v = tokens.next().ok_or_else(|| syntax(format!("{tok} needs a degree")))?;
                let k: i64 = v.parse().map_err(|_| syntax(format!("bad degree `{v}`")))?;
                let idx = k - min_degree;
                if idx < 0 || idx as usize >= ds.len() {
                    return Err(syntax(format!("degree {k} out of range")));
                }
                let idx = idx as usize;
                let target = if tok == "del" { idx as i64 + 1 } else { idx as i64 - 1 };
                let rows = if target < 0 { 0 } else { ds.get(target as usize).copied().unwrap_or(0) };
                let cols = ds[idx];
                let mut m = Matrix::zeros(rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        let t = tokens.next().ok_or_else(|| syntax(format!("{tok} {k}: too few entries")))?;
                        let v: Scalar = t.parse().map_err(|_| syntax(format!("bad entry `{t}`")))?;
                        m.set(i, j, v);
                    }
                }
                let slot = if tok == "del" { &mut del[idx] } else { &mut debar[idx] };
                if slot.replace(m).is_some() {
                    return Err(syntax(format!("{tok} {k} given twice")));
                }
            }
            other => return Err(syntax(format!("unexpected token `{other}`"))),
        }
    }
    let dims = dims.ok_or_else(|| syntax("missing `dims`".into()))?;
    let top = dims.len();
    let at = |k: i64| if k < 0 { 0 } else { dims.get(k as usize).copied().unwrap_or(0) };
    let del = del
        .into_iter()
        .enumerate()
        .map(|(k, m)| m.unwrap_or_else(|| Matrix::zeros(at(k as i64 + 1), dims[k])))
        .collect();
    let debar = debar
        .into_iter()
        .enumerate()
        .map(|(k, m)| m.unwrap_or_else(|| Matrix::zeros(at(k as i64 - 1), dims[k])))
        .collect();
    debug_assert_eq!(top, dims.len());
    let mut c = BiDifferentialComplex::new(dims, del, debar)?;
    c.min_degree = min_degree;
    Ok(c)
}
