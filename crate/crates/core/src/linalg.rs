//! Exact dense linear algebra over [`Scalar`]: echelon forms, kernels, images,
//! subspace lattice operations and quotients.
//!
//! Every [`Subspace`] keeps its basis in reduced row-echelon form (rows are the
//! basis vectors; read as columns this is the reduced column-echelon form), so
//! two subspaces are equal exactly when their stored bases are equal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("denominator is not contained in the numerator")]
    NotASubspace,
    #[error("vector does not lie in the numerator subspace")]
    NotInNumerator,
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a `rows × cols` matrix; used when there may be no columns.
    pub fn from_rows_shaped(rows: usize, cols: usize, entries: Vec<Vec<Scalar>>) -> Self {
        assert_eq!(entries.len(), rows);
        assert!(entries.iter().all(|row| row.len() == cols), "ragged rows");
        Matrix { rows, cols, data: entries.into_iter().flatten().collect() }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_integer(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal `self ⊗ I_r` style Kronecker product with the identity.
    pub fn kron_identity(&self, r: usize) -> Matrix {
        let mut out = Matrix::zeros(self.rows * r, self.cols * r);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                for a in 0..r {
                    out.set(i * r + a, j * r + a, v.clone());
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product shape")
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

/// Gauss-Jordan elimination of a list of equal-length rows in place.
/// Returns the pivot columns; zero rows are left at the bottom.
fn rref_rows(rows: &mut [Vec<Scalar>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r][col..].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let factor = other[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x -= &(&factor * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Reduced row-echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut rows = m.row_vecs();
    let pivots = rref_rows(&mut rows, m.cols);
    (Matrix::from_rows_shaped(m.rows, m.cols, rows), pivots)
}

/// A linear subspace of `K^ambient` with canonical basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient)?;
        f.debug_list().entries(self.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())).finish()
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_vectors(ambient, (0..ambient).map(|i| unit_vector(ambient, i)).collect())
    }

    /// Span of the given vectors.
    pub fn from_vectors(ambient: usize, mut vectors: Vec<Vec<Scalar>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length");
        let pivots = rref_rows(&mut vectors, ambient);
        vectors.truncate(pivots.len());
        Subspace { ambient, basis: vectors, pivots }
    }

    /// Column span of a matrix.
    pub fn column_span(m: &Matrix) -> Self {
        Subspace::from_vectors(m.rows(), m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    /// Subtracts the basis components at pivot positions; the result is zero
    /// iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, b) in out.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &(&c * b);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        Subspace::from_vectors(m.rows(), self.basis.iter().map(|v| m.apply(v)).collect())
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Null space of `m` inside `K^cols`.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, pivots) = rref(m);
    let mut vectors = Vec::new();
    let mut pivot_iter = pivots.iter().peekable();
    for free in 0..m.cols() {
        if pivot_iter.peek() == Some(&&free) {
            pivot_iter.next();
            continue;
        }
        let mut v = vec![Scalar::zero(); m.cols()];
        v[free] = Scalar::one();
        for (i, &p) in pivots.iter().enumerate() {
            let x = r.get(i, free);
            if !x.is_zero() {
                v[p] = -x;
            }
        }
        vectors.push(v);
    }
    Subspace::from_vectors(m.cols(), vectors)
}

/// Column space of `m` inside `K^rows`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::column_span(m)
}

pub fn sum(a: &Subspace, b: &Subspace) -> Subspace {
    assert_eq!(a.ambient, b.ambient, "ambient dimension");
    let vectors = a.basis.iter().chain(&b.basis).cloned().collect();
    Subspace::from_vectors(a.ambient, vectors)
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Subspace {
    assert_eq!(a.ambient, b.ambient, "ambient dimension");
    if a.dim() == 0 || b.dim() == 0 {
        return Subspace::zero(a.ambient);
    }
    // (x, y) with x·A = y·B; the kernel of [Aᵀ | -Bᵀ].
    let mut columns: Vec<Vec<Scalar>> = a.basis.clone();
    columns.extend(b.basis.iter().map(|v| v.iter().map(|x| -x).collect()));
    let k = kernel(&Matrix::from_columns(a.ambient, &columns));
    let vectors = k
        .basis
        .iter()
        .map(|coeffs| {
            let mut v = vec![Scalar::zero(); a.ambient];
            for (c, row) in coeffs.iter().zip(&a.basis) {
                if c.is_zero() {
                    continue;
                }
                for (x, r) in v.iter_mut().zip(row) {
                    *x += &(c * r);
                }
            }
            v
        })
        .collect();
    Subspace::from_vectors(a.ambient, vectors)
}

/// `numerator / denominator` with canonical representatives: the unique
/// complement of the denominator inside the numerator that vanishes on the
/// denominator's pivot coordinates, in reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub numerator: Subspace,
    pub denominator: Subspace,
    pub representatives: Subspace,
}

impl Quotient {
    pub fn new(numerator: Subspace, denominator: Subspace) -> Result<Self, LinalgError> {
        if numerator.ambient != denominator.ambient {
            return Err(LinalgError::Shape("quotient ambient dimensions differ".into()));
        }
        if !denominator.is_subspace_of(&numerator) {
            return Err(LinalgError::NotASubspace);
        }
        let reduced = numerator.basis.iter().map(|v| denominator.reduce(v)).collect();
        let representatives = Subspace::from_vectors(numerator.ambient, reduced);
        debug_assert_eq!(representatives.dim() + denominator.dim(), numerator.dim());
        Ok(Quotient { numerator, denominator, representatives })
    }

    pub fn dim(&self) -> usize {
        self.representatives.dim()
    }

    /// Coefficients `c` with `v ≡ Σ c_j r_j` modulo the denominator.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.numerator.ambient {
            return Err(LinalgError::Shape("vector length".into()));
        }
        let reduced = self.denominator.reduce(v);
        let coords: Vec<Scalar> = self.representatives.pivots.iter().map(|&p| reduced[p].clone()).collect();
        let mut residual = reduced;
        for (c, r) in coords.iter().zip(&self.representatives.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in residual.iter_mut().zip(r) {
                *x -= &(c * y);
            }
        }
        if residual.iter().all(Zero::is_zero) {
            Ok(coords)
        } else {
            Err(LinalgError::NotInNumerator)
        }
    }

    /// Whether `v` represents the zero class.
    pub fn is_zero_class(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        Ok(self.coordinates(v)?.iter().all(Zero::is_zero))
    }
}

/// Dimension and representatives of `numerator / denominator`.
pub fn quotient(numerator: &Subspace, denominator: &Subspace) -> Result<(usize, Subspace), LinalgError> {
    let q = Quotient::new(numerator.clone(), denominator.clone())?;
    Ok((q.dim(), q.representatives))
}

pub fn coordinates_in_quotient(
    vector: &[Scalar],
    numerator: &Subspace,
    denominator: &Subspace,
) -> Result<Vec<Scalar>, LinalgError> {
    Quotient::new(numerator.clone(), denominator.clone())?.coordinates(vector)
}

/// One solution `X` of `A·X = B`, or `None` when some column is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    let width = a.cols() + b.cols();
    let mut rows: Vec<Vec<Scalar>> =
        (0..a.rows()).map(|i| a.row(i).iter().chain(b.row(i)).cloned().collect()).collect();
    let pivots = rref_rows(&mut rows, width);
    if pivots.last().is_some_and(|&p| p >= a.cols()) {
        return None;
    }
    let mut x = Matrix::zeros(a.cols(), b.cols());
    for (i, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, rows[i][a.cols() + j].clone());
        }
    }
    Some(x)
}

/// Determinant by elimination; `m` must be square.
pub fn determinant(m: &Matrix) -> Scalar {
    assert_eq!(m.rows(), m.cols(), "determinant of non-square matrix");
    let n = m.rows();
    let mut rows = m.row_vecs();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !rows[i][col].is_zero()) else {
            return Scalar::zero();
        };
        if p != col {
            rows.swap(p, col);
            det = -det;
        }
        let pivot = rows[col][col].clone();
        det = &det * &pivot;
        let inv = pivot.inv().expect("nonzero pivot");
        let pivot_row = rows[col].clone();
        for row in rows.iter_mut().skip(col + 1) {
            let factor = &row[col] * &inv;
            if factor.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &(&factor * y);
            }
        }
    }
    det
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let x = solve(m, &Matrix::identity(m.rows()))?;
    ((m * &x) == Matrix::identity(m.rows())).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_integer(x)).collect()
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(kernel(&Matrix::identity(2)), Subspace::zero(2));
    }

    #[test]
    fn kernel_basis_is_annihilated() {
        let m = Matrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = kernel(&m);
        assert_eq!(k.dim(), 2);
        for b in k.basis() {
            assert!(m.apply(b).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn intersect_coordinate_planes() {
        let a = Subspace::from_vectors(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::from_vectors(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(intersect(&a, &b), Subspace::from_vectors(3, vec![v(&[0, 1, 0])]));
        assert_eq!(sum(&a, &b), Subspace::full(3));
    }

    #[test]
    fn quotient_by_a_line() {
        let num = Subspace::full(3);
        let den = Subspace::from_vectors(3, vec![v(&[1, 1, 0])]);
        let (dim, reps) = quotient(&num, &den).unwrap();
        assert_eq!(dim, 2);
        // representatives vanish on the denominator's pivot coordinate
        assert!(reps.basis().iter().all(|r| r[0].is_zero()));
        let c = coordinates_in_quotient(&v(&[3, 5, 7]), &num, &den).unwrap();
        assert_eq!(c, v(&[2, 7]));
    }

    #[test]
    fn quotient_errors() {
        let line = Subspace::from_vectors(3, vec![v(&[1, 0, 0])]);
        let other = Subspace::from_vectors(3, vec![v(&[0, 1, 0])]);
        assert_eq!(quotient(&line, &other).unwrap_err(), LinalgError::NotASubspace);
        assert_eq!(
            coordinates_in_quotient(&v(&[0, 0, 1]), &line, &Subspace::zero(3)).unwrap_err(),
            LinalgError::NotInNumerator
        );
    }

    #[test]
    fn solve_and_inverse() {
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert_eq!(determinant(&a), Scalar::one());
        let singular = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(inverse(&singular).is_none());
        assert!(solve(&singular, &Matrix::from_i64(&[&[1], &[0]])).is_none());
    }

    #[test]
    fn determinant_with_row_swap() {
        let m = Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(determinant(&m), Scalar::from_integer(-3));
    }
}
