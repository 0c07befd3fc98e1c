//! Ranks over a large prime field, used as an oracle for cohomology
//! dimensions computed over the Gaussian rationals.

use num_traits::ToPrimitive;
use symplex_core::{BiDifferentialComplex, Matrix, Scalar};

/// `P ≡ 1 (mod 4)`, so `−1` has a square root.
pub const P: u64 = 1_000_000_009;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    assert!(a != 0, "division by zero mod p");
    pow(a, P - 2)
}

fn sqrt_minus_one() -> u64 {
    (2..).map(|g| pow(g, (P - 1) / 4)).find(|&r| mul(r, r) == P - 1).unwrap()
}

fn from_i64(n: i64) -> u64 {
    n.rem_euclid(P as i64) as u64
}

fn rational(numer: i64, denom: i64) -> u64 {
    mul(from_i64(numer), inv(from_i64(denom)))
}

pub fn reduce(s: &Scalar) -> u64 {
    let whole = |n: Option<i64>| n.expect("entry fits in i64");
    let re = rational(whole(s.re().numer().to_i64()), whole(s.re().denom().to_i64()));
    if s.is_real() {
        return re;
    }
    let im = rational(whole(s.im().numer().to_i64()), whole(s.im().denom().to_i64()));
    (re + mul(sqrt_minus_one(), im)) % P
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ModMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn of(m: &Matrix) -> Self {
        let mut out = ModMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.data[i * out.cols + j] = reduce(m.get(i, j));
            }
        }
        out
    }

    fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = ModMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.at(i, t);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let x = &mut out.data[i * rhs.cols + j];
                    *x = (*x + mul(a, rhs.at(t, j))) % P;
                }
            }
        }
        out
    }

    /// `[self; below]`.
    pub fn stack(&self, below: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        ModMatrix { rows: self.rows + below.rows, cols: self.cols, data }
    }

    /// `[self | right]`.
    pub fn beside(&self, right: &ModMatrix) -> ModMatrix {
        assert_eq!(self.rows, right.rows);
        let mut out = ModMatrix::zeros(self.rows, self.cols + right.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * out.cols + j] = self.at(i, j);
            }
            for j in 0..right.cols {
                out.data[i * out.cols + self.cols + j] = right.at(i, j);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r * cols + c] != 0) else { continue };
            for j in 0..cols {
                a.swap(rank * cols + j, p * cols + j);
            }
            let scale = inv(a[rank * cols + c]);
            for j in 0..cols {
                a[rank * cols + j] = mul(a[rank * cols + j], scale);
            }
            for r in 0..rows {
                let f = a[r * cols + c];
                if r == rank || f == 0 {
                    continue;
                }
                for j in 0..cols {
                    let sub = mul(f, a[rank * cols + j]);
                    a[r * cols + j] = (a[r * cols + j] + P - sub) % P;
                }
            }
            rank += 1;
        }
        rank
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims {
    pub dr: Vec<usize>,
    pub debar: Vec<usize>,
    pub bc: Vec<usize>,
    pub aeppli: Vec<usize>,
}

/// Cohomology dimensions from rank formulas alone.
pub fn dims(c: &BiDifferentialComplex) -> Dims {
    let del = |k: i64| ModMatrix::of(&c.del_from(k));
    let debar = |k: i64| ModMatrix::of(&c.debar_from(k));
    let mut out = Dims { dr: vec![], debar: vec![], bc: vec![], aeppli: vec![] };
    for (k, &n) in c.dims.iter().enumerate() {
        let k = k as i64;
        let dd = del(k - 1).mul(&debar(k));
        let dd_rank = dd.rank();
        out.dr.push(n - del(k).rank() - del(k - 1).rank());
        out.debar.push(n - debar(k).rank() - debar(k + 1).rank());
        out.bc.push(n - del(k).stack(&debar(k)).rank() - dd_rank);
        out.aeppli.push(n - dd_rank - del(k - 1).beside(&debar(k + 1)).rank());
    }
    out
}
