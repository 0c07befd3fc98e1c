//! Random bi-differential complexes with known structure, and a brute-force
//! cohomology count over F_3.
//!
//! A complex is a direct sum of zigzags and squares with unit-ish integer
//! coefficients, conjugated in every degree by a random unimodular integer
//! matrix. Conjugation is invertible over both Q and F_3, so dimensions
//! counted over F_3 equal those over Q.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use symplex_core::{BiDifferentialComplex, Matrix};

type IntMatrix = Vec<Vec<i64>>;

fn zeros(rows: usize, cols: usize) -> IntMatrix {
    vec![vec![0; cols]; rows]
}

/// `a · b` where `b` is `inner × cols`.
fn matmul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for t in 0..inner {
            if row[t] == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += row[t] * b[t][j];
            }
        }
    }
    out
}

/// `del[k]` is `dims[k+1] × dims[k]`, `debar[k]` is `dims[k−1] × dims[k]`;
/// out-of-range targets have zero rows.
#[derive(Debug, Clone)]
pub struct IntComplex {
    pub dims: Vec<usize>,
    pub del: Vec<IntMatrix>,
    pub debar: Vec<IntMatrix>,
    /// Short description of the summands, for failure messages.
    pub summands: Vec<String>,
}

impl IntComplex {
    fn dim_at(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            self.dims.get(k as usize).copied().unwrap_or(0)
        }
    }

    /// `∂: A^k → A^{k+1}`, zero outside the range.
    pub fn del_from(&self, k: i64) -> IntMatrix {
        if k < 0 || k as usize >= self.dims.len() {
            return zeros(self.dim_at(k + 1), self.dim_at(k));
        }
        self.del[k as usize].clone()
    }

    pub fn debar_from(&self, k: i64) -> IntMatrix {
        if k < 0 || k as usize >= self.dims.len() {
            return zeros(self.dim_at(k - 1), self.dim_at(k));
        }
        self.debar[k as usize].clone()
    }

    pub fn to_core(&self) -> BiDifferentialComplex {
        let convert = |m: &IntMatrix, rows: usize, cols: usize| {
            let entries = m.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
            Matrix::from_rows_shaped(rows, cols, entries)
        };
        let top = self.dims.len() as i64;
        let del = (0..top).map(|k| convert(&self.del_from(k), self.dim_at(k + 1), self.dim_at(k))).collect();
        let debar = (0..top).map(|k| convert(&self.debar_from(k), self.dim_at(k - 1), self.dim_at(k))).collect();
        BiDifferentialComplex::new(self.dims.clone(), del, debar).expect("generated complex is valid")
    }
}

#[derive(Clone, Copy)]
enum Edge {
    Del,
    Debar,
}

/// Vertices carry a degree; edges `(from, to, kind, coefficient)`.
struct Block {
    degrees: Vec<usize>,
    edges: Vec<(usize, usize, Edge, i64)>,
    name: String,
}

fn coefficient(rng: &mut StdRng) -> i64 {
    *[1, -1, 2, -2].choose(rng).unwrap()
}

/// Vertices in degrees `start, start+1, …`; sources and sinks alternate, and
/// each source maps up by `∂` and down by `∂̄`.
fn zigzag(rng: &mut StdRng, start: usize, len: usize, source_first: bool) -> Block {
    let degrees: Vec<usize> = (start..start + len).collect();
    let mut edges = Vec::new();
    for i in 0..len.saturating_sub(1) {
        let source_here = (i % 2 == 0) == source_first;
        if source_here {
            edges.push((i, i + 1, Edge::Del, coefficient(rng)));
        } else {
            edges.push((i + 1, i, Edge::Debar, coefficient(rng)));
        }
    }
    let first = if source_first { "source" } else { "sink" };
    Block { degrees, edges, name: format!("zigzag({start}, len {len}, {first} first)") }
}

/// `x` in degree `k` with `∂x`, `∂̄x` and `∂∂̄x = −∂̄∂x` all nonzero.
fn square(rng: &mut StdRng, k: usize) -> Block {
    let u = *[1, -1].choose(rng).unwrap();
    let v = coefficient(rng);
    let w = coefficient(rng);
    // x, a = ∂x/u, b = ∂̄x/v, c = ∂b/w
    let degrees = vec![k, k + 1, k - 1, k];
    let edges =
        vec![(0, 1, Edge::Del, u), (0, 2, Edge::Debar, v), (2, 3, Edge::Del, w), (1, 3, Edge::Debar, -v * w * u)];
    Block { degrees, edges, name: format!("square({k})") }
}

fn random_block(rng: &mut StdRng, len: usize) -> Block {
    if len >= 3 && rng.gen_bool(0.25) {
        let k = rng.gen_range(1..len - 1);
        return square(rng, k);
    }
    let size = rng.gen_range(1..=len.min(5));
    let start = rng.gen_range(0..=len - size);
    let source_first = rng.gen_bool(0.5);
    zigzag(rng, start, size, source_first)
}

/// A random unimodular matrix and its inverse, as products of elementary
/// row operations.
fn unimodular(rng: &mut StdRng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut p = zeros(n, n);
    let mut q = zeros(n, n);
    for i in 0..n {
        p[i][i] = 1;
        q[i][i] = 1;
    }
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            p[0][0] = -1;
            q[0][0] = -1;
        }
        return (p, q);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        match rng.gen_range(0..3) {
            0 => {
                // P ← E·P with E = I + c·e_i e_jᵀ; Q ← Q·E⁻¹.
                let c = *[1, -1, 2, -2].choose(rng).unwrap();
                let source = p[j].clone();
                for (x, y) in p[i].iter_mut().zip(&source) {
                    *x += c * y;
                }
                for row in q.iter_mut() {
                    row[j] -= c * row[i];
                }
            }
            1 => {
                p.swap(i, j);
                for row in q.iter_mut() {
                    row.swap(i, j);
                }
            }
            _ => {
                for x in p[i].iter_mut() {
                    *x = -*x;
                }
                for row in q.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
    }
    debug_assert_eq!(matmul(&p, &q, n, n), {
        let mut id = zeros(n, n);
        (0..n).for_each(|i| id[i][i] = 1);
        id
    });
    (p, q)
}

/// A random complex of total dimension at most `max_total`, conjugated
/// degree-wise by unimodular matrices.
pub fn random_complex(rng: &mut StdRng, max_total: usize) -> IntComplex {
    let len = rng.gen_range(2..=6);
    let target = rng.gen_range(1..=max_total);
    let mut blocks = Vec::new();
    let mut total = 0;
    let mut attempts = 0;
    while total < target && attempts < 50 {
        attempts += 1;
        let b = random_block(rng, len);
        if total + b.degrees.len() <= max_total {
            total += b.degrees.len();
            blocks.push(b);
        }
    }

    let mut dims = vec![0; len];
    let mut position = Vec::new();
    for b in &blocks {
        let mut pos = Vec::new();
        for &k in &b.degrees {
            pos.push(dims[k]);
            dims[k] += 1;
        }
        position.push(pos);
    }
    let mut del: Vec<IntMatrix> = (0..len).map(|k| zeros(if k + 1 < len { dims[k + 1] } else { 0 }, dims[k])).collect();
    let mut debar: Vec<IntMatrix> = (0..len).map(|k| zeros(if k > 0 { dims[k - 1] } else { 0 }, dims[k])).collect();
    for (b, pos) in blocks.iter().zip(&position) {
        for &(from, to, kind, c) in &b.edges {
            let k = b.degrees[from];
            match kind {
                Edge::Del => del[k][pos[to]][pos[from]] = c,
                Edge::Debar => debar[k][pos[to]][pos[from]] = c,
            }
        }
    }

    let changes: Vec<(IntMatrix, IntMatrix)> = dims.iter().map(|&n| unimodular(rng, n)).collect();
    for k in 0..len {
        let (_, q) = &changes[k];
        if k + 1 < len {
            let (p, _) = &changes[k + 1];
            del[k] = matmul(&matmul(p, &del[k], dims[k + 1], dims[k]), q, dims[k], dims[k]);
        }
        if k > 0 {
            let (p, _) = &changes[k - 1];
            debar[k] = matmul(&matmul(p, &debar[k], dims[k - 1], dims[k]), q, dims[k], dims[k]);
        }
    }
    IntComplex { dims, del, debar, summands: blocks.into_iter().map(|b| b.name).collect() }
}

/// Number of solutions of `M v = 0` over F_3, as an exponent of 3, by
/// enumerating every vector.
pub fn kernel_dim_f3(m: &IntMatrix, cols: usize) -> usize {
    let rows = m.len();
    let columns: Vec<Vec<u8>> = (0..cols).map(|j| (0..rows).map(|i| m[i][j].rem_euclid(3) as u8).collect()).collect();
    let mut digits = vec![0u8; cols];
    let mut image = vec![0u8; rows];
    let mut count: u64 = 0;
    loop {
        if image.iter().all(|&x| x == 0) {
            count += 1;
        }
        // Odometer step; a digit wrapping 2 → 0 adds its column once more.
        let mut i = 0;
        loop {
            if i == cols {
                let mut dim = 0;
                while count > 1 {
                    assert_eq!(count % 3, 0, "kernel size is a power of 3");
                    count /= 3;
                    dim += 1;
                }
                return dim;
            }
            digits[i] = (digits[i] + 1) % 3;
            for (x, c) in image.iter_mut().zip(&columns[i]) {
                *x = (*x + c) % 3;
            }
            if digits[i] != 0 {
                break;
            }
            i += 1;
        }
    }
}

fn stack(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.iter().chain(b).cloned().collect()
}

fn beside(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.iter().zip(b).map(|(x, y)| x.iter().chain(y).copied().collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub dr: Vec<usize>,
    pub debar: Vec<usize>,
    pub bc: Vec<usize>,
    pub aeppli: Vec<usize>,
}

/// Every dimension as a kernel count over F_3; images via
/// `dim im M = cols − dim ker M`.
pub fn counts_f3(c: &IntComplex) -> Counts {
    let mut out = Counts { dr: vec![], debar: vec![], bc: vec![], aeppli: vec![] };
    for (k, &n) in c.dims.iter().enumerate() {
        let k = k as i64;
        let (below, above) = (c.dim_at(k - 1), c.dim_at(k + 1));
        let del_in = c.del_from(k - 1);
        let debar_in = c.debar_from(k + 1);
        let im_del = below - kernel_dim_f3(&del_in, below);
        let im_debar = above - kernel_dim_f3(&debar_in, above);
        let dd = matmul(&del_in, &c.debar_from(k), below, n);
        let ker_dd = kernel_dim_f3(&dd, n);
        let im_dd = n - ker_dd;
        let sum = beside(&del_in, &debar_in);
        let im_sum = below + above - kernel_dim_f3(&sum, below + above);

        out.dr.push(kernel_dim_f3(&c.del_from(k), n) - im_del);
        out.debar.push(kernel_dim_f3(&c.debar_from(k), n) - im_debar);
        out.bc.push(kernel_dim_f3(&stack(&c.del_from(k), &c.debar_from(k)), n) - im_dd);
        out.aeppli.push(ker_dd - im_sum);
    }
    out
}
