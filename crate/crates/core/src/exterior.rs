//! Exterior algebra over a space with at most 64 generators.
//!
//! A [`Monomial`] `e^{i1}∧…∧e^{ip}` is a bitmask (bit `i-1` for generator
//! `i`); a [`Form`] is a sparse map from monomials to scalars. Within a degree
//! monomials are ordered lexicographically on their sorted index lists, and
//! every matrix in the crate uses that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

pub const MAX_GENERATORS: usize = 64;

#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    /// Generator `e^i`, 1-based.
    pub fn generator(i: usize) -> Self {
        assert!((1..=MAX_GENERATORS).contains(&i), "generator index {i} out of range");
        Monomial(1u64 << (i - 1))
    }

    /// Monomial from strictly increasing 1-based indices.
    pub fn from_sorted(indices: &[usize]) -> Option<Self> {
        let mut bits = 0u64;
        let mut last = 0;
        for &i in indices {
            if i <= last || i > MAX_GENERATORS {
                return None;
            }
            bits |= 1u64 << (i - 1);
            last = i;
        }
        Some(Monomial(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1u64 << (i - 1)) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut bits = self.0;
        while bits != 0 {
            let t = bits.trailing_zeros() as usize;
            out.push(t + 1);
            bits &= bits - 1;
        }
        out
    }

    /// `self ∧ other` as `(sign, monomial)`, or `None` when they share an index.
    pub fn wedge(self, other: Monomial) -> Option<(bool, Monomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count inversions: pairs (i in self, j in other) with i > j
        let mut inversions = 0u32;
        let mut bits = other.0;
        while bits != 0 {
            let j = bits.trailing_zeros();
            let above = if j >= 63 { 0 } else { self.0 & !((1u64 << (j + 1)) - 1) };
            inversions += above.count_ones();
            bits &= bits - 1;
        }
        Some((inversions % 2 == 1, Monomial(self.0 | other.0)))
    }

    /// Contraction with the dual vector `X_i`: removes `i` with sign
    /// `(-1)^{#indices below i}`.
    pub fn contract(self, i: usize) -> Option<(bool, Monomial)> {
        if !self.contains(i) {
            return None;
        }
        let below = self.0 & ((1u64 << (i - 1)) - 1);
        Some((below.count_ones() % 2 == 1, Monomial(self.0 & !(1u64 << (i - 1)))))
    }

    /// Complement inside `{1..n}`.
    pub fn complement(self, n: usize) -> Monomial {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Monomial(full & !self.0)
    }

    /// Highest generator index, 0 for the unit.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Long-form label `e1.2.3`, `1` for the unit.
    pub fn label(self) -> String {
        if self.0 == 0 {
            return "1".into();
        }
        format!("e{}", self.indices().iter().join("."))
    }

    /// Compact `e123` label, only unambiguous when every index is below 10.
    pub fn short_label(self) -> String {
        if self.0 == 0 {
            return "1".into();
        }
        if self.max_index() <= 9 {
            format!("e{}", self.indices().iter().join(""))
        } else {
            self.label()
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            if self.0 == other.0 {
                return Ordering::Equal;
            }
            let diff = self.0 ^ other.0;
            let low = diff & diff.wrapping_neg();
            // the one holding the lowest differing index sorts first
            if self.0 & low != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Lexicographically ordered monomials of each degree `0..=n`, with reverse
/// lookup.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    n: usize,
    by_degree: Vec<Vec<Monomial>>,
    position: HashMap<Monomial, usize>,
}

impl GradedBasis {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators");
        assert!(n <= 24, "full exterior basis of {n} generators is too large to enumerate");
        let mut by_degree = Vec::with_capacity(n + 1);
        let mut position = HashMap::new();
        for k in 0..=n {
            let monomials: Vec<Monomial> =
                (1..=n).combinations(k).map(|c| Monomial::from_sorted(&c).expect("sorted")).collect();
            for (i, m) in monomials.iter().enumerate() {
                position.insert(*m, i);
            }
            by_degree.push(monomials);
        }
        GradedBasis { n, by_degree, position }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self, k: usize) -> &[Monomial] {
        self.by_degree.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.degree(k).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.by_degree.iter().map(Vec::len).collect()
    }

    /// Position of `m` within its degree.
    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        if m.max_index() > self.n {
            return None;
        }
        self.position.get(&m).copied()
    }

    /// Coefficient vector of the degree-`k` part of `form`.
    pub fn to_vector(&self, form: &Form, k: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim(k)];
        for (m, c) in form.terms() {
            if m.degree() == k {
                let i = self.index_of(*m).expect("monomial within basis");
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn from_vector(&self, k: usize, v: &[Scalar]) -> Form {
        assert_eq!(v.len(), self.dim(k));
        let mut f = Form::zero();
        for (m, c) in self.degree(k).iter().zip(v) {
            f.add_term(*m, c);
        }
        f
    }
}

/// Sparse element of the exterior algebra. No zero coefficient is stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Form {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn one() -> Self {
        Form::monomial(Monomial::ONE, Scalar::one())
    }

    pub fn generator(i: usize) -> Self {
        Form::monomial(Monomial::generator(i), Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut f = Form::zero();
        f.add_term(m, &c);
        f
    }

    /// `e^{i1}∧…` from 1-based indices in any order (sign included); zero on
    /// repeats.
    pub fn wedge_of(indices: &[usize]) -> Self {
        indices.iter().fold(Form::one(), |acc, &i| acc.wedge(&Form::generator(i)))
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, `None` if mixed or zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn component(&self, k: usize) -> Form {
        Form { terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(|m| m.max_index()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        if s.is_zero() {
            return Form::zero();
        }
        Form { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((negative, m)) = a.wedge(*b) {
                    let p = x * y;
                    out.add_term(m, &if negative { -p } else { p });
                }
            }
        }
        out
    }

    /// `self^k` under the wedge product.
    pub fn wedge_power(&self, k: usize) -> Form {
        (0..k).fold(Form::one(), |acc, _| acc.wedge(self))
    }

    /// Applies a map defined on monomials, extended linearly.
    pub fn map_monomials(&self, mut f: impl FnMut(Monomial) -> Form) -> Form {
        let mut out = Form::zero();
        for (m, c) in &self.terms {
            for (m2, c2) in f(*m).terms() {
                out.add_term(*m2, &(c * c2));
            }
        }
        out
    }

    /// Compact rendering such as `e12+2*e34-1/2*e1.10`.
    pub fn to_expr(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let short = self.max_index() <= 9;
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let label = if short { m.short_label() } else { m.label() };
            let (neg, mag) = if c.is_real() && c.re() < &num_rational::BigRational::zero() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if neg {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            if !mag.is_one() {
                if mag.is_real() {
                    out.push_str(&format!("{mag}*"));
                } else {
                    out.push_str(&format!("({mag})*"));
                }
            }
            out.push_str(&label);
        }
        out
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

/// Element of `∧²` of the dual space, stored on pairs `i < j`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Bivector {
    terms: BTreeMap<(usize, usize), Scalar>,
}

impl Bivector {
    pub fn zero() -> Self {
        Bivector::default()
    }

    /// Adds `c·X_i∧X_j`; `i > j` is stored as `-c·X_j∧X_i`, `i == j` ignored.
    pub fn add_term(&mut self, i: usize, j: usize, c: &Scalar) {
        if i == j || c.is_zero() {
            return;
        }
        let (key, c) = if i < j { ((i, j), c.clone()) } else { ((j, i), -c) };
        let entry = self.terms.entry(key).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.terms.iter()
    }

    /// Value on the ordered pair `(i, j)` (antisymmetric).
    pub fn pair(&self, i: usize, j: usize) -> Scalar {
        match i.cmp(&j) {
            Ordering::Less => self.terms.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero),
            Ordering::Greater => -self.terms.get(&(j, i)).cloned().unwrap_or_else(Scalar::zero),
            Ordering::Equal => Scalar::zero(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Bivector {
        let mut out = Bivector::zero();
        for ((i, j), c) in &self.terms {
            out.add_term(*i, *j, &(c * s));
        }
        out
    }
}

/// Contraction `ι_b a`, lowering degree by two. On a pair,
/// `ι_{X_i∧X_j} = ι_{X_j} ∘ ι_{X_i}`, so `ι_{X_i∧X_j}(e^i∧e^j) = 1`.
pub fn interior_product(b: &Bivector, a: &Form) -> Form {
    let mut out = Form::zero();
    for (m, c) in a.terms() {
        for ((i, j), bc) in b.terms() {
            let Some((s1, m1)) = m.contract(*i) else { continue };
            let Some((s2, m2)) = m1.contract(*j) else { continue };
            let p = c * bc;
            out.add_term(m2, &if s1 != s2 { -p } else { p });
        }
    }
    out
}

pub fn wedge(a: &Form, b: &Form) -> Form {
    a.wedge(b)
}
