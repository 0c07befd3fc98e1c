//! Polynomial coefficients in formal parameters, and forms over them.
//!
//! Parameters are never manipulated symbolically beyond collecting terms:
//! every computation instantiates a [`ParamForm`] at a rational sample.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exterior::{Form, Monomial};
use crate::scalar::Scalar;

/// Polynomial in parameters `0..k`; keys are sorted multisets of parameter
/// indices (the empty key is the constant term).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), &c);
        p
    }

    pub fn symbol(index: usize) -> Self {
        let mut p = Poly::zero();
        p.add_term(vec![index], &Scalar::one());
        p
    }

    fn add_term(&mut self, mut key: Vec<usize>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        key.sort_unstable();
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Vec::is_empty)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ka, a) in &self.terms {
            for (kb, b) in &other.terms {
                let key = ka.iter().chain(kb).copied().collect();
                out.add_term(key, &(a * b));
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &(c * s));
        }
        out
    }

    /// Value at `values[i]` for parameter `i`.
    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        self.terms.iter().map(|(key, c)| key.iter().fold(c.clone(), |acc, &i| &acc * &values[i])).sum()
    }
}

/// A form whose coefficients are polynomials in the declared parameters.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamForm {
    terms: BTreeMap<Monomial, Poly>,
}

impl ParamForm {
    pub fn zero() -> Self {
        ParamForm::default()
    }

    pub fn add_term(&mut self, m: Monomial, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let sum = self.terms.get(&m).map_or_else(|| p.clone(), |q| q.add(p));
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.values().all(Poly::is_constant)
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(|m| m.max_index()).max().unwrap_or(0)
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn instantiate(&self, values: &[Scalar]) -> Form {
        let mut f = Form::zero();
        for (m, p) in &self.terms {
            f.add_term(*m, &p.eval(values));
        }
        f
    }
}

impl From<&Form> for ParamForm {
    fn from(form: &Form) -> Self {
        let mut out = ParamForm::zero();
        for (m, c) in form.terms() {
            out.add_term(*m, &Poly::constant(c.clone()));
        }
        out
    }
}
