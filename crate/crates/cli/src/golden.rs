//! Comparison of computed results against a model's `expect` lines.

use std::fmt;

use symplex_core::cohomology::{cohomology, CohomologyKind};
use symplex_core::linalg::Matrix;
use symplex_core::Scalar;

use crate::model::{Check, DimKind, Expectation, ModelFile, VerdictName};
use crate::run::{format_sample, Analysis, ModelOutcome, SampleOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub model: String,
    pub line: usize,
    pub sample: Option<String>,
    /// e.g. `invariant BC`, `twist alpha1 ddlambda`.
    pub what: String,
    pub degree: Option<i64>,
    pub expected: String,
    pub computed: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (line {}", self.model, self.line)?;
        if let Some(s) = &self.sample {
            write!(f, ", sample {s}")?;
        }
        write!(f, "): {}", self.what)?;
        if let Some(k) = self.degree {
            write!(f, " degree {k}")?;
        }
        write!(f, ": expected {}, computed {}", self.expected, self.computed)
    }
}

fn kind_of(k: DimKind) -> Option<CohomologyKind> {
    match k {
        DimKind::DeRham => Some(CohomologyKind::DeRham),
        DimKind::Debar => Some(CohomologyKind::Debar),
        DimKind::BottChern => Some(CohomologyKind::BottChern),
        DimKind::Aeppli => Some(CohomologyKind::Aeppli),
        DimKind::Delta | DimKind::Space => None,
    }
}

fn computed_dims(a: &Analysis, kind: DimKind) -> Vec<i64> {
    let d = &a.verdicts.dims;
    let cast = |v: &[usize]| v.iter().map(|&x| x as i64).collect();
    match kind {
        DimKind::DeRham => cast(&d.dr),
        DimKind::Debar => cast(&d.debar),
        DimKind::BottChern => cast(&d.bc),
        DimKind::Aeppli => cast(&d.aeppli),
        DimKind::Delta => a.verdicts.delta.clone(),
        DimKind::Space => cast(&a.complex.dims),
    }
}

/// Coordinates of `form` in degree `k` of a labelled complex; `None` if a
/// monomial of `form` is not a basis element there.
fn coordinates(a: &Analysis, k: usize, form: &symplex_core::Form) -> Option<Vec<Scalar>> {
    let labels = a.complex.labels.as_ref()?.get(k)?;
    let mut v = vec![Scalar::from_integer(0); labels.len()];
    for (m, c) in form.terms() {
        if m.degree() != k {
            return None;
        }
        let i = labels.iter().position(|l| *l == m.short_label())?;
        v[i] = c.clone();
    }
    Some(v)
}

/// Failed checks for one sample, each as `(line, what, degree, expected, computed)`.
type Failure = (usize, String, Option<i64>, String, String);

fn check_sample(expectations: &[Expectation], s: &SampleOutcome) -> Vec<Failure> {
    let mut out = Vec::new();
    for e in expectations {
        let Some(a) = s.get(&e.target) else {
            out.push((e.line, e.target.to_string(), None, "computed".into(), "not computed".into()));
            continue;
        };
        let min = a.complex.min_degree;
        match &e.check {
            Check::Dims { kind, from, values } => {
                let got = computed_dims(a, *kind);
                for (i, want) in values.iter().enumerate() {
                    let k = from + i;
                    let have = got.get(k).map_or_else(|| "out of range".to_string(), ToString::to_string);
                    if got.get(k) != Some(want) {
                        out.push((
                            e.line,
                            format!("{} {kind}", e.target),
                            Some(min + k as i64),
                            want.to_string(),
                            have,
                        ));
                    }
                }
            }
            Check::Verdict { name, value } => {
                let v = &a.verdicts;
                let got = match name {
                    VerdictName::Hlc => v.hlc,
                    VerdictName::Brylinski => Some(v.brylinski),
                    VerdictName::DdLambda => Some(v.dd_lambda_lemma),
                };
                if got != Some(*value) {
                    let have = got.map_or_else(|| "n/a".to_string(), |b| b.to_string());
                    out.push((e.line, format!("{} {name}", e.target), None, value.to_string(), have));
                }
            }
            Check::BcToDr { injective, values } => {
                let got = if *injective { &a.verdicts.bc_to_dr_injective } else { &a.verdicts.bc_to_dr_surjective };
                let which = if *injective { "injective" } else { "surjective" };
                for (k, want) in values.iter().enumerate() {
                    if got.get(k) != Some(want) {
                        let have = got.get(k).map_or_else(|| "out of range".into(), ToString::to_string);
                        out.push((
                            e.line,
                            format!("{} BC->dR {which}", e.target),
                            Some(min + k as i64),
                            want.to_string(),
                            have,
                        ));
                    }
                }
            }
            Check::Span { kind, degree, forms, text } => {
                let what = format!("{} {kind} span", e.target);
                let Some(ck) = kind_of(*kind) else {
                    out.push((e.line, what, None, "a cohomology kind".into(), kind.to_string()));
                    continue;
                };
                if *degree >= a.complex.len() {
                    out.push((e.line, what, Some(*degree as i64), "degree in range".into(), "out of range".into()));
                    continue;
                }
                let space = cohomology(&a.complex, ck, *degree);
                let mut classes = Vec::new();
                for (f, t) in forms.iter().zip(text) {
                    let form = f.instantiate(&s.values);
                    match coordinates(a, *degree, &form).and_then(|v| space.class_of(&v)) {
                        Some(c) => classes.push(c),
                        None => out.push((
                            e.line,
                            what.clone(),
                            Some(*degree as i64),
                            format!("{t} a cocycle"),
                            "not a cocycle".into(),
                        )),
                    }
                }
                let rank = if classes.is_empty() { 0 } else { Matrix::from_rows(classes).rank() };
                if rank != space.dim() {
                    out.push((
                        e.line,
                        what,
                        Some(*degree as i64),
                        format!("classes spanning dimension {}", space.dim()),
                        format!("span of dimension {rank}"),
                    ));
                }
            }
        }
    }
    out
}

fn compare(model: &ModelFile, expectations: &[Expectation], outcome: &ModelOutcome) -> Vec<Mismatch> {
    let multi = outcome.samples.len() > 1;
    let mut out = Vec::new();
    for s in outcome.generic() {
        for (line, what, degree, expected, computed) in check_sample(expectations, s) {
            out.push(Mismatch {
                model: model.name.clone(),
                line,
                sample: multi.then(|| format_sample(&s.values)),
                what,
                degree,
                expected,
                computed,
            });
        }
    }
    out
}

/// Every mismatch between the model's expectations and its outcome,
/// checked on every generic sample.
pub fn check(model: &ModelFile, outcome: &ModelOutcome) -> Vec<Mismatch> {
    let mut out = compare(model, &model.expectations, outcome);
    if let Some(want) = model.expect_samples_agree {
        let got = outcome.samples_agree();
        if got != want {
            out.push(Mismatch {
                model: model.name.clone(),
                line: 0,
                sample: None,
                what: "samples_agree".into(),
                degree: None,
                expected: want.to_string(),
                computed: got.to_string(),
            });
        }
    }
    out
}

/// Differences from the model's `reference` values.
pub fn reference_differences(model: &ModelFile, outcome: &ModelOutcome) -> Vec<Mismatch> {
    compare(model, &model.references, outcome)
}
