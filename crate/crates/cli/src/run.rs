//! The per-model pipeline: instantiate each sample, validate, build the
//! requested complexes and compute their verdicts.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use symplex_core::cohomology::{verdicts, VerdictReport};
use symplex_core::complex::BiDifferentialComplex;
use symplex_core::presentation::{validate_presentation, LieAlgebraPresentation};
use symplex_core::symplectic::{build_symplectic, SymplecticOperators, SymplecticStructure};
use symplex_core::twisted::{twisted_complex, validate_flat, TwistConnection};
use symplex_core::weights::{
    gamma_subcomplex, weighted_differential, Character, CharacterWeight, WeightedPresentation,
};
use symplex_core::Scalar;

use crate::model::{Constraint, ModelFile, Target};

/// A failure while validating or computing one sample of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunError {
    pub model: String,
    pub sample: Option<String>,
    pub message: String,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.sample {
            Some(s) => write!(f, "{} at sample {}: {}", self.model, s, self.message),
            None => write!(f, "{}: {}", self.model, self.message),
        }
    }
}

impl std::error::Error for RunError {}

pub fn format_sample(values: &[Scalar]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Everything derived from one parameter sample before any cohomology.
pub struct Built {
    pub values: Vec<Scalar>,
    pub presentation: LieAlgebraPresentation,
    pub structure: SymplecticStructure,
    pub ops: SymplecticOperators,
    pub weighted: Option<WeightedPresentation>,
    pub twists: Vec<TwistConnection>,
}

/// Reasons a sample is non-generic (empty when generic).
pub fn genericity(model: &ModelFile, values: &[Scalar]) -> Vec<String> {
    let mut out = Vec::new();
    for c in &model.constraints {
        match c {
            Constraint::Distinct(idx) => {
                for (a, &i) in idx.iter().enumerate() {
                    for &j in &idx[a + 1..] {
                        if values[i] == values[j] {
                            out.push(format!("{} = {}", model.params[i], model.params[j]));
                        }
                    }
                }
            }
            Constraint::NonZero(idx) => {
                for &i in idx {
                    if values[i].is_zero() {
                        out.push(format!("{} = 0", model.params[i]));
                    }
                }
            }
            Constraint::Linear(_) => {}
        }
    }
    out
}

/// Instantiates and validates one sample; every failed validator is listed.
pub fn build_sample(model: &ModelFile, values: &[Scalar]) -> Result<Built, Vec<String>> {
    let mut problems = Vec::new();
    for c in &model.constraints {
        if let Constraint::Linear(l) = c {
            if !l.holds(values) {
                problems.push(format!("constraint violated: {}", l.text));
            }
        }
    }
    let d = model.structure.iter().map(|f| f.instantiate(values)).collect();
    let presentation = LieAlgebraPresentation::new(model.name.clone(), d);
    if let Err(diags) = validate_presentation(&presentation) {
        problems.extend(diags.iter().map(ToString::to_string));
        return Err(problems);
    }
    let omega = model.omega.instantiate(values);
    let structure = match build_symplectic(&presentation, &omega) {
        Ok(s) => s,
        Err(e) => {
            problems.push(e.to_string());
            return Err(problems);
        }
    };
    let ops = SymplecticOperators::new(&structure);

    let mut twists = Vec::new();
    for t in &model.twists {
        let phi = t.phi.iter().map(|row| row.iter().map(|f| f.instantiate(values)).collect()).collect();
        let conn = TwistConnection { label: t.label.clone(), rank: t.rank, phi };
        match validate_flat(&presentation, &conn) {
            Ok(()) => twists.push(conn),
            Err(e) => problems.push(e.to_string()),
        }
    }

    let weighted = if model.has_weights() {
        let wp = WeightedPresentation {
            base: presentation.clone(),
            characters: model
                .characters
                .iter()
                .map(|c| Character { name: c.name.clone(), derivative: c.derivative.instantiate(values) })
                .collect(),
            weight_of_generator: model.weights.iter().map(|w| CharacterWeight { exponents: w.clone() }).collect(),
            gamma_matrix: model.gamma_rows.clone(),
        };
        if let Err(e) = weighted_differential(&wp, &ops.basis) {
            problems.push(e.to_string());
        }
        for m in structure.omega().terms().map(|(m, _)| *m) {
            if !wp.is_gamma_trivial(&wp.weight_of(m)) {
                problems
                    .push(format!("omega is not lattice-trivial: monomial {} has nontrivial weight", m.short_label()));
            }
        }
        Some(wp)
    } else {
        None
    };

    if problems.is_empty() {
        Ok(Built { values: values.to_vec(), presentation, structure, ops, weighted, twists })
    } else {
        Err(problems)
    }
}

/// Runs every validator on every sample.
pub fn validate_model(model: &ModelFile) -> Vec<String> {
    let mut out = Vec::new();
    for values in &model.samples {
        if let Err(problems) = build_sample(model, values) {
            let prefix = if values.is_empty() { String::new() } else { format!("sample {}: ", format_sample(values)) };
            out.extend(problems.into_iter().map(|p| format!("{prefix}{p}")));
        }
    }
    out
}

pub struct Analysis {
    pub complex: BiDifferentialComplex,
    pub verdicts: VerdictReport,
}

impl Analysis {
    pub fn of(complex: BiDifferentialComplex) -> Self {
        let verdicts = verdicts(&complex);
        Analysis { complex, verdicts }
    }
}

/// Which complexes to compute besides the invariant one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selection {
    pub twists: Vec<String>,
    pub subcomplex: bool,
}

impl Selection {
    /// Everything the model's expectations and references refer to.
    pub fn for_expectations(model: &ModelFile) -> Self {
        let mut s = Selection::default();
        for e in model.expectations.iter().chain(&model.references) {
            match &e.target {
                Target::Twist(l) if !s.twists.contains(l) => s.twists.push(l.clone()),
                Target::Subcomplex => s.subcomplex = true,
                _ => {}
            }
        }
        s
    }
}

pub struct SampleOutcome {
    pub values: Vec<Scalar>,
    pub non_generic: Vec<String>,
    pub invariant: Analysis,
    pub subcomplex: Option<Analysis>,
    pub twists: BTreeMap<String, Analysis>,
}

impl SampleOutcome {
    pub fn get(&self, target: &Target) -> Option<&Analysis> {
        match target {
            Target::Invariant => Some(&self.invariant),
            Target::Subcomplex => self.subcomplex.as_ref(),
            Target::Twist(l) => self.twists.get(l),
        }
    }

    /// Cohomology dimensions of every computed complex, for comparing samples.
    fn signature(&self) -> Vec<(String, Vec<Vec<usize>>)> {
        let dims = |a: &Analysis| {
            let d = &a.verdicts.dims;
            vec![a.complex.dims.clone(), d.dr.clone(), d.debar.clone(), d.bc.clone(), d.aeppli.clone()]
        };
        let mut out = vec![("invariant".to_string(), dims(&self.invariant))];
        if let Some(s) = &self.subcomplex {
            out.push(("subcomplex".into(), dims(s)));
        }
        out.extend(self.twists.iter().map(|(l, a)| (format!("twist {l}"), dims(a))));
        out
    }
}

pub struct ModelOutcome {
    pub samples: Vec<SampleOutcome>,
}

impl ModelOutcome {
    /// The first generic sample, or the first sample if none is generic.
    pub fn headline(&self) -> &SampleOutcome {
        self.samples.iter().find(|s| s.non_generic.is_empty()).unwrap_or(&self.samples[0])
    }

    pub fn generic(&self) -> impl Iterator<Item = &SampleOutcome> {
        self.samples.iter().filter(|s| s.non_generic.is_empty())
    }

    /// All generic samples give identical dimensions.
    pub fn samples_agree(&self) -> bool {
        let mut sigs = self.generic().map(SampleOutcome::signature);
        match sigs.next() {
            Some(first) => sigs.all(|s| s == first),
            None => false,
        }
    }
}

fn analyse_sample(model: &ModelFile, built: Built, selection: &Selection) -> Result<SampleOutcome, String> {
    let non_generic = genericity(model, &built.values);
    let invariant =
        BiDifferentialComplex::from_presentation(&built.presentation, &built.ops).map_err(|e| e.to_string())?;
    let mut twists = BTreeMap::new();
    for label in &selection.twists {
        let t = built.twists.iter().find(|t| &t.label == label).ok_or_else(|| format!("unknown twist `{label}`"))?;
        let c = twisted_complex(&built.presentation, &built.ops, t).map_err(|e| e.to_string())?;
        twists.insert(label.clone(), Analysis::of(c));
    }
    let subcomplex = if selection.subcomplex {
        let wp = built.weighted.as_ref().ok_or("model declares no characters")?;
        let c = gamma_subcomplex(wp, &built.structure, &built.ops).map_err(|e| e.to_string())?;
        Some(Analysis::of(c))
    } else {
        None
    };
    Ok(SampleOutcome { values: built.values, non_generic, invariant: Analysis::of(invariant), subcomplex, twists })
}

pub fn run_model(model: &ModelFile, selection: &Selection) -> Result<ModelOutcome, RunError> {
    let mut samples = Vec::new();
    for values in &model.samples {
        let sample = (!values.is_empty()).then(|| format_sample(values));
        let fail = |message: String| RunError { model: model.name.clone(), sample: sample.clone(), message };
        let built = build_sample(model, values).map_err(|p| fail(p.join("; ")))?;
        samples.push(analyse_sample(model, built, selection).map_err(fail)?);
    }
    Ok(ModelOutcome { samples })
}
