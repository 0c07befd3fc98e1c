//! `ResultReport`, the machine form of a computation, and its text / CSV /
//! JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use symplex_core::cohomology::{all_degrees, CohomologyKind};
use symplex_core::Scalar;

use crate::run::{format_sample, Analysis, ModelOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    #[serde(rename = "dR")]
    pub dr: Vec<usize>,
    #[serde(rename = "dLambda")]
    pub dlambda: Vec<usize>,
    #[serde(rename = "BC")]
    pub bc: Vec<usize>,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdicts {
    pub hlc: Option<bool>,
    pub brylinski: bool,
    pub dd_lambda_lemma: bool,
    pub lefschetz_injective: Option<bool>,
    pub lefschetz_surjective: Option<bool>,
    pub bc_to_dr_injective: Vec<bool>,
    pub bc_to_dr_surjective: Vec<bool>,
    pub delta_vanishes: bool,
    pub equivalences_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LefschetzEntry {
    pub k: usize,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub injective: bool,
    pub surjective: bool,
}

/// Dimensions and verdicts of one complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComplexReport {
    pub rank: usize,
    pub space_dims: Vec<usize>,
    pub cohomology: CohomologyTable,
    pub delta: Vec<i64>,
    pub verdicts: Verdicts,
    pub lefschetz: Vec<LefschetzEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NonGenericSample {
    pub sample: String,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultReport {
    pub model: String,
    /// `invariant` or `subcomplex`.
    pub complex: String,
    pub degrees: Vec<i64>,
    #[serde(flatten)]
    pub body: ComplexReport,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub twists: BTreeMap<String, ComplexReport>,
    pub samples: Vec<String>,
    pub samples_agree: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub non_generic: Vec<NonGenericSample>,
    /// Kind → degree → representative cocycles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representatives: Option<BTreeMap<String, Vec<Vec<String>>>>,
}

impl ResultReport {
    /// Whether `delta` is recomputable from the carried dimensions.
    pub fn consistent(&self) -> bool {
        std::iter::once(&self.body).chain(self.twists.values()).all(|b| {
            let c = &b.cohomology;
            (0..c.dr.len()).all(|k| b.delta[k] == c.bc[k] as i64 + c.a[k] as i64 - 2 * c.dr[k] as i64)
        })
    }
}

fn complex_report(a: &Analysis, rank: usize) -> ComplexReport {
    let v = &a.verdicts;
    ComplexReport {
        rank,
        space_dims: a.complex.dims.clone(),
        cohomology: CohomologyTable {
            dr: v.dims.dr.clone(),
            dlambda: v.dims.debar.clone(),
            bc: v.dims.bc.clone(),
            a: v.dims.aeppli.clone(),
        },
        delta: v.delta.clone(),
        verdicts: Verdicts {
            hlc: v.hlc,
            brylinski: v.brylinski,
            dd_lambda_lemma: v.dd_lambda_lemma,
            lefschetz_injective: v.lefschetz_injective,
            lefschetz_surjective: v.lefschetz_surjective,
            bc_to_dr_injective: v.bc_to_dr_injective.clone(),
            bc_to_dr_surjective: v.bc_to_dr_surjective.clone(),
            delta_vanishes: v.delta_vanishes(),
            equivalences_agree: v.equivalences_agree(),
        },
        lefschetz: v
            .lefschetz
            .iter()
            .map(|l| LefschetzEntry {
                k: l.k,
                rank: l.rank,
                source_dim: l.source_dim,
                target_dim: l.target_dim,
                injective: l.injective,
                surjective: l.surjective,
            })
            .collect(),
    }
}

fn coefficient_prefix(c: &Scalar) -> String {
    if c.is_one() {
        return String::new();
    }
    if (-c).is_one() {
        return "-".into();
    }
    let s = c.to_string();
    if !c.is_real() {
        format!("({s})*")
    } else {
        format!("{s}*")
    }
}

/// `Σ c_i·label_i` for a coordinate vector.
pub fn format_vector(labels: &[String], v: &[Scalar]) -> String {
    let mut out = String::new();
    for (c, label) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let term = format!("{}{}", coefficient_prefix(c), label);
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            let _ = write!(out, " - {rest}");
        } else {
            let _ = write!(out, " + {term}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn representatives(a: &Analysis) -> BTreeMap<String, Vec<Vec<String>>> {
    let c = &a.complex;
    let labels: Vec<Vec<String>> = match &c.labels {
        Some(l) => l.clone(),
        None => c.dims.iter().map(|&d| (0..d).map(|j| format!("#{j}")).collect()).collect(),
    };
    let mut out = BTreeMap::new();
    for kind in [CohomologyKind::DeRham, CohomologyKind::Debar, CohomologyKind::BottChern, CohomologyKind::Aeppli] {
        let per_degree = all_degrees(c, kind)
            .iter()
            .enumerate()
            .map(|(k, space)| space.representatives().basis().iter().map(|v| format_vector(&labels[k], v)).collect())
            .collect();
        out.insert(kind.short_name().to_string(), per_degree);
    }
    out
}

/// Builds the report from the headline sample; `subcomplex` selects `A_Γ`
/// as the main complex.
pub fn build_report(name: &str, outcome: &ModelOutcome, subcomplex: bool, with_reps: bool) -> ResultReport {
    let head = outcome.headline();
    let main = if subcomplex { head.subcomplex.as_ref().expect("subcomplex computed") } else { &head.invariant };
    let twists = head
        .twists
        .iter()
        .map(|(label, a)| {
            let rank = a.complex.dims[0].max(1);
            (label.clone(), complex_report(a, rank))
        })
        .collect();
    let min = main.complex.min_degree;
    ResultReport {
        model: name.to_string(),
        complex: if subcomplex { "subcomplex" } else { "invariant" }.to_string(),
        degrees: (0..main.complex.len() as i64).map(|k| min + k).collect(),
        body: complex_report(main, 1),
        twists,
        samples: outcome.samples.iter().map(|s| format_sample(&s.values)).collect(),
        samples_agree: outcome.samples_agree(),
        non_generic: outcome
            .samples
            .iter()
            .filter(|s| !s.non_generic.is_empty())
            .map(|s| NonGenericSample { sample: format_sample(&s.values), reasons: s.non_generic.clone() })
            .collect(),
        representatives: with_reps.then(|| representatives(main)),
    }
}

/// Report for a standalone complex (for example one read from a raw file).
pub fn complex_report_only(name: &str, a: &Analysis, with_reps: bool) -> ResultReport {
    let min = a.complex.min_degree;
    ResultReport {
        model: name.to_string(),
        complex: "raw".to_string(),
        degrees: (0..a.complex.len() as i64).map(|k| min + k).collect(),
        body: complex_report(a, 1),
        twists: BTreeMap::new(),
        samples: vec!["()".to_string()],
        samples_agree: true,
        non_generic: Vec::new(),
        representatives: with_reps.then(|| representatives(a)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub fn render(report: &ResultReport, format: Format) -> String {
    match format {
        Format::Text => render_text(report),
        Format::Csv => render_csv(report),
        Format::Json => render_json(report),
    }
}

pub fn render_json(report: &ResultReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialises");
    s.push('\n');
    s
}

fn table_rows(degrees: &[i64], body: &ComplexReport) -> Vec<[String; 7]> {
    let c = &body.cohomology;
    (0..degrees.len())
        .map(|i| {
            [
                degrees[i].to_string(),
                body.space_dims[i].to_string(),
                c.dr[i].to_string(),
                c.dlambda[i].to_string(),
                c.bc[i].to_string(),
                c.a[i].to_string(),
                body.delta[i].to_string(),
            ]
        })
        .collect()
}

fn opt(b: Option<bool>) -> String {
    b.map_or_else(|| "n/a".into(), |b| b.to_string())
}

fn write_section(out: &mut String, title: &str, degrees: &[i64], body: &ComplexReport) {
    let _ = writeln!(out, "[{title}]");
    let header = ["k", "space", "dR", "dLambda", "BC", "A", "delta"];
    let rows = table_rows(degrees, body);
    let widths: Vec<usize> =
        (0..7).map(|j| rows.iter().map(|r| r[j].len()).chain([header[j].len()]).max().unwrap_or(1)).collect();
    let line =
        |cells: Vec<&str>| cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for r in &rows {
        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
    }
    let v = &body.verdicts;
    let _ = writeln!(
        out,
        "hlc: {}  brylinski: {}  ddLambdaLemma: {}  lefschetzInjective: {}  lefschetzSurjective: {}",
        opt(v.hlc),
        v.brylinski,
        v.dd_lambda_lemma,
        opt(v.lefschetz_injective),
        opt(v.lefschetz_surjective)
    );
    let flags = |xs: &[bool]| xs.iter().map(|&b| if b { "y" } else { "n" }).collect::<Vec<_>>().join("");
    let _ = writeln!(
        out,
        "BC->dR injective: {}  surjective: {}",
        flags(&v.bc_to_dr_injective),
        flags(&v.bc_to_dr_surjective)
    );
}

pub fn render_text(report: &ResultReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model: {}", report.model);
    let _ = writeln!(out, "samples: {}  agree: {}", report.samples.join(" "), report.samples_agree);
    for ng in &report.non_generic {
        let _ = writeln!(out, "non-generic sample {}: {}", ng.sample, ng.reasons.join(", "));
    }
    write_section(&mut out, &report.complex, &report.degrees, &report.body);
    for (label, t) in &report.twists {
        let degrees: Vec<i64> = (0..t.space_dims.len() as i64).collect();
        write_section(&mut out, &format!("twist {label} (rank {})", t.rank), &degrees, t);
    }
    if let Some(reps) = &report.representatives {
        let _ = writeln!(out, "[representatives]");
        for (kind, per_degree) in reps {
            for (i, forms) in per_degree.iter().enumerate() {
                if !forms.is_empty() {
                    let _ = writeln!(out, "{kind}^{}: {}", report.degrees[i], forms.join(", "));
                }
            }
        }
    }
    out
}

pub fn render_csv(report: &ResultReport) -> String {
    let mut out = String::from("complex,k,space,dR,dLambda,BC,A,delta\n");
    let mut section = |name: &str, degrees: &[i64], body: &ComplexReport| {
        for r in table_rows(degrees, body) {
            let _ = writeln!(out, "{name},{}", r.join(","));
        }
    };
    section(&report.complex, &report.degrees, &report.body);
    for (label, t) in &report.twists {
        let degrees: Vec<i64> = (0..t.space_dims.len() as i64).collect();
        section(&format!("twist:{label}"), &degrees, t);
    }
    out
}
