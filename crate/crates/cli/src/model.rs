//! Model files: a presentation, a symplectic form, optional parameters,
//! characters, twists, and golden expectations, one directive per line.
//!
//! ```text
//! name g4.1
//! dim 4
//! structure (0,0,12,13)
//! symplectic omega = 14+23
//! expect BC dims = [1,2,4,2,1]
//! ```

use std::fmt;
use std::path::Path;

use symplex_core::parse::{parse_form, parse_structure_equations, ParseError};
use symplex_core::poly::ParamForm;
use symplex_core::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ModelError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ModelError> {
    Err(ModelError { line, message: message.into() })
}

/// `Σ c_i·param_i + c_0 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub text: String,
    pub coefficients: Vec<Scalar>,
    pub constant: Scalar,
}

impl LinearConstraint {
    pub fn holds(&self, values: &[Scalar]) -> bool {
        let total: Scalar =
            self.coefficients.iter().zip(values).map(|(c, v)| c * v).sum::<Scalar>() + self.constant.clone();
        num_traits::Zero::is_zero(&total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// Violations make a sample invalid.
    Linear(LinearConstraint),
    /// Violations mark a sample as non-generic.
    Distinct(Vec<usize>),
    NonZero(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharDecl {
    pub name: String,
    pub derivative: ParamForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistDecl {
    pub label: String,
    pub rank: usize,
    pub phi: Vec<Vec<ParamForm>>,
}

/// Which complex an expectation refers to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    Invariant,
    Subcomplex,
    Twist(String),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Invariant => f.write_str("invariant"),
            Target::Subcomplex => f.write_str("subcomplex"),
            Target::Twist(l) => write!(f, "twist {l}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimKind {
    DeRham,
    Debar,
    BottChern,
    Aeppli,
    Delta,
    /// Dimension of the cochain spaces themselves.
    Space,
}

impl DimKind {
    fn parse(s: &str) -> Option<DimKind> {
        Some(match s {
            "dR" => DimKind::DeRham,
            "dLambda" => DimKind::Debar,
            "BC" => DimKind::BottChern,
            "A" => DimKind::Aeppli,
            "delta" => DimKind::Delta,
            "space" => DimKind::Space,
            _ => return None,
        })
    }
}

impl fmt::Display for DimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DimKind::DeRham => "dR",
            DimKind::Debar => "dLambda",
            DimKind::BottChern => "BC",
            DimKind::Aeppli => "A",
            DimKind::Delta => "delta",
            DimKind::Space => "space",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictName {
    Hlc,
    Brylinski,
    DdLambda,
}

impl fmt::Display for VerdictName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictName::Hlc => "hlc",
            VerdictName::Brylinski => "brylinski",
            VerdictName::DdLambda => "ddlambda",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Dims {
        kind: DimKind,
        from: usize,
        values: Vec<i64>,
    },
    Verdict {
        name: VerdictName,
        value: bool,
    },
    BcToDr {
        injective: bool,
        values: Vec<bool>,
    },
    /// The listed forms are cocycles whose classes span the space.
    Span {
        kind: DimKind,
        degree: usize,
        forms: Vec<ParamForm>,
        text: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub line: usize,
    pub target: Target,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub name: String,
    pub n: usize,
    pub params: Vec<String>,
    pub structure: Vec<ParamForm>,
    pub omega: ParamForm,
    pub constraints: Vec<Constraint>,
    pub samples: Vec<Vec<Scalar>>,
    pub characters: Vec<CharDecl>,
    /// Per generator, exponents over `characters`.
    pub weights: Vec<Vec<i64>>,
    pub gamma_rows: Vec<Vec<i64>>,
    pub twists: Vec<TwistDecl>,
    pub expectations: Vec<Expectation>,
    /// Published values kept for comparison; differences are reported but
    /// do not fail a run.
    pub references: Vec<Expectation>,
    pub expect_samples_agree: Option<bool>,
}

impl ModelFile {
    pub fn has_weights(&self) -> bool {
        !self.characters.is_empty()
    }

    pub fn twist(&self, label: &str) -> Option<&TwistDecl> {
        self.twists.iter().find(|t| t.label == label)
    }
}

pub fn load_model(path: &Path) -> Result<ModelFile, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(format!("{}: {e}", path.display())))?;
    let fallback = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_model(&text, &fallback).map_err(LoadError::Model)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    Io(String),
    Model(ModelError),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(m) => write!(f, "cannot read {m}"),
            LoadError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

struct Raw<'a> {
    line: usize,
    text: &'a str,
}

fn split_eq<'a>(raw: &Raw<'a>) -> Result<(&'a str, &'a str), ModelError> {
    match raw.text.split_once('=') {
        Some((a, b)) => Ok((a.trim(), b.trim())),
        None => err(raw.line, "expected `=`"),
    }
}

fn parse_err(line: usize, what: &str, e: ParseError) -> ModelError {
    ModelError { line, message: format!("{what}: {e}") }
}

fn parse_list<T>(line: usize, text: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, ModelError> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ModelError { line, message: format!("expected `[...]`, found `{text}`") })?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|item| {
            f(item.trim()).ok_or_else(|| ModelError { line, message: format!("bad list item `{}`", item.trim()) })
        })
        .collect()
}

/// `[[1,-1,0]; [0,1,-1]]` or `[[1,1]]`.
fn parse_int_matrix(line: usize, text: &str) -> Result<Vec<Vec<i64>>, ModelError> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ModelError { line, message: "expected `[[...]; ...]`".into() })?;
    let rows: Vec<&str> = if inner.contains(';') {
        inner.split(';').collect()
    } else {
        // `[[1,1],[0,1]]` separated by `],`
        inner.split("],").map(|r| r.trim()).collect()
    };
    rows.iter()
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            let r = r.trim();
            let r = if r.ends_with(']') { r.to_string() } else { format!("{r}]") };
            parse_list(line, &r, |s| s.parse::<i64>().ok())
        })
        .collect()
}

/// `a1 + a2 - 2*a3 + 1/2`.
fn parse_linear(line: usize, text: &str, params: &[String]) -> Result<LinearConstraint, ModelError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '−' { '-' } else { c }).collect();
    let mut coefficients = vec![Scalar::from_integer(0); params.len()];
    let mut constant = Scalar::from_integer(0);
    let mut terms = Vec::new();
    let mut current = String::new();
    for (i, c) in compact.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(std::mem::take(&mut current));
        }
        current.push(c);
    }
    terms.push(current);
    for term in terms {
        let (negative, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.strip_prefix('+').unwrap_or(&term)),
        };
        if body.is_empty() {
            return err(line, format!("empty term in `{text}`"));
        }
        let (coeff, symbol) = match body.rsplit_once('*') {
            Some((c, s)) => (c.to_string(), Some(s.to_string())),
            None if body.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => {
                ("1".into(), Some(body.to_string()))
            }
            None => (body.to_string(), None),
        };
        let mut value: Scalar =
            coeff.parse().map_err(|_| ModelError { line, message: format!("bad coefficient `{coeff}`") })?;
        if negative {
            value = -value;
        }
        match symbol {
            Some(s) => {
                let idx = params
                    .iter()
                    .position(|p| *p == s)
                    .ok_or_else(|| ModelError { line, message: format!("unknown parameter `{s}`") })?;
                coefficients[idx] = &coefficients[idx] + &value;
            }
            None => constant = &constant + &value,
        }
    }
    Ok(LinearConstraint { text: format!("{text} = 0"), coefficients, constant })
}

/// `[(1,2,-3), (2,3,-5)]`.
fn parse_samples(line: usize, text: &str, arity: usize) -> Result<Vec<Vec<Scalar>>, ModelError> {
    let mut out = Vec::new();
    let mut rest = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ModelError { line, message: "expected `[(...), ...]`".into() })?;
    while let Some(start) = rest.find('(') {
        let end = rest[start..].find(')').ok_or_else(|| ModelError { line, message: "unclosed `(`".into() })? + start;
        let values: Result<Vec<Scalar>, _> =
            rest[start + 1..end].split(',').map(|v| v.trim().parse::<Scalar>()).collect();
        let values = values.map_err(|e| ModelError { line, message: e.to_string() })?;
        if values.len() != arity {
            return err(line, format!("sample has {} values, expected {arity}", values.len()));
        }
        out.push(values);
        rest = &rest[end + 1..];
    }
    Ok(out)
}

/// `A1^1 * A2^-1`, `X`, or `1`.
fn parse_weight(line: usize, text: &str, chars: &[String]) -> Result<Vec<i64>, ModelError> {
    let mut w = vec![0; chars.len()];
    let text = text.trim();
    if text == "1" {
        return Ok(w);
    }
    for factor in text.split(['*', '·']) {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .trim()
                    .replace('−', "-")
                    .parse()
                    .map_err(|_| ModelError { line, message: format!("bad exponent in `{factor}`") })?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let idx = chars
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| ModelError { line, message: format!("unknown character `{name}`") })?;
        w[idx] += exp;
    }
    Ok(w)
}

fn parse_bool(line: usize, s: &str) -> Result<bool, ModelError> {
    match s.trim() {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        other => err(line, format!("expected true/false, found `{other}`")),
    }
}

fn parse_expectation(raw: &Raw<'_>, n: usize, params: &[String]) -> Result<Option<Expectation>, ModelError> {
    let line = raw.line;
    let (lhs, rhs) = split_eq(raw)?;
    let mut words: Vec<&str> = lhs.split_whitespace().skip(1).collect();
    if words == ["samples_agree"] {
        return Ok(None);
    }
    let target = match words.first() {
        Some(&"twist") => {
            let label = words.get(1).ok_or_else(|| ModelError { line, message: "twist needs a label".into() })?;
            let t = Target::Twist(label.to_string());
            words.drain(..2);
            t
        }
        Some(&"subcomplex") => {
            words.remove(0);
            Target::Subcomplex
        }
        _ => Target::Invariant,
    };
    let bad = || ModelError { line, message: format!("unrecognised expectation `{lhs}`") };
    let check = match words.as_slice() {
        ["hlc"] => Check::Verdict { name: VerdictName::Hlc, value: parse_bool(line, rhs)? },
        ["brylinski"] => Check::Verdict { name: VerdictName::Brylinski, value: parse_bool(line, rhs)? },
        ["ddlambda"] => Check::Verdict { name: VerdictName::DdLambda, value: parse_bool(line, rhs)? },
        ["bc_to_dr", which @ ("injective" | "surjective")] => Check::BcToDr {
            injective: *which == "injective",
            values: parse_list(line, rhs, |s| parse_bool(line, s).ok())?,
        },
        ["delta"] | ["delta", "from", _] | ["dims"] | ["dims", "from", _] | [_, "dims"] | [_, "dims", "from", _] => {
            let (kind, from) = match words.as_slice() {
                ["delta"] => (DimKind::Delta, None),
                ["delta", "from", k] => (DimKind::Delta, Some(*k)),
                ["dims"] => (DimKind::Space, None),
                ["dims", "from", k] => (DimKind::Space, Some(*k)),
                [kind, "dims"] => (DimKind::parse(kind).ok_or_else(bad)?, None),
                [kind, "dims", "from", k] => (DimKind::parse(kind).ok_or_else(bad)?, Some(*k)),
                _ => unreachable!(),
            };
            let from = match from {
                Some(k) => k.parse().map_err(|_| bad())?,
                None => 0,
            };
            Check::Dims { kind, from, values: parse_list(line, rhs, |s| s.parse::<i64>().ok())? }
        }
        [kind, "span", k] => {
            let kind = DimKind::parse(kind).ok_or_else(bad)?;
            let degree = k.parse().map_err(|_| bad())?;
            let inner = rhs.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
            let text: Vec<String> = inner.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            let forms = text
                .iter()
                .map(|t| parse_form(t, n, params).map_err(|e| parse_err(line, "span form", e)))
                .collect::<Result<_, _>>()?;
            Check::Span { kind, degree, forms, text }
        }
        _ => return Err(bad()),
    };
    Ok(Some(Expectation { line, target, check }))
}

/// Parses model text; `fallback_name` is used when no `name` line exists.
pub fn parse_model(text: &str, fallback_name: &str) -> Result<ModelFile, ModelError> {
    let mut lines = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let body = l.split('#').next().unwrap_or("").trim();
        if !body.is_empty() {
            lines.push(Raw { line: i + 1, text: body });
        }
    }
    let mut name = fallback_name.to_string();
    let mut n = None;
    let mut params: Vec<String> = Vec::new();
    for raw in &lines {
        let mut words = raw.text.split_whitespace();
        match words.next() {
            Some("name") => name = raw.text["name".len()..].trim().to_string(),
            Some("dim") => {
                let v = words.next().and_then(|w| w.parse::<usize>().ok());
                match v {
                    Some(v) if (1..=24).contains(&v) => n = Some(v),
                    _ => return err(raw.line, "dim must be an integer in 1..=24"),
                }
            }
            Some("param") => {
                for w in words {
                    let w = w.trim_end_matches([',', ';']);
                    if params.iter().any(|p| p == w) {
                        return err(raw.line, format!("parameter `{w}` declared twice"));
                    }
                    params.push(w.to_string());
                }
            }
            _ => {}
        }
    }
    let n = n.ok_or_else(|| ModelError { line: 0, message: "missing `dim` line".into() })?;

    let mut structure_text: Option<(usize, String)> = None;
    let mut long_lines: Vec<(usize, &str)> = Vec::new();
    let mut omega = None;
    let mut constraints = Vec::new();
    let mut samples = None;
    let mut char_raw: Vec<(&Raw<'_>, String, String)> = Vec::new();
    let mut weight_raw: Vec<(&Raw<'_>, usize, String)> = Vec::new();
    let mut gamma_rows = Vec::new();
    let mut twists: Vec<TwistDecl> = Vec::new();
    let mut expect_raw = Vec::new();
    let mut reference_raw = Vec::new();
    let mut expect_samples_agree = None;

    for raw in &lines {
        let line = raw.line;
        let first = raw.text.split_whitespace().next().unwrap_or("");
        match first {
            "name" | "dim" | "param" => {}
            "structure" => {
                if structure_text.is_some() {
                    return err(line, "structure given twice");
                }
                structure_text = Some((line, raw.text["structure".len()..].trim().to_string()));
            }
            "d" => long_lines.push((line, raw.text)),
            "symplectic" => {
                let (lhs, rhs) = split_eq(raw)?;
                if lhs.split_whitespace().collect::<Vec<_>>() != ["symplectic", "omega"] {
                    return err(line, "expected `symplectic omega = ...`");
                }
                omega = Some(parse_form(rhs, n, &params).map_err(|e| parse_err(line, "omega", e))?);
            }
            "constraint" => {
                let body = raw.text["constraint".len()..].trim();
                let mut words = body.split_whitespace();
                let head = words.next().unwrap_or("");
                if head == "distinct" || head == "nonzero" {
                    let idx: Result<Vec<usize>, ModelError> = words
                        .map(|w| {
                            params
                                .iter()
                                .position(|p| p == w.trim_end_matches(','))
                                .ok_or_else(|| ModelError { line, message: format!("unknown parameter `{w}`") })
                        })
                        .collect();
                    constraints.push(if head == "distinct" {
                        Constraint::Distinct(idx?)
                    } else {
                        Constraint::NonZero(idx?)
                    });
                } else {
                    let (lhs, rhs) = split_eq(raw)?;
                    if rhs != "0" {
                        return err(line, "linear constraints must read `<expr> = 0`");
                    }
                    let lhs = lhs["constraint".len()..].trim();
                    constraints.push(Constraint::Linear(parse_linear(line, lhs, &params)?));
                }
            }
            "samples" => {
                let (_, rhs) = split_eq(raw)?;
                samples = Some(parse_samples(line, rhs, params.len())?);
            }
            "char" => {
                let (lhs, rhs) = split_eq(raw)?;
                let words: Vec<&str> = lhs.split_whitespace().collect();
                match words.as_slice() {
                    ["char", cname, "derivative"] => char_raw.push((raw, cname.to_string(), rhs.to_string())),
                    _ => return err(line, "expected `char <Name> derivative = <form>`"),
                }
            }
            "weight" => {
                let (lhs, rhs) = split_eq(raw)?;
                let words: Vec<&str> = lhs.split_whitespace().collect();
                let k = match words.as_slice() {
                    ["weight", g] => g.strip_prefix('e').and_then(|d| d.parse::<usize>().ok()),
                    _ => None,
                };
                match k {
                    Some(k) if (1..=n).contains(&k) => weight_raw.push((raw, k, rhs.to_string())),
                    _ => return err(line, "expected `weight e<k> = ...` with k in range"),
                }
            }
            "gamma_trivial" => {
                let (lhs, rhs) = split_eq(raw)?;
                if lhs.split_whitespace().collect::<Vec<_>>() != ["gamma_trivial", "rows"] {
                    return err(line, "expected `gamma_trivial rows = [[...]; ...]`");
                }
                gamma_rows = parse_int_matrix(line, rhs)?;
            }
            "twist" => {
                let (lhs, rhs) = split_eq(raw)?;
                let words: Vec<&str> = lhs.split_whitespace().collect();
                let (label, rank) = match words.as_slice() {
                    ["twist", label, "rank", r, "phi"] => (
                        label.to_string(),
                        r.parse::<usize>().map_err(|_| ModelError { line, message: "bad rank".into() })?,
                    ),
                    _ => return err(line, "expected `twist <label> rank <r> phi = ...`"),
                };
                if rank == 0 {
                    return err(line, "twist rank must be positive");
                }
                let phi = if rank == 1 && !rhs.starts_with('[') {
                    vec![vec![parse_form(rhs, n, &params).map_err(|e| parse_err(line, "phi", e))?]]
                } else {
                    let inner = rhs.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(|| ModelError {
                        line,
                        message: "matrix connection must read `[[..]; [..]]`".into(),
                    })?;
                    let rows: Vec<Vec<ParamForm>> = inner
                        .split(';')
                        .map(|row| {
                            let row = row.trim().trim_start_matches('[').trim_end_matches(']');
                            row.split(',')
                                .map(|e| parse_form(e.trim(), n, &params).map_err(|e| parse_err(line, "phi", e)))
                                .collect()
                        })
                        .collect::<Result<_, _>>()?;
                    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
                        return err(line, format!("connection matrix must be {rank}x{rank}"));
                    }
                    rows
                };
                if twists.iter().any(|t| t.label == label) {
                    return err(line, format!("twist `{label}` declared twice"));
                }
                twists.push(TwistDecl { label, rank, phi });
            }
            "expect" => {
                let (lhs, rhs) = split_eq(raw)?;
                if lhs.split_whitespace().collect::<Vec<_>>() == ["expect", "samples_agree"] {
                    expect_samples_agree = Some(parse_bool(line, rhs)?);
                } else {
                    expect_raw.push(raw);
                }
            }
            "reference" => reference_raw.push(raw),
            other => return err(line, format!("unknown directive `{other}`")),
        }
    }

    let structure = match (structure_text, long_lines.is_empty()) {
        (Some(_), false) => return err(long_lines[0].0, "both shorthand `structure` and `d e<k>` lines given"),
        (Some((line, t)), true) => {
            parse_structure_equations(&t, n, &params).map_err(|e| parse_err(line, "structure", e))?
        }
        (None, false) => {
            let joined: String = long_lines.iter().map(|(_, t)| format!("{t}\n")).collect();
            parse_structure_equations(&joined, n, &params).map_err(|e| parse_err(long_lines[0].0, "structure", e))?
        }
        (None, true) => return err(0, "missing structure equations"),
    };
    let omega = omega.ok_or_else(|| ModelError { line: 0, message: "missing `symplectic omega = ...`".into() })?;

    let samples = match samples {
        Some(s) if s.is_empty() => return err(0, "`samples` is empty"),
        Some(s) => {
            if params.is_empty() {
                return err(0, "`samples` given without parameters");
            }
            s
        }
        None if params.is_empty() => vec![Vec::new()],
        None => return err(0, "parameters declared without `samples`"),
    };

    let char_names: Vec<String> = char_raw.iter().map(|(_, c, _)| c.clone()).collect();
    let mut characters = Vec::new();
    for (raw, cname, rhs) in &char_raw {
        let derivative = parse_form(rhs, n, &params).map_err(|e| parse_err(raw.line, "character derivative", e))?;
        characters.push(CharDecl { name: cname.clone(), derivative });
    }
    let mut weights =
        vec![vec![0; characters.len()]; if characters.is_empty() && weight_raw.is_empty() { 0 } else { n }];
    for (raw, k, rhs) in &weight_raw {
        weights[k - 1] = parse_weight(raw.line, rhs, &char_names)?;
    }
    if !gamma_rows.is_empty() && characters.is_empty() {
        return err(0, "`gamma_trivial` given without characters");
    }
    if gamma_rows.iter().any(|r| r.len() != characters.len()) {
        return err(0, format!("gamma rows must have {} entries", characters.len()));
    }

    let mut expectations = Vec::new();
    let mut references = Vec::new();
    let tagged = expect_raw.into_iter().map(|r| (r, false)).chain(reference_raw.into_iter().map(|r| (r, true)));
    for (raw, is_reference) in tagged {
        if let Some(e) = parse_expectation(raw, n, &params)? {
            if let Target::Twist(label) = &e.target {
                if !twists.iter().any(|t| &t.label == label) {
                    return err(raw.line, format!("expectation refers to unknown twist `{label}`"));
                }
            }
            if e.target == Target::Subcomplex && characters.is_empty() {
                return err(raw.line, "subcomplex expectation without characters");
            }
            if is_reference {
                references.push(e);
            } else {
                expectations.push(e);
            }
        }
    }

    Ok(ModelFile {
        name,
        n,
        params,
        structure,
        omega,
        constraints,
        samples,
        characters,
        weights,
        gamma_rows,
        twists,
        expectations,
        references,
        expect_samples_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_model() {
        let m = parse_model(
            "dim 4\nstructure (0,0,12,13)\nsymplectic omega = 14+23\nexpect BC dims from 1 = [2,4,2]\n",
            "g41",
        )
        .unwrap();
        assert_eq!(m.name, "g41");
        assert_eq!(m.samples, vec![Vec::<Scalar>::new()]);
        assert_eq!(m.expectations[0].check, Check::Dims { kind: DimKind::BottChern, from: 1, values: vec![2, 4, 2] });
    }

    #[test]
    fn parametric_model() {
        let text = "name p\ndim 2\nparam a b\nconstraint a + 2*b - 1 = 0\nconstraint distinct a b\n\
                    samples = [(1, 0), (3, -1)]\nd e2 = a*e1.2\nsymplectic omega = e1.2\n\
                    char X derivative = -a*e1\nweight e2 = X^1\ngamma_trivial rows = [[1]]\n\
                    twist t rank 1 phi = b*e1\nexpect twist t dR dims = [0,0,0]\nexpect samples_agree = true\n";
        let m = parse_model(text, "").unwrap();
        assert_eq!(m.params, vec!["a", "b"]);
        assert_eq!(m.samples.len(), 2);
        let Constraint::Linear(c) = &m.constraints[0] else { panic!() };
        assert!(c.holds(&m.samples[0]) && c.holds(&m.samples[1]));
        assert_eq!(m.weights, vec![vec![0], vec![1]]);
        assert_eq!(m.gamma_rows, vec![vec![1]]);
        assert_eq!(m.expect_samples_agree, Some(true));
    }

    #[test]
    fn references_are_separate() {
        let m = parse_model(
            "dim 2\nstructure (0,0)\nsymplectic omega = 12\nexpect dR dims = [1,2,1]\nreference BC dims from 1 = [3]\n",
            "r",
        )
        .unwrap();
        assert_eq!(m.expectations.len(), 1);
        assert_eq!(m.references[0].check, Check::Dims { kind: DimKind::BottChern, from: 1, values: vec![3] });
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_model("dim 4\nstructure (0,0,12)\nsymplectic omega = 12+34", "x").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_model("dim 4\nstructure (0,0,0,0)\nsymplectic omega = 12+34\nbogus", "x").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(parse_model("dim 4\nstructure (0,0,0,0)", "x").is_err());
    }

    #[test]
    fn matrices_and_weights() {
        assert_eq!(parse_int_matrix(1, "[[1,-1,0]; [0,1,-1]]").unwrap(), vec![vec![1, -1, 0], vec![0, 1, -1]]);
        assert_eq!(parse_int_matrix(1, "[[1,1]]").unwrap(), vec![vec![1, 1]]);
        let chars = vec!["X".to_string(), "Y".to_string()];
        assert_eq!(parse_weight(1, "X^-1 * Y^2", &chars).unwrap(), vec![-1, 2]);
        assert_eq!(parse_weight(1, "Y", &chars).unwrap(), vec![0, 1]);
    }
}
