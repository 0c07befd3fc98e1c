//! End-to-end acceptance checks, one printed line per criterion.
//!
//! Runs without the libtest harness so every line reaches stdout. The
//! process fails if any criterion fails, except those marked as a known
//! deviation from published values, which print FAIL with an explanation.

mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::SeedableRng;
use symplex::model::{Check, DimKind};
use symplex::run::{build_sample, run_model, Built, Selection};
use symplex::ModelFile;
use symplex_core::cohomology::{cohomology, del_debar, CohomologyKind};
use symplex_core::parse::parse_concrete_form;
use symplex_core::{BiDifferentialComplex, Matrix, Scalar};

use support::modp::{self, ModMatrix};
use support::random::{counts_f3, random_complex};
use support::{corpus_model, corpus_stems};

enum Outcome {
    Pass(String),
    Fail(String),
    /// Fails against published values for a documented reason; does not
    /// fail the run.
    Deviation(String),
}

fn pass_if(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome::Pass(summary)
    } else {
        Outcome::Fail(failures.join("; "))
    }
}

fn invariant(model: &ModelFile) -> symplex::run::Analysis {
    let outcome = run_model(model, &Selection::default()).unwrap();
    outcome.samples.into_iter().next().unwrap().invariant
}

fn built(model: &ModelFile, sample: usize) -> Built {
    build_sample(model, &model.samples[sample]).unwrap_or_else(|p| panic!("{}: {}", model.name, p.join("; ")))
}

/// Four-dimensional models: b_k, Bott-Chern, Aeppli, delta for k = 1, 2, 3
/// and the hard Lefschetz verdict.
fn four_dimensional_table() -> Outcome {
    type Row = (&'static str, [usize; 3], [usize; 3], [usize; 3], [i64; 3], bool);
    let table: [Row; 5] = [
        ("abelian_4", [4, 6, 4], [4, 6, 4], [4, 6, 4], [0, 0, 0], true),
        ("g3_1_plus_g1", [3, 4, 3], [3, 5, 3], [3, 5, 3], [0, 2, 0], false),
        ("g3_4m1_plus_g1", [2, 2, 2], [2, 2, 2], [2, 2, 2], [0, 0, 0], true),
        ("g3_5_0_plus_g1", [2, 2, 2], [2, 2, 2], [2, 2, 2], [0, 0, 0], true),
        ("g4_1", [2, 2, 2], [2, 4, 2], [2, 4, 2], [0, 4, 0], false),
    ];
    let mut failures = Vec::new();
    for (stem, dr, bc, a, delta, hlc) in table {
        let v = invariant(&corpus_model(stem)).verdicts;
        let got = (&v.dims.dr[1..4], &v.dims.bc[1..4], &v.dims.aeppli[1..4], &v.delta[1..4], v.hlc);
        if got != (&dr[..], &bc[..], &a[..], &delta[..], Some(hlc)) {
            failures.push(format!("{stem}: computed {got:?}"));
        }
    }
    pass_if(failures, "5 four-dimensional models: b_k, BC, A, delta and HLC for k = 1..3".into())
}

fn vectors(built: &Built, k: usize, forms: &[&str]) -> Vec<Vec<Scalar>> {
    forms.iter().map(|f| built.ops.basis.to_vector(&parse_concrete_form(f, built.ops.dim()).unwrap(), k)).collect()
}

fn mod_columns(n: usize, vs: &[Vec<Scalar>]) -> ModMatrix {
    ModMatrix::of(&Matrix::from_columns(n, vs))
}

/// The stated g4.1 cocycles are closed and their classes span each space.
fn g41_spans() -> Outcome {
    let model = corpus_model("g4_1");
    let b = built(&model, 0);
    let c = BiDifferentialComplex::from_presentation(&b.presentation, &b.ops).unwrap();
    let bc: [(usize, &[&str]); 3] =
        [(1, &["e1", "e2"]), (2, &["e1.2", "e1.3", "e1.4", "e2.3"]), (3, &["e1.2.3", "e1.2.4"])];
    let aeppli: [(usize, &[&str]); 3] =
        [(1, &["e3", "e4"]), (2, &["e1.4", "e2.3", "e2.4", "e3.4"]), (3, &["e1.3.4", "e2.3.4"])];
    let mut failures = Vec::new();
    for (kind, rows) in [(CohomologyKind::BottChern, bc), (CohomologyKind::Aeppli, aeppli)] {
        for (k, forms) in rows {
            let n = c.dims[k];
            let vs = vectors(&b, k, forms);
            let span = mod_columns(n, &vs);
            let ki = k as i64;
            let dd = ModMatrix::of(&del_debar(&c, k));
            let (closed, exact) = match kind {
                CohomologyKind::BottChern => {
                    let both = ModMatrix::of(&c.del_from(ki)).stack(&ModMatrix::of(&c.debar_from(ki)));
                    (both.mul(&span).rank() == 0, dd)
                }
                _ => {
                    let exact = ModMatrix::of(&c.del_from(ki - 1)).beside(&ModMatrix::of(&c.debar_from(ki + 1)));
                    (dd.mul(&span).rank() == 0, exact)
                }
            };
            let independent = exact.beside(&span).rank() == exact.rank() + forms.len();
            let space = cohomology(&c, kind, k);
            let classes: Vec<Vec<Scalar>> = vs.iter().filter_map(|v| space.class_of(v)).collect();
            let engine = classes.len() == forms.len() && Matrix::from_rows(classes).rank() == space.dim();
            if !(closed && independent && engine && space.dim() == forms.len()) {
                failures.push(format!(
                    "{} degree {k}: closed {closed}, independent {independent}, engine {engine}, dim {}",
                    kind.short_name(),
                    space.dim()
                ));
            }
        }
    }
    pass_if(failures, "g4.1 Bott-Chern and Aeppli representatives in degrees 1..3 are closed and span".into())
}

/// Six-dimensional models: b_k must match the published rows; the engine
/// must agree with a rank oracle over F_p; published BC/A/delta columns are
/// compared and reported.
fn six_dimensional_table() -> Outcome {
    let mut rows = 0;
    let mut failures = Vec::new();
    let mut reproduced = Vec::new();
    let mut differing = 0;
    for stem in corpus_stems() {
        let model = corpus_model(&stem);
        if model.n != 6 || model.references.is_empty() {
            continue;
        }
        rows += 1;
        let a = invariant(&model);
        let oracle = modp::dims(&a.complex);
        let d = &a.verdicts.dims;
        if (&oracle.dr, &oracle.debar, &oracle.bc, &oracle.aeppli) != (&d.dr, &d.debar, &d.bc, &d.aeppli) {
            failures.push(format!("{stem}: engine {d:?} differs from F_p oracle {oracle:?}"));
        }
        if d.aeppli[1] != d.dr[1] {
            failures.push(format!("{stem}: A^1 = {} but b_1 = {}", d.aeppli[1], d.dr[1]));
        }
        let mut same = true;
        for r in &model.references {
            let Check::Dims { kind, from, values } = &r.check else { continue };
            let computed: Vec<i64> = match kind {
                DimKind::DeRham => d.dr.iter().map(|&x| x as i64).collect(),
                DimKind::BottChern => d.bc.iter().map(|&x| x as i64).collect(),
                DimKind::Aeppli => d.aeppli.iter().map(|&x| x as i64).collect(),
                DimKind::Delta => a.verdicts.delta.clone(),
                _ => continue,
            };
            let window = &computed[*from..from + values.len()];
            if window != &values[..] {
                if *kind == DimKind::DeRham {
                    failures.push(format!("{stem}: b_k {window:?}, published {values:?}"));
                }
                same = false;
            }
        }
        if same {
            reproduced.push(stem);
        } else {
            differing += 1;
        }
    }
    if !failures.is_empty() || rows != 26 {
        return Outcome::Fail(format!("{rows} rows; {}", failures.join("; ")));
    }
    let summary = format!(
        "{rows} six-dimensional rows: b_k match all; engine BC/A equal the F_p rank oracle and A^1 = b_1 on all; \
         published BC/A/delta reproduced in {} ({}), differ in {differing}",
        reproduced.len(),
        reproduced.join(", ")
    );
    if differing == 0 {
        Outcome::Pass(summary)
    } else {
        Outcome::Deviation(format!("{summary}; see README"))
    }
}

/// Nakamura manifolds: the lattice-trivial subcomplex has zero differentials,
/// so every cohomology equals the cochain space.
fn nakamura() -> Outcome {
    let mut failures = Vec::new();
    for (stem, dims) in [("nakamura_a", [1, 2, 5, 8, 5, 2, 1]), ("nakamura_b", [1, 2, 3, 4, 3, 2, 1])] {
        let model = corpus_model(stem);
        let outcome = run_model(&model, &Selection { twists: vec![], subcomplex: true }).unwrap();
        let a = outcome.samples[0].subcomplex.as_ref().unwrap();
        let c = &a.complex;
        let v = &a.verdicts;
        let zero = c.del.iter().chain(&c.debar).all(Matrix::is_zero);
        let ok = c.dims == dims
            && zero
            && v.dims.dr == dims
            && v.dims.bc == dims
            && v.dims.aeppli == dims
            && v.dd_lambda_lemma
            && v.hlc == Some(true);
        if !ok {
            failures.push(format!(
                "{stem}: dims {:?}, zero differentials {zero}, dR {:?}, BC {:?}",
                c.dims, v.dims.dr, v.dims.bc
            ));
        }
    }
    pass_if(
        failures,
        "Nakamura (a) and (b): subcomplex dims, zero differentials, BC = dR = A_Gamma, lemma holds".into(),
    )
}

/// Sawai: twisted dR and Bott-Chern dims on every sample, BC → dR onto in
/// every degree but not injective in degree 3, no lemma, and HLC untwisted.
fn sawai() -> Outcome {
    let model = corpus_model("sawai");
    let selection = Selection { twists: vec!["alpha1".into()], subcomplex: true };
    let outcome = run_model(&model, &selection).unwrap();
    let mut failures = Vec::new();
    for s in &outcome.samples {
        let t = &s.twists["alpha1"].verdicts;
        let label = symplex::run::format_sample(&s.values);
        let checks = [
            ("dR", t.dims.dr == [0, 1, 2, 2, 2, 1, 0, 0, 0]),
            ("BC", t.dims.bc == [0, 1, 2, 3, 4, 3, 2, 1, 0]),
            ("surjective", t.bc_to_dr_surjective.iter().all(|&b| b)),
            ("injective in degree 3", !t.bc_to_dr_injective[3]),
            ("lemma fails", !t.dd_lambda_lemma),
            ("untwisted HLC", s.invariant.verdicts.hlc == Some(true)),
            ("subcomplex HLC", s.subcomplex.as_ref().unwrap().verdicts.hlc == Some(true)),
        ];
        for (what, ok) in checks {
            if !ok {
                failures.push(format!("{label}: {what}"));
            }
        }
    }
    pass_if(
        failures,
        format!("Sawai on {} samples: twisted dR/BC, BC->dR onto everywhere, not injective at 3, lemma fails, untwisted HLC", outcome.samples.len()),
    )
}

fn zero(rows: usize, cols: usize) -> Matrix {
    Matrix::zeros(rows, cols)
}

fn int(n: i64) -> Scalar {
    Scalar::from_integer(n)
}

/// Operator and duality identities on the invariant complex of one model,
/// plus dimension identities on its subcomplex when it has one.
fn identities(stem: &str) -> Vec<String> {
    let model = corpus_model(stem);
    let b = built(&model, 0);
    let ops = &b.ops;
    let c = BiDifferentialComplex::from_presentation(&b.presentation, ops).unwrap();
    let top = ops.dim();
    let n = ops.n_half;
    let dims = &c.dims;
    let l = |k: usize| ops.l.block(k).clone();
    let lam = |k: usize| ops.lambda.block(k).clone();
    let h = |k: usize| ops.h_block(k);
    let d = |k: usize| c.del[k].clone();
    let dl = |k: usize| c.debar[k].clone();
    let mut out = Vec::new();
    let mut expect = |what: &str, k: usize, lhs: Matrix, rhs: Matrix| {
        if lhs != rhs {
            out.push(format!("{stem}: {what} fails in degree {k}"));
        }
    };
    let iso = |m: &Matrix, k: usize| m.rows() == dims[k] && m.rank() == dims[k];
    for k in 0..=top {
        let dk = dims[k];
        let up1 = if k < top { dims[k + 1] } else { 0 };
        let down1 = if k >= 1 { dims[k - 1] } else { 0 };

        let lam_l = if k + 2 <= top { &lam(k + 2) * &l(k) } else { zero(dk, dk) };
        let l_lam = if k >= 2 { &l(k - 2) * &lam(k) } else { zero(dk, dk) };
        expect("[Λ,L] = H", k, &lam_l - &l_lam, h(k));
        if k + 2 <= top {
            expect("[L,H] = 2L", k, &(&l(k) * &h(k)) - &(&h(k + 2) * &l(k)), l(k).scale(&int(2)));
        }
        if k >= 2 {
            expect("[Λ,H] = −2Λ", k, &(&lam(k) * &h(k)) - &(&h(k - 2) * &lam(k)), lam(k).scale(&int(-2)));
        }
        if k + 3 <= top {
            expect("[d,L] = 0", k, &(&d(k + 2) * &l(k)) - &(&l(k + 1) * &d(k)), zero(dims[k + 3], dk));
        }
        if k < top {
            let first = if k + 2 <= top { &dl(k + 2) * &l(k) } else { zero(up1, dk) };
            let second = if k >= 1 { &l(k - 1) * &dl(k) } else { zero(up1, dk) };
            expect("[d^Λ,L] = d", k, &first - &second, d(k));
        }
        if k >= 1 {
            let first = if k >= 2 { &d(k - 2) * &lam(k) } else { zero(down1, dk) };
            let second = if k < top { &lam(k + 1) * &d(k) } else { zero(down1, dk) };
            expect("[d,Λ] = d^Λ", k, &first - &second, dl(k));
            let star = &ops.star;
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            let sds = &(&star[top - k + 1] * &d(top - k)) * &star[k];
            expect("d^Λ = (−1)^(k+1) ⋆d⋆", k, dl(k), sds.scale(&sign));
        }
        if k >= 3 {
            expect("[d^Λ,Λ] = 0", k, &(&dl(k - 2) * &lam(k)) - &(&lam(k - 1) * &dl(k)), zero(dims[k - 3], dk));
        }
        expect("⋆² = 1", k, &ops.star[top - k] * &ops.star[k], Matrix::identity(dk));
        if k <= n && !iso(&ops.l_power(k, n - k), k) {
            expect("L^(n-k) is an isomorphism", k, zero(0, 0), Matrix::identity(1));
        }
    }

    let outcome = run_model(&model, &Selection { twists: vec![], subcomplex: model.has_weights() }).unwrap();
    let sample = &outcome.samples[0];
    for (label, a) in
        std::iter::once(("invariant", &sample.invariant)).chain(sample.subcomplex.as_ref().map(|s| ("subcomplex", s)))
    {
        let v = &a.verdicts;
        let top = a.complex.len() - 1;
        for k in 0..=top {
            if v.dims.debar[k] != v.dims.dr[top - k] {
                out.push(format!("{stem} {label}: dim H_dΛ^{k} ≠ dim H_dR^{}", top - k));
            }
            if v.dims.bc[k] != v.dims.aeppli[top - k] {
                out.push(format!("{stem} {label}: dim H_BC^{k} ≠ dim H_A^{}", top - k));
            }
        }
        if !v.delta_nonnegative() {
            out.push(format!("{stem} {label}: negative delta {:?}", v.delta));
        }
        if !v.equivalences_agree() {
            out.push(format!("{stem} {label}: HLC, delta, Brylinski and lemma disagree"));
        }
    }
    out
}

fn property_suites() -> Outcome {
    let stems = corpus_stems();
    let failures: Vec<String> = stems.iter().flat_map(|s| identities(s)).collect();
    pass_if(
        failures,
        format!(
            "{} models: sl2 relations, [d,L] = 0, [d^Λ,L] = d, [d,Λ] = d^Λ, [d^Λ,Λ] = 0, ⋆² = 1, d^Λ = ±⋆d⋆, \
             L^(n-k) iso, delta >= 0, dΛ/dR and BC/A dualities, verdicts agree",
            stems.len()
        ),
    )
}

/// Random sums of indecomposables under unimodular base change, against a
/// brute-force count over F_3 and the F_p rank oracle.
fn random_complexes() -> Outcome {
    const COUNT: usize = 150;
    let mut rng = StdRng::seed_from_u64(0x5eed_c0de);
    let mut failures = Vec::new();
    for i in 0..COUNT {
        let ic = random_complex(&mut rng, 12);
        let c = ic.to_core();
        let v = symplex_core::verdicts(&c);
        let f3 = counts_f3(&ic);
        let fp = modp::dims(&c);
        let engine = (&v.dims.dr, &v.dims.debar, &v.dims.bc, &v.dims.aeppli);
        if engine != (&f3.dr, &f3.debar, &f3.bc, &f3.aeppli) || engine != (&fp.dr, &fp.debar, &fp.bc, &fp.aeppli) {
            failures.push(format!(
                "complex {i} {:?} ({}): engine {engine:?}, F_3 {f3:?}",
                ic.dims,
                ic.summands.join(" + ")
            ));
        }
    }
    pass_if(failures, format!("{COUNT} random complexes of total dimension <= 12 match F_3 enumeration and F_p ranks"))
}

/// Generic Sawai samples agree; a sample with a1 = a2 is flagged.
fn genericity() -> Outcome {
    let mut model = corpus_model("sawai");
    let degenerate: Vec<Scalar> = [1, 1, -2].into_iter().map(Scalar::from_integer).collect();
    model.samples.push(degenerate.clone());
    let outcome = run_model(&model, &Selection { twists: vec!["alpha1".into()], subcomplex: true }).unwrap();
    let mut failures = Vec::new();
    if !outcome.samples_agree() {
        failures.push("generic samples disagree".into());
    }
    if outcome.generic().count() != 3 {
        failures.push(format!("{} generic samples", outcome.generic().count()));
    }
    let flagged = outcome.samples.iter().find(|s| s.values == degenerate).unwrap();
    if !flagged.non_generic.iter().any(|r| r == "a1 = a2") {
        failures.push(format!("(1,1,-2) flagged as {:?}", flagged.non_generic));
    }
    let differs = flagged.twists["alpha1"].verdicts.dims != outcome.headline().twists["alpha1"].verdicts.dims;
    pass_if(
        failures,
        format!("3 generic Sawai samples agree; (1,1,-2) flagged non-generic (twisted dims differ: {differs})"),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, four_dimensional_table),
        (2, g41_spans),
        (3, six_dimensional_table),
        (4, nakamura),
        (5, sawai),
        (6, property_suites),
        (7, random_complexes),
        (8, genericity),
    ];
    let mut failed = false;
    for (n, f) in criteria {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let message = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::Fail(format!("panicked: {message}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Outcome::Pass(s) => println!("criterion {n}: PASS  {s}  [{secs:.1}s]"),
            Outcome::Fail(s) => {
                failed = true;
                println!("criterion {n}: FAIL  {s}  [{secs:.1}s]");
            }
            Outcome::Deviation(s) => println!("criterion {n}: FAIL (known deviation)  {s}  [{secs:.1}s]"),
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
