use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use symplex::corpus::{corpus_dir, discover, run_all, summary};
use symplex::model::{load_model, LoadError};
use symplex::report::{build_report, complex_report_only, render, Format};
use symplex::run::{run_model, validate_model, Analysis, Selection};
use symplex_core::complex::parse_raw_complex;

#[derive(Parser)]
#[command(name = "symplex", version, about = "Exact symplectic cohomologies of Lie-algebra models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every validator on a model file.
    Validate { file: PathBuf },
    /// Compute dR, dLambda, Bott-Chern and Aeppli dimensions and verdicts.
    Cohomology {
        file: PathBuf,
        /// List representative cocycles.
        #[arg(long)]
        reps: bool,
        /// Also compute the named twisted complex (repeatable).
        #[arg(long = "twist", value_name = "LABEL")]
        twists: Vec<String>,
        /// Report on the lattice-trivial subcomplex instead.
        #[arg(long)]
        subcomplex: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cohomology of a raw bi-differential complex file.
    Raw {
        file: PathBuf,
        #[arg(long)]
        reps: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Golden regression over the model corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Ranks of the Lefschetz maps on de Rham cohomology.
    Lefschetz {
        file: PathBuf,
        #[arg(long = "twist", value_name = "LABEL")]
        twists: Vec<String>,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Run every model and compare with its expectations.
    Run {
        /// Glob over model file stems, e.g. `n*`.
        #[arg(long)]
        filter: Option<String>,
    },
}

const FAILURE: u8 = 1;
const USAGE: u8 = 2;

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn load(file: &Path) -> Result<symplex::ModelFile, ExitCode> {
    load_model(file).map_err(|e| match e {
        LoadError::Io(_) => fail(USAGE, e),
        LoadError::Model(_) => fail(FAILURE, format!("{}: {e}", file.display())),
    })
}

fn check_twists(model: &symplex::ModelFile, twists: &[String]) -> Result<(), ExitCode> {
    match twists.iter().find(|l| model.twist(l).is_none()) {
        Some(l) => Err(fail(USAGE, format!("model {} declares no twist `{l}`", model.name))),
        None => Ok(()),
    }
}

fn validate(file: PathBuf) -> ExitCode {
    let model = match load(&file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let problems = validate_model(&model);
    if problems.is_empty() {
        println!("ok: {}", model.name);
        ExitCode::SUCCESS
    } else {
        for p in &problems {
            eprintln!("{}: {p}", file.display());
        }
        ExitCode::from(FAILURE)
    }
}

fn cohomology(file: PathBuf, reps: bool, twists: Vec<String>, subcomplex: bool, format: Format) -> ExitCode {
    let model = match load(&file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    if let Err(code) = check_twists(&model, &twists) {
        return code;
    }
    if subcomplex && !model.has_weights() {
        return fail(USAGE, format!("model {} declares no characters; --subcomplex needs them", model.name));
    }
    let selection = Selection { twists, subcomplex };
    match run_model(&model, &selection) {
        Ok(outcome) => {
            print!("{}", render(&build_report(&model.name, &outcome, subcomplex, reps), format));
            ExitCode::SUCCESS
        }
        Err(e) => fail(FAILURE, e),
    }
}

fn raw(file: PathBuf, reps: bool, format: Format) -> ExitCode {
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => return fail(USAGE, format!("cannot read {}: {e}", file.display())),
    };
    match parse_raw_complex(&text) {
        Ok(c) => {
            let name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            print!("{}", render(&complex_report_only(&name, &Analysis::of(c), reps), format));
            ExitCode::SUCCESS
        }
        Err(e) => fail(FAILURE, format!("{}: {e}", file.display())),
    }
}

fn corpus_run(filter: Option<String>) -> ExitCode {
    let pattern = match filter.as_deref().map(glob::Pattern::new).transpose() {
        Ok(p) => p,
        Err(e) => return fail(USAGE, format!("bad filter: {e}")),
    };
    let dir = corpus_dir();
    let paths = match discover(&dir, pattern.as_ref()) {
        Ok(p) => p,
        Err(e) => return fail(USAGE, format!("cannot read corpus {}: {e}", dir.display())),
    };
    if paths.is_empty() {
        return fail(USAGE, format!("no models found in {}", dir.display()));
    }
    let results = run_all(&paths);
    print!("{}", summary(&results));
    if results.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(FAILURE)
    }
}

fn lefschetz(file: PathBuf, twists: Vec<String>) -> ExitCode {
    let model = match load(&file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    if let Err(code) = check_twists(&model, &twists) {
        return code;
    }
    let outcome = match run_model(&model, &Selection { twists, subcomplex: false }) {
        Ok(o) => o,
        Err(e) => return fail(FAILURE, e),
    };
    let head = outcome.headline();
    let n = model.n / 2;
    let sections = std::iter::once(("invariant".to_string(), &head.invariant))
        .chain(head.twists.iter().map(|(l, a)| (format!("twist {l}"), a)));
    for (title, a) in sections {
        println!("[{title}]");
        for l in &a.verdicts.lefschetz {
            println!(
                "k={}  [omega^{}]: H^{} -> H^{}  rank {}  ({} -> {})  injective: {}  surjective: {}",
                l.k,
                l.k,
                n - l.k,
                n + l.k,
                l.rank,
                l.source_dim,
                l.target_dim,
                l.injective,
                l.surjective
            );
        }
        let hlc = a.verdicts.hlc.map_or_else(|| "n/a".to_string(), |b| b.to_string());
        println!("hlc: {hlc}");
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Validate { file } => validate(file),
        Command::Cohomology { file, reps, twists, subcomplex, format } => {
            cohomology(file, reps, twists, subcomplex, format)
        }
        Command::Raw { file, reps, format } => raw(file, reps, format),
        Command::Corpus { action: CorpusAction::Run { filter } } => corpus_run(filter),
        Command::Lefschetz { file, twists } => lefschetz(file, twists),
    }
}
