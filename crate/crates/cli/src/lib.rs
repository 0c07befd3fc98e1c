//! Model files, the computation pipeline, golden checks and report
//! rendering behind the `symplex` command.

pub mod corpus;
pub mod golden;
pub mod model;
pub mod report;
pub mod run;

pub use model::{load_model, parse_model, ModelFile};
pub use report::{build_report, render, Format, ResultReport};
pub use run::{run_model, Selection};
