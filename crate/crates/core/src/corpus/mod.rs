//! Scenario files, the built-in corpus and the check runner.

mod builders;
mod oracle;
mod registry;
mod run;
mod scenario;

pub use builders::{corpus_build, corpus_names, darboux_file, example_j_file, heis6_file, CORPUS, DARBOUX_DEFAULT};
pub use oracle::{numeric_oracle, oracle_mean_curvature, OracleError, MAX_ATTEMPTS, ORACLE_IDENTITIES};
pub use registry::{registry_key, CHECK_REGISTRY};
pub use run::{build_metric_pair, run_checks, CheckReport, Group, Overall, ReportEntry, RunOptions, Selection};
pub use scenario::{load_scenario, parse_scenario, save_scenario, Expected, Scenario, ScenarioError, ScenarioFile};
