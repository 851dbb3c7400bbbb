//! Scenario-driven runs: validation, execution, CSV emission and reports.
//!
//! An output directory holds `scenario.toml` (the canonical scenario with all
//! defaults written out), one or more CSV files per analysis, an
//! `<analysis>.error` file for each analysis that failed, and `report.txt`.

mod catalogue;
mod report;
mod run;
mod scenario;

pub use catalogue::{catalogue_scenario, catalogue_toml, examples_catalogue};
pub use report::{build_report, Report};
pub use scenario::{
    Analysis, ConclusionSection, CurveSection, DeficiencySection, DominanceSection, FieldError, GrowthSection,
    Operator, Prepared, ReduceSection, Scenario, ScenarioError,
};

use std::fs;
use std::path::{Path, PathBuf};

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub grid: Option<String>,
    pub trim: Option<f64>,
    pub seed: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, s: &mut Scenario) {
        if let Some(t) = self.tol {
            s.tol = t;
        }
        if let Some(g) = &self.grid {
            s.grid = Some(g.clone());
        }
        if let Some(t) = self.trim {
            s.trim = t;
        }
        if let Some(x) = self.seed {
            s.seed = x;
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Report(String),
    #[error("report.txt differs from the recomputed report (first difference at line {line})")]
    Mismatch { line: usize },
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

/// Output directory: `out`, else the scenario's `output`, else `out/<name>`.
pub fn output_dir(s: &Scenario, out: Option<&Path>) -> PathBuf {
    match (out, &s.output) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(o)) => PathBuf::from(o),
        (None, None) => Path::new("out").join(&s.name),
    }
}

/// Runs every analysis in order, writes the artifacts into `dir` and
/// returns the report. A failing analysis leaves an `.error` file and does
/// not stop the others.
pub fn run(s: &Scenario, dir: &Path) -> Result<Report, HarnessError> {
    let prepared = s.prepare()?;
    fs::create_dir_all(dir).map_err(io(dir))?;
    let write = |name: &str, text: &str| -> Result<(), HarnessError> {
        let p = dir.join(name);
        fs::write(&p, text).map_err(io(&p))
    };
    write("scenario.toml", &s.to_toml())?;
    for &a in &s.analyses {
        let stale = dir.join(format!("{}.error", a.name()));
        if stale.exists() {
            fs::remove_file(&stale).map_err(io(&stale))?;
        }
        match run::run_analysis(&prepared, a) {
            Ok(files) => {
                for (name, text) in files {
                    write(&name, &text)?;
                }
            }
            Err(msg) => write(&format!("{}.error", a.name()), &format!("{msg}\n"))?,
        }
    }
    let report = build_report(dir).map_err(HarnessError::Report)?;
    write("report.txt", &report.text)?;
    Ok(report)
}

/// Recomputes the report from the CSVs in `dir` and compares it with the
/// stored `report.txt`.
pub fn verify(dir: &Path) -> Result<Report, HarnessError> {
    let path = dir.join("report.txt");
    let stored = fs::read_to_string(&path).map_err(io(&path))?;
    let report = build_report(dir).map_err(HarnessError::Report)?;
    if stored != report.text {
        let line = stored.lines().zip(report.text.lines()).position(|(a, b)| a != b).unwrap_or_else(|| {
            stored.lines().count().min(report.text.lines().count())
        });
        return Err(HarnessError::Mismatch { line: line + 1 });
    }
    Ok(report)
}
