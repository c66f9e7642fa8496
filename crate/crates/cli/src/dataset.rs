//! Loading inputs and turning them into analysis records.

use std::path::{Path, PathBuf};
use std::time::Instant;

use fca_rises::distributivity::{verdict, CheckOptions};
use fca_rises::rises::HeightBucket;
use fca_rises::{
    ConceptLattice, DistributivityVerdict, FormalContext, Format, LatticeOptions, Poset, RiseReport,
};
use serde::Serialize;

use crate::error::CliError;

/// Concepts allowed without `--large`.
pub const DEFAULT_CONCEPT_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub memory_budget: u64,
    pub large: bool,
}

impl Limits {
    /// Lattice options for a context of the given shape. The concept cap is
    /// the number of concepts whose extents and intents fit the budget,
    /// further limited to [`DEFAULT_CONCEPT_CAP`] unless `large` is set.
    pub fn lattice_options(&self, ctx: &FormalContext) -> LatticeOptions {
        let words = ctx.n_objects().div_ceil(64) + ctx.n_attributes().div_ceil(64);
        // two bit sets plus index entries and cover lists
        let per_concept = (words as u64 * 8 + 48) * 2 + 64;
        let mut cap = usize::try_from(self.memory_budget / per_concept).unwrap_or(usize::MAX);
        if !self.large {
            cap = cap.min(DEFAULT_CONCEPT_CAP);
        }
        LatticeOptions {
            max_concepts: Some(cap),
            memory_budget: self.memory_budget,
            ..LatticeOptions::default()
        }
    }
}

/// A context file, or a poset file analysed through its completion.
pub enum Input {
    Context(FormalContext),
    Poset(Poset),
}

impl Input {
    pub fn load(path: &Path) -> Result<Input, CliError> {
        let is_json = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            return Ok(Input::Poset(Poset::from_json(&text)?));
        }
        if Format::from_path(path).is_none() {
            return Err(CliError::Usage(format!(
                "{}: expected a .cxt, .csv or .json file",
                path.display()
            )));
        }
        if !path.is_file() {
            return Err(CliError::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
            ));
        }
        Ok(Input::Context(FormalContext::from_path(path)?))
    }

    /// The context whose concept lattice is analysed.
    pub fn context(&self) -> FormalContext {
        match self {
            Input::Context(c) => c.clone(),
            Input::Poset(p) => p.order_context(),
        }
    }
}

pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Context and poset files in `dir`, sorted by path.
pub fn list_inputs(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        if path.is_file() && matches!(ext.as_deref(), Some("cxt" | "csv" | "json")) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Everything computed for one dataset.
pub struct Analysis {
    pub context: FormalContext,
    pub lattice: ConceptLattice,
    pub report: RiseReport,
    pub millis: u128,
}

impl Analysis {
    pub fn run(input: &Input, limits: &Limits) -> Result<Analysis, CliError> {
        let start = Instant::now();
        let context = input.context();
        let lattice =
            ConceptLattice::from_context_with(&context, &limits.lattice_options(&context))?;
        let report = RiseReport::from_lattice(&lattice);
        Ok(Analysis {
            context,
            lattice,
            report,
            millis: start.elapsed().as_millis(),
        })
    }

    pub fn verdict(&self) -> Result<DistributivityVerdict, CliError> {
        Ok(verdict(
            &self.lattice,
            Some(&self.context),
            &CheckOptions::default(),
        )?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisRecord {
    pub dataset: String,
    pub size: usize,
    pub covers: usize,
    pub nur_join_abs: usize,
    pub nur_join_rel: f64,
    pub nur_meet_abs: usize,
    pub nur_meet_rel: f64,
    pub atoms_nonunit_meet: String,
    pub coatoms_nonunit_join: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<DistributivityVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub const RECORD_HEADER: [&str; 11] = [
    "dataset",
    "size",
    "covers",
    "nur_join_abs",
    "nur_join_rel",
    "nur_meet_abs",
    "nur_meet_rel",
    "atoms_nonunit_meet",
    "coatoms_nonunit_join",
    "millis",
    "error",
];

impl AnalysisRecord {
    pub fn new(dataset: String, a: &Analysis, timing: bool) -> AnalysisRecord {
        let r = &a.report;
        AnalysisRecord {
            dataset,
            size: r.lattice_size,
            covers: r.cover_count,
            nur_join_abs: r.nur_join_abs,
            nur_join_rel: r.nur_join_rel.hundredths() as f64 / 100.0,
            nur_meet_abs: r.nur_meet_abs,
            nur_meet_rel: r.nur_meet_rel.hundredths() as f64 / 100.0,
            atoms_nonunit_meet: r.atoms_nonunit_meet.to_string(),
            coatoms_nonunit_join: r.coatoms_nonunit_join.to_string(),
            millis: timing.then_some(a.millis),
            verdict: None,
            error: None,
        }
    }

    pub fn failed(dataset: String, error: &CliError) -> AnalysisRecord {
        AnalysisRecord {
            dataset,
            size: 0,
            covers: 0,
            nur_join_abs: 0,
            nur_join_rel: 0.0,
            nur_meet_abs: 0,
            nur_meet_rel: 0.0,
            atoms_nonunit_meet: String::new(),
            coatoms_nonunit_join: String::new(),
            millis: None,
            verdict: None,
            error: Some(error.to_string()),
        }
    }

    pub fn csv_row(&self) -> [String; 11] {
        let ok = self.error.is_none();
        let num = |v: usize| if ok { v.to_string() } else { String::new() };
        let rel = |v: f64| if ok { format!("{v:.2}") } else { String::new() };
        [
            self.dataset.clone(),
            num(self.size),
            num(self.covers),
            num(self.nur_join_abs),
            rel(self.nur_join_rel),
            num(self.nur_meet_abs),
            rel(self.nur_meet_rel),
            self.atoms_nonunit_meet.clone(),
            self.coatoms_nonunit_join.clone(),
            self.millis.map(|m| m.to_string()).unwrap_or_default(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

pub fn records_csv(records: &[AnalysisRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RECORD_HEADER).expect("writing to memory");
    for r in records {
        w.write_record(r.csv_row()).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

/// Non-unit meet-rise share per height, for plotting.
pub fn meet_profile(buckets: &[HeightBucket]) -> Vec<(usize, f64)> {
    buckets
        .iter()
        .map(|b| (b.height, b.nonunit as f64 / b.total as f64))
        .collect()
}
