mod dataset;
mod error;
mod svg;

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fca_rises::distributivity::{is_join_distributive, is_meet_distributive};
use fca_rises::lattice::DEFAULT_MEMORY_BUDGET;
use fca_rises::random::{random_context, rng};
use fca_rises::{ConceptLattice, Format, Method};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use dataset::{dataset_name, list_inputs, records_csv, Analysis, AnalysisRecord, Input, Limits};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "fca-rises",
    version,
    about = "Join- and meet-rises of concept lattices"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Memory available for lattice construction, in bytes.
    #[arg(long, global = true, default_value_t = DEFAULT_MEMORY_BUDGET)]
    memory_budget: u64,
    /// Seed for randomized self-checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Lift the default cap on the number of concepts.
    #[arg(long, global = true)]
    large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Rise statistics for one context (.cxt, .csv) or poset (.json).
    Analyze {
        path: PathBuf,
        /// Add the distributivity verdict.
        #[arg(long)]
        check: bool,
        /// Write per-cover rises.
        #[arg(long, value_name = "FILE")]
        covers_csv: Option<PathBuf>,
        /// Write non-unit counts per height.
        #[arg(long, value_name = "FILE")]
        by_height_csv: Option<PathBuf>,
        /// Write the meet-rise height profile as SVG.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        /// Write concepts and covers as JSON.
        #[arg(long, value_name = "FILE")]
        dump_lattice: Option<PathBuf>,
        /// Include wall-clock time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// One row per dataset in a directory, sorted by lattice size.
    Table {
        dir: PathBuf,
        #[arg(long)]
        timing: bool,
    },
    /// Scatter and height-profile charts for the given files or directories.
    Plots {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out_dir: PathBuf,
    },
    /// Dedekind-MacNeille completion of a poset.
    Dm {
        path: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Distributivity verdict only.
    Check {
        #[arg(required_unless_present = "random")]
        path: Option<PathBuf>,
        /// Instead of a file, compare all checkers on N random contexts.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
    },
    /// Convert between Burmeister (.cxt) and CSV contexts.
    Convert { input: PathBuf, output: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let limits = Limits {
        memory_budget: cli.memory_budget,
        large: cli.large,
    };
    match &cli.command {
        Command::Analyze {
            path,
            check,
            covers_csv,
            by_height_csv,
            svg,
            dump_lattice,
            timing,
        } => {
            let input = Input::load(path)?;
            let a = Analysis::run(&input, &limits)?;
            let name = dataset_name(path);
            let mut record = AnalysisRecord::new(name.clone(), &a, *timing);
            if *check {
                record.verdict = Some(a.verdict()?);
            }
            if let Some(p) = covers_csv {
                write_file(p, &a.report.covers_csv())?;
            }
            if let Some(p) = by_height_csv {
                write_file(p, &a.report.by_height_csv())?;
            }
            if let Some(p) = svg {
                let profile = dataset::meet_profile(&a.report.by_height_meet);
                write_file(p, &svg::height_profiles(&[(name, profile)]))?;
            }
            if let Some(p) = dump_lattice {
                write_file(p, &to_json(&a.lattice.to_dump(Some(&a.context)))?)?;
            }
            match cli.format {
                OutputFormat::Json => emit(&to_json(&record)?),
                OutputFormat::Csv => emit(&records_csv(&[record])),
            }
        }
        Command::Table { dir, timing } => {
            let mut records = analyse_all(&list_inputs(dir)?, &limits, *timing);
            // failed rows last, then by size, then by name
            records.sort_by(|a, b| {
                (a.error.is_some(), a.size, &a.dataset).cmp(&(
                    b.error.is_some(),
                    b.size,
                    &b.dataset,
                ))
            });
            for r in records.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "warning: {}: {}",
                    r.dataset,
                    r.error.as_deref().unwrap_or_default()
                );
            }
            match cli.format {
                OutputFormat::Json => emit(&to_json(&records)?),
                OutputFormat::Csv => emit(&records_csv(&records)),
            }
        }
        Command::Plots { inputs, out_dir } => {
            let mut files = Vec::new();
            for p in inputs {
                if p.is_dir() {
                    files.extend(list_inputs(p)?);
                } else {
                    files.push(p.clone());
                }
            }
            let mut ok = Vec::new();
            for f in &files {
                let name = dataset_name(f);
                match Input::load(f).and_then(|i| Analysis::run(&i, &limits)) {
                    Ok(a) => ok.push((name, a.report)),
                    Err(e) => eprintln!("warning: {name}: {e}"),
                }
            }
            if ok.is_empty() {
                return Err(CliError::Usage("no dataset could be analysed".into()));
            }
            ok.sort_by(|a, b| (a.1.cover_count, &a.0).cmp(&(b.1.cover_count, &b.0)));
            let points: Vec<svg::ScatterPoint> = ok
                .iter()
                .map(|(name, r)| svg::ScatterPoint {
                    label: name.clone(),
                    covers: r.cover_count,
                    join_rel: r.nur_join_rel.value(),
                    meet_rel: r.nur_meet_rel.value(),
                })
                .collect();
            let profiles: Vec<(String, Vec<(usize, f64)>)> = ok
                .iter()
                .map(|(name, r)| (name.clone(), dataset::meet_profile(&r.by_height_meet)))
                .collect();
            std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
            write_file(&out_dir.join("scatter.svg"), &svg::scatter(&points))?;
            write_file(
                &out_dir.join("heights.svg"),
                &svg::height_profiles(&profiles),
            )?;
            Ok(())
        }
        Command::Dm { path, out } => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let poset = fca_rises::Poset::from_json(&text)?;
            let ctx = poset.order_context();
            let dm = poset.dm_completion_with(&limits.lattice_options(&ctx))?;
            let dump = dm.to_json(&poset);
            let body = match cli.format {
                OutputFormat::Json => to_json(&dump)?,
                OutputFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["element", "concept"])
                        .expect("writing to memory");
                    for (name, c) in &dump.iota {
                        w.write_record([name.as_str(), &c.to_string()])
                            .expect("writing to memory");
                    }
                    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8")
                }
            };
            match out {
                Some(p) => write_file(p, &body),
                None => emit(&body),
            }
        }
        Command::Check { path, random } => {
            if let Some(n) = random {
                return random_self_check(*n, cli.seed, cli.format);
            }
            let path = path.as_ref().expect("clap enforces a path");
            let input = Input::load(path)?;
            let a = Analysis::run(&input, &limits)?;
            let v = a.verdict()?;
            match cli.format {
                OutputFormat::Json => emit(&to_json(&v)?),
                OutputFormat::Csv => {
                    let mut rows: BTreeMap<String, bool> = v.method_agreement.clone();
                    rows.insert("distributive".into(), v.distributive);
                    rows.insert("join_distributive".into(), v.join_distributive);
                    rows.insert("meet_distributive".into(), v.meet_distributive);
                    rows.insert("modular".into(), v.modular);
                    rows.insert("semimodular".into(), v.semimodular);
                    rows.insert("dually_semimodular".into(), v.dually_semimodular);
                    let mut out = String::from("property,value\n");
                    for (k, val) in rows {
                        out.push_str(&format!("{k},{val}\n"));
                    }
                    emit(&out)
                }
            }
        }
        Command::Convert { input, output } => {
            let ctx = match Input::load(input)? {
                Input::Context(c) => c,
                Input::Poset(_) => {
                    return Err(CliError::Usage("convert expects a context file".into()))
                }
            };
            let format = Format::from_path(output).ok_or_else(|| {
                CliError::Usage(format!(
                    "{}: expected a .cxt or .csv target",
                    output.display()
                ))
            })?;
            write_file(output, &ctx.write(format))
        }
    }
}

#[derive(Serialize)]
struct SelfCheck {
    seed: u64,
    contexts: usize,
    join_distributive: usize,
    meet_distributive: usize,
    disagreements: Vec<String>,
}

/// Every join- and meet-distributivity method on `n` seeded random contexts
/// of at most 8 × 8.
fn random_self_check(n: usize, seed: u64, format: OutputFormat) -> Result<(), CliError> {
    let mut r = rng(seed);
    let contexts: Vec<_> = (0..n)
        .map(|_| {
            let g = r.gen_range(1..=8);
            let m = r.gen_range(1..=8);
            let d = r.gen_range(0.1..0.9);
            random_context(&mut r, g, m, d)
        })
        .collect();
    let results: Vec<(bool, bool, Option<String>)> = contexts
        .par_iter()
        .enumerate()
        .map(|(i, ctx)| {
            let lat = ConceptLattice::from_context(ctx);
            let jd: Vec<bool> = Method::ALL
                .iter()
                .map(|&m| {
                    is_join_distributive(&lat, m, Some(ctx))
                        .expect("small contexts stay within every method's limits")
                })
                .collect();
            let md: Vec<bool> = Method::ALL
                .iter()
                .map(|&m| {
                    is_meet_distributive(&lat, m, Some(ctx))
                        .expect("small contexts stay within every method's limits")
                })
                .collect();
            let bad = jd.iter().any(|&v| v != jd[0]) || md.iter().any(|&v| v != md[0]);
            (
                jd[0],
                md[0],
                bad.then(|| format!("context {i}: join {jd:?}, meet {md:?}")),
            )
        })
        .collect();
    let report = SelfCheck {
        seed,
        contexts: n,
        join_distributive: results.iter().filter(|r| r.0).count(),
        meet_distributive: results.iter().filter(|r| r.1).count(),
        disagreements: results.into_iter().filter_map(|r| r.2).collect(),
    };
    match format {
        OutputFormat::Json => emit(&to_json(&report)?)?,
        OutputFormat::Csv => emit(&format!(
            "seed,contexts,join_distributive,meet_distributive,disagreements\n{},{},{},{},{}\n",
            report.seed,
            report.contexts,
            report.join_distributive,
            report.meet_distributive,
            report.disagreements.len()
        ))?,
    }
    if report.disagreements.is_empty() {
        Ok(())
    } else {
        Err(CliError::Core(fca_rises::Error::CheckerDisagreement(
            report.disagreements.join("; "),
        )))
    }
}

fn analyse_all(files: &[PathBuf], limits: &Limits, timing: bool) -> Vec<AnalysisRecord> {
    files
        .par_iter()
        .map(|f| {
            let name = dataset_name(f);
            match Input::load(f).and_then(|i| Analysis::run(&i, limits)) {
                Ok(a) => AnalysisRecord::new(name, &a, timing),
                Err(e) => AnalysisRecord::failed(name, &e),
            }
        })
        .collect()
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(fca_rises::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
