//! Command-line frontend: score document sets, compare similarity measures
//! over string pairs, and aggregate score distributions over a corpus.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use idcorr::{
    score_set, similarity, AttributeDictionary, DocumentSet, IdentityDocument,
    ScoreDistribution, SimilarityMeasure,
};

#[derive(Parser)]
#[command(name = "idcorr", version, about = "Correlation scoring for structured identity documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Score a set of identity documents against each other
    Score {
        /// Document files, or a directory of .json files (one per document;
        /// the file stem becomes the document id)
        #[arg(long = "in", required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        /// Attribute dictionary override (JSON); IDCORR_DICT is the fallback
        #[arg(long)]
        dict: Option<PathBuf>,
        /// Report format
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run all seven similarity measures over string pairs from a CSV
    CompareMetrics {
        /// Input CSV with columns `a` and `b`
        #[arg(long)]
        pairs: PathBuf,
        /// Output CSV path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate attribute-score distributions over a corpus directory
    /// (one subdirectory per person's document set)
    Distribution {
        #[arg(long)]
        corpus: PathBuf,
        /// Histogram bucket width; must divide 1.0 evenly
        #[arg(long, default_value_t = 0.1)]
        bucket: f64,
        /// Output CSV path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Internal(String),
}

type CliResult<T> = Result<T, CliError>;

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Score {
            input,
            dict,
            format,
            out,
        } => cmd_score(&input, dict.as_deref(), format, out.as_deref()),
        Command::CompareMetrics { pairs, out } => cmd_compare_metrics(&pairs, out.as_deref()),
        Command::Distribution {
            corpus,
            bucket,
            out,
        } => cmd_distribution(&corpus, bucket, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(message)) => {
            eprintln!("internal error: {message}");
            ExitCode::from(1)
        }
    }
}

/// Expands `--in` arguments: directories become their .json files, sorted
/// by file name for reproducible document order.
fn expand_inputs(inputs: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for path in inputs {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| usage(format!("cannot read directory {}: {e}", path.display())))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

/// Loads every file as a document; `Err` carries one diagnostic per file
/// that failed.
fn try_load_documents(files: &[PathBuf]) -> Result<Vec<IdentityDocument>, Vec<String>> {
    let mut documents = Vec::new();
    let mut diagnostics = Vec::new();
    for path in files {
        let doc_id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match fs::read_to_string(path) {
            Ok(text) => match IdentityDocument::parse(&text, doc_id) {
                Ok(doc) => documents.push(doc),
                Err(e) => diagnostics.push(format!("{}: {e}", path.display())),
            },
            Err(e) => diagnostics.push(format!("{}: {e}", path.display())),
        }
    }
    if diagnostics.is_empty() {
        Ok(documents)
    } else {
        Err(diagnostics)
    }
}

fn load_dictionary(flag: Option<&Path>) -> CliResult<AttributeDictionary> {
    let path = flag
        .map(|p| p.to_path_buf())
        .or_else(|| std::env::var_os("IDCORR_DICT").map(PathBuf::from));
    match path {
        Some(path) => AttributeDictionary::from_path(&path)
            .map_err(|e| usage(format!("dictionary {}: {e}", path.display()))),
        None => Ok(AttributeDictionary::default()),
    }
}

fn write_output(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_score(
    inputs: &[PathBuf],
    dict: Option<&Path>,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let files = expand_inputs(inputs)?;
    if files.len() < 2 {
        return Err(usage(format!(
            "scoring needs at least two documents, found {}",
            files.len()
        )));
    }
    let dictionary = load_dictionary(dict)?;
    let documents = try_load_documents(&files).map_err(|diagnostics| {
        for line in &diagnostics {
            eprintln!("error: {line}");
        }
        usage(format!(
            "{} of {} document file(s) could not be loaded",
            diagnostics.len(),
            files.len()
        ))
    })?;
    let set = DocumentSet::new(documents).map_err(|e| usage(e.to_string()))?;
    let report = score_set(&set, &dictionary).map_err(|e| usage(e.to_string()))?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    let rendered = match format {
        Format::Json => idcorr::to_json(&report),
        Format::Csv => idcorr::to_csv(&report),
    };
    write_output(out, &rendered)
}

fn cmd_compare_metrics(pairs: &Path, out: Option<&Path>) -> CliResult<()> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(pairs)
        .map_err(|e| usage(format!("cannot read {}: {e}", pairs.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| usage(format!("{}: {e}", pairs.display())))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (a_col, b_col) = match (col("a"), col("b")) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            // an empty pairs file (no header at all) still yields an empty report
            if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
                (0, 1)
            } else {
                return Err(usage(format!(
                    "{}: expected header columns `a` and `b`",
                    pairs.display()
                )));
            }
        }
    };

    let mut output = String::from("pair,a,b");
    for measure in SimilarityMeasure::ALL {
        output.push(',');
        output.push_str(measure.as_str());
    }
    output.push('\n');

    let mut written = 0usize;
    let mut skipped = 0usize;
    for (row, record) in reader.records().enumerate() {
        let line = row + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                eprintln!("warning: row {line} skipped: {e}");
                skipped += 1;
                continue;
            }
        };
        let (Some(a), Some(b)) = (record.get(a_col), record.get(b_col)) else {
            eprintln!("warning: row {line} skipped: missing a/b field");
            skipped += 1;
            continue;
        };
        output.push_str(&format!("{line},{},{}", csv_field(a), csv_field(b)));
        for measure in SimilarityMeasure::ALL {
            output.push_str(&format!(",{:.4}", similarity(measure, a, b)));
        }
        output.push('\n');
        written += 1;
    }
    eprintln!("{written} pair(s) written, {skipped} skipped");
    write_output(out, &output)
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn cmd_distribution(corpus: &Path, bucket: f64, out: Option<&Path>) -> CliResult<()> {
    let mut distribution = ScoreDistribution::new(bucket).map_err(|e| usage(e.to_string()))?;
    let mut subdirs: Vec<PathBuf> = fs::read_dir(corpus)
        .map_err(|e| usage(format!("cannot read corpus {}: {e}", corpus.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subdirs.sort();

    for subdir in &subdirs {
        let files = expand_inputs(std::slice::from_ref(subdir))?;
        if files.len() < 2 {
            eprintln!(
                "warning: {} skipped: fewer than two documents",
                subdir.display()
            );
            continue;
        }
        let documents = match try_load_documents(&files) {
            Ok(docs) => docs,
            Err(diagnostics) => {
                eprintln!("warning: {} skipped: {}", subdir.display(), diagnostics[0]);
                continue;
            }
        };
        let report = DocumentSet::new(documents)
            .and_then(|set| score_set(&set, &AttributeDictionary::default()));
        match report {
            Ok(report) => distribution.add_report(&report),
            Err(e) => eprintln!("warning: {} skipped: {e}", subdir.display()),
        }
    }

    write_output(out, &distribution.to_csv())
}
