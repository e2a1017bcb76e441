use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use layout_areas::analyze;
use layout_areas::assign::{GapParameter, PipelineConfig};
use layout_areas::labels::{LabelOptions, OrdinalDictionary};
use layout_areas::report::{render_html, render_json, render_text};
use layout_areas::sheet::{load_sheet, Locale, SheetFormat};

const DICT_DIR_ENV: &str = "LAYOUT_AREAS_DICT_DIR";

#[derive(Parser)]
#[command(
    name = "layout-areas",
    version,
    about = "Find labelled layout areas in a spreadsheet and report irregular cells"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one sheet. Exits 0 when clean, 2 when findings were reported, 1 on errors.
    Analyze(AnalyzeArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Sheet document (.json or .csv)
    input: PathBuf,
    /// Input format; guessed from the file extension when omitted
    #[arg(long)]
    format: Option<SheetFormat>,
    /// Number format of cell values: point (1,234.5) or comma (1.234,5)
    #[arg(long, default_value = "comma")]
    locale: Locale,
    /// Empty cells tolerated between assigned cells
    #[arg(long, default_value_t = 0)]
    max_gap: u32,
    /// JSON object mapping labels to ordinal numbers; repeatable
    #[arg(long = "ordinal-dict", value_name = "PATH")]
    ordinal_dict: Vec<PathBuf>,
    /// Comma-separated renderings
    #[arg(long, value_delimiter = ',', default_value = "text")]
    output: Vec<OutputFormat>,
    /// Write to this file instead of stdout. With several renderings, one
    /// file per rendering is written next to it with the matching extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Html,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Text => "txt",
            OutputFormat::Json => "json",
            OutputFormat::Html => "html",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether the analysis came out clean.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let Command::Analyze(args) = cli.command;
    let format = match args.format {
        Some(f) => f,
        None => guess_format(&args.input)?,
    };
    let bytes =
        fs::read(&args.input).with_context(|| format!("cannot read {}", args.input.display()))?;
    let mut sheet = load_sheet(&bytes, format, args.locale)
        .with_context(|| format!("in {}", args.input.display()))?;
    if sheet.name().is_empty() {
        if let Some(stem) = args.input.file_stem() {
            sheet = sheet.renamed(stem.to_string_lossy());
        }
    }

    let mut dictionaries = Vec::new();
    for path in &args.ordinal_dict {
        dictionaries.push(read_dictionary(path)?);
    }
    if let Some(dir) = std::env::var_os(DICT_DIR_ENV) {
        dictionaries.extend(dictionaries_in(Path::new(&dir))?);
    }
    dictionaries.extend(OrdinalDictionary::builtins());

    let config = PipelineConfig {
        gap: GapParameter(args.max_gap),
        labels: LabelOptions {
            dictionaries,
            ..LabelOptions::default()
        },
    };
    let analysis = analyze(&sheet, &config);

    let mut formats = args.output.clone();
    formats.dedup();
    if formats.is_empty() {
        bail!("--output needs at least one of text, json, html");
    }
    for &fmt in &formats {
        let rendered = match fmt {
            OutputFormat::Text => render_text(&sheet, &analysis),
            OutputFormat::Json => render_json(&sheet, &analysis),
            OutputFormat::Html => render_html(&sheet, &analysis, args.locale),
        };
        match &args.out {
            None => std::io::stdout()
                .write_all(rendered.as_bytes())
                .context("cannot write to stdout")?,
            Some(path) => {
                let target = if formats.len() > 1 {
                    path.with_extension(fmt.extension())
                } else {
                    path.clone()
                };
                fs::write(&target, rendered)
                    .with_context(|| format!("cannot write {}", target.display()))?;
            }
        }
    }
    Ok(analysis.abstraction.findings.is_empty())
}

fn guess_format(path: &Path) -> anyhow::Result<SheetFormat> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or_default()
        .to_ascii_lowercase();
    match ext.as_str() {
        "json" => Ok(SheetFormat::Json),
        "csv" => Ok(SheetFormat::Csv),
        _ => Err(anyhow!(
            "cannot tell the format of {}; pass --format json or --format csv",
            path.display()
        )),
    }
}

fn read_dictionary(path: &Path) -> anyhow::Result<OrdinalDictionary> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(OrdinalDictionary::from_json(
        path.display().to_string(),
        &bytes,
    )?)
}

fn dictionaries_in(dir: &Path) -> anyhow::Result<Vec<OrdinalDictionary>> {
    let entries = fs::read_dir(dir)
        .with_context(|| format!("cannot list {DICT_DIR_ENV} directory {}", dir.display()))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    paths.iter().map(|p| read_dictionary(p)).collect()
}
