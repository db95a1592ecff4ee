//! `align`: command-line front end for the alignment pipeline.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use align_core::report::{emit, run, write_routine_table, Format};
use align_core::{Analysis, AnalysisConfig, Dataset, Hypothesis};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

/// Exit status for malformed or inconsistent input.
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "align", version, about = "Verbal and behavioural alignment measures for task-oriented dialogue")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate raw inputs and write them as a corpus directory.
    Ingest {
        #[arg(long)]
        transcripts: PathBuf,
        #[arg(long)]
        events: PathBuf,
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        tests: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the routine expressions of every team.
    Routines {
        #[arg(long)]
        corpus: PathBuf,
        /// Keep only routines that mention a node of the network.
        #[arg(long)]
        task_only: bool,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Annotate action streams with instructions and match verdicts.
    Annotate {
        #[arg(long)]
        corpus: PathBuf,
        /// Drop every pending instruction after a match or mismatch.
        #[arg(long)]
        clear_on_verdict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Task success and learning features per team.
    Measures {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one hypothesis and write its tables.
    Analyze {
        #[arg(long)]
        hypothesis: Hypothesis,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        options: Options,
    },
    /// Run the whole pipeline and write every table.
    All {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[command(flatten)]
        options: Options,
    },
}

#[derive(Args)]
struct Options {
    /// Drop every pending instruction after a match or mismatch.
    #[arg(long)]
    clear_on_verdict: bool,
    /// Keep routines that mention no node.
    #[arg(long)]
    all_routines: bool,
    /// Common window in seconds; defaults to the shortest team duration.
    #[arg(long, value_name = "SECONDS")]
    window: Option<f64>,
    /// Count every "oh" token rather than every utterance containing one.
    #[arg(long)]
    oh_per_token: bool,
    /// Count each matched or mismatched edit rather than each instructing utterance.
    #[arg(long)]
    per_edit: bool,
}

impl Options {
    fn config(&self) -> AnalysisConfig {
        let mut config = AnalysisConfig {
            task_only: !self.all_routines,
            common_window: self.window,
            oh_per_token: self.oh_per_token,
            group_by_utterance: !self.per_edit,
            ..AnalysisConfig::default()
        };
        config.matcher.clear_on_verdict = self.clear_on_verdict;
        config
    }
}

fn analysis(corpus: &Path, config: &AnalysisConfig) -> Result<Analysis> {
    let dataset = Dataset::load(corpus)?;
    Ok(Analysis::run(&dataset, config)?)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Ingest { transcripts, events, network, tests, out } => {
            let dataset = Dataset::load_files(transcripts, events, network, tests)?;
            dataset.write(&out)?;
            let utterances: usize = dataset.teams.iter().map(|t| t.utterances.len()).sum();
            let edits: usize = dataset.teams.iter().map(|t| t.log.edits.len()).sum();
            eprintln!(
                "ingested {} teams, {utterances} utterances, {edits} edits into {}",
                dataset.teams.len(),
                out.display()
            );
        }
        Command::Routines { corpus, task_only, out } => {
            let config = AnalysisConfig { task_only, ..AnalysisConfig::default() };
            let analysis = analysis(&corpus, &config)?;
            write_routine_table(&analysis, output(out.as_deref())?)?;
        }
        Command::Annotate { corpus, clear_on_verdict, out } => {
            let mut config = AnalysisConfig::default();
            config.matcher.clear_on_verdict = clear_on_verdict;
            analysis(&corpus, &config)?.write_annotated(output(out.as_deref())?)?;
        }
        Command::Measures { corpus, out } => {
            analysis(&corpus, &AnalysisConfig::default())?.write_features(output(out.as_deref())?)?;
        }
        Command::Analyze { hypothesis, corpus, format, out, options } => {
            let analysis = analysis(&corpus, &options.config())?;
            create_dir(&out)?;
            for path in emit(&run(&analysis, hypothesis)?, format, &out)? {
                println!("{}", path.display());
            }
        }
        Command::All { corpus, out, options } => {
            let analysis = analysis(&corpus, &options.config())?;
            create_dir(&out)?;
            let file = |name: &str| -> Result<Box<dyn Write>> { output(Some(&out.join(name))) };
            write_routine_table(&analysis, file("routines.csv")?)?;
            analysis.write_annotated(file("annotated.csv")?)?;
            analysis.write_features(file("features.csv")?)?;
            for hypothesis in Hypothesis::ALL {
                let report = run(&analysis, hypothesis)?;
                for format in [Format::Csv, Format::Json] {
                    emit(&report, format, &out)?;
                }
            }
            println!("{}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let invalid = err
                .downcast_ref::<align_core::Error>()
                .is_some_and(align_core::Error::is_validation);
            ExitCode::from(if invalid { EXIT_INVALID } else { 1 })
        }
    }
}
