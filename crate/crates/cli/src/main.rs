use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skeleta::rational::parse_rational;
use skeleta::{BlowupCenter, Rational};
use skeleta_cli::document::{parse_model, parse_model_unchecked, DocumentError};
use skeleta_cli::{corpus, run, Command, OutputFormat, RunError, Subset};

#[derive(Parser)]
#[command(name = "skeleta", version, about = "Dual complexes and essential skeleta of degenerations")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    output: OutputFormat,
    /// Worker threads when several documents are given.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Inputs {
    /// Model files.
    #[arg(value_name = "MODEL")]
    paths: Vec<PathBuf>,
    /// Built-in corpus entries, e.g. `kodaira_In(n=3)`.
    #[arg(long = "corpus", value_name = "SPEC")]
    corpus: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Of {
    Full,
    Essential,
    Lc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Essential,
    Lc,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a document and list every violation.
    Validate(Inputs),
    /// List the cells of the dual complex.
    DualComplex(Inputs),
    /// Vertex weights and minima of every form.
    Weights(Inputs),
    /// Minimality locus of one form.
    KsSkeleton {
        #[arg(long)]
        form: String,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Essential skeleton: union of the minimality loci of all forms.
    Essential(Inputs),
    /// Cells whose components all have delta = 1.
    LcSkeleton {
        /// Delta assignment; optional when the document has only one.
        #[arg(long)]
        delta: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Pseudo-manifold classification.
    Classify {
        #[arg(long, value_enum, default_value = "essential")]
        of: Of,
        /// Delta assignment used by `lc`.
        #[arg(long)]
        delta: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Rational Betti numbers.
    Homology {
        #[arg(long, value_enum, default_value = "essential")]
        of: Of,
        /// Delta assignment used by `lc`.
        #[arg(long)]
        delta: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Rational homology sphere test.
    SphereCheck {
        #[arg(long, value_enum, default_value = "essential")]
        of: Of,
        /// Delta assignment used by `lc`.
        #[arg(long)]
        delta: Option<String>,
        /// Sphere dimension; defaults to the dimension of the subcomplex.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Search for a sequence of elementary collapses onto a subcomplex.
    Collapse {
        #[arg(long, value_enum)]
        target: Target,
        /// Delta assignment used by `lc`.
        #[arg(long)]
        delta: Option<String>,
        /// Maximum number of search states.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Blow up a model; the report carries the new document.
    Blowup {
        /// `component:ID` or `stratum:ID`.
        #[arg(long, value_parser = parse_center)]
        center: BlowupCenter,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Weight after a base change of ramification index D.
    Rescale {
        #[arg(long)]
        d: u64,
        #[arg(long, value_parser = parse_value)]
        value: Option<Rational>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print a corpus entry as a model document.
    Corpus {
        #[arg(value_name = "SPEC")]
        spec: String,
    },
}

fn parse_center(s: &str) -> Result<BlowupCenter, String> {
    match s.split_once(':') {
        Some(("component", id)) => Ok(BlowupCenter::Interior(id.into())),
        Some(("stratum", id)) => Ok(BlowupCenter::PointStratum(id.into())),
        _ => Err("expected component:ID or stratum:ID".into()),
    }
}

fn parse_value(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn subset(of: Of, delta: Option<String>) -> Subset {
    match of {
        Of::Full => Subset::Full,
        Of::Essential => Subset::Essential,
        Of::Lc => Subset::Lc(delta),
    }
}

fn split(cmd: Cmd) -> (Command, Inputs) {
    match cmd {
        Cmd::Validate(i) => (Command::Validate, i),
        Cmd::DualComplex(i) => (Command::DualComplex, i),
        Cmd::Weights(i) => (Command::Weights, i),
        Cmd::KsSkeleton { form, inputs } => (Command::KsSkeleton { form }, inputs),
        Cmd::Essential(i) => (Command::Essential, i),
        Cmd::LcSkeleton { delta, inputs } => (Command::LcSkeleton { delta }, inputs),
        Cmd::Classify { of, delta, inputs } => (Command::Classify { of: subset(of, delta) }, inputs),
        Cmd::Homology { of, delta, inputs } => (Command::Homology { of: subset(of, delta) }, inputs),
        Cmd::SphereCheck { of, delta, n, inputs } => {
            (Command::SphereCheck { of: subset(of, delta), n }, inputs)
        }
        Cmd::Collapse { target, delta, budget, inputs } => {
            let target = match target {
                Target::Essential => Subset::Essential,
                Target::Lc => Subset::Lc(delta),
            };
            (Command::Collapse { target, budget }, inputs)
        }
        Cmd::Blowup { center, inputs } => (Command::Blowup { center }, inputs),
        Cmd::Rescale { d, value, inputs } => (Command::Rescale { d, value }, inputs),
        Cmd::Corpus { .. } => unreachable!(),
    }
}

enum Source {
    File(PathBuf),
    Corpus(String),
}

fn job(command: &Command, source: &Source, format: OutputFormat) -> (i32, String, String) {
    let doc = match source {
        Source::File(path) => std::fs::read(path)
            .map_err(|source| DocumentError::Io {
                path: path.display().to_string(),
                source,
            })
            .and_then(|bytes: Vec<u8>| match command {
                Command::Validate => parse_model_unchecked(&bytes),
                _ => parse_model(&bytes),
            })
            .map_err(RunError::from),
        Source::Corpus(spec) => corpus(spec).map_err(RunError::from),
    };
    match doc.and_then(|d| run(command, &d)) {
        Ok(report) => (i32::from(report.domain_failure), report.render(format), String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error[{}]: {e}\n", e.code())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Cmd::Corpus { spec } = &cli.command {
        return match corpus(spec) {
            Ok(doc) => {
                print!("{}", doc.to_json());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error[{}]: {e}", e.code());
                ExitCode::from(2)
            }
        };
    }
    let format = cli.output;
    let (command, inputs) = split(cli.command);
    let mut sources: Vec<Source> = inputs.paths.into_iter().map(Source::File).collect();
    sources.extend(inputs.corpus.into_iter().map(Source::Corpus));
    if sources.is_empty() {
        eprintln!("error: no input; pass a model file or --corpus SPEC");
        return ExitCode::from(2);
    }

    let results: Vec<Mutex<Option<(i32, String, String)>>> =
        sources.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..cli.jobs.clamp(1, sources.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(source) = sources.get(i) else { break };
                *results[i].lock().unwrap() = Some(job(&command, source, format));
            });
        }
    });

    let mut status = 0;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for slot in results {
        let (code, report, err) = slot.into_inner().unwrap().expect("every job ran");
        let _ = out.write_all(report.as_bytes());
        eprint!("{err}");
        status = status.max(code);
    }
    ExitCode::from(status as u8)
}
