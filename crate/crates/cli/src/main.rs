use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use inflectkit::align::{align, split_zones};
use inflectkit::eval::{
    macro_average, oracle_ensemble, oracle_feature_combination, score_paradigms, score_predictions,
    EvalReport,
};
use inflectkit::paradigm::complete;
use inflectkit::sampler::{
    count_tokens, make_task1_splits, make_task2_splits, paradigm_forms, CountTable, SplitSizes,
    SplitSpec,
};
use inflectkit::tsv::{
    parse_paradigms, parse_queries, parse_triples, serialize_paradigms, serialize_triples,
};
use inflectkit::{train, ColumnOrder, Dataset, Model, Records, Triple};

const DEFAULT_SEED: u64 = 0;

/// Baseline inflection, paradigm completion, split sampling and scoring for
/// UniMorph-style TSV data.
#[derive(Parser)]
#[command(name = "inflectkit", version)]
struct Cli {
    /// Seed for every random choice (only `sample` draws randomness).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Column layout of every TSV read or written: lemma-form-tags or
    /// lemma-tags-form.
    #[arg(long, global = true, default_value = "lemma-form-tags")]
    column_order: ColumnOrder,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a rule model from training triples.
    Train {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        model_out: PathBuf,
    },
    /// Inflect `lemma<TAB>tags` queries with a trained model.
    Inflect {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fill the empty cells of partial paradigms.
    Complete {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw frequency-weighted train/dev/test splits.
    Sample(SampleArgs),
    /// Score predictions against gold files.
    Evaluate(EvaluateArgs),
    /// Upper bounds on attainable accuracy.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Percentages of triples with prefix, suffix and stem-internal changes.
    Stats {
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct SampleArgs {
    /// 1 samples triples, 2 samples complete paradigms and masks dev/test.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    task: u8,
    #[arg(long)]
    input: PathBuf,
    /// Raw text used to weight items by frequency; uniform without it.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    /// low,medium,high,dev,test
    #[arg(long)]
    sizes: Option<String>,
    /// Chance that a dev/test cell keeps its form (task 2).
    #[arg(long, default_value_t = SplitSpec::DEFAULT_KEEP_PROBABILITY)]
    keep_prob: f64,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    task: u8,
    /// Gold file; repeat together with --pred for several languages.
    #[arg(long = "gold", required = true)]
    golds: Vec<PathBuf>,
    #[arg(long = "pred", required = true)]
    preds: Vec<PathBuf>,
    /// Task 2 system input. Only its empty cells are scored.
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Fraction of items at least one system gets right.
    Ensemble {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long = "pred", required = true)]
        preds: Vec<PathBuf>,
    },
    /// Fraction of test items whose bundle occurs in training.
    Fc {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| e.error)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(output: Option<&Path>, contents: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => write_atomic(path, contents),
        None => Ok(io::stdout().lock().write_all(contents.as_bytes())?),
    }
}

fn load_model(path: &Path) -> anyhow::Result<Model> {
    Model::from_dump(&read(path)?).with_context(|| format!("loading model {}", path.display()))
}

fn triples_from(path: &Path, order: ColumnOrder) -> anyhow::Result<Vec<Triple>> {
    parse_triples(&read(path)?, order).with_context(|| path.display().to_string())
}

fn parse_sizes(s: &str) -> anyhow::Result<SplitSizes> {
    let n: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<_, _>>()
        .with_context(|| format!("--sizes {s:?}"))?;
    let [low, medium, high, dev, test] = n[..] else {
        bail!("--sizes needs five comma-separated counts, got {s:?}");
    };
    Ok(SplitSizes {
        low,
        medium,
        high,
        dev,
        test,
    })
}

fn count_corpus<'a>(
    corpus: Option<&Path>,
    targets: impl IntoIterator<Item = &'a str>,
) -> anyhow::Result<CountTable> {
    let Some(path) = corpus else {
        return Ok(CountTable::new());
    };
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(count_tokens(BufReader::new(file), targets)?)
}

fn serialize(dataset: &Dataset, order: ColumnOrder) -> String {
    match &dataset.records {
        Records::Triples(t) => serialize_triples(t, order),
        Records::Paradigms(p) => serialize_paradigms(p, order),
    }
}

fn sample(args: &SampleArgs, seed: u64, order: ColumnOrder) -> anyhow::Result<()> {
    let text = read(&args.input)?;
    let mut files: Vec<(&str, &Dataset)> = Vec::new();
    let task1;
    let task2;
    if args.task == 1 {
        let triples = parse_triples(&text, order)?;
        let counts = count_corpus(args.corpus.as_deref(), triples.iter().map(Triple::form))?;
        let mut spec = SplitSpec::task1(seed);
        if let Some(s) = &args.sizes {
            spec.sizes = parse_sizes(s)?;
        }
        task1 = make_task1_splits(&triples, &counts, &spec)?;
        files.push(("train-low", &task1.low));
        files.extend(task1.medium.as_ref().map(|d| ("train-medium", d)));
        files.extend(task1.high.as_ref().map(|d| ("train-high", d)));
        files.push(("dev", &task1.dev));
        files.push(("test", &task1.test));
    } else {
        let paradigms = parse_paradigms(&text, order)?;
        let counts = count_corpus(args.corpus.as_deref(), paradigm_forms(&paradigms))?;
        let mut spec = SplitSpec::task2(seed);
        spec.keep_probability = args.keep_prob;
        if let Some(s) = &args.sizes {
            spec.sizes = parse_sizes(s)?;
        }
        task2 = make_task2_splits(&paradigms, &counts, &spec)?;
        files.push(("train-low", &task2.low));
        files.extend(task2.medium.as_ref().map(|d| ("train-medium", d)));
        files.extend(task2.high.as_ref().map(|d| ("train-high", d)));
        files.push(("dev", &task2.dev));
        files.push(("dev-gold", &task2.dev_gold));
        files.push(("test", &task2.test));
        files.push(("test-gold", &task2.test_gold));
    }
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    for (name, dataset) in files {
        let path = args.out_dir.join(format!("{name}.tsv"));
        write_atomic(&path, &serialize(dataset, order))?;
        println!("{}\t{}", path.display(), dataset.len());
    }
    Ok(())
}

fn evaluate(args: &EvaluateArgs, order: ColumnOrder) -> anyhow::Result<()> {
    if args.golds.len() != args.preds.len() {
        bail!(
            "{} --gold files but {} --pred files",
            args.golds.len(),
            args.preds.len()
        );
    }
    if !args.inputs.is_empty() && (args.task != 2 || args.inputs.len() != args.golds.len()) {
        bail!("--input is task 2 only, one per --gold");
    }
    let mut reports: Vec<EvalReport> = Vec::new();
    for (i, (gold, pred)) in args.golds.iter().zip(&args.preds).enumerate() {
        let report = if args.task == 1 {
            score_predictions(&triples_from(gold, order)?, &triples_from(pred, order)?)?
        } else {
            let g = parse_paradigms(&read(gold)?, order)?;
            let p = parse_paradigms(&read(pred)?, order)?;
            let input = match args.inputs.get(i) {
                Some(path) => Some(parse_paradigms(&read(path)?, order)?),
                None => None,
            };
            score_paradigms(&g, input.as_deref(), &p)?
        };
        if args.golds.len() > 1 {
            println!("{}\t{}", pred.display(), report.key_values());
        } else {
            println!("{}", report.key_values());
        }
        reports.push(report);
    }
    if reports.len() > 1 {
        println!("macro\t{}", macro_average(&reports)?.key_values());
    }
    Ok(())
}

fn stats(inputs: &[PathBuf], order: ColumnOrder) -> anyhow::Result<()> {
    for path in inputs {
        let triples = triples_from(path, order)?;
        if triples.is_empty() {
            bail!(inflectkit::Error::NoTriples("compute statistics"));
        }
        let (mut pr, mut su, mut ap) = (0usize, 0usize, 0usize);
        for t in &triples {
            let c = split_zones(&align(t.lemma(), t.form())?).changes();
            pr += usize::from(c.prefix);
            su += usize::from(c.suffix);
            ap += usize::from(c.stem_internal);
        }
        let pct = |k: usize| 100.0 * k as f64 / triples.len() as f64;
        println!(
            "{}\tn={}\tPr={:.2}\tSu={:.2}\tAp={:.2}",
            path.display(),
            triples.len(),
            pct(pr),
            pct(su),
            pct(ap)
        );
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let order = cli.column_order;
    match cli.command {
        Command::Train { input, model_out } => {
            let triples = triples_from(&input, order)?;
            let model = train(&triples)?;
            write_atomic(&model_out, &model.to_dump())?;
            println!("{} triples, {}", triples.len(), model.orientation());
        }
        Command::Inflect {
            model,
            input,
            output,
        } => {
            let model = load_model(&model)?;
            let queries = parse_queries(&read(&input)?, order)?;
            let triples = queries
                .into_iter()
                .map(|q| {
                    let form = model.inflect(&q.lemma, &q.bundle)?;
                    Triple::new(q.lemma, q.bundle, form)
                })
                .collect::<inflectkit::Result<Vec<_>>>()?;
            emit(output.as_deref(), &serialize_triples(&triples, order))?;
        }
        Command::Complete {
            model,
            input,
            output,
        } => {
            let model = load_model(&model)?;
            let completed = parse_paradigms(&read(&input)?, order)?
                .iter()
                .map(|p| complete(&model, p))
                .collect::<inflectkit::Result<Vec<_>>>()?;
            emit(output.as_deref(), &serialize_paradigms(&completed, order))?;
        }
        Command::Sample(args) => sample(&args, cli.seed, order)?,
        Command::Evaluate(args) => evaluate(&args, order)?,
        Command::Oracle(OracleCommand::Ensemble { gold, preds }) => {
            let gold = triples_from(&gold, order)?;
            let systems = preds
                .iter()
                .map(|p| triples_from(p, order))
                .collect::<anyhow::Result<Vec<_>>>()?;
            println!("oracle-e={:.4}", oracle_ensemble(&systems, &gold)?);
        }
        Command::Oracle(OracleCommand::Fc { train, test }) => {
            let train = triples_from(&train, order)?;
            let test = triples_from(&test, order)?;
            println!("oracle-fc={:.4}", oracle_feature_combination(&train, &test));
        }
        Command::Stats { inputs } => stats(&inputs, order)?,
    }
    Ok(())
}

fn error_code(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<inflectkit::Error>() {
        e.code()
    } else if err.downcast_ref::<io::Error>().is_some() {
        "E_IO"
    } else {
        "E_USAGE"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err:#}", error_code(&err));
            ExitCode::FAILURE
        }
    }
}
