//! Pipeline driver. Five subcommands cover the whole flow: harvest pulls
//! arXiv metadata into a JSONL corpus, enrich attaches Semantic Scholar
//! data, classify persists the label sidecar, report emits the CSV/SVG
//! series, selfcheck runs the invariant suite. Failures exit nonzero with
//! a single "error:"-prefixed line.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use innopace_core::classify::{label_corpus, ClueLexicon};
use innopace_core::ingest::s2::collect_author_influence;
use innopace_core::ingest::{
    dedupe, enrich_corpus, load_corpus, save_authors, save_corpus, save_labels, HarvestSpec,
    HttpTransport, OaiClient, S2Client, ARXIV_OAI_BASE, DEFAULT_CATEGORIES, S2_API_BASE,
};
use innopace_core::metrics::{Granularity, UpdateDivisor};
use innopace_core::model::{AuthorRecord, ImpactTier, PreprintRecord, Stage, SubfieldLabel};
use innopace_core::report::{Grouping, Metric, ReportSpec};
use innopace_core::selfcheck;

/// Gap between OAI-PMH requests; arXiv asks harvesters to stay polite.
const OAI_RATE_LIMIT: Duration = Duration::from_secs(3);

#[derive(Parser)]
#[command(name = "innopace", version, about = "Measure the pace of AI innovation from arXiv preprints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Harvest arXiv metadata into a JSONL corpus via OAI-PMH.
    Harvest(HarvestArgs),
    /// Attach Semantic Scholar paper and author data to a corpus.
    Enrich(EnrichArgs),
    /// Label a corpus and persist the labels sidecar.
    Classify(ClassifyArgs),
    /// Emit one metric/grouping series as CSV, optionally with SVG.
    Report(ReportArgs),
    /// Run the corpus invariant suite.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args)]
struct HarvestArgs {
    /// Corpus file to create or extend.
    #[arg(long)]
    out: PathBuf,
    /// arXiv categories to keep.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_CATEGORIES.map(String::from))]
    categories: Vec<String>,
    /// Earliest submission date (inclusive, YYYY-MM-DD).
    #[arg(long)]
    from: NaiveDate,
    /// Latest submission date (inclusive, YYYY-MM-DD).
    #[arg(long)]
    until: NaiveDate,
    /// Resume token printed by an interrupted harvest.
    #[arg(long)]
    resume: Option<String>,
}

#[derive(Args)]
struct EnrichArgs {
    /// Corpus file to enrich.
    #[arg(long)]
    corpus: PathBuf,
    /// Where to write the enriched corpus; defaults to the input file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Author sidecar path; defaults to `<out>.authors.jsonl`.
    #[arg(long)]
    authors: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Corpus file to label.
    #[arg(long)]
    corpus: PathBuf,
    /// Clue lexicon as TSV (phrase, tab, comma-separated category codes);
    /// the built-in table when omitted.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Labels sidecar path; defaults to `<corpus>.labels.jsonl`.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Corpus file to report on.
    #[arg(long)]
    corpus: PathBuf,
    /// Output directory for CSV and SVG files.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = parse_metric)]
    metric: Metric,
    #[arg(long, value_parser = parse_grouping, default_value = "all")]
    group: Grouping,
    #[arg(long, value_parser = parse_granularity, default_value = "year")]
    granularity: Granularity,
    /// Only preprints submitted on or after this date.
    #[arg(long)]
    from: Option<NaiveDate>,
    /// Only preprints submitted on or before this date.
    #[arg(long)]
    until: Option<NaiveDate>,
    /// Clue lexicon override, as for classify.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Author sidecar override; defaults to `<corpus>.authors.jsonl`.
    #[arg(long)]
    authors: Option<PathBuf>,
    /// Per-preprint tau divisor for the update speed.
    #[arg(long, value_parser = parse_divisor, default_value = "nv")]
    usv_divisor: UpdateDivisor,
    /// Also render an SVG chart next to each CSV.
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Corpus file to check.
    #[arg(long)]
    corpus: PathBuf,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse()
}

fn parse_grouping(s: &str) -> Result<Grouping, String> {
    s.parse()
}

fn parse_granularity(s: &str) -> Result<Granularity, String> {
    match s {
        "year" => Ok(Granularity::Year),
        "month" => Ok(Granularity::Month),
        "day" => Ok(Granularity::Day),
        other => Err(format!("unknown granularity {other:?}; expected year, month or day")),
    }
}

fn parse_divisor(s: &str) -> Result<UpdateDivisor, String> {
    match s {
        "nv" => Ok(UpdateDivisor::VersionCount),
        "nv-minus-1" => Ok(UpdateDivisor::UpdateCount),
        other => Err(format!("unknown divisor {other:?}; expected nv or nv-minus-1")),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Harvest(args) => harvest(args),
        Command::Enrich(args) => enrich(args),
        Command::Classify(args) => classify(args),
        Command::Report(args) => report(args),
        Command::Selfcheck(args) => selfcheck_corpus(args),
    }
}

fn harvest(args: HarvestArgs) -> anyhow::Result<ExitCode> {
    let spec = HarvestSpec::new(args.categories.clone(), args.from, args.until, OAI_RATE_LIMIT)?;
    let mut records = if args.out.exists() {
        load_corpus(&args.out)?
    } else {
        Vec::new()
    };
    let before = records.len();
    let transport = HttpTransport::new();
    let client = OaiClient::new(&transport, ARXIV_OAI_BASE);
    let outcome = client.harvest_into(&spec, args.resume.as_deref(), &mut |r| records.push(r));
    // Persist whatever arrived even when the run was interrupted, so the
    // printed resume token continues from saved state.
    let records = dedupe(records);
    save_corpus(&args.out, &records)?;
    println!(
        "saved {} records to {} ({} held before this run)",
        records.len(),
        args.out.display(),
        before
    );
    outcome?;
    Ok(ExitCode::SUCCESS)
}

fn enrich(args: EnrichArgs) -> anyhow::Result<ExitCode> {
    let mut records = load_corpus(&args.corpus)?;
    let transport = HttpTransport::new();
    let client =
        S2Client::new(&transport, S2_API_BASE).with_api_key(std::env::var("S2_API_KEY").ok());
    let report = enrich_corpus(&client, &mut records);
    let unmatched: BTreeSet<&str> = report.unmatched.iter().map(|id| id.as_str()).collect();
    let records: Vec<PreprintRecord> = records
        .into_iter()
        .filter(|r| !unmatched.contains(r.arxiv_id.as_str()))
        .collect();
    let out = args.out.unwrap_or_else(|| args.corpus.clone());
    save_corpus(&out, &records)?;
    println!(
        "enriched {} records ({} already enriched), dropped {} unmatched, {} pending",
        report.enriched,
        report.already_enriched,
        unmatched.len(),
        report.pending.len()
    );
    for (id, reason) in &report.pending {
        eprintln!("pending {id}: {reason}");
    }
    let influence = collect_author_influence(&client, &records)?;
    let authors = author_records(&records, &influence);
    let authors_path = args
        .authors
        .unwrap_or_else(|| out.with_extension("authors.jsonl"));
    save_authors(&authors_path, &authors)?;
    println!("saved {} authors to {}", authors.len(), authors_path.display());
    Ok(ExitCode::SUCCESS)
}

/// Author rows for the sidecar: every id-resolved author with their
/// first-seen name and influence count.
fn author_records(
    records: &[PreprintRecord],
    influence: &BTreeMap<String, u64>,
) -> Vec<AuthorRecord> {
    let mut by_id: BTreeMap<&str, AuthorRecord> = BTreeMap::new();
    for record in records {
        for author in &record.authors {
            let Some(id) = author.s2_author_id.as_deref() else {
                continue;
            };
            let entry = by_id.entry(id).or_insert_with(|| AuthorRecord {
                s2_author_id: id.to_owned(),
                name: author.name.clone(),
                influential_citation_count: influence.get(id).copied().unwrap_or(0),
                preprint_ids: BTreeSet::new(),
            });
            entry.preprint_ids.insert(record.arxiv_id.clone());
        }
    }
    by_id.into_values().collect()
}

fn classify(args: ClassifyArgs) -> anyhow::Result<ExitCode> {
    let corpus = load_corpus(&args.corpus)?;
    let lexicon = match &args.lexicon {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            ClueLexicon::from_tsv(&text)?
        }
        None => ClueLexicon::builtin(),
    };
    let outcome = label_corpus(&corpus, &lexicon)?;
    let labels_path = args
        .labels
        .unwrap_or_else(|| args.corpus.with_extension("labels.jsonl"));
    save_labels(&labels_path, &outcome.labeled)?;
    println!(
        "labeled {} preprints ({} skipped unenriched), wrote {}",
        outcome.labeled.len(),
        outcome.skipped_unenriched.len(),
        labels_path.display()
    );
    let subfield_counts = outcome.subfield_counts();
    let subfields = SubfieldLabel::ALL
        .map(|s| format!("{}={}", s.code(), subfield_counts.get(&s).copied().unwrap_or(0)))
        .join(" ");
    println!("subfields: {subfields}");
    let tier = |t: ImpactTier| outcome.labeled.iter().filter(|p| p.impact == t).count();
    println!(
        "impact: high={} mid={} low={}",
        tier(ImpactTier::High),
        tier(ImpactTier::Mid),
        tier(ImpactTier::Low)
    );
    let official = outcome.labeled.iter().filter(|p| p.official).count();
    println!(
        "official: yes={} no={}",
        official,
        outcome.labeled.len() - official
    );
    let stages = Stage::ALL
        .map(|s| {
            let count = outcome.labeled.iter().filter(|p| p.stage == s).count();
            format!("{}={count}", s.label())
        })
        .join(" ");
    println!("stages: {stages}");
    Ok(ExitCode::SUCCESS)
}

fn report(args: ReportArgs) -> anyhow::Result<ExitCode> {
    let mut spec = ReportSpec::new(args.corpus, args.out);
    spec.metric = args.metric;
    spec.grouping = args.group;
    spec.granularity = args.granularity;
    spec.lexicon = args.lexicon;
    spec.authors = args.authors;
    spec.divisor = args.usv_divisor;
    spec.from = args.from;
    spec.until = args.until;
    spec.svg = args.svg;
    let written = innopace_core::report::run(&spec)?;
    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn selfcheck_corpus(args: SelfcheckArgs) -> anyhow::Result<ExitCode> {
    let violations = selfcheck::check_file(&args.corpus)
        .with_context(|| format!("reading {}", args.corpus.display()))?;
    if violations.is_empty() {
        println!("ok: {} satisfies all invariants", args.corpus.display());
        return Ok(ExitCode::SUCCESS);
    }
    for v in &violations {
        eprintln!("error: {v}");
    }
    Ok(ExitCode::FAILURE)
}
