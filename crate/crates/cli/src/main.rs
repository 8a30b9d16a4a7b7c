//! relkit: command-line front end for the finite-algebra workbench.
//!
//! Subcommands: `check` decides a relation identity on an algebra,
//! `find-terms` searches free algebras for term systems, `free` builds a
//! free algebra, `relations` enumerates the relations of one sort,
//! `gen-identity` prints an identity-family instance, `verify-paper` runs
//! the bundled fact suite, and `export` writes an algebra document.
//!
//! Exit codes: 0 = verdict as asserted / success; 1 = counterexample found,
//! term system not found, or suite failure; 2 = usage, parse, I/O or budget
//! errors.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use relkit_core::{
    enumerate_relations, family_ids, find_all_term_systems, find_term_system, fixture,
    free_algebra, gen_identity, generated_relation, parse_document, parse_family_spec,
    parse_statement, preorder_lattice, preset, run_filtered, serialize_document, AlgebraDocument,
    BinaryRelation, BoundRelation, CheckMode, CheckOutcome, Checker, ClosureBudget,
    Counterexample, El, Sort, Statement, TermSystem, FIXTURE_NAMES,
};

/// Binding cap applied to `generated:K` checks unless `--max-bindings`
/// overrides it; keeps the default mode safe on large candidate spaces.
const DEFAULT_BINDING_CAP: u64 = 600;

#[derive(Parser)]
#[command(
    name = "relkit",
    version,
    about = "Decide relation identities on finite algebras and search for the term systems behind them"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Closure budget `MAX_ELEMENTS[,MAX_APPLICATIONS]`; the RELKIT_BUDGET
    /// environment variable supplies the same override.
    #[arg(long, global = true)]
    budget: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Line-oriented `key: value` report.
    Text,
    /// One JSON object per line.
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Check a relation identity on an algebra.
    Check(CheckArgs),
    /// Search the free algebra for a preset term system.
    FindTerms(FindTermsArgs),
    /// Build the free algebra on k generators and report its size.
    Free(FreeArgs),
    /// Enumerate all relations of one sort.
    Relations(RelationsArgs),
    /// Print the fully expanded statement of an identity family.
    GenIdentity(GenIdentityArgs),
    /// Run the bundled verification suite of checkable facts.
    VerifyPaper(VerifyArgs),
    /// Write an algebra and its named relations in the text format.
    Export(ExportArgs),
}

/// `fixtures:NAME` for a bundled algebra, or a path to a document in the
/// text format.
#[derive(Args)]
struct AlgebraArg {
    #[arg(long)]
    algebra: String,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StatementSource {
    /// Statement text in the identity language.
    #[arg(long)]
    stmt: Option<String>,
    /// File containing one statement (`#` comments allowed).
    #[arg(long)]
    stmt_file: Option<PathBuf>,
    /// Identity family, e.g. `dist3-3a` or `nperm-nra(3)`.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    algebra: AlgebraArg,
    #[command(flatten)]
    source: StatementSource,
    /// Parameter for a parameterized `--family` (overrides a value given in
    /// parentheses).
    #[arg(long)]
    n: Option<usize>,
    /// Quantification strategy: `exhaustive`, `generated:K`,
    /// `sampled:TRIALS[:SEED]`, or `fixed:VAR=REL,..` where REL names a
    /// relation bundled with the algebra or is a literal pair list like
    /// `(0,1)(1,2)` generated at the variable's declared sort.
    #[arg(long)]
    mode: Option<String>,
    /// Cap on the number of bindings tested (generated mode defaults to
    /// 600; exhaustive and sampled runs are uncapped by default).
    #[arg(long)]
    max_bindings: Option<u64>,
}

#[derive(Args)]
struct FindTermsArgs {
    #[command(flatten)]
    algebra: AlgebraArg,
    /// Term-system preset: `jonsson3`, `gumm2`, `djonsson2`, `majority`,
    /// `maltsev`, `hm<N>`, or `nu<K>`.
    #[arg(long)]
    preset: String,
    /// Report every solution instead of the first.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct FreeArgs {
    #[command(flatten)]
    algebra: AlgebraArg,
    /// Number of generators.
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct RelationsArgs {
    #[command(flatten)]
    algebra: AlgebraArg,
    /// Relation sort: `cong`, `tol`, `rel`, or `preorder`.
    #[arg(long, default_value = "cong")]
    sort: String,
    /// Abort past this many relations.
    #[arg(long, default_value_t = 4096)]
    limit: usize,
}

#[derive(Args)]
struct GenIdentityArgs {
    /// Identity family, e.g. `jonsson`, `dist3-3a`, `nperm-nra(3)`.
    #[arg(long)]
    family: String,
    /// Parameter for a parameterized family.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Keep only facts whose id contains this substring.
    filter: Option<String>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    algebra: AlgebraArg,
    /// Destination file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    // Die quietly when the downstream reader closes (e.g. `relkit .. | head`)
    // instead of panicking on the broken pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let budget = resolve_budget(cli.budget.as_deref())?;
    match cli.command {
        Command::Check(args) => cmd_check(args, cli.format, budget),
        Command::FindTerms(args) => cmd_find_terms(args, cli.format, budget),
        Command::Free(args) => cmd_free(args, cli.format, budget),
        Command::Relations(args) => cmd_relations(args, cli.format, budget),
        Command::GenIdentity(args) => cmd_gen_identity(args, cli.format),
        Command::VerifyPaper(args) => cmd_verify(args, cli.format),
        Command::Export(args) => cmd_export(args),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn resolve_budget(flag: Option<&str>) -> Result<ClosureBudget> {
    let spec = match flag {
        Some(text) => Some(text.to_string()),
        None => std::env::var("RELKIT_BUDGET").ok(),
    };
    let Some(spec) = spec else {
        return Ok(ClosureBudget::default());
    };
    let mut budget = ClosureBudget::default();
    let mut parts = spec.split(',');
    let elements = parts.next().unwrap_or_default().trim();
    budget.max_elements = elements
        .parse()
        .with_context(|| format!("budget `{spec}`: `{elements}` is not an element count"))?;
    if let Some(applications) = parts.next() {
        let applications = applications.trim();
        budget.max_applications = applications.parse().with_context(|| {
            format!("budget `{spec}`: `{applications}` is not an application count")
        })?;
    }
    if parts.next().is_some() {
        bail!("budget `{spec}`: expected `MAX_ELEMENTS[,MAX_APPLICATIONS]`");
    }
    Ok(budget)
}

fn load_algebra(spec: &str) -> Result<AlgebraDocument> {
    if let Some(name) = spec.strip_prefix("fixtures:") {
        let fx = fixture(name).ok_or_else(|| {
            anyhow!(
                "unknown fixture `{name}` (bundled: {})",
                FIXTURE_NAMES.join(", ")
            )
        })?;
        Ok(AlgebraDocument {
            algebra: fx.algebra,
            relations: fx.relations,
        })
    } else {
        let text = fs::read_to_string(spec).with_context(|| format!("reading `{spec}`"))?;
        parse_document(&text).map_err(|e| anyhow!("parsing `{spec}`: {e}"))
    }
}

fn resolve_statement(source: &StatementSource, n: Option<usize>) -> Result<Statement> {
    if n.is_some() && source.family.is_none() {
        bail!("--n only applies together with --family");
    }
    if let Some(text) = &source.stmt {
        return parse_statement(text).map_err(|e| anyhow!("parsing --stmt: {e}"));
    }
    if let Some(path) = &source.stmt_file {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading `{}`", path.display()))?;
        return parse_statement(&text)
            .map_err(|e| anyhow!("parsing `{}`: {e}", path.display()));
    }
    let family = source.family.as_deref().expect("clap enforces the group");
    expand_family(family, n)
}

fn expand_family(family: &str, n: Option<usize>) -> Result<Statement> {
    let (id, level) = parse_family_spec(family);
    gen_identity(&id, n.or(level)).map_err(|e| {
        anyhow!("{e} (families: {})", family_ids().join(", "))
    })
}

enum ModeSpec {
    Exhaustive,
    Generated { k: usize },
    Sampled { trials: u64, seed: u64 },
    Fixed(Vec<(String, String)>),
}

impl fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeSpec::Exhaustive => write!(f, "exhaustive"),
            ModeSpec::Generated { k } => write!(f, "generated:{k}"),
            ModeSpec::Sampled { trials, seed } => write!(f, "sampled:{trials}:{seed}"),
            ModeSpec::Fixed(entries) => {
                write!(f, "fixed:")?;
                for (i, (var, value)) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{var}={value}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `--mode`; `true` in the result means the default was applied.
fn parse_mode(text: Option<&str>) -> Result<(ModeSpec, bool)> {
    let Some(text) = text else {
        return Ok((ModeSpec::Generated { k: 2 }, true));
    };
    if text == "exhaustive" {
        return Ok((ModeSpec::Exhaustive, false));
    }
    if text == "generated" {
        return Ok((ModeSpec::Generated { k: 2 }, false));
    }
    if let Some(rest) = text.strip_prefix("generated:") {
        let k = rest
            .parse()
            .with_context(|| format!("mode `{text}`: `{rest}` is not a pair count"))?;
        return Ok((ModeSpec::Generated { k }, false));
    }
    if let Some(rest) = text.strip_prefix("sampled:") {
        let (trials_text, seed_text) = match rest.split_once(':') {
            Some((t, s)) => (t, Some(s)),
            None => (rest, None),
        };
        let trials = trials_text
            .parse()
            .with_context(|| format!("mode `{text}`: `{trials_text}` is not a trial count"))?;
        let seed = match seed_text {
            Some(s) => s
                .parse()
                .with_context(|| format!("mode `{text}`: `{s}` is not a seed"))?,
            None => 0,
        };
        return Ok((ModeSpec::Sampled { trials, seed }, false));
    }
    if let Some(rest) = text.strip_prefix("fixed:") {
        let mut entries = Vec::new();
        for entry in split_fixed_entries(rest) {
            let (var, value) = entry.split_once('=').ok_or_else(|| {
                anyhow!("mode `fixed:`: entry `{entry}` is not of the form VAR=REL")
            })?;
            entries.push((var.trim().to_string(), value.trim().to_string()));
        }
        if entries.is_empty() {
            bail!("mode `fixed:` needs at least one VAR=REL entry");
        }
        return Ok((ModeSpec::Fixed(entries), false));
    }
    bail!(
        "unknown mode `{text}` (expected exhaustive, generated:K, sampled:TRIALS[:SEED], \
         or fixed:VAR=REL,..)"
    )
}

/// Splits `a=alpha,b=(0,1)(1,2),c=beta` on the commas that separate entries,
/// leaving commas inside pair literals alone.
fn split_fixed_entries(text: &str) -> Vec<String> {
    let mut entries = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            ',' if depth == 0 => {
                if !current.trim().is_empty() {
                    entries.push(current.trim().to_string());
                }
                current.clear();
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        entries.push(current.trim().to_string());
    }
    entries
}

fn parse_pair_list(text: &str) -> Result<Vec<(El, El)>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = cleaned
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| anyhow!("`{text}` is not a pair list like (0,1)(1,2)"))?;
    inner
        .replace("),(", ")(")
        .split(")(")
        .map(|pair| {
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| anyhow!("`({pair})` is not a pair"))?;
            Ok((
                a.parse().with_context(|| format!("element `{a}`"))?,
                b.parse().with_context(|| format!("element `{b}`"))?,
            ))
        })
        .collect()
}

/// Relations for a `fixed:` check, plus the seed pairs of the relations
/// that were generated from literal pair lists (so reports can echo them).
struct FixedBindings {
    relations: Vec<(String, BinaryRelation)>,
    literal_seeds: Vec<(String, Vec<(El, El)>)>,
}

fn resolve_fixed_bindings(
    doc: &AlgebraDocument,
    stmt: &Statement,
    entries: &[(String, String)],
    budget: &ClosureBudget,
) -> Result<FixedBindings> {
    let mut relations = Vec::new();
    let mut literal_seeds = Vec::new();
    for (var, value) in entries {
        if let Some((_, rel)) = doc.relations.iter().find(|(name, _)| name == value) {
            relations.push((var.clone(), rel.clone()));
            continue;
        }
        if value.starts_with('(') {
            let seeds = parse_pair_list(value)?;
            let sort = stmt
                .sort_of(var)
                .ok_or_else(|| anyhow!("`{var}` is not declared in the statement"))?;
            let rel = generated_relation(&doc.algebra, &seeds, sort, budget)?.relation;
            relations.push((var.clone(), rel));
            literal_seeds.push((var.clone(), seeds));
            continue;
        }
        bail!(
            "binding `{var}={value}`: `{value}` names no relation of the algebra \
             (available: {}) and is not a pair list like (0,1)(1,2)",
            if doc.relations.is_empty() {
                "none".to_string()
            } else {
                doc.relations
                    .iter()
                    .map(|(n, _)| n.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        )
    }
    Ok(FixedBindings {
        relations,
        literal_seeds,
    })
}

fn pairs_text(pairs: &[(El, El)]) -> String {
    if pairs.is_empty() {
        return "none".to_string();
    }
    pairs
        .iter()
        .map(|&(a, b)| format!("({a},{b})"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Like [`pairs_text`], but names the empty off-diagonal set for what the
/// relation is: the diagonal.
fn relation_text(rel: &BinaryRelation) -> String {
    let pairs = rel.off_diagonal_pairs();
    if pairs.is_empty() {
        "diagonal".to_string()
    } else {
        pairs_text(&pairs)
    }
}

fn pairs_json(pairs: &[(El, El)]) -> serde_json::Value {
    json!(pairs.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>())
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(args: CheckArgs, format: Format, budget: ClosureBudget) -> Result<ExitCode> {
    let doc = load_algebra(&args.algebra.algebra)?;
    let stmt = resolve_statement(&args.source, args.n)?;
    let (mode, defaulted) = parse_mode(args.mode.as_deref())?;
    if defaulted {
        eprintln!(
            "note: no --mode given; checking over generated:2 candidate relations \
             (capped at {DEFAULT_BINDING_CAP} bindings). Pass --mode exhaustive to \
             range over every relation of each sort."
        );
    }

    let cap = args.max_bindings.or(match mode {
        ModeSpec::Generated { .. } => Some(DEFAULT_BINDING_CAP),
        _ => None,
    });
    let mut checker = Checker::new(&doc.algebra).with_budget(budget);
    if let Some(cap) = cap {
        checker = checker.with_max_bindings(cap);
    }

    let outcome = match &mode {
        ModeSpec::Exhaustive => checker.check(&stmt, CheckMode::Exhaustive)?,
        ModeSpec::Generated { k } => checker.check(&stmt, CheckMode::Generated { k: *k })?,
        ModeSpec::Sampled { trials, seed } => checker.check(
            &stmt,
            CheckMode::Sampled {
                trials: *trials,
                seed: *seed,
            },
        )?,
        ModeSpec::Fixed(entries) => {
            let bindings = resolve_fixed_bindings(&doc, &stmt, entries, &budget)?;
            let mut outcome = checker.check_fixed(&stmt, &bindings.relations)?;
            if let Some(ce) = &mut outcome.counterexample {
                for bound in &mut ce.binding {
                    if let Some((_, seeds)) = bindings
                        .literal_seeds
                        .iter()
                        .find(|(name, _)| *name == bound.name)
                    {
                        bound.seeds = Some(seeds.clone());
                    }
                }
            }
            outcome
        }
    };

    report_check(format, &doc, &stmt, &mode, &outcome);
    Ok(if outcome.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn report_check(
    format: Format,
    doc: &AlgebraDocument,
    stmt: &Statement,
    mode: &ModeSpec,
    outcome: &CheckOutcome,
) {
    match format {
        Format::Text => {
            println!("statement: {stmt}");
            println!(
                "algebra: {} ({} elements)",
                doc.algebra.name(),
                doc.algebra.size()
            );
            println!("mode: {mode}");
            println!(
                "verdict: {}",
                if outcome.holds { "holds" } else { "refuted" }
            );
            println!("bindings-tested: {}", outcome.bindings_tested);
            match outcome.total_bindings {
                Some(total) => println!("total-bindings: {total}"),
                None => println!("total-bindings: unknown"),
            }
            println!("truncated: {}", outcome.truncated);
            if let Some(ce) = &outcome.counterexample {
                println!("violation: {}", ce.violation);
                println!("pair: ({}, {})", ce.pair.0, ce.pair.1);
                if let Some(mid) = ce.midpoint {
                    println!("midpoint: {mid}");
                }
                for bound in &ce.binding {
                    println!("{}", bound_text(bound));
                }
            }
        }
        Format::JsonLines => {
            println!(
                "{}",
                json!({
                    "type": "verdict",
                    "statement": stmt.to_string(),
                    "algebra": doc.algebra.name(),
                    "size": doc.algebra.size(),
                    "mode": mode.to_string(),
                    "holds": outcome.holds,
                    "bindings_tested": outcome.bindings_tested,
                    "total_bindings": outcome.total_bindings.map(|t| t.to_string()),
                    "truncated": outcome.truncated,
                })
            );
            if let Some(ce) = &outcome.counterexample {
                println!("{}", counterexample_json(ce));
            }
        }
    }
}

fn bound_text(bound: &BoundRelation) -> String {
    match &bound.seeds {
        Some(seeds) => format!(
            "binding {}: {} generated from {}",
            bound.name,
            bound.sort.keyword(),
            pairs_text(seeds)
        ),
        None => format!(
            "binding {}: {} with pairs {}",
            bound.name,
            bound.sort.keyword(),
            pairs_text(&bound.relation.off_diagonal_pairs())
        ),
    }
}

fn counterexample_json(ce: &Counterexample) -> serde_json::Value {
    json!({
        "type": "counterexample",
        "pair": [ce.pair.0, ce.pair.1],
        "midpoint": ce.midpoint,
        "violation": ce.violation.to_string(),
        "binding": ce.binding.iter().map(|b| json!({
            "name": b.name,
            "sort": b.sort.keyword(),
            "seeds": b.seeds.as_ref().map(|s| pairs_json(s)),
            "pairs": pairs_json(&b.relation.off_diagonal_pairs()),
        })).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// find-terms
// ---------------------------------------------------------------------------

fn cmd_find_terms(args: FindTermsArgs, format: Format, budget: ClosureBudget) -> Result<ExitCode> {
    let doc = load_algebra(&args.algebra.algebra)?;
    let spec = preset(&args.preset)?;

    let solutions = if args.all {
        find_all_term_systems(&doc.algebra, &spec, &budget)?
    } else {
        find_term_system(&doc.algebra, &spec, &budget)?
            .into_iter()
            .collect()
    };

    match format {
        Format::Text => {
            println!("preset: {}", args.preset);
            println!(
                "algebra: {} ({} elements)",
                doc.algebra.name(),
                doc.algebra.size()
            );
            if solutions.is_empty() {
                println!("found: none");
            } else if args.all {
                println!("solutions: {}", solutions.len());
                for (i, sys) in solutions.iter().enumerate() {
                    println!("solution {}: {}", i + 1, system_text(sys));
                }
            } else {
                println!("found: {}", system_text(&solutions[0]));
                println!(
                    "indices: {}",
                    solutions[0]
                        .indices
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
        }
        Format::JsonLines => {
            if solutions.is_empty() {
                println!(
                    "{}",
                    json!({
                        "type": "term-system",
                        "preset": args.preset,
                        "algebra": doc.algebra.name(),
                        "found": false,
                    })
                );
            }
            for sys in &solutions {
                println!(
                    "{}",
                    json!({
                        "type": "term-system",
                        "preset": args.preset,
                        "algebra": doc.algebra.name(),
                        "found": true,
                        "assignments": sys.assignments.iter().map(|(name, term)| json!({
                            "name": name,
                            "term": term.to_string(),
                        })).collect::<Vec<_>>(),
                        "indices": sys.indices,
                    })
                );
            }
        }
    }
    Ok(if solutions.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn system_text(sys: &TermSystem) -> String {
    sys.assignments
        .iter()
        .map(|(name, term)| format!("{name} = {term}"))
        .collect::<Vec<_>>()
        .join("; ")
}

// ---------------------------------------------------------------------------
// free
// ---------------------------------------------------------------------------

fn cmd_free(args: FreeArgs, format: Format, budget: ClosureBudget) -> Result<ExitCode> {
    let doc = load_algebra(&args.algebra.algebra)?;
    let free = free_algebra(&doc.algebra, args.k, &budget)?;
    match format {
        Format::Text => {
            println!(
                "algebra: {} ({} elements)",
                doc.algebra.name(),
                doc.algebra.size()
            );
            println!("rank: {}", args.k);
            println!("size: {}", free.len());
            println!("complete: {}", free.complete());
        }
        Format::JsonLines => println!(
            "{}",
            json!({
                "type": "free-algebra",
                "algebra": doc.algebra.name(),
                "rank": args.k,
                "size": free.len(),
                "complete": free.complete(),
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// relations
// ---------------------------------------------------------------------------

fn cmd_relations(args: RelationsArgs, format: Format, budget: ClosureBudget) -> Result<ExitCode> {
    let doc = load_algebra(&args.algebra.algebra)?;

    if args.sort == "preorder" {
        let lattice = preorder_lattice(&doc.algebra, &budget, args.limit)?;
        match format {
            Format::Text => {
                println!(
                    "algebra: {} ({} elements)",
                    doc.algebra.name(),
                    doc.algebra.size()
                );
                println!("sort: preorder");
                println!("count: {}", lattice.relations.len());
                println!("distributive: {}", lattice.distributive);
                if let Some((a, b, c)) = lattice.distributive_failure {
                    println!("distributive-failure: relations {a}, {b}, {c}");
                }
                for (i, rel) in lattice.relations.iter().enumerate() {
                    println!("relation {i}: {}", relation_text(rel));
                }
            }
            Format::JsonLines => {
                println!(
                    "{}",
                    json!({
                        "type": "relation-lattice",
                        "algebra": doc.algebra.name(),
                        "sort": "preorder",
                        "count": lattice.relations.len(),
                        "distributive": lattice.distributive,
                    })
                );
                for (i, rel) in lattice.relations.iter().enumerate() {
                    println!(
                        "{}",
                        json!({
                            "type": "relation",
                            "index": i,
                            "pairs": pairs_json(&rel.off_diagonal_pairs()),
                        })
                    );
                }
            }
        }
        return Ok(ExitCode::SUCCESS);
    }

    let sort = Sort::from_keyword(&args.sort)
        .ok_or_else(|| anyhow!("unknown sort `{}` (cong, tol, rel, preorder)", args.sort))?;
    let relations = enumerate_relations(&doc.algebra, sort, &budget, args.limit)?;
    match format {
        Format::Text => {
            println!(
                "algebra: {} ({} elements)",
                doc.algebra.name(),
                doc.algebra.size()
            );
            println!("sort: {}", sort.keyword());
            println!("count: {}", relations.len());
            for (i, rel) in relations.iter().enumerate() {
                println!("relation {i}: {}", relation_text(rel));
            }
        }
        Format::JsonLines => {
            println!(
                "{}",
                json!({
                    "type": "relation-lattice",
                    "algebra": doc.algebra.name(),
                    "sort": sort.keyword(),
                    "count": relations.len(),
                })
            );
            for (i, rel) in relations.iter().enumerate() {
                println!(
                    "{}",
                    json!({
                        "type": "relation",
                        "index": i,
                        "pairs": pairs_json(&rel.off_diagonal_pairs()),
                    })
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// gen-identity
// ---------------------------------------------------------------------------

fn cmd_gen_identity(args: GenIdentityArgs, format: Format) -> Result<ExitCode> {
    let stmt = expand_family(&args.family, args.n)?;
    match format {
        Format::Text => println!("{stmt}"),
        Format::JsonLines => println!(
            "{}",
            json!({
                "type": "statement",
                "family": args.family,
                "statement": stmt.to_string(),
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify-paper
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs, format: Format) -> Result<ExitCode> {
    let report = run_filtered(args.filter.as_deref().unwrap_or(""));
    match format {
        Format::Text => print!("{}", report.render()),
        Format::JsonLines => {
            for fact in &report.facts {
                let (pass, detail) = match &fact.outcome {
                    Ok(detail) => (true, detail),
                    Err(reason) => (false, reason),
                };
                println!(
                    "{}",
                    json!({
                        "type": "fact",
                        "id": fact.id,
                        "pass": pass,
                        "detail": detail,
                    })
                );
            }
            println!(
                "{}",
                json!({
                    "type": "summary",
                    "passed": report.passed(),
                    "failed": report.failed(),
                })
            );
        }
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

fn cmd_export(args: ExportArgs) -> Result<ExitCode> {
    let doc = load_algebra(&args.algebra.algebra)?;
    let text = serialize_document(&doc.algebra, &doc.relations);
    match &args.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing `{}`", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
