//! `corrlattice`: enumerate the three lattice levels, build class catalogs and
//! run the invariant checks from the command line.
//!
//! Exit codes: 0 success, 1 bad input, 2 cap breach, 3 invariant failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corrlattice::catalogs::{
    atom_antichain_catalog_capped, chain_catalog, coatom_antichain_catalog_capped, finest_catalog, generic_catalog,
    Catalog, CatalogError, DEFAULT_MAX_FILTERS,
};
use corrlattice::classifier::{
    as_labeled_family, enumerate_filters, lemma_principal_check, oracle_cross_check, principal_filters, sample_filters,
    ClassifierError, PairCheck, MAX_EXHAUSTIVE_CONTEXT,
};
use corrlattice::dot::{filter_hasse, ideal_hasse, partition_hasse, Hasse};
use corrlattice::ideals::{chain_check_part_prod, ideal_poset, IdealError, MAX_MATERIALIZED_N};
use corrlattice::partitions::{PartitionError, DEFAULT_MAX_N};
use corrlattice::venn::{
    generic_family, non_sufficiency_family, posets_up_to_isomorphism, seeded_families, MAX_LABELS,
};
use corrlattice::{class_exists, PartitionLattice, PropertySubset};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "corrlattice", version, about = "Partial-correlation classes of multipartite systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hasse diagram of one level.
    Lattice(LatticeArgs),
    /// Classify the filters of a property subset.
    Classify(ClassifyArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Caps {
    /// Largest number of parties accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
    /// Largest context for which all filters are enumerated.
    #[arg(long, default_value_t = MAX_EXHAUSTIVE_CONTEXT)]
    max_context: usize,
    /// Largest number of filters enumerated at once.
    #[arg(long, default_value_t = DEFAULT_MAX_FILTERS)]
    max_filters: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Level {
    #[value(name = "I")]
    One,
    #[value(name = "II")]
    Two,
    #[value(name = "III")]
    Three,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ContextKind {
    Full,
    #[value(name = "k_part")]
    KPart,
    #[value(name = "k_prod")]
    KProd,
    Atoms,
    Coatoms,
    Custom,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct ContextArgs {
    #[arg(long, value_enum, default_value = "full")]
    context: ContextKind,
    /// One ideal per line, by its maximal partitions: `12|3, 13|2`.
    #[arg(long)]
    context_file: Option<PathBuf>,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    level: Level,
    #[arg(long, conflicts_with = "json")]
    dot: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    context: ContextArgs,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    context: ContextArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Render partitions by shape (`ab|c`) instead of by parties.
    #[arg(long)]
    letters: bool,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "venn")]
    n: Option<usize>,
    #[command(flatten)]
    context: ContextArgs,
    /// Check every filter and every filter pair of the context.
    #[arg(long)]
    exhaustive: bool,
    /// Random filters checked when not exhaustive.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Check intersection classes of random labeled families.
    #[arg(long)]
    venn: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    families: usize,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    caps: Caps,
}

enum Failure {
    Input(String),
    Cap(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Cap(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Cap(m) | Failure::Invariant(m) => m,
        }
    }
}

impl From<PartitionError> for Failure {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::PartiesOutOfRange { .. } => Failure::Cap(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<IdealError> for Failure {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::Partition(p) => p.into(),
            IdealError::TooManyParties { .. } | IdealError::Poset(_) => Failure::Cap(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<ClassifierError> for Failure {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::ContextTooLarge { .. } | ClassifierError::Poset(_) => Failure::Cap(e.to_string()),
            ClassifierError::Ideal(i) => i.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::CapExceeded { .. } | CatalogError::TooManyParties { .. } => Failure::Cap(e.to_string()),
            CatalogError::Classifier(c) => c.into(),
            CatalogError::Ideal(i) => i.into(),
            CatalogError::Partition(p) => p.into(),
            other => Failure::Input(other.to_string()),
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
    let result = match cli.command {
        Command::Lattice(args) => cmd_lattice(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, failure)) => {
            print!("{out}");
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

/// Output produced so far travels with the failure, so an invariant failure
/// still prints its report.
type CmdResult = Result<String, (String, Failure)>;

fn bare<T, E: Into<Failure>>(r: Result<T, E>) -> Result<T, (String, Failure)> {
    r.map_err(|e| (String::new(), e.into()))
}

fn lattice(n: usize, caps: &Caps) -> Result<Arc<PartitionLattice>, Failure> {
    if n == 0 {
        return Err(Failure::Input("n must be at least 1".to_string()));
    }
    Ok(Arc::new(PartitionLattice::with_cap(n, caps.max_n)?))
}

fn context(n: usize, args: &ContextArgs, caps: &Caps) -> Result<Arc<PropertySubset>, Failure> {
    let lattice = lattice(n, caps)?;
    if args.context_file.is_some() && args.context != ContextKind::Custom {
        return Err(Failure::Input("--context-file requires --context custom".to_string()));
    }
    let ctx = match args.context {
        ContextKind::Full => {
            if n > MAX_MATERIALIZED_N {
                return Err(Failure::Cap(format!("the full ideal lattice is available for n ≤ {MAX_MATERIALIZED_N}")));
            }
            PropertySubset::full(lattice)?
        }
        ContextKind::KPart => PropertySubset::k_partitionability(lattice)?,
        ContextKind::KProd => PropertySubset::k_producibility(lattice)?,
        ContextKind::Atoms => PropertySubset::atoms(lattice)?,
        ContextKind::Coatoms => PropertySubset::coatoms(lattice)?,
        ContextKind::Custom => {
            let path = args
                .context_file
                .as_ref()
                .ok_or_else(|| Failure::Input("--context custom requires --context-file".to_string()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            PropertySubset::parse(lattice, &text)?
        }
    };
    Ok(Arc::new(ctx))
}

fn all_filters_capped(ctx: &Arc<PropertySubset>, caps: &Caps) -> Result<Vec<corrlattice::Filter>, Failure> {
    if ctx.len() > caps.max_context.min(MAX_EXHAUSTIVE_CONTEXT) {
        return Err(Failure::Cap(format!(
            "context {} has {} properties; enumerating all filters allows at most {}",
            ctx.name(),
            ctx.len(),
            caps.max_context.min(MAX_EXHAUSTIVE_CONTEXT)
        )));
    }
    Ok(enumerate_filters(ctx, caps.max_filters)?)
}

fn render(hasse: &Hasse, args: &LatticeArgs) -> String {
    if args.dot {
        hasse.to_dot()
    } else if args.json {
        serde_json::to_string_pretty(hasse).expect("serializable") + "\n"
    } else {
        let mut out = format!("# {}: {} nodes, {} covering pairs\n", hasse.name, hasse.nodes.len(), hasse.edges.len());
        for (i, node) in hasse.nodes.iter().enumerate() {
            let _ = writeln!(out, "{i}\t{node}");
        }
        for (lo, hi) in &hasse.edges {
            let _ = writeln!(out, "{lo} < {hi}");
        }
        out
    }
}

fn cmd_lattice(args: &LatticeArgs) -> CmdResult {
    let hasse = match args.level {
        Level::One => partition_hasse(&*bare(lattice(args.n, &args.caps))?),
        Level::Two => {
            if args.context.context == ContextKind::Full {
                let lattice = bare(lattice(args.n, &args.caps))?;
                if args.n > MAX_MATERIALIZED_N {
                    return Err((String::new(), Failure::Cap(format!("level II needs n ≤ {MAX_MATERIALIZED_N}"))));
                }
                ideal_hasse(&bare(ideal_poset(lattice))?)
            } else {
                ideal_hasse(&*bare(context(args.n, &args.context, &args.caps))?)
            }
        }
        Level::Three => {
            if args.context.context == ContextKind::Full && args.n > 3 {
                return Err((
                    String::new(),
                    Failure::Cap("level III over the full ideal lattice needs n ≤ 3; choose a smaller context".into()),
                ));
            }
            let ctx = bare(context(args.n, &args.context, &args.caps))?;
            let filters = bare(all_filters_capped(&ctx, &args.caps))?;
            bare(filter_hasse(&ctx, &filters))?
        }
    };
    Ok(render(&hasse, args))
}

fn catalog_for(args: &ClassifyArgs) -> Result<Catalog, Failure> {
    let caps = &args.caps;
    lattice(args.n, caps)?;
    let catalog = match args.context.context {
        ContextKind::Full => finest_catalog(args.n)?,
        ContextKind::KPart | ContextKind::KProd => chain_catalog(context(args.n, &args.context, caps)?)?,
        ContextKind::Atoms => {
            check_context_cap(&*context(args.n, &args.context, caps)?, caps)?;
            atom_antichain_catalog_capped(args.n, caps.max_filters)?
        }
        ContextKind::Coatoms => {
            check_context_cap(&*context(args.n, &args.context, caps)?, caps)?;
            coatom_antichain_catalog_capped(args.n, caps.max_filters)?
        }
        ContextKind::Custom => {
            let ctx = context(args.n, &args.context, caps)?;
            if ctx.is_chain() {
                chain_catalog(ctx)?
            } else {
                check_context_cap(&ctx, caps)?;
                generic_catalog(ctx, caps.max_filters)?
            }
        }
    };
    Ok(catalog)
}

fn check_context_cap(ctx: &PropertySubset, caps: &Caps) -> Result<(), Failure> {
    if ctx.len() > caps.max_context {
        return Err(Failure::Cap(format!(
            "context {} has {} properties, above --max-context {}",
            ctx.name(),
            ctx.len(),
            caps.max_context
        )));
    }
    Ok(())
}

fn cmd_classify(args: &ClassifyArgs) -> CmdResult {
    let catalog = bare(catalog_for(args))?;
    let out = match args.format {
        Format::Text => catalog.to_text(args.letters),
        Format::Json => serde_json::to_string_pretty(&catalog.to_json(args.letters)).expect("serializable") + "\n",
        Format::Dot => {
            let labels: Vec<_> = catalog.classes.iter().map(|c| c.descriptor.label.clone()).collect();
            bare(filter_hasse(&catalog.context, &labels))?.to_dot()
        }
    };
    let report = catalog.cross_check();
    if !report.passed() {
        let detail = serde_json::to_string(&report.discrepancies).expect("serializable");
        return Err((out, Failure::Invariant(format!("oracle discrepancies: {detail}"))));
    }
    Ok(out)
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: Value,
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let mut checks = Vec::new();
    if let Some(n) = args.n {
        bare(structural_checks(n, args, &mut checks))?;
    }
    if args.venn {
        venn_checks(args, &mut checks);
    }
    let passed = checks.iter().all(|c| c.passed);
    let out = if args.json {
        let value = json!({
            "n": args.n,
            "seed": args.seed,
            "passed": passed,
            "checks": checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&value).expect("serializable") + "\n"
    } else {
        let mut out = String::new();
        for c in &checks {
            let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        out
    };
    if passed {
        Ok(out)
    } else {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        Err((out, Failure::Invariant(format!("failed checks: {}", failed.join(", ")))))
    }
}

fn structural_checks(n: usize, args: &VerifyArgs, checks: &mut Vec<Check>) -> Result<(), Failure> {
    let ctx = context(n, &args.context, &args.caps)?;
    let lattice = ctx.lattice().clone();

    let chains = chain_check_part_prod(&lattice);
    checks.push(Check {
        name: "partitionability_producibility_chains",
        passed: chains.passed(),
        detail: json!({ "pairs": chains.pairs_checked, "violations": chains.violations }),
    });

    let (filters, pairs) = if args.exhaustive {
        (all_filters_capped(&ctx, &args.caps)?, PairCheck::Exhaustive)
    } else {
        let mut filters = principal_filters(&ctx);
        filters.extend(sample_filters(&ctx, args.samples, args.seed));
        let count = filters.len().min(10_000);
        (filters, PairCheck::Sampled { count, seed: args.seed })
    };
    let report = oracle_cross_check(&filters, pairs);
    checks.push(Check {
        name: "oracle_equivalence",
        passed: report.passed(),
        detail: serde_json::to_value(&report).expect("serializable"),
    });

    let universe = if n <= MAX_MATERIALIZED_N { Some(PropertySubset::full(lattice.clone())?) } else { None };
    let mut lemma_failures = Vec::new();
    let mut nonempty = 0;
    for f in filters.iter().filter(|f| class_exists(f).exists) {
        nonempty += 1;
        let report = lemma_principal_check(f, universe.as_ref());
        if !report.passed() {
            lemma_failures.push(report.label);
        }
    }
    checks.push(Check {
        name: "principal_labels",
        passed: lemma_failures.is_empty(),
        detail: json!({
            "nonempty_filters": nonempty,
            "separation_checked": universe.is_some(),
            "failures": lemma_failures,
        }),
    });

    if ctx.len() <= MAX_LABELS {
        let report = as_labeled_family(&ctx).check_lemma_upset().expect("label count checked");
        checks.push(Check {
            name: "nonempty_classes_have_up_set_labels",
            passed: report.passed(),
            detail: json!({
                "labels_checked": report.labels_checked,
                "nonempty_labels": report.nonempty_labels.len(),
                "violations": report.violations,
            }),
        });
    }
    Ok(())
}

fn venn_checks(args: &VerifyArgs, checks: &mut Vec<Check>) {
    let families = seeded_families(args.families, args.seed);
    let failures: Vec<usize> = families
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.check_lemma_upset().map(|r| r.passed()).unwrap_or(false))
        .map(|(i, _)| i)
        .collect();
    checks.push(Check {
        name: "random_families_up_set_labels",
        passed: failures.is_empty(),
        detail: json!({ "families": families.len(), "seed": args.seed, "failing_families": failures }),
    });

    let posets = posets_up_to_isomorphism(3);
    let generic_ok = posets.iter().all(|p| {
        generic_family(p)
            .and_then(|f| f.check_lemma_upset())
            .map(|r| r.passed() && r.empty_up_sets.is_empty())
            .unwrap_or(false)
    });
    checks.push(Check {
        name: "generic_families_realize_every_up_set",
        passed: generic_ok && posets.len() == 5,
        detail: json!({ "posets": posets.len() }),
    });

    let family = non_sufficiency_family();
    let report = family.check_lemma_upset().expect("three labels");
    checks.push(Check {
        name: "empty_up_set_label_exists",
        passed: report.passed() && report.empty_up_sets.contains(&vec![0]),
        detail: json!({ "empty_up_sets": report.empty_up_sets }),
    });
}
