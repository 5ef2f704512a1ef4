use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lsq_core::io::{write_fixed_set, write_reports};
use lsq_core::tables::{read_parameter_rows, verify_parameter_rows, verify_table, VerifyOptions};
use lsq_core::{
    autotopism_group, bind_labels, cycle_structure_catalog, enumerate_cached, invariant_vector, partition_classes,
    structure_report_from_set, Error, Format, Isotopism, IsotopismCycleStructure, LatinSquare, ReportOptions, Result,
    RunConfig,
};
use serde_json::json;

/// Latin square autotopisms and the 1-(v,k,r) structures they induce.
#[derive(Parser)]
#[command(name = "lsq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format: text, csv or json.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Directory for cached fixed-square sets.
    #[arg(long, global = true, env = "LSQ_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Search step budget per enumeration.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the cycle structures with at least one fixed square.
    Catalog {
        #[arg(long)]
        order: usize,
        /// List every ordering of the components, not one per reordering class.
        #[arg(long)]
        all_orderings: bool,
    },
    /// Enumerate the squares fixed by an isotopism.
    Enum {
        #[command(flatten)]
        target: Target,
    },
    /// Invariants of the square in a file.
    Invariants {
        #[arg(long)]
        square: PathBuf,
        /// Include the autotopism group order.
        #[arg(long)]
        group: bool,
    },
    /// Split the fixed squares of an isotopism into isotopy classes.
    Classify {
        #[command(flatten)]
        target: Target,
    },
    /// Autotopism group of the square in a file.
    Group {
        #[arg(long)]
        square: PathBuf,
        /// Keep only elements with this cycle structure.
        #[arg(long)]
        structure: Option<IsotopismCycleStructure>,
    },
    /// Parameters of the structures of one order.
    Report {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        structure: Option<IsotopismCycleStructure>,
        /// Keep only this class, e.g. "c_{4,1}".
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        all_orderings: bool,
    },
    /// Recompute a shipped table, or a parameter table file, and compare.
    Verify {
        /// Table number: 1, 2, 4, 6 (parameters) or 3, 5 (invariants).
        #[arg(long, required_unless_present = "against", conflicts_with = "against")]
        table: Option<u8>,
        /// Parameter rows in the shipped CSV layout (n,structure,class,v,b,k,r,mult).
        #[arg(long)]
        against: Option<PathBuf>,
        /// Restrict to these structures (repeatable).
        #[arg(long)]
        structure: Vec<IsotopismCycleStructure>,
    },
}

#[derive(Args)]
struct Target {
    /// Cycle structure "l1|l2|l3"; its canonical isotopism is used.
    #[arg(long, conflicts_with = "isotopism", required_unless_present = "isotopism")]
    structure: Option<IsotopismCycleStructure>,
    /// File with "alpha: ...", "beta: ...", "gamma: ..." lines.
    #[arg(long)]
    isotopism: Option<PathBuf>,
}

impl Target {
    fn theta(&self) -> Result<Isotopism> {
        match (&self.structure, &self.isotopism) {
            (Some(l), _) => Ok(l.canonical_isotopism()),
            (None, Some(path)) => Isotopism::parse(&std::fs::read_to_string(path)?, None),
            (None, None) => Err(Error::Invalid("give --structure or --isotopism".into())),
        }
    }
}

fn config(common: &Common) -> RunConfig {
    let mut cfg = RunConfig {
        format: common.format,
        cache_dir: common.cache_dir.clone(),
        ..RunConfig::default()
    };
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    if let Some(b) = common.budget {
        cfg.budget = b;
    }
    cfg
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_square(path: &Path) -> Result<LatinSquare> {
    std::fs::read_to_string(path)?.parse()
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = config(&cli.common);
    if let Command::Report { order, structure, class, .. } = &cli.command {
        cfg.order = Some(*order);
        cfg.structure = structure.clone();
        cfg.class_filter = class.clone();
    }
    cfg.validate()?;
    cfg.init_workers()?;
    let mut out = output(cli.common.out.as_deref())?;
    let report_opts = ReportOptions {
        limits: cfg.limits(),
        ..ReportOptions::default()
    };

    match &cli.command {
        Command::Catalog { order, all_orderings } => {
            let entries = cycle_structure_catalog(*order, cfg.limits(), *all_orderings)?;
            match cfg.format {
                Format::Json => {
                    let list: Vec<_> = entries
                        .iter()
                        .map(|e| json!({"structure": e.structure.to_compact(), "trivial": e.trivial}))
                        .collect();
                    print_json(&mut out, &json!(list))?;
                }
                Format::Csv => {
                    writeln!(out, "structure,trivial")?;
                    for e in &entries {
                        writeln!(out, "\"{}\",{}", e.structure.to_compact(), e.trivial)?;
                    }
                }
                Format::Text => {
                    for e in &entries {
                        writeln!(out, "{}{}", e.structure, if e.trivial { "  trivial" } else { "" })?;
                    }
                }
            }
        }
        Command::Enum { target } => {
            let set = enumerate_cached(&target.theta()?, cfg.limits(), cfg.cache().as_ref())?;
            match cfg.format {
                Format::Json => {
                    let squares: Vec<String> = set.squares().iter().map(LatinSquare::to_compact).collect();
                    print_json(&mut out, &json!({"theta": set.theta().to_text(), "count": set.len(), "squares": squares}))?;
                }
                _ => write_fixed_set(&set, &mut out)?,
            }
            eprintln!("{} fixed squares", set.len());
        }
        Command::Invariants { square, group } => {
            let v = invariant_vector(&read_square(square)?, *group)?;
            match cfg.format {
                Format::Json => print_json(&mut out, &serde_json::to_value(v)?)?,
                Format::Csv => {
                    writeln!(out, "transversals,intercalates,subsquares3,subrect2x3,subrect3x2,group_order")?;
                    let c = v.counts();
                    let g = v.group_order.map(|g| g.to_string()).unwrap_or_default();
                    writeln!(out, "{},{},{},{},{},{g}", c[0], c[1], c[2], c[3], c[4])?;
                }
                Format::Text => writeln!(out, "{v}")?,
            }
        }
        Command::Classify { target } => {
            let theta = target.theta()?;
            let set = enumerate_cached(&theta, cfg.limits(), cfg.cache().as_ref())?;
            let catalog = lsq_core::LabelCatalog::for_order(theta.degree())?;
            let classes = bind_labels(partition_classes(&set)?, &catalog);
            match cfg.format {
                Format::Json => {
                    let list: Vec<_> = classes
                        .iter()
                        .map(|c| {
                            json!({
                                "label": c.label,
                                "size": c.members_count(),
                                "invariants": c.invariants,
                                "representative": c.representative.to_compact(),
                            })
                        })
                        .collect();
                    print_json(&mut out, &json!(list))?;
                }
                Format::Csv => {
                    writeln!(out, "label,size,invariants,representative")?;
                    for c in &classes {
                        writeln!(
                            out,
                            "\"{}\",{},\"{}\",\"{}\"",
                            c.label_or_unknown(),
                            c.members_count(),
                            c.invariants,
                            c.representative.to_compact()
                        )?;
                    }
                }
                Format::Text => {
                    writeln!(out, "{} fixed squares in {} classes", set.len(), classes.len())?;
                    for c in &classes {
                        writeln!(out, "{:<24} {:>8}  {}", c.label_or_unknown(), c.members_count(), c.invariants)?;
                    }
                }
            }
        }
        Command::Group { square, structure } => {
            let g = autotopism_group(&read_square(square)?)?;
            let elements: Vec<Isotopism> = match structure {
                Some(l) => g.filter_by_structure(l),
                None => g.elements().to_vec(),
            };
            match cfg.format {
                Format::Json | Format::Csv => {
                    let list: Vec<_> = elements
                        .iter()
                        .map(|t| json!({"alpha": t.alpha.to_string(), "beta": t.beta.to_string(), "gamma": t.gamma.to_string()}))
                        .collect();
                    print_json(&mut out, &json!(list))?;
                }
                Format::Text => {
                    writeln!(out, "order {}", g.order())?;
                    for t in &elements {
                        writeln!(out, "({}, {}, {})", t.alpha, t.beta, t.gamma)?;
                    }
                }
            }
        }
        Command::Report { order, structure, all_orderings, .. } => {
            let structures = match structure {
                Some(l) => vec![l.clone()],
                None => cycle_structure_catalog(*order, cfg.limits(), *all_orderings)?
                    .into_iter()
                    .filter(|e| !e.trivial)
                    .map(|e| e.structure)
                    .collect(),
            };
            let mut reports = Vec::new();
            for l in &structures {
                let rows = match enumerate_cached(&l.canonical_isotopism(), cfg.limits(), cfg.cache().as_ref()) {
                    Ok(set) => structure_report_from_set(l, &set, &report_opts)?,
                    Err(Error::BudgetExceeded { .. }) => vec![lsq_core::StructureReport::heavy(l, lsq_core::design::b_of(l)?)],
                    Err(e) => return Err(e),
                };
                reports.extend(rows.into_iter().filter(|r| cfg.class_matches(&r.class_label)));
            }
            write_reports(&reports, cfg.format, &mut out)?;
        }
        Command::Verify { table, against, structure } => {
            let opts = VerifyOptions {
                report: report_opts,
                cache: cfg.cache(),
                only: (!structure.is_empty()).then(|| structure.clone()),
            };
            let v = match (table, against) {
                (Some(id), _) => verify_table(*id, &opts)?,
                (None, Some(path)) => verify_parameter_rows(read_parameter_rows(File::open(path)?)?, &opts)?,
                (None, None) => return Err(Error::Invalid("give --table or --against".into())),
            };
            writeln!(out, "{}", v.summary())?;
            for d in &v.diffs {
                writeln!(out, "  {d}")?;
            }
            for m in &v.missing {
                writeln!(out, "  missing: {m}")?;
            }
            for m in &v.unexpected {
                writeln!(out, "  unexpected: {m}")?;
            }
            for m in &v.problems {
                writeln!(out, "  problem: {m}")?;
            }
            for (l, why) in &v.skipped {
                if why != "not selected" {
                    writeln!(out, "  skipped: {} ({why})", l.to_compact())?;
                }
            }
            out.flush()?;
            return Ok(if v.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
