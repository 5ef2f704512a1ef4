//! Report serialization, the fixed-set cache and run configuration.

use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::design::{Status, StructureReport, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::fixed::{enumerate_fixed, FixedSet, SearchLimits};
use crate::latin::{Isotopism, IsotopismCycleStructure, LatinSquare};
use crate::perm::Permutation;

/// Output format of the command-line tools.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("unknown format {s:?} (csv, json, text)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Settings shared by all subcommands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub order: Option<usize>,
    pub structure: Option<IsotopismCycleStructure>,
    pub class_filter: Option<String>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
    pub budget: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: None,
            structure: None,
            class_filter: None,
            format: Format::Text,
            cache_dir: None,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::Invalid("worker count must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::Invalid("budget must be positive".into()));
        }
        if let (Some(n), Some(l)) = (self.order, &self.structure) {
            if l.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: l.degree(),
                });
            }
        }
        Ok(())
    }

    /// Sizes the global worker pool; only the first call in a process counts.
    pub fn init_workers(&self) -> Result<()> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build_global()
            .map_err(|e| Error::Invalid(e.to_string()))
    }

    pub fn limits(&self) -> SearchLimits {
        SearchLimits::with_budget(self.budget)
    }

    pub fn cache(&self) -> Option<Cache> {
        self.cache_dir.as_ref().map(Cache::new)
    }

    /// Whether a class label passes the class filter. The filter matches a
    /// full label or any alternative of an ambiguous one.
    pub fn class_matches(&self, label: &str) -> bool {
        match &self.class_filter {
            None => true,
            Some(f) => label == f || label.split('|').any(|part| part == f),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    n: usize,
    l1: String,
    l2: String,
    l3: String,
    class_label: String,
    v: Option<u64>,
    b: u64,
    k: Option<u64>,
    r: Option<u64>,
    mult: Option<u64>,
    is_design: Option<bool>,
    status: String,
}

impl From<&StructureReport> for CsvRow {
    fn from(r: &StructureReport) -> Self {
        CsvRow {
            n: r.n,
            l1: r.l.l1.to_compact(),
            l2: r.l.l2.to_compact(),
            l3: r.l.l3.to_compact(),
            class_label: r.class_label.clone(),
            v: r.v,
            b: r.b,
            k: r.k,
            r: r.r,
            mult: r.mult,
            is_design: r.is_design,
            status: r.status.to_string(),
        }
    }
}

impl TryFrom<CsvRow> for StructureReport {
    type Error = Error;

    fn try_from(row: CsvRow) -> Result<Self> {
        let l = IsotopismCycleStructure::new(row.l1.parse()?, row.l2.parse()?, row.l3.parse()?)?;
        if l.degree() != row.n {
            return Err(Error::DegreeMismatch {
                left: row.n,
                right: l.degree(),
            });
        }
        Ok(StructureReport {
            n: row.n,
            l,
            class_label: row.class_label,
            v: row.v,
            b: row.b,
            k: row.k,
            r: row.r,
            mult: row.mult,
            is_design: row.is_design,
            status: row.status.parse()?,
        })
    }
}

/// Writes reports as CSV with columns
/// `n,l1,l2,l3,class_label,v,b,k,r,mult,is_design,status`.
pub fn write_reports_csv(reports: &[StructureReport], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_reports_csv(input: impl Read) -> Result<Vec<StructureReport>> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize::<CsvRow>()
        .map(|row| StructureReport::try_from(row?))
        .collect()
}

/// A value with a note on where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Traced<T> {
    pub value: T,
    pub provenance: String,
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    n: usize,
    l1: String,
    l2: String,
    l3: String,
    class_label: Traced<String>,
    v: Traced<Option<u64>>,
    b: Traced<u64>,
    k: Traced<Option<u64>>,
    r: Traced<Option<u64>>,
    mult: Traced<Option<u64>>,
    is_design: Traced<Option<bool>>,
    status: Status,
}

fn traced<T>(value: T, present: bool, how: &str) -> Traced<T> {
    Traced {
        value,
        provenance: if present { how.to_string() } else { "skipped: over budget".to_string() },
    }
}

impl From<&StructureReport> for JsonReport {
    fn from(r: &StructureReport) -> Self {
        JsonReport {
            n: r.n,
            l1: r.l.l1.to_compact(),
            l2: r.l.l2.to_compact(),
            l3: r.l.l3.to_compact(),
            class_label: traced(
                r.class_label.clone(),
                !r.class_label.is_empty(),
                "invariant tuple matched against the shipped class catalog",
            ),
            v: traced(r.v, r.v.is_some(), "n!^3 / |A_L| with A_L from exhaustive isotopism search"),
            b: traced(r.b, true, "product of the conjugacy class sizes of l1, l2, l3"),
            k: traced(r.k, r.k.is_some(), "class size inside the enumerated LS_theta"),
            r: traced(r.r, r.r.is_some(), "b*k/v, checked against |A_l(L)| of the class representative"),
            mult: traced(r.mult, r.mult.is_some(), "equal-block groups among the blocks of A_l(L)"),
            is_design: traced(r.is_design, r.is_design.is_some(), "mult == 1"),
            status: r.status,
        }
    }
}

impl TryFrom<JsonReport> for StructureReport {
    type Error = Error;

    fn try_from(j: JsonReport) -> Result<Self> {
        let l = IsotopismCycleStructure::new(j.l1.parse()?, j.l2.parse()?, j.l3.parse()?)?;
        Ok(StructureReport {
            n: j.n,
            l,
            class_label: j.class_label.value,
            v: j.v.value,
            b: j.b.value,
            k: j.k.value,
            r: j.r.value,
            mult: j.mult.value,
            is_design: j.is_design.value,
            status: j.status,
        })
    }
}

/// Writes reports as a JSON array, each numeric field with its provenance.
pub fn write_reports_json(reports: &[StructureReport], mut out: impl Write) -> Result<()> {
    let rows: Vec<JsonReport> = reports.iter().map(JsonReport::from).collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_reports_json(input: impl Read) -> Result<Vec<StructureReport>> {
    let rows: Vec<JsonReport> = serde_json::from_reader(input)?;
    rows.into_iter().map(StructureReport::try_from).collect()
}

/// Plain-text table of reports.
pub fn write_reports_text(reports: &[StructureReport], mut out: impl Write) -> Result<()> {
    let opt = |x: Option<u64>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
    for r in reports {
        writeln!(
            out,
            "{}  {}  v={} b={} k={} r={} mult={} design={} [{}]",
            r.l,
            if r.class_label.is_empty() { "-" } else { &r.class_label },
            opt(r.v),
            r.b,
            opt(r.k),
            opt(r.r),
            opt(r.mult),
            r.is_design.map_or("-".to_string(), |d| d.to_string()),
            r.status
        )?;
    }
    Ok(())
}

pub fn write_reports(reports: &[StructureReport], format: Format, out: impl Write) -> Result<()> {
    match format {
        Format::Csv => write_reports_csv(reports, out),
        Format::Json => write_reports_json(reports, out),
        Format::Text => write_reports_text(reports, out),
    }
}

/// On-disk cache of fixed sets, one file per `(n, Θ)`: a `theta` header line
/// with the 1-based image lists, then one comma-separated square per line.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn theta_key(theta: &Isotopism) -> String {
    [&theta.alpha, &theta.beta, &theta.gamma]
        .iter()
        .map(|p| p.images_one_based().iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-"))
        .collect::<Vec<_>>()
        .join("_")
}

fn theta_header(theta: &Isotopism) -> String {
    format!(
        "theta {} | {} | {}",
        theta.alpha.to_image_string(),
        theta.beta.to_image_string(),
        theta.gamma.to_image_string()
    )
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, theta: &Isotopism) -> PathBuf {
        self.dir
            .join(format!("n{}_{}.lsq", theta.degree(), theta_key(theta)))
    }

    /// The cached set, if present.
    pub fn load(&self, theta: &Isotopism) -> Result<Option<FixedSet>> {
        let path = self.path_for(theta);
        if !path.exists() {
            return Ok(None);
        }
        read_fixed_set(BufReader::new(fs::File::open(path)?)).map(Some)
    }

    pub fn store(&self, set: &FixedSet) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(set.theta());
        let tmp = path.with_extension("tmp");
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            write_fixed_set(set, &mut w)?;
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

pub fn write_fixed_set(set: &FixedSet, mut out: impl Write) -> Result<()> {
    writeln!(out, "{}", theta_header(set.theta()))?;
    for l in set.squares() {
        writeln!(out, "{}", l.to_compact())?;
    }
    Ok(())
}

pub fn read_fixed_set(input: impl BufRead) -> Result<FixedSet> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty cache file".into()))??;
    let body = header
        .strip_prefix("theta ")
        .ok_or_else(|| Error::Parse(format!("bad cache header {header:?}")))?;
    let comps: Vec<&str> = body.split('|').collect();
    if comps.len() != 3 {
        return Err(Error::Parse(format!("bad cache header {header:?}")));
    }
    let perms = comps
        .iter()
        .map(|c| {
            let images = c
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad image {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_one_based(&images)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut it = perms.into_iter();
    let theta = Isotopism::new(it.next().unwrap(), it.next().unwrap(), it.next().unwrap())?;
    let n = theta.degree();
    let mut squares = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        squares.push(LatinSquare::from_compact(n, &line)?);
    }
    FixedSet::new(theta, squares)
}

/// `LS_Θ`, read from the cache when present and stored there after a
/// fresh enumeration.
pub fn enumerate_cached(theta: &Isotopism, limits: SearchLimits, cache: Option<&Cache>) -> Result<FixedSet> {
    if let Some(c) = cache {
        if let Some(set) = c.load(theta)? {
            return Ok(set);
        }
    }
    let set = enumerate_fixed(theta, limits)?;
    if let Some(c) = cache {
        c.store(&set)?;
    }
    Ok(set)
}
