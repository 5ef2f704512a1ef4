//! Shipped transcriptions of the published parameter and invariant tables,
//! and the harness that recomputes them.
//!
//! Parameter tables list, per structure and class, `v, b, k, r, mult`. Cells
//! that span several rows are expanded into every row they cover; cells left
//! blank stay empty and are not compared. A row may name several classes
//! (`c_{6,19};c_{6,20};c_{6,21}`) when they share every value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Deserialize;

use crate::classify::{are_isotopic, IsotopyClass, LabelCatalog};
use crate::design::{cycle_structure_catalog, structure_report_from_set, ReportOptions, StructureReport};
use crate::error::{Error, Result};
use crate::fixed::SearchLimits;
use crate::invariants::InvariantVector;
use crate::io::{enumerate_cached, Cache};
use crate::latin::IsotopismCycleStructure;

const TABLE1: &str = include_str!("../data/table1.csv");
const TABLE2: &str = include_str!("../data/table2.csv");
const TABLE3: &str = include_str!("../data/table3.csv");
const TABLE4: &str = include_str!("../data/table4.csv");
const TABLE5: &str = include_str!("../data/table5.csv");
const TABLE6: &str = include_str!("../data/table6.csv");

/// One transcribed row of a parameter table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub structure: IsotopismCycleStructure,
    pub classes: Vec<String>,
    pub v: Option<u64>,
    pub b: Option<u64>,
    pub k: Option<u64>,
    pub r: Option<u64>,
    pub mult: Option<u64>,
}

impl TableRow {
    pub fn field(&self, name: &str) -> Option<u64> {
        match name {
            "v" => self.v,
            "b" => self.b,
            "k" => self.k,
            "r" => self.r,
            "mult" => self.mult,
            _ => None,
        }
    }

    /// `b·k = v·r` on the printed values, when all four are present.
    pub fn self_consistent(&self) -> Option<bool> {
        Some(self.b? as u128 * self.k? as u128 == self.v? as u128 * self.r? as u128)
    }

    /// The value of `field` that restores `b·k = v·r` given the other three.
    fn restoring_value(&self, field: &str) -> Option<u64> {
        let (v, b, k, r) = (self.v? as u128, self.b? as u128, self.k? as u128, self.r? as u128);
        let (num, den) = match field {
            "v" => (b * k, r),
            "b" => (v * r, k),
            "k" => (v * r, b),
            "r" => (b * k, v),
            _ => return None,
        };
        (den != 0 && num % den == 0).then(|| (num / den) as u64)
    }

    /// The printed `r` is larger than the group order `(n!)^3 / v` of the
    /// printed class, so no square of that class can realise it.
    pub fn r_exceeds_group(&self) -> bool {
        let (Some(v), Some(r)) = (self.v, self.r) else {
            return false;
        };
        let f: u128 = (1..=self.n as u128).product();
        let cube = f * f * f;
        v != 0 && cube.is_multiple_of(v as u128) && r as u128 > cube / v as u128
    }

    pub fn class_list(&self) -> String {
        self.classes.join(";")
    }
}

#[derive(Deserialize)]
struct RawRow {
    n: usize,
    structure: String,
    class: String,
    v: Option<u64>,
    b: Option<u64>,
    k: Option<u64>,
    r: Option<u64>,
    mult: Option<u64>,
}

fn parse_rows(text: &str) -> Result<Vec<TableRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.deserialize::<RawRow>()
        .map(|row| {
            let row = row?;
            let structure: IsotopismCycleStructure = row.structure.parse()?;
            if structure.degree() != row.n {
                return Err(Error::DegreeMismatch {
                    left: row.n,
                    right: structure.degree(),
                });
            }
            Ok(TableRow {
                n: row.n,
                structure,
                classes: row.class.split(';').map(str::to_string).collect(),
                v: row.v,
                b: row.b,
                k: row.k,
                r: row.r,
                mult: row.mult,
            })
        })
        .collect()
}

/// Rows in the shipped parameter-table layout: columns
/// `n,structure,class,v,b,k,r,mult`, classes separated by `;`, blank cells empty.
pub fn read_parameter_rows(mut input: impl std::io::Read) -> Result<Vec<TableRow>> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    parse_rows(&text)
}

/// Rows of parameter table `id` (1, 2, 4 or 6).
pub fn parameter_table(id: u8) -> Result<Vec<TableRow>> {
    match id {
        1 => parse_rows(TABLE1),
        2 => parse_rows(TABLE2),
        4 => parse_rows(TABLE4),
        6 => parse_rows(TABLE6),
        _ => Err(Error::Invalid(format!("table {id} is not a parameter table"))),
    }
}

/// Entries of invariant table `id` (3 or 5).
pub fn invariant_table(id: u8) -> Result<LabelCatalog> {
    match id {
        3 => LabelCatalog::from_csv(TABLE3.as_bytes()),
        5 => LabelCatalog::from_csv(TABLE5.as_bytes()),
        _ => Err(Error::Invalid(format!("table {id} is not an invariant table"))),
    }
}

/// A compared cell whose computed value differs from the transcription.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDiff {
    pub structure: IsotopismCycleStructure,
    pub classes: String,
    pub field: &'static str,
    pub printed: u64,
    pub computed: u64,
    /// The printed row breaks `b·k = v·r`, this is its only differing cell,
    /// and the computed value is the one that restores the identity.
    pub erratum: bool,
    /// The printed `r` exceeds `|A_L| = (n!)^3 / v` taken from the same row,
    /// which no class can satisfy.
    pub infeasible: bool,
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: printed {}, computed {}{}",
            self.structure.to_compact(),
            self.classes,
            self.field,
            self.printed,
            self.computed,
            if self.erratum {
                " (printed row violates b*k = v*r; computed value restores it)"
            } else if self.infeasible {
                " (printed r exceeds the autotopism group order implied by v)"
            } else {
                ""
            }
        )
    }
}

/// Outcome of recomputing one table.
#[derive(Clone, Debug, Default)]
pub struct Verification {
    pub table: u8,
    pub rows: usize,
    pub cells_matched: usize,
    pub diffs: Vec<CellDiff>,
    /// Structures not computed, with the reason.
    pub skipped: Vec<(IsotopismCycleStructure, String)>,
    /// Table rows with no computed class carrying one of their labels.
    pub missing: Vec<String>,
    /// Computed classes that no table row accounts for.
    pub unexpected: Vec<String>,
    /// Like `unexpected`, for tables that list only some classes.
    pub unlisted: Vec<String>,
    /// Free-form problems (catalog or invariant disagreements).
    pub problems: Vec<String>,
    /// Computed reports, in table order.
    pub reports: Vec<StructureReport>,
}

impl Verification {
    pub fn mismatches(&self) -> impl Iterator<Item = &CellDiff> {
        self.diffs.iter().filter(|d| !d.erratum && !d.infeasible)
    }

    pub fn errata(&self) -> impl Iterator<Item = &CellDiff> {
        self.diffs.iter().filter(|d| d.erratum)
    }

    pub fn infeasible(&self) -> impl Iterator<Item = &CellDiff> {
        self.diffs.iter().filter(|d| d.infeasible)
    }

    /// No mismatch beyond explained errata, nothing missing or unexpected.
    pub fn passed(&self) -> bool {
        self.mismatches().next().is_none()
            && self.missing.is_empty()
            && self.unexpected.is_empty()
            && self.problems.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} rows, {} cells matched, {} mismatches, {} errata, {} infeasible, {} skipped structures, {} missing, {} unexpected, {} unlisted, {} problems",
            if self.table == 0 { "supplied table".to_string() } else { format!("table {}", self.table) },
            self.rows,
            self.cells_matched,
            self.mismatches().count(),
            self.errata().count(),
            self.infeasible().count(),
            self.skipped.len(),
            self.missing.len(),
            self.unexpected.len(),
            self.unlisted.len(),
            self.problems.len()
        )
    }
}

fn label_parts(label: &str) -> BTreeSet<&str> {
    label.split('|').collect()
}

const FIELDS: [&str; 5] = ["v", "b", "k", "r", "mult"];

fn report_field(r: &StructureReport, name: &str) -> Option<u64> {
    match name {
        "v" => r.v,
        "b" => Some(r.b),
        "k" => r.k,
        "r" => r.r,
        "mult" => r.mult,
        _ => None,
    }
}

/// Compares the rows of one structure against its computed reports.
fn compare_structure(rows: &[&TableRow], reports: &[StructureReport], partial: bool, out: &mut Verification) {
    let mut used = vec![false; reports.len()];
    for row in rows {
        let matched: Vec<usize> = reports
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                let parts = label_parts(&r.class_label);
                row.classes.iter().any(|c| parts.contains(c.as_str()))
            })
            .map(|(i, _)| i)
            .collect();
        if matched.is_empty() && row.r_exceeds_group() {
            // no class of this order has an autotopism of the structure
            for (field, printed) in [("k", row.k), ("r", row.r)] {
                if let Some(printed) = printed {
                    out.diffs.push(CellDiff {
                        structure: row.structure.clone(),
                        classes: row.class_list(),
                        field,
                        printed,
                        computed: 0,
                        erratum: false,
                        infeasible: true,
                    });
                }
            }
            continue;
        }
        if matched.is_empty() {
            out.missing.push(format!("{} [{}]", row.structure.to_compact(), row.class_list()));
            continue;
        }
        // the rows of a multi-class entry each receive every printed value
        let mut row_diffs: Vec<CellDiff> = Vec::new();
        for &i in &matched {
            used[i] = true;
            for field in FIELDS {
                let (Some(printed), Some(computed)) = (row.field(field), report_field(&reports[i], field)) else {
                    continue;
                };
                if printed == computed {
                    out.cells_matched += 1;
                } else {
                    row_diffs.push(CellDiff {
                        structure: row.structure.clone(),
                        classes: row.class_list(),
                        field,
                        printed,
                        computed,
                        erratum: false,
                        infeasible: row.r_exceeds_group(),
                    });
                }
            }
        }
        let fields: BTreeSet<&str> = row_diffs.iter().map(|d| d.field).collect();
        if fields.len() == 1 && row.self_consistent() == Some(false) {
            let field = *fields.iter().next().unwrap();
            let fix = row.restoring_value(field);
            if row_diffs.iter().all(|d| Some(d.computed) == fix) {
                row_diffs.iter_mut().for_each(|d| d.erratum = true);
            }
        }
        out.diffs.extend(row_diffs);
    }
    for (i, r) in reports.iter().enumerate() {
        if !used[i] {
            let line = format!("{} [{}] k={:?}", r.l.to_compact(), r.class_label, r.k);
            if partial {
                out.unlisted.push(line);
            } else {
                out.unexpected.push(line);
            }
        }
    }
}

/// Options for [`verify_table`].
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub report: ReportOptions,
    pub cache: Option<Cache>,
    /// Only recompute the structures accepted by this filter; rows of other
    /// structures are listed as skipped.
    pub only: Option<Vec<IsotopismCycleStructure>>,
}

/// Recomputes parameter table 1, 2, 4 or 6, or invariant table 3 or 5.
pub fn verify_table(id: u8, opts: &VerifyOptions) -> Result<Verification> {
    match id {
        1 | 2 | 4 | 6 => verify_parameters(id, opts),
        3 => verify_invariants(3, 4, opts),
        5 => verify_invariants(5, 6, opts),
        _ => Err(Error::Invalid(format!("no table {id}"))),
    }
}

fn grouped(rows: &[TableRow]) -> Vec<(IsotopismCycleStructure, Vec<&TableRow>)> {
    let mut order: Vec<IsotopismCycleStructure> = Vec::new();
    let mut map: BTreeMap<IsotopismCycleStructure, Vec<&TableRow>> = BTreeMap::new();
    for row in rows {
        if !map.contains_key(&row.structure) {
            order.push(row.structure.clone());
        }
        map.entry(row.structure.clone()).or_default().push(row);
    }
    order
        .into_iter()
        .map(|s| {
            let rows = map.remove(&s).unwrap();
            (s, rows)
        })
        .collect()
}

fn wanted(opts: &VerifyOptions, l: &IsotopismCycleStructure) -> bool {
    opts.only.as_ref().is_none_or(|only| only.contains(l))
}

/// Reports for one structure through the cache, or `None` when over budget.
fn reports_for(l: &IsotopismCycleStructure, opts: &VerifyOptions) -> Result<Option<Vec<StructureReport>>> {
    match enumerate_cached(&l.canonical_isotopism(), opts.report.limits, opts.cache.as_ref()) {
        Ok(set) => Ok(Some(structure_report_from_set(l, &set, &opts.report)?)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn verify_parameters(id: u8, opts: &VerifyOptions) -> Result<Verification> {
    verify_rows(id, parameter_table(id)?, opts)
}

/// Compares caller-supplied rows (see [`read_parameter_rows`]) with computed
/// reports. Computed classes the rows do not mention are only listed as
/// unlisted.
pub fn verify_parameter_rows(rows: Vec<TableRow>, opts: &VerifyOptions) -> Result<Verification> {
    verify_rows(0, rows, opts)
}

fn verify_rows(id: u8, rows: Vec<TableRow>, opts: &VerifyOptions) -> Result<Verification> {
    let mut out = Verification {
        table: id,
        rows: rows.len(),
        ..Default::default()
    };
    for (l, group) in grouped(&rows) {
        if !wanted(opts, &l) {
            out.skipped.push((l, "not selected".into()));
            continue;
        }
        match reports_for(&l, opts)? {
            None => out.skipped.push((l, "over budget".into())),
            Some(reports) => {
                for r in &reports {
                    if r.status != crate::design::Status::Ok {
                        out.problems.push(format!("{} [{}] only partly computed", l.to_compact(), r.class_label));
                    }
                }
                compare_structure(&group, &reports, matches!(id, 0 | 6), &mut out);
                out.reports.extend(reports);
            }
        }
    }
    // the printed structures of the complete tables must be all of CS_n
    if matches!(id, 1 | 2 | 4) && opts.only.is_none() {
        let orders: BTreeSet<usize> = rows.iter().map(|r| r.n).collect();
        let printed: BTreeSet<IsotopismCycleStructure> = rows.iter().map(|r| r.structure.clone()).collect();
        for n in orders {
            for e in cycle_structure_catalog(n, opts.report.limits, false)? {
                if !e.trivial && !printed.contains(&e.structure) {
                    out.problems.push(format!("structure {} has fixed squares but is not listed", e.structure.to_compact()));
                }
            }
        }
    }
    Ok(out)
}

/// Every class met while enumerating the structures of parameter table
/// `source` must carry a tuple of invariant table `id`, and the number of
/// distinct classes met with a given tuple must not exceed the number of
/// entries printed with it.
fn verify_invariants(id: u8, source: u8, opts: &VerifyOptions) -> Result<Verification> {
    let catalog = invariant_table(id)?;
    let rows = parameter_table(source)?;
    let mut out = Verification {
        table: id,
        rows: catalog.entries().len(),
        ..Default::default()
    };
    let catalog_labels: BTreeSet<&str> = catalog.entries().iter().map(|(l, _)| l.as_str()).collect();
    for row in &rows {
        for c in &row.classes {
            if !catalog_labels.contains(c.as_str()) {
                out.problems.push(format!("class {c} of table {source} has no entry in table {id}"));
            }
        }
    }
    let mut reached: BTreeMap<InvariantVector, Vec<IsotopyClass>> = BTreeMap::new();
    for (l, _) in grouped(&rows) {
        if !wanted(opts, &l) {
            out.skipped.push((l, "not selected".into()));
            continue;
        }
        let set = match enumerate_cached(&l.canonical_isotopism(), opts.report.limits, opts.cache.as_ref()) {
            Ok(set) => set,
            Err(Error::BudgetExceeded { .. }) => {
                out.skipped.push((l, "over budget".into()));
                continue;
            }
            Err(e) => return Err(e),
        };
        for class in crate::classify::partition_classes(&set)? {
            let known = reached.entry(class.invariants).or_default();
            let mut fresh = true;
            for k in known.iter() {
                if are_isotopic(&k.representative, &class.representative)? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                known.push(class);
            }
        }
    }
    for (tuple, classes) in &reached {
        let printed = catalog.lookup(tuple).len();
        if printed == 0 {
            let line = format!("computed tuple {tuple} is not in table {id}");
            if id == 5 {
                out.unlisted.push(line);
            } else {
                out.missing.push(line);
            }
        } else if classes.len() > printed {
            out.problems.push(format!(
                "{} distinct classes share {tuple}, table {id} lists {printed}",
                classes.len()
            ));
        } else {
            out.cells_matched += classes.len();
        }
    }
    Ok(out)
}

/// Number of distinct table entries (labels) reached, for coverage reports.
pub fn reached_labels(v: &Verification) -> BTreeSet<String> {
    v.reports
        .iter()
        .flat_map(|r| r.class_label.split('|').map(str::to_string).collect::<Vec<_>>())
        .collect()
}

/// Default limits for verification runs.
pub fn default_limits() -> SearchLimits {
    ReportOptions::default().limits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcriptions_load() {
        assert_eq!(parameter_table(1).unwrap().len(), 4);
        assert_eq!(parameter_table(2).unwrap().len(), 16);
        assert_eq!(parameter_table(4).unwrap().len(), 55);
        assert_eq!(parameter_table(6).unwrap().len(), 39);
        assert_eq!(invariant_table(3).unwrap().entries().len(), 22);
        assert_eq!(invariant_table(5).unwrap().entries().len(), 43);
        assert!(parameter_table(3).is_err());
    }

    #[test]
    fn only_one_printed_row_breaks_the_identity() {
        let mut bad = Vec::new();
        for id in [1, 2, 4, 6] {
            for row in parameter_table(id).unwrap() {
                if row.self_consistent() == Some(false) {
                    bad.push((id, row.structure.to_compact(), row.class_list()));
                }
            }
        }
        assert_eq!(
            bad,
            vec![(
                4,
                "3,0,1,0,0,0|3,0,1,0,0,0|3,0,1,0,0,0".to_string(),
                "c_{6,3};c_{6,4};c_{6,5}".to_string()
            )]
        );
    }

    #[test]
    fn infeasible_rows() {
        let mut bad = Vec::new();
        for id in [1, 2, 4, 6] {
            for row in parameter_table(id).unwrap() {
                if row.r_exceeds_group() {
                    bad.push((id, row.class_list()));
                }
            }
        }
        assert_eq!(
            bad,
            vec![
                (6, "c_{7,145};c_{7,146};c_{7,147}".to_string()),
                (6, "c_{7,10};c_{7,11}".to_string())
            ]
        );
    }

    #[test]
    fn restoring_value() {
        let rows = parameter_table(4).unwrap();
        let row = rows.iter().find(|r| r.self_consistent() == Some(false)).unwrap();
        assert_eq!(row.restoring_value("k"), Some(648));
    }

    #[test]
    fn verify_table1() {
        let v = verify_table(1, &VerifyOptions::default()).unwrap();
        assert!(v.passed(), "{}", v.summary());
        assert_eq!(v.cells_matched, 20);
    }
}
