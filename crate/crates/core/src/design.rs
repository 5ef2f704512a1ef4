//! The incidence structures `S_l` and `S_{l,[L]}`: points are squares, blocks
//! are isotopisms of structure `l`, and a square lies on a block when the
//! isotopism fixes it. This module computes their parameters `(v, b, k, r)`,
//! block multiplicity and the catalog of structures with `Δ(l) > 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autotopism::{autotopism_group, group_order};
use crate::classify::{bind_labels, partition_classes, IsotopyClass, LabelCatalog};
use crate::error::{Error, Result};
use crate::fixed::{enumerate_fixed, has_fixed_square, FixedSet, SearchLimits};
use crate::latin::{star_isotopism, Isotopism, IsotopismCycleStructure, LatinSquare};
use crate::perm::{count_with_structure, CycleStructure};

/// `n!`.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `|I_n| = n!³`.
pub fn isotopism_count(n: usize) -> Result<u64> {
    let f = factorial(n);
    f.checked_mul(f)
        .and_then(|x| x.checked_mul(f))
        .ok_or(Error::Overflow("n!^3"))
}

/// `b = |A_l|`, the number of isotopisms with structure `l`.
pub fn b_of(l: &IsotopismCycleStructure) -> Result<u64> {
    let [a, b, c] = l.components().map(count_with_structure);
    a.checked_mul(b)
        .and_then(|x| x.checked_mul(c))
        .ok_or(Error::Overflow("b"))
}

/// `v = |[L]| = n!³ / |A_L|`.
pub fn v_of_class(l: &LatinSquare) -> Result<u64> {
    Ok(isotopism_count(l.order())? / group_order(l)?)
}

/// `r = b·k / v`, which must be an integer.
pub fn r_of(v: u64, b: u64, k: u64) -> Result<u64> {
    let bk = (b as u128) * (k as u128);
    let v128 = v as u128;
    if v == 0 || !bk.is_multiple_of(v128) {
        return Err(Error::NonIntegralReplication {
            bk: u64::try_from(bk).unwrap_or(u64::MAX),
            v,
        });
    }
    u64::try_from(bk / v128).map_err(|_| Error::Overflow("r"))
}

/// Classes of `LS_l` with their block sizes `k = Δ_[L](l)`, labelled from
/// the shipped catalog. The sizes sum to `Δ(l)`.
pub fn k_of(l: &IsotopismCycleStructure, limits: SearchLimits) -> Result<(FixedSet, Vec<IsotopyClass>)> {
    let set = enumerate_fixed(&l.canonical_isotopism(), limits)?;
    let catalog = LabelCatalog::for_order(l.degree())?;
    let classes = bind_labels(partition_classes(&set)?, &catalog);
    Ok((set, classes))
}

/// Multiplicity of the class block `block` (all of `[L]_Θ` for `theta`)
/// inside `S_{l,[L]}`: the blocks `[L]_Θ1` for `Θ1 ∈ a_l` are obtained by
/// moving `block` along `Θ * Θ1`, grouped by equality, and the common group
/// size is returned.
pub fn block_multiplicity(theta: &Isotopism, block: &[LatinSquare], a_l: &[Isotopism]) -> Result<u64> {
    let images: Vec<Vec<LatinSquare>> = a_l
        .par_iter()
        .map(|t1| {
            let star = star_isotopism(theta, t1)?;
            let mut img: Vec<LatinSquare> = block.iter().map(|l| l.apply_unchecked(&star)).collect();
            img.sort_unstable();
            Ok(img)
        })
        .collect::<Result<_>>()?;
    let mut groups: BTreeMap<&[LatinSquare], usize> = BTreeMap::new();
    for img in &images {
        *groups.entry(img.as_slice()).or_default() += 1;
    }
    let sizes: Vec<usize> = groups.values().copied().collect();
    if sizes.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::UnequalMultiplicity { sizes });
    }
    Ok(sizes.first().copied().unwrap_or(0) as u64)
}

/// Multiplicity of the blocks of `S_{l,[L]}`.
pub fn multiplicity(l: &LatinSquare, s: &IsotopismCycleStructure, limits: SearchLimits) -> Result<u64> {
    let a_l = autotopism_group(l)?.filter_by_structure(s);
    let Some(theta) = a_l.first().cloned() else {
        return Ok(0);
    };
    let set = enumerate_fixed(&theta, limits)?;
    let target = crate::invariants::invariant_vector(l, false)?;
    let mut block = Vec::new();
    for m in set.squares() {
        if crate::invariants::invariant_vector(m, false)? == target
            && crate::autotopism::find_isotopism(l, m)?.is_some()
        {
            block.push(m.clone());
        }
    }
    block_multiplicity(&theta, &block, &a_l)
}

/// Outcome of a regularity check on one class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    /// The common value of `|A_l(L)|`.
    pub r: u64,
    pub checked: usize,
}

/// Checks that `|A_l(L)|` is the same for `sample` members spread evenly over
/// `members` (all of them when `sample` is at least their number).
pub fn regularity_check(
    l: &IsotopismCycleStructure,
    members: &[LatinSquare],
    sample: usize,
) -> Result<Regularity> {
    if members.is_empty() || sample == 0 {
        return Err(Error::Invalid("nothing to check".into()));
    }
    let take = sample.min(members.len());
    let picks: Vec<&LatinSquare> = (0..take).map(|i| &members[i * members.len() / take]).collect();
    let rs: Vec<u64> = picks
        .par_iter()
        .map(|m| Ok(autotopism_group(m)?.filter_by_structure(l).len() as u64))
        .collect::<Result<_>>()?;
    if rs.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Irregular(format!("{l}: {rs:?}")));
    }
    Ok(Regularity { r: rs[0], checked: rs.len() })
}

/// Whether a report row was computed or skipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Heavy,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Heavy => "heavy",
        })
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(Status::Ok),
            "heavy" => Ok(Status::Heavy),
            _ => Err(Error::Parse(format!("unknown status {s:?}"))),
        }
    }
}

/// Parameters of one `S_{l,[L]}`. Fields are `None` on heavy rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub n: usize,
    pub l: IsotopismCycleStructure,
    pub class_label: String,
    pub v: Option<u64>,
    pub b: u64,
    pub k: Option<u64>,
    pub r: Option<u64>,
    pub mult: Option<u64>,
    pub is_design: Option<bool>,
    pub status: Status,
}

impl StructureReport {
    /// `b·k = v·r` and `is_design ⟺ mult = 1`, where the fields are present.
    pub fn check(&self) -> Result<()> {
        if let (Some(v), Some(k), Some(r)) = (self.v, self.k, self.r) {
            if (self.b as u128) * (k as u128) != (v as u128) * (r as u128) {
                return Err(Error::Invalid(format!(
                    "b*k != v*r for {} {}",
                    self.l, self.class_label
                )));
            }
        }
        if let (Some(m), Some(d)) = (self.mult, self.is_design) {
            if d != (m == 1) {
                return Err(Error::Invalid("is_design disagrees with mult".into()));
            }
        }
        Ok(())
    }

    /// A skipped row: only `b` is known.
    pub fn heavy(l: &IsotopismCycleStructure, b: u64) -> Self {
        StructureReport {
            n: l.degree(),
            l: l.clone(),
            class_label: String::new(),
            v: None,
            b,
            k: None,
            r: None,
            mult: None,
            is_design: None,
            status: Status::Heavy,
        }
    }
}

/// Tuning knobs for report generation.
#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub limits: SearchLimits,
    /// Upper bound on `r·k` for the multiplicity computation; above it the
    /// row is reported heavy.
    pub mult_budget: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            limits: SearchLimits::with_budget(DEFAULT_BUDGET),
            mult_budget: DEFAULT_BUDGET / 10,
        }
    }
}

/// Default step budget for a single structure.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// One report per class of `LS_l`, or a single heavy row when the
/// enumeration exceeds its budget.
pub fn structure_report(l: &IsotopismCycleStructure, opts: &ReportOptions) -> Result<Vec<StructureReport>> {
    match enumerate_fixed(&l.canonical_isotopism(), opts.limits) {
        Ok(set) => structure_report_from_set(l, &set, opts),
        Err(Error::BudgetExceeded { .. }) => Ok(vec![StructureReport::heavy(l, b_of(l)?)]),
        Err(e) => Err(e),
    }
}

/// Reports for `l` from an already enumerated `LS_Θ`, `Θ` of structure `l`.
pub fn structure_report_from_set(
    l: &IsotopismCycleStructure,
    set: &FixedSet,
    opts: &ReportOptions,
) -> Result<Vec<StructureReport>> {
    let theta = set.theta();
    if theta.cycle_structure() != *l {
        return Err(Error::StructureMismatch {
            left: theta.cycle_structure().to_string(),
            right: l.to_string(),
        });
    }
    let n = l.degree();
    let b = b_of(l)?;
    let catalog = LabelCatalog::for_order(n)?;
    let classes = bind_labels(partition_classes(set)?, &catalog);
    let total = isotopism_count(n)?;
    let mut out = Vec::with_capacity(classes.len());
    for class in &classes {
        let g = class.invariants.group_order.expect("classes carry group orders");
        let v = total / g;
        let k = class.members_count() as u64;
        let r = r_of(v, b, k)?;
        let mut report = StructureReport {
            n,
            l: l.clone(),
            class_label: class.label.clone().unwrap_or_else(|| "?".into()),
            v: Some(v),
            b,
            k: Some(k),
            r: Some(r),
            mult: None,
            is_design: None,
            status: Status::Ok,
        };
        if r.saturating_mul(k) <= opts.mult_budget {
            let a_l = autotopism_group(&class.representative)?.filter_by_structure(l);
            if a_l.len() as u64 != r {
                return Err(Error::Irregular(format!(
                    "{l} {}: |A_l(L)| = {} but b*k/v = {r}",
                    report.class_label,
                    a_l.len()
                )));
            }
            // the representative lies in LS_Θ, so Θ itself is in a_l
            let block: Vec<LatinSquare> = class.members.iter().map(|&i| set.squares()[i].clone()).collect();
            let mult = block_multiplicity(theta, &block, &a_l)?;
            report.mult = Some(mult);
            report.is_design = Some(mult == 1);
        } else {
            report.status = Status::Heavy;
        }
        report.check()?;
        out.push(report);
    }
    Ok(out)
}

/// An entry of `CS_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CatalogEntry {
    pub structure: IsotopismCycleStructure,
    pub trivial: bool,
}

/// Structures `l` with `Δ(l) > 0`. With `all_orderings` every ordered triple
/// is listed; otherwise one listing representative per reordering class
/// (`Δ` does not change when the components are permuted).
pub fn cycle_structure_catalog(n: usize, limits: SearchLimits, all_orderings: bool) -> Result<Vec<CatalogEntry>> {
    let parts = CycleStructure::all(n);
    let mut reps = Vec::new();
    for a in &parts {
        for b in &parts {
            for c in &parts {
                let l = IsotopismCycleStructure::new(a.clone(), b.clone(), c.clone())?;
                if l.listing_representative() == l {
                    reps.push(l);
                }
            }
        }
    }
    let alive: Vec<bool> = reps
        .par_iter()
        .map(|l| has_fixed_square(&l.canonical_isotopism(), limits))
        .collect::<Result<_>>()?;
    let mut out: Vec<CatalogEntry> = reps
        .into_iter()
        .zip(alive)
        .filter(|(_, ok)| *ok)
        .flat_map(|(l, _)| if all_orderings { l.reorderings() } else { vec![l] })
        .map(|structure| CatalogEntry {
            trivial: structure.is_trivial(),
            structure,
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::{c41, c42, c51};

    fn s(text: &str) -> IsotopismCycleStructure {
        text.parse().unwrap()
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_of(&s("0,0,1|0,0,1|0,0,1")).unwrap(), 8);
        assert_eq!(b_of(&s("0,0,0,1|0,0,0,1|2,1,0,0")).unwrap(), 216);
        assert_eq!(b_of(&s("0,0,0,0,0,0,1|0,0,0,0,0,0,1|7,0,0,0,0,0,0")).unwrap(), 518400);
    }

    #[test]
    fn v_examples() {
        assert_eq!(v_of_class(&c41()).unwrap(), 432);
        assert_eq!(v_of_class(&LatinSquare::cyclic(1)).unwrap(), 1);
    }

    #[test]
    fn r_examples() {
        assert_eq!(r_of(432, 108, 8).unwrap(), 2);
        assert_eq!(r_of(3110400, 2985984, 25).unwrap(), 24);
        assert_eq!(r_of(7, 5, 7).unwrap(), 5);
        assert!(matches!(r_of(432, 108, 7), Err(Error::NonIntegralReplication { .. })));
    }

    #[test]
    fn multiplicity_examples() {
        let lim = SearchLimits::UNLIMITED;
        assert_eq!(multiplicity(&LatinSquare::cyclic(3), &s("0,0,1|0,0,1|0,0,1"), lim).unwrap(), 2);
        assert_eq!(multiplicity(&c42(), &s("1,0,1,0|1,0,1,0|1,0,1,0"), lim).unwrap(), 2);
        assert_eq!(multiplicity(&c42(), &s("0,2,0,0|0,2,0,0|0,2,0,0"), lim).unwrap(), 1);
    }

    #[test]
    fn regularity_examples() {
        let l = s("0,0,0,1|0,0,0,1|2,1,0,0");
        let (set, classes) = k_of(&l, SearchLimits::UNLIMITED).unwrap();
        let c = classes.iter().find(|c| c.label.as_deref() == Some("c_{4,2}")).unwrap();
        let members: Vec<_> = c.members.iter().map(|&i| set.squares()[i].clone()).collect();
        assert_eq!(regularity_check(&l, &members, 100).unwrap().r, 12);

        let l = s("1,1,0|1,1,0|1,1,0");
        let all = enumerate_fixed(&Isotopism::identity(3), SearchLimits::UNLIMITED).unwrap();
        let reg = regularity_check(&l, all.squares(), 12).unwrap();
        assert_eq!((reg.r, reg.checked), (9, 12));

        let id = IsotopismCycleStructure::identity(5);
        assert_eq!(regularity_check(&id, &[c51()], 1).unwrap().r, 1);
    }

    #[test]
    fn report_examples() {
        let opts = ReportOptions::default();
        let rows = structure_report(&s("0,0,0,1|0,0,0,1|0,2,0,0"), &opts).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(
            (r.class_label.as_str(), r.v, r.b, r.k, r.r, r.mult),
            ("c_{4,1}", Some(432), 108, Some(8), Some(2), Some(2))
        );
        let rows = structure_report(&s("0,1|0,1|2,0"), &opts).unwrap();
        assert_eq!(
            (rows[0].v, rows[0].b, rows[0].k, rows[0].r, rows[0].mult, rows[0].is_design),
            (Some(2), 1, Some(2), Some(1), Some(1), Some(true))
        );
    }

    #[test]
    fn catalog_small_orders() {
        let lim = SearchLimits::UNLIMITED;
        let c1 = cycle_structure_catalog(1, lim, false).unwrap();
        assert_eq!(c1.len(), 1);
        assert!(c1[0].trivial);
        let c2: Vec<_> = cycle_structure_catalog(2, lim, false)
            .unwrap()
            .into_iter()
            .filter(|e| !e.trivial)
            .map(|e| e.structure.to_compact())
            .collect();
        assert_eq!(c2, vec!["0,1|0,1|2,0"]);
        let c3 = cycle_structure_catalog(3, lim, true).unwrap();
        assert!(!c3.iter().any(|e| e.structure == s("1,1,0|1,1,0|3,0,0")));
    }
}
