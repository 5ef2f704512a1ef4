//! Isotopy testing, splitting a fixed set into isotopism classes, and naming
//! classes by their invariant tuples.
//!
//! Isotopisms that commute with `Θ` map `LS_Θ` onto itself, so a fixed set is
//! first cut into orbits of `C(α) × C(β) × C(γ)`. Only one square per orbit
//! then goes through the invariant bucketing and the isotopism search.

use std::collections::{BTreeMap, VecDeque};
use std::io::Read;

use rayon::prelude::*;
use serde::Deserialize;

use crate::autotopism::{find_isotopism, group_order};
use crate::error::Result;
use crate::fixed::FixedSet;
use crate::invariants::{invariant_vector, InvariantVector};
use crate::latin::{Isotopism, LatinSquare};
use crate::perm::Permutation;

/// One isotopism class met inside a set of squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotopyClass {
    /// Least member in the square ordering.
    pub representative: LatinSquare,
    /// Indices of the members in the partitioned collection, ascending.
    pub members: Vec<usize>,
    /// Invariants of the class, group order included.
    pub invariants: InvariantVector,
    pub label: Option<String>,
}

impl IsotopyClass {
    pub fn members_count(&self) -> usize {
        self.members.len()
    }

    pub fn label_or_unknown(&self) -> &str {
        self.label.as_deref().unwrap_or("?")
    }
}

/// Whether some isotopism maps `a` onto `b`.
pub fn are_isotopic(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    if a.order() != b.order() {
        return Ok(false);
    }
    if invariant_vector(a, false)? != invariant_vector(b, false)? {
        return Ok(false);
    }
    Ok(find_isotopism(a, b)?.is_some())
}

/// Generators of `C(α) × C(β) × C(γ)` as isotopisms.
fn centralizer_isotopisms(theta: &Isotopism) -> Vec<Isotopism> {
    let n = theta.degree();
    let id = Permutation::identity(n);
    let mut out = Vec::new();
    for g in theta.alpha.centralizer_generators() {
        out.push(Isotopism {
            alpha: g,
            beta: id.clone(),
            gamma: id.clone(),
        });
    }
    for g in theta.beta.centralizer_generators() {
        out.push(Isotopism {
            alpha: id.clone(),
            beta: g,
            gamma: id.clone(),
        });
    }
    for g in theta.gamma.centralizer_generators() {
        out.push(Isotopism {
            alpha: id.clone(),
            beta: id.clone(),
            gamma: g,
        });
    }
    out.retain(|t| !t.is_identity());
    out
}

/// Orbits of the centralizer of `Θ` on `LS_Θ`, as sorted index lists.
pub fn centralizer_orbits(set: &FixedSet) -> Vec<Vec<usize>> {
    let gens = centralizer_isotopisms(set.theta());
    let squares = set.squares();
    let mut seen = vec![false; squares.len()];
    let mut orbits = Vec::new();
    for start in 0..squares.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let img = squares[i].apply_unchecked(g);
                let j = set
                    .index_of(&img)
                    .expect("centralizer preserves the fixed set");
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                    queue.push_back(j);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Merges pre-grouped squares (each group known to lie in one class) into
/// isotopism classes.
fn merge_groups(squares: &[LatinSquare], groups: Vec<Vec<usize>>) -> Result<Vec<IsotopyClass>> {
    let keyed: Vec<([u64; 5], Vec<usize>)> = groups
        .into_par_iter()
        .map(|g| Ok((invariant_vector(&squares[g[0]], false)?.counts(), g)))
        .collect::<Result<_>>()?;
    let mut buckets: BTreeMap<[u64; 5], Vec<Vec<usize>>> = BTreeMap::new();
    for (key, g) in keyed {
        buckets.entry(key).or_default().push(g);
    }
    let merged: Vec<Vec<Vec<usize>>> = buckets
        .into_par_iter()
        .map(|(_, groups)| {
            let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
            for g in groups {
                let rep = &squares[g[0]];
                let mut home = None;
                for (k, (class_rep, _)) in classes.iter().enumerate() {
                    if find_isotopism(&squares[*class_rep], rep)?.is_some() {
                        home = Some(k);
                        break;
                    }
                }
                match home {
                    Some(k) => classes[k].1.extend(g),
                    None => classes.push((g[0], g)),
                }
            }
            Ok(classes.into_iter().map(|(_, m)| m).collect())
        })
        .collect::<Result<_>>()?;
    let mut classes: Vec<IsotopyClass> = merged
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|mut members| {
            members.sort_unstable();
            let representative = members
                .iter()
                .map(|&i| &squares[i])
                .min()
                .expect("non-empty class")
                .clone();
            let invariants = invariant_vector(&representative, true)?;
            Ok(IsotopyClass {
                representative,
                members,
                invariants,
                label: None,
            })
        })
        .collect::<Result<_>>()?;
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(classes)
}

/// Splits `LS_Θ` into the classes `[L]_Θ`; member indices refer to
/// `set.squares()`.
pub fn partition_classes(set: &FixedSet) -> Result<Vec<IsotopyClass>> {
    if set.is_empty() {
        return Ok(Vec::new());
    }
    merge_groups(set.squares(), centralizer_orbits(set))
}

/// Splits an arbitrary collection of squares into isotopism classes.
pub fn partition_squares(squares: &[LatinSquare]) -> Result<Vec<IsotopyClass>> {
    merge_groups(squares, (0..squares.len()).map(|i| vec![i]).collect())
}

/// Known classes keyed by invariant tuple.
#[derive(Clone, Debug, Default)]
pub struct LabelCatalog {
    entries: Vec<(String, InvariantVector)>,
}

#[derive(Deserialize)]
struct CatalogRow {
    label: String,
    transversals: u64,
    intercalates: u64,
    subsquares3: u64,
    subrect2x3: u64,
    subrect3x2: u64,
    group_order: u64,
}

const ORDER6_CATALOG: &str = include_str!("../data/table3.csv");
const ORDER7_CATALOG: &str = include_str!("../data/table5.csv");

impl LabelCatalog {
    pub fn new(entries: Vec<(String, InvariantVector)>) -> Self {
        LabelCatalog { entries }
    }

    /// Reads `label,transversals,intercalates,subsquares3,subrect2x3,subrect3x2,group_order`.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut entries = Vec::new();
        for row in rdr.deserialize() {
            let r: CatalogRow = row?;
            entries.push((
                r.label,
                InvariantVector {
                    transversals: r.transversals,
                    intercalates: r.intercalates,
                    subsquares3: r.subsquares3,
                    subrect2x3: r.subrect2x3,
                    subrect3x2: r.subrect3x2,
                    group_order: Some(r.group_order),
                },
            ));
        }
        Ok(LabelCatalog { entries })
    }

    /// The shipped catalog for order `n`: the cyclic square for `n ≤ 3`, the
    /// named squares for orders 4 and 5, and the tuple tables for 6 and 7.
    pub fn for_order(n: usize) -> Result<Self> {
        match n {
            0 => Ok(LabelCatalog::default()),
            1..=3 => Ok(LabelCatalog::new(vec![(
                format!("c_{{{n},1}}"),
                invariant_vector(&LatinSquare::cyclic(n), true)?,
            )])),
            4 | 5 => {
                let entries = crate::latin::caption_squares()
                    .into_iter()
                    .filter(|(_, l)| l.order() == n)
                    .map(|(label, l)| Ok((label, invariant_vector(&l, true)?)))
                    .collect::<Result<_>>()?;
                Ok(LabelCatalog::new(entries))
            }
            6 => LabelCatalog::from_csv(ORDER6_CATALOG.as_bytes()),
            7 => LabelCatalog::from_csv(ORDER7_CATALOG.as_bytes()),
            _ => Ok(LabelCatalog::default()),
        }
    }

    pub fn entries(&self) -> &[(String, InvariantVector)] {
        &self.entries
    }

    /// Labels whose tuple equals `v` (group order compared when both sides
    /// carry one).
    pub fn lookup(&self, v: &InvariantVector) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, e)| {
                e.counts() == v.counts()
                    && match (e.group_order, v.group_order) {
                        (Some(a), Some(b)) => a == b,
                        _ => true,
                    }
            })
            .map(|(label, _)| label.as_str())
            .collect()
    }

    /// Label for a tuple: the unique match, or the matches joined by `|`.
    pub fn label_for(&self, v: &InvariantVector) -> Option<String> {
        let hits = self.lookup(v);
        if hits.is_empty() {
            None
        } else {
            Some(hits.join("|"))
        }
    }
}

/// Attaches catalog labels; classes with no matching tuple keep `None`.
pub fn bind_labels(mut classes: Vec<IsotopyClass>, catalog: &LabelCatalog) -> Vec<IsotopyClass> {
    for c in &mut classes {
        c.label = catalog.label_for(&c.invariants);
    }
    classes
}

/// `|A_L|` for each class representative, in class order.
pub fn class_group_orders(classes: &[IsotopyClass]) -> Result<Vec<u64>> {
    classes
        .iter()
        .map(|c| match c.invariants.group_order {
            Some(g) => Ok(g),
            None => group_order(&c.representative),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed::{enumerate_fixed, SearchLimits};
    use crate::latin::{c41, c42, c51, c52};

    fn iso(a: &str, b: &str, g: &str, n: usize) -> Isotopism {
        Isotopism::new(
            Permutation::parse(a, Some(n)).unwrap(),
            Permutation::parse(b, Some(n)).unwrap(),
            Permutation::parse(g, Some(n)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn isotopy_examples() {
        assert!(!are_isotopic(&c41(), &c42()).unwrap());
        assert!(!are_isotopic(&c51(), &c52()).unwrap());
        let t = iso("(1 2)", "(2 3 4)", "(1 4)", 4);
        assert!(are_isotopic(&c41(), &c41().apply_isotopism(&t).unwrap()).unwrap());
        assert!(!are_isotopic(&c41(), &LatinSquare::cyclic(3)).unwrap());
    }

    #[test]
    fn partition_examples() {
        let t = iso("(1 2 3 4)", "(1 2 3 4)", "(1 2)(3 4)", 4);
        let set = enumerate_fixed(&t, SearchLimits::UNLIMITED).unwrap();
        let classes = bind_labels(partition_classes(&set).unwrap(), &LabelCatalog::for_order(4).unwrap());
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].members_count(), 8);
        assert_eq!(classes[0].label.as_deref(), Some("c_{4,1}"));

        let set = enumerate_fixed(&Isotopism::identity(3), SearchLimits::UNLIMITED).unwrap();
        let classes = partition_classes(&set).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].members_count(), 12);
    }

    #[test]
    fn centralizer_orbits_agree_with_plain_partition() {
        let t = iso("(1 2)(3 4)", "(1 2)(3 4)", "()", 4);
        let set = enumerate_fixed(&t, SearchLimits::UNLIMITED).unwrap();
        let fast = partition_classes(&set).unwrap();
        let slow = partition_squares(set.squares()).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn catalog_lookup() {
        let cat6 = LabelCatalog::for_order(6).unwrap();
        assert_eq!(cat6.entries().len(), 22);
        let v = |t: [u64; 6]| InvariantVector {
            transversals: t[0],
            intercalates: t[1],
            subsquares3: t[2],
            subrect2x3: t[3],
            subrect3x2: t[4],
            group_order: Some(t[5]),
        };
        assert_eq!(cat6.label_for(&v([0, 27, 4, 12, 12, 216])).as_deref(), Some("c_{6,10}"));
        assert_eq!(
            cat6.label_for(&v([0, 9, 4, 12, 12, 36])).as_deref(),
            Some("c_{6,3}|c_{6,4}|c_{6,5}")
        );
        let cat7 = LabelCatalog::for_order(7).unwrap();
        assert_eq!(cat7.label_for(&v([63, 42, 7, 21, 21, 168])).as_deref(), Some("c_{7,148}"));
        assert_eq!(cat7.label_for(&v([1, 1, 1, 1, 1, 1])), None);
    }
}
