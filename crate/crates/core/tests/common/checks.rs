//! Property checks shared by the property tests and the acceptance run.
//! Each returns `Err` with a description of the first counterexample.

use std::collections::{BTreeMap, BTreeSet};

use lsq_core::latin::star_isotopism;
use lsq_core::perm::{all_permutations, conjugate, star_conjugator};
use lsq_core::{
    autotopism_group, count_with_structure, enumerate_fixed, partition_classes, partition_squares, CycleStructure,
    IsotopismCycleStructure, LatinSquare, Permutation, SearchLimits,
};

use super::{all_squares, all_structures, isotopisms_with};

pub type Check = std::result::Result<(), String>;

const U: SearchLimits = SearchLimits::UNLIMITED;

fn sorted_images(squares: &[LatinSquare], t: &lsq_core::Isotopism) -> Vec<LatinSquare> {
    let mut v: Vec<LatinSquare> = squares.iter().map(|l| l.apply_isotopism(t).unwrap()).collect();
    v.sort();
    v
}

pub fn conjugation_invariance(n: usize) -> Check {
    let sn = all_permutations(n);
    for s in &sn {
        for a in &sn {
            if conjugate(s, a).unwrap().cycle_structure() != a.cycle_structure() {
                return Err(format!("conjugating {a} by {s}"));
            }
        }
    }
    Ok(())
}

pub fn star_conjugator_identity(n: usize) -> Check {
    let mut by_structure: BTreeMap<CycleStructure, Vec<Permutation>> = BTreeMap::new();
    for p in all_permutations(n) {
        by_structure.entry(p.cycle_structure()).or_default().push(p);
    }
    for class in by_structure.values() {
        for a in class {
            for b in class {
                let s = star_conjugator(a, b).map_err(|e| e.to_string())?;
                if &conjugate(&s, a).unwrap() != b {
                    return Err(format!("star conjugator of {a}, {b}"));
                }
            }
        }
    }
    Ok(())
}

/// Brute-force class sizes of `S_n` against `count_with_structure`.
pub fn structure_counts(n: usize) -> Check {
    let mut brute: BTreeMap<CycleStructure, u64> = BTreeMap::new();
    for p in all_permutations(n) {
        *brute.entry(p.cycle_structure()).or_default() += 1;
    }
    let all = CycleStructure::all(n);
    if all.len() != brute.len() {
        return Err(format!("n = {n}: {} structures, brute force finds {}", all.len(), brute.len()));
    }
    let mut total = 0;
    for l in &all {
        let c = count_with_structure(l);
        if brute.get(l) != Some(&c) {
            return Err(format!("{l}: {c} vs {:?}", brute.get(l)));
        }
        total += c;
    }
    if total != (1..=n as u64).product::<u64>() {
        return Err(format!("n = {n}: counts sum to {total}"));
    }
    Ok(())
}

/// `LS_Θ1` mapped along `Θ1 * Θ2` is `LS_Θ2`, for every `Θ2` of the
/// structure of `Θ1 = canonical`.
pub fn star_bijection(n: usize) -> Check {
    for l in all_structures(n) {
        let base = l.canonical_isotopism();
        let from = enumerate_fixed(&base, U).unwrap();
        for t in isotopisms_with(&l) {
            let star = star_isotopism(&base, &t).unwrap();
            if sorted_images(from.squares(), &star) != enumerate_fixed(&t, U).unwrap().squares() {
                return Err(format!("{l}: {}", t.to_text()));
            }
        }
    }
    Ok(())
}

fn group_sizes(l: &IsotopismCycleStructure, block: &[LatinSquare]) -> Vec<usize> {
    let base = l.canonical_isotopism();
    let mut groups: BTreeMap<Vec<LatinSquare>, usize> = BTreeMap::new();
    for t in isotopisms_with(l) {
        let star = star_isotopism(&base, &t).unwrap();
        *groups.entry(sorted_images(block, &star)).or_default() += 1;
    }
    groups.into_values().collect()
}

/// Blocks of `S_l` and of every `S_{l,[L]}` fall into equal-sized groups.
pub fn equal_multiplicity(n: usize) -> Check {
    for l in all_structures(n) {
        let set = enumerate_fixed(&l.canonical_isotopism(), U).unwrap();
        if set.is_empty() {
            continue;
        }
        let mut blocks = vec![set.squares().to_vec()];
        for class in partition_classes(&set).unwrap() {
            blocks.push(class.members.iter().map(|&i| set.squares()[i].clone()).collect());
        }
        for block in blocks {
            let sizes = group_sizes(&l, &block);
            if sizes.windows(2).any(|w| w[0] != w[1]) {
                return Err(format!("{l}: group sizes {sizes:?}"));
            }
        }
    }
    Ok(())
}

/// `|A_l(L)|` is constant on each isotopy class, over every square of order `n`.
pub fn regularity(n: usize) -> Check {
    let squares = all_squares(n);
    let groups: Vec<_> = squares.iter().map(|l| autotopism_group(l).unwrap()).collect();
    let mut class_of = vec![0; squares.len()];
    for (c, class) in partition_squares(&squares).unwrap().iter().enumerate() {
        for &i in &class.members {
            class_of[i] = c;
        }
    }
    for l in all_structures(n) {
        let mut per_class: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (i, g) in groups.iter().enumerate() {
            let r = g.filter_by_structure(&l).len();
            if r > 0 {
                per_class.entry(class_of[i]).or_default().insert(r);
            }
        }
        if let Some((c, rs)) = per_class.iter().find(|(_, rs)| rs.len() > 1) {
            return Err(format!("{l}, class {c}: r takes values {rs:?}"));
        }
    }
    Ok(())
}

/// The same fixed sets, in the same order, on 1, 4 and 7 workers.
pub fn parallel_determinism(structures: &[IsotopismCycleStructure]) -> Check {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            structures
                .iter()
                .map(|l| enumerate_fixed(&l.canonical_isotopism(), U).unwrap().squares().to_vec())
                .collect::<Vec<_>>()
        })
    };
    let one = run(1);
    for threads in [4, 7] {
        if run(threads) != one {
            return Err(format!("{threads} workers differ from 1"));
        }
    }
    Ok(())
}
