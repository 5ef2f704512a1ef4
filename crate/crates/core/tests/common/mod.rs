#![allow(dead_code)]

pub mod checks;

use lsq_core::perm::all_permutations;
use lsq_core::{enumerate_fixed, Isotopism, IsotopismCycleStructure, LatinSquare, Permutation, SearchLimits};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Every Latin square of order `n`.
pub fn all_squares(n: usize) -> Vec<LatinSquare> {
    enumerate_fixed(&Isotopism::identity(n), SearchLimits::UNLIMITED)
        .unwrap()
        .squares()
        .to_vec()
}

pub fn all_isotopisms(n: usize) -> Vec<Isotopism> {
    let perms = all_permutations(n);
    let mut out = Vec::with_capacity(perms.len().pow(3));
    for a in &perms {
        for b in &perms {
            for c in &perms {
                out.push(Isotopism::new(a.clone(), b.clone(), c.clone()).unwrap());
            }
        }
    }
    out
}

/// All isotopisms with cycle structure `l`.
pub fn isotopisms_with(l: &IsotopismCycleStructure) -> Vec<Isotopism> {
    let [s1, s2, s3] = l.components();
    let (p1, p2, p3): (Vec<_>, Vec<_>, Vec<_>) =
        (s1.permutations().collect(), s2.permutations().collect(), s3.permutations().collect());
    let mut out = Vec::new();
    for a in &p1 {
        for b in &p2 {
            for c in &p3 {
                out.push(Isotopism::new(a.clone(), b.clone(), c.clone()).unwrap());
            }
        }
    }
    out
}

/// All ordered triples of cycle structures of degree `n`.
pub fn all_structures(n: usize) -> Vec<IsotopismCycleStructure> {
    let cs = lsq_core::CycleStructure::all(n);
    let mut out = Vec::new();
    for a in &cs {
        for b in &cs {
            for c in &cs {
                out.push(IsotopismCycleStructure::new(a.clone(), b.clone(), c.clone()).unwrap());
            }
        }
    }
    out
}

pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut v: Vec<u8> = (0..n as u8).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

pub fn random_isotopism<R: Rng>(n: usize, rng: &mut R) -> Isotopism {
    Isotopism::new(random_perm(n, rng), random_perm(n, rng), random_perm(n, rng)).unwrap()
}

pub fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u8).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

pub fn isotopism_strategy(n: usize) -> impl Strategy<Value = Isotopism> {
    (perm_strategy(n), perm_strategy(n), perm_strategy(n)).prop_map(|(a, b, c)| Isotopism::new(a, b, c).unwrap())
}

/// A spread of squares of order `n`: the cyclic square, the caption squares,
/// and the squares fixed by `(c, c, id)` for an `n`-cycle `c`.
pub fn seed_squares(n: usize) -> Vec<LatinSquare> {
    let mut seeds = vec![LatinSquare::cyclic(n)];
    seeds.extend(
        lsq_core::latin::caption_squares()
            .into_iter()
            .map(|(_, l)| l)
            .filter(|l| l.order() == n),
    );
    let mut counts = vec![0u32; n];
    counts[n - 1] = 1;
    let cycle = lsq_core::CycleStructure::new(counts).unwrap();
    let l = IsotopismCycleStructure::new(cycle.clone(), cycle, lsq_core::CycleStructure::identity(n)).unwrap();
    seeds.extend(enumerate_fixed(&l.canonical_isotopism(), SearchLimits::UNLIMITED).unwrap().squares().iter().cloned());
    seeds.sort();
    seeds.dedup();
    seeds
}

/// A random isotope of one of [`seed_squares`].
pub fn square_strategy(n: usize) -> impl Strategy<Value = LatinSquare> {
    (proptest::sample::select(seed_squares(n)), isotopism_strategy(n)).prop_map(|(l, t)| l.apply_isotopism(&t).unwrap())
}
