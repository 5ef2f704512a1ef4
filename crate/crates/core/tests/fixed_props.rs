mod common;

use common::{all_squares, all_structures, checks, isotopisms_with};
use lsq_core::latin::star_isotopism;
use lsq_core::{delta, enumerate_fixed, Isotopism, IsotopismCycleStructure, LatinSquare, SearchLimits};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const U: SearchLimits = SearchLimits::UNLIMITED;

fn mapped(squares: &[LatinSquare], t: &Isotopism) -> Vec<LatinSquare> {
    let mut v: Vec<LatinSquare> = squares.iter().map(|l| l.apply_isotopism(t).unwrap()).collect();
    v.sort();
    v
}

// filter every square of the order instead of searching
#[test]
fn fixed_sets_match_brute_force() {
    for n in 1..=4 {
        let squares = all_squares(n);
        for t in common::all_isotopisms(n).iter().step_by(if n == 4 { 7 } else { 1 }) {
            let brute: Vec<LatinSquare> = squares.iter().filter(|l| l.is_autotopism(t)).cloned().collect();
            let set = enumerate_fixed(t, U).unwrap();
            assert_eq!(set.squares(), brute.as_slice(), "{}", t.to_text());
        }
    }
}

#[test]
fn star_bijection_exhaustive_up_to_four() {
    for n in 1..=4 {
        checks::star_bijection(n).unwrap();
    }
}

fn sampled_structures(n: usize) -> Vec<IsotopismCycleStructure> {
    let list: &[&str] = match n {
        5 => &["1,2,0,0,0|1,2,0,0,0|1,2,0,0,0", "0,0,0,0,1|0,0,0,0,1|0,0,0,0,1", "1,0,0,1,0|1,0,0,1,0|1,0,0,1,0"],
        6 => &["0,0,0,0,0,1|0,0,0,0,0,1|2,2,0,0,0,0", "1,0,0,0,1,0|1,0,0,0,1,0|1,0,0,0,1,0", "0,0,2,0,0,0|0,0,2,0,0,0|0,0,2,0,0,0"],
        _ => unreachable!(),
    };
    list.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn star_bijection_and_uniformity_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [5, 6] {
        for l in sampled_structures(n) {
            let base = l.canonical_isotopism();
            let from = enumerate_fixed(&base, U).unwrap();
            assert!(!from.is_empty(), "{l}");
            let mut all = isotopisms_with(&l);
            all.shuffle(&mut rng);
            for t in all.iter().take(5) {
                let to = enumerate_fixed(t, U).unwrap();
                assert_eq!(to.len(), from.len());
                assert_eq!(delta(t, U).unwrap(), from.len() as u64);
                let star = star_isotopism(&base, t).unwrap();
                assert_eq!(mapped(from.squares(), &star), to.squares(), "{l}");
            }
        }
    }
}

#[test]
fn every_enumerated_square_is_fixed() {
    for n in 2..=6 {
        for l in all_structures(n).into_iter().filter(|l| l == &l.listing_representative()).step_by(n) {
            let t = l.canonical_isotopism();
            if let Ok(set) = enumerate_fixed(&t, SearchLimits::with_budget(2_000_000)) {
                assert!(set.squares().iter().all(|s| s.is_autotopism(&t)), "{l}");
            }
        }
    }
}

#[test]
fn same_output_for_any_worker_count() {
    let structures: Vec<IsotopismCycleStructure> = [
        "0,0,0,0,0,1|0,0,0,0,0,1|0,0,0,0,0,1",
        "1,0,0,0,1,0|1,0,0,0,1,0|1,0,0,0,1,0",
        "3,0,1,0,0,0|3,0,1,0,0,0|3,0,1,0,0,0",
        "0,0,0,0,0,0,1|0,0,0,0,0,0,1|7,0,0,0,0,0,0",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    checks::parallel_determinism(&structures).unwrap();
}

#[test]
fn delta_ignores_component_order() {
    for n in 1..=4 {
        for l in all_structures(n) {
            let d = delta(&l.canonical_isotopism(), U).unwrap();
            for r in l.reorderings() {
                assert_eq!(delta(&r.canonical_isotopism(), U).unwrap(), d, "{l} vs {r}");
            }
        }
    }
    for s in ["0,0,0,0,0,1|0,0,0,0,0,1|2,2,0,0,0,0", "1,2,0,0,0|1,2,0,0,0|1,0,0,1,0"] {
        let l: IsotopismCycleStructure = s.parse().unwrap();
        let d = delta(&l.canonical_isotopism(), U).unwrap();
        for r in l.reorderings() {
            assert_eq!(delta(&r.canonical_isotopism(), U).unwrap(), d, "{l} vs {r}");
        }
    }
}
