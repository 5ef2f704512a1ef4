//! Inputs shared by the benchmarks.

use lsq_core::{IsotopismCycleStructure, LatinSquare};

/// Structures of orders 5 to 7 with fixed sets of very different sizes.
pub const STRUCTURES: &[&str] = &[
    "0,0,0,0,1|0,0,0,0,1|0,0,0,0,1",
    "1,2,0,0,0|1,2,0,0,0|1,2,0,0,0",
    "0,0,0,0,0,1|0,0,0,0,0,1|2,2,0,0,0,0",
    "0,0,0,0,0,0,1|0,0,0,0,0,0,1|0,0,0,0,0,0,1",
];

pub fn structures() -> Vec<IsotopismCycleStructure> {
    STRUCTURES.iter().map(|s| s.parse().expect("valid structure")).collect()
}

/// The cyclic square of order `n` with its first two rows swapped.
pub fn sample_square(n: usize) -> LatinSquare {
    let c = LatinSquare::cyclic(n);
    let mut cells = c.cells().to_vec();
    for j in 0..n {
        cells.swap(j, n + j);
    }
    LatinSquare::from_cells(n, cells).expect("row swap keeps the square Latin")
}

/// First square fixed by the structure's canonical isotopism.
pub fn fixed_square(l: &IsotopismCycleStructure) -> LatinSquare {
    let set = lsq_core::enumerate_fixed(&l.canonical_isotopism(), lsq_core::SearchLimits::UNLIMITED)
        .expect("bench structures are small");
    set.squares()[0].clone()
}
