//! Isotopy invariants: transversals, intercalates, 3×3 subsquares and
//! 2×3 / 3×2 subrectangles, plus the autotopism group order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::autotopism::group_order;
use crate::error::{Error, Result};
use crate::latin::LatinSquare;

/// The five counts and, optionally, `|A_L|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvariantVector {
    pub transversals: u64,
    pub intercalates: u64,
    pub subsquares3: u64,
    pub subrect2x3: u64,
    pub subrect3x2: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<u64>,
}

impl InvariantVector {
    /// The five counts without the group order.
    pub fn counts(&self) -> [u64; 5] {
        [
            self.transversals,
            self.intercalates,
            self.subsquares3,
            self.subrect2x3,
            self.subrect3x2,
        ]
    }

    pub fn without_group(&self) -> InvariantVector {
        InvariantVector {
            group_order: None,
            ..*self
        }
    }
}

impl fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.counts();
        write!(f, "({},{},{},{},{}", c[0], c[1], c[2], c[3], c[4])?;
        if let Some(g) = self.group_order {
            write!(f, ",{g}")?;
        }
        write!(f, ")")
    }
}

/// Number of transversals.
pub fn count_transversals(l: &LatinSquare) -> u64 {
    fn go(l: &LatinSquare, row: usize, cols: u32, syms: u32) -> u64 {
        let n = l.order();
        if row == n {
            return 1;
        }
        let mut total = 0;
        for c in 0..n {
            if cols & (1 << c) != 0 {
                continue;
            }
            let s = l.get(row, c);
            if syms & (1 << s) != 0 {
                continue;
            }
            total += go(l, row + 1, cols | 1 << c, syms | 1 << s);
        }
        total
    }
    go(l, 0, 0, 0)
}

/// Number of 2×2 Latin subsquares.
pub fn count_intercalates(l: &LatinSquare) -> u64 {
    let n = l.order();
    let mut count = 0;
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    if l.get(r1, c1) == l.get(r2, c2) && l.get(r1, c2) == l.get(r2, c1) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn symbol_mask(l: &LatinSquare, row: usize, cols: &[usize]) -> u32 {
    cols.iter().fold(0, |m, &c| m | 1 << l.get(row, c))
}

/// Number of 3×3 Latin subsquares.
pub fn count_subsquares3(l: &LatinSquare) -> u64 {
    let n = l.order();
    let col_sets = subsets(n, 3);
    let mut count = 0;
    for rows in subsets(n, 3) {
        for cols in &col_sets {
            // rows of a Latin square never repeat, so three symbols in total
            // already make the block Latin
            let m = rows.iter().fold(0, |m, &r| m | symbol_mask(l, r, cols));
            if m.count_ones() == 3 {
                count += 1;
            }
        }
    }
    count
}

/// Number of `rows × cols` subrectangles, `{rows, cols} = {2, 3}`.
///
/// A 2×3 subrectangle is a pair of rows and three columns on which both rows
/// carry the same three symbols; a 3×2 subrectangle is its transpose, three
/// rows and two columns on which both columns carry the same three symbols.
pub fn count_subrect(l: &LatinSquare, rows: usize, cols: usize) -> Result<u64> {
    match (rows, cols) {
        (2, 3) => Ok(count_2x3(l)),
        (3, 2) => Ok(count_2x3(&l.transpose())),
        _ => Err(Error::InvalidDimensions { rows, cols }),
    }
}

fn count_2x3(l: &LatinSquare) -> u64 {
    let n = l.order();
    let col_sets = subsets(n, 3);
    let mut count = 0;
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            count += col_sets
                .iter()
                .filter(|cols| symbol_mask(l, r1, cols) == symbol_mask(l, r2, cols))
                .count() as u64;
        }
    }
    count
}

/// All five counts, plus `|A_L|` when `with_group` is set.
pub fn invariant_vector(l: &LatinSquare, with_group: bool) -> Result<InvariantVector> {
    Ok(InvariantVector {
        transversals: count_transversals(l),
        intercalates: count_intercalates(l),
        subsquares3: count_subsquares3(l),
        subrect2x3: count_2x3(l),
        subrect3x2: count_2x3(&l.transpose()),
        group_order: if with_group { Some(group_order(l)?) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::{c41, c42, c51, c52};
    use crate::perm::all_permutations;

    fn brute_transversals(l: &LatinSquare) -> u64 {
        let n = l.order();
        all_permutations(n)
            .iter()
            .filter(|s| {
                let mut seen = 0u32;
                (0..n).all(|i| {
                    let b = 1 << l.get(i, s.apply(i));
                    let fresh = seen & b == 0;
                    seen |= b;
                    fresh
                })
            })
            .count() as u64
    }

    #[test]
    fn transversal_examples() {
        assert_eq!(count_transversals(&LatinSquare::cyclic(3)), 3);
        assert_eq!(count_transversals(&LatinSquare::cyclic(2)), 0);
        for l in [c41(), c42(), c51(), c52(), LatinSquare::cyclic(6)] {
            assert_eq!(count_transversals(&l), brute_transversals(&l));
        }
    }

    #[test]
    fn intercalate_examples() {
        assert_eq!(count_intercalates(&c42()), 12);
        assert_eq!(count_intercalates(&c41()), 4);
    }

    #[test]
    fn subsquare_examples() {
        assert_eq!(count_subsquares3(&LatinSquare::cyclic(3)), 1);
        assert_eq!(count_subsquares3(&c41()), 0);
    }

    #[test]
    fn subrect_dimensions() {
        let l = LatinSquare::cyclic(6);
        assert!(matches!(count_subrect(&l, 2, 2), Err(Error::InvalidDimensions { .. })));
        assert_eq!(count_subrect(&l, 2, 3).unwrap(), count_subrect(&l.transpose(), 3, 2).unwrap());
    }

    #[test]
    fn display() {
        let v = invariant_vector(&LatinSquare::cyclic(3), true).unwrap();
        assert_eq!(v.to_string(), "(3,0,1,3,3,18)");
    }
}
