//! Autotopism groups and isotopism search.
//!
//! Every isotopism `Θ` with `A^Θ = B` is pinned down by `α` and `β(0)`: the
//! first column of `A` carries every symbol, so `γ(A[i][0]) = B[α(i)][β(0)]`
//! fixes `γ`, and then row 0 fixes the rest of `β`. The search therefore walks
//! `n · n!` candidates and verifies each one cell by cell.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::latin::{Isotopism, IsotopismCycleStructure, LatinSquare};
use crate::perm::{all_permutations, Permutation};

/// Largest order for the exhaustive isotopism search.
pub const MAX_SEARCH_ORDER: usize = 8;

/// The autotopism group `A_L` of a square, as an explicit sorted element list.
#[derive(Clone, Debug)]
pub struct AutotopismGroup {
    base: LatinSquare,
    elements: Vec<Isotopism>,
}

impl AutotopismGroup {
    pub fn base(&self) -> &LatinSquare {
        &self.base
    }

    pub fn elements(&self) -> &[Isotopism] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, t: &Isotopism) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    /// `A_l(L)`: the elements whose components have cycle structures `l`.
    pub fn filter_by_structure(&self, l: &IsotopismCycleStructure) -> Vec<Isotopism> {
        self.elements
            .iter()
            .filter(|t| {
                t.alpha.cycle_structure() == l.l1
                    && t.beta.cycle_structure() == l.l2
                    && t.gamma.cycle_structure() == l.l3
            })
            .cloned()
            .collect()
    }

    /// Checks identity, closure and inverses. Quadratic in the group order.
    pub fn check_group_axioms(&self) -> bool {
        let n = self.base.order();
        if !self.contains(&Isotopism::identity(n)) {
            return false;
        }
        self.elements.iter().all(|a| {
            self.contains(&a.inverse())
                && self
                    .elements
                    .iter()
                    .all(|b| a.compose(b).map(|c| self.contains(&c)).unwrap_or(false))
        })
    }
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_SEARCH_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_SEARCH_ORDER,
            what: "exhaustive isotopism search",
        });
    }
    Ok(())
}

/// Tries every `β(0)` for one fixed `α`, reporting each isotopism found to
/// `found`; stops early when `found` returns `false`.
fn search_alpha(
    a: &LatinSquare,
    b: &LatinSquare,
    b_pos: &[u8],
    alpha: &[u8],
    mut found: impl FnMut(Isotopism) -> bool,
) -> bool {
    let n = a.order();
    let mut gamma = [0u8; 16];
    let mut beta = [0u8; 16];
    let row0 = alpha[0] as usize;
    for b0 in 0..n {
        for i in 0..n {
            gamma[a.get(i, 0)] = b.get(alpha[i] as usize, b0) as u8;
        }
        for j in 0..n {
            let s = gamma[a.get(0, j)] as usize;
            beta[j] = b_pos[row0 * n + s];
        }
        let ok = (0..n).all(|i| {
            let bi = alpha[i] as usize;
            (0..n).all(|j| b.get(bi, beta[j] as usize) == gamma[a.get(i, j)] as usize)
        });
        if ok {
            let t = Isotopism {
                alpha: Permutation::from_images_unchecked(alpha.to_vec()),
                beta: Permutation::from_images_unchecked(beta[..n].to_vec()),
                gamma: Permutation::from_images_unchecked(gamma[..n].to_vec()),
            };
            if !found(t) {
                return false;
            }
        }
    }
    true
}

/// `b_pos[r * n + s]` = column of symbol `s` in row `r` of `b`.
fn symbol_positions(b: &LatinSquare) -> Vec<u8> {
    let n = b.order();
    let mut pos = vec![0u8; n * n];
    for r in 0..n {
        for c in 0..n {
            pos[r * n + b.get(r, c)] = c as u8;
        }
    }
    pos
}

/// All isotopisms `Θ` with `a^Θ = b`, sorted.
pub fn isotopisms_between(a: &LatinSquare, b: &LatinSquare) -> Result<Vec<Isotopism>> {
    if a.order() != b.order() {
        return Err(Error::DegreeMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    let n = a.order();
    check_order(n)?;
    let b_pos = symbol_positions(b);
    let alphas = all_permutations(n);
    let mut out: Vec<Isotopism> = alphas
        .par_iter()
        .flat_map_iter(|alpha| {
            let mut local = Vec::new();
            search_alpha(a, b, &b_pos, alpha.images(), |t| {
                local.push(t);
                true
            });
            local
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Some isotopism with `a^Θ = b`, if one exists.
pub fn find_isotopism(a: &LatinSquare, b: &LatinSquare) -> Result<Option<Isotopism>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    let n = a.order();
    check_order(n)?;
    let b_pos = symbol_positions(b);
    let mut alpha = Permutation::identity(n);
    loop {
        let mut hit = None;
        search_alpha(a, b, &b_pos, alpha.images(), |t| {
            hit = Some(t);
            false
        });
        if hit.is_some() {
            return Ok(hit);
        }
        if !alpha.next_lex() {
            return Ok(None);
        }
    }
}

/// The full autotopism group `A_L`.
pub fn autotopism_group(l: &LatinSquare) -> Result<AutotopismGroup> {
    let elements = isotopisms_between(l, l)?;
    Ok(AutotopismGroup {
        base: l.clone(),
        elements,
    })
}

/// `|A_L|`.
pub fn group_order(l: &LatinSquare) -> Result<u64> {
    let n = l.order();
    check_order(n)?;
    let b_pos = symbol_positions(l);
    let count = all_permutations(n)
        .par_iter()
        .map(|alpha| {
            let mut c = 0u64;
            search_alpha(l, l, &b_pos, alpha.images(), |_| {
                c += 1;
                true
            });
            c
        })
        .sum();
    Ok(count)
}

/// `A_l(L) = A_L ∩ A_l`.
pub fn filter_by_structure(g: &AutotopismGroup, l: &IsotopismCycleStructure) -> Vec<Isotopism> {
    g.filter_by_structure(l)
}
