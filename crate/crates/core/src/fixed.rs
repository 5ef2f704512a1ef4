//! Enumeration of `LS_Θ`, the Latin squares fixed by an isotopism `Θ`.
//!
//! `L^Θ = L` means `L[α(i)][β(j)] = γ(L[i][j])`, so the grid splits into
//! orbits of `(i, j) ↦ (α(i), β(j))` and a symbol `s` chosen for an orbit
//! representative forces `γ(s), γ²(s), …` along the rest of the orbit. The
//! search makes one decision per cell orbit, picks the orbit with the fewest
//! admissible symbols first, and prunes when some row or column can no longer
//! receive a missing symbol.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::latin::{Isotopism, IsotopismCycleStructure, LatinSquare, MAX_ORDER};

/// One orbit of `(i, j) ↦ (α(i), β(j))` on the cell grid (0-based cells).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellOrbit {
    members: Vec<(u8, u8)>,
}

impl CellOrbit {
    pub fn representative(&self) -> (usize, usize) {
        let (i, j) = self.members[0];
        (i as usize, j as usize)
    }

    /// Member `t + 1` is the image of member `t`.
    pub fn members(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.members.iter().map(|&(i, j)| (i as usize, j as usize))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Orbit partition of the grid, representatives in row-major order.
pub fn cell_orbits(theta: &Isotopism) -> Vec<CellOrbit> {
    let n = theta.degree();
    let mut seen = vec![false; n * n];
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if seen[i * n + j] {
                continue;
            }
            let mut members = Vec::new();
            let (mut r, mut c) = (i, j);
            while !seen[r * n + c] {
                seen[r * n + c] = true;
                members.push((r as u8, c as u8));
                r = theta.alpha.apply(r);
                c = theta.beta.apply(c);
            }
            out.push(CellOrbit { members });
        }
    }
    out
}

/// Step budget for a search; a step is one orbit assignment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub budget: Option<u64>,
}

impl SearchLimits {
    pub const UNLIMITED: SearchLimits = SearchLimits { budget: None };

    pub fn with_budget(budget: u64) -> Self {
        SearchLimits {
            budget: Some(budget),
        }
    }
}

/// `LS_Θ`, sorted and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSet {
    theta: Isotopism,
    squares: Vec<LatinSquare>,
}

impl FixedSet {
    pub fn new(theta: Isotopism, mut squares: Vec<LatinSquare>) -> Result<Self> {
        squares.sort();
        squares.dedup();
        if let Some(bad) = squares.iter().find(|l| !l.is_autotopism(&theta)) {
            return Err(Error::Invalid(format!(
                "square {} is not fixed by {theta}",
                bad.to_compact()
            )));
        }
        Ok(FixedSet { theta, squares })
    }

    pub fn theta(&self) -> &Isotopism {
        &self.theta
    }

    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn index_of(&self, l: &LatinSquare) -> Option<usize> {
        self.squares.binary_search(l).ok()
    }

    pub fn contains(&self, l: &LatinSquare) -> bool {
        self.index_of(l).is_some()
    }
}

struct OrbitData {
    cells: Vec<(u8, u8)>,
    /// Symbols whose γ-cycle length divides the orbit length and that do not
    /// collide with themselves inside the orbit.
    admissible: u32,
}

struct Problem {
    n: usize,
    orbits: Vec<OrbitData>,
    /// `gpow[k * n + s] = γ^k(s)` for `k` up to the longest orbit.
    gpow: Vec<u8>,
    full: u32,
}

#[derive(Clone)]
struct State {
    grid: Vec<u8>,
    row: Vec<u32>,
    col: Vec<u32>,
    assigned: Vec<bool>,
    remaining: usize,
}

const EMPTY: u8 = u8::MAX;

struct Steps<'a> {
    local: u64,
    shared: &'a AtomicU64,
    budget: Option<u64>,
}

impl Steps<'_> {
    const FLUSH: u64 = 1 << 12;

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local >= Self::FLUSH {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let total = self.shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        match self.budget {
            Some(b) if total > b => Err(Error::BudgetExceeded { budget: b }),
            _ => Ok(()),
        }
    }
}

/// A decision prefix: the `(orbit, symbol)` choices taken from the root.
type Prefix = Vec<(usize, u8)>;

enum Choice {
    Dead,
    Complete,
    Branch(usize, u32),
}

impl Problem {
    fn new(theta: &Isotopism) -> Result<Problem> {
        let n = theta.degree();
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                n,
                max: MAX_ORDER,
                what: "fixed-square enumeration",
            });
        }
        let orbits = cell_orbits(theta);
        let max_len = orbits.iter().map(|o| o.len()).max().unwrap_or(1);
        let mut gpow = Vec::with_capacity(max_len * n);
        let mut cur: Vec<u8> = (0..n as u8).collect();
        for _ in 0..max_len {
            gpow.extend_from_slice(&cur);
            cur = cur.iter().map(|&s| theta.gamma.images()[s as usize]).collect();
        }
        let cycle_len: Vec<usize> = (0..n).map(|s| theta.gamma.cycle_length_of(s)).collect();
        let orbits = orbits
            .into_iter()
            .map(|o| {
                let t = o.len();
                let mut admissible = 0u32;
                'sym: for s in 0..n {
                    if t % cycle_len[s] != 0 {
                        continue;
                    }
                    for a in 0..t {
                        for b in a + 1..t {
                            let (ra, ca) = o.members[a];
                            let (rb, cb) = o.members[b];
                            if (ra == rb || ca == cb) && gpow[a * n + s] == gpow[b * n + s] {
                                continue 'sym;
                            }
                        }
                    }
                    admissible |= 1 << s;
                }
                OrbitData {
                    cells: o.members,
                    admissible,
                }
            })
            .collect();
        Ok(Problem {
            n,
            orbits,
            gpow,
            full: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
        })
    }

    fn root(&self) -> State {
        State {
            grid: vec![EMPTY; self.n * self.n],
            row: vec![0; self.n],
            col: vec![0; self.n],
            assigned: vec![false; self.orbits.len()],
            remaining: self.orbits.len(),
        }
    }

    #[inline]
    fn candidates(&self, st: &State, o: usize) -> u32 {
        let orbit = &self.orbits[o];
        let (r0, c0) = orbit.cells[0];
        let mut m = orbit.admissible & !(st.row[r0 as usize] | st.col[c0 as usize]);
        let mut out = 0;
        while m != 0 {
            let s = m.trailing_zeros() as usize;
            m &= m - 1;
            let ok = orbit.cells.iter().enumerate().skip(1).all(|(k, &(r, c))| {
                let x = self.gpow[k * self.n + s];
                (st.row[r as usize] | st.col[c as usize]) & (1 << x) == 0
            });
            if ok {
                out |= 1 << s;
            }
        }
        out
    }

    /// Most-constrained orbit, after checking every row and column can still
    /// receive each of its missing symbols.
    fn choose(&self, st: &State) -> Choice {
        if st.remaining == 0 {
            return Choice::Complete;
        }
        let n = self.n;
        let mut row_possible = [0u32; MAX_ORDER];
        let mut col_possible = [0u32; MAX_ORDER];
        let mut best: Option<(usize, u32, u32)> = None;
        for (o, orbit) in self.orbits.iter().enumerate() {
            if st.assigned[o] {
                continue;
            }
            let cand = self.candidates(st, o);
            if cand == 0 {
                return Choice::Dead;
            }
            let count = cand.count_ones();
            if best.is_none_or(|(_, _, c)| count < c) {
                best = Some((o, cand, count));
            }
            for (k, &(r, c)) in orbit.cells.iter().enumerate() {
                let mut m = cand;
                let mut mapped = 0u32;
                while m != 0 {
                    let s = m.trailing_zeros() as usize;
                    m &= m - 1;
                    mapped |= 1 << self.gpow[k * n + s];
                }
                row_possible[r as usize] |= mapped;
                col_possible[c as usize] |= mapped;
            }
        }
        for x in 0..n {
            if (st.row[x] | row_possible[x]) != self.full || (st.col[x] | col_possible[x]) != self.full
            {
                return Choice::Dead;
            }
        }
        let (o, cand, _) = best.expect("remaining > 0");
        Choice::Branch(o, cand)
    }

    #[inline]
    fn place(&self, st: &mut State, o: usize, s: u8) {
        let n = self.n;
        for (k, &(r, c)) in self.orbits[o].cells.iter().enumerate() {
            let x = self.gpow[k * n + s as usize];
            st.grid[r as usize * n + c as usize] = x;
            st.row[r as usize] |= 1 << x;
            st.col[c as usize] |= 1 << x;
        }
        st.assigned[o] = true;
        st.remaining -= 1;
    }

    #[inline]
    fn unplace(&self, st: &mut State, o: usize) {
        let n = self.n;
        for &(r, c) in &self.orbits[o].cells {
            let cell = &mut st.grid[r as usize * n + c as usize];
            st.row[r as usize] &= !(1 << *cell);
            st.col[c as usize] &= !(1 << *cell);
            *cell = EMPTY;
        }
        st.assigned[o] = false;
        st.remaining += 1;
    }

    /// Depth-first search; returns `Ok(false)` once `visit` asks to stop.
    fn dfs(
        &self,
        st: &mut State,
        steps: &mut Steps<'_>,
        visit: &mut dyn FnMut(&[u8]) -> bool,
    ) -> Result<bool> {
        match self.choose(st) {
            Choice::Dead => Ok(true),
            Choice::Complete => Ok(visit(&st.grid)),
            Choice::Branch(o, mut cand) => {
                while cand != 0 {
                    let s = cand.trailing_zeros() as u8;
                    cand &= cand - 1;
                    steps.tick()?;
                    self.place(st, o, s);
                    let go_on = self.dfs(st, steps, visit)?;
                    self.unplace(st, o);
                    if !go_on {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Splits the tree breadth-first into ordered subtree prefixes. Complete
    /// squares met on the way stay in the list as leaf prefixes.
    fn frontier(&self, target: usize, max_depth: usize) -> Vec<Prefix> {
        let mut level: Vec<Prefix> = vec![Vec::new()];
        for _ in 0..max_depth {
            if level.len() >= target {
                break;
            }
            let mut next = Vec::new();
            let mut expanded = false;
            for prefix in level {
                let st = self.replay(&prefix);
                match self.choose(&st) {
                    Choice::Dead => {}
                    Choice::Complete => next.push(prefix),
                    Choice::Branch(o, mut cand) => {
                        expanded = true;
                        while cand != 0 {
                            let s = cand.trailing_zeros() as u8;
                            cand &= cand - 1;
                            let mut p = prefix.clone();
                            p.push((o, s));
                            next.push(p);
                        }
                    }
                }
            }
            level = next;
            if !expanded {
                break;
            }
        }
        level
    }

    fn replay(&self, prefix: &Prefix) -> State {
        let mut st = self.root();
        for &(o, s) in prefix {
            self.place(&mut st, o, s);
        }
        st
    }
}

/// Runs the search in parallel, one accumulator per subtree. Accumulators are
/// returned in depth-first order, so concatenating them reproduces the
/// sequential visiting order whatever the worker count.
pub fn search<A, I, V>(theta: &Isotopism, limits: SearchLimits, init: I, visit: V) -> Result<Vec<A>>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[u8]) + Sync,
{
    let problem = Problem::new(theta)?;
    let target = 8 * rayon::current_num_threads().max(1);
    let prefixes = problem.frontier(target, 4);
    let shared = AtomicU64::new(prefixes.iter().map(|p| p.len() as u64).sum());
    prefixes
        .par_iter()
        .map(|prefix| {
            let mut acc = init();
            let mut st = problem.replay(prefix);
            let mut steps = Steps {
                local: 0,
                shared: &shared,
                budget: limits.budget,
            };
            problem.dfs(&mut st, &mut steps, &mut |cells| {
                visit(&mut acc, cells);
                true
            })?;
            steps.flush()?;
            Ok(acc)
        })
        .collect()
}

/// Calls `visit` on each fixed square in depth-first order on the current
/// thread, stopping early when it returns `false`.
pub fn for_each_fixed(
    theta: &Isotopism,
    limits: SearchLimits,
    mut visit: impl FnMut(&[u8]) -> bool,
) -> Result<()> {
    let problem = Problem::new(theta)?;
    let shared = AtomicU64::new(0);
    let mut steps = Steps {
        local: 0,
        shared: &shared,
        budget: limits.budget,
    };
    let mut st = problem.root();
    problem.dfs(&mut st, &mut steps, &mut visit)?;
    steps.flush()
}

/// `LS_Θ`.
pub fn enumerate_fixed(theta: &Isotopism, limits: SearchLimits) -> Result<FixedSet> {
    let n = theta.degree();
    let parts = search(theta, limits, Vec::new, |acc: &mut Vec<LatinSquare>, cells| {
        acc.push(LatinSquare::from_cells_unchecked(n, cells.to_vec()))
    })?;
    let squares: Vec<LatinSquare> = parts.into_iter().flatten().collect();
    let mut squares = squares;
    squares.sort();
    Ok(FixedSet {
        theta: theta.clone(),
        squares,
    })
}

/// `Δ(Θ) = |LS_Θ|`, counted without storing squares.
pub fn delta(theta: &Isotopism, limits: SearchLimits) -> Result<u64> {
    let parts = search(theta, limits, || 0u64, |acc, _| *acc += 1)?;
    Ok(parts.into_iter().sum())
}

/// Whether `Δ(Θ) > 0`, stopping at the first square.
pub fn has_fixed_square(theta: &Isotopism, limits: SearchLimits) -> Result<bool> {
    let mut found = false;
    for_each_fixed(theta, limits, |_| {
        found = true;
        false
    })?;
    Ok(found)
}

/// `Δ(l)`, computed on the canonical representative of each component.
pub fn delta_of_structure(l: &IsotopismCycleStructure, limits: SearchLimits) -> Result<u64> {
    delta(&l.canonical_isotopism(), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn iso(a: &str, b: &str, g: &str, n: usize) -> Isotopism {
        Isotopism::new(
            Permutation::parse(a, Some(n)).unwrap(),
            Permutation::parse(b, Some(n)).unwrap(),
            Permutation::parse(g, Some(n)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn orbit_examples() {
        let orbits = cell_orbits(&Isotopism::identity(3));
        assert_eq!(orbits.len(), 9);
        assert!(orbits.iter().all(|o| o.len() == 1));

        let orbits = cell_orbits(&iso("(1 2 3)", "(1 2 3)", "()", 3));
        assert_eq!(orbits.iter().map(|o| o.len()).collect::<Vec<_>>(), vec![3, 3, 3]);

        let t = iso("(1 2 3 4)", "(1 2)(3 4)", "()", 4);
        let orbits = cell_orbits(&t);
        assert_eq!(orbits.len(), 4);
        for o in &orbits {
            assert_eq!(o.len(), 4);
            let m: Vec<_> = o.members().collect();
            for k in 0..m.len() {
                let (i, j) = m[k];
                assert_eq!(m[(k + 1) % m.len()], (t.alpha.apply(i), t.beta.apply(j)));
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let t = iso("(1 2 3)", "(1 2 3)", "(1 2 3)", 3);
        assert_eq!(enumerate_fixed(&t, SearchLimits::UNLIMITED).unwrap().len(), 3);

        let t = iso("(1 2 3)", "(1 2 3)", "()", 3);
        let set = enumerate_fixed(&t, SearchLimits::UNLIMITED).unwrap();
        assert_eq!(set.len(), 6);
        assert!(set.squares().iter().all(|l| l.is_autotopism(&t)));
        assert!(set.squares().windows(2).all(|w| w[0] < w[1]));

        let t = iso("(1 2)", "(1 2)", "()", 3);
        assert!(enumerate_fixed(&t, SearchLimits::UNLIMITED).unwrap().is_empty());
        assert!(!has_fixed_square(&t, SearchLimits::UNLIMITED).unwrap());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&Isotopism::identity(3), SearchLimits::UNLIMITED).unwrap(), 12);
        assert_eq!(delta(&Isotopism::identity(4), SearchLimits::UNLIMITED).unwrap(), 576);
        let t = iso("(1 2 3 4)", "(1 2 3 4)", "(1 2)(3 4)", 4);
        assert_eq!(delta(&t, SearchLimits::UNLIMITED).unwrap(), 8);
    }

    #[test]
    fn delta_of_structure_examples() {
        let l: IsotopismCycleStructure = "0,0,1|0,0,1|0,0,1".parse().unwrap();
        assert_eq!(delta_of_structure(&l, SearchLimits::UNLIMITED).unwrap(), 3);
    }

    #[test]
    fn budget_is_enforced() {
        let err = delta(&Isotopism::identity(5), SearchLimits::with_budget(1000)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 1000 }));
    }

    #[test]
    fn order_one() {
        assert_eq!(delta(&Isotopism::identity(1), SearchLimits::UNLIMITED).unwrap(), 1);
    }
}
