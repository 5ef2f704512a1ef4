//! Latin squares, their orthogonal-array view and the isotopism action.
//!
//! Symbols are stored 0-based; the text formats use `1..=n`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{star_conjugator, CycleStructure, Permutation};

/// Largest order handled by the bitmask-based search routines.
pub const MAX_ORDER: usize = 16;

/// An `n × n` Latin square, row-major, symbols `0..n`.
///
/// Ordering is row-major lexicographic, which is also the order of the
/// canonical text serialization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    /// Validates 1-based rows.
    pub fn validate(rows: &[Vec<usize>]) -> Result<LatinSquare> {
        let n = rows.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                n,
                max: MAX_ORDER,
                what: "Latin squares",
            });
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &s) in row.iter().enumerate() {
                if s == 0 || s > n {
                    return Err(Error::SymbolOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        symbol: s,
                        n,
                    });
                }
                cells.push((s - 1) as u8);
            }
        }
        Self::from_cells(n, cells)
    }

    /// Validates 0-based row-major cells.
    pub fn from_cells(n: usize, cells: Vec<u8>) -> Result<LatinSquare> {
        if cells.len() != n * n {
            return Err(Error::Parse(format!(
                "expected {} cells, found {}",
                n * n,
                cells.len()
            )));
        }
        for i in 0..n {
            let mut row = 0u32;
            for j in 0..n {
                let s = cells[i * n + j] as usize;
                if s >= n {
                    return Err(Error::SymbolOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        symbol: s + 1,
                        n,
                    });
                }
                if row & (1 << s) != 0 {
                    return Err(Error::DuplicateInRow(i + 1));
                }
                row |= 1 << s;
            }
        }
        for j in 0..n {
            let mut col = 0u32;
            for i in 0..n {
                let s = cells[i * n + j];
                if col & (1 << s) != 0 {
                    return Err(Error::DuplicateInColumn(j + 1));
                }
                col |= 1 << s;
            }
        }
        Ok(LatinSquare { n, cells })
    }

    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<u8>) -> LatinSquare {
        debug_assert!(Self::from_cells(n, cells.clone()).is_ok());
        LatinSquare { n, cells }
    }

    /// Cayley table of `Z_n`: `L[i][j] = i + j mod n`.
    pub fn cyclic(n: usize) -> LatinSquare {
        let cells = (0..n)
            .flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u8))
            .collect();
        LatinSquare { n, cells }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// 0-based symbol at 0-based `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.n + col] as usize
    }

    #[inline]
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// 1-based rows.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells
            .chunks(self.n)
            .map(|r| r.iter().map(|&s| s as usize + 1).collect())
            .collect()
    }

    pub fn transpose(&self) -> LatinSquare {
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[j * n + i] = self.cells[i * n + j];
            }
        }
        LatinSquare { n, cells }
    }

    /// The `n²` triples `(row, col, symbol)`, 1-based.
    pub fn to_triples(&self) -> TripleSet {
        let n = self.n;
        let triples = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i + 1, j + 1)))
            .map(|(i, j)| (i, j, self.get(i - 1, j - 1) + 1))
            .collect();
        TripleSet { n, triples }
    }

    pub fn from_triples(t: &TripleSet) -> Result<LatinSquare> {
        let n = t.n;
        if t.triples.len() != n * n {
            return Err(Error::Invalid(format!(
                "expected {} triples, found {}",
                n * n,
                t.triples.len()
            )));
        }
        let mut cells = vec![u8::MAX; n * n];
        for &(i, j, s) in &t.triples {
            if i == 0 || j == 0 || s == 0 || i > n || j > n || s > n {
                return Err(Error::Invalid(format!("triple ({i},{j},{s}) out of range")));
            }
            let cell = &mut cells[(i - 1) * n + (j - 1)];
            if *cell != u8::MAX {
                return Err(Error::Invalid(format!("cell ({i},{j}) given twice")));
            }
            *cell = (s - 1) as u8;
        }
        Self::from_cells(n, cells)
    }

    /// `L^Θ = {(α(i), β(j), γ(l_ij))}`.
    pub fn apply_isotopism(&self, theta: &Isotopism) -> Result<LatinSquare> {
        if theta.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: theta.degree(),
            });
        }
        Ok(self.apply_unchecked(theta))
    }

    pub(crate) fn apply_unchecked(&self, theta: &Isotopism) -> LatinSquare {
        let n = self.n;
        let (a, b, g) = (theta.alpha.images(), theta.beta.images(), theta.gamma.images());
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            let row = a[i] as usize * n;
            for j in 0..n {
                cells[row + b[j] as usize] = g[self.cells[i * n + j] as usize];
            }
        }
        LatinSquare { n, cells }
    }

    /// True iff `L^Θ = L`.
    pub fn is_autotopism(&self, theta: &Isotopism) -> bool {
        if theta.degree() != self.n {
            return false;
        }
        self.is_fixed_by(theta)
    }

    #[inline]
    pub(crate) fn is_fixed_by(&self, theta: &Isotopism) -> bool {
        let n = self.n;
        let (a, b, g) = (theta.alpha.images(), theta.beta.images(), theta.gamma.images());
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.cells[a[i] as usize * n + b[j] as usize] == g[self.cells[i * n + j] as usize]
            })
        })
    }

    /// Row-major compact form, symbols 1-based and comma separated.
    pub fn to_compact(&self) -> String {
        self.cells
            .iter()
            .map(|s| (s + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_compact(n: usize, line: &str) -> Result<LatinSquare> {
        let cells = line
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&s| s >= 1 && s <= n)
                    .map(|s| (s - 1) as u8)
                    .ok_or_else(|| Error::Parse(format!("bad symbol {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_cells(n, cells)
    }

    /// Canonical file form: `n` on the first line, then `n` rows.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl FromStr for LatinSquare {
    type Err = Error;

    /// Parses the square file format. Blank lines and `#` comments are ignored.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty square file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the order n".into()))?;
        let rows = lines
            .take(n)
            .map(|l| {
                l.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad symbol {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != n {
            return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
        }
        LatinSquare::validate(&rows)
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Orthogonal-array representation: `n²` triples `(row, col, symbol)`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSet {
    n: usize,
    triples: BTreeSet<(usize, usize, usize)>,
}

impl TripleSet {
    pub fn new(n: usize, triples: impl IntoIterator<Item = (usize, usize, usize)>) -> Self {
        TripleSet {
            n,
            triples: triples.into_iter().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: (usize, usize, usize)) -> bool {
        self.triples.contains(&t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize, usize)> {
        self.triples.iter()
    }

    /// Image of the set under `(i, j, s) ↦ (α(i), β(j), γ(s))`.
    pub fn map(&self, theta: &Isotopism) -> TripleSet {
        let f = |p: &Permutation, x: usize| p.apply(x - 1) + 1;
        TripleSet::new(
            self.n,
            self.triples
                .iter()
                .map(|&(i, j, s)| (f(&theta.alpha, i), f(&theta.beta, j), f(&theta.gamma, s))),
        )
    }
}

/// `Θ = (α, β, γ)` permuting rows, columns and symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isotopism {
    pub alpha: Permutation,
    pub beta: Permutation,
    pub gamma: Permutation,
}

impl Isotopism {
    pub fn new(alpha: Permutation, beta: Permutation, gamma: Permutation) -> Result<Self> {
        let n = alpha.degree();
        for p in [&beta, &gamma] {
            if p.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: p.degree(),
                });
            }
        }
        Ok(Isotopism { alpha, beta, gamma })
    }

    pub fn identity(n: usize) -> Self {
        let id = Permutation::identity(n);
        Isotopism {
            alpha: id.clone(),
            beta: id.clone(),
            gamma: id,
        }
    }

    pub fn degree(&self) -> usize {
        self.alpha.degree()
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_identity() && self.beta.is_identity() && self.gamma.is_identity()
    }

    /// Componentwise `self ∘ other`; `(L^other)^self = L^(self ∘ other)`.
    pub fn compose(&self, other: &Isotopism) -> Result<Isotopism> {
        Ok(Isotopism {
            alpha: self.alpha.compose(&other.alpha)?,
            beta: self.beta.compose(&other.beta)?,
            gamma: self.gamma.compose(&other.gamma)?,
        })
    }

    pub fn inverse(&self) -> Isotopism {
        Isotopism {
            alpha: self.alpha.inverse(),
            beta: self.beta.inverse(),
            gamma: self.gamma.inverse(),
        }
    }

    /// `s · self · s⁻¹`, componentwise.
    pub fn conjugate_by(&self, s: &Isotopism) -> Result<Isotopism> {
        Ok(Isotopism {
            alpha: self.alpha.conjugate_by(&s.alpha)?,
            beta: self.beta.conjugate_by(&s.beta)?,
            gamma: self.gamma.conjugate_by(&s.gamma)?,
        })
    }

    pub fn cycle_structure(&self) -> IsotopismCycleStructure {
        IsotopismCycleStructure {
            l1: self.alpha.cycle_structure(),
            l2: self.beta.cycle_structure(),
            l3: self.gamma.cycle_structure(),
        }
    }

    /// Parses the three-line isotopism file format:
    ///
    /// ```text
    /// n: 4            (optional)
    /// alpha: (1 2 3 4)
    /// beta: 2 3 4 1
    /// gamma: (1 3)(2 4)
    /// ```
    ///
    /// Without an `n:` line or `degree` argument the order is taken from an
    /// image-list component, or else from the largest element mentioned.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Isotopism> {
        let mut n = degree;
        let mut parts: [Option<&str>; 3] = [None; 3];
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected 'key: value', got {line:?}")))?;
            let value = value.trim();
            match key.trim() {
                "n" => {
                    let v = value
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad order {value:?}")))?;
                    if let Some(d) = n {
                        if d != v {
                            return Err(Error::DegreeMismatch { left: v, right: d });
                        }
                    }
                    n = Some(v);
                }
                "alpha" => parts[0] = Some(value),
                "beta" => parts[1] = Some(value),
                "gamma" => parts[2] = Some(value),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let parts = parts.map(|p| p.ok_or_else(|| Error::Parse("missing component".into())));
        let [a, b, g] = parts;
        let (a, b, g) = (a?, b?, g?);
        let n = match n {
            Some(n) => n,
            None => {
                let hints = [a, b, g]
                    .iter()
                    .map(|t| Permutation::degree_hint(t))
                    .collect::<Result<Vec<_>>>()?;
                match hints.iter().find(|h| h.1) {
                    Some(h) => h.0,
                    None => hints.iter().map(|h| h.0).max().unwrap_or(0),
                }
            }
        };
        if n == 0 {
            return Err(Error::Parse("cannot infer the order; add an 'n:' line".into()));
        }
        Isotopism::new(
            Permutation::parse(a, Some(n))?,
            Permutation::parse(b, Some(n))?,
            Permutation::parse(g, Some(n))?,
        )
    }

    pub fn to_text(&self) -> String {
        format!(
            "n: {}\nalpha: {}\nbeta: {}\ngamma: {}\n",
            self.degree(),
            self.alpha,
            self.beta,
            self.gamma
        )
    }
}

impl fmt::Display for Isotopism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.alpha, self.beta, self.gamma)
    }
}

/// `l_Θ = (l_α, l_β, l_γ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotopismCycleStructure {
    pub l1: CycleStructure,
    pub l2: CycleStructure,
    pub l3: CycleStructure,
}

impl IsotopismCycleStructure {
    pub fn new(l1: CycleStructure, l2: CycleStructure, l3: CycleStructure) -> Result<Self> {
        let n = l1.degree();
        for l in [&l2, &l3] {
            if l.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: l.degree(),
                });
            }
        }
        Ok(IsotopismCycleStructure { l1, l2, l3 })
    }

    pub fn identity(n: usize) -> Self {
        let id = CycleStructure::identity(n);
        IsotopismCycleStructure {
            l1: id.clone(),
            l2: id.clone(),
            l3: id,
        }
    }

    pub fn degree(&self) -> usize {
        self.l1.degree()
    }

    pub fn is_trivial(&self) -> bool {
        self.l1.is_identity() && self.l2.is_identity() && self.l3.is_identity()
    }

    pub fn components(&self) -> [&CycleStructure; 3] {
        [&self.l1, &self.l2, &self.l3]
    }

    /// The isotopism built from the canonical representative of each component.
    pub fn canonical_isotopism(&self) -> Isotopism {
        Isotopism {
            alpha: self.l1.canonical_representative(),
            beta: self.l2.canonical_representative(),
            gamma: self.l3.canonical_representative(),
        }
    }

    /// The six reorderings of the components, i.e. the structures of the
    /// conjugate squares' autotopisms.
    pub fn reorderings(&self) -> Vec<IsotopismCycleStructure> {
        let c = self.components();
        let mut out: Vec<IsotopismCycleStructure> = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .iter()
        .map(|ix| IsotopismCycleStructure {
            l1: c[ix[0]].clone(),
            l2: c[ix[1]].clone(),
            l3: c[ix[2]].clone(),
        })
        .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Representative of the reordering class used for listings: when two
    /// components agree they become `l1 = l2`; otherwise components are sorted
    /// by decreasing longest-cycle profile (e.g. 6-cycle, then 3-cycles, then
    /// 2-cycles).
    pub fn listing_representative(&self) -> IsotopismCycleStructure {
        let profile = |l: &CycleStructure| -> Vec<u32> { l.counts().iter().rev().copied().collect() };
        let mut c: Vec<CycleStructure> = self.components().into_iter().cloned().collect();
        c.sort_by_key(|l| std::cmp::Reverse(profile(l)));
        if c[1] == c[2] && c[0] != c[1] {
            c.rotate_left(1);
        }
        IsotopismCycleStructure {
            l1: c[0].clone(),
            l2: c[1].clone(),
            l3: c[2].clone(),
        }
    }

    /// Filter syntax `"l1|l2|l3"` with comma-separated counts.
    pub fn to_compact(&self) -> String {
        format!(
            "{}|{}|{}",
            self.l1.to_compact(),
            self.l2.to_compact(),
            self.l3.to_compact()
        )
    }
}

impl fmt::Display for IsotopismCycleStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.l1, self.l2, self.l3)
    }
}

impl FromStr for IsotopismCycleStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "structure must be 'l1|l2|l3', got {s:?}"
            )));
        }
        IsotopismCycleStructure::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

/// `Θ1 * Θ2`, componentwise star conjugator; maps `LS_Θ1` onto `LS_Θ2`.
pub fn star_isotopism(t1: &Isotopism, t2: &Isotopism) -> Result<Isotopism> {
    Ok(Isotopism {
        alpha: star_conjugator(&t1.alpha, &t2.alpha)?,
        beta: star_conjugator(&t1.beta, &t2.beta)?,
        gamma: star_conjugator(&t1.gamma, &t2.gamma)?,
    })
}

const CAPTION_SQUARES: &str = include_str!("../data/caption_squares.txt");

/// The named class representatives of orders 4 and 5 shipped in
/// `data/caption_squares.txt`, as `(label, square)` pairs.
pub fn caption_squares() -> Vec<(String, LatinSquare)> {
    CAPTION_SQUARES
        .split("label ")
        .skip(1)
        .map(|block| {
            let (label, body) = block.split_once('\n').expect("label line");
            let l = body.parse().expect("shipped square is Latin");
            (label.trim().to_string(), l)
        })
        .collect()
}

fn named(label: &str) -> LatinSquare {
    caption_squares()
        .into_iter()
        .find(|(l, _)| l == label)
        .map(|(_, sq)| sq)
        .expect("shipped label")
}

/// `c_{4,1}`, isotopic to the cyclic group table.
pub fn c41() -> LatinSquare {
    named("c_{4,1}")
}

/// `c_{4,2}`, the Klein four-group table.
pub fn c42() -> LatinSquare {
    named("c_{4,2}")
}

/// `c_{5,1}`, the cyclic square of order 5.
pub fn c51() -> LatinSquare {
    named("c_{5,1}")
}

/// `c_{5,2}`, the non-group class of order 5.
pub fn c52() -> LatinSquare {
    named("c_{5,2}")
}
