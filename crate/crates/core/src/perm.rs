//! Permutations of `[n]`, their canonical cycle decomposition and cycle
//! structures.
//!
//! Images are stored 0-based; every textual form (parsing, `Display`) is
//! 1-based, so `(1 2 3)` is the permutation sending 0 to 1, 1 to 2 and 2 to 0.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A bijection of `{0, .., n-1}` stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub const MAX_DEGREE: usize = 255;

    pub fn identity(n: usize) -> Self {
        assert!((1..=Self::MAX_DEGREE).contains(&n), "degree out of range");
        Permutation {
            images: (0..n as u8).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > Self::MAX_DEGREE {
            return Err(Error::NotBijection {
                n,
                reason: "degree must be between 1 and 255".into(),
            });
        }
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n {
                return Err(Error::NotBijection {
                    n,
                    reason: format!("image {} out of range", x + 1),
                });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotBijection {
                    n,
                    reason: format!("image {} repeated", x + 1),
                });
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images, e.g. `[2, 1, 4, 3]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut out = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n {
                return Err(Error::NotBijection {
                    n,
                    reason: format!("image {x} out of range"),
                });
            }
            out.push((x - 1) as u8);
        }
        Self::from_images(out)
    }

    /// Builds a permutation of degree `n` from 1-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if n == 0 || n > Self::MAX_DEGREE {
            return Err(Error::NotBijection {
                n,
                reason: "degree must be between 1 and 255".into(),
            });
        }
        let mut images: Vec<u8> = (0..n as u8).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::NotBijection {
                        n,
                        reason: format!("element {x} out of range"),
                    });
                }
                if std::mem::replace(&mut used[x - 1], true) {
                    return Err(Error::NotBijection {
                        n,
                        reason: format!("element {x} appears in two cycles"),
                    });
                }
                let next = cycle[(k + 1) % cycle.len()];
                images[x - 1] = (next - 1) as u8;
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u8>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// 0-based image array.
    #[inline]
    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_degree(self, other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, k: usize) -> Permutation {
        let mut out = Permutation::identity(self.degree());
        for _ in 0..k {
            out = self.compose_unchecked(&out);
        }
        out
    }

    /// `s · self · s⁻¹`.
    pub fn conjugate_by(&self, s: &Permutation) -> Result<Permutation> {
        check_degree(self, s)?;
        let mut images = vec![0u8; self.degree()];
        for i in 0..self.degree() {
            images[s.apply(i)] = s.images[self.apply(i)];
        }
        Ok(Permutation { images })
    }

    /// Length of the cycle through `i`.
    pub fn cycle_length_of(&self, i: usize) -> usize {
        let mut len = 1;
        let mut x = self.apply(i);
        while x != i {
            x = self.apply(x);
            len += 1;
        }
        len
    }

    /// The unique decomposition into disjoint cycles with each cycle starting
    /// at its minimum, longer cycles first and ties broken by the leading
    /// element. Fixed points are kept as 1-cycles.
    pub fn canonical_cycles(&self) -> CanonicalCycles {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u8];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x as u8);
                x = self.apply(x);
            }
            cycles.push(cycle);
        }
        // Each cycle already starts at its minimum because `start` scans upward;
        // a stable sort by decreasing length keeps leading elements increasing.
        cycles.sort_by_key(|c| std::cmp::Reverse(c.len()));
        CanonicalCycles { n, cycles }
    }

    pub fn cycle_structure(&self) -> CycleStructure {
        let n = self.degree();
        let mut counts = vec![0u32; n];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            counts[len - 1] += 1;
        }
        CycleStructure { counts }
    }

    /// Generators of the centralizer of `self` in `S_n`: one rotation per
    /// nontrivial cycle and one swap per pair of consecutive canonical cycles
    /// of equal length.
    pub fn centralizer_generators(&self) -> Vec<Permutation> {
        let n = self.degree();
        let cc = self.canonical_cycles();
        let mut gens = Vec::new();
        for cycle in cc.cycles() {
            if cycle.len() > 1 {
                let mut images: Vec<u8> = (0..n as u8).collect();
                for (k, &x) in cycle.iter().enumerate() {
                    images[x as usize] = cycle[(k + 1) % cycle.len()];
                }
                gens.push(Permutation { images });
            }
        }
        for pair in cc.cycles().windows(2) {
            if pair[0].len() == pair[1].len() {
                let mut images: Vec<u8> = (0..n as u8).collect();
                for (&x, &y) in pair[0].iter().zip(pair[1].iter()) {
                    images[x as usize] = y;
                    images[y as usize] = x;
                }
                gens.push(Permutation { images });
            }
        }
        gens
    }

    /// Advances to the next permutation in lexicographic order of the image
    /// array; returns `false` after the last one.
    pub fn next_lex(&mut self) -> bool {
        next_permutation(&mut self.images)
    }

    /// Parses either a 1-based image list (`"2 1 4 3"`, commas allowed) or
    /// cycle notation (`"(1 2)(3 4)"`). Cycle notation needs `degree` unless
    /// the largest element mentioned is the degree.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Permutation> {
        let text = text.trim();
        if text.starts_with('(') {
            let cycles = parse_cycles(text)?;
            let max = cycles.iter().flatten().copied().max().unwrap_or(0);
            let n = match degree {
                Some(n) if n < max => {
                    return Err(Error::Parse(format!(
                        "element {max} exceeds degree {n} in {text:?}"
                    )))
                }
                Some(n) => n,
                None if max == 0 => {
                    return Err(Error::Parse(
                        "degree of the identity \"()\" cannot be inferred".into(),
                    ))
                }
                None => max,
            };
            Permutation::from_cycles(n, &cycles)
        } else {
            let images = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad image {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(n) = degree {
                if n != images.len() {
                    return Err(Error::DegreeMismatch {
                        left: images.len(),
                        right: n,
                    });
                }
            }
            Permutation::from_one_based(&images)
        }
    }

    /// Largest element mentioned in a cycle-notation string, or the length
    /// of an image list; used to infer a common degree.
    pub(crate) fn degree_hint(text: &str) -> Result<(usize, bool)> {
        let text = text.trim();
        if text.starts_with('(') {
            let max = parse_cycles(text)?.into_iter().flatten().max().unwrap_or(0);
            Ok((max, false))
        } else {
            let len = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .count();
            Ok((len, true))
        }
    }

    /// One-line 1-based image list, e.g. `"2 1 4 3"`.
    pub fn to_image_string(&self) -> String {
        self.images
            .iter()
            .map(|x| (x + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn check_degree(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: b.degree(),
        });
    }
    Ok(())
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let cycle = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad cycle element {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

pub(crate) fn next_permutation(a: &mut [u8]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// All permutations of degree `n` in lexicographic order of their images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut p = Permutation::identity(n);
    let mut out = vec![p.clone()];
    while p.next_lex() {
        out.push(p.clone());
    }
    out
}

impl fmt::Display for Permutation {
    /// Cycle notation with fixed points omitted; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("()");
        }
        for cycle in self.canonical_cycles().cycles() {
            if cycle.len() > 1 {
                write!(f, "(")?;
                for (k, x) in cycle.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", x + 1)?;
                }
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

/// Canonical cycle decomposition of a permutation (0-based elements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCycles {
    n: usize,
    cycles: Vec<Vec<u8>>,
}

impl CanonicalCycles {
    pub fn cycles(&self) -> &[Vec<u8>] {
        &self.cycles
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// 1-based copy of the cycles.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .map(|c| c.iter().map(|&x| x as usize + 1).collect())
            .collect()
    }

    /// Recomposes the cycles into a permutation.
    pub fn to_permutation(&self) -> Permutation {
        let mut images = vec![0u8; self.n];
        for cycle in &self.cycles {
            for (k, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images_unchecked(images)
    }
}

/// Number of cycles of each length: `counts[i - 1]` is the number of
/// `i`-cycles, so `Σ i·counts[i-1] = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleStructure {
    counts: Vec<u32>,
}

impl CycleStructure {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        let n = counts.len();
        let sum: usize = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i + 1) * c as usize)
            .sum();
        if n == 0 || sum != n {
            return Err(Error::InconsistentStructure { counts, sum, n });
        }
        Ok(CycleStructure { counts })
    }

    pub fn identity(n: usize) -> Self {
        let mut counts = vec![0; n];
        counts[0] = n as u32;
        CycleStructure { counts }
    }

    pub fn degree(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Number of `len`-cycles.
    pub fn count(&self, len: usize) -> u32 {
        self.counts[len - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.counts[0] as usize == self.degree()
    }

    /// Cycle lengths in non-increasing order, e.g. `[2, 2, 1]` for `(1,2,0,0,0)`.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for len in (1..=self.degree()).rev() {
            for _ in 0..self.count(len) {
                out.push(len);
            }
        }
        out
    }

    fn from_lengths(n: usize, lengths: &[usize]) -> Self {
        let mut counts = vec![0u32; n];
        for &l in lengths {
            counts[l - 1] += 1;
        }
        CycleStructure { counts }
    }

    /// Every cycle structure of degree `n`, longest cycles first
    /// (e.g. `(0,0,1)`, `(1,1,0)`, `(3,0,0)` for `n = 3`).
    pub fn all(n: usize) -> Vec<CycleStructure> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest == 0 {
                out.push(cur.clone());
                return;
            }
            for part in (1..=max.min(rest)).rev() {
                cur.push(part);
                rec(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut parts = Vec::new();
        rec(n, n, &mut Vec::new(), &mut parts);
        parts.iter().map(|p| Self::from_lengths(n, p)).collect()
    }

    /// Number of permutations of `S_n` with this structure:
    /// `n! / Π_i (i^{l_i} · l_i!)`.
    pub fn class_size(&self) -> u64 {
        let n = self.degree() as u64;
        let mut num: u128 = (1..=n as u128).product();
        for (i, &c) in self.counts.iter().enumerate() {
            let len = (i + 1) as u128;
            num /= len.pow(c) * (1..=c as u128).product::<u128>();
        }
        num as u64
    }

    /// The permutation whose canonical cycles are consecutive blocks of
    /// `[n]`, longest first: `(1,2,0,0,0)` gives `(1 2)(3 4)(5)`.
    pub fn canonical_representative(&self) -> Permutation {
        let n = self.degree();
        let mut images = vec![0u8; n];
        let mut start = 0;
        for len in self.cycle_lengths() {
            for k in 0..len {
                images[start + k] = (start + (k + 1) % len) as u8;
            }
            start += len;
        }
        Permutation::from_images_unchecked(images)
    }

    /// All permutations with this structure, in lexicographic order of their
    /// image arrays. Walks `S_n`, so meant for `n <= 8`.
    pub fn permutations(&self) -> impl Iterator<Item = Permutation> + '_ {
        let mut cur = Some(Permutation::identity(self.degree()));
        std::iter::from_fn(move || loop {
            let p = cur.take()?;
            let mut next = p.clone();
            if next.next_lex() {
                cur = Some(next);
            }
            if p.cycle_structure() == *self {
                return Some(p);
            }
        })
    }

    /// Comma-separated counts, e.g. `"0,2,0,0"`.
    pub fn to_compact(&self) -> String {
        self.counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for CycleStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_compact())
    }
}

impl FromStr for CycleStructure {
    type Err = Error;

    /// Accepts `"0,2,0,0"` or `"(0,2,0,0)"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let counts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad cycle count {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CycleStructure::new(counts)
    }
}

/// `a ∘ b`.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    a.compose(b)
}

/// `s · a · s⁻¹`.
pub fn conjugate(s: &Permutation, a: &Permutation) -> Result<Permutation> {
    a.conjugate_by(s)
}

/// The permutation `a * b` sending the `j`-th entry of the `i`-th canonical
/// cycle of `a` to the `j`-th entry of the `i`-th canonical cycle of `b`.
/// Conjugating `a` by it yields `b`.
pub fn star_conjugator(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    check_degree(a, b)?;
    let (sa, sb) = (a.cycle_structure(), b.cycle_structure());
    if sa != sb {
        return Err(Error::StructureMismatch {
            left: sa.to_string(),
            right: sb.to_string(),
        });
    }
    let mut images = vec![0u8; a.degree()];
    let (ca, cb) = (a.canonical_cycles(), b.canonical_cycles());
    for (x, y) in ca.cycles().iter().zip(cb.cycles()) {
        for (&p, &q) in x.iter().zip(y) {
            images[p as usize] = q;
        }
    }
    Ok(Permutation::from_images_unchecked(images))
}

/// Number of permutations with cycle structure `l`.
pub fn count_with_structure(l: &CycleStructure) -> u64 {
    l.class_size()
}
