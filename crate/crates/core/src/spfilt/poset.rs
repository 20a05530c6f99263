use std::fmt;

use crate::error::{Error, Result};
use crate::ringkernel::PrimeIdeal;

/// Subsets of a poset as bitmasks.
pub type ElemSet = u64;

pub const MAX_ELEMENTS: usize = 64;

/// A finite poset, abstract or backed by a list of primes ordered by inclusion.
#[derive(Clone, Debug, PartialEq)]
pub struct FinPoset {
    names: Vec<String>,
    /// `le[i][j]`: `i ≤ j`.
    le: Vec<Vec<bool>>,
    /// `height[i][j]` for `i ≤ j`.
    height: Vec<Vec<usize>>,
    covers: Vec<(usize, usize)>,
    primes: Option<Vec<PrimeIdeal>>,
}

impl FinPoset {
    /// The order generated by `pairs` (`(a, b)` meaning `a < b`).
    pub fn new(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(Error::ResourceLimit(format!("posets are limited to {MAX_ELEMENTS} elements")));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Invalid(format!("element {a} listed twice")));
            }
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if le[i][j] && le[j][i] {
                    return Err(Error::Invalid(format!("{} and {} lie on a cycle", names[i], names[j])));
                }
            }
        }
        let covers = abstract_covers(&le);
        let height = chain_heights(&le, &covers);
        Ok(FinPoset { names, le, height, covers, primes: None })
    }

    /// Primes ordered by inclusion; covers are pairs of relative height one.
    pub fn from_primes(names: Vec<String>, primes: Vec<PrimeIdeal>) -> Result<Self> {
        let n = primes.len();
        if names.len() != n {
            return Err(Error::Invalid("one name per prime is required".into()));
        }
        let base = FinPoset::new(names.clone(), &[])?;
        let mut le = base.le;
        let mut height = vec![vec![0; n]; n];
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && primes[j].ideal().contains(primes[i].ideal())? {
                    if primes[i].ideal().contains(primes[j].ideal())? {
                        return Err(Error::Invalid(format!("{} and {} are the same prime", names[i], names[j])));
                    }
                    le[i][j] = true;
                    let h = primes[j].height_over(&primes[i])?;
                    height[i][j] = h;
                    if h == 1 {
                        covers.push((i, j));
                    }
                }
            }
        }
        Ok(FinPoset { names, le, height, covers, primes: Some(primes) })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn primes(&self) -> Option<&[PrimeIdeal]> {
        self.primes.as_deref()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le[i][j]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Longest chain from `i` up to `j` (relative height for ring-backed posets).
    pub fn height(&self, i: usize, j: usize) -> Option<usize> {
        self.le[i][j].then(|| self.height[i][j])
    }

    pub fn full(&self) -> ElemSet {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn is_up_closed(&self, s: ElemSet) -> bool {
        (0..self.len()).all(|i| s >> i & 1 == 0 || (0..self.len()).all(|j| !self.le[i][j] || s >> j & 1 == 1))
    }

    /// Every upward-closed subset, ascending as integers.
    pub fn up_sets(&self) -> Vec<ElemSet> {
        let n = self.len();
        if n > 20 {
            return Vec::new();
        }
        (0..(1u64 << n)).filter(|&s| self.is_up_closed(s)).collect()
    }

    pub fn fmt_set(&self, s: ElemSet) -> String {
        let names: Vec<&str> = (0..self.len()).filter(|&i| s >> i & 1 == 1).map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn parse_set(&self, s: &str) -> Result<ElemSet> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid(format!("expected {{...}}, found `{s}`")))?;
        let mut out = 0u64;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i = self.index(part).ok_or_else(|| Error::Invalid(format!("unknown element {part}")))?;
            out |= 1 << i;
        }
        Ok(out)
    }

    /// Parses `{ p < q; p < r; s; }` (chains `a < b < c` allowed).
    pub fn parse(body: &str) -> Result<FinPoset> {
        let inner = body
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid("poset body must be enclosed in { }".into()))?;
        let mut names: Vec<String> = Vec::new();
        let mut pairs = Vec::new();
        let id = |names: &mut Vec<String>, s: &str| -> Result<usize> {
            if s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                return Err(Error::Invalid(format!("bad element name `{s}`")));
            }
            Ok(match names.iter().position(|n| n == s) {
                Some(i) => i,
                None => {
                    names.push(s.to_string());
                    names.len() - 1
                }
            })
        };
        for stmt in inner.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let chain: Vec<&str> = stmt.split('<').map(str::trim).collect();
            let ids = chain.iter().map(|c| id(&mut names, c)).collect::<Result<Vec<_>>>()?;
            for w in ids.windows(2) {
                pairs.push((w[0], w[1]));
            }
        }
        FinPoset::new(names, &pairs)
    }

    /// `{ a < b; c; }` listing covers and isolated elements.
    pub fn display_body(&self) -> String {
        let mut parts: Vec<String> =
            self.covers.iter().map(|&(a, b)| format!("{} < {}", self.names[a], self.names[b])).collect();
        for i in 0..self.len() {
            if !self.covers.iter().any(|&(a, b)| a == i || b == i) {
                parts.push(self.names[i].clone());
            }
        }
        if parts.is_empty() {
            "{ }".into()
        } else {
            format!("{{ {}; }}", parts.join("; "))
        }
    }
}

impl fmt::Display for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_body())
    }
}

fn abstract_covers(le: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = le.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] && !(0..n).any(|k| k != i && k != j && le[i][k] && le[k][j]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn chain_heights(le: &[Vec<bool>], covers: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let n = le.len();
    let mut h = vec![vec![0usize; n]; n];
    // longest path along covers; elements sorted by the number of elements below
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| (0..n).filter(|&k| le[k][j]).count());
    for i in 0..n {
        for &j in &order {
            if i == j || !le[i][j] {
                continue;
            }
            let best =
                covers.iter().filter(|&&(a, b)| b == j && le[i][a]).map(|&(a, _)| h[i][a] + 1).max().unwrap_or(1);
            h[i][j] = best;
        }
    }
    h
}
