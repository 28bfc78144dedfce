//! Tournaments, orderings and backward-edge accounting.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Dense 0-based vertex index.
pub type VertexId = usize;

/// Number of backward edges of an ordering.
pub type Cost = u64;

/// `n(n-1)/2`.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A complete orientation on `n` vertices.
///
/// One bit per unordered pair `{u, v}` with `u < v`, stored upper-triangular
/// row by row; a set bit means the edge points `u -> v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    bits: Vec<u64>,
}

impl Tournament {
    fn blank(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(Tournament {
            n,
            bits: vec![0; pair_count(n).div_ceil(64)],
        })
    }

    /// Build from a predicate called once per pair `u < v`; `true` orients `u -> v`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(VertexId, VertexId) -> bool) -> Result<Self> {
        let mut t = Self::blank(n)?;
        let mut idx = 0;
        for u in 0..n {
            for v in u + 1..n {
                if forward(u, v) {
                    t.bits[idx / 64] |= 1 << (idx % 64);
                }
                idx += 1;
            }
        }
        Ok(t)
    }

    /// Build from the low `n(n-1)/2` bits of `mask` in pair order. Used by the
    /// enumeration oracles, so `n <= 11`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Result<Self> {
        let m = pair_count(n);
        if m > 64 {
            return Err(Error::TooLarge {
                n,
                max: 11,
                what: "pair masks",
            });
        }
        let mut t = Self::blank(n)?;
        if m > 0 {
            t.bits[0] = if m == 64 { mask } else { mask & ((1 << m) - 1) };
        }
        Ok(t)
    }

    /// Build from an explicit edge list; every unordered pair must appear exactly once.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut t = Self::blank(n)?;
        let mut seen = vec![false; pair_count(n)];
        for (u, v) in edges {
            t.add_edge(&mut seen, u, v)
                .map_err(|msg| Error::Parse { line: 0, msg })?;
        }
        t.check_complete(&seen)
            .map_err(|msg| Error::Parse { line: 0, msg })?;
        Ok(t)
    }

    fn add_edge(
        &mut self,
        seen: &mut [bool],
        u: VertexId,
        v: VertexId,
    ) -> std::result::Result<(), String> {
        if u >= self.n || v >= self.n {
            return Err(format!(
                "edge {u} {v} references a vertex outside 0..{}",
                self.n
            ));
        }
        if u == v {
            return Err(format!("self-loop on vertex {u}"));
        }
        let idx = self.pair_index(u.min(v), u.max(v));
        if seen[idx] {
            return Err(format!(
                "duplicate edge for pair {{{}, {}}}",
                u.min(v),
                u.max(v)
            ));
        }
        seen[idx] = true;
        if u < v {
            self.bits[idx / 64] |= 1 << (idx % 64);
        }
        Ok(())
    }

    fn check_complete(&self, seen: &[bool]) -> std::result::Result<(), String> {
        if let Some(missing) = seen.iter().position(|s| !s) {
            let (u, v) = self.pair_at(missing);
            return Err(format!("missing edge for pair {{{u}, {v}}}"));
        }
        Ok(())
    }

    #[inline]
    fn pair_index(&self, u: usize, v: usize) -> usize {
        debug_assert!(u < v && v < self.n);
        u * (2 * self.n - u - 1) / 2 + (v - u - 1)
    }

    fn pair_at(&self, mut idx: usize) -> (usize, usize) {
        for u in 0..self.n {
            let row = self.n - u - 1;
            if idx < row {
                return (u, u + 1 + idx);
            }
            idx -= row;
        }
        unreachable!("pair index out of range")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        pair_count(self.n)
    }

    /// True iff the edge between distinct `u` and `v` points `u -> v`.
    #[inline]
    pub fn beats(&self, u: VertexId, v: VertexId) -> bool {
        debug_assert_ne!(u, v);
        if u < v {
            let i = self.pair_index(u, v);
            self.bits[i / 64] >> (i % 64) & 1 == 1
        } else {
            let i = self.pair_index(v, u);
            self.bits[i / 64] >> (i % 64) & 1 == 0
        }
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        (0..self.n).filter(|&u| u != v && self.beats(v, u)).count()
    }

    /// All edges `(from, to)`, pairs in lexicographic `(min, max)` order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).map(move |v| if self.beats(u, v) { (u, v) } else { (v, u) })
        })
    }

    pub(crate) fn check_order(&self, order: &Ordering) -> Result<()> {
        if order.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: order.len(),
            });
        }
        Ok(())
    }

    /// Backward-edge count of a slice known to be a permutation of the vertices.
    pub(crate) fn cost_of(&self, order: &[VertexId]) -> Cost {
        let mut cost = 0;
        for (i, &a) in order.iter().enumerate() {
            for &b in &order[i + 1..] {
                if self.beats(b, a) {
                    cost += 1;
                }
            }
        }
        cost
    }

    /// Parse the text format: a `tournament <n>` header followed by one
    /// `<u> <v>` line per pair. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "empty input".into(),
        })?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["tournament", n] => n.parse::<usize>().map_err(|e| Error::Parse {
                line: hline,
                msg: format!("bad vertex count: {e}"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line: hline,
                    msg: "expected `tournament <n>`".into(),
                })
            }
        };
        let mut t = Self::blank(n)?;
        let mut seen = vec![false; pair_count(n)];
        for (line, l) in lines {
            let fields: Vec<&str> = l.split_whitespace().collect();
            let [u, v] = fields.as_slice() else {
                return Err(Error::Parse {
                    line,
                    msg: "expected `<u> <v>`".into(),
                });
            };
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line,
                    msg: format!("{s:?}: {e}"),
                })
            };
            let (u, v) = (parse(u)?, parse(v)?);
            t.add_edge(&mut seen, u, v)
                .map_err(|msg| Error::Parse { line, msg })?;
        }
        let last = text.lines().count();
        t.check_complete(&seen)
            .map_err(|msg| Error::Parse { line: last, msg })?;
        Ok(t)
    }

    /// Serialize to the text format accepted by [`Tournament::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("tournament {}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tournament")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Tournament {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// A permutation of `0..n`, earliest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Ordering(Vec<VertexId>);

impl Ordering {
    pub fn new(positions: Vec<VertexId>) -> Result<Self> {
        let n = positions.len();
        let mut seen = vec![false; n];
        for &v in &positions {
            if v >= n {
                return Err(Error::NotAPermutation(format!(
                    "vertex {v} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation(format!("vertex {v} appears twice")));
            }
        }
        Ok(Ordering(positions))
    }

    pub(crate) fn from_vec_unchecked(positions: Vec<VertexId>) -> Self {
        debug_assert!(Ordering::new(positions.clone()).is_ok());
        Ordering(positions)
    }

    pub fn identity(n: usize) -> Self {
        Ordering((0..n).collect())
    }

    pub fn reversed(&self) -> Self {
        Ordering(self.0.iter().rev().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }

    /// Parse a comma-separated list such as `0,2,1`.
    pub fn parse(s: &str) -> Result<Self> {
        let positions = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|e| Error::NotAPermutation(format!("{p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(positions)
    }
}

impl TryFrom<Vec<VertexId>> for Ordering {
    type Error = Error;
    fn try_from(v: Vec<VertexId>) -> Result<Self> {
        Ordering::new(v)
    }
}

impl From<Ordering> for Vec<VertexId> {
    fn from(o: Ordering) -> Self {
        o.0
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Ordering {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Number of pairs placed earlier-then-later in `order` whose edge points later -> earlier.
pub fn backward_count(t: &Tournament, order: &Ordering) -> Result<Cost> {
    t.check_order(order)?;
    Ok(t.cost_of(order.as_slice()))
}

/// The edges counted by [`backward_count`], each as `(from, to)` with `from`
/// placed after `to`. Sorted by the position of `to`, then of `from`.
pub fn backward_edges(t: &Tournament, order: &Ordering) -> Result<Vec<(VertexId, VertexId)>> {
    t.check_order(order)?;
    let o = order.as_slice();
    let mut out = Vec::new();
    for (i, &a) in o.iter().enumerate() {
        for &b in &o[i + 1..] {
            if t.beats(b, a) {
                out.push((b, a));
            }
        }
    }
    Ok(out)
}

/// True iff every adjacent pair points forward, i.e. no adjacent swap lowers the cost.
pub fn is_locally_minimal(t: &Tournament, order: &Ordering) -> Result<bool> {
    t.check_order(order)?;
    Ok(order.as_slice().windows(2).all(|w| t.beats(w[0], w[1])))
}

/// Uniform random tournament: each pair oriented by an independent fair coin.
pub fn gen_uniform(n: usize, seed: u64) -> Result<Tournament> {
    let mut t = Tournament::blank(n)?;
    let mut r = rng::stream(seed);
    for w in t.bits.iter_mut() {
        *w = r.next_u64();
    }
    let m = pair_count(n);
    if !m.is_multiple_of(64) {
        if let Some(last) = t.bits.last_mut() {
            *last &= (1 << (m % 64)) - 1;
        }
    }
    Ok(t)
}

/// Edge `i -> j` iff `i < j`.
pub fn gen_transitive(n: usize) -> Result<Tournament> {
    Tournament::from_fn(n, |_, _| true)
}

/// [`gen_transitive`] with every edge flipped independently with probability `p`.
pub fn gen_noisy_transitive(n: usize, p: f64, seed: u64) -> Result<Tournament> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut r = rng::stream(seed);
    Tournament::from_fn(n, |_, _| !r.gen_bool(p))
}
