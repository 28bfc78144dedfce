//! Sorting-style heuristics for feedback arc set in tournaments.
//!
//! An edge `a -> b` is read as "`a` is smaller than `b`", so a heuristic tries
//! to place the tail of every edge before its head. Each heuristic is a pure
//! function of `(tournament, seed)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};
use crate::tournament::{Cost, Ordering, Tournament, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Insertion,
    Merge,
    Selection,
    Bubble,
    Quick,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Insertion,
        Algorithm::Merge,
        Algorithm::Selection,
        Algorithm::Bubble,
        Algorithm::Quick,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Insertion => "insertion",
            Algorithm::Merge => "merge",
            Algorithm::Selection => "selection",
            Algorithm::Bubble => "bubble",
            Algorithm::Quick => "quick",
        }
    }

    /// Stable index used when deriving per-algorithm random streams.
    pub fn index(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}

/// How [`pseudo_quick_sort`] picks its pivot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PivotRule {
    /// Uniform over the current group.
    #[default]
    Random,
    /// A vertex minimizing `|out - in|` inside the current group, ties uniform.
    MinImbalance,
}

impl fmt::Display for PivotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PivotRule::Random => "random",
            PivotRule::MinImbalance => "min-imbalance",
        })
    }
}

impl FromStr for PivotRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" | "uniform" => Ok(PivotRule::Random),
            "min-imbalance" => Ok(PivotRule::MinImbalance),
            _ => Err(Error::Config(format!("unknown pivot rule {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicResult {
    pub ordering: Ordering,
    pub cost: Cost,
    /// Swaps (insertion, bubble), head comparisons (merge), vertices scanned
    /// for the maximum out-degree (selection) or partition comparisons (quick).
    pub work: u64,
}

impl HeuristicResult {
    fn new(t: &Tournament, order: Vec<VertexId>, work: u64) -> Self {
        let cost = t.cost_of(&order);
        HeuristicResult {
            ordering: Ordering::from_vec_unchecked(order),
            cost,
            work,
        }
    }
}

/// Run `algo`; `pivot` only affects [`Algorithm::Quick`].
pub fn run(algo: Algorithm, t: &Tournament, seed: u64, pivot: PivotRule) -> HeuristicResult {
    match algo {
        Algorithm::Insertion => pseudo_insertion_sort(t, seed),
        Algorithm::Merge => pseudo_merge_sort(t, seed),
        Algorithm::Selection => pseudo_selection_sort(t, seed),
        Algorithm::Bubble => pseudo_bubble_sort(t, seed),
        Algorithm::Quick => pseudo_quick_sort(t, seed, pivot),
    }
}

fn shuffled(n: usize, rng: &mut StreamRng) -> Vec<VertexId> {
    let mut v: Vec<VertexId> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Shuffle the vertices, then insert them one at a time, moving each new
/// vertex left while the edge points from it to its left neighbour.
pub fn pseudo_insertion_sort(t: &Tournament, seed: u64) -> HeuristicResult {
    let start = shuffled(t.n(), &mut rng::stream(seed));
    insertion_trace(t, start)
}

/// The deterministic insertion pass starting from a given vertex order.
pub fn insertion_from(t: &Tournament, start: &Ordering) -> Result<HeuristicResult> {
    t.check_order(start)?;
    Ok(insertion_trace(t, start.as_slice().to_vec()))
}

fn insertion_trace(t: &Tournament, mut v: Vec<VertexId>) -> HeuristicResult {
    let mut swaps = 0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && t.beats(v[j], v[j - 1]) {
            v.swap(j, j - 1);
            swaps += 1;
            j -= 1;
        }
    }
    HeuristicResult::new(t, v, swaps)
}

/// Split the vertices into random halves of sizes `floor(n/2)` and
/// `ceil(n/2)`, sort each recursively and merge them.
pub fn pseudo_merge_sort(t: &Tournament, seed: u64) -> HeuristicResult {
    let mut rng = rng::stream(seed);
    let mut work = 0;
    let order = merge_sort_group(t, (0..t.n()).collect(), &mut rng, &mut work);
    HeuristicResult::new(t, order, work)
}

fn merge_sort_group(
    t: &Tournament,
    mut group: Vec<VertexId>,
    rng: &mut StreamRng,
    work: &mut u64,
) -> Vec<VertexId> {
    if group.len() <= 1 {
        return group;
    }
    group.shuffle(rng);
    let second = group.split_off(group.len() / 2);
    let first = merge_sort_group(t, group, rng, work);
    let second = merge_sort_group(t, second, rng, work);
    merge_runs(t, &first, &second, work)
}

/// Merge two sequences by repeatedly emitting the tail of the edge between
/// the two heads. Once either side is exhausted the other is appended as is.
/// Every head comparison increments `work`.
pub fn merge_runs(
    t: &Tournament,
    first: &[VertexId],
    second: &[VertexId],
    work: &mut u64,
) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(first.len() + second.len());
    let (mut a, mut b) = (0, 0);
    while a < first.len() && b < second.len() {
        *work += 1;
        if t.beats(first[a], second[b]) {
            out.push(first[a]);
            a += 1;
        } else {
            out.push(second[b]);
            b += 1;
        }
    }
    out.extend_from_slice(&first[a..]);
    out.extend_from_slice(&second[b..]);
    out
}

/// Repeatedly emit a vertex of maximum out-degree within the vertices not yet
/// emitted, choosing uniformly among ties.
pub fn pseudo_selection_sort(t: &Tournament, seed: u64) -> HeuristicResult {
    let n = t.n();
    let mut rng = rng::stream(seed);
    let mut remaining: Vec<VertexId> = (0..n).collect();
    let mut out_deg: Vec<usize> = (0..n).map(|v| t.out_degree(v)).collect();
    let mut order = Vec::with_capacity(n);
    let mut scans = 0;
    let mut ties = Vec::new();
    while !remaining.is_empty() {
        scans += remaining.len() as u64;
        let best = remaining.iter().map(|&v| out_deg[v]).max().unwrap_or(0);
        ties.clear();
        ties.extend((0..remaining.len()).filter(|&i| out_deg[remaining[i]] == best));
        let pick = ties[rng.gen_range(0..ties.len())];
        let v = remaining.remove(pick);
        for &u in &remaining {
            if t.beats(u, v) {
                out_deg[u] -= 1;
            }
        }
        order.push(v);
    }
    HeuristicResult::new(t, order, scans)
}

/// Shuffle the vertices, then make adjacent-swap passes until a pass changes nothing.
pub fn pseudo_bubble_sort(t: &Tournament, seed: u64) -> HeuristicResult {
    let start = shuffled(t.n(), &mut rng::stream(seed));
    bubble_trace(t, start)
}

/// Bubble passes starting from a given vertex order.
pub fn bubble_from(t: &Tournament, start: &Ordering) -> Result<HeuristicResult> {
    t.check_order(start)?;
    Ok(bubble_trace(t, start.as_slice().to_vec()))
}

fn bubble_trace(t: &Tournament, mut v: Vec<VertexId>) -> HeuristicResult {
    let mut swaps = 0;
    loop {
        let mut swapped = false;
        for i in 0..v.len().saturating_sub(1) {
            if t.beats(v[i + 1], v[i]) {
                v.swap(i, i + 1);
                swaps += 1;
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    HeuristicResult::new(t, v, swaps)
}

/// Pick a pivot, put every vertex that beats it before it and every vertex it
/// beats after it, and recurse on both sides.
pub fn pseudo_quick_sort(t: &Tournament, seed: u64, rule: PivotRule) -> HeuristicResult {
    let mut rng = rng::stream(seed);
    let mut order = Vec::with_capacity(t.n());
    let mut work = 0;
    quick_group(
        t,
        (0..t.n()).collect(),
        rule,
        &mut rng,
        &mut order,
        &mut work,
    );
    HeuristicResult::new(t, order, work)
}

fn quick_group(
    t: &Tournament,
    group: Vec<VertexId>,
    rule: PivotRule,
    rng: &mut StreamRng,
    out: &mut Vec<VertexId>,
    work: &mut u64,
) {
    if group.len() <= 1 {
        out.extend(group);
        return;
    }
    let pivot = choose_pivot(t, &group, rule, rng);
    let (before, after) = partition(t, &group, pivot);
    *work += group.len() as u64 - 1;
    quick_group(t, before, rule, rng, out, work);
    out.push(pivot);
    quick_group(t, after, rule, rng, out, work);
}

fn choose_pivot(
    t: &Tournament,
    group: &[VertexId],
    rule: PivotRule,
    rng: &mut StreamRng,
) -> VertexId {
    match rule {
        PivotRule::Random => group[rng.gen_range(0..group.len())],
        PivotRule::MinImbalance => {
            let k = group.len() as i64;
            let imbalance: Vec<i64> = group
                .iter()
                .map(|&v| {
                    let out = group.iter().filter(|&&u| u != v && t.beats(v, u)).count() as i64;
                    (2 * out - (k - 1)).abs()
                })
                .collect();
            let best = *imbalance.iter().min().expect("non-empty group");
            let ties: Vec<VertexId> = group
                .iter()
                .zip(&imbalance)
                .filter(|(_, &d)| d == best)
                .map(|(&v, _)| v)
                .collect();
            ties[rng.gen_range(0..ties.len())]
        }
    }
}

/// Split `group` (which contains `pivot`) into the vertices beating the pivot
/// and the vertices it beats, each keeping its relative order from `group`.
pub fn partition(
    t: &Tournament,
    group: &[VertexId],
    pivot: VertexId,
) -> (Vec<VertexId>, Vec<VertexId>) {
    group
        .iter()
        .filter(|&&u| u != pivot)
        .partition(|&&u| t.beats(u, pivot))
}
