//! Exact minimum feedback arc set orderings for small tournaments.
//!
//! Both solvers return the lexicographically smallest optimal ordering, so
//! their outputs are directly comparable.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tournament::{Cost, Ordering, Tournament};

pub const BRUTEFORCE_MAX_N: usize = 10;
pub const DP_MAX_N: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub optimal_ordering: Ordering,
    pub optimal_cost: Cost,
}

/// Enumerate all `n!` orderings in lexicographic order and keep the first minimizer.
pub fn solve_bruteforce(t: &Tournament) -> Result<ExactResult> {
    let n = t.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTEFORCE_MAX_N,
            what: "brute force",
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_cost = t.cost_of(&perm);
    while next_permutation(&mut perm) {
        let c = t.cost_of(&perm);
        if c < best_cost {
            best_cost = c;
            best.copy_from_slice(&perm);
        }
    }
    Ok(ExactResult {
        optimal_ordering: Ordering::from_vec_unchecked(best),
        optimal_cost: best_cost,
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Subset dynamic program.
///
/// `best[S]` is the minimum number of backward edges among the vertices of
/// `S` when they are arranged among themselves. Placing `v` first costs one
/// backward edge per `u` in `S \ {v}` with `u -> v`, so
/// `best[S] = min_v in_degree(v, S) + best[S \ {v}]`. The ordering is rebuilt
/// front to back taking the smallest `v` that attains the minimum, which
/// yields the lexicographically smallest optimum.
pub fn solve_dp(t: &Tournament) -> Result<ExactResult> {
    let n = t.n();
    if n > DP_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: DP_MAX_N,
            what: "subset DP",
        });
    }
    // in_mask[v]: vertices u with u -> v
    let in_mask: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v && t.beats(u, v))
                .fold(0, |m, u| m | 1 << u)
        })
        .collect();
    let full = (1u32 << n) - 1;
    let mut best = vec![0u16; 1 << n];

    // Subsets of equal size only read smaller subsets, so each layer can be
    // filled in parallel.
    let layers = subsets_by_size(n);
    for layer in layers.iter().skip(2) {
        let values: Vec<(u32, u16)> = layer
            .par_iter()
            .map(|&s| {
                let mut m = u16::MAX;
                let mut rest = s;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let without = s & !(1 << v);
                    let c = (in_mask[v] & without).count_ones() as u16 + best[without as usize];
                    m = m.min(c);
                }
                (s, m)
            })
            .collect();
        for (s, m) in values {
            best[s as usize] = m;
        }
    }

    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = (0..n)
            .filter(|&v| s >> v & 1 == 1)
            .find(|&v| {
                let without = s & !(1 << v);
                (in_mask[v] & without).count_ones() as u16 + best[without as usize]
                    == best[s as usize]
            })
            .expect("some vertex attains the minimum");
        order.push(v);
        s &= !(1 << v);
    }
    Ok(ExactResult {
        optimal_ordering: Ordering::from_vec_unchecked(order),
        optimal_cost: best[full as usize] as Cost,
    })
}

fn subsets_by_size(n: usize) -> Vec<Vec<u32>> {
    let mut layers = vec![Vec::new(); n + 1];
    for s in 0..(1u32 << n) {
        layers[s.count_ones() as usize].push(s);
    }
    layers
}

/// Exact solve with whichever solver is cheaper for `n`.
pub fn solve(t: &Tournament) -> Result<ExactResult> {
    if t.n() <= 7 {
        solve_bruteforce(t)
    } else {
        solve_dp(t)
    }
}
