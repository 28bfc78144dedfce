//! Rank aggregation: ballots to majority tournament, and Kendall tau scoring.
//!
//! Ballot text format: one ballot per line, whitespace-separated candidate
//! names, best first. Blank lines and `#` comments are ignored. Candidate ids
//! follow the order of the first ballot.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::method::Method;
use crate::rng;
use crate::sorts::PivotRule;
use crate::tournament::{Cost, Ordering, Tournament, VertexId};

/// A total order over the candidates, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    ranking: Vec<VertexId>,
}

impl Ballot {
    pub fn new(ranking: Vec<VertexId>) -> Result<Self> {
        Ordering::new(ranking.clone()).map_err(|e| Error::Candidates(e.to_string()))?;
        Ok(Ballot { ranking })
    }

    pub fn ranking(&self) -> &[VertexId] {
        &self.ranking
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.ranking.len()];
        for (i, &c) in self.ranking.iter().enumerate() {
            pos[c] = i;
        }
        pos
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    candidates: Vec<String>,
    ballots: Vec<Ballot>,
}

impl Profile {
    /// Build from ballots given as candidate names.
    pub fn from_names<S: AsRef<str>>(ballots: &[Vec<S>]) -> Result<Self> {
        let first = ballots
            .first()
            .ok_or_else(|| Error::Candidates("no ballots".into()))?;
        let candidates: Vec<String> = first.iter().map(|s| s.as_ref().to_owned()).collect();
        let ids: HashMap<&str, VertexId> = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        if ids.len() != candidates.len() {
            return Err(Error::Candidates("ballot 1 repeats a candidate".into()));
        }
        let mut out = Vec::with_capacity(ballots.len());
        for (b, names) in ballots.iter().enumerate() {
            let ranking = names
                .iter()
                .map(|s| {
                    ids.get(s.as_ref()).copied().ok_or_else(|| {
                        Error::Candidates(format!(
                            "ballot {}: unknown candidate {:?}",
                            b + 1,
                            s.as_ref()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if ranking.len() != candidates.len() {
                return Err(Error::Candidates(format!(
                    "ballot {} ranks {} candidates, expected {}",
                    b + 1,
                    ranking.len(),
                    candidates.len()
                )));
            }
            let ballot = Ballot::new(ranking)
                .map_err(|_| Error::Candidates(format!("ballot {} repeats a candidate", b + 1)))?;
            out.push(ballot);
        }
        Ok(Profile {
            candidates,
            ballots: out,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ballots: Vec<Vec<&str>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split_whitespace().collect())
            .collect();
        Self::from_names(&ballots)
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.candidates.iter().position(|c| c == name)
    }

    pub fn names<'a>(&'a self, o: &Ordering) -> Vec<&'a str> {
        o.as_slice()
            .iter()
            .map(|&v| self.candidates[v].as_str())
            .collect()
    }

    /// Parse a ranking given as whitespace- or comma-separated names.
    pub fn ordering_from_names(&self, text: &str) -> Result<Ordering> {
        let ids = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                self.id(s)
                    .ok_or_else(|| Error::Candidates(format!("unknown candidate {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if ids.len() != self.candidates.len() {
            return Err(Error::Candidates(format!(
                "expected {} candidates, got {}",
                self.candidates.len(),
                ids.len()
            )));
        }
        Ordering::new(ids).map_err(|e| Error::Candidates(e.to_string()))
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// What to do when a pair of candidates is ranked each way equally often.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    Error,
    /// Fair coin per tied pair, drawn in pair order from this seed.
    Random(u64),
    /// The lexicographically smaller name wins.
    Lexicographic,
}

impl fmt::Display for TieRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieRule::Error => f.write_str("error"),
            TieRule::Random(_) => f.write_str("random"),
            TieRule::Lexicographic => f.write_str("lex"),
        }
    }
}

/// Edge `u -> v` iff strictly more ballots rank `u` above `v`.
pub fn majority_tournament(p: &Profile, tie: TieRule) -> Result<Tournament> {
    let k = p.candidates.len();
    // wins[u][v]: ballots ranking u above v
    let mut wins = vec![vec![0usize; k]; k];
    for b in &p.ballots {
        for (i, &u) in b.ranking.iter().enumerate() {
            for &v in &b.ranking[i + 1..] {
                wins[u][v] += 1;
            }
        }
    }
    let mut coins = match tie {
        TieRule::Random(seed) => Some(rng::stream(seed)),
        _ => None,
    };
    let mut err = None;
    let t = Tournament::from_fn(k, |u, v| {
        use std::cmp::Ordering::*;
        match wins[u][v].cmp(&wins[v][u]) {
            Greater => true,
            Less => false,
            Equal => match tie {
                TieRule::Error => {
                    err.get_or_insert_with(|| {
                        Error::Tie(p.candidates[u].clone(), p.candidates[v].clone())
                    });
                    true
                }
                TieRule::Random(_) => coins.as_mut().expect("seeded").gen_bool(0.5),
                TieRule::Lexicographic => p.candidates[u] < p.candidates[v],
            },
        }
    })
    .map_err(|_| Error::Candidates("no candidates".into()))?;
    match err {
        Some(e) => Err(e),
        None => Ok(t),
    }
}

/// Number of candidate pairs ordered oppositely by `o` and `b`.
pub fn kendall_tau(o: &Ordering, b: &Ballot) -> Result<Cost> {
    if o.len() != b.len() {
        return Err(Error::Candidates(format!(
            "ordering has {} candidates, ballot has {}",
            o.len(),
            b.len()
        )));
    }
    let pos = b.positions();
    let o = o.as_slice();
    let mut d = 0;
    for (i, &a) in o.iter().enumerate() {
        for &c in &o[i + 1..] {
            if pos[a] > pos[c] {
                d += 1;
            }
        }
    }
    Ok(d)
}

/// Sum of [`kendall_tau`] over all ballots of the profile.
pub fn total_kendall_tau(p: &Profile, o: &Ordering) -> Result<Cost> {
    p.ballots.iter().map(|b| kendall_tau(o, b)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregate {
    pub ordering: Ordering,
    /// Backward edges of `ordering` in the majority tournament.
    pub tournament_cost: Cost,
    pub total_kendall_tau: Cost,
}

/// Build the majority tournament and order it with `method`.
pub fn aggregate(
    p: &Profile,
    method: Method,
    seed: u64,
    pivot: PivotRule,
    tie: TieRule,
) -> Result<Aggregate> {
    let t = majority_tournament(p, tie)?;
    let s = method.solve(&t, seed, pivot)?;
    let total = total_kendall_tau(p, &s.ordering)?;
    Ok(Aggregate {
        ordering: s.ordering,
        tournament_cost: s.cost,
        total_kendall_tau: total,
    })
}
