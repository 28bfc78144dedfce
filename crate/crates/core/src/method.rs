use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;
use crate::sorts::{self, Algorithm, PivotRule};
use crate::tournament::{Cost, Ordering, Tournament};

/// A heuristic or the exact solver, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    Heuristic(Algorithm),
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub ordering: Ordering,
    pub cost: Cost,
    pub work: u64,
}

impl Method {
    pub fn solve(self, t: &Tournament, seed: u64, pivot: PivotRule) -> Result<Solution> {
        match self {
            Method::Heuristic(a) => {
                let r = sorts::run(a, t, seed, pivot);
                Ok(Solution {
                    ordering: r.ordering,
                    cost: r.cost,
                    work: r.work,
                })
            }
            Method::Exact => {
                let r = exact::solve(t)?;
                Ok(Solution {
                    ordering: r.optimal_ordering,
                    cost: r.optimal_cost,
                    work: 0,
                })
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Heuristic(a) => a.fmt(f),
            Method::Exact => f.write_str("exact"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            Ok(Method::Exact)
        } else {
            s.parse().map(Method::Heuristic)
        }
    }
}

impl TryFrom<String> for Method {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> Self {
        m.to_string()
    }
}
