//! Enumeration oracles and Monte Carlo campaigns.
//!
//! The oracles compute exact averages by exhausting every random outcome, so
//! they can be compared against the closed forms in [`crate::formulas`] as
//! rationals. The campaigns derive every random stream from
//! `(master seed, trial index[, algorithm index])`, which makes the summary
//! independent of how trials are scheduled.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;
use crate::formulas::{self, ExactRational};
use crate::method::Method;
use crate::rng;
use crate::sorts::{self, PivotRule};
use crate::tournament::{self, pair_count, Cost, Ordering, Tournament};

pub const INSERTION_ORACLE_MAX_N: usize = 6;
pub const MERGE_ORACLE_MAX_GROUP: usize = 10;

/// Exact mean cost of the insertion heuristic over all `2^(n(n-1)/2)`
/// tournaments on `n` vertices, inserting in the fixed order `0, 1, ..., n-1`.
///
/// Under the uniform model a random insertion order is a relabelling of the
/// vertices, which leaves the tournament distribution unchanged, so fixing
/// the order does not change the average.
pub fn oracle_expected_insertion_cost(n: usize) -> Result<ExactRational> {
    if !(2..=INSERTION_ORACLE_MAX_N).contains(&n) {
        return Err(Error::InvalidIndex(format!(
            "insertion oracle needs 2 <= n <= {INSERTION_ORACLE_MAX_N}, got {n}"
        )));
    }
    let m = pair_count(n);
    let start = Ordering::identity(n);
    let mut total: u64 = 0;
    for mask in 0..(1u64 << m) {
        let t = Tournament::from_pair_mask(n, mask)?;
        total += sorts::insertion_from(&t, &start)?.cost;
    }
    Ok(BigRational::new(
        BigInt::from(total),
        BigInt::from(1u64) << m,
    ))
}

fn check_merge_indices(i: usize, j: usize, groups_of: usize) -> Result<()> {
    if groups_of == 0
        || groups_of > MERGE_ORACLE_MAX_GROUP
        || i == 0
        || j == 0
        || i > groups_of
        || j > groups_of
    {
        return Err(Error::InvalidIndex(format!(
            "need 1 <= i, j <= groups_of <= {MERGE_ORACLE_MAX_GROUP}, got i={i} j={j} groups_of={groups_of}"
        )));
    }
    Ok(())
}

/// One complete run of a merge of two runs of length `g`, where every head
/// comparison is decided by a coin.
struct MergePath {
    /// Merged output: `(false, p)` is the p-th vertex of the first run, `(true, p)` of the second (1-based).
    output: Vec<(bool, usize)>,
    /// Head comparisons as `(first pos, second pos, first run won)`.
    comparisons: Vec<(usize, usize, bool)>,
}

fn for_each_merge_path(g: usize, mut visit: impl FnMut(&MergePath)) {
    fn walk(g: usize, a: usize, b: usize, path: &mut MergePath, visit: &mut dyn FnMut(&MergePath)) {
        if a > g || b > g {
            let mark = path.output.len();
            path.output.extend((a..=g).map(|p| (false, p)));
            path.output.extend((b..=g).map(|p| (true, p)));
            visit(path);
            path.output.truncate(mark);
            return;
        }
        for first_wins in [true, false] {
            path.comparisons.push((a, b, first_wins));
            if first_wins {
                path.output.push((false, a));
                walk(g, a + 1, b, path, visit);
            } else {
                path.output.push((true, b));
                walk(g, a, b + 1, path, visit);
            }
            path.output.pop();
            path.comparisons.pop();
        }
    }
    let mut path = MergePath {
        output: Vec::new(),
        comparisons: Vec::new(),
    };
    walk(g, 1, 1, &mut path, &mut visit);
}

/// Probability that position `i` of the first run is compared with position
/// `j` of the second while merging two runs of length `groups_of`.
pub fn oracle_merge_comparison(i: usize, j: usize, groups_of: usize) -> Result<ExactRational> {
    check_merge_indices(i, j, groups_of)?;
    // Paths have at most 2g - 1 coins; weight each by 2^(longest - length).
    let longest = 2 * groups_of - 1;
    let mut hits: u64 = 0;
    for_each_merge_path(groups_of, |p| {
        if p.comparisons.iter().any(|&(a, b, _)| a == i && b == j) {
            hits += 1 << (longest - p.comparisons.len());
        }
    });
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(1u64) << longest,
    ))
}

/// Probability that the edge between position `i` of the first run and
/// position `j` of the second is backward after merging two runs of length
/// `groups_of`. If the pair was compared, the recorded coin fixes the edge;
/// otherwise the edge was never examined and both orientations are equally
/// likely.
pub fn oracle_backward_prob(i: usize, j: usize, groups_of: usize) -> Result<ExactRational> {
    check_merge_indices(i, j, groups_of)?;
    let longest = 2 * groups_of - 1;
    // Counted in units of 2^-(longest + 1) to leave room for the unexamined coin.
    let mut backward: u64 = 0;
    for_each_merge_path(groups_of, |p| {
        let weight = 1u64 << (longest - p.comparisons.len());
        let pos_a = p
            .output
            .iter()
            .position(|&x| x == (false, i))
            .expect("every vertex is output");
        let pos_b = p
            .output
            .iter()
            .position(|&x| x == (true, j))
            .expect("every vertex is output");
        let is_backward = |a_beats_b: bool| {
            if a_beats_b {
                pos_a > pos_b
            } else {
                pos_b > pos_a
            }
        };
        match p.comparisons.iter().find(|&&(a, b, _)| a == i && b == j) {
            Some(&(_, _, first_won)) => {
                if is_backward(first_won) {
                    backward += 2 * weight;
                }
            }
            None => {
                backward += weight * (is_backward(true) as u64 + is_backward(false) as u64);
            }
        }
    });
    Ok(BigRational::new(
        BigInt::from(backward),
        BigInt::from(1u64) << (longest + 1),
    ))
}

/// One oracle-versus-closed-form comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub formula: ExactRational,
    pub oracle: ExactRational,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.formula == self.oracle
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let float = |r: &ExactRational| r.to_f64().unwrap_or(f64::NAN);
        write!(
            f,
            "{} formula={} ({}) oracle={} ({}) {}",
            self.label,
            self.formula,
            float(&self.formula),
            self.oracle,
            float(&self.oracle),
            if self.passed() { "ok" } else { "MISMATCH" }
        )
    }
}

/// Insertion oracle against the closed form for `n = 2..=n_max`.
pub fn verify_insertion_total(n_max: usize) -> Result<Vec<Check>> {
    (2..=n_max)
        .map(|n| {
            Ok(Check {
                label: format!("n={n}"),
                formula: formulas::expected_total_backward(n as u64)?,
                oracle: oracle_expected_insertion_cost(n)?,
            })
        })
        .collect()
}

/// Comparison-probability oracle against the closed form for all `i, j <= groups_of`.
pub fn verify_merge_comparison(groups_of: usize) -> Result<Vec<Check>> {
    index_pairs(groups_of)
        .map(|(i, j)| {
            Ok(Check {
                label: format!("H({i},{j})"),
                formula: formulas::h_prob(i as u64, j as u64)?,
                oracle: oracle_merge_comparison(i, j, groups_of)?,
            })
        })
        .collect()
}

/// Backward-probability oracle against the double sum for all `i, j <= groups_of`,
/// then the identity `P(i,j) = (1 - H(i,j)) / 2` for all `i, j <= identity_max`.
pub fn verify_merge_backward(groups_of: usize, identity_max: usize) -> Result<Vec<Check>> {
    let mut checks = index_pairs(groups_of)
        .map(|(i, j)| {
            Ok(Check {
                label: format!("P({i},{j})"),
                formula: formulas::backward_prob(i as u64, j as u64)?,
                oracle: oracle_backward_prob(i, j, groups_of)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let two = ExactRational::from_integer(BigInt::from(2));
    for (i, j) in index_pairs(identity_max) {
        let (iu, ju) = (i as u64, j as u64);
        checks.push(Check {
            label: format!("P({i},{j}) vs (1-H)/2"),
            formula: formulas::backward_prob(iu, ju)?,
            oracle: (ExactRational::one() - formulas::h_prob(iu, ju)?) / &two,
        });
    }
    Ok(checks)
}

fn index_pairs(max: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=max).flat_map(move |i| (1..=max).map(move |j| (i, j)))
}

/// Random tournament ensemble for experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Model {
    Uniform,
    Transitive,
    /// Transitive with every edge flipped with probability `p`.
    Noisy(f64),
}

impl Model {
    pub fn flip_probability(self) -> f64 {
        match self {
            Model::Uniform => 0.5,
            Model::Transitive => 0.0,
            Model::Noisy(p) => p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Uniform => "uniform",
            Model::Transitive => "transitive",
            Model::Noisy(_) => "noisy",
        }
    }

    pub fn generate(self, n: usize, seed: u64) -> Result<Tournament> {
        match self {
            Model::Uniform => tournament::gen_uniform(n, seed),
            Model::Transitive => tournament::gen_transitive(n),
            Model::Noisy(p) => tournament::gen_noisy_transitive(n, p, seed),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Noisy(p) => write!(f, "noisy:{p}"),
            m => f.write_str(m.name()),
        }
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Model::Uniform),
            "transitive" => Ok(Model::Transitive),
            _ => {
                let p = s
                    .strip_prefix("noisy:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "unknown model {s:?}; expected uniform, transitive or noisy:P"
                        ))
                    })?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidProbability(p));
                }
                Ok(Model::Noisy(p))
            }
        }
    }
}

impl TryFrom<String> for Model {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Model> for String {
    fn from(m: Model) -> Self {
        m.to_string()
    }
}

fn default_parallel() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Method>,
    pub n: usize,
    pub model: Model,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub pivot: PivotRule,
    /// Also solve every instance exactly and report cost ratios.
    #[serde(default)]
    pub compare_exact: bool,
    /// Run trials on the rayon pool. The summary does not depend on this.
    #[serde(default = "default_parallel")]
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.n < 2 {
            return Err(Error::Config(format!("n must be >= 2, got {}", self.n)));
        }
        if let Model::Noisy(p) = self.model {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        let needs_exact = self.compare_exact || self.algorithms.contains(&Method::Exact);
        if needs_exact && self.n > exact::DP_MAX_N {
            return Err(Error::TooLarge {
                n: self.n,
                max: exact::DP_MAX_N,
                what: "exact comparison",
            });
        }
        Ok(())
    }

    fn method_index(m: Method) -> u64 {
        match m {
            Method::Heuristic(a) => a.index(),
            Method::Exact => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgoStats {
    pub method: Method,
    pub mean_cost: f64,
    /// Sample standard deviation over the square root of the trial count.
    pub stderr: f64,
    pub min: Cost,
    pub max: Cost,
    pub trials: u64,
    /// Mean and max of `cost / max(1, optimal cost)`, when exact comparison is on.
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    /// Mean of `cost - optimal cost`, when exact comparison is on.
    pub mean_excess: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub config: ExperimentConfig,
    pub per_algorithm: Vec<AlgoStats>,
}

struct Trial {
    costs: Vec<Cost>,
    optimal: Option<Cost>,
}

fn run_one(cfg: &ExperimentConfig, trial: u64) -> Result<Trial> {
    let t_seed = rng::derive(cfg.seed, &[trial]);
    let t = cfg.model.generate(cfg.n, t_seed)?;
    let optimal = if cfg.compare_exact {
        Some(exact::solve(&t)?.optimal_cost)
    } else {
        None
    };
    let costs = cfg
        .algorithms
        .iter()
        .map(|&m| match (m, optimal) {
            (Method::Exact, Some(opt)) => Ok(opt),
            _ => {
                let seed = rng::derive(cfg.seed, &[trial, ExperimentConfig::method_index(m)]);
                m.solve(&t, seed, cfg.pivot).map(|s| s.cost)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trial { costs, optimal })
}

/// Run every trial of `cfg` and summarize per algorithm.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<SummaryStats> {
    cfg.validate()?;
    let trials: Vec<Trial> = if cfg.parallel {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| run_one(cfg, i))
            .collect::<Result<_>>()?
    } else {
        (0..cfg.trials)
            .map(|i| run_one(cfg, i))
            .collect::<Result<_>>()?
    };
    let per_algorithm = cfg
        .algorithms
        .iter()
        .enumerate()
        .map(|(k, &method)| summarize(method, &trials, k))
        .collect();
    Ok(SummaryStats {
        config: cfg.clone(),
        per_algorithm,
    })
}

fn summarize(method: Method, trials: &[Trial], k: usize) -> AlgoStats {
    let count = trials.len() as u64;
    let costs = trials.iter().map(|t| t.costs[k]);
    let sum: u64 = costs.clone().sum();
    let mean = sum as f64 / count as f64;
    let var = if count > 1 {
        costs
            .clone()
            .map(|c| (c as f64 - mean).powi(2))
            .sum::<f64>()
            / (count - 1) as f64
    } else {
        0.0
    };
    let (mut mean_ratio, mut max_ratio, mut mean_excess) = (None, None, None);
    if trials.iter().all(|t| t.optimal.is_some()) {
        let ratios: Vec<f64> = trials
            .iter()
            .map(|t| t.costs[k] as f64 / t.optimal.unwrap_or(0).max(1) as f64)
            .collect();
        mean_ratio = Some(ratios.iter().sum::<f64>() / count as f64);
        max_ratio = ratios.iter().copied().reduce(f64::max);
        let excess: u64 = trials
            .iter()
            .map(|t| t.costs[k] - t.optimal.unwrap_or(0))
            .sum();
        mean_excess = Some(excess as f64 / count as f64);
    }
    AlgoStats {
        method,
        mean_cost: mean,
        stderr: (var / count as f64).sqrt(),
        min: costs.clone().min().unwrap_or(0),
        max: costs.max().unwrap_or(0),
        trials: count,
        mean_ratio,
        max_ratio,
        mean_excess,
    }
}

/// [`run_trials`] with exact comparison forced on.
pub fn approximation_report(cfg: &ExperimentConfig) -> Result<SummaryStats> {
    let cfg = ExperimentConfig {
        compare_exact: true,
        ..cfg.clone()
    };
    run_trials(&cfg)
}

pub const CSV_HEADER: &str = "algo,n,model,p,trials,seed,mean_cost,stderr,min,max,mean_ratio";

impl SummaryStats {
    /// CSV rows (without header), one per algorithm.
    pub fn csv_rows(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        for a in &self.per_algorithm {
            let ratio = a.mean_ratio.map(|r| r.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                a.method,
                c.n,
                c.model.name(),
                c.model.flip_probability(),
                a.trials,
                c.seed,
                a.mean_cost,
                a.stderr,
                a.min,
                a.max,
                ratio
            ));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows())
    }

    pub fn get(&self, method: Method) -> Option<&AlgoStats> {
        self.per_algorithm.iter().find(|a| a.method == method)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{backward_prob, expected_total_backward, h_prob, rational};
    use crate::sorts::Algorithm;

    #[test]
    fn insertion_oracle_small() {
        assert_eq!(oracle_expected_insertion_cost(2).unwrap(), rational(0, 1));
        assert_eq!(oracle_expected_insertion_cost(3).unwrap(), rational(1, 4));
        assert!(oracle_expected_insertion_cost(1).is_err());
        assert!(oracle_expected_insertion_cost(7).is_err());
    }

    #[test]
    fn insertion_oracle_matches_closed_form() {
        for n in 2..=6 {
            assert_eq!(
                oracle_expected_insertion_cost(n).unwrap(),
                expected_total_backward(n as u64).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn merge_oracle_examples() {
        assert_eq!(oracle_merge_comparison(1, 1, 3).unwrap(), rational(1, 1));
        assert_eq!(oracle_merge_comparison(1, 5, 5).unwrap(), rational(1, 16));
        assert_eq!(oracle_merge_comparison(2, 3, 3).unwrap(), rational(3, 8));
        assert_eq!(oracle_backward_prob(1, 1, 4).unwrap(), rational(0, 1));
        assert_eq!(oracle_backward_prob(1, 2, 2).unwrap(), rational(1, 4));
        assert!(oracle_merge_comparison(0, 1, 3).is_err());
        assert!(oracle_merge_comparison(4, 1, 3).is_err());
        assert!(oracle_backward_prob(1, 1, 11).is_err());
    }

    #[test]
    fn merge_oracles_match_formulas() {
        for g in 1..=6 {
            for i in 1..=g {
                for j in 1..=g {
                    let (iu, ju) = (i as u64, j as u64);
                    assert_eq!(
                        oracle_merge_comparison(i, j, g).unwrap(),
                        h_prob(iu, ju).unwrap(),
                        "H({i},{j}) g={g}"
                    );
                    assert_eq!(
                        oracle_backward_prob(i, j, g).unwrap(),
                        backward_prob(iu, ju).unwrap(),
                        "P({i},{j}) g={g}"
                    );
                }
            }
        }
    }

    #[test]
    fn verify_reports() {
        let t1 = verify_insertion_total(5).unwrap();
        assert_eq!(t1.len(), 4);
        assert!(t1.iter().all(Check::passed));
        assert_eq!(
            t1[1].to_string(),
            "n=3 formula=1/4 (0.25) oracle=1/4 (0.25) ok"
        );
        assert_eq!(verify_merge_comparison(5).unwrap().len(), 25);
        let t3 = verify_merge_backward(4, 12).unwrap();
        assert_eq!(t3.len(), 16 + 144);
        assert!(t3.iter().all(Check::passed));
        let bad = Check {
            label: "x".into(),
            formula: rational(1, 2),
            oracle: rational(1, 3),
        };
        assert!(bad.to_string().ends_with("MISMATCH"));
    }

    #[test]
    fn model_parsing() {
        assert_eq!("uniform".parse::<Model>().unwrap(), Model::Uniform);
        assert_eq!("noisy:0.25".parse::<Model>().unwrap(), Model::Noisy(0.25));
        assert!("noisy:2".parse::<Model>().is_err());
        assert!("noisy".parse::<Model>().is_err());
        assert_eq!(Model::Noisy(0.25).to_string(), "noisy:0.25");
    }

    fn cfg(model: Model) -> ExperimentConfig {
        ExperimentConfig {
            algorithms: Algorithm::ALL
                .iter()
                .map(|&a| Method::Heuristic(a))
                .collect(),
            n: 9,
            model,
            trials: 40,
            seed: 17,
            pivot: PivotRule::Random,
            compare_exact: false,
            parallel: true,
        }
    }

    #[test]
    fn transitive_trials_are_free() {
        let s = run_trials(&cfg(Model::Noisy(0.0))).unwrap();
        for a in &s.per_algorithm {
            assert_eq!((a.mean_cost, a.min, a.max, a.stderr), (0.0, 0, 0, 0.0));
        }
        let s = approximation_report(&cfg(Model::Transitive)).unwrap();
        for a in &s.per_algorithm {
            assert_eq!(a.mean_ratio, Some(0.0));
        }
    }

    #[test]
    fn schedule_independent() {
        let mut c = cfg(Model::Uniform);
        c.compare_exact = true;
        let par = run_trials(&c).unwrap();
        c.parallel = false;
        let seq = run_trials(&c).unwrap();
        assert_eq!(par.per_algorithm, seq.per_algorithm);
        assert_eq!(par.to_csv(), seq.to_csv());
    }

    #[test]
    fn stats_invariants() {
        let mut c = cfg(Model::Uniform);
        c.algorithms.push(Method::Exact);
        let s = approximation_report(&c).unwrap();
        for a in &s.per_algorithm {
            assert!(a.min as f64 <= a.mean_cost && a.mean_cost <= a.max as f64);
            assert!(a.stderr >= 0.0);
            assert!(a.mean_ratio.unwrap() >= 1.0 || a.max == 0);
        }
        let ex = s.get(Method::Exact).unwrap();
        assert_eq!(ex.mean_excess, Some(0.0));
        assert!(ex.max_ratio.unwrap() <= 1.0);
    }

    #[test]
    fn invalid_configs() {
        let mut c = cfg(Model::Uniform);
        c.trials = 0;
        assert!(run_trials(&c).is_err());
        let mut c = cfg(Model::Uniform);
        c.n = 1;
        assert!(run_trials(&c).is_err());
        let mut c = cfg(Model::Uniform);
        c.algorithms.clear();
        assert!(run_trials(&c).is_err());
        let mut c = cfg(Model::Uniform);
        c.n = 30;
        assert!(approximation_report(&c).is_err());
        let c = cfg(Model::Noisy(1.5));
        assert!(run_trials(&c).is_err());
    }

    #[test]
    fn csv_shape() {
        let s = run_trials(&cfg(Model::Uniform)).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let rows: Vec<_> = lines.collect();
        assert_eq!(rows.len(), 5);
        for r in rows {
            assert_eq!(r.split(',').count(), 11);
            assert!(r.ends_with(','));
        }
    }
}
