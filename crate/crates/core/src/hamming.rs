//! Hamming distance consensus: column majority, budgeted radius branching,
//! exact radius+sum search and the padding reduction from budgeted to plain
//! instances.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{BudgetedInstance, ConsensusAnswer, Instance, Metric, SearchStats, Symbol, Word};

/// Reserved pad symbols of [`pad_mixed`].
pub const PAD_ZERO: Symbol = Symbol('0');
pub const PAD_ONE: Symbol = Symbol('1');

pub fn hamming_distance(s: &Word, t: &Word) -> Result<usize> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    Ok(mismatches(s.symbols(), t.symbols()))
}

pub(crate) fn mismatches(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Most frequent symbol per column, ties going to the smaller symbol.
/// This is the lex-minimal optimum of the Hamming sum objective.
pub fn column_majority(inst: &Instance) -> Word {
    let symbols = (0..inst.n())
        .map(|p| {
            let mut counts: BTreeMap<Symbol, usize> = BTreeMap::new();
            for w in inst.words() {
                *counts.entry(w.at(p)).or_insert(0) += 1;
            }
            // max_by_key keeps the last maximum, so scan in descending order
            counts
                .into_iter()
                .rev()
                .max_by_key(|&(_, c)| c)
                .map(|(s, _)| s)
                .expect("non-empty column")
        })
        .collect();
    Word::from_vec_unchecked(symbols)
}

pub fn sum_consensus_ham(inst: &Instance) -> Result<ConsensusAnswer> {
    let start = Instant::now();
    let solution = column_majority(inst);
    let stats = SearchStats {
        elapsed: start.elapsed(),
        ..SearchStats::default()
    };
    ConsensusAnswer::certify(inst, solution, Metric::Hamming, stats)
}

/// Radius query with per-string consumed budgets: find `s*` with
/// `ham(s_i, s*) <= d - x_i` for every `i`.
#[derive(Debug, Clone)]
pub struct MixedRadiusQuery {
    pub budgeted: BudgetedInstance,
    pub d: usize,
}

impl MixedRadiusQuery {
    pub fn new(budgeted: BudgetedInstance, d: usize) -> Result<Self> {
        budgeted.check_radius(d)?;
        Ok(MixedRadiusQuery { budgeted, d })
    }

    pub fn plain(instance: Instance, d: usize) -> Self {
        MixedRadiusQuery {
            budgeted: BudgetedInstance::unbudgeted(instance),
            d,
        }
    }

    fn slacks(&self) -> Vec<usize> {
        self.budgeted.budgets.iter().map(|&x| self.d - x).collect()
    }
}

/// Radius plus sum query. `sum_bound` is the total `D`; the Hamming sum must
/// stay within `D - sum(x_s)`. Without a bound the minimum sum is reported.
#[derive(Debug, Clone)]
pub struct MixedRadiusSumQuery {
    pub budgeted: BudgetedInstance,
    pub d: usize,
    pub sum_bound: Option<usize>,
}

impl MixedRadiusSumQuery {
    pub fn new(budgeted: BudgetedInstance, d: usize, sum_bound: Option<usize>) -> Result<Self> {
        budgeted.check_radius(d)?;
        Ok(MixedRadiusSumQuery {
            budgeted,
            d,
            sum_bound,
        })
    }

    pub fn plain(instance: Instance, d: usize, sum_bound: Option<usize>) -> Self {
        MixedRadiusSumQuery {
            budgeted: BudgetedInstance::unbudgeted(instance),
            d,
            sum_bound,
        }
    }
}

struct RadiusSearch<'a> {
    words: Vec<&'a [Symbol]>,
    slack: Vec<usize>,
    root_slack: usize,
    nodes: u64,
}

impl RadiusSearch<'_> {
    /// Depth-first branching. `used` substitutions have been spent on the
    /// path from the root (the first word).
    fn branch(&mut self, cand: &mut [Symbol], used: usize) -> bool {
        debug_assert!(used <= self.root_slack);
        self.nodes += 1;
        let dists: Vec<usize> = self.words.iter().map(|w| mismatches(cand, w)).collect();
        // A solution below this node is within root_slack - used of cand.
        let reach = self.root_slack - used;
        if dists.iter().zip(&self.slack).any(|(&dj, &sj)| dj > reach + sj) {
            return false;
        }
        let Some(i) = (0..dists.len()).find(|&j| dists[j] > self.slack[j]) else {
            return true;
        };
        let target = self.words[i];
        let positions: Vec<usize> = (0..cand.len())
            .filter(|&p| cand[p] != target[p])
            .take(self.slack[i] + 1)
            .collect();
        for p in positions {
            let old = cand[p];
            cand[p] = target[p];
            if self.branch(cand, used + 1) {
                return true;
            }
            cand[p] = old;
        }
        false
    }
}

/// Bounded search tree for the budgeted radius problem.
///
/// The candidate starts at the first word. At every node the first word
/// violating its slack `d - x_i` is selected and the search branches on its
/// first `d - x_i + 1` mismatch positions, left to right, copying that
/// word's symbol. One of those positions must agree with any solution, so
/// each level brings some branch one step closer to it.
pub fn radius_consensus_ham_mixed(q: &MixedRadiusQuery) -> Result<ConsensusAnswer> {
    q.budgeted.check_radius(q.d)?;
    let start = Instant::now();
    let inst = &q.budgeted.instance;
    let slack = q.slacks();
    let mut search = RadiusSearch {
        words: inst.words().iter().map(|w| w.symbols()).collect(),
        root_slack: slack[0],
        slack,
        nodes: 0,
    };
    let mut cand = inst.words()[0].symbols().to_vec();
    let found = search.branch(&mut cand, 0);
    let stats = SearchStats {
        nodes_expanded: search.nodes,
        elapsed: start.elapsed(),
        ..SearchStats::default()
    };
    if !found {
        return Ok(ConsensusAnswer::infeasible(
            format!("no word within the budgeted radius {}", q.d),
            stats,
        ));
    }
    let answer = ConsensusAnswer::certify(inst, Word::from_vec_unchecked(cand), Metric::Hamming, stats)?;
    for (i, (&dist, &x)) in answer.per_string_distances.iter().zip(&q.budgeted.budgets).enumerate() {
        if dist + x > q.d {
            return Err(Error::CertificationFailure(format!(
                "word {} at distance {dist} exceeds slack {}",
                i + 1,
                q.d - x
            )));
        }
    }
    Ok(answer)
}

struct SumSearch<'a> {
    words: Vec<&'a [Symbol]>,
    columns: Vec<Vec<Symbol>>,
    /// Lower bound on the sum contributed by columns `p..`.
    suffix_lb: Vec<usize>,
    slack: Vec<usize>,
    mism: Vec<usize>,
    prefix: Vec<Symbol>,
    best: Option<(usize, Vec<Symbol>)>,
    /// Exclusive upper bound on an acceptable sum.
    limit: usize,
    nodes: u64,
}

impl SumSearch<'_> {
    fn dfs(&mut self, p: usize, sum: usize) {
        self.nodes += 1;
        let cutoff = self.best.as_ref().map_or(self.limit, |(b, _)| *b);
        if sum + self.suffix_lb[p] >= cutoff {
            return;
        }
        if p == self.columns.len() {
            self.best = Some((sum, self.prefix.clone()));
            return;
        }
        for ci in 0..self.columns[p].len() {
            let c = self.columns[p][ci];
            let mut added = 0;
            let mut ok = true;
            for j in 0..self.words.len() {
                if self.words[j][p] != c {
                    self.mism[j] += 1;
                    added += 1;
                    ok &= self.mism[j] <= self.slack[j];
                }
            }
            if ok {
                self.prefix.push(c);
                self.dfs(p + 1, sum + added);
                self.prefix.pop();
            }
            for j in 0..self.words.len() {
                if self.words[j][p] != c {
                    self.mism[j] -= 1;
                }
            }
        }
    }
}

/// Exact budgeted radius+sum solver.
///
/// Only symbols occurring in a column are tried there: an absent symbol
/// mismatches every word, so the column majority is never worse. The
/// search walks words in lexicographic order with branch-and-bound on the
/// remaining slack of every word and on the column-majority lower bound of
/// the sum; the first word reaching the minimum sum is therefore the
/// lex-minimal optimum.
pub fn rs_consensus_ham_mixed(q: &MixedRadiusSumQuery) -> Result<ConsensusAnswer> {
    q.budgeted.check_radius(q.d)?;
    let start = Instant::now();
    let inst = &q.budgeted.instance;
    let total_x = q.budgeted.total_budget();
    let bound = match q.sum_bound {
        Some(d_sum) if d_sum < total_x => {
            let stats = SearchStats {
                elapsed: start.elapsed(),
                ..SearchStats::default()
            };
            return Ok(ConsensusAnswer::infeasible(
                format!("consumed budgets {total_x} already exceed the sum bound {d_sum}"),
                stats,
            ));
        }
        Some(d_sum) => Some(d_sum - total_x),
        None => None,
    };
    let n = inst.n();
    let k = inst.k();
    let columns: Vec<Vec<Symbol>> = (0..n).map(|p| inst.column(p).into_iter().collect()).collect();
    let mut suffix_lb = vec![0; n + 1];
    for p in (0..n).rev() {
        let best_count = columns[p]
            .iter()
            .map(|&c| inst.words().iter().filter(|w| w.at(p) == c).count())
            .max()
            .unwrap_or(k);
        suffix_lb[p] = suffix_lb[p + 1] + (k - best_count);
    }
    let mut search = SumSearch {
        words: inst.words().iter().map(|w| w.symbols()).collect(),
        columns,
        suffix_lb,
        slack: q.budgeted.budgets.iter().map(|&x| q.d - x).collect(),
        mism: vec![0; k],
        prefix: Vec::with_capacity(n),
        best: None,
        limit: bound.map_or(usize::MAX, |b| b + 1),
        nodes: 0,
    };
    search.dfs(0, 0);
    let stats = SearchStats {
        nodes_expanded: search.nodes,
        elapsed: start.elapsed(),
        ..SearchStats::default()
    };
    let Some((_, best)) = search.best else {
        let reason = match bound {
            Some(b) => format!("no word within radius {} with Hamming sum at most {b}", q.d),
            None => format!("no word within the budgeted radius {}", q.d),
        };
        return Ok(ConsensusAnswer::infeasible(reason, stats));
    };
    let answer = ConsensusAnswer::certify(inst, Word::from_vec_unchecked(best), Metric::Hamming, stats)?;
    let radius_ok = answer
        .per_string_distances
        .iter()
        .zip(&q.budgeted.budgets)
        .all(|(&dist, &x)| dist + x <= q.d);
    let sum_ok = bound.is_none_or(|b| answer.sum_distance <= b);
    if !(radius_ok && sum_ok) {
        return Err(Error::CertificationFailure(
            "radius+sum witness violates its bounds".into(),
        ));
    }
    Ok(answer)
}

/// Reduction from the budgeted problems to plain Hamming consensus.
///
/// With `x = max x_s`, every word `s` is emitted twice, as `s · (01)^x_s (00)^(x - x_s)`
/// and `s · (10)^x_s (00)^(x - x_s)`; first all `a`-padded copies, then all
/// `b`-padded ones. The radius stays `d`, a sum bound `D` becomes `2D`.
pub fn pad_mixed(
    budgeted: &BudgetedInstance,
    sum_bound: Option<usize>,
) -> Result<(Instance, Option<usize>)> {
    let inst = &budgeted.instance;
    for reserved in [PAD_ZERO, PAD_ONE] {
        if inst.contains_symbol(reserved) {
            return Err(Error::ReservedSymbolPresent(reserved));
        }
    }
    let x = budgeted.budgets.iter().copied().max().unwrap_or(0);
    let pad = |xs: usize, pair: [Symbol; 2]| -> Vec<Symbol> {
        let mut out = Vec::with_capacity(2 * x);
        for _ in 0..xs {
            out.extend_from_slice(&pair);
        }
        for _ in xs..x {
            out.extend_from_slice(&[PAD_ZERO, PAD_ZERO]);
        }
        out
    };
    let mut words = Vec::with_capacity(2 * inst.k());
    for pair in [[PAD_ZERO, PAD_ONE], [PAD_ONE, PAD_ZERO]] {
        for (w, &xs) in inst.words().iter().zip(&budgeted.budgets) {
            let mut syms = w.symbols().to_vec();
            syms.extend(pad(xs, pair));
            words.push(Word::from_vec_unchecked(syms));
        }
    }
    Ok((Instance::new(words)?, sum_bound.map(|d| 2 * d)))
}
