//! Shared data model: symbols, words, instances and solver answers.
//!
//! Positions are 0-based in code. Everything user-facing (diagnostics, CLI
//! output, interval bounds) is 1-based.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::{hamming, sh_metric, swap};

/// One letter of the alphabet. Ordered by code point; that order drives all
/// lexicographic tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub char);

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<char> for Symbol {
    fn from(c: char) -> Self {
        Symbol(c)
    }
}

/// A non-empty, fixed-length sequence of symbols.
///
/// The derived `Ord` is the lexicographic order; words compared by the solvers
/// always share a length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(symbols))
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    /// Symbol at 0-based position `i`.
    pub fn at(&self, i: usize) -> Symbol {
        self.0[i]
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.0.contains(&s)
    }

    /// The 0-based half-open slice `range` as a new word.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Word> {
        Word::new(self.0[range].to_vec())
    }

    pub(crate) fn from_vec_unchecked(symbols: Vec<Symbol>) -> Word {
        debug_assert!(!symbols.is_empty());
        Word(symbols)
    }

    pub(crate) fn symbols_mut(&mut self) -> &mut [Symbol] {
        &mut self.0
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::new(s.chars().map(Symbol).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.0)?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Letter counts of a word.
pub fn multiset_signature(w: &Word) -> BTreeMap<Symbol, usize> {
    let mut counts = BTreeMap::new();
    for &s in w.symbols() {
        *counts.entry(s).or_insert(0) += 1;
    }
    counts
}

/// `k >= 1` words of a common length `n`, plus the alphabet they use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    words: Vec<Word>,
    alphabet: BTreeSet<Symbol>,
}

impl Instance {
    pub fn new(words: Vec<Word>) -> Result<Self> {
        let first = words.first().ok_or(Error::EmptyInstance)?;
        let n = first.len();
        for (i, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(Error::UnequalLengths {
                    line: i + 1,
                    expected: n,
                    found: w.len(),
                });
            }
        }
        let alphabet = words
            .iter()
            .flat_map(|w| w.symbols().iter().copied())
            .collect();
        Ok(Instance { words, alphabet })
    }

    /// Convenience constructor for literals, mostly used by tests.
    pub fn from_strs<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        let words = words
            .iter()
            .map(|w| w.as_ref().parse())
            .collect::<Result<Vec<Word>>>()?;
        Instance::new(words)
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    /// Number of words.
    pub fn k(&self) -> usize {
        self.words.len()
    }

    /// Common word length.
    pub fn n(&self) -> usize {
        self.words[0].len()
    }

    /// The distinct symbols of 0-based column `p`, ascending.
    pub fn column(&self, p: usize) -> BTreeSet<Symbol> {
        self.words.iter().map(|w| w.at(p)).collect()
    }

    pub fn contains_symbol(&self, s: Symbol) -> bool {
        self.alphabet.contains(&s)
    }
}

/// Parses the instance file format: one word per line, `#` starts a comment
/// line, blank lines are ignored. Surrounding whitespace is not part of a word.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut words = Vec::new();
    let mut expected = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let word: Word = line.parse()?;
        match expected {
            None => expected = Some(word.len()),
            Some(n) if n != word.len() => {
                return Err(Error::UnequalLengths {
                    line: idx + 1,
                    expected: n,
                    found: word.len(),
                })
            }
            Some(_) => {}
        }
        words.push(word);
    }
    Instance::new(words)
}

/// Inverse of [`parse_instance`] (comments and blank lines are not kept).
pub fn format_instance(inst: &Instance) -> String {
    let mut out = String::new();
    for w in inst.words() {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}

/// An instance with one consumed budget `x_s` per word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetedInstance {
    pub instance: Instance,
    pub budgets: Vec<usize>,
}

impl BudgetedInstance {
    pub fn new(instance: Instance, budgets: Vec<usize>) -> Result<Self> {
        if budgets.len() != instance.k() {
            return Err(Error::BudgetCount {
                expected: instance.k(),
                found: budgets.len(),
            });
        }
        Ok(BudgetedInstance { instance, budgets })
    }

    pub fn unbudgeted(instance: Instance) -> Self {
        let budgets = vec![0; instance.k()];
        BudgetedInstance { instance, budgets }
    }

    pub fn total_budget(&self) -> usize {
        self.budgets.iter().sum()
    }

    /// Fails unless every budget is at most `radius`.
    pub fn check_radius(&self, radius: usize) -> Result<()> {
        match self.budgets.iter().position(|&x| x > radius) {
            Some(index) => Err(Error::BudgetExceedsRadius {
                index: index + 1,
                budget: self.budgets[index],
                radius,
            }),
            None => Ok(()),
        }
    }
}

/// The three distances of the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Hamming,
    Swap,
    SwapHamming,
}

impl Metric {
    /// `None` stands for an infinite distance (only possible for `Swap`).
    pub fn distance(self, a: &Word, b: &Word) -> Result<Option<usize>> {
        match self {
            Metric::Hamming => hamming::hamming_distance(a, b).map(Some),
            Metric::Swap => {
                if a.len() != b.len() {
                    return Err(Error::LengthMismatch {
                        left: a.len(),
                        right: b.len(),
                    });
                }
                Ok(swap::swap_distance(a, b))
            }
            Metric::SwapHamming => sh_metric::sh_distance(a, b).map(|(c, _)| Some(c)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub dp_states: u64,
    pub oracle_enumerated: u64,
    /// Deepest node of a bounded search tree.
    pub max_depth: u64,
    /// Largest number of table states stored for one row.
    pub max_row_states: u64,
    #[serde(rename = "elapsed_us", serialize_with = "serialize_micros")]
    pub elapsed: Duration,
}

fn serialize_micros<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_micros())
}

/// Outcome of a consensus solver.
///
/// Distances of a feasible answer are always recomputed from the solution by
/// [`ConsensusAnswer::certify`]; nothing is copied from search state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsensusAnswer {
    pub status: Status,
    pub solution: Option<Word>,
    pub per_string_distances: Vec<usize>,
    pub max_distance: usize,
    pub sum_distance: usize,
    pub stats: SearchStats,
    pub reason: Option<String>,
}

impl ConsensusAnswer {
    /// Builds a feasible answer, recomputing every distance under `metric`.
    /// An infinite distance is a certification failure.
    pub fn certify(
        inst: &Instance,
        solution: Word,
        metric: Metric,
        stats: SearchStats,
    ) -> Result<Self> {
        let mut per = Vec::with_capacity(inst.k());
        for (i, w) in inst.words().iter().enumerate() {
            match metric.distance(w, &solution)? {
                Some(d) => per.push(d),
                None => {
                    return Err(Error::CertificationFailure(format!(
                        "witness {solution} does not match input word {}",
                        i + 1
                    )))
                }
            }
        }
        Ok(ConsensusAnswer {
            status: Status::Feasible,
            max_distance: per.iter().copied().max().unwrap_or(0),
            sum_distance: per.iter().sum(),
            per_string_distances: per,
            solution: Some(solution),
            stats,
            reason: None,
        })
    }

    pub fn infeasible(reason: impl Into<String>, stats: SearchStats) -> Self {
        ConsensusAnswer {
            status: Status::Infeasible,
            solution: None,
            per_string_distances: Vec::new(),
            max_distance: 0,
            sum_distance: 0,
            stats,
            reason: Some(reason.into()),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    /// Turns a feasible answer into an infeasible one when its sum exceeds `bound`.
    pub fn with_sum_bound(self, bound: Option<usize>) -> Self {
        match bound {
            Some(b) if self.is_feasible() && self.sum_distance > b => ConsensusAnswer::infeasible(
                format!("minimum sum {} exceeds bound {b}", self.sum_distance),
                self.stats,
            ),
            _ => self,
        }
    }
}
