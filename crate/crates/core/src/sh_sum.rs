//! Exact sum consensus under the Swap+Hamming distance.
//!
//! Dynamic program over rows `i = 0..n-1`. A row-`i` state is a prefix `t`
//! of length `i + 1` together with the swap set `W`: the input words that
//! (greedily) swap with `t` at positions `i, i + 1` (1-based). Per `(i, W)`
//! only the cheapest prefix is kept, ties going to the lex-smaller one.
//!
//! The future cost of a prefix only depends on `W` and its last symbol. When
//! `W` is non-empty the last two symbols are fixed by `W`; when `W` is empty
//! the last symbol is the column-majority symbol, because in the lex-minimal
//! optimum every position untouched by swaps carries the majority symbol.
//! Prefixes whose last symbol starts a swap are built two symbols at a time
//! from the row before.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hamming::column_majority;
use crate::model::{ConsensusAnswer, Instance, Metric, SearchStats, Symbol, Word};
use crate::sh_metric::{greedy_swaps, sh_cost};

/// Sorted 1-based indices of input words. Ordered lexicographically by the
/// index vector, so `∅ < {1} < {1,2} < {2}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SwapSet(Vec<usize>);

impl SwapSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        SwapSet(members)
    }

    fn from_mask(mask: &[bool]) -> Self {
        SwapSet(
            mask.iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .map(|(j, _)| j + 1)
                .collect(),
        )
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for SwapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SwapSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Words of `inst` that swap with `t` at 1-based position `i` (positions
/// `i, i + 1`), swaps being taken greedily from the left on the aligned
/// prefixes.
pub fn swap_set(inst: &Instance, t: &Word, i: usize) -> Result<SwapSet> {
    let max = t.len().min(inst.n()).saturating_sub(1);
    if i == 0 || i > max {
        return Err(Error::OutOfRange { position: i, max });
    }
    let len = i + 1;
    let t = &t.symbols()[..len];
    let mask: Vec<bool> = inst
        .words()
        .iter()
        .map(|w| greedy_swaps(&w.symbols()[..len], t)[i - 1])
        .collect();
    Ok(SwapSet::from_mask(&mask))
}

/// How a stored state was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Origin {
    /// Row 0 or row 1, set directly.
    Init,
    /// One symbol appended that starts a swap with some word.
    Swap { from_row: usize, from_set: SwapSet, appended: String },
    /// The majority symbol appended, no swap.
    Majority { from_row: usize, from_set: SwapSet, appended: String },
    /// Two symbols appended: no swap at the first, swaps at the second.
    Pair { from_row: usize, from_set: SwapSet, appended: String },
}

/// A stored table entry `T[row, set]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DpState {
    pub row: usize,
    pub set: SwapSet,
    pub prefix: Word,
    /// Sum over the input words of the swap+Hamming distance between their
    /// length-`row + 1` prefixes and `prefix`.
    pub cost: usize,
    pub origin: Origin,
}

/// All states stored by one run, row by row, each row sorted by set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DpTable {
    pub majority: Word,
    pub rows: Vec<Vec<DpState>>,
}

impl DpTable {
    pub fn state_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, set: &SwapSet) -> Option<&DpState> {
        self.rows.get(row)?.iter().find(|s| &s.set == set)
    }

    /// Text rendering: one line per set, one column per row.
    pub fn render(&self) -> String {
        let mut sets: Vec<&SwapSet> = self.rows.iter().flatten().map(|s| &s.set).collect();
        sets.sort();
        sets.dedup();
        let cell = |row: usize, set: &SwapSet| -> String {
            match self.get(row, set) {
                None => String::new(),
                Some(st) => {
                    let how = match &st.origin {
                        Origin::Init => String::new(),
                        Origin::Swap { from_row, from_set, appended }
                        | Origin::Majority { from_row, from_set, appended }
                        | Origin::Pair { from_row, from_set, appended } => {
                            format!(" = T[{from_row},{from_set}]·{appended}")
                        }
                    };
                    format!("{} ({}){how}", st.prefix, st.cost)
                }
            }
        };
        let mut grid: Vec<Vec<String>> = vec![std::iter::once("W \\ i".to_string())
            .chain((0..self.rows.len()).map(|i| i.to_string()))
            .collect()];
        for set in &sets {
            grid.push(
                std::iter::once(set.to_string())
                    .chain((0..self.rows.len()).map(|i| cell(i, set)))
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in grid {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:<w$}"))
                .collect();
            out.push_str(line.join(" | ").trim_end());
            out.push('\n');
        }
        out
    }
}

struct Entry {
    prefix: Vec<Symbol>,
    mask: Vec<bool>,
    cost: usize,
    origin: Origin,
}

struct Dp<'a> {
    words: Vec<&'a [Symbol]>,
    majority: Vec<Symbol>,
    columns: Vec<Vec<Symbol>>,
    rows: Vec<BTreeMap<SwapSet, Entry>>,
}

impl Dp<'_> {
    /// Appends `b` to `prefix` (whose swap mask is `mask`): the new mask and
    /// the cost increment. A new swap turns two counted mismatches into one
    /// swap.
    fn step(&self, prefix: &[Symbol], mask: &[bool], b: Symbol) -> (Vec<bool>, isize) {
        let l = prefix.len();
        let last = prefix[l - 1];
        let mut new_mask = vec![false; self.words.len()];
        let mut delta = 0isize;
        for (j, w) in self.words.iter().enumerate() {
            if w[l] != b {
                delta += 1;
            }
            if !mask[j] && w[l - 1] != w[l] && last == w[l] && b == w[l - 1] {
                new_mask[j] = true;
                delta -= 1;
            }
        }
        (new_mask, delta)
    }

    fn offer(&mut self, row: usize, prefix: Vec<Symbol>, mask: Vec<bool>, cost: usize, origin: Origin) {
        let key = SwapSet::from_mask(&mask);
        let slot = self.rows[row].entry(key);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(Entry { prefix, mask, cost, origin });
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let cur = o.get();
                if (cost, &prefix) < (cur.cost, &cur.prefix) {
                    o.insert(Entry { prefix, mask, cost, origin });
                }
            }
        }
    }

    fn initialize(&mut self) {
        let k = self.words.len();
        let first = vec![self.majority[0]];
        let zero_cost = self.words.iter().filter(|w| w[0] != first[0]).count();
        self.offer(0, first, vec![false; k], zero_cost, Origin::Init);

        let mut pairs: Vec<[Symbol; 2]> = self
            .words
            .iter()
            .filter(|w| w[0] != w[1])
            .map(|w| [w[0], w[1]])
            .collect();
        pairs.sort();
        pairs.dedup();
        for [a, b] in pairs {
            let t = vec![b, a];
            self.offer_fresh(1, t, Origin::Init);
        }
        let head = self.majority[..2].to_vec();
        let mask: Vec<bool> = self.words.iter().map(|w| greedy_swaps(&w[..2], &head)[0]).collect();
        if mask.iter().all(|&m| !m) {
            self.offer_fresh(1, head, Origin::Init);
        }
    }

    /// Inserts a prefix whose mask and cost are computed from scratch.
    fn offer_fresh(&mut self, row: usize, prefix: Vec<Symbol>, origin: Origin) {
        let len = prefix.len();
        let mask: Vec<bool> = self
            .words
            .iter()
            .map(|w| greedy_swaps(&w[..len], &prefix)[row - 1])
            .collect();
        let cost = self.words.iter().map(|w| sh_cost(&w[..len], &prefix)).sum();
        self.offer(row, prefix, mask, cost, origin);
    }

    fn extend_row(&mut self, i: usize) {
        let n = self.majority.len();
        let states: Vec<(SwapSet, Vec<Symbol>, Vec<bool>, usize)> = self.rows[i]
            .iter()
            .map(|(k, e)| (k.clone(), e.prefix.clone(), e.mask.clone(), e.cost))
            .collect();
        for (set, prefix, mask, cost) in states {
            let l = prefix.len();
            if i >= 1 && i + 1 < n {
                // one symbol that starts a swap with some word
                for b in self.columns[i].clone() {
                    let (m, delta) = self.step(&prefix, &mask, b);
                    if m.iter().any(|&x| x) {
                        let mut t = prefix.clone();
                        t.push(b);
                        let origin = Origin::Swap {
                            from_row: i,
                            from_set: set.clone(),
                            appended: b.to_string(),
                        };
                        self.offer(i + 1, t, m, (cost as isize + delta) as usize, origin);
                    }
                }
                // the majority symbol, no swap
                let b = self.majority[l];
                let (m, delta) = self.step(&prefix, &mask, b);
                if m.iter().all(|&x| !x) {
                    let mut t = prefix.clone();
                    t.push(b);
                    let origin = Origin::Majority {
                        from_row: i,
                        from_set: set.clone(),
                        appended: b.to_string(),
                    };
                    self.offer(i + 1, t, m, (cost as isize + delta) as usize, origin);
                }
            }
            if i + 2 < n {
                // two symbols `a b` with `b a` a segment of some word
                let mut pairs: Vec<[Symbol; 2]> = self
                    .words
                    .iter()
                    .filter(|w| w[l] != w[l + 1])
                    .map(|w| [w[l + 1], w[l]])
                    .collect();
                pairs.sort();
                pairs.dedup();
                for [a, b] in pairs {
                    let (m1, d1) = self.step(&prefix, &mask, a);
                    if m1.iter().any(|&x| x) {
                        continue;
                    }
                    let mut t = prefix.clone();
                    t.push(a);
                    let (m2, d2) = self.step(&t, &m1, b);
                    debug_assert!(m2.iter().any(|&x| x));
                    t.push(b);
                    let origin = Origin::Pair {
                        from_row: i,
                        from_set: set.clone(),
                        appended: format!("{a}{b}"),
                    };
                    self.offer(i + 2, t, m2, (cost as isize + d1 + d2) as usize, origin);
                }
            }
        }
    }
}

fn bypass(inst: &Instance, start: Instant) -> Result<ConsensusAnswer> {
    // one column: the majority symbol; one word: the word itself
    let solution = if inst.k() == 1 {
        inst.words()[0].clone()
    } else {
        column_majority(inst)
    };
    let stats = SearchStats {
        elapsed: start.elapsed(),
        ..SearchStats::default()
    };
    ConsensusAnswer::certify(inst, solution, Metric::SwapHamming, stats)
}

/// Minimum-sum consensus under the Swap+Hamming distance, lex-minimal among
/// optima, together with the full table of stored states.
pub fn sum_consensus_sh_table(inst: &Instance) -> Result<(ConsensusAnswer, DpTable)> {
    let start = Instant::now();
    let n = inst.n();
    let majority = column_majority(inst);
    if n == 1 || inst.k() == 1 {
        let answer = bypass(inst, start)?;
        let table = DpTable {
            majority,
            rows: Vec::new(),
        };
        return Ok((answer, table));
    }
    let mut dp = Dp {
        words: inst.words().iter().map(|w| w.symbols()).collect(),
        majority: majority.symbols().to_vec(),
        columns: (0..n).map(|p| inst.column(p).into_iter().collect()).collect(),
        rows: (0..n).map(|_| BTreeMap::new()).collect(),
    };
    dp.initialize();
    for i in 0..n {
        dp.extend_row(i);
    }

    let k = inst.k();
    let mut max_row = 0;
    for (i, row) in dp.rows.iter().enumerate().skip(1) {
        let non_empty = row.keys().filter(|s| !s.is_empty()).count();
        debug_assert!(non_empty <= k * i, "row {i} holds {non_empty} non-empty sets");
        max_row = max_row.max(row.len());
    }

    let (_, best) = dp.rows[n - 1]
        .iter()
        .min_by(|a, b| (a.1.cost, &a.1.prefix).cmp(&(b.1.cost, &b.1.prefix)))
        .ok_or_else(|| Error::CertificationFailure("last table row is empty".into()))?;
    let solution = Word::from_vec_unchecked(best.prefix.clone());
    let best_cost = best.cost;

    let table = DpTable {
        majority,
        rows: dp
            .rows
            .into_iter()
            .enumerate()
            .map(|(row, states)| {
                states
                    .into_iter()
                    .map(|(set, e)| DpState {
                        row,
                        set,
                        prefix: Word::from_vec_unchecked(e.prefix),
                        cost: e.cost,
                        origin: e.origin,
                    })
                    .collect()
            })
            .collect(),
    };
    let stats = SearchStats {
        dp_states: table.state_count() as u64,
        max_row_states: max_row as u64,
        elapsed: start.elapsed(),
        ..SearchStats::default()
    };
    let answer = ConsensusAnswer::certify(inst, solution, Metric::SwapHamming, stats)?;
    if answer.sum_distance != best_cost {
        return Err(Error::CertificationFailure(format!(
            "table cost {best_cost} differs from recomputed sum {}",
            answer.sum_distance
        )));
    }
    Ok((answer, table))
}

/// Minimum-sum consensus; infeasible when the optimum exceeds `bound`.
pub fn sum_consensus_sh(inst: &Instance, bound: Option<usize>) -> Result<ConsensusAnswer> {
    sum_consensus_sh_table(inst).map(|(a, _)| a.with_sum_bound(bound))
}

/// Recomputes the swap set and cost of every stored state from scratch.
pub fn check_table(inst: &Instance, table: &DpTable) -> Result<()> {
    for state in table.rows.iter().flatten() {
        let len = state.row + 1;
        if state.prefix.len() != len {
            return Err(Error::CertificationFailure(format!(
                "state ({}, {}) has prefix length {}",
                state.row,
                state.set,
                state.prefix.len()
            )));
        }
        let cost: usize = inst
            .words()
            .iter()
            .map(|w| sh_cost(&w.symbols()[..len], state.prefix.symbols()))
            .sum();
        let set = if state.row == 0 {
            SwapSet::default()
        } else {
            swap_set(inst, &state.prefix, state.row)?
        };
        if cost != state.cost || set != state.set {
            return Err(Error::CertificationFailure(format!(
                "state ({}, {}) = {} recomputes to set {set}, cost {cost} (stored {})",
                state.row, state.set, state.prefix, state.cost
            )));
        }
    }
    Ok(())
}
