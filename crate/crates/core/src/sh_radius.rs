//! Bounded search tree for radius consensus under the Swap+Hamming distance.
//!
//! The search starts from an input word and repairs the candidate towards
//! the first word it is too far from. When the two differ in at least
//! `2d + 1` positions, one of the first `2d + 1` mismatches agrees with every
//! solution, exactly as for Hamming consensus. Otherwise the search also
//! tries to copy a swapped pair of that word around each mismatch. In both
//! cases some branch strictly reduces the Hamming distance to a solution,
//! which starts at most `2d`, so the depth is bounded by `2d`.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::hamming::mismatches;
use crate::model::{ConsensusAnswer, Instance, Metric, SearchStats, Symbol, Word};
use crate::sh_metric::sh_cost;

/// One edit of the candidate, copied from input word `source` (0-based).
/// Positions are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchMove {
    Substitute { p: usize, symbol: Symbol, source: usize },
    /// Writes `pair` over positions `p, p + 1`.
    SwapIn { p: usize, pair: [Symbol; 2], source: usize },
}

impl BranchMove {
    fn apply(&self, cand: &mut [Symbol]) {
        match *self {
            BranchMove::Substitute { p, symbol, .. } => cand[p] = symbol,
            BranchMove::SwapIn { p, pair, .. } => {
                cand[p] = pair[0];
                cand[p + 1] = pair[1];
            }
        }
    }

    fn changes(&self, cand: &[Symbol]) -> bool {
        match *self {
            BranchMove::Substitute { p, symbol, .. } => cand[p] != symbol,
            BranchMove::SwapIn { p, pair, .. } => cand[p] != pair[0] || cand[p + 1] != pair[1],
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ShRadiusOptions {
    /// Retry from every input word instead of only the first.
    pub all_roots: bool,
}

struct Search<'a> {
    words: Vec<&'a [Symbol]>,
    d: usize,
    nodes: u64,
    max_depth: usize,
}

impl Search<'_> {
    /// Moves for the violated word `source`.
    fn moves(&self, cand: &[Symbol], source: usize) -> Vec<BranchMove> {
        let s = self.words[source];
        let n = cand.len();
        let mism: Vec<usize> = (0..n).filter(|&p| cand[p] != s[p]).collect();
        let d = self.d;
        if mism.len() > 2 * d {
            return mism[..2 * d + 1]
                .iter()
                .map(|&p| BranchMove::Substitute { p, symbol: s[p], source })
                .collect();
        }
        // sh > d implies ham >= d + 1, and ham <= 2d here
        debug_assert!(mism.len() > d && mism.len() <= 2 * d);
        let mut moves: Vec<BranchMove> = mism
            .iter()
            .map(|&p| BranchMove::Substitute { p, symbol: s[p], source })
            .collect();
        for &p in &mism {
            if p + 1 < n && s[p] != s[p + 1] {
                moves.push(BranchMove::SwapIn { p, pair: [s[p + 1], s[p]], source });
            }
            if p >= 1 && s[p - 1] != s[p] {
                moves.push(BranchMove::SwapIn { p: p - 1, pair: [s[p], s[p - 1]], source });
            }
        }
        moves
    }

    fn branch(&mut self, cand: &mut Vec<Symbol>, depth: usize) -> bool {
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth);
        let d = self.d;
        // Along a successful path the candidate is within 2d - depth of a
        // solution, hence within 4d - depth of every input word.
        let trim = 4 * d + 1 - depth;
        if self.words.iter().any(|w| mismatches(cand, w) >= trim) {
            return false;
        }
        let Some(i) = (0..self.words.len()).find(|&j| sh_cost(cand, self.words[j]) > d) else {
            return true;
        };
        if depth == 2 * d {
            return false;
        }
        let moves = self.moves(cand, i);
        let mut tried: Vec<Vec<Symbol>> = Vec::new();
        for mv in moves {
            if !mv.changes(cand) {
                continue;
            }
            let saved = cand.clone();
            mv.apply(cand);
            if tried.contains(cand) {
                *cand = saved;
                continue;
            }
            tried.push(cand.clone());
            if self.branch(cand, depth + 1) {
                return true;
            }
            *cand = saved;
        }
        false
    }
}

pub fn radius_consensus_sh(inst: &Instance, d: usize) -> Result<ConsensusAnswer> {
    radius_consensus_sh_with(inst, d, ShRadiusOptions::default())
}

/// Decides whether some word is within Swap+Hamming distance `d` of every
/// input word. Substitutions are explored before swap-ins, positions in
/// ascending order, and the first witness found is returned.
pub fn radius_consensus_sh_with(
    inst: &Instance,
    d: usize,
    options: ShRadiusOptions,
) -> Result<ConsensusAnswer> {
    let start = Instant::now();
    let mut search = Search {
        words: inst.words().iter().map(|w| w.symbols()).collect(),
        d,
        nodes: 0,
        max_depth: 0,
    };
    let roots = if options.all_roots { inst.k() } else { 1 };
    let mut witness = None;
    for r in 0..roots {
        let mut cand = inst.words()[r].symbols().to_vec();
        if search.branch(&mut cand, 0) {
            witness = Some(cand);
            break;
        }
    }
    assert!(search.max_depth <= 2 * d, "search exceeded depth 2d");
    let stats = SearchStats {
        nodes_expanded: search.nodes,
        max_depth: search.max_depth as u64,
        elapsed: start.elapsed(),
        ..SearchStats::default()
    };
    let Some(cand) = witness else {
        return Ok(ConsensusAnswer::infeasible(
            format!("no word within swap+Hamming radius {d}"),
            stats,
        ));
    };
    let answer = ConsensusAnswer::certify(inst, Word::from_vec_unchecked(cand), Metric::SwapHamming, stats)?;
    if answer.max_distance > d {
        return Err(Error::CertificationFailure(format!(
            "witness at swap+Hamming distance {} > {d}",
            answer.max_distance
        )));
    }
    Ok(answer)
}
