//! Swap-distance consensus through the Hamming solvers.
//!
//! The instance is disentangled, every `s'_i` is encoded as its swap string
//! `h_i` relative to `s'_1`, a Hamming consensus `h*` of the `h_i` is
//! computed with the forced swaps as consumed budgets, and `h*` is applied
//! to `s'_1`. For pairwise matching words `ds(s'_i, t) = ham(h_i, h*)`
//! whenever the ones of `h*` lie in the union of the ones of the `h_i`,
//! and `ds(s_i, t) = x_i + ds(s'_i, t)`. Both facts are checked on every run.

use std::time::Instant;

use serde::Serialize;

use crate::disentangle::{disentangle, DisentangleOutcome, Disentanglement};
use crate::error::{Error, Result};
use crate::hamming::{
    column_majority, radius_consensus_ham_mixed, rs_consensus_ham_mixed, MixedRadiusQuery,
    MixedRadiusSumQuery,
};
use crate::model::{BudgetedInstance, ConsensusAnswer, Instance, Metric, SearchStats, Word};
use crate::swap::{apply_swaps, swap_string, xor_compose, SwapStr};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwapPipelineTrace {
    pub input: Vec<Word>,
    pub disentanglement: Disentanglement,
    /// `h_i = swap_string(s'_1, s'_i)`.
    pub encoded: Vec<SwapStr>,
    /// Absent when the Hamming stage is infeasible.
    pub h_star: Option<SwapStr>,
    pub decoded: Option<Word>,
}

/// One row group of the trace, in the order the pipeline runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub title: &'static str,
    pub rows: Vec<String>,
}

impl SwapPipelineTrace {
    /// Letters every common match must carry inside the tangled intervals,
    /// `?` elsewhere.
    pub fn forced_pattern(&self) -> String {
        let first = &self.disentanglement.strings_prime[0];
        (0..first.len())
            .map(|p| {
                let inside = self
                    .disentanglement
                    .tangled_intervals
                    .iter()
                    .any(|&(a, b)| a <= p + 1 && p < b);
                if inside {
                    first.at(p).0
                } else {
                    '?'
                }
            })
            .collect()
    }

    pub fn steps(&self) -> Vec<TraceStep> {
        let words = |ws: &[Word]| ws.iter().map(Word::to_string).collect::<Vec<_>>();
        let mut steps = vec![
            TraceStep {
                step: 1,
                title: "input strings",
                rows: words(&self.input),
            },
            TraceStep {
                step: 2,
                title: "tangled intervals",
                rows: self
                    .disentanglement
                    .tangled_intervals
                    .iter()
                    .map(|(a, b)| format!("[{a},{b}]"))
                    .collect(),
            },
            TraceStep {
                step: 3,
                title: "forced letters of every common match",
                rows: vec![self.forced_pattern()],
            },
            TraceStep {
                step: 4,
                title: "disentanglement",
                rows: words(&self.disentanglement.strings_prime),
            },
            TraceStep {
                step: 5,
                title: "swap strings relative to the first disentangled word",
                rows: self.encoded.iter().map(SwapStr::to_string).collect(),
            },
        ];
        if let (Some(h), Some(t)) = (&self.h_star, &self.decoded) {
            steps.push(TraceStep {
                step: 6,
                title: "Hamming consensus of the swap strings",
                rows: vec![h.to_string()],
            });
            steps.push(TraceStep {
                step: 7,
                title: "decoded consensus",
                rows: vec![t.to_string()],
            });
            steps.push(TraceStep {
                step: 8,
                title: "swap distances to the input strings",
                rows: self
                    .input
                    .iter()
                    .map(|s| match swap_string(s, t) {
                        Ok(h) => h.popcount().to_string(),
                        Err(_) => "inf".to_string(),
                    })
                    .collect(),
            });
        }
        steps
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineRun {
    pub answer: ConsensusAnswer,
    /// Absent when the disentanglement already fails.
    pub trace: Option<SwapPipelineTrace>,
}

enum Objective {
    Sum(Option<usize>),
    Radius(usize),
    RadiusSum(usize, Option<usize>),
}

pub fn sum_consensus_swap(inst: &Instance, bound: Option<usize>) -> Result<PipelineRun> {
    run(inst, Objective::Sum(bound))
}

pub fn radius_consensus_swap(inst: &Instance, d: usize) -> Result<PipelineRun> {
    run(inst, Objective::Radius(d))
}

/// Minimum-sum word within radius `d`; infeasible when that sum exceeds
/// `bound`.
pub fn rs_consensus_swap(inst: &Instance, d: usize, bound: Option<usize>) -> Result<PipelineRun> {
    run(inst, Objective::RadiusSum(d, bound))
}

/// Fails unless no two ones of the whole family are adjacent.
fn check_compatible(encoded: &[SwapStr]) -> Result<Vec<bool>> {
    let len = encoded[0].bits().len();
    let mut union = vec![false; len];
    for h in encoded {
        for p in h.ones() {
            union[p] = true;
        }
    }
    if let Some(p) = union.windows(2).position(|w| w[0] && w[1]) {
        return Err(Error::CertificationFailure(format!(
            "encoded swap strings use adjacent positions {} and {}",
            p + 1,
            p + 2
        )));
    }
    Ok(union)
}

fn infeasible(reason: String, start: Instant, stats: SearchStats) -> ConsensusAnswer {
    let stats = SearchStats {
        elapsed: start.elapsed(),
        ..stats
    };
    ConsensusAnswer::infeasible(reason, stats)
}

fn run(inst: &Instance, objective: Objective) -> Result<PipelineRun> {
    let start = Instant::now();
    let dis = match disentangle(inst) {
        DisentangleOutcome::Disentangled(d) => d,
        other => {
            let reason = other.into_result().expect_err("not disentangled");
            return Ok(PipelineRun {
                answer: infeasible(
                    format!("no common matching word ({reason})"),
                    start,
                    SearchStats::default(),
                ),
                trace: None,
            });
        }
    };
    let n = inst.n();
    let first = dis.strings_prime[0].clone();
    let encoded: Vec<SwapStr> = dis
        .strings_prime
        .iter()
        .map(|w| swap_string(&first, w))
        .collect::<Result<_>>()?;
    let mut trace = SwapPipelineTrace {
        input: inst.words().to_vec(),
        disentanglement: dis,
        encoded,
        h_star: None,
        decoded: None,
    };
    let budgets = trace.disentanglement.budgets.clone();
    let delta = trace.disentanglement.total;

    if let Objective::Radius(d) | Objective::RadiusSum(d, _) = objective {
        if let Some(i) = budgets.iter().position(|&x| x > d) {
            let reason = format!(
                "word {} needs {} forced swaps, more than the radius {d}",
                i + 1,
                budgets[i]
            );
            return Ok(PipelineRun {
                answer: infeasible(reason, start, SearchStats::default()),
                trace: Some(trace),
            });
        }
    }

    // h_star and the Hamming-stage statistics
    let (h_star, stats) = if n == 1 {
        (SwapStr::zeros(1), SearchStats::default())
    } else {
        let union = check_compatible(&trace.encoded)?;
        let h_words: Vec<Word> = trace
            .encoded
            .iter()
            .map(SwapStr::to_word)
            .collect::<Result<_>>()?;
        let h_inst = Instance::new(h_words)?;
        let solved = match objective {
            Objective::Sum(_) => {
                let h = column_majority(&h_inst);
                Some((h, SearchStats::default()))
            }
            Objective::Radius(d) => {
                let q = MixedRadiusQuery::new(BudgetedInstance::new(h_inst, budgets.clone())?, d)?;
                let a = radius_consensus_ham_mixed(&q)?;
                a.solution.clone().map(|h| (h, a.stats))
            }
            Objective::RadiusSum(d, bound) => {
                let q = MixedRadiusSumQuery::new(
                    BudgetedInstance::new(h_inst, budgets.clone())?,
                    d,
                    bound,
                )?;
                let a = rs_consensus_ham_mixed(&q)?;
                a.solution.clone().map(|h| (h, a.stats))
            }
        };
        let Some((h, stats)) = solved else {
            let reason = match objective {
                Objective::RadiusSum(d, Some(b)) => {
                    format!("no common matching word within radius {d} and sum {b}")
                }
                Objective::RadiusSum(d, None) | Objective::Radius(d) => {
                    format!("no common matching word within radius {d}")
                }
                Objective::Sum(_) => unreachable!("the majority always exists"),
            };
            return Ok(PipelineRun {
                answer: infeasible(reason, start, SearchStats::default()),
                trace: Some(trace),
            });
        };
        // keep only ones some input uses; never increases a distance
        let bits: Vec<bool> = h
            .symbols()
            .iter()
            .zip(&union)
            .map(|(c, &u)| c.0 == '1' && u)
            .collect();
        (SwapStr::new(bits, n)?, stats)
    };

    let decoded = apply_swaps(&first, &h_star)?;
    let stats = SearchStats {
        elapsed: start.elapsed(),
        ..stats
    };
    let answer = ConsensusAnswer::certify(inst, decoded.clone(), Metric::Swap, stats)?;
    for (i, h) in trace.encoded.iter().enumerate() {
        let residual = xor_compose(h.bits(), h_star.bits())?.popcount();
        if answer.per_string_distances[i] != budgets[i] + residual {
            return Err(Error::CertificationFailure(format!(
                "swap distance of word {} is {}, expected {} forced + {residual}",
                i + 1,
                answer.per_string_distances[i],
                budgets[i]
            )));
        }
    }
    debug_assert_eq!(
        answer.sum_distance,
        delta + trace
            .encoded
            .iter()
            .map(|h| xor_compose(h.bits(), h_star.bits()).map(|x| x.popcount()).unwrap_or(0))
            .sum::<usize>()
    );
    trace.h_star = Some(h_star);
    trace.decoded = Some(decoded);

    let answer = match objective {
        Objective::Sum(bound) => answer.with_sum_bound(bound),
        Objective::Radius(d) | Objective::RadiusSum(d, _) => {
            if answer.max_distance > d {
                return Err(Error::CertificationFailure(format!(
                    "decoded word at swap distance {} > {d}",
                    answer.max_distance
                )));
            }
            if let Objective::RadiusSum(_, Some(b)) = objective {
                if answer.sum_distance > b {
                    return Err(Error::CertificationFailure(format!(
                        "decoded word has swap sum {} > {b}",
                        answer.sum_distance
                    )));
                }
            }
            answer
        }
    };
    Ok(PipelineRun {
        answer,
        trace: Some(trace),
    })
}
