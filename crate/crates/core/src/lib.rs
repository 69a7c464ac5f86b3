//! Consensus strings under the adjacent-swap distance and the Swap+Hamming
//! distance, plus brute-force oracles to check them against.

pub mod disentangle;
pub mod error;
pub mod hamming;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod sh_metric;
pub mod sh_radius;
pub mod sh_sum;
pub mod swap;

pub use disentangle::{disentangle, DisentangleOutcome, Disentanglement};
pub use error::{Error, Result};
pub use model::{
    format_instance, multiset_signature, parse_instance, BudgetedInstance, ConsensusAnswer,
    Instance, Metric, SearchStats, Status, Symbol, Word,
};
pub use swap::{apply_swaps, swap_distance, swap_string, xor_compose, BitString, SwapStr};
pub use hamming::{
    column_majority, hamming_distance, pad_mixed, radius_consensus_ham_mixed,
    rs_consensus_ham_mixed, sum_consensus_ham, MixedRadiusQuery, MixedRadiusSumQuery,
};
pub use oracle::{brute_force, dollar_pad, gen_planted, OracleQuery};
pub use pipeline::{
    radius_consensus_swap, rs_consensus_swap, sum_consensus_swap, PipelineRun, SwapPipelineTrace,
};
pub use sh_metric::{sh_distance, ShWitness};
pub use sh_radius::{radius_consensus_sh, radius_consensus_sh_with, ShRadiusOptions};
pub use sh_sum::{sum_consensus_sh, sum_consensus_sh_table, swap_set, DpTable, SwapSet};
