//! Brute-force reference solvers, exhaustive distance checks, the `$` column
//! gadget and a seeded instance generator.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ConsensusAnswer, Instance, Metric, SearchStats, Symbol, Word};

/// Reserved symbol of [`dollar_pad`].
pub const DOLLAR: Symbol = Symbol('$');

pub const DEFAULT_CAP: u128 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Objective {
    Radius { d: usize },
    Sum,
    /// Minimum sum within radius `d`, infeasible above `sum_bound`.
    RadiusSum { d: usize, sum_bound: Option<usize> },
}

#[derive(Debug, Clone)]
pub struct OracleQuery {
    pub instance: Instance,
    pub metric: Metric,
    pub objective: Objective,
    /// Consumed budgets: the radius becomes `d - x_i` per word and the sum
    /// bound `D - sum(x_i)`.
    pub budgets: Option<Vec<usize>>,
    pub cap: u128,
}

impl OracleQuery {
    pub fn new(instance: Instance, metric: Metric, objective: Objective) -> Self {
        OracleQuery {
            instance,
            metric,
            objective,
            budgets: None,
            cap: DEFAULT_CAP,
        }
    }

    pub fn with_budgets(mut self, budgets: Vec<usize>) -> Self {
        self.budgets = Some(budgets);
        self
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }
}

/// Enumerates every word over the instance alphabet, in lexicographic order,
/// and returns the exact answer with the lex-minimal witness.
pub fn brute_force(q: &OracleQuery) -> Result<ConsensusAnswer> {
    let start = Instant::now();
    let inst = &q.instance;
    let (k, n) = (inst.k(), inst.n());
    let alphabet: Vec<Symbol> = inst.alphabet().iter().copied().collect();
    let needed = (alphabet.len() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if needed > q.cap {
        return Err(Error::CapExceeded { needed, cap: q.cap });
    }
    let budgets = match &q.budgets {
        Some(b) if b.len() != k => {
            return Err(Error::BudgetCount {
                expected: k,
                found: b.len(),
            })
        }
        Some(b) => b.clone(),
        None => vec![0; k],
    };
    let radius = match q.objective {
        Objective::Radius { d } | Objective::RadiusSum { d, .. } => Some(d),
        Objective::Sum => None,
    };
    let total_x: usize = budgets.iter().sum();

    let mut best: Option<(usize, Word)> = None;
    let mut enumerated = 0u64;
    let mut digits = vec![0usize; n];
    'outer: loop {
        enumerated += 1;
        let cand = Word::from_vec_unchecked(digits.iter().map(|&i| alphabet[i]).collect());
        let mut sum = 0;
        let mut ok = true;
        for (w, &x) in inst.words().iter().zip(&budgets) {
            match q.metric.distance(w, &cand)? {
                Some(dist) if radius.is_none_or(|d| dist + x <= d) => sum += dist,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            if let Objective::Radius { .. } = q.objective {
                best = Some((sum, cand));
                break 'outer;
            }
            if best.as_ref().is_none_or(|(b, _)| sum < *b) {
                best = Some((sum, cand));
            }
        }
        // next word in lex order
        let mut p = n;
        loop {
            if p == 0 {
                break 'outer;
            }
            p -= 1;
            digits[p] += 1;
            if digits[p] < alphabet.len() {
                break;
            }
            digits[p] = 0;
        }
    }

    let stats = SearchStats {
        oracle_enumerated: enumerated,
        elapsed: start.elapsed(),
        ..SearchStats::default()
    };
    let Some((_, witness)) = best else {
        let reason = match radius {
            Some(d) => format!("no word within radius {d}"),
            None => "no word at finite distance from every input".to_string(),
        };
        return Ok(ConsensusAnswer::infeasible(reason, stats));
    };
    let answer = ConsensusAnswer::certify(inst, witness, q.metric, stats)?;
    let bound = match q.objective {
        Objective::RadiusSum { sum_bound, .. } => sum_bound,
        _ => None,
    };
    Ok(match bound {
        Some(b) if answer.sum_distance + total_x > b => ConsensusAnswer::infeasible(
            format!(
                "minimum sum {} plus consumed budgets {total_x} exceeds bound {b}",
                answer.sum_distance
            ),
            answer.stats,
        ),
        _ => answer,
    })
}

/// Every set of pairwise non-adjacent swaps of distinct symbols of `s`, as
/// swapped words paired with their size.
fn swap_neighbourhood(s: &[Symbol]) -> Vec<(usize, Vec<Symbol>)> {
    let n = s.len();
    let slots = n.saturating_sub(1);
    let mut out = Vec::new();
    for mask in 0u64..(1 << slots) {
        if mask & (mask >> 1) != 0 {
            continue;
        }
        let mut w = s.to_vec();
        let mut legal = true;
        for p in 0..slots {
            if mask >> p & 1 == 1 {
                legal &= w[p] != w[p + 1];
                w.swap(p, p + 1);
            }
        }
        if legal {
            out.push((mask.count_ones() as usize, w));
        }
    }
    out
}

/// Swap distance by trying every swap set of `s`. Meant for `n <= 20`.
pub fn swap_distance_exhaustive(s: &Word, t: &Word) -> Option<usize> {
    swap_neighbourhood(s.symbols())
        .into_iter()
        .filter(|(_, w)| w == t.symbols())
        .map(|(c, _)| c)
        .min()
}

/// Swap+Hamming distance as the minimum over all swap sets of `s` of the
/// swaps plus the remaining mismatches. Meant for `n <= 20`.
pub fn sh_distance_exhaustive(s: &Word, t: &Word) -> usize {
    swap_neighbourhood(s.symbols())
        .into_iter()
        .map(|(c, w)| c + w.iter().zip(t.symbols()).filter(|(a, b)| a != b).count())
        .min()
        .expect("the empty swap set is always legal")
}

/// Interleaves a `$` column between every two columns.
pub fn dollar_pad(inst: &Instance) -> Result<Instance> {
    if inst.contains_symbol(DOLLAR) {
        return Err(Error::ReservedSymbolPresent(DOLLAR));
    }
    let words = inst
        .words()
        .iter()
        .map(|w| {
            let mut out = Vec::with_capacity(2 * w.len() - 1);
            for (i, &s) in w.symbols().iter().enumerate() {
                if i > 0 {
                    out.push(DOLLAR);
                }
                out.push(s);
            }
            Word::from_vec_unchecked(out)
        })
        .collect();
    Instance::new(words)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpMix {
    /// Swaps and substitutions, about half each.
    #[default]
    Mixed,
    /// Swaps only, so every word matches the center.
    SwapsOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Planted {
    pub seed: u64,
    pub center: Word,
    #[serde(serialize_with = "serialize_words")]
    pub instance: Instance,
    /// Operations applied to each word.
    pub ops: Vec<usize>,
}

fn serialize_words<S: serde::Serializer>(inst: &Instance, s: S) -> std::result::Result<S::Ok, S::Error> {
    inst.words().serialize(s)
}

/// The first `sigma` lowercase letters; beyond 26, further code points.
pub fn default_alphabet(sigma: usize) -> Vec<Symbol> {
    (0..sigma as u32)
        .map(|i| Symbol(char::from_u32('a' as u32 + i).expect("valid code point")))
        .collect()
}

pub fn gen_planted(seed: u64, n: usize, k: usize, sigma: usize, ops_budget: usize) -> Planted {
    gen_planted_with(seed, n, k, sigma, ops_budget, OpMix::Mixed)
}

/// A random center and `k` words, each derived from it by at most
/// `ops_budget` operations on pairwise disjoint positions, so each word is
/// within that many operations of the center. Deterministic in `seed`.
pub fn gen_planted_with(
    seed: u64,
    n: usize,
    k: usize,
    sigma: usize,
    ops_budget: usize,
    mix: OpMix,
) -> Planted {
    assert!(n >= 1 && k >= 1 && sigma >= 2, "need n, k >= 1 and sigma >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = default_alphabet(sigma);
    let center: Vec<Symbol> = (0..n).map(|_| *alphabet.choose(&mut rng).unwrap()).collect();
    let mut words = Vec::with_capacity(k);
    let mut ops = Vec::with_capacity(k);
    for _ in 0..k {
        let mut w = center.clone();
        let mut touched = vec![false; n];
        let target = rng.gen_range(0..=ops_budget);
        let mut done = 0;
        for _ in 0..target {
            let swap = match mix {
                OpMix::SwapsOnly => true,
                OpMix::Mixed => rng.gen_bool(0.5),
            };
            if swap {
                let slots: Vec<usize> = (0..n.saturating_sub(1))
                    .filter(|&p| !touched[p] && !touched[p + 1] && w[p] != w[p + 1])
                    .collect();
                if let Some(&p) = slots.choose(&mut rng) {
                    w.swap(p, p + 1);
                    touched[p] = true;
                    touched[p + 1] = true;
                    done += 1;
                }
            } else {
                let slots: Vec<usize> = (0..n).filter(|&p| !touched[p]).collect();
                if let Some(&p) = slots.choose(&mut rng) {
                    let others: Vec<Symbol> = alphabet.iter().copied().filter(|&c| c != w[p]).collect();
                    w[p] = *others.choose(&mut rng).unwrap();
                    touched[p] = true;
                    done += 1;
                }
            }
        }
        words.push(Word::from_vec_unchecked(w));
        ops.push(done);
    }
    Planted {
        seed,
        center: Word::from_vec_unchecked(center),
        instance: Instance::new(words).expect("equal lengths"),
        ops,
    }
}

/// Uniformly random words, `n` letters over the first `sigma` symbols.
pub fn gen_uniform(seed: u64, n: usize, k: usize, sigma: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = default_alphabet(sigma);
    let words = (0..k)
        .map(|_| Word::from_vec_unchecked((0..n).map(|_| *alphabet.choose(&mut rng).unwrap()).collect()))
        .collect();
    Instance::new(words).expect("equal lengths")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sh_metric::sh_distance;
    use crate::swap::swap_distance;
    use proptest::prelude::*;

    fn inst(words: &[&str]) -> Instance {
        Instance::from_strs(words).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let q = OracleQuery::new(inst(&["baba", "cabc", "abca"]), Metric::SwapHamming, Objective::Sum);
        let a = brute_force(&q).unwrap();
        assert_eq!((a.solution, a.sum_distance), (Some(w("baba")), 4));
        assert_eq!(a.stats.oracle_enumerated, 81);
        for metric in [Metric::Hamming, Metric::Swap, Metric::SwapHamming] {
            let a = brute_force(&OracleQuery::new(inst(&["cab"]), metric, Objective::Sum)).unwrap();
            assert_eq!((a.solution, a.sum_distance), (Some(w("cab")), 0));
        }
        let q = OracleQuery::new(inst(&["aa", "bb"]), Metric::Hamming, Objective::Radius { d: 1 });
        assert_eq!(brute_force(&q).unwrap().solution, Some(w("ab")));
    }

    #[test]
    fn budgets_and_bounds() {
        let q = OracleQuery::new(
            inst(&["ab", "ab"]),
            Metric::Hamming,
            Objective::RadiusSum { d: 1, sum_bound: Some(1) },
        )
        .with_budgets(vec![1, 0]);
        assert_eq!(brute_force(&q).unwrap().solution, Some(w("ab")));
        let q = OracleQuery::new(
            inst(&["abab", "baba"]),
            Metric::Swap,
            Objective::RadiusSum { d: 2, sum_bound: Some(1) },
        );
        assert!(!brute_force(&q).unwrap().is_feasible());
        let q = OracleQuery::new(inst(&["ababc", "abbca", "abacb"]), Metric::Swap, Objective::Sum);
        assert!(!brute_force(&q).unwrap().is_feasible());
    }

    #[test]
    fn cap_is_enforced() {
        let q = OracleQuery::new(inst(&["abcd", "dcba"]), Metric::Hamming, Objective::Sum).with_cap(255);
        assert_eq!(
            brute_force(&q).unwrap_err(),
            Error::CapExceeded { needed: 256, cap: 255 }
        );
    }

    #[test]
    fn dollar_pad_examples() {
        let p = dollar_pad(&inst(&["ab", "ba"])).unwrap();
        assert_eq!(p, inst(&["a$b", "b$a"]));
        assert_eq!(dollar_pad(&inst(&["a"])).unwrap(), inst(&["a"]));
        assert_eq!(
            dollar_pad(&inst(&["a$"])).unwrap_err(),
            Error::ReservedSymbolPresent(DOLLAR)
        );
    }

    #[test]
    fn planted_generation() {
        let p = gen_planted(1, 8, 4, 3, 0);
        assert!(p.instance.words().iter().all(|w| *w == p.center));
        let a = gen_planted(7, 12, 5, 4, 3);
        assert_eq!(a, gen_planted(7, 12, 5, 4, 3));
        assert_ne!(a.instance, gen_planted(8, 12, 5, 4, 3).instance);
        for (word, &ops) in a.instance.words().iter().zip(&a.ops) {
            assert!(sh_distance(&a.center, word).unwrap().0 <= ops);
            assert!(ops <= 3);
        }
        let s = gen_planted_with(3, 10, 4, 3, 3, OpMix::SwapsOnly);
        for word in s.instance.words() {
            assert!(swap_distance(&s.center, word).unwrap() <= 3);
        }
    }

    fn pair() -> impl Strategy<Value = (Word, Word)> {
        (1usize..9).prop_flat_map(|n| {
            let v = || proptest::collection::vec(0u8..3, n);
            (v(), v()).prop_map(|(a, b)| {
                let mk = |v: Vec<u8>| Word::new(v.into_iter().map(|c| Symbol((b'a' + c) as char)).collect()).unwrap();
                (mk(a), mk(b))
            })
        })
    }

    proptest! {
        #[test]
        fn exhaustive_distances_agree((s, t) in pair()) {
            prop_assert_eq!(swap_distance_exhaustive(&s, &t), swap_distance(&s, &t));
            prop_assert_eq!(sh_distance_exhaustive(&s, &t), sh_distance(&s, &t).unwrap().0);
        }
    }
}
