//! Swap+Hamming distance: fewest swaps plus substitutions between two words.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Symbol, Word};

/// A canonical optimal edit script. Positions are 1-based; a swap at `p`
/// exchanges positions `p` and `p + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ShWitness {
    pub swaps: Vec<usize>,
    pub substitutions: Vec<usize>,
    pub cost: usize,
}

/// Greedy swap marks between `a` and `b`: `marks[p]` is set when positions
/// `p, p + 1` (0-based) are resolved by one swap. A swap is taken at `p` iff
/// `a[p..=p+1]` is `b[p..=p+1]` reversed on distinct symbols and no swap
/// was taken at `p - 1`.
pub(crate) fn greedy_swaps(a: &[Symbol], b: &[Symbol]) -> Vec<bool> {
    let n = a.len().min(b.len());
    let mut marks = vec![false; n.saturating_sub(1)];
    let mut prev = false;
    for p in 0..n.saturating_sub(1) {
        let take = !prev && a[p] != a[p + 1] && a[p] == b[p + 1] && a[p + 1] == b[p];
        marks[p] = take;
        prev = take;
    }
    marks
}

/// Swap+Hamming distance with its greedy witness. The left-to-right greedy
/// is optimal; other optimal scripts may exist.
pub fn sh_distance(s: &Word, t: &Word) -> Result<(usize, ShWitness)> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    let (a, b) = (s.symbols(), t.symbols());
    let marks = greedy_swaps(a, b);
    let mut covered = vec![false; a.len()];
    let mut swaps = Vec::new();
    for (p, _) in marks.iter().enumerate().filter(|(_, &m)| m) {
        covered[p] = true;
        covered[p + 1] = true;
        swaps.push(p + 1);
    }
    let substitutions: Vec<usize> = (0..a.len())
        .filter(|&p| !covered[p] && a[p] != b[p])
        .map(|p| p + 1)
        .collect();
    let cost = swaps.len() + substitutions.len();
    Ok((
        cost,
        ShWitness {
            swaps,
            substitutions,
            cost,
        },
    ))
}

/// Cost only, on raw slices of equal length.
pub(crate) fn sh_cost(a: &[Symbol], b: &[Symbol]) -> usize {
    let n = a.len();
    let mut cost = 0;
    let mut p = 0;
    while p < n {
        if a[p] == b[p] {
            p += 1;
        } else if p + 1 < n && a[p] == b[p + 1] && a[p + 1] == b[p] {
            // a[p] != b[p] = a[p + 1], so the pair is distinct
            cost += 1;
            p += 2;
        } else {
            cost += 1;
            p += 1;
        }
    }
    cost
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamming::hamming_distance;
    use crate::swap::swap_distance;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn dist(a: &str, b: &str) -> ShWitness {
        sh_distance(&w(a), &w(b)).unwrap().1
    }

    #[test]
    fn examples() {
        let x = dist("abab", "baba");
        assert_eq!((x.cost, x.swaps.clone(), x.substitutions.len()), (2, vec![1, 3], 0));
        assert_eq!(dist("abc", "abc").cost, 0);
        let x = dist("baba", "abca");
        assert_eq!((x.cost, x.swaps, x.substitutions), (2, vec![1], vec![3]));
        assert!(sh_distance(&w("ab"), &w("a")).is_err());
    }

    #[test]
    fn equal_symbols_never_swap() {
        let x = dist("aab", "aba");
        assert_eq!((x.swaps, x.cost), (vec![2], 1));
        assert_eq!(dist("aa", "aa").swaps, Vec::<usize>::new());
    }

    #[test]
    fn greedy_prefers_the_leftmost_swap() {
        // "aba" -> "baa": swap at 1 wins, the chain cannot take 2 as well
        let x = dist("abab", "baba");
        assert_eq!(x.swaps, vec![1, 3]);
        let x = dist("aba", "bab");
        assert_eq!((x.swaps, x.substitutions, x.cost), (vec![1], vec![3], 2));
    }

    fn word_pair() -> impl Strategy<Value = (Word, Word)> {
        (1usize..10).prop_flat_map(|n| {
            let letters = || proptest::collection::vec(0u8..3, n);
            (letters(), letters()).prop_map(|(a, b)| {
                let mk = |v: Vec<u8>| Word::new(v.into_iter().map(|c| Symbol((b'a' + c) as char)).collect()).unwrap();
                (mk(a), mk(b))
            })
        })
    }

    proptest! {
        #[test]
        fn witness_reconstructs_target((s, t) in word_pair()) {
            let (cost, wit) = sh_distance(&s, &t).unwrap();
            let mut x = s.symbols().to_vec();
            for &p in &wit.swaps { x.swap(p - 1, p); }
            for &p in &wit.substitutions { x[p - 1] = t.at(p - 1); }
            prop_assert_eq!(x, t.symbols().to_vec());
            prop_assert!(wit.swaps.windows(2).all(|w| w[1] >= w[0] + 2));
            prop_assert_eq!(cost, sh_cost(s.symbols(), t.symbols()));
        }

        #[test]
        fn symmetric_and_bounded((s, t) in word_pair()) {
            let st = sh_distance(&s, &t).unwrap().0;
            prop_assert_eq!(st, sh_distance(&t, &s).unwrap().0);
            let ham = hamming_distance(&s, &t).unwrap();
            prop_assert!(st <= ham && ham <= 2 * st);
            if let Some(sw) = swap_distance(&s, &t) {
                prop_assert!(st <= sw);
            }
        }
    }
}
