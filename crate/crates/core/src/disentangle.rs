//! Applies the swaps every common match forces, leaving pairwise matching words.
//!
//! Columns are scanned left to right. A column where all words agree is
//! skipped, and so is a pair of columns holding only `xy` and `yx`. Any other
//! dirty column starts a tangled interval: the words that cannot keep their
//! symbol there must swap one step to the right, which fixes two letters of
//! every common match; the remaining words then swap into line one position
//! at a time until a position is reached where nobody has to move.

use serde::Serialize;

use crate::model::{multiset_signature, Instance, Symbol, Word};
use crate::swap::{swap_string, xor_compose, SwapStr};

/// The words after applying only the forced swaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disentanglement {
    pub strings_prime: Vec<Word>,
    /// Forced swaps applied to each input word.
    pub budgets: Vec<usize>,
    pub total: usize,
    /// 1-based inclusive letter ranges `[start, end]`.
    pub tangled_intervals: Vec<(usize, usize)>,
    /// `swap_string(s_i, s'_i)` for every word.
    pub applied: Vec<SwapStr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DisentangleOutcome {
    Disentangled(Disentanglement),
    /// No word matches all inputs. `column` is 1-based, 0 when the failure is
    /// not tied to one column.
    Infeasible { column: usize, reason: String },
}

impl DisentangleOutcome {
    pub fn into_result(self) -> Result<Disentanglement, String> {
        match self {
            DisentangleOutcome::Disentangled(d) => Ok(d),
            DisentangleOutcome::Infeasible { column: 0, reason } => Err(reason),
            DisentangleOutcome::Infeasible { column, reason } => {
                Err(format!("column {column}: {reason}"))
            }
        }
    }
}

struct Scan {
    cur: Vec<Vec<Symbol>>,
    swaps: Vec<Vec<bool>>,
    n: usize,
}

type Step<T> = Result<T, (usize, String)>;

fn fail<T>(p: usize, reason: impl Into<String>) -> Step<T> {
    Err((p + 1, reason.into()))
}

impl Scan {
    fn column(&self, p: usize) -> Vec<Symbol> {
        let mut c: Vec<Symbol> = self.cur.iter().map(|w| w[p]).collect();
        c.sort();
        c.dedup();
        c
    }

    fn swap(&mut self, j: usize, p: usize) {
        self.cur[j].swap(p, p + 1);
        self.swaps[j][p] = true;
    }

    fn benign(&self, p: usize) -> bool {
        if p + 1 >= self.n {
            return false;
        }
        let (x, y) = (self.cur[0][p], self.cur[0][p + 1]);
        x != y
            && self
                .cur
                .iter()
                .all(|w| (w[p] == x && w[p + 1] == y) || (w[p] == y && w[p + 1] == x))
    }

    /// Resolves the tangled interval starting at the violating column `i0`.
    /// Returns the last position of the interval (0-based).
    fn resolve(&mut self, i0: usize) -> Step<usize> {
        let n = self.n;
        let col = self.column(i0);
        if col.len() >= 3 {
            return fail(i0, format!("{} distinct letters in one tangled column", col.len()));
        }
        if i0 + 1 >= n {
            return fail(i0, "dirty last column");
        }
        let k = self.cur.len();
        let first: Vec<usize> = (0..k)
            .filter(|&j| {
                let w = &self.cur[j];
                !col.contains(&w[i0 + 1]) || w[i0] == w[i0 + 1]
            })
            .collect();
        if first.is_empty() {
            return fail(i0, "no word is forced to swap");
        }
        if i0 + 2 >= n {
            return fail(i0 + 1, "forced swap runs past the end");
        }
        // forced letters of every common match, by position
        let mut forced: Vec<Option<Symbol>> = vec![None; n];
        for &j in &first {
            let (a, b) = (self.cur[j][i0 + 1], self.cur[j][i0 + 2]);
            if a == b {
                return fail(i0 + 1, "forced swap of equal letters");
            }
            for (pos, sym) in [(i0 + 1, b), (i0 + 2, a)] {
                match forced[pos] {
                    Some(s) if s != sym => return fail(pos, "forced swaps disagree"),
                    _ => forced[pos] = Some(sym),
                }
            }
            self.swap(j, i0 + 1);
        }
        // words still off at i0 + 1 must have swapped at i0
        let c1 = forced[i0 + 1].expect("set above");
        for j in 0..k {
            if self.cur[j][i0 + 1] == c1 {
                continue;
            }
            if self.cur[j][i0] != c1 {
                return fail(i0 + 1, "no swap brings the forced letter into place");
            }
            let back = self.cur[j][i0 + 1];
            match forced[i0] {
                Some(s) if s != back => return fail(i0, "backward swaps disagree"),
                _ => forced[i0] = Some(back),
            }
            self.swap(j, i0);
        }
        // push the frontier right until nobody needs to move
        let mut q = i0 + 2;
        loop {
            let c = forced[q].expect("frontier letter is forced");
            let movers: Vec<usize> = (0..k)
                .filter(|&j| !self.swaps[j][q - 1] && self.cur[j][q] != c)
                .collect();
            if movers.is_empty() {
                break;
            }
            if q + 1 >= n {
                return fail(q, "forced swap runs past the end");
            }
            for j in movers {
                if self.cur[j][q + 1] != c {
                    return fail(q, "no swap brings the forced letter into place");
                }
                let next = self.cur[j][q];
                match forced[q + 1] {
                    Some(s) if s != next => return fail(q + 1, "forced swaps disagree"),
                    _ => forced[q + 1] = Some(next),
                }
                self.swap(j, q);
            }
            q += 1;
        }
        for p in i0..=q {
            if self.column(p).len() > 1 {
                return fail(p, "column stays dirty after the forced swaps");
            }
        }
        Ok(q)
    }

    fn run(&mut self) -> Step<Vec<(usize, usize)>> {
        let mut intervals = Vec::new();
        let mut p = 0;
        while p < self.n {
            if self.column(p).len() == 1 {
                p += 1;
            } else if self.benign(p) {
                p += 2;
            } else {
                let q = self.resolve(p)?;
                intervals.push((p + 1, q + 1));
                p = q + 1;
            }
        }
        Ok(intervals)
    }
}

/// Checks that every word matches the first and that no two of them need
/// conflicting swaps.
fn certify(words: &[Word]) -> Result<(), String> {
    let first = &words[0];
    let mut hs = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        let h = swap_string(first, w).map_err(|e| format!("word {} after the forced swaps: {e}", i + 1))?;
        hs.push(h);
    }
    for a in 0..hs.len() {
        for b in a + 1..hs.len() {
            let x = xor_compose(hs[a].bits(), hs[b].bits()).expect("equal lengths");
            if let Some(q) = x.first_adjacent_ones() {
                return Err(format!(
                    "words {} and {} do not match (position {})",
                    a + 1,
                    b + 1,
                    q
                ));
            }
        }
    }
    Ok(())
}

pub fn disentangle(inst: &Instance) -> DisentangleOutcome {
    let sig = multiset_signature(&inst.words()[0]);
    if let Some(i) = inst.words().iter().position(|w| multiset_signature(w) != sig) {
        return DisentangleOutcome::Infeasible {
            column: 0,
            reason: format!("word {} has different letter counts than word 1", i + 1),
        };
    }
    let n = inst.n();
    let mut scan = Scan {
        cur: inst.words().iter().map(|w| w.symbols().to_vec()).collect(),
        swaps: vec![vec![false; n - 1]; inst.k()],
        n,
    };
    let tangled_intervals = match scan.run() {
        Ok(iv) => iv,
        Err((column, reason)) => return DisentangleOutcome::Infeasible { column, reason },
    };
    let strings_prime: Vec<Word> = scan.cur.into_iter().map(Word::from_vec_unchecked).collect();
    if let Err(reason) = certify(&strings_prime) {
        return DisentangleOutcome::Infeasible { column: 0, reason };
    }
    let applied: Vec<SwapStr> = scan
        .swaps
        .into_iter()
        .map(|bits| SwapStr::new(bits, n).expect("forced swaps never touch"))
        .collect();
    let budgets: Vec<usize> = applied.iter().map(SwapStr::popcount).collect();
    DisentangleOutcome::Disentangled(Disentanglement {
        total: budgets.iter().sum(),
        strings_prime,
        budgets,
        tangled_intervals,
        applied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swap::swap_distance;
    use proptest::prelude::*;

    fn inst(words: &[&str]) -> Instance {
        Instance::from_strs(words).unwrap()
    }

    fn ok(words: &[&str]) -> Disentanglement {
        disentangle(&inst(words)).into_result().unwrap()
    }

    fn strs(ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn three_word_example() {
        let d = ok(&["gabcahi", "gcaabih", "gcabaih"]);
        assert_eq!(strs(&d.strings_prime), ["gacbahi", "gacbaih", "gacbaih"]);
        assert_eq!(d.budgets, [1, 2, 1]);
        assert_eq!(d.total, 4);
        assert_eq!(d.tangled_intervals, [(2, 5)]);
    }

    #[test]
    fn long_example() {
        let d = ok(&["abgabcahidabdefeda", "bagcaabihdabefddea", "bagcabaihdbaefdeda"]);
        assert_eq!(
            strs(&d.strings_prime),
            ["abgacbahidabedfeda", "bagacbaihdabedfdea", "bagacbaihdbaedfeda"]
        );
        assert_eq!(d.budgets, [2, 3, 2]);
        assert_eq!(d.tangled_intervals, [(4, 7), (13, 15)]);
    }

    #[test]
    fn benign_pairs_are_left_alone() {
        let d = ok(&["abab", "baba"]);
        assert_eq!(strs(&d.strings_prime), ["abab", "baba"]);
        assert_eq!((d.total, d.tangled_intervals.len()), (0, 0));
    }

    #[test]
    fn infeasible_examples() {
        let out = disentangle(&inst(&["ababc", "abbca", "abacb"]));
        assert!(matches!(out, DisentangleOutcome::Infeasible { .. }));
        let out = disentangle(&inst(&["ab", "ac"]));
        assert!(matches!(out, DisentangleOutcome::Infeasible { column: 0, .. }));
        // "abc" and "bca" are incomparable, yet both match "bac"
        let d = ok(&["abc", "bca"]);
        assert_eq!(strs(&d.strings_prime), ["bac", "bac"]);
    }

    fn common_matches(inst: &Instance) -> Vec<Word> {
        // independent enumeration over all arrangements of the first word
        fn rec(left: &mut Vec<Symbol>, acc: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
            if left.is_empty() {
                out.push(acc.clone());
                return;
            }
            let mut seen = Vec::new();
            for i in 0..left.len() {
                let s = left[i];
                if seen.contains(&s) {
                    continue;
                }
                seen.push(s);
                left.remove(i);
                acc.push(s);
                rec(left, acc, out);
                acc.pop();
                left.insert(i, s);
            }
        }
        let mut out = Vec::new();
        rec(&mut inst.words()[0].symbols().to_vec(), &mut Vec::new(), &mut out);
        out.into_iter()
            .map(|v| Word::new(v).unwrap())
            .filter(|t| inst.words().iter().all(|s| swap_distance(s, t).is_some()))
            .collect()
    }

    fn instance_near_center() -> impl Strategy<Value = Instance> {
        (2usize..7, 1usize..4).prop_flat_map(|(n, k)| {
            let center = proptest::collection::vec(0u8..3, n);
            let masks = proptest::collection::vec(proptest::collection::vec(any::<bool>(), n - 1), k);
            (center, masks).prop_map(move |(c, masks)| {
                let c: Vec<Symbol> = c.into_iter().map(|x| Symbol((b'a' + x) as char)).collect();
                let words = masks
                    .into_iter()
                    .map(|m| {
                        let mut w = c.clone();
                        let mut p = 0;
                        while p + 1 < n {
                            if m[p] && w[p] != w[p + 1] {
                                w.swap(p, p + 1);
                                p += 2;
                            } else {
                                p += 1;
                            }
                        }
                        Word::new(w).unwrap()
                    })
                    .collect();
                Instance::new(words).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn only_necessary_swaps(inst in instance_near_center()) {
            let d = match disentangle(&inst) {
                DisentangleOutcome::Disentangled(d) => d,
                DisentangleOutcome::Infeasible { reason, .. } => {
                    return Err(TestCaseError::fail(format!("planted instance rejected: {reason}")));
                }
            };
            let matches = common_matches(&inst);
            prop_assert!(!matches.is_empty());
            for t in &matches {
                for (i, s) in inst.words().iter().enumerate() {
                    let h = swap_string(s, t).unwrap();
                    prop_assert!(h.popcount() >= d.budgets[i]);
                    for p in d.applied[i].ones() {
                        prop_assert!(h.bits()[p], "swap {} of word {} not necessary", p + 1, i + 1);
                        prop_assert!(d.tangled_intervals.iter().any(|&(a, b)| a <= p + 1 && p + 2 <= b));
                    }
                }
            }
        }

        #[test]
        fn idempotent_and_order_invariant(inst in instance_near_center()) {
            let d = disentangle(&inst).into_result().unwrap();
            let again = disentangle(&Instance::new(d.strings_prime.clone()).unwrap()).into_result().unwrap();
            prop_assert_eq!(&again.strings_prime, &d.strings_prime);
            prop_assert_eq!(again.total, 0);
            let mut rev = inst.words().to_vec();
            rev.reverse();
            let r = disentangle(&Instance::new(rev).unwrap()).into_result().unwrap();
            prop_assert_eq!(&r.tangled_intervals, &d.tangled_intervals);
            let mut b = r.budgets.clone();
            b.reverse();
            prop_assert_eq!(b, d.budgets);
        }

        #[test]
        fn infeasible_means_no_common_match(words in proptest::collection::vec(proptest::collection::vec(0u8..2, 5), 2..4)) {
            let words: Vec<Word> = words.into_iter().map(|v| Word::new(v.into_iter().map(|x| Symbol((b'a' + x) as char)).collect()).unwrap()).collect();
            let inst = Instance::new(words).unwrap();
            let feasible = !common_matches(&inst).is_empty()
                && inst.words().iter().all(|w| multiset_signature(w) == multiset_signature(&inst.words()[0]));
            prop_assert_eq!(disentangle(&inst).into_result().is_ok(), feasible);
        }
    }
}
