//! Swap permutations encoded as binary strings.
//!
//! A swap string for words of length `n` has `n - 1` bits; bit `p` (0-based)
//! marks an exchange of positions `p` and `p + 1`. Valid swap strings never
//! contain two adjacent ones.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{Symbol, Word};

/// A set of pairwise compatible adjacent swaps on words of length `home_length`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwapStr {
    bits: Vec<bool>,
    home_length: usize,
}

impl SwapStr {
    pub fn new(bits: Vec<bool>, home_length: usize) -> Result<Self> {
        if home_length == 0 || bits.len() + 1 != home_length {
            return Err(Error::InvalidSwapString(format!(
                "{} bits cannot act on words of length {home_length}",
                bits.len()
            )));
        }
        if let Some(p) = bits.windows(2).position(|w| w[0] && w[1]) {
            return Err(Error::InvalidSwapString(format!(
                "adjacent swaps at positions {} and {}",
                p + 1,
                p + 2
            )));
        }
        Ok(SwapStr { bits, home_length })
    }

    /// The identity permutation.
    pub fn zeros(home_length: usize) -> Self {
        assert!(home_length >= 1);
        SwapStr {
            bits: vec![false; home_length - 1],
            home_length,
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn home_length(&self) -> usize {
        self.home_length
    }

    /// Number of swaps.
    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// 0-based positions of the swaps.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(p, _)| p)
    }

    /// The bits as a word over `0`/`1`. Needs at least one bit.
    pub fn to_word(&self) -> Result<Word> {
        Word::new(
            self.bits
                .iter()
                .map(|&b| Symbol(if b { '1' } else { '0' }))
                .collect(),
        )
    }

    /// Reads a `0`/`1` word back as a swap string for words one longer.
    pub fn from_word(w: &Word) -> Result<Self> {
        let bits = w
            .symbols()
            .iter()
            .map(|s| match s.0 {
                '0' => Ok(false),
                '1' => Ok(true),
                c => Err(Error::InvalidSwapString(format!("unexpected symbol '{c}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        SwapStr::new(bits, w.len() + 1)
    }
}

impl FromStr for SwapStr {
    type Err = Error;

    /// Parses a `0`/`1` string; the home length is one more than its length.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                c => Err(Error::InvalidSwapString(format!("unexpected character '{c}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let n = bits.len() + 1;
        SwapStr::new(bits, n)
    }
}

impl fmt::Display for SwapStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_bits(&self.bits, f)
    }
}

impl Serialize for SwapStr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A raw binary sequence. Unlike [`SwapStr`] it may contain `11`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn popcount(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// 0-based index `q` of the first pair `q - 1, q` of adjacent ones.
    pub fn first_adjacent_ones(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] && w[1]).map(|q| q + 1)
    }

    pub fn into_swap_str(self, home_length: usize) -> Result<SwapStr> {
        SwapStr::new(self.0, home_length)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                c => Err(Error::InvalidSwapString(format!("unexpected character '{c}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_bits(&self.0, f)
    }
}

fn fmt_bits(bits: &[bool], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for &b in bits {
        f.write_str(if b { "1" } else { "0" })?;
    }
    Ok(())
}

/// The unique valid swap string turning `s` into `t`.
///
/// Single left-to-right pass: the first mismatch at `p` can only be fixed by
/// a swap at `(p, p + 1)`. On failure the 1-based position of the first
/// mismatch that no swap can fix is reported.
pub fn swap_string(s: &Word, t: &Word) -> Result<SwapStr> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    let (a, b) = (s.symbols(), t.symbols());
    let n = a.len();
    let mut bits = vec![false; n - 1];
    let mut p = 0;
    while p < n {
        if a[p] == b[p] {
            p += 1;
            continue;
        }
        if p + 1 < n && a[p] == b[p + 1] && a[p + 1] == b[p] {
            bits[p] = true;
            p += 2;
        } else {
            return Err(Error::NotMatching { position: p + 1 });
        }
    }
    Ok(SwapStr {
        bits,
        home_length: n,
    })
}

/// Exchanges every marked adjacent pair of `s`.
///
/// Total: marked pairs holding equal symbols are "swapped" too, in which case
/// `h` is not the valid swap string between `s` and the result.
pub fn apply_swaps(s: &Word, h: &SwapStr) -> Result<Word> {
    if h.home_length != s.len() {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: h.home_length,
        });
    }
    let mut out = s.clone();
    let syms = out.symbols_mut();
    for p in h.ones() {
        syms.swap(p, p + 1);
    }
    Ok(out)
}

/// Number of swaps between matching words, `None` (infinity) otherwise.
pub fn swap_distance(s: &Word, t: &Word) -> Option<usize> {
    swap_string(s, t).ok().map(|h| h.popcount())
}

/// Position-wise XOR.
pub fn xor_compose(h1: &[bool], h2: &[bool]) -> Result<BitString> {
    if h1.len() != h2.len() {
        return Err(Error::LengthMismatch {
            left: h1.len(),
            right: h2.len(),
        });
    }
    Ok(BitString(
        h1.iter().zip(h2).map(|(&a, &b)| a != b).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreeWayOutcome {
    /// `s1` and `s3` match through `h`.
    Matching { h: SwapStr },
    /// The composed string has ones at 1-based positions `p - 1` and `p`;
    /// every word matching both `s1` and `s3` carries `forced_window` at
    /// positions `p - 1 ..= p + 1`.
    Blocked { p: usize, forced_window: [Symbol; 3] },
}

/// Composes `h(s1, s2)` with `h(s2, s3)` and classifies the result.
pub fn three_way_match(s1: &Word, s2: &Word, s3: &Word) -> Result<ThreeWayOutcome> {
    let h12 = swap_string(s1, s2)
        .map_err(|e| Error::PrerequisiteNotMatching(format!("s1, s2: {e}")))?;
    let h23 = swap_string(s2, s3)
        .map_err(|e| Error::PrerequisiteNotMatching(format!("s2, s3: {e}")))?;
    let h = xor_compose(h12.bits(), h23.bits())?;
    match h.first_adjacent_ones() {
        None => Ok(ThreeWayOutcome::Matching {
            h: h.into_swap_str(s1.len())?,
        }),
        Some(q) => {
            let w = s2.symbols();
            Ok(ThreeWayOutcome::Blocked {
                p: q + 1,
                forced_window: [w[q - 1], w[q], w[q + 1]],
            })
        }
    }
}
