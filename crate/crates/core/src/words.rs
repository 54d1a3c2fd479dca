//! Reduced words in a finitely generated free group.
//!
//! The group `G` is free on `l` generators `s_1, ..., s_l`. A letter is a
//! nonzero integer: `k` stands for `s_k` and `-k` for its inverse. A word is
//! reduced when no adjacent pair of letters cancels, and every group element
//! has exactly one reduced spelling, so [`Word`] stores reduced letter
//! sequences only and equality of words is equality in the group.
//!
//! The sphere `G_n` is the set of words of length `n`; its size is
//! `2l (2l-1)^(n-1)` for `n >= 1` and `1` for `n = 0`. Spheres grow
//! geometrically, so every enumeration takes an explicit cap on the number of
//! words it may produce and fails with [`Error::CapExceeded`] instead of
//! attempting an astronomic allocation.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use std::fmt;

use crate::error::{Error, Result};

/// Default bound on the number of words any single enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// The rank of the ambient free group, `l >= 1`.
///
/// The associated walk parameter `r = 1/(2l)` is derived, never stored, so
/// the two can never drift apart.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rank {
    l: usize,
}

impl Rank {
    pub fn new(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::domain("rank must satisfy l >= 1"));
        }
        Ok(Rank { l })
    }

    pub fn l(self) -> usize {
        self.l
    }

    /// Number of letters in the alphabet, `2l`.
    pub fn alphabet_size(self) -> usize {
        2 * self.l
    }

    /// The exact walk parameter `r = 1/(2l)`.
    pub fn r(self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2 * self.l))
    }

    /// `1 - r = (2l-1)/(2l)`, exact.
    pub fn one_minus_r(self) -> BigRational {
        BigRational::new(BigInt::from(2 * self.l - 1), BigInt::from(2 * self.l))
    }

    pub fn r_f64(self) -> f64 {
        1.0 / (2.0 * self.l as f64)
    }

    /// Letters in ascending order: `-l, ..., -1, 1, ..., l`.
    pub fn letters(self) -> impl Iterator<Item = i32> {
        let l = self.l as i32;
        (-l..=l).filter(|&x| x != 0)
    }

    fn check_letter(self, index: usize, letter: i32) -> Result<()> {
        if letter == 0 || letter.unsigned_abs() as usize > self.l {
            return Err(Error::LetterOutOfRange {
                letter: letter as i64,
                index,
                l: self.l,
            });
        }
        Ok(())
    }
}

/// A reduced word. Ordering is lexicographic on the letter sequence with the
/// plain integer order on letters; this is the order in which [`sphere`]
/// enumerates and in which map keys iterate, so all derived output is
/// deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word {
    l: usize,
    letters: Vec<i32>,
}

/// One pass over the letters with a stack suffices: a letter either cancels
/// the current top or becomes the new top, and no earlier pair can reappear.
fn reduce_into(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for x in letters {
        if out.last().is_some_and(|&y| y == -x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl Word {
    pub fn identity(rank: Rank) -> Self {
        Word {
            l: rank.l(),
            letters: Vec::new(),
        }
    }

    /// Builds a word from arbitrary letters, validating the alphabet and
    /// reducing. Accepting unreduced input keeps parsing total: reduction is
    /// idempotent, so already-reduced input passes through unchanged.
    pub fn from_letters(rank: Rank, letters: &[i32]) -> Result<Self> {
        for (index, &letter) in letters.iter().enumerate() {
            rank.check_letter(index, letter)?;
        }
        Ok(Word {
            l: rank.l(),
            letters: reduce_into(letters.iter().copied()),
        })
    }

    /// Parses the comma-separated text form, e.g. `"1,-2,1"`. The empty
    /// string is the identity.
    pub fn parse(rank: Rank, text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Word::identity(rank));
        }
        let mut letters = Vec::new();
        for piece in trimmed.split(',') {
            let letter: i32 = piece
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad letter {piece:?} in word {text:?}")))?;
            letters.push(letter);
        }
        Word::from_letters(rank, &letters)
    }

    pub fn rank(&self) -> Rank {
        Rank { l: self.l }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Word length `|g|`, the distance to the identity in the Cayley graph.
    /// The emptiness test is [`Word::is_identity`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The group inverse: reverse the letters and flip every sign. The
    /// result of reversing a reduced word is reduced.
    pub fn inverse(&self) -> Self {
        Word {
            l: self.l,
            letters: self.letters.iter().rev().map(|&x| -x).collect(),
        }
    }

    /// Group multiplication with cancellation at the seam.
    pub fn multiply(&self, rhs: &Word) -> Result<Word> {
        if self.l != rhs.l {
            return Err(Error::RankMismatch {
                lhs: self.l,
                rhs: rhs.l,
            });
        }
        Ok(Word {
            l: self.l,
            letters: reduce_into(
                self.letters
                    .iter()
                    .chain(rhs.letters.iter())
                    .copied(),
            ),
        })
    }

    /// Text form: letters joined by commas, empty for the identity.
    pub fn text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for letter in &self.letters {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{letter}")?;
            first = false;
        }
        Ok(())
    }
}

/// `|G_n| = 2l (2l-1)^(n-1)` for `n >= 1`, and `|G_0| = 1`.
pub fn sphere_size(rank: Rank, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    let base = BigUint::from(2 * rank.l() - 1);
    BigUint::from(2 * rank.l()) * base.pow(n as u32 - 1)
}

/// Number of words in the closed ball of the given radius.
pub fn ball_size(rank: Rank, radius: usize) -> BigUint {
    (0..=radius).map(|n| sphere_size(rank, n)).sum()
}

fn check_cap(needed: &BigUint, cap: u64) -> Result<usize> {
    if *needed > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            needed: needed.to_string(),
            cap,
        });
    }
    // The cap fits in u64, so the count fits in usize on any 64-bit target.
    Ok(needed.to_string().parse().unwrap_or(usize::MAX))
}

/// Enumerates the sphere `G_n` in lexicographic order of letter sequences.
///
/// The first letter ranges over the whole alphabet; every later letter
/// ranges over the alphabet minus the inverse of its predecessor, which is
/// exactly the reducedness condition. Checking the cap before enumerating
/// keeps the failure mode cheap.
pub fn sphere(rank: Rank, n: usize, cap: u64) -> Result<Vec<Word>> {
    let expected = check_cap(&sphere_size(rank, n), cap)?;
    let mut words = Vec::with_capacity(expected);
    let mut buffer = Vec::with_capacity(n);
    extend_sphere(rank, n, &mut buffer, &mut words);
    debug_assert_eq!(words.len(), expected);
    Ok(words)
}

fn extend_sphere(rank: Rank, n: usize, buffer: &mut Vec<i32>, out: &mut Vec<Word>) {
    if buffer.len() == n {
        out.push(Word {
            l: rank.l(),
            letters: buffer.clone(),
        });
        return;
    }
    let forbidden = buffer.last().map(|&x| -x);
    for letter in rank.letters() {
        if Some(letter) == forbidden {
            continue;
        }
        buffer.push(letter);
        extend_sphere(rank, n, buffer, out);
        buffer.pop();
    }
}

/// The closed ball of the given radius: spheres `0..=radius` concatenated,
/// each in lexicographic order.
pub fn ball(rank: Rank, radius: usize, cap: u64) -> Result<Vec<Word>> {
    let expected = check_cap(&ball_size(rank, radius), cap)?;
    let mut words = Vec::with_capacity(expected);
    for n in 0..=radius {
        // Per-sphere caps already hold because the total does.
        words.extend(sphere(rank, n, cap)?);
    }
    Ok(words)
}
