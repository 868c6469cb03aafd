//! Words in the free group `F_d`.
//!
//! A letter is a signed generator index: `i` stands for `x_i` and `-i` for
//! its inverse, `1 <= i <= d`. Words are always stored freely reduced; a
//! sampled word also remembers the length it had before reduction.

use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::groups::{Group, GroupElement, Idx};
use crate::{Error, Result};

pub type Letter = i32;

/// Longest word accepted from user input.
pub const MAX_WORD_LEN: usize = 10_000;

#[derive(Clone, Debug, Eq)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
    sampled_length: Option<usize>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.letters == other.letters
    }
}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.letters.hash(state);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingModel {
    /// `n` letters drawn uniformly from `x_1..x_d`.
    Positive,
    /// `n` letters drawn uniformly from the `2d` generators and inverses,
    /// then reduced.
    #[default]
    Symmetric,
}

impl std::str::FromStr for SamplingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "positive" => Ok(SamplingModel::Positive),
            "symmetric" => Ok(SamplingModel::Symmetric),
            other => Err(Error::Parse(format!("unknown sampling model {other:?}"))),
        }
    }
}

impl fmt::Display for SamplingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplingModel::Positive => "positive",
            SamplingModel::Symmetric => "symmetric",
        })
    }
}

/// Exponent-sum vector of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianVector(pub Vec<i64>);

/// Free reduction of a raw letter sequence.
pub fn reduce(raw: &[i64], rank: usize) -> Result<Word> {
    if rank == 0 {
        return Err(Error::Parse("rank must be at least 1".into()));
    }
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        if l == 0 || l.unsigned_abs() as usize > rank {
            return Err(Error::BadLetter { letter: l, rank });
        }
        let l = l as Letter;
        if stack.last() == Some(&-l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    if stack.len() > MAX_WORD_LEN {
        return Err(Error::WordTooLong {
            len: stack.len(),
            limit: MAX_WORD_LEN,
        });
    }
    Ok(Word {
        rank,
        letters: stack,
        sampled_length: None,
    })
}

fn reduce_unchecked(raw: impl IntoIterator<Item = Letter>, rank: usize) -> Word {
    let mut stack: Vec<Letter> = Vec::new();
    for l in raw {
        if stack.last() == Some(&-l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    Word {
        rank,
        letters: stack,
        sampled_length: None,
    }
}

impl Word {
    pub fn empty(rank: usize) -> Self {
        Word {
            rank: rank.max(1),
            letters: Vec::new(),
            sampled_length: None,
        }
    }

    /// Parses `"1 2 -1 -2"` or the compact form `"x1 x2 X1 X2"` (capital
    /// letters are inverses). Commas are accepted as separators. Without an
    /// explicit rank the largest generator index is used.
    pub fn parse(text: &str, rank: Option<usize>) -> Result<Self> {
        let raw = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|tok| {
                let bad = || Error::Parse(format!("bad letter {tok:?}"));
                if let Some(n) = tok.strip_prefix('x') {
                    n.parse::<i64>().ok().filter(|&n| n > 0).ok_or_else(bad)
                } else if let Some(n) = tok.strip_prefix('X') {
                    n.parse::<i64>()
                        .ok()
                        .filter(|&n| n > 0)
                        .map(|n| -n)
                        .ok_or_else(bad)
                } else {
                    tok.parse::<i64>().map_err(|_| bad())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let inferred = raw
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(1);
        reduce(&raw, rank.unwrap_or(inferred))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Length before reduction, for sampled words.
    pub fn sampled_length(&self) -> Option<usize> {
        self.sampled_length
    }

    pub fn with_rank(mut self, rank: usize) -> Result<Self> {
        if self
            .letters
            .iter()
            .any(|l| l.unsigned_abs() as usize > rank)
            || rank == 0
        {
            return Err(Error::Parse(format!("word does not fit in rank {rank}")));
        }
        self.rank = rank;
        Ok(self)
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
            sampled_length: None,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let rank = self.rank.max(other.rank);
        reduce_unchecked(self.letters.iter().chain(&other.letters).copied(), rank)
    }

    pub fn pow(&self, k: u32) -> Word {
        let rank = self.rank;
        reduce_unchecked((0..k).flat_map(|_| self.letters.iter().copied()), rank)
    }

    /// Compact text form, `x1 x2 X1 X2`.
    pub fn compact(&self) -> String {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&l| {
                if l > 0 {
                    format!("x{l}")
                } else {
                    format!("X{}", -l)
                }
            })
            .collect();
        parts.join(" ")
    }

    pub fn abelianize(&self) -> AbelianVector {
        let mut v = vec![0i64; self.rank];
        for &l in &self.letters {
            v[l.unsigned_abs() as usize - 1] += i64::from(l.signum());
        }
        AbelianVector(v)
    }

    /// Splits the word as `u · c · u⁻¹` with `c` cyclically reduced and
    /// returns `(|u|, c)`.
    pub fn cyclic_core(&self) -> (usize, &[Letter]) {
        let w = &self.letters;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        (i, &w[i..j])
    }

    /// Decides whether the word is a proper power `w₀^k`, `k >= 2`, in the
    /// free group. Returns the primitive root and the largest such exponent.
    pub fn power_decomposition(&self) -> Result<Option<(Word, u32)>> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let (u, core) = self.cyclic_core();
        let n = core.len();
        let period = (1..=n / 2)
            .filter(|t| n % t == 0)
            .find(|&t| core.chunks(t).all(|chunk| chunk == &core[..t]));
        let Some(t) = period else {
            return Ok(None);
        };
        let prefix = &self.letters[..u];
        let root_letters: Vec<Letter> = prefix
            .iter()
            .chain(&core[..t])
            .copied()
            .chain(prefix.iter().rev().map(|l| -l))
            .collect();
        let root = Word {
            rank: self.rank,
            letters: root_letters,
            sampled_length: None,
        };
        Ok(Some((root, (n / t) as u32)))
    }

    /// Substitutes group elements for the generators.
    pub fn evaluate(&self, g: &Group, tuple: &[GroupElement]) -> Result<GroupElement> {
        if tuple.len() != self.rank {
            return Err(Error::RankMismatch {
                word: self.rank,
                given: tuple.len(),
            });
        }
        let idx = g.indices(tuple)?;
        g.element(self.evaluate_indices(g, &idx))
    }

    /// Unchecked evaluation on raw carrier indices.
    #[inline]
    pub fn evaluate_indices(&self, g: &Group, tuple: &[Idx]) -> Idx {
        self.letters.iter().fold(0, |acc, &l| {
            let x = tuple[l.unsigned_abs() as usize - 1];
            g.op(acc, if l > 0 { x } else { g.inv(x) })
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(Letter::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Draws a word of `n` letters under the given model. The result is reduced
/// and remembers `n` as its sampled length.
pub fn sample_word<R: Rng + ?Sized>(
    model: SamplingModel,
    rank: usize,
    n: usize,
    rng: &mut R,
) -> Word {
    let d = rank as Letter;
    let raw = (0..n).map(|_| match model {
        SamplingModel::Positive => rng.random_range(1..=d),
        SamplingModel::Symmetric => {
            let k = rng.random_range(0..2 * d);
            if k < d {
                k + 1
            } else {
                -(k - d + 1)
            }
        }
    });
    let mut w = reduce_unchecked(raw.collect::<Vec<_>>(), rank);
    w.sampled_length = Some(n);
    w
}

impl AbelianVector {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// gcd of the coordinates; 0 for the zero vector.
    pub fn gamma(&self) -> u64 {
        self.0.iter().fold(0u64, |g, &a| g.gcd(&a.unsigned_abs()))
    }

    /// Integers `b` with `Σ aᵢbᵢ = gamma`, each `|bᵢ| <= max |aᵢ|`.
    pub fn bezout_certificate(&self) -> Result<(u64, Vec<i64>)> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let a = &self.0;
        let mut b = vec![0i64; a.len()];
        let mut g = 0i64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            if g == 0 {
                g = ai.abs();
                b[i] = ai.signum();
                continue;
            }
            let e = g.extended_gcd(&ai);
            // e.x * g + e.y * ai = e.gcd
            for bj in b.iter_mut().take(i) {
                *bj *= e.x;
            }
            b[i] = e.y;
            g = e.gcd;
        }
        shrink_certificate(a, &mut b);
        debug_assert_eq!(a.iter().zip(&b).map(|(x, y)| x * y).sum::<i64>(), g);
        Ok((g as u64, b))
    }
}

fn objective(b: &[i64]) -> (i64, i64) {
    (
        b.iter().map(|x| x.abs()).max().unwrap_or(0),
        b.iter().map(|x| x.abs()).sum(),
    )
}

/// Moves `b` along kernel vectors `(a_j/g)e_i - (a_i/g)e_j` to shrink it,
/// first against the largest coordinate of `a`, then pairwise until no move
/// lowers `(max |b|, Σ |b|)`.
fn shrink_certificate(a: &[i64], b: &mut [i64]) {
    let nonzero: Vec<usize> = (0..a.len()).filter(|&i| a[i] != 0).collect();
    let Some(&pivot) = nonzero.iter().max_by_key(|&&i| a[i].abs()) else {
        return;
    };
    let step = |b: &mut [i64], i: usize, j: usize, k: i64| {
        let g = a[i].gcd(&a[j]);
        b[i] += k * (a[j] / g);
        b[j] -= k * (a[i] / g);
    };
    for &i in &nonzero {
        if i == pivot {
            continue;
        }
        let u = a[pivot] / a[i].gcd(&a[pivot]);
        let k = -Integer::div_floor(&b[i], &u);
        step(b, i, pivot, k);
        if 2 * b[i].abs() > u.abs() {
            step(b, i, pivot, -b[i].signum() * u.signum());
        }
    }
    loop {
        let mut improved = false;
        for &i in &nonzero {
            for &j in &nonzero {
                if i >= j {
                    continue;
                }
                let g = a[i].gcd(&a[j]);
                let (u, v) = (a[j] / g, a[i] / g);
                let centers = [-b[i] as f64 / u as f64, b[j] as f64 / v as f64];
                let mut best = objective(b);
                let mut best_k = 0;
                for c in centers {
                    for k in [c.floor() as i64, c.ceil() as i64] {
                        let mut trial = b.to_vec();
                        trial[i] += k * u;
                        trial[j] -= k * v;
                        let o = objective(&trial);
                        if o < best {
                            best = o;
                            best_k = k;
                        }
                    }
                }
                if best_k != 0 {
                    b[i] += best_k * u;
                    b[j] -= best_k * v;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}
