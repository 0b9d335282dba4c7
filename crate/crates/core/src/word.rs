//! Alphabets, words and letter counts.
//!
//! Letters are small integers `0..k`. For `k <= 26` a word prints as a
//! compact string (`a`, `b`, `c`, ...); larger alphabets print as
//! comma-separated integers. External positions are 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = u8;

/// Largest alphabet a [`Word`] can carry (letters are stored as bytes).
pub const MAX_ALPHABET: usize = 256;

/// Alphabet of size `k`; its letters are `0..k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_ALPHABET {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Self(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn is_compact(self) -> bool {
        self.0 <= 26
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.0).map(|l| l as Letter)
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = Error;
    fn try_from(size: usize) -> Result<Self> {
        Alphabet::new(size)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.0
    }
}

/// A finite word over an [`Alphabet`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<Letter>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= alphabet.size()) {
            return Err(Error::InvalidLetter {
                letter: bad as usize,
                size: alphabet.size(),
            });
        }
        Ok(Self { alphabet, letters })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Parses a word, inferring the alphabet as `max letter + 1`.
    pub fn parse(text: &str) -> Result<Self> {
        let letters = parse_letters(text)?;
        let size = letters.iter().map(|&l| l as usize + 1).max().unwrap_or(1);
        Word::new(Alphabet::new(size)?, letters)
    }

    /// Parses a word over a given alphabet.
    pub fn parse_with(text: &str, alphabet: Alphabet) -> Result<Self> {
        Word::new(alphabet, parse_letters(text)?)
    }

    /// Decodes `index` as a base-`k` numeral of `len` digits, most significant first.
    pub fn from_index(alphabet: Alphabet, len: usize, mut index: u64) -> Self {
        let k = alphabet.size() as u64;
        let mut letters = vec![0; len];
        for slot in letters.iter_mut().rev() {
            *slot = (index % k) as Letter;
            index /= k;
        }
        Self { alphabet, letters }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
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

    /// The subword at the given 1-based, strictly increasing positions.
    pub fn induced_subword(&self, indices: &[usize]) -> Result<Word> {
        check_positions(indices, self.len())?;
        Ok(Word {
            alphabet: self.alphabet,
            letters: indices.iter().map(|&i| self.letters[i - 1]).collect(),
        })
    }

    pub fn letter_counts(&self) -> LetterCounts {
        let mut counts = vec![0usize; self.alphabet.size()];
        for &l in &self.letters {
            counts[l as usize] += 1;
        }
        LetterCounts { counts }
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    /// Applies the letter map `perm` (a permutation of `0..k`).
    pub fn relabeled(&self, perm: &[Letter]) -> Result<Word> {
        let k = self.alphabet.size();
        let mut seen = vec![false; k];
        if perm.len() != k
            || perm
                .iter()
                .any(|&p| (p as usize) >= k || std::mem::replace(&mut seen[p as usize], true))
        {
            return Err(Error::Domain(format!("{perm:?} is not a permutation of 0..{k}")));
        }
        Ok(Word {
            alphabet: self.alphabet,
            letters: self.letters.iter().map(|&l| perm[l as usize]).collect(),
        })
    }

    /// Deletes every letter `>= keep`, returning a word over the first `keep` letters
    /// together with the (0-based) original position of each kept letter.
    pub fn restrict_below(&self, keep: usize) -> Result<(Word, Vec<usize>)> {
        let alphabet = Alphabet::new(keep)?;
        let (positions, letters): (Vec<usize>, Vec<Letter>) = self
            .letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| (l as usize) < keep)
            .map(|(i, &l)| (i, l))
            .unzip();
        Ok((Word { alphabet, letters }, positions))
    }

    /// Splits into consecutive pieces of length `len`, dropping the remainder.
    pub fn segments(&self, len: usize) -> impl Iterator<Item = Word> + '_ {
        let alphabet = self.alphabet;
        self.letters.chunks_exact(len.max(1)).map(move |c| Word {
            alphabet,
            letters: c.to_vec(),
        })
    }

    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Word> {
        Word::new(alphabet, self.letters.clone())
    }

    pub fn push(&mut self, letter: Letter) -> Result<()> {
        if letter as usize >= self.alphabet.size() {
            return Err(Error::InvalidLetter {
                letter: letter as usize,
                size: self.alphabet.size(),
            });
        }
        self.letters.push(letter);
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.is_compact() {
            for &l in &self.letters {
                write!(f, "{}", (b'a' + l) as char)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if text.contains(',') || text.chars().all(|c| c.is_ascii_digit()) {
        text.split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<usize>()
                    .ok()
                    .filter(|&v| v < MAX_ALPHABET)
                    .map(|v| v as Letter)
                    .ok_or_else(|| Error::Parse(format!("bad letter `{part}`")))
            })
            .collect()
    } else {
        text.chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as u8 - b'a'),
                _ => Err(Error::Parse(format!("bad letter `{c}`"))),
            })
            .collect()
    }
}

pub(crate) fn check_positions(indices: &[usize], n: usize) -> Result<()> {
    for (j, &i) in indices.iter().enumerate() {
        if i == 0 || i > n {
            return Err(Error::InvalidIndex(format!("position {i} outside 1..={n}")));
        }
        if j > 0 && indices[j - 1] >= i {
            return Err(Error::InvalidIndex(format!(
                "positions {} and {i} are not strictly increasing",
                indices[j - 1]
            )));
        }
    }
    Ok(())
}

/// Occurrence counts `M_1..M_k` of each letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LetterCounts {
    counts: Vec<usize>,
}

impl LetterCounts {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        Alphabet::new(counts.len())?;
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.counts.len())
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn get(&self, letter: Letter) -> usize {
        self.counts[letter as usize]
    }
}
