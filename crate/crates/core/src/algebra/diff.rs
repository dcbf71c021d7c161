use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// A partial-derivative operator written as a nondecreasing word over the
/// alphabet {1, …, p}; "12" is ∂²/∂z_1∂z_2 and the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffWord {
    letters: Vec<usize>,
}

impl DiffWord {
    pub fn identity() -> Self {
        DiffWord { letters: Vec::new() }
    }

    /// Sorts the letters; each must lie in 1..=nvars.
    pub fn new(mut letters: Vec<usize>, nvars: usize) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l > nvars) {
            return Err(Error::InvalidWordLetter { letter: bad, nvars });
        }
        letters.sort_unstable();
        Ok(DiffWord { letters })
    }

    /// Parses digit strings such as `"112"`; letters above 9 use commas (`"1,10"`).
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Self::identity());
        }
        let letters: Option<Vec<usize>> = if text.contains(',') {
            text.split(',').map(|t| t.trim().parse().ok()).collect()
        } else {
            text.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let letters = letters.ok_or_else(|| Error::InvalidFamily(alloc::format!("bad word `{text}`")))?;
        Self::new(letters, nvars)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// Order |Δ| of the operator.
    pub fn order(&self) -> usize {
        self.letters.len()
    }

    /// Multi-index α with α_i = number of occurrences of letter i.
    pub fn multi_index(&self, nvars: usize) -> Vec<u32> {
        let mut alpha = vec![0u32; nvars];
        for &l in &self.letters {
            alpha[l - 1] += 1;
        }
        alpha
    }

    /// Compact text form used in instance files: `""` for the identity.
    pub fn to_compact(&self) -> String {
        if self.letters.iter().any(|&l| l > 9) {
            let parts: Vec<String> = self.letters.iter().map(|l| alloc::format!("{l}")).collect();
            parts.join(",")
        } else {
            self.letters.iter().map(|l| char::from(b'0' + *l as u8)).collect()
        }
    }

    /// The words obtained by deleting one letter.
    pub fn one_letter_deletions(&self) -> Vec<DiffWord> {
        let mut out: Vec<DiffWord> = (0..self.letters.len())
            .map(|i| {
                let mut l = self.letters.clone();
                l.remove(i);
                DiffWord { letters: l }
            })
            .collect();
        out.dedup();
        out
    }

    /// Appends a letter, keeping the canonical sorted form.
    pub fn extended(&self, letter: usize) -> DiffWord {
        let mut l = self.letters.clone();
        let pos = l.partition_point(|&x| x <= letter);
        l.insert(pos, letter);
        DiffWord { letters: l }
    }
}

/// (length, lexicographic) order.
impl Ord for DiffWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for DiffWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DiffWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.to_compact())
        }
    }
}

/// Applies Δ^word to `f`.
pub fn poly_diff(f: &MultiPoly, word: &DiffWord) -> Result<MultiPoly> {
    if let Some(&bad) = word.letters.iter().find(|&&l| l > f.nvars()) {
        return Err(Error::InvalidWordLetter {
            letter: bad,
            nvars: f.nvars(),
        });
    }
    Ok(f.derivative(&word.multi_index(f.nvars())))
}
