use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word in the generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        free_reduce(letters)
    }

    /// `g^n` for a single generator, `n` possibly negative.
    pub fn power_of_gen(gen: usize, n: i64) -> Self {
        let letter = Letter::new(gen, n < 0);
        Word(vec![letter; n.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(&other.0).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let letters = (0..n.unsigned_abs()).flat_map(|_| base.0.iter().copied());
        free_reduce(letters)
    }

    /// Removes matching first/last letters until the word is cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let s = &self.0;
        let (mut i, mut j) = (0, s.len());
        while j - i >= 2 && s[i] == s[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word(s[i..j].to_vec())
    }

    /// Exponent sum of each generator, `gens` entries long.
    pub fn exponent_sums(&self, gens: usize) -> Vec<i64> {
        let mut out = vec![0; gens];
        for l in &self.0 {
            out[l.gen] += l.sign();
        }
        out
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Renames generators through `map` (old index -> new index).
    pub fn relabel(&self, map: &[usize]) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| Letter::new(map[l.gen], l.inverse))
                .collect(),
        )
    }

    /// Renders with syllable exponents, e.g. `a^2 b^-1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            // The grammar has no empty word; g^0 parses back to it.
            return format!("{}^0", names.first().map(String::as_str).unwrap_or("g"));
        }
        let mut parts = Vec::new();
        let mut iter = self.0.iter().peekable();
        while let Some(&l) = iter.next() {
            let mut count: i64 = 1;
            while iter.peek() == Some(&&l) {
                iter.next();
                count += 1;
            }
            let exp = if l.inverse { -count } else { count };
            let name = &names[l.gen];
            parts.push(if exp == 1 {
                name.clone()
            } else {
                format!("{name}^{exp}")
            });
        }
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_gen().unwrap_or(0))
            .map(|i| format!("g{}", i + 1))
            .collect();
        f.write_str(&self.render(&names))
    }
}

/// Free reduction by cancelling adjacent inverse pairs.
pub fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}
