//! Codewords, code assignments and their costs.
//!
//! A codeword is stored run-length encoded: optimal codes over a very cheap
//! letter can contain runs of length `n`, and materializing every letter of
//! every codeword would take quadratic space.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::instance::{Instance, LetterCosts};
use crate::rational::{self, Rational};

/// Index into the sorted letter list. Letter 0 is the cheapest.
pub type Letter = u32;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    runs: Vec<(Letter, u64)>,
}

impl Codeword {
    pub fn new() -> Self {
        Codeword::default()
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut word = Codeword::new();
        for &l in letters {
            word.push(l);
        }
        word
    }

    pub fn repeat(letter: Letter, count: u64) -> Self {
        let mut word = Codeword::new();
        word.push_run(letter, count);
        word
    }

    pub fn push(&mut self, letter: Letter) {
        self.push_run(letter, 1);
    }

    pub fn push_run(&mut self, letter: Letter, count: u64) {
        if count == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((last, len)) if *last == letter => *len += count,
            _ => self.runs.push((letter, count)),
        }
    }

    pub fn extend(&mut self, other: &Codeword) {
        for &(l, c) in &other.runs {
            self.push_run(l, c);
        }
    }

    pub fn concat(&self, other: &Codeword) -> Codeword {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn runs(&self) -> &[(Letter, u64)] {
        &self.runs
    }

    /// Number of letters (the size of the codeword).
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.runs
            .iter()
            .flat_map(|&(l, c)| std::iter::repeat_n(l, c as usize))
    }

    pub fn count(&self, letter: Letter) -> u64 {
        self.runs
            .iter()
            .filter(|&&(l, _)| l == letter)
            .map(|&(_, c)| c)
            .sum()
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.runs.iter().map(|&(l, _)| l).max()
    }

    pub fn cost_units(&self, units: &[u64]) -> u64 {
        self.runs
            .iter()
            .map(|&(l, c)| units[l as usize] * c)
            .sum()
    }

    pub fn cost(&self, letters: &LetterCosts) -> Rational {
        codeword_cost(self, letters)
    }

    pub fn is_prefix_of(&self, other: &Codeword) -> bool {
        let Some((last, head)) = self.runs.split_last() else {
            return true;
        };
        if other.runs.len() < self.runs.len() || other.runs[..head.len()] != *head {
            return false;
        }
        let (ol, oc) = other.runs[head.len()];
        ol == last.0 && oc >= last.1
    }

    pub fn reversed(&self) -> Codeword {
        Codeword {
            runs: self.runs.iter().rev().copied().collect(),
        }
    }

    /// Renders with one glyph per letter.
    pub fn render(&self, glyphs: &[char]) -> String {
        self.letters().map(|l| glyphs[l as usize]).collect()
    }

    pub fn parse(text: &str, glyphs: &[char]) -> Option<Codeword> {
        let mut word = Codeword::new();
        for ch in text.chars() {
            let letter = glyphs.iter().position(|&g| g == ch)?;
            word.push(letter as Letter);
        }
        Some(word)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in self.letters() {
            match char::from_u32('a' as u32 + letter) {
                Some(ch) if letter < 26 => write!(f, "{ch}")?,
                _ => write!(f, "[{letter}]")?,
            }
        }
        Ok(())
    }
}

/// Default glyphs `a`, `b`, `c`, ... for an alphabet of `r` letters.
pub fn default_glyphs(r: usize) -> Vec<char> {
    (0..r as u32)
        .map(|i| char::from_u32('a' as u32 + i).unwrap_or('?'))
        .collect()
}

/// Sum of the letter costs of `word`; panics on a letter outside the alphabet.
pub fn codeword_cost(word: &Codeword, letters: &LetterCosts) -> Rational {
    word.runs
        .iter()
        .fold(rational::int(0), |acc, &(l, c)| {
            acc + letters.cost(l as usize) * Rational::from_integer(BigInt::from(c))
        })
}

/// Word index (in nonincreasing-frequency order) to codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeAssignment {
    codewords: Vec<Codeword>,
    ordered: bool,
}

impl CodeAssignment {
    pub fn new(codewords: Vec<Codeword>) -> Self {
        CodeAssignment {
            codewords,
            ordered: false,
        }
    }

    pub fn from_strings(words: &[&str], glyphs: &[char]) -> Option<Self> {
        let codewords = words
            .iter()
            .map(|w| Codeword::parse(w, glyphs))
            .collect::<Option<Vec<_>>>()?;
        Some(CodeAssignment::new(codewords))
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn into_codewords(self) -> Vec<Codeword> {
        self.codewords
    }

    pub fn get(&self, word: usize) -> Option<&Codeword> {
        self.codewords.get(word)
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// True when the assignment is known to be ordered (set by [`reorder`]).
    pub fn ordered(&self) -> bool {
        self.ordered
    }

    pub fn is_ordered(&self, letters: &LetterCosts) -> bool {
        let costs: Vec<Rational> = self.codewords.iter().map(|c| c.cost(letters)).collect();
        costs.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn check_injective(&self) -> Result<()> {
        let mut sorted: Vec<(usize, &Codeword)> = self.codewords.iter().enumerate().collect();
        sorted.sort_by(|a, b| a.1.cmp(b.1));
        for pair in sorted.windows(2) {
            if pair[0].1 == pair[1].1 {
                let (i, j) = (pair[0].0.min(pair[1].0), pair[0].0.max(pair[1].0));
                return Err(Error::NotInjective(i, j));
            }
        }
        Ok(())
    }

    /// Total cost in integer units: `sum int_weights[i] * units(c_i)`.
    pub fn cost_units(&self, int_weights: &[u64], letter_units: &[u64]) -> u128 {
        self.codewords
            .iter()
            .zip(int_weights)
            .map(|(c, &w)| w as u128 * c.cost_units(letter_units) as u128)
            .sum()
    }
}

/// `sum_i weight_i * cost(c(w_i))` in the instance's own weight scale.
pub fn code_cost(assignment: &CodeAssignment, instance: &Instance) -> Result<Rational> {
    if assignment.len() < instance.n() {
        return Err(Error::MissingCodeword(assignment.len()));
    }
    let letters = instance.letters();
    let mut total = rational::int(0);
    for (w, c) in instance.weights().iter().zip(assignment.codewords()) {
        total += w * c.cost(letters);
    }
    Ok(total)
}

/// `sum_i p_i * cost(c(w_i))` with the weights normalized to probabilities.
pub fn normalized_code_cost(assignment: &CodeAssignment, instance: &Instance) -> Result<Rational> {
    Ok(code_cost(assignment, instance)? / instance.total_weight())
}

/// Hands the cheapest codewords to the most frequent words. Ties keep the
/// original word order, so an ordered input comes back unchanged.
pub fn reorder(assignment: &CodeAssignment, letters: &LetterCosts) -> CodeAssignment {
    let costs: Vec<Rational> = assignment
        .codewords
        .iter()
        .map(|c| c.cost(letters))
        .collect();
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&i, &j| costs[i].cmp(&costs[j]).then(i.cmp(&j)));
    CodeAssignment {
        codewords: order
            .into_iter()
            .map(|i| assignment.codewords[i].clone())
            .collect(),
        ordered: true,
    }
}
