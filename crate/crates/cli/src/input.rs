//! Instance files.
//!
//! ```text
//! 1 3          letter costs
//! 2 2 1 1      word frequencies
//! a b          optional glyphs, one per letter
//! ```

use std::collections::HashSet;

use thiserror::Error;
use ulcode_core::codeword::default_glyphs;
use ulcode_core::rational::parse_rational;
use ulcode_core::{Instance, LetterCosts, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A parsed instance file, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub costs: Vec<Rational>,
    pub weights: Vec<Rational>,
    pub glyphs: Vec<char>,
}

/// An instance sorted for the solvers, with the maps back to input order.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub instance: Instance,
    /// `word_order[j]` is the input position of sorted word `j`.
    pub word_order: Vec<usize>,
    /// Glyph of each sorted letter.
    pub glyphs: Vec<char>,
    /// Input frequencies as written.
    pub weights: Vec<Rational>,
}

impl LoadedInstance {
    /// Sorted index of each input word.
    pub fn sorted_position(&self) -> Vec<usize> {
        let mut pos = vec![0; self.word_order.len()];
        for (sorted, &input) in self.word_order.iter().enumerate() {
            pos[input] = sorted;
        }
        pos
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut column = 0;
    let mut start = None;
    let mut out = Vec::new();
    for (byte, ch) in line.char_indices() {
        column += 1;
        if ch.is_whitespace() {
            if let Some((col, from)) = start.take() {
                out.push((col, &line[from..byte]));
            }
        } else if start.is_none() {
            start = Some((column, byte));
        }
    }
    if let Some((col, from)) = start {
        out.push((col, &line[from..]));
    }
    out.into_iter()
}

fn positive_values(line_no: usize, line: &str, what: &str) -> Result<Vec<Rational>, ParseError> {
    let mut values = Vec::new();
    for (column, token) in tokens(line) {
        let value = parse_rational(token)
            .ok_or_else(|| ParseError::at(line_no, column, format!("`{token}` is not a number")))?;
        if value <= Rational::from_integer(0.into()) {
            return Err(ParseError::at(
                line_no,
                column,
                format!("{what} must be positive, got `{token}`"),
            ));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(ParseError::at(line_no, 1, format!("no {what}s")));
    }
    Ok(values)
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let line = |i: usize| lines.get(i).copied().unwrap_or("");

    let costs = positive_values(1, line(0), "letter cost")?;
    if costs.len() < 2 {
        return Err(ParseError::at(1, 1, "need at least two letter costs"));
    }
    let weights = positive_values(2, line(1), "frequency")?;

    let glyph_tokens: Vec<(usize, &str)> = tokens(line(2)).collect();
    let glyphs = if glyph_tokens.is_empty() {
        default_glyphs(costs.len())
    } else {
        let mut glyphs = Vec::new();
        // Either one token per letter or a single run such as `01`.
        let single = glyph_tokens.len() == 1 && costs.len() > 1;
        for &(column, token) in &glyph_tokens {
            if single {
                glyphs.extend(token.chars().enumerate().map(|(i, c)| (column + i, c)));
            } else {
                let mut chars = token.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => glyphs.push((column, c)),
                    _ => {
                        return Err(ParseError::at(
                            3,
                            column,
                            format!("glyph `{token}` is not a single character"),
                        ))
                    }
                }
            }
        }
        if glyphs.len() != costs.len() {
            return Err(ParseError::at(
                3,
                1,
                format!("{} glyphs for {} letters", glyphs.len(), costs.len()),
            ));
        }
        let mut seen = HashSet::new();
        for &(column, c) in &glyphs {
            if !seen.insert(c) {
                return Err(ParseError::at(3, column, format!("glyph `{c}` repeats")));
            }
        }
        glyphs.into_iter().map(|(_, c)| c).collect()
    };

    if let Some(extra) = lines.iter().skip(3).position(|l| !l.trim().is_empty()) {
        return Err(ParseError::at(extra + 4, 1, "unexpected content after line 3"));
    }
    Ok(InstanceFile {
        costs,
        weights,
        glyphs,
    })
}

impl InstanceFile {
    /// Sorts letters by cost and words by frequency for the solvers.
    pub fn load(&self, epsilon: Rational) -> ulcode_core::Result<LoadedInstance> {
        let (letters, letter_order) = LetterCosts::from_unsorted(self.costs.clone())?;
        let (instance, word_order) = Instance::from_unsorted(self.weights.clone(), letters, epsilon)?;
        Ok(LoadedInstance {
            instance,
            word_order,
            glyphs: letter_order.iter().map(|&i| self.glyphs[i]).collect(),
            weights: self.weights.clone(),
        })
    }
}
