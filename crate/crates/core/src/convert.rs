//! Turning a k-prefix code into a prefix code.
//!
//! A codeword `w` of cost `>= k` is split as `w = alpha beta`, with `alpha` its
//! shortest prefix of cost `>= k`, and replaced by `alpha enc(i) beta b`, where
//! `i` counts the `b`s in `beta`. Codewords cheaper than `k` are kept.

use crate::codeword::{CodeAssignment, Codeword, Letter};
use crate::error::{Error, Result};
use crate::instance::LetterCosts;
use crate::rational::{self, Rational};
use crate::trie::CodewordTrie;

const A: Letter = 0;
const B: Letter = 1;

/// Escape block: the binary digits of `i` (0 as `a`, 1 as `b`), each doubled,
/// then `ab`. `enc(0) = ab`.
pub fn enc(i: u64) -> Codeword {
    let mut out = Codeword::new();
    if i > 0 {
        let bits = 64 - i.leading_zeros();
        for t in (0..bits).rev() {
            let letter = if (i >> t) & 1 == 1 { B } else { A };
            out.push_run(letter, 2);
        }
    }
    out.push(A);
    out.push(B);
    out
}

/// Output of [`convert_codewords`].
#[derive(Debug, Clone)]
pub struct Conversion {
    pub codewords: Vec<Codeword>,
    /// Number of codewords rewritten.
    pub modified: usize,
    /// Elementary steps spent.
    pub work: u64,
}

/// Grid-level conversion: `letter_units` are the letter costs and `k_units` the
/// threshold, both in the same integer unit. Does not check k-prefix-freeness.
pub fn convert_codewords(codewords: &[Codeword], letter_units: &[u64], k_units: u64) -> Conversion {
    let mut out = Vec::with_capacity(codewords.len());
    let mut modified = 0;
    let mut work = 0u64;
    for word in codewords {
        work += 1;
        let Some((alpha, beta)) = split_at_threshold(word, letter_units, k_units, &mut work) else {
            out.push(word.clone());
            continue;
        };
        let i = beta.count(B);
        let escape = enc(i);
        work += escape.runs().len() as u64 + 1;
        let mut next = alpha;
        next.extend(&escape);
        next.extend(&beta);
        next.push(B);
        out.push(next);
        modified += 1;
    }
    Conversion {
        codewords: out,
        modified,
        work,
    }
}

/// `(alpha, beta)` with `alpha` the shortest prefix of cost `>= k`, or `None`
/// when the whole word costs less than `k`.
fn split_at_threshold(
    word: &Codeword,
    letter_units: &[u64],
    k_units: u64,
    work: &mut u64,
) -> Option<(Codeword, Codeword)> {
    let mut acc = 0u64;
    let mut alpha = Codeword::new();
    let runs = word.runs();
    for (at, &(letter, len)) in runs.iter().enumerate() {
        *work += 1;
        let u = letter_units[letter as usize];
        if acc + u * len < k_units {
            acc += u * len;
            alpha.push_run(letter, len);
            continue;
        }
        let take = (k_units - acc).div_ceil(u).max(1);
        alpha.push_run(letter, take);
        let mut beta = Codeword::new();
        beta.push_run(letter, len - take);
        for &(l, n) in &runs[at + 1..] {
            beta.push_run(l, n);
        }
        return Some((alpha, beta));
    }
    None
}

/// Converts a k-prefix code (word order preserved) into a prefix code.
pub fn convert_to_prefix(
    code: &CodeAssignment,
    letters: &LetterCosts,
    k: &Rational,
) -> Result<CodeAssignment> {
    let (units, unit) = letters.integer_grid()?;
    let trie = CodewordTrie::from_assignment(code)?;
    let threshold = rational::ceil_u64(&(k / &unit)).ok_or(Error::CostOverflow)?;
    if !trie.is_k_prefix_free_units(&units, threshold) {
        return Err(Error::NotKPrefixFree(rational::format_rational(k)));
    }
    for c in code.codewords() {
        if let Some(l) = c.max_letter() {
            if l as usize >= letters.len() {
                return Err(Error::BadLetter(l));
            }
        }
    }
    let done = convert_codewords(code.codewords(), &units, threshold);
    Ok(CodeAssignment::new(done.codewords))
}

/// `1 + l_2 (5 + 2 log2 k) / k`, the worst-case cost inflation of conversion.
pub fn conversion_ratio_bound(ell2: f64, k: f64) -> f64 {
    1.0 + ell2 * (5.0 + 2.0 * k.log2()) / k
}
