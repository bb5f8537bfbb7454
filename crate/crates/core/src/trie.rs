//! Codeword trie with run-labelled edges.
//!
//! Every edge carries a letter and a repeat count, so `a^n b` costs two edges
//! instead of `n + 1` nodes. A node has at most one outgoing edge per letter.

use crate::codeword::{CodeAssignment, Codeword, Letter};
use crate::error::{Error, Result};
use crate::instance::LetterCosts;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Edge {
    letter: Letter,
    run: u64,
    child: usize,
}

#[derive(Debug, Clone, Default)]
struct Node {
    edges: Vec<Edge>,
    word: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CodewordTrie {
    nodes: Vec<Node>,
    words: usize,
}

impl Default for CodewordTrie {
    fn default() -> Self {
        Self::new()
    }
}

impl CodewordTrie {
    pub fn new() -> Self {
        CodewordTrie {
            nodes: vec![Node::default()],
            words: 0,
        }
    }

    /// Builds a trie where word `i` is `codewords[i]`.
    pub fn from_codewords(codewords: &[Codeword]) -> Result<Self> {
        let mut trie = CodewordTrie::new();
        for (i, c) in codewords.iter().enumerate() {
            if let Some(prev) = trie.insert(c, i) {
                return Err(Error::NotInjective(prev, i));
            }
        }
        Ok(trie)
    }

    pub fn from_assignment(code: &CodeAssignment) -> Result<Self> {
        Self::from_codewords(code.codewords())
    }

    pub fn word_count(&self) -> usize {
        self.words
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Marks `codeword` with `word`. Returns the word already stored there, if any,
    /// leaving the trie unchanged in that case.
    pub fn insert(&mut self, codeword: &Codeword, word: usize) -> Option<usize> {
        let mut node = 0;
        for &(letter, len) in codeword.runs() {
            let mut left = len;
            while left > 0 {
                node = self.step(node, letter, &mut left);
            }
        }
        match self.nodes[node].word {
            Some(prev) => Some(prev),
            None => {
                self.nodes[node].word = Some(word);
                self.words += 1;
                None
            }
        }
    }

    /// Follows (or creates) the `letter` edge out of `node`, consuming up to `left` letters.
    fn step(&mut self, node: usize, letter: Letter, left: &mut u64) -> usize {
        let pos = self.nodes[node].edges.binary_search_by_key(&letter, |e| e.letter);
        match pos {
            Err(at) => {
                let child = self.push_node();
                self.nodes[node].edges.insert(
                    at,
                    Edge {
                        letter,
                        run: *left,
                        child,
                    },
                );
                *left = 0;
                child
            }
            Ok(at) => {
                let edge = self.nodes[node].edges[at];
                if edge.run <= *left {
                    *left -= edge.run;
                    edge.child
                } else {
                    let mid = self.push_node();
                    self.nodes[mid].edges.push(Edge {
                        letter,
                        run: edge.run - *left,
                        child: edge.child,
                    });
                    self.nodes[node].edges[at] = Edge {
                        letter,
                        run: *left,
                        child: mid,
                    };
                    *left = 0;
                    mid
                }
            }
        }
    }

    fn push_node(&mut self) -> usize {
        self.nodes.push(Node::default());
        self.nodes.len() - 1
    }

    /// Word stored exactly at `codeword`, if any.
    pub fn lookup(&self, codeword: &Codeword) -> Option<usize> {
        let mut node = 0;
        for &(letter, len) in codeword.runs() {
            let mut left = len;
            while left > 0 {
                let edge = self.nodes[node]
                    .edges
                    .iter()
                    .find(|e| e.letter == letter)?;
                if edge.run > left {
                    return None;
                }
                left -= edge.run;
                node = edge.child;
            }
        }
        self.nodes[node].word
    }

    /// All `(word, codeword)` pairs in depth-first, letter order.
    pub fn codewords(&self) -> Vec<(usize, Codeword)> {
        let mut out = Vec::with_capacity(self.words);
        let mut stack = vec![(0usize, Codeword::new())];
        while let Some((node, path)) = stack.pop() {
            if let Some(w) = self.nodes[node].word {
                out.push((w, path.clone()));
            }
            for e in self.nodes[node].edges.iter().rev() {
                let mut next = path.clone();
                next.push_run(e.letter, e.run);
                stack.push((e.child, next));
            }
        }
        out
    }

    /// Codewords with no proper prefix in the set, with their integer cost.
    pub fn minimal_codewords(&self, letter_units: &[u64]) -> Vec<(Codeword, u64)> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, Codeword::new(), 0u64)];
        while let Some((node, path, cost)) = stack.pop() {
            if self.nodes[node].word.is_some() {
                out.push((path, cost));
                continue;
            }
            for e in self.nodes[node].edges.iter().rev() {
                let mut next = path.clone();
                next.push_run(e.letter, e.run);
                stack.push((e.child, next, cost + letter_units[e.letter as usize] * e.run));
            }
        }
        out
    }

    /// No codeword is a prefix of another.
    pub fn is_prefix_free(&self) -> bool {
        self.no_marked_below(|_| true, &[])
    }

    /// No codeword of cost below `threshold` units is a prefix of another.
    pub fn is_k_prefix_free_units(&self, letter_units: &[u64], threshold: u64) -> bool {
        self.no_marked_below(|cost| cost < threshold, letter_units)
    }

    pub fn is_k_prefix_free(&self, letters: &LetterCosts, k: &Rational) -> bool {
        let Ok((units, unit)) = letters.integer_grid() else {
            return false;
        };
        let threshold = rational::ceil_u64(&(k / &unit)).unwrap_or(u64::MAX);
        self.is_k_prefix_free_units(&units, threshold)
    }

    fn no_marked_below(&self, blocks: impl Fn(u64) -> bool, letter_units: &[u64]) -> bool {
        // (node, cost, an ancestor codeword forbids further codewords)
        let mut stack = vec![(0usize, 0u64, false)];
        while let Some((node, cost, blocked)) = stack.pop() {
            let here = &self.nodes[node];
            let mut blocked_below = blocked;
            if here.word.is_some() {
                if blocked {
                    return false;
                }
                blocked_below = blocks(cost);
            }
            for e in &here.edges {
                let step = letter_units
                    .get(e.letter as usize)
                    .map_or(0, |&u| u.saturating_mul(e.run));
                stack.push((e.child, cost.saturating_add(step), blocked_below));
            }
        }
        true
    }
}

/// Pairwise-free check for a list of codewords; duplicates count as prefixes.
pub fn is_prefix_free(codewords: &[Codeword]) -> bool {
    CodewordTrie::from_codewords(codewords).is_ok_and(|t| t.is_prefix_free())
}

/// No codeword of cost less than `k` is a prefix of another codeword.
pub fn is_k_prefix_free(codewords: &[Codeword], letters: &LetterCosts, k: &Rational) -> bool {
    CodewordTrie::from_codewords(codewords).is_ok_and(|t| t.is_k_prefix_free(letters, k))
}
