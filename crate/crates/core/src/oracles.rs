//! Exact solvers for small instances and the `1 - p_1` lower bound.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::codeword::{reorder, CodeAssignment, Codeword, Letter};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::{self, Rational};

/// Largest word count [`exact_optimal`] accepts.
pub const EXACT_WORD_LIMIT: usize = 10;

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Sum of raw weight times codeword cost.
    pub optimal_cost: Rational,
    /// Word `j` (in the instance's sorted order) gets codeword `j`.
    pub optimal_code: CodeAssignment,
    pub nodes_explored: u64,
}

/// Default letter-count cap for codewords searched by [`exact_optimal`].
pub fn default_depth_cap(n: usize) -> u32 {
    (2 * n).max(1) as u32
}

type Frontier = BTreeMap<(u64, u32), Vec<Codeword>>;

struct Search<'a> {
    units: &'a [u64],
    weights: &'a [u64],
    /// `suffix[j]` = total weight of words `j..`.
    suffix: Vec<u128>,
    depth_cap: u32,
    best: Option<(u128, Vec<Codeword>)>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, frontier: Frontier, assigned: &mut Vec<Codeword>, cost: u128) {
        self.nodes += 1;
        let j = assigned.len();
        let n = self.weights.len();
        if j == n {
            if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                self.best = Some((cost, assigned.clone()));
            }
            return;
        }
        let mut frontier = frontier;
        let Some(((c, depth), class)) = frontier.pop_first() else {
            return;
        };
        let remaining = n - j;
        if let Some((best, _)) = &self.best {
            if cost + c as u128 * self.suffix[j] >= *best {
                return;
            }
        }
        let m = class.len();
        let expandable = depth < self.depth_cap;
        for x in (0..=m.min(remaining)).rev() {
            let mut spent = cost;
            for t in 0..x {
                spent += self.weights[j + t] as u128 * c as u128;
            }
            let left = remaining - x;
            let max_y = if expandable { (m - x).min(left / 2) } else { 0 };
            for y in (0..=max_y).rev() {
                if left > 0 && y == 0 && frontier.is_empty() {
                    continue;
                }
                let mut next = frontier.clone();
                for node in &class[x..x + y] {
                    for (letter, &u) in self.units.iter().enumerate() {
                        let mut child = node.clone();
                        child.push(letter as Letter);
                        next.entry((c + u, depth + 1)).or_default().push(child);
                    }
                }
                let before = assigned.len();
                assigned.extend(class[..x].iter().cloned());
                self.run(next, assigned, spent);
                assigned.truncate(before);
            }
        }
    }
}

/// Minimum-cost prefix code over codewords of at most `depth_cap` letters, by
/// branch and bound over the cheapest open tree nodes. Nodes of equal cost and
/// depth are interchangeable, so each step only picks how many of them become
/// codewords and how many are expanded.
pub fn exact_optimal(instance: &Instance, depth_cap: u32) -> Result<OracleResult> {
    let n = instance.n();
    if n > EXACT_WORD_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXACT_WORD_LIMIT,
        });
    }
    let (units, unit) = instance.letters().integer_grid()?;
    let weights = instance.int_weights();
    let mut suffix = vec![0u128; n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1] + weights[j] as u128;
    }
    let mut root = Frontier::new();
    for (letter, &u) in units.iter().enumerate() {
        root.entry((u, 1))
            .or_default()
            .push(Codeword::from_letters(&[letter as Letter]));
    }
    let mut search = Search {
        units: &units,
        weights,
        suffix,
        depth_cap: depth_cap.max(1),
        best: None,
        nodes: 0,
    };
    search.run(root, &mut Vec::with_capacity(n), 0);
    let (best, words) = search.best.ok_or(Error::NoFeasibleGuess)?;
    let optimal_cost = rational::from_u128(best) * unit * instance.weight_unit();
    let code = reorder(&CodeAssignment::new(words), instance.letters());
    Ok(OracleResult {
        optimal_cost,
        optimal_code: code,
        nodes_explored: search.nodes,
    })
}

/// Classical r-ary Huffman code; only for alphabets whose letters all cost the same.
pub fn huffman_equal_costs(instance: &Instance) -> Result<OracleResult> {
    let letters = instance.letters();
    if !letters.all_equal() {
        return Err(Error::UnequalCosts);
    }
    let r = letters.len();
    let n = instance.n();
    let weights = instance.int_weights();

    // Tree nodes: leaves 0..n, then padding, then merged nodes.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut heap = BinaryHeap::new();
    for (i, &w) in weights.iter().enumerate() {
        heap.push(Reverse((w as u128, i)));
    }
    let mut count = n.max(2);
    while !(count - 1).is_multiple_of(r - 1) {
        count += 1;
    }
    for _ in n..count {
        let id = children.len();
        children.push(Vec::new());
        heap.push(Reverse((0, id)));
    }
    let mut nodes = 0u64;
    while heap.len() > 1 {
        let mut total = 0u128;
        let mut kids = Vec::with_capacity(r);
        for _ in 0..r {
            let Reverse((w, id)) = heap.pop().expect("padded to a full tree");
            total += w;
            kids.push(id);
        }
        kids.reverse();
        let id = children.len();
        children.push(kids);
        heap.push(Reverse((total, id)));
        nodes += 1;
    }
    let root = heap.pop().expect("nonempty").0 .1;

    let mut codes = vec![Codeword::new(); n];
    let mut stack = vec![(root, Codeword::new())];
    while let Some((node, path)) = stack.pop() {
        if node < n {
            codes[node] = path;
            continue;
        }
        for (letter, &child) in children[node].iter().enumerate() {
            let mut next = path.clone();
            next.push(letter as Letter);
            stack.push((child, next));
        }
    }
    let depth_total: u128 = weights
        .iter()
        .zip(&codes)
        .map(|(&w, c)| w as u128 * c.len() as u128)
        .sum();
    let optimal_cost = rational::from_u128(depth_total) * letters.cost(0) * instance.weight_unit();
    Ok(OracleResult {
        optimal_cost,
        optimal_code: reorder(&CodeAssignment::new(codes), letters),
        nodes_explored: nodes,
    })
}

/// `1 - p_1`: every codeword but at most one contains a letter of cost at
/// least `l_2`, so with `l_2 = 1` no code is cheaper than this.
pub fn lower_bound(instance: &Instance) -> Rational {
    Rational::from_integer(1.into()) - instance.probability(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codeword::code_cost;
    use crate::rational::{int, ratio};
    use crate::trie::is_prefix_free;

    fn inst(weights: &[i64], costs: &[i64]) -> Instance {
        Instance::from_integers(weights, costs, ratio(1, 4)).unwrap()
    }

    #[test]
    fn four_word_optima() {
        let eq = exact_optimal(&inst(&[2, 2, 1, 1], &[1, 1]), 8).unwrap();
        assert_eq!(eq.optimal_cost, int(12));
        let tel = exact_optimal(&inst(&[2, 2, 1, 1], &[1, 3]), 8).unwrap();
        assert_eq!(tel.optimal_cost, int(21));
        let mut words: Vec<String> = tel
            .optimal_code
            .codewords()
            .iter()
            .map(|c| c.to_string())
            .collect();
        words.sort();
        assert_eq!(words, ["aaa", "aab", "ab", "b"]);
        assert!(is_prefix_free(tel.optimal_code.codewords()));
    }

    #[test]
    fn single_word() {
        let i = inst(&[5], &[2, 3]);
        let r = exact_optimal(&i, 2).unwrap();
        assert_eq!(r.optimal_cost, int(10));
        assert_eq!(r.optimal_code.codewords()[0].to_string(), "a");
    }

    #[test]
    fn refuses_large_instances() {
        let i = inst(&[1; 11], &[1, 1]);
        assert_eq!(
            exact_optimal(&i, 22).unwrap_err(),
            Error::TooLarge { n: 11, limit: 10 }
        );
    }

    #[test]
    fn huffman_examples() {
        let r = huffman_equal_costs(&inst(&[2, 2, 1, 1], &[1, 1])).unwrap();
        assert_eq!(r.optimal_cost, int(12));
        let half = huffman_equal_costs(&inst(&[1, 1], &[1, 1])).unwrap();
        assert_eq!(half.optimal_cost / int(2), int(1));
        let quad = huffman_equal_costs(&inst(&[1, 1, 1, 1], &[1, 1, 1, 1])).unwrap();
        assert_eq!(quad.optimal_cost, int(4));
        assert!(quad.optimal_code.codewords().iter().all(|c| c.len() == 1));
        assert_eq!(
            huffman_equal_costs(&inst(&[1, 1], &[1, 2])).unwrap_err(),
            Error::UnequalCosts
        );
    }

    #[test]
    fn huffman_code_matches_its_cost() {
        let i = inst(&[7, 5, 3, 3, 2, 1], &[2, 2, 2]);
        let r = huffman_equal_costs(&i).unwrap();
        assert_eq!(code_cost(&r.optimal_code, &i).unwrap(), r.optimal_cost);
        assert!(is_prefix_free(r.optimal_code.codewords()));
    }

    #[test]
    fn lower_bound_examples() {
        let i = Instance::from_integers(&[2, 1, 1], &[1, 1], int(1)).unwrap();
        assert_eq!(lower_bound(&i), ratio(1, 2));
        let one = Instance::from_integers(&[3], &[1, 1], int(1)).unwrap();
        assert_eq!(lower_bound(&one), int(0));
        assert_eq!(lower_bound(&inst(&[2, 2, 1, 1], &[1, 3])), ratio(2, 3));
    }
}
