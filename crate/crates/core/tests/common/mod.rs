//! Brute-force reference implementations and instance generators shared by
//! the integration tests. Nothing here uses the library's counting machinery.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use ulcode_core::rational::{int, ratio, Rational};
use ulcode_core::{Codeword, Instance, Letter};

/// Every string (as letter vectors) of cost at most `max_cost` units.
pub fn strings_up_to(units: &[u64], max_cost: u64) -> Vec<(Vec<Letter>, u64)> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), 0u64)];
    while let Some((s, c)) = stack.pop() {
        for (letter, &u) in units.iter().enumerate() {
            if c + u <= max_cost {
                let mut next = s.clone();
                next.push(letter as Letter);
                stack.push((next, c + u));
            }
        }
        out.push((s, c));
    }
    out
}

pub fn has_prefix_in(s: &[Letter], set: &[Vec<Letter>]) -> bool {
    set.iter().any(|p| p.len() <= s.len() && s[..p.len()] == p[..])
}

/// `v[x]` for `x <= max_cost`: strings of cost `x` with no prefix in `set`.
pub fn brute_free_counts(units: &[u64], set: &[Vec<Letter>], max_cost: u64) -> Vec<u64> {
    let mut v = vec![0u64; max_cost as usize + 1];
    for (s, c) in strings_up_to(units, max_cost) {
        if !has_prefix_in(&s, set) {
            v[c as usize] += 1;
        }
    }
    v
}

pub fn to_letters(c: &Codeword) -> Vec<Letter> {
    c.letters().collect()
}

pub fn cost_units(s: &[Letter], units: &[u64]) -> u64 {
    s.iter().map(|&l| units[l as usize]).sum()
}

/// Pairwise check: no codeword of cost below `k_units` is a prefix of another;
/// duplicates always fail.
pub fn brute_k_prefix_free(words: &[Vec<Letter>], units: &[u64], k_units: u64) -> bool {
    for (i, p) in words.iter().enumerate() {
        for (j, s) in words.iter().enumerate() {
            if i == j {
                continue;
            }
            if p == s {
                return false;
            }
            if cost_units(p, units) < k_units && p.len() <= s.len() && s[..p.len()] == p[..] {
                return false;
            }
        }
    }
    true
}

pub fn brute_prefix_free(words: &[Vec<Letter>]) -> bool {
    brute_k_prefix_free(words, &vec![0; 64], 1)
}

/// Sum of weight times cost with the heaviest weights on the cheapest costs.
pub fn ordered_cost(weights: &[u64], costs: &[u64]) -> u128 {
    let mut w = weights.to_vec();
    w.sort_unstable_by(|a, b| b.cmp(a));
    let mut c = costs.to_vec();
    c.sort_unstable();
    w.iter().zip(&c).map(|(&a, &b)| a as u128 * b as u128).sum()
}

/// All `count`-subsets of `0..len`, in lexicographic order.
pub fn subsets(len: usize, count: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, count: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == count {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            if len - i < count - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, len, count, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, count, &mut Vec::new(), &mut out);
    out
}

/// Random instance from the approximation-suite distribution: `2 <= n <= 8`,
/// `r <= 3`, integer costs up to 4, integer weights up to 20.
pub fn random_small_instance(rng: &mut StdRng, epsilon: Rational) -> Instance {
    let n = rng.gen_range(2..=8);
    let r = rng.gen_range(2..=3);
    let costs: Vec<i64> = (0..r).map(|_| rng.gen_range(1..=4)).collect();
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
    let mut costs = costs;
    costs.sort_unstable();
    let mut weights = weights;
    weights.sort_unstable_by(|a, b| b.cmp(a));
    Instance::from_integers(&weights, &costs, epsilon).unwrap()
}

/// Random instance with `l_1 / l_2 <= epsilon / n`.
pub fn random_tiny_instance(rng: &mut StdRng, epsilon: Rational) -> Instance {
    let n: i64 = rng.gen_range(2..=8);
    let r = rng.gen_range(2..=3);
    let eps_f = ulcode_core::rational::to_f64(&epsilon);
    let min_l2 = (n as f64 / eps_f).ceil() as i64;
    let mut costs = vec![1];
    for _ in 1..r {
        costs.push(rng.gen_range(min_l2..=min_l2 + 20));
    }
    costs.sort_unstable();
    let mut weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
    weights.sort_unstable_by(|a, b| b.cmp(a));
    Instance::from_integers(&weights, &costs, epsilon).unwrap()
}

pub fn suite_epsilons() -> [Rational; 3] {
    [ratio(1, 5), ratio(3, 10), ratio(1, 2)]
}

pub fn one() -> Rational {
    int(1)
}
