//! Minimum-cost leveled k-prefix codes for a fixed number of codewords per level.

use std::fmt;

use crate::codeword::{CodeAssignment, Codeword};
use crate::cost_graph::{extend_counts, Capped, CostGraph, FreeStringTable, StringCount};
use crate::instance::CostGrid;

/// Level-0 codeword size and codeword count per level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Guess {
    /// The level-0 codeword is `a^f0`; 0 means there is none.
    pub f0: u64,
    /// `levels[i - 1]` codewords on level `i`.
    pub levels: Vec<u64>,
}

impl Guess {
    pub fn new(f0: u64, levels: Vec<u64>) -> Self {
        Guess { f0, levels }
    }

    /// Codewords fixed by the guess, the level-0 one included.
    pub fn placed(&self) -> u64 {
        self.levels.iter().sum::<u64>() + u64::from(self.f0 > 0)
    }
}

/// Why a guess admits no leveled code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inconsistent {
    /// Fewer free strings at the level cost than the guess asks for.
    Level { level: usize, available: u64, wanted: u64 },
    /// Not enough strings of cost `>= k` to finish the code.
    Tail { found: u64, wanted: u64 },
    /// The guess does not fit the graph or the word count.
    Malformed(String),
}

impl fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inconsistent::Level {
                level,
                available,
                wanted,
            } => write!(f, "level {level} has {available} free strings, {wanted} wanted"),
            Inconsistent::Tail { found, wanted } => {
                write!(f, "only {found} of {wanted} tail strings exist")
            }
            Inconsistent::Malformed(why) => write!(f, "malformed guess: {why}"),
        }
    }
}

/// Where a codeword of a leveled code sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Level(usize),
    Tail,
}

/// A leveled k-prefix code; word `j` (in decreasing weight order) gets
/// `codewords[j]`, and codeword costs are nondecreasing.
#[derive(Debug, Clone)]
pub struct LeveledCode {
    codewords: Vec<Codeword>,
    costs: Vec<u64>,
    placement: Vec<Placement>,
    k_units: u64,
    work: u64,
}

impl LeveledCode {
    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    /// Codeword costs in grid units.
    pub fn costs(&self) -> &[u64] {
        &self.costs
    }

    pub fn placement(&self) -> &[Placement] {
        &self.placement
    }

    pub fn k_units(&self) -> u64 {
        self.k_units
    }

    /// Elementary steps spent building the code.
    pub fn work(&self) -> u64 {
        self.work
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Expected cost in grid units times integer weights.
    pub fn cost_units(&self, int_weights: &[u64]) -> u128 {
        int_weights
            .iter()
            .zip(&self.costs)
            .map(|(&w, &c)| w as u128 * c as u128)
            .sum()
    }

    pub fn to_assignment(&self) -> CodeAssignment {
        CodeAssignment::new(self.codewords.clone())
    }
}

/// Builds the cheapest leveled k-prefix code with `n` codewords that follows
/// `guess`: `a^f0` on level 0 if `f0 > 0`, `levels[i-1]` codewords of cost
/// `level_top(i)` on each level, and the cheapest strings of cost `>= k`
/// with no prefix of cost `< k` in the code for the rest.
pub fn construct_leveled(
    graph: &CostGraph,
    guess: &Guess,
    n: usize,
) -> Result<LeveledCode, Inconsistent> {
    let grid = graph.grid();
    let levels = graph.level_count();
    if guess.levels.len() != levels {
        return Err(Inconsistent::Malformed(format!(
            "{} level counts for {levels} levels",
            guess.levels.len()
        )));
    }
    if guess.placed() > n as u64 {
        return Err(Inconsistent::Malformed(format!(
            "{} codewords placed for {n} words",
            guess.placed()
        )));
    }
    let zero_cost = guess.f0.checked_mul(grid.cheapest());
    if guess.f0 > 0 && zero_cost.is_none_or(|c| c >= grid.one) {
        return Err(Inconsistent::Malformed(format!(
            "a^{} does not cost less than 1",
            guess.f0
        )));
    }

    let k = graph.k_units();
    let mut table = FreeStringTable::<Capped>::with_capacity(k);
    let zero_at = if guess.f0 > 0 { zero_cost } else { None };
    let mut next_level = 1usize;
    for x in 0..k {
        let pre = table.push_next(graph.distinct());
        if Some(x) == zero_at {
            table.take_prefix(1);
        }
        if next_level <= levels && x == graph.level_top(next_level) {
            let wanted = guess.levels[next_level - 1];
            if pre < Capped(wanted) {
                return Err(Inconsistent::Level {
                    level: next_level,
                    available: pre.0,
                    wanted,
                });
            }
            table.take_prefix(wanted);
            next_level += 1;
        }
    }

    let tail = n as u64 - guess.placed();
    let batches = extend_counts(graph, &mut table, tail).map_err(|s| Inconsistent::Tail {
        found: s.found,
        wanted: s.wanted,
    })?;

    let mut codewords = Vec::with_capacity(n);
    let mut costs = Vec::with_capacity(n);
    let mut placement = Vec::with_capacity(n);
    if let Some(x) = zero_at {
        codewords.push(Codeword::repeat(0, guess.f0));
        costs.push(x);
        placement.push(Placement::Level(0));
    }
    for (i, &f) in guess.levels.iter().enumerate() {
        let level = i + 1;
        let top = graph.level_top(level);
        codewords.extend(select_level_codewords(&mut table, grid, top, f));
        costs.extend(std::iter::repeat_n(top, f as usize));
        placement.extend(std::iter::repeat_n(Placement::Level(level), f as usize));
    }
    for (x, count) in batches {
        for j in 0..count {
            codewords.push(table.unrank(grid, x, Capped(j)));
            costs.push(x);
            placement.push(Placement::Tail);
        }
    }
    Ok(LeveledCode {
        codewords,
        costs,
        placement,
        k_units: k,
        work: table.work(),
    })
}

/// The first `count` strings in canonical order among those of cost `top` that
/// were free before this level's codewords were removed.
pub fn select_level_codewords<C: StringCount>(
    table: &mut FreeStringTable<C>,
    grid: &CostGrid,
    top: u64,
    count: u64,
) -> Vec<Codeword> {
    (0..count)
        .map(|j| table.unrank_pre(grid, top, C::from_u64(j)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trie::is_k_prefix_free;
    use crate::instance::LetterCosts;
    use crate::rational::int;

    fn binary(k: u64) -> CostGraph {
        CostGraph::from_grid(CostGrid::from_units(vec![1, 1], 1, 1), k).unwrap()
    }

    fn rendered(code: &LeveledCode) -> Vec<String> {
        let mut out: Vec<String> = code.codewords().iter().map(|c| c.to_string()).collect();
        out.sort();
        out
    }

    #[test]
    fn three_words_binary() {
        let g = binary(3);
        let code = construct_leveled(&g, &Guess::new(0, vec![1, 2]), 3).unwrap();
        assert_eq!(rendered(&code), ["a", "ba", "bb"]);
        assert_eq!(code.costs(), &[1, 2, 2]);
    }

    #[test]
    fn fourth_word_has_no_room() {
        let g = binary(3);
        assert_eq!(
            construct_leveled(&g, &Guess::new(0, vec![1, 2]), 4).unwrap_err(),
            Inconsistent::Tail {
                found: 0,
                wanted: 1
            }
        );
    }

    #[test]
    fn two_words_on_first_level() {
        let g = binary(3);
        let code = construct_leveled(&g, &Guess::new(0, vec![2, 0]), 2).unwrap();
        assert_eq!(rendered(&code), ["a", "b"]);
    }

    #[test]
    fn level_with_too_few_strings() {
        let g = binary(3);
        assert_eq!(
            construct_leveled(&g, &Guess::new(0, vec![3, 0]), 3).unwrap_err(),
            Inconsistent::Level {
                level: 1,
                available: 2,
                wanted: 3
            }
        );
    }

    #[test]
    fn malformed_guesses() {
        let g = binary(3);
        for guess in [Guess::new(0, vec![1]), Guess::new(0, vec![2, 2]), Guess::new(1, vec![0, 0])] {
            assert!(matches!(
                construct_leveled(&g, &guess, 3),
                Err(Inconsistent::Malformed(_))
            ));
        }
    }

    #[test]
    fn level_selection_takes_the_first_strings() {
        let g = binary(3);
        let mut table = FreeStringTable::<Capped>::with_capacity(3);
        for _ in 0..=2 {
            table.push_next(g.distinct());
        }
        let mut picked: Vec<String> = select_level_codewords(&mut table, g.grid(), 2, 3)
            .iter()
            .map(|c| c.to_string())
            .collect();
        picked.sort();
        assert_eq!(picked, ["aa", "ab", "ba"]);
        assert!(select_level_codewords(&mut table, g.grid(), 2, 0).is_empty());
    }

    #[test]
    fn level_zero_codeword() {
        // l = (1/4, 1) on a grid of quarters, eps = 1/4, k = 2.
        let g = CostGraph::from_grid(CostGrid::from_units(vec![1, 4], 4, 1), 8).unwrap();
        let mut levels = vec![0; g.level_count()];
        levels[0] = 1;
        let code = construct_leveled(&g, &Guess::new(2, levels), 3).unwrap();
        assert_eq!(code.codewords()[0].to_string(), "aa");
        assert_eq!(code.placement()[0], Placement::Level(0));
        // No other codeword is a run of a's.
        assert!(code.codewords()[1..].iter().all(|c| c.count(1) > 0));
        let letters = LetterCosts::new(vec![crate::rational::ratio(1, 4), int(1)]).unwrap();
        assert!(is_k_prefix_free(code.codewords(), &letters, &int(2)));
    }
}
